"""Dense complex linear algebra primitives used by every other module.

Conventions, fixed once for the whole toolkit:

* matrices are square ``complex128`` ndarrays;
* composite registers are row-major: in a product of registers
  ``(d_1, ..., d_r)`` the leftmost register is the most significant index;
* tolerances scale with dimension: ``tol(d) = 1e-10 * d``, compared against
  raw Frobenius-norm defects;
* indices are 0-based in code, 1-based in documentation and CLI output.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError

TOL_SCALE = 1e-10


def tol(dim: int) -> float:
    """Default numerical tolerance for matrices of the given dimension."""
    return TOL_SCALE * dim


def rng_from_seed(seed: int) -> np.random.Generator:
    """Counter-based PRNG (Philox) seeded explicitly; no global state."""
    return np.random.Generator(np.random.Philox(seed))


def as_matrix(M: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex matrix, rejecting anything else."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {A.shape}")
    return A


def check_register_dims(dims: Sequence[int], dim: int) -> tuple[int, ...]:
    """Validate register dimensions against the ambient matrix dimension."""
    ds = tuple(int(d) for d in dims)
    if not ds or any(d < 1 for d in ds):
        raise DimensionMismatchError(f"register dims must be positive, got {ds}")
    if int(np.prod(ds)) != dim:
        raise DimensionMismatchError(
            f"register dims {ds} have product {int(np.prod(ds))}, expected {dim}"
        )
    return ds


def dag(M: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(M).T


def matrix_unit(d: int, i: int, j: int) -> np.ndarray:
    """E_ij: single 1 at row i, column j (0-based)."""
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1.0
    return E


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product; out[(i*dB+k),(j*dB+l)] = A[i,j] * B[k,l]."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def partial_trace(M: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every register not listed in ``keep``.

    Kept registers stay in their original relative order; the trace of the
    result equals the trace of the input.
    """
    A = as_matrix(M)
    ds = check_register_dims(dims, A.shape[0])
    r = len(ds)
    kept = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= r for k in kept):
        raise DimensionMismatchError(f"keep indices {kept} out of range for {r} registers")
    traced = [i for i in range(r) if i not in kept]
    dk = int(np.prod([ds[i] for i in kept])) if kept else 1
    dt = int(np.prod([ds[i] for i in traced])) if traced else 1
    axes = kept + traced + [r + i for i in kept] + [r + i for i in traced]
    X = A.reshape(ds + ds).transpose(axes).reshape(dk, dt, dk, dt)
    return np.einsum("atbt->ab", X)


def permute_registers(M: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Conjugate by the register permutation: output register j is input register perm[j]."""
    A = as_matrix(M)
    ds = check_register_dims(dims, A.shape[0])
    r = len(ds)
    p = tuple(int(i) for i in perm)
    if sorted(p) != list(range(r)):
        raise DimensionMismatchError(f"perm {p} is not a bijection on {r} registers")
    axes = list(p) + [r + i for i in p]
    return A.reshape(ds + ds).transpose(axes).reshape(A.shape)


def hermiticity_defect(M: np.ndarray) -> float:
    """Frobenius norm of M - M^dag."""
    A = as_matrix(M)
    return float(np.linalg.norm(A - dag(A)))


def unitarity_defect(M: np.ndarray) -> float:
    """Frobenius norm of M^dag M - I."""
    A = as_matrix(M)
    return float(np.linalg.norm(dag(A) @ A - np.eye(A.shape[0])))


def is_hermitian(M: np.ndarray, tol_abs: float | None = None) -> bool:
    A = as_matrix(M)
    t = tol(A.shape[0]) if tol_abs is None else tol_abs
    return hermiticity_defect(A) <= t * max(1.0, float(np.linalg.norm(A)))


def is_unitary(M: np.ndarray, tol_abs: float | None = None) -> bool:
    A = as_matrix(M)
    t = tol(A.shape[0]) if tol_abs is None else tol_abs
    return unitarity_defect(A) <= t * max(1.0, float(np.linalg.norm(A)))


def is_psd(M: np.ndarray, tol_abs: float | None = None) -> bool:
    A = as_matrix(M)
    t = tol(A.shape[0]) if tol_abs is None else tol_abs
    scale = max(1.0, float(np.linalg.norm(A)))
    if hermiticity_defect(A) > t * scale:
        return False
    w = np.linalg.eigvalsh((A + dag(A)) / 2)
    return bool(w[0] >= -t * scale)


def herm_eig(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (H + H^dag)/2 first; inputs that are not
    Hermitian within tolerance are rejected.  Returns eigenvalues in
    ascending order and a unitary eigenvector matrix Q with H = Q diag(w) Q^dag.
    """
    A = as_matrix(H)
    d = A.shape[0]
    if hermiticity_defect(A) > tol(d) * max(1.0, float(np.linalg.norm(A))):
        raise DomainError(
            f"matrix is not hermitian within tolerance (defect {hermiticity_defect(A):.3e})"
        )
    w, Q = np.linalg.eigh((A + dag(A)) / 2)
    return w, Q


def haar_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-distributed d x d unitary, deterministic for a fixed seed.

    Ginibre sample followed by QR with the R diagonal phase-fixed, which
    makes the distribution exactly Haar rather than merely unitary.
    """
    if d < 1:
        raise DimensionMismatchError(f"dimension must be positive, got {d}")
    return haar_unitary_from(rng_from_seed(seed), d)


def haar_unitary_from(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary drawn from an existing generator."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R).copy()
    ph /= np.abs(ph)
    return Q * ph


def haar_state_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-random unit vector of length d."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def wishart_density(rng: np.random.Generator, d: int) -> np.ndarray:
    """Full-rank random density matrix G G^dag / Tr(G G^dag), G Ginibre."""
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    W = G @ dag(G)
    return W / np.trace(W).real


def swap_matrix(da: int, db: int) -> np.ndarray:
    """Unitary mapping the register pair (a, b) to (b, a)."""
    S = np.zeros((da * db, da * db), dtype=complex)
    for a in range(da):
        for b in range(db):
            S[b * da + a, a * db + b] = 1.0
    return S

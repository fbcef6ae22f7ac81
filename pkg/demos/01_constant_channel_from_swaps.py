"""Swap couplings turn the mediating state into the channel output.

Couple each ancilla to its local system with a swap unitary and the induced
channel forgets its input entirely: every density matrix is mapped to the
state the mediating pair was prepared in.  This is the simplest member of
the channel families the toolkit studies, and a sharp correctness probe
because the identity L(rho) = rho_target must hold to machine precision.
"""

import numpy as np

from uichan import TensorModel, channel_direct, linalg

n = 3
rng = linalg.rng_from_seed(2024)

rho_target = linalg.wishart_density(rng, n * n)
swap = linalg.swap_matrix(n, n)
model = TensorModel(n=n, m=1, dA=n, dB=n, state=rho_target, U=(swap,), V=(swap,))

channel = channel_direct(model)

print(f"ancilla dimension n = {n}; mediating state = target state on {n}x{n}")
worst = 0.0
for trial in range(5):
    rho_in = linalg.wishart_density(rng, n * n)
    out = channel.apply_to(rho_in, 0, 0)
    defect = np.max(np.abs(out - rho_target))
    worst = max(worst, defect)
    print(f"  input {trial}: max |L(rho) - rho_target| = {defect:.3e}")

print(f"worst defect over 5 random inputs: {worst:.3e}")
assert worst < 1e-12
print("the swap-coupled channel is constant, as it must be")

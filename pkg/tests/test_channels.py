import numpy as np
import pytest
from numpy.testing import assert_allclose

from uichan import linalg
from uichan.channels import (ChannelFamily, MomentTable, apply, channel_direct,
                             channel_from_moments, choi, cptp_report, moment_table,
                             moments_from_channel)
from uichan.errors import DimensionMismatchError, DomainError, InvalidModelError
from uichan.models import (CommutingModel, TensorModel, embed_tensor_as_commuting,
                           random_model, random_tensor_model)


def identity_model(n, dA, dB, seed=0):
    rng = linalg.rng_from_seed(seed)
    return TensorModel(n=n, m=1, dA=dA, dB=dB, state=linalg.wishart_density(rng, dA * dB),
                       U=(np.eye(n * dA),), V=(np.eye(dB * n),))


def swap_model(n, seed=0):
    rng = linalg.rng_from_seed(seed)
    swap = linalg.swap_matrix(n, n)
    rho_target = linalg.wishart_density(rng, n * n)
    return TensorModel(n=n, m=1, dA=n, dB=n, state=rho_target, U=(swap,), V=(swap,)), rho_target


def family_max_diff(a: ChannelFamily, b: ChannelFamily) -> float:
    return max(float(np.max(np.abs(a.supers[x][y] - b.supers[x][y])))
               for x in range(a.m) for y in range(a.m))


def delta_tensor(n):
    eye = np.eye(n)
    return np.einsum("ij,lk,pr,ts->ijlkprts", eye, eye, eye, eye)


class TestChannelDirect:
    def test_identity_couplings_give_identity_channel(self):
        for n, dA, dB in [(2, 2, 2), (3, 2, 3)]:
            fam = channel_direct(identity_model(n, dA, dB))
            assert_allclose(fam.supers[0][0], np.eye(n ** 4), atol=1e-12)

    def test_swap_constant_channel(self):
        # swap couplings a fixed target onto the ancilla pair: L(rho) = rho_target
        for n in (2, 3):
            model, rho_target = swap_model(n, seed=n)
            fam = channel_direct(model)
            rng = linalg.rng_from_seed(100 + n)
            for _ in range(10):
                rho_in = linalg.wishart_density(rng, n * n)
                assert np.max(np.abs(fam.apply_to(rho_in, 0, 0) - rho_target)) <= 1e-12

    def test_matches_moment_route(self):
        tm = random_tensor_model(2, 2, 2, 2, seed=20)
        assert family_max_diff(channel_direct(tm), channel_from_moments(moment_table(tm))) <= 1e-10

    def test_matches_per_unit_sandwich_oracle(self):
        # oracle: feed each matrix unit through the sandwich one by one
        tm = random_tensor_model(2, 1, 2, 3, seed=21)
        fam = channel_direct(tm)
        n, dA, dB = tm.n, tm.dA, tm.dB
        W = linalg.kron(tm.U[0], tm.V[0])
        sigma = tm.density()
        for row in range(n * n):
            for col in range(n * n):
                E = np.zeros((n * n, n * n), dtype=complex)
                E[row, col] = 1.0
                X = linalg.permute_registers(linalg.kron(E, sigma), (n, n, dA, dB), (0, 2, 3, 1))
                out = linalg.partial_trace(W.conj().T @ X @ W, (n, dA, dB, n), [0, 3])
                assert_allclose(fam.supers[0][0][:, row * n * n + col],
                                out.reshape(-1), atol=1e-13)

    def test_commuting_direct(self):
        cm = random_model("commuting", 2, 2, 2, 2, seed=22)
        fam = channel_direct(cm)
        assert cptp_report(fam).accepted

    def test_invalid_model_rejected(self):
        tm = random_tensor_model(2, 1, 2, 2, seed=23)
        U = np.array(tm.U[0])
        U[0, 0] += 0.2
        broken = TensorModel(n=2, m=1, dA=2, dB=2, state=tm.state, U=(U,), V=tm.V)
        with pytest.raises(InvalidModelError):
            channel_direct(broken)

    def test_noncommuting_model_rejected(self):
        rng = linalg.rng_from_seed(24)
        cm = CommutingModel(n=2, m=1, d=4, state=linalg.haar_state_vector(rng, 4),
                            U=(linalg.haar_unitary_from(rng, 8),),
                            V=(linalg.haar_unitary_from(rng, 8),))
        with pytest.raises(InvalidModelError):
            channel_direct(cm)

    def test_n_guard(self):
        tm = random_tensor_model(5, 1, 1, 1, seed=25)
        with pytest.raises(DomainError):
            channel_direct(tm)
        channel_direct(tm, max_n=5)  # override works


class TestMomentTable:
    def test_identity_model_delta_tensor(self):
        tab = moment_table(identity_model(2, 2, 2))
        assert_allclose(tab.tables[0][0], delta_tensor(2), atol=1e-12)

    def test_n1_normalization(self):
        tm = random_tensor_model(1, 1, 3, 2, seed=26)
        tab = moment_table(tm)
        assert_allclose(tab.tables[0][0].reshape(()), 1.0, atol=1e-12)

    def test_contraction_invariants(self):
        for seed in range(3):
            tm = random_tensor_model(2, 2, 2, 3, seed=seed)
            defects = moment_table(tm).contraction_defects()
            assert max(defects.values()) <= 1e-10

    def test_conjugate_symmetry(self):
        tm = random_tensor_model(3, 1, 2, 2, seed=27)
        assert moment_table(tm).conjugate_symmetry_defect() <= 1e-10

    def test_tensor_vs_embedded_tables_agree(self):
        tm = random_tensor_model(2, 2, 2, 3, seed=28)
        ta = moment_table(tm)
        tb = moment_table(embed_tensor_as_commuting(tm))
        for x in range(2):
            for y in range(2):
                assert np.max(np.abs(ta.tables[x][y] - tb.tables[x][y])) <= 1e-12


class TestMomentChannelRoundTrips:
    def test_identity_table_gives_identity_channel(self):
        tab = MomentTable(n=2, m=1, tables=((delta_tensor(2),),))
        fam = channel_from_moments(tab)
        assert_allclose(fam.supers[0][0], np.eye(16), atol=0)

    def test_swap_table_gives_constant_channel(self):
        model, rho_target = swap_model(2, seed=3)
        fam = channel_from_moments(moment_table(model))
        rng = linalg.rng_from_seed(31)
        for _ in range(5):
            rho_in = linalg.wishart_density(rng, 4)
            assert np.max(np.abs(fam.apply_to(rho_in, 0, 0) - rho_target)) <= 1e-12

    def test_table_channel_table(self):
        tm = random_tensor_model(2, 2, 2, 2, seed=32)
        tab = moment_table(tm)
        back = moments_from_channel(channel_from_moments(tab))
        for x in range(2):
            for y in range(2):
                assert np.max(np.abs(tab.tables[x][y] - back.tables[x][y])) <= 1e-10

    def test_channel_table_channel(self):
        tm = random_tensor_model(2, 1, 2, 3, seed=33)
        fam = channel_direct(tm)
        again = channel_from_moments(moments_from_channel(fam))
        assert family_max_diff(fam, again) <= 1e-10

    def test_asymmetric_table_rejected(self):
        T = delta_tensor(2).astype(complex)
        T[0, 1, 1, 0, 0, 0, 0, 0] = 0.5  # breaks conjugate symmetry
        with pytest.raises(DomainError):
            channel_from_moments(MomentTable(n=2, m=1, tables=((T,),)))

    def test_recovered_moments_match_state_expectations(self):
        # diagonal moments of a lifted strategy equal <psi| u_j u_k^dag x v_r v_s^dag |psi>
        from uichan.bell import chsh_optimal_strategy, unitaries_from_pvm
        from uichan.models import diagonal_fourier_lift
        alice, bob, psi = chsh_optimal_strategy()
        lift = diagonal_fourier_lift(alice, bob, psi)
        tab = moments_from_channel(channel_direct(lift))
        us, vs = unitaries_from_pvm(alice), unitaries_from_pvm(bob)
        for x in range(2):
            for y in range(2):
                for j in range(2):
                    for k in range(2):
                        for r in range(2):
                            for s in range(2):
                                op = linalg.kron(us[x][j] @ us[x][k].conj().T,
                                                 vs[y][r] @ vs[y][s].conj().T)
                                expected = np.conj(psi) @ op @ psi
                                got = tab.tables[x][y][j, j, k, k, r, r, s, s]
                                assert abs(expected - got) <= 1e-10


class TestChoiAndAudit:
    def test_identity_choi(self):
        fam = channel_direct(identity_model(2, 2, 2))
        J = choi(fam)[0][0]
        # J = sum_ab E_ab x E_ab: rank one with eigenvalue n^2 = 4
        w = np.linalg.eigvalsh((J + J.conj().T) / 2)
        assert_allclose(w[-1], 4.0, atol=1e-12)
        assert np.max(np.abs(w[:-1])) <= 1e-12
        rep = cptp_report(fam)
        assert rep.min_choi_eigenvalue >= -1e-12
        assert rep.trace_defect <= 1e-12

    def test_swap_choi_is_identity_tensor_target(self):
        model, rho_target = swap_model(2, seed=7)
        J = choi(channel_direct(model))[0][0]
        assert_allclose(J, linalg.kron(np.eye(4), rho_target), atol=1e-12)

    def test_random_models_pass_audit(self):
        for seed in range(8):
            kind = "tensor" if seed % 2 == 0 else "commuting"
            model = random_model(kind, 2, 2, 2, 2, state="density" if seed % 3 else "vector",
                                 seed=seed)
            rep = cptp_report(channel_direct(model))
            assert rep.min_choi_eigenvalue >= -1e-9
            assert rep.trace_defect <= 1e-10


class TestApply:
    def test_identity_family(self):
        fam = channel_direct(identity_model(2, 2, 2, seed=41))
        rng = linalg.rng_from_seed(42)
        rho = linalg.wishart_density(rng, 4)
        outs = apply(fam, rho)
        assert_allclose(outs[0][0], rho, atol=1e-12)

    def test_swap_family_constant(self):
        model, rho_target = swap_model(2, seed=43)
        fam = channel_direct(model)
        rng = linalg.rng_from_seed(44)
        outs = apply(fam, linalg.wishart_density(rng, 4))
        assert_allclose(outs[0][0], rho_target, atol=1e-12)

    def test_maximally_mixed_outputs_unit_trace(self):
        tm = random_tensor_model(2, 2, 2, 2, seed=45)
        outs = apply(channel_direct(tm), np.eye(4) / 4)
        for row in outs:
            for out in row:
                assert abs(np.trace(out) - 1.0) <= 1e-12

    def test_rejects_non_state(self):
        fam = channel_direct(identity_model(2, 2, 2))
        with pytest.raises(DomainError):
            apply(fam, np.diag([1.0, 1.0, -0.5, -0.5]))
        with pytest.raises(DimensionMismatchError):
            apply(fam, np.eye(3) / 3)


class TestEmbeddingInvariance:
    def test_channels_agree(self):
        for seed in range(5):
            tm = random_tensor_model(2, 2, 2, 3 if seed % 2 else 2, seed=seed)
            assert family_max_diff(channel_direct(tm),
                                   channel_direct(embed_tensor_as_commuting(tm))) <= 1e-12

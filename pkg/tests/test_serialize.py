import json

import numpy as np
import pytest

from uichan import linalg, serialize
from uichan.bell import Behaviour, chsh_optimal_strategy
from uichan.channels import channel_direct
from uichan.models import random_model, random_tensor_model
from uichan.serialize import SchemaError


class TestMatrixRoundTrip:
    def test_matrix_exact(self):
        M = linalg.haar_unitary(3, seed=5)
        back = serialize.matrix_from_json(json.loads(json.dumps(serialize.matrix_to_json(M))))
        assert np.array_equal(M, back)

    def test_vector_exact(self):
        v = linalg.haar_state_vector(linalg.rng_from_seed(6), 5)
        back = serialize.matrix_from_json(json.loads(json.dumps(serialize.matrix_to_json(v))))
        assert back.ndim == 1
        assert np.array_equal(v, back)

    def test_bad_documents(self):
        with pytest.raises(SchemaError):
            serialize.matrix_from_json({"dim": 2, "re": [1, 0], "im": [0]})
        with pytest.raises(SchemaError):
            serialize.matrix_from_json({"dim": 2, "re": [1, 0, 0], "im": [0, 0, 0]})
        with pytest.raises(SchemaError):
            serialize.matrix_from_json({"re": [1], "im": [0]})


class TestModelRoundTrip:
    def test_tensor_vector_state(self):
        tm = random_tensor_model(2, 2, 2, 3, seed=7)
        back = serialize.model_from_json(serialize.model_to_json(tm))
        assert back.n == tm.n and back.dA == tm.dA and back.dB == tm.dB
        assert np.array_equal(back.state, tm.state)
        for x in range(2):
            assert np.array_equal(back.U[x], tm.U[x])
            assert np.array_equal(back.V[x], tm.V[x])

    def test_tensor_density_state(self):
        tm = random_tensor_model(2, 1, 2, 2, state="density", seed=8)
        back = serialize.model_from_json(serialize.model_to_json(tm))
        assert back.state.ndim == 2
        assert np.array_equal(back.state, tm.state)

    def test_commuting(self):
        cm = random_model("commuting", 2, 2, 2, 2, seed=9)
        back = serialize.model_from_json(serialize.model_to_json(cm))
        assert back.d == cm.d
        assert np.array_equal(back.U[1], cm.U[1])

    def test_scalar_local_dims(self):
        tm = random_tensor_model(2, 1, 1, 1, seed=10)
        back = serialize.model_from_json(serialize.model_to_json(tm))
        assert back.state.ndim == 1 and back.state.shape == (1,)

    def test_unknown_kind(self):
        with pytest.raises(SchemaError):
            serialize.model_from_json({"kind": "other"})


class TestChannelAndBehaviour:
    def test_channel_round_trip(self):
        fam = channel_direct(random_tensor_model(2, 2, 2, 2, seed=11))
        back = serialize.channel_from_json(serialize.channel_to_json(fam))
        for x in range(2):
            for y in range(2):
                assert np.array_equal(back.supers[x][y], fam.supers[x][y])

    def test_behaviour_round_trip(self):
        p = np.full((2, 2, 2, 2), 1.0 / 4)
        b = Behaviour(n=2, m=2, p=p)
        back = serialize.behaviour_from_json(serialize.behaviour_to_json(b))
        assert np.array_equal(back.p, b.p)

    def test_table_shared_schema(self):
        doc = serialize.table_to_json(2, 2, np.zeros((2, 2, 2, 2)))
        t = serialize.table_from_json(doc)
        assert t.shape == (2, 2, 2, 2)
        with pytest.raises(SchemaError):
            serialize.table_from_json({"n": 2, "m": 2, "p": [[0.0]]})


class TestStrategy:
    def test_round_trip(self):
        alice, bob, psi = chsh_optimal_strategy()
        doc = serialize.strategy_to_json(alice, bob, psi)
        a2, b2, psi2 = serialize.strategy_from_json(json.loads(json.dumps(doc)))
        assert np.array_equal(psi2, psi)
        for x in range(2):
            for a in range(2):
                assert np.array_equal(a2.projectors[x][a], alice.projectors[x][a])
                assert np.array_equal(b2.projectors[x][a], bob.projectors[x][a])


class TestDumps:
    def test_deterministic(self):
        doc = serialize.model_to_json(random_tensor_model(2, 1, 2, 2, seed=12))
        assert serialize.dumps(doc) == serialize.dumps(doc)

    def test_digests(self):
        text = serialize.dumps({"a": 1})
        assert len(serialize.sha256_text(text)) == 64

import numpy as np
import pytest

from lucanon.errors import SizeGuard
from lucanon.oracle import OracleOptions, brute_force_lu_distance
from lucanon.rng import random_local_unitaries, random_state
from lucanon.tensor import multi_apply


def test_same_state():
    a = random_state((2, 2, 2), 0)
    dist, w = brute_force_lu_distance(a, a)
    assert dist < 1e-12
    assert w.residual == dist


def test_planted():
    for seed in range(3):
        a = random_state((3, 2, 2), seed)
        b = multi_apply(a, random_local_unitaries(a.dims, seed + 1))
        dist, w = brute_force_lu_distance(a, b)
        assert dist < 1e-9
        assert np.linalg.norm((multi_apply(a, w.unitaries).data - b.data).ravel()) == pytest.approx(dist, abs=1e-15)


def test_ghz_w_floor(ghz, w_state, derived):
    dist, _ = brute_force_lu_distance(ghz, w_state, OracleOptions(restarts=8, seed=1))
    assert dist > 0.1
    assert dist == pytest.approx(derived["ghz_w_oracle_floor"], abs=1e-9)
    # every individual restart stays away from zero as well
    for r in range(8):
        d, _ = brute_force_lu_distance(ghz, w_state, OracleOptions(restarts=1, seed=100 + r))
        assert d > 0.1


def test_fixture_is_closed_form(derived):
    # 2 sin(pi/12) corresponds to the known maximal GHZ-W overlap of sqrt(3)/2
    assert derived["ghz_w_oracle_floor"] == pytest.approx(2 * np.sin(np.pi / 12), abs=1e-9)


def test_size_guard():
    a = random_state((4, 4, 5), 0)
    with pytest.raises(SizeGuard):
        brute_force_lu_distance(a, a)
    # a raised guard lets the same call run
    dist, _ = brute_force_lu_distance(a, a, OracleOptions(max_size=80, restarts=1, max_iters=5))
    assert 0 <= dist <= 2

import numpy as np
import pytest

from lucanon.errors import DimensionMismatch, PreconditionViolated
from lucanon.hosvd import hosvd
from lucanon.phase import integer_row_reduce, solve_phase_symmetry, wrap
from lucanon.rng import SeededStream, random_state
from lucanon.symmetry import symmetry_structure
from lucanon.tensor import StateTensor, multi_apply

from conftest import latin_state


def lsq_phase_residual(a: StateTensor, b: StateTensor, starts: int = 30, seed: int = 0) -> float:
    """Smallest ||diag-phase(a) - b|| found by Gauss-Newton from random starts."""
    dims = a.dims
    idx = np.array(list(np.ndindex(*dims)))
    av, bv = a.data.ravel(), b.data.ravel()
    offsets = np.cumsum([0, *dims])
    design = np.zeros((len(idx), offsets[-1]))
    for n in range(len(dims)):
        design[np.arange(len(idx)), offsets[n] + idx[:, n]] = 1
    rng = np.random.default_rng(seed)
    best = np.inf
    for _ in range(starts):
        th = rng.uniform(0, 2 * np.pi, offsets[-1])
        for _ in range(100):
            z = av * np.exp(1j * (design @ th))
            r = z - bv
            jac = (1j * z)[:, None] * design
            jr = np.vstack([jac.real, jac.imag])
            rr = np.concatenate([r.real, r.imag])
            step, *_ = np.linalg.lstsq(jr, -rr, rcond=None)
            th = th + step
        best = min(best, np.linalg.norm(av * np.exp(1j * (design @ th)) - bv))
    return best


def core(t):
    return hosvd(t).core


def test_identity():
    c = core(random_state((2, 2, 2), 3))
    res = solve_phase_symmetry(c, c)
    assert res.found
    for th in res.phases:
        np.testing.assert_allclose(th, 0, atol=1e-12)


def test_global_phase():
    c = core(random_state((2, 2, 2), 4))
    shifted = StateTensor(np.exp(1j * np.pi / 3) * c.data)
    res = solve_phase_symmetry(c, shifted)
    np.testing.assert_allclose(res.phases[0], np.pi / 3, atol=1e-10)
    for th in res.phases[1:]:
        np.testing.assert_allclose(th, 0, atol=1e-10)
    assert res.residual < 1e-12


def test_random_phases_recovered():
    for seed in range(20):
        c = core(random_state((3, 2, 2), seed))
        s = SeededStream(seed, 3)
        qs = [np.diag(np.exp(2j * np.pi * s.uniform(d))) for d in c.dims]
        res = solve_phase_symmetry(c, multi_apply(c, qs))
        assert res.found and res.residual < 1e-12


def test_latin_perturbation_certified():
    for seed in range(10):
        a, b = latin_state(seed), latin_state(seed, perturb=True)
        res = solve_phase_symmetry(a, b)
        assert not res.found and res.certified and res.reason == "phase"
        entries, value, allowance = res.violation
        assert abs(value) > allowance
        assert lsq_phase_residual(a, b) > 1e-2


def test_latin_phased_solvable():
    a = latin_state(2)
    s = SeededStream(2, 9)
    qs = [np.diag(np.exp(2j * np.pi * s.uniform(3))) for _ in range(3)]
    res = solve_phase_symmetry(a, multi_apply(a, qs))
    assert res.found and res.kernel_rank == 2


def test_w_single_entry_phase_is_solvable(w_state):
    # three support entries share no index pattern that closes a cycle, so any
    # single-entry phase change is still a product of local phases
    c = core(w_state)
    arr = c.data.copy()
    nz = np.argwhere(np.abs(arr) > 1e-9)
    e = tuple(nz[0])
    arr[e] *= np.exp(0.9j)
    b = StateTensor(arr)
    res = solve_phase_symmetry(c, b)
    assert res.found and res.kernel_rank == 0 and res.residual < 1e-12
    assert lsq_phase_residual(c, b) < 1e-10


def test_modulus_mismatch():
    c = core(random_state((2, 2, 2), 1))
    arr = c.data.copy()
    arr[0, 0, 0] *= 1.01
    res = solve_phase_symmetry(c, StateTensor(arr))
    assert res.certified and res.reason == "modulus"
    assert res.violation[0] == (0, 0, 0)


def test_precondition(ghz):
    r = hosvd(ghz)
    with pytest.raises(PreconditionViolated):
        solve_phase_symmetry(r.core, r.core, structure=symmetry_structure(r))


def test_dims_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_phase_symmetry(core(random_state((2, 2, 2), 0)), core(random_state((3, 2, 2), 0)))


def test_integer_row_reduce_kernel():
    a = np.array([[1, 1, 0], [0, 1, 1], [1, 2, 1], [2, 0, -2]])
    h, u, piv = integer_row_reduce(a)
    u = np.array(u, dtype=np.int64)
    np.testing.assert_array_equal(u @ a, np.array(h, dtype=np.int64))
    assert round(abs(np.linalg.det(u.astype(float)))) == 1
    kernel = u[len(piv):]
    assert kernel.shape[0] == 2
    np.testing.assert_array_equal(kernel @ a, 0)


def test_wrap_range():
    x = wrap(np.array([-np.pi, np.pi, 3 * np.pi, 0.5]))
    assert np.all(x >= -np.pi) and np.all(x < np.pi)
    np.testing.assert_allclose(x, [-np.pi, -np.pi, -np.pi, 0.5])

"""Exact solver for the diagonal-phase symmetry between two cores.

When every spectral block has size one, two cores are related by local
unitaries only if ``B[e] = exp(i * sum_n theta[n][e_n]) * A[e]`` for every entry
``e``. That is a linear system over the circle group: integer coefficients,
right-hand sides known modulo 2*pi. It is decided exactly by integer row
reduction. Each integer vector ``y`` in the left kernel of the coefficient
matrix gives a necessary condition ``y . phi = 0 (mod 2*pi)``, and these
conditions are also sufficient because the circle group is divisible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, PreconditionViolated
from .symmetry import TOL_ZERO, SymmetryStructure
from .tensor import StateTensor, multi_apply

TWO_PI = 2.0 * np.pi
SUPPORT_FACTOR = 10.0


def wrap(x):
    """Map angles into ``[-pi, pi)``."""
    return (np.asarray(x) + np.pi) % TWO_PI - np.pi


@dataclass
class PhaseResult:
    """Outcome of :func:`solve_phase_symmetry`.

    ``phases`` is ``None`` when no solution exists. ``certified`` is true when
    that absence is proven (modulus mismatch or a violated kernel condition).
    ``violation`` holds ``(entries, value, allowance)`` for the failed kernel
    condition: the multi-indices involved, the wrapped sum ``y . phi`` and the
    noise allowance it exceeded.
    """

    phases: list[np.ndarray] | None
    certified: bool = False
    reason: str = ""
    residual: float = float("nan")
    violation: tuple | None = None
    constraints: int = 0
    kernel_rank: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.phases is not None

    def unitaries(self) -> list[np.ndarray]:
        return [np.diag(np.exp(1j * th)) for th in self.phases]


def integer_row_reduce(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Row echelon form ``h = u @ a`` over the integers with ``u`` unimodular.

    Returns ``(h, u, pivots)``. Rows of ``u`` past ``len(pivots)`` span the
    integer left kernel of ``a``. Uses Python integers, so no overflow.
    """
    h = np.array(a, dtype=object)
    m, v = h.shape
    u = np.array(np.eye(m, dtype=int), dtype=object)
    r = 0
    pivots = []
    for col in range(v):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if h[i, col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(h[i, col]))
            if best != r:
                h[[r, best]] = h[[best, r]]
                u[[r, best]] = u[[best, r]]
            others = [i for i in range(r + 1, m) if h[i, col] != 0]
            if not others:
                break
            for i in others:
                q = h[i, col] // h[r, col]
                h[i] -= q * h[r]
                u[i] -= q * u[r]
        if any(h[i, col] != 0 for i in range(r, m)):
            if h[r, col] < 0:
                h[r] = -h[r]
                u[r] = -u[r]
            pivots.append(col)
            r += 1
    return h, u, pivots


def _check_inputs(core_a: StateTensor, core_b: StateTensor, structure: SymmetryStructure | None):
    if core_a.dims != core_b.dims:
        raise DimensionMismatch(f"dims differ: {core_a.dims} vs {core_b.dims}")
    if structure is not None and not structure.phase_only:
        raise PreconditionViolated("phase solver needs every degeneracy block to have size one")


def solve_phase_symmetry(
    core_a: StateTensor,
    core_b: StateTensor,
    tol: float = 1e-10,
    structure: SymmetryStructure | None = None,
    tol_zero: float = TOL_ZERO,
) -> PhaseResult:
    """Find per-mode phases with ``core_b = (diag(e^{i theta_1}) x ...) core_a``.

    ``tol`` is the absolute per-entry tolerance. Entries whose moduli differ
    by more than ``tol`` make the system infeasible outright. Entries below
    ``max(10 * tol, tol_zero)`` in either core carry no reliable phase and are
    left out of the equations. For the rest, the phase of entry ``e`` is
    trusted to ``tol / |entry|``, and each kernel condition may deviate by the
    correspondingly weighted sum. The global phase goes into mode 0:
    ``theta[n][0] = 0`` for ``n >= 1``.
    """
    _check_inputs(core_a, core_b, structure)
    a = core_a.data
    b = core_b.data
    dims = core_a.dims

    modulus_gap = np.abs(np.abs(a) - np.abs(b))
    worst = np.unravel_index(int(np.argmax(modulus_gap)), dims)
    if modulus_gap[worst] > tol:
        return PhaseResult(
            None, certified=True, reason="modulus",
            violation=(tuple(int(i) for i in worst), float(modulus_gap[worst]), tol),
        )

    # variable layout: mode 0 keeps all of its phases, other modes drop index 0
    offsets = [0]
    for n, d in enumerate(dims):
        offsets.append(offsets[-1] + (d if n == 0 else d - 1))
    nvar = offsets[-1]

    def var(n: int, i: int) -> int | None:
        if n == 0:
            return i
        return None if i == 0 else offsets[n] + i - 1

    floor = max(SUPPORT_FACTOR * tol, tol_zero)
    mags = np.minimum(np.abs(a), np.abs(b))
    support = [tuple(int(x) for x in e) for e in np.argwhere(mags > floor)]
    rows = np.zeros((len(support), nvar), dtype=int)
    rhs = np.empty(len(support))
    sigma = np.empty(len(support))
    for k, e in enumerate(support):
        for n, i in enumerate(e):
            j = var(n, i)
            if j is not None:
                rows[k, j] = 1
        rhs[k] = np.angle(b[e] * np.conj(a[e]))
        sigma[k] = tol / mags[e]

    theta = np.zeros(nvar)
    result = PhaseResult(None, constraints=len(support))
    if support:
        h, u, pivots = integer_row_reduce(rows)
        rank = len(pivots)
        kernel = np.array(u[rank:], dtype=float)
        result.kernel_rank = kernel.shape[0]
        if kernel.size:
            values = wrap(kernel @ rhs)
            allowance = np.abs(kernel) @ sigma
            bad = np.abs(values) > allowance
            if np.any(bad):
                j = int(np.argmax(np.abs(values) - allowance))
                involved = [support[k] for k in np.nonzero(kernel[j])[0]]
                result.certified = True
                result.reason = "phase"
                result.violation = (involved, float(values[j]), float(allowance[j]))
                return result
            if np.any(allowance >= np.pi):
                result.notes.append("some kernel conditions are uninformative at this tolerance")
        # back substitution; free variables stay at zero
        c = np.array(u[:rank], dtype=object) @ rhs if rank else np.zeros(0)
        for r in reversed(range(rank)):
            p = pivots[r]
            acc = float(c[r]) - sum(float(h[r, j]) * theta[j] for j in range(p + 1, nvar) if h[r, j] != 0)
            theta[p] = acc / float(h[r, p])
        # one weighted least-squares polish on the wrapped residual
        resid = wrap(rhs - rows @ theta)
        w = 1.0 / sigma
        delta, *_ = np.linalg.lstsq(rows * w[:, None], resid * w, rcond=None)
        theta = theta + delta

    phases = []
    for n, d in enumerate(dims):
        th = np.zeros(d)
        for i in range(d):
            j = var(n, i)
            if j is not None:
                th[i] = theta[j]
        phases.append(wrap(th))
    result.phases = phases
    qs = [np.diag(np.exp(1j * th)) for th in phases]
    result.residual = float(np.linalg.norm((multi_apply(core_a, qs).data - b).ravel()))
    return result

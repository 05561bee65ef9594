"""Complex SVD by one-sided Jacobi, with a compiled kernel when available.

The rotation kernel comes from the Cython extension ``lucanon._jacobi`` if it
was built, otherwise from the pure-Python ``lucanon._jacobi_py``. Both run the
same cyclic rotation sequence; :func:`set_backend` switches between them (used
by the benchmark and the cross-backend tests).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _jacobi_py
from .errors import NumericalFailure

try:
    from . import _jacobi as _jacobi_c
except ImportError:  # extension not built
    _jacobi_c = None

MAX_SWEEPS = 60
EPS = np.finfo(np.float64).eps

_KERNELS = {"python": _jacobi_py.hestenes}
if _jacobi_c is not None:
    _KERNELS["compiled"] = _jacobi_c.hestenes

BACKEND = "compiled" if _jacobi_c is not None else "python"


def available_backends() -> list[str]:
    return sorted(_KERNELS)


def set_backend(name: str) -> str:
    """Select the Jacobi kernel; returns the previously active backend name."""
    global BACKEND
    if name not in _KERNELS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}")
    previous, BACKEND = BACKEND, name
    return previous


@dataclass(frozen=True)
class SVDResult:
    """``m = U @ diag(sigma) @ Vh`` with square unitary ``U`` and ``Vh``.

    ``sigma`` has ``min(rows, cols)`` entries in non-increasing order.
    ``sweeps`` records how many Jacobi sweeps the kernel needed.
    """

    U: np.ndarray
    sigma: np.ndarray
    Vh: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        r = self.sigma.size
        return (self.U[:, :r] * self.sigma) @ self.Vh[:r]


def _complete_rows(rows: np.ndarray, k: int) -> np.ndarray:
    """Extend orthonormal rows (r x k) to a k x k unitary, keeping the given rows."""
    r = rows.shape[0]
    if r == k:
        return rows
    basis = np.concatenate([rows.conj().T, np.eye(k, dtype=np.complex128)], axis=1)
    q, rr = np.linalg.qr(basis, mode="complete")
    q = q[:, :k].copy()
    # qr may rotate the leading columns by unit phases; undo it
    d = np.diag(rr)[:r]
    q[:, :r] *= d / np.abs(d)
    q[:, :r] = rows.conj().T
    return q.conj().T


def jacobi_left(m: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Run the kernel on ``conj(m)``.

    Returns ``(U, norms, rows, sweeps)`` where ``U`` is the full square left
    factor, ``norms`` the unsorted row norms after rotation and ``rows`` the
    rotated rows (so that ``m = U @ conj(rows)``).
    """
    a = np.ascontiguousarray(np.conj(m), dtype=np.complex128)
    rows = a.shape[0]
    vt = np.eye(rows, dtype=np.complex128)
    tol = max(rows, 1) * EPS
    # rows driven to rounding level can never be made orthogonal in relative terms
    abstol = max(rows, 1) * EPS * float(np.vdot(a, a).real)
    sweeps = _KERNELS[BACKEND](a, vt, tol, abstol, max_sweeps)
    if sweeps < 0:
        raise NumericalFailure(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    return vt.T, np.linalg.norm(a, axis=1), a, sweeps


def svd(m) -> SVDResult:
    """Full SVD of a complex matrix.

    The left factor is the accumulated product of plane rotations, so it is
    unitary to rounding even when ``m`` is rank deficient or has more rows than
    columns. Raises :class:`NumericalFailure` after ``MAX_SWEEPS`` sweeps.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"svd needs a nonempty matrix, got shape {m.shape}")
    rows, cols = m.shape
    u, norms, a, sweeps = jacobi_left(m)
    order = np.argsort(-norms, kind="stable")
    u = u[:, order]
    norms = norms[order]
    a = a[order]
    r = min(rows, cols)
    smax = norms[0] if norms.size else 0.0
    keep = int(np.count_nonzero(norms[:r] > EPS * max(rows, cols) * smax)) if smax > 0 else 0
    vh_rows = np.conj(a[:keep]) / norms[:keep, None]
    vh = _complete_rows(vh_rows, cols)
    return SVDResult(U=np.ascontiguousarray(u), sigma=norms[:r].copy(), Vh=vh, sweeps=sweeps)


def left_singular(m) -> tuple[np.ndarray, np.ndarray]:
    """Left singular vectors and all ``rows`` singular values (zero padded), descending."""
    m = np.asarray(m, dtype=np.complex128)
    u, norms, _, _ = jacobi_left(m)
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    r = min(m.shape)
    sigma[r:] = 0.0
    return np.ascontiguousarray(u[:, order]), sigma


def polar_unitary(f) -> np.ndarray:
    """Unitary polar factor of a square matrix: the unitary closest to ``f``."""
    res = svd(f)
    return res.U @ res.Vh

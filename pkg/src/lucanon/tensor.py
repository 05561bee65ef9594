"""Dense complex state tensors and the multilinear operations on them.

A state on ``I_1 x ... x I_N`` is stored as a C-ordered ``complex128`` array of
shape ``(I_1, ..., I_N)``, so the flat amplitude list is row-major with the first
index varying slowest. Modes and indices are 0-based in code; documentation
writes kets 1-based (``|11>`` is the amplitude at ``[0, 0]``).

The mode-``n`` unfolding puts index ``i_n`` on the rows and runs the columns
row-major over the cyclic list ``(i_{n+1}, ..., i_N, i_1, ..., i_{n-1})``. This
is not the column order numpy's ``moveaxis(...).reshape`` or most Tucker
libraries produce, and every other module depends on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    ModeOutOfRange,
    ShapeMismatch,
    WrongCount,
    ZeroState,
)

ZERO_AMPLITUDE = 1e-15


@dataclass(frozen=True, eq=False)
class StateTensor:
    """Immutable amplitude tensor ``psi[i_1, ..., i_N]``."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, order="C", copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def amplitudes(self) -> np.ndarray:
        """Flat row-major view of the amplitudes."""
        return self.data.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __repr__(self):
        return f"StateTensor(dims={self.dims}, norm={self.norm():.6g})"


def new_state(dims: Sequence[int], amplitudes) -> StateTensor:
    """Validate ``amplitudes`` against ``dims`` and wrap them. Does not normalize."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1 or any(d < 1 for d in dims):
        raise DimensionMismatch(f"dims must be a non-empty list of positive integers, got {dims}")
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.size != prod(dims):
        raise DimensionMismatch(
            f"{amps.size} amplitudes given for dims {dims} (expected {prod(dims)})"
        )
    if not np.isfinite(amps).all():
        raise DimensionMismatch("amplitudes must be finite")
    if np.all(np.abs(amps) < ZERO_AMPLITUDE):
        raise ZeroState("all amplitudes vanish")
    return StateTensor(amps.reshape(dims))


def normalize(t: StateTensor) -> StateTensor:
    nrm = t.norm()
    if nrm < ZERO_AMPLITUDE:
        raise ZeroState("cannot normalize the zero vector")
    return StateTensor(t.data / nrm)


def inner(a: StateTensor, b: StateTensor) -> complex:
    """``<a, b> = sum conj(a) * b``; conjugate-linear in the first argument."""
    if a.dims != b.dims:
        raise DimensionMismatch(f"dims differ: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def _check_mode(order: int, n: int) -> int:
    if not 0 <= n < order:
        raise ModeOutOfRange(f"mode {n} outside 0..{order - 1}")
    return n


def cyclic_axes(order: int, n: int) -> tuple[int, ...]:
    """Axis order ``(n, n+1, ..., N-1, 0, ..., n-1)`` used by the unfolding."""
    return tuple((n + k) % order for k in range(order))


def unfold_array(arr: np.ndarray, n: int) -> np.ndarray:
    _check_mode(arr.ndim, n)
    return np.transpose(arr, cyclic_axes(arr.ndim, n)).reshape(arr.shape[n], -1)


def fold_array(mat: np.ndarray, n: int, dims: Sequence[int]) -> np.ndarray:
    dims = tuple(dims)
    _check_mode(len(dims), n)
    axes = cyclic_axes(len(dims), n)
    permuted = tuple(dims[a] for a in axes)
    cols = prod(permuted[1:])
    if mat.shape != (dims[n], cols):
        raise ShapeMismatch(f"matrix shape {mat.shape} does not fold to mode {n} of {dims}")
    return np.transpose(mat.reshape(permuted), np.argsort(axes))


def unfold(t: StateTensor, n: int) -> np.ndarray:
    """Mode-``n`` unfolding, shape ``I_n x prod(other dims)`` in cyclic column order."""
    return np.ascontiguousarray(unfold_array(t.data, n))


def fold(m, n: int, dims: Sequence[int]) -> StateTensor:
    """Inverse of :func:`unfold`."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got array of shape {m.shape}")
    return StateTensor(fold_array(m, n, dims))


def mode_product_array(arr: np.ndarray, n: int, mat: np.ndarray) -> np.ndarray:
    # tensordot puts the new axis first; move it back to position n
    out = np.tensordot(mat, arr, axes=([1], [n]))
    return np.moveaxis(out, 0, n)


def mode_apply(t: StateTensor, n: int, u) -> StateTensor:
    """Act with the matrix ``u`` on party ``n``: ``psi'[..i'..] = sum_i u[i', i] psi[..i..]``."""
    _check_mode(t.order, n)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (t.dims[n], t.dims[n]):
        raise DimensionMismatch(f"operator of shape {u.shape} on mode {n} of dims {t.dims}")
    return StateTensor(mode_product_array(t.data, n, u))


def multi_apply(t: StateTensor, us: Sequence) -> StateTensor:
    """Apply one operator per party, ``(u_1 x ... x u_N) psi``."""
    if len(us) != t.order:
        raise WrongCount(f"{len(us)} operators for an order-{t.order} tensor")
    arr = t.data
    for n, u in enumerate(us):
        u = np.asarray(u, dtype=np.complex128)
        if u.shape != (t.dims[n], t.dims[n]):
            raise DimensionMismatch(f"operator of shape {u.shape} on mode {n} of dims {t.dims}")
        arr = mode_product_array(arr, n, u)
    return StateTensor(arr)


def subtensor(t: StateTensor, n: int, i: int) -> StateTensor:
    """Slice with index ``n`` fixed to ``i``.

    The remaining modes follow the cyclic unfolding order, so the flat data is
    exactly row ``i`` of ``unfold(t, n)``. For an order-1 tensor the result is
    order 0 (``dims == ()``).
    """
    _check_mode(t.order, n)
    if not 0 <= i < t.dims[n]:
        raise IndexOutOfRange(f"index {i} outside 0..{t.dims[n] - 1} on mode {n}")
    axes = cyclic_axes(t.order, n)
    return StateTensor(np.transpose(t.data, axes)[i])


def dagger(u) -> np.ndarray:
    return np.conj(np.asarray(u)).T


def unitarity_residual(u) -> float:
    """Max-entry deviation of ``u^H u`` from the identity."""
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return float("inf")
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def is_unitary(u, tol: float = 1e-10) -> bool:
    return unitarity_residual(u) <= tol

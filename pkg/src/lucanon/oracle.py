"""Brute-force LU distance, used as an independent check on :func:`decide_lu`.

Minimizes ``|(U_1 x ... x U_N) a - b|`` over unrestricted local unitaries by
alternating polar steps directly on the states, with no HOSVD, no block
structure and LAPACK's SVD instead of the package's Jacobi kernel. Never
used on the certification path.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .equivalence import Witness, residual_of
from .errors import DimensionMismatch, SizeGuard
from .rng import SeededStream
from .tensor import StateTensor, multi_apply, unfold


@dataclass(frozen=True)
class OracleOptions:
    restarts: int = 8
    max_iters: int = 3000
    seed: int = 1
    max_size: int = 64
    stop_below: float = 1e-13
    rel_change: float = 1e-15


def _polar(f: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(f)
    return u @ vh


def _descend(a: StateTensor, b: StateTensor, us: list[np.ndarray], opts: OracleOptions):
    prev = residual_of(a, b, us)
    dist = prev
    for _ in range(opts.max_iters):
        for n in range(a.order):
            others = [np.eye(d) if m == n else u for m, (u, d) in enumerate(zip(us, a.dims))]
            c = multi_apply(a, others)
            us[n] = _polar(unfold(b, n) @ unfold(c, n).conj().T)
        dist = residual_of(a, b, us)
        if dist <= opts.stop_below or prev - dist <= opts.rel_change * prev:
            break
        prev = dist
    return us, dist


def brute_force_lu_distance(
    a: StateTensor, b: StateTensor, opts: OracleOptions = OracleOptions()
) -> tuple[float, Witness]:
    """Smallest residual found over ``opts.restarts`` Haar-random starts.

    Raises :class:`SizeGuard` when the state has more than ``opts.max_size``
    amplitudes.
    """
    if a.dims != b.dims:
        raise DimensionMismatch(f"dims differ: {a.dims} vs {b.dims}")
    if prod(a.dims) > opts.max_size:
        raise SizeGuard(f"{prod(a.dims)} amplitudes exceeds the oracle guard of {opts.max_size}")
    best = (np.inf, None)
    for r in range(opts.restarts):
        rng = SeededStream(opts.seed, 10_000 + r)
        us = [rng.unitary(d) for d in a.dims]
        us, dist = _descend(a, b, us, opts)
        if dist < best[0]:
            best = (dist, us)
        if dist <= opts.stop_below:
            break
    dist, us = best
    return float(dist), Witness(tuple(us), float(dist))

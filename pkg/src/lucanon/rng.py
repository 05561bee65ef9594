"""Seeded random states and Haar-random unitaries.

Generator: Philox4x64-10 (numpy's ``Philox`` bit generator) keyed by the
pair ``(seed, stream)``. Only raw 64-bit outputs are used, and Gaussians come
from the Box-Muller transform written out here, because numpy's
distribution methods may change their streams between releases. Changing the
generator or the transform breaks every recorded fixture.

Independent random objects inside one computation (restarts, modes) use
separate ``stream`` keys, so their values don't depend on evaluation order.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .tensor import StateTensor, normalize

GENERATOR = "philox4x64-10/box-muller v1"
_MASK64 = (1 << 64) - 1


class SeededStream:
    """Deterministic source of uniforms, complex Gaussians and unitaries."""

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        key = np.array([self.seed & _MASK64, self.stream & _MASK64], dtype=np.uint64)
        self._bits = np.random.Philox(key=key)

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles in the open interval (0, 1)."""
        raw = self._bits.random_raw(n)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53

    def complex_normal(self, shape) -> np.ndarray:
        """Standard complex Gaussians (unit variance per component) of the given shape."""
        count = int(np.prod(shape, dtype=np.int64))
        u = self.uniform(2 * count)
        out = np.empty(count, dtype=np.complex128)
        for k in range(count):
            r = math.sqrt(-2.0 * math.log(u[2 * k]))
            angle = 2.0 * math.pi * u[2 * k + 1]
            out[k] = complex(r * math.cos(angle), r * math.sin(angle))
        return out.reshape(shape)

    def unitary(self, d: int) -> np.ndarray:
        """Haar-random ``d x d`` unitary: QR of a Gaussian matrix, R's diagonal made positive."""
        z = self.complex_normal((d, d))
        q, r = np.linalg.qr(z)
        diag = np.diag(r)
        return q * (diag / np.abs(diag))

    def state(self, dims: Sequence[int]) -> StateTensor:
        return normalize(StateTensor(self.complex_normal(tuple(int(d) for d in dims))))


def random_state(dims: Sequence[int], seed: int) -> StateTensor:
    """Normalized complex-Gaussian state; identical ``(dims, seed)`` give identical output."""
    return SeededStream(seed).state(dims)


def haar_random_unitary(d: int, seed: int, stream: int = 0) -> np.ndarray:
    return SeededStream(seed, stream).unitary(d)


def random_local_unitaries(dims: Sequence[int], seed: int) -> list[np.ndarray]:
    """One Haar unitary per party, party ``n`` drawn from stream ``n + 1``."""
    return [SeededStream(seed, n + 1).unitary(int(d)) for n, d in enumerate(dims)]

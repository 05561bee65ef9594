"""Degeneracy blocks of the HOSVD spectra and the residual local symmetry they induce.

Within a block of equal mode-``n`` singular values the core is only fixed up
to a unitary acting on that block, so the residual symmetry of a core is the
product over modes of block-diagonal unitaries. When every block has size one
it reduces to diagonal phases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NotSorted
from .hosvd import HOSVDResult

TOL_DEGEN = 1e-8
TOL_ZERO = 1e-10
NEAR_FACTOR = 10.0


@dataclass(frozen=True)
class Block:
    start: int
    size: int
    value: float
    zero: bool = False

    @property
    def stop(self) -> int:
        return self.start + self.size

    @property
    def indices(self) -> range:
        return range(self.start, self.stop)


@dataclass(frozen=True)
class NearDegeneracy:
    """A block boundary whose gap is within ``NEAR_FACTOR`` of the grouping threshold."""

    mode: int
    index: int
    gap: float


@dataclass(frozen=True)
class SymmetryStructure:
    blocks: tuple[tuple[Block, ...], ...]
    spectra: tuple[np.ndarray, ...]
    tol_degen: float = TOL_DEGEN
    tol_zero: float = TOL_ZERO
    near_degenerate: tuple[NearDegeneracy, ...] = ()

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.spectra)

    def block_sizes(self, n: int) -> tuple[int, ...]:
        return tuple(b.size for b in self.blocks[n])

    @property
    def phase_only(self) -> bool:
        """True when every block in every mode has size one."""
        return all(b.size == 1 for mode in self.blocks for b in mode)

    def describe(self, n: int) -> str:
        """1-based block listing, e.g. ``{1},{2},{3,4}``; zero blocks carry a ``0`` suffix."""
        parts = []
        for b in self.blocks[n]:
            body = ",".join(str(i + 1) for i in b.indices)
            parts.append("{" + body + "}" + ("0" if b.zero else ""))
        return ",".join(parts)


def degeneracy_partition(
    sigma: Sequence[float], tol_degen: float = TOL_DEGEN, tol_zero: float = TOL_ZERO
) -> list[Block]:
    """Group a non-increasing spectrum into blocks of equal values.

    Walks the values in order and opens a new block whenever the drop from the
    previous value exceeds ``tol_degen * max(sigma)``. A chain of values each
    within tolerance of its neighbour therefore lands in one block. Values at
    or below ``tol_zero`` form a single trailing zero block. Each block's value
    is the mean of its members.
    """
    s = np.asarray(sigma, dtype=float)
    if s.size == 0:
        return []
    if np.any(s < 0) or np.any(np.diff(s) > 0):
        raise NotSorted(f"spectrum must be non-negative and non-increasing: {s.tolist()}")
    thresh = tol_degen * max(float(s[0]), 1e-300)
    blocks = []
    start = 0
    nonzero = int(np.count_nonzero(s > tol_zero))
    for i in range(1, nonzero + 1):
        if i == nonzero or s[i - 1] - s[i] > thresh:
            blocks.append(Block(start, i - start, float(np.mean(s[start:i]))))
            start = i
    if nonzero < s.size:
        blocks.append(Block(nonzero, s.size - nonzero, float(np.mean(s[nonzero:])), zero=True))
    return blocks


def _near_degeneracies(n: int, s: np.ndarray, blocks: list[Block], tol_degen: float, tol_zero: float):
    thresh = tol_degen * max(float(s[0]), 1e-300)
    out = []
    for left, right in zip(blocks, blocks[1:]):
        gap = float(s[left.stop - 1] - s[right.start])
        near = NEAR_FACTOR * (tol_zero if right.zero else thresh)
        if right.zero:
            gap = float(s[left.stop - 1])
        if gap <= near:
            out.append(NearDegeneracy(n, right.start, gap))
    return out


def symmetry_structure(
    r: HOSVDResult, tol_degen: float = TOL_DEGEN, tol_zero: float = TOL_ZERO
) -> SymmetryStructure:
    blocks = []
    near = []
    for n, s in enumerate(r.spectra):
        s = np.asarray(s, dtype=float)
        part = degeneracy_partition(s, tol_degen, tol_zero)
        blocks.append(tuple(part))
        near.extend(_near_degeneracies(n, s, part, tol_degen, tol_zero))
    return SymmetryStructure(
        blocks=tuple(blocks),
        spectra=tuple(np.asarray(s, dtype=float) for s in r.spectra),
        tol_degen=tol_degen,
        tol_zero=tol_zero,
        near_degenerate=tuple(near),
    )


@dataclass(frozen=True)
class SpectralMismatch:
    """Why two structures are incompatible.

    ``kind`` is ``"value"`` when ``|sigma - sigma~|`` at ``(mode, index)`` exceeds
    the tolerance, or ``"blocks"`` when the block sizes differ at that mode.
    """

    mode: int
    index: int
    delta: float
    kind: str = "value"


def spectral_mismatch(
    a: SymmetryStructure, b: SymmetryStructure, tol_spec: float = 1e-9
) -> SpectralMismatch | None:
    if a.dims != b.dims:
        raise DimensionMismatch(f"dims differ: {a.dims} vs {b.dims}")
    for n, (sa, sb) in enumerate(zip(a.spectra, b.spectra)):
        diff = np.abs(sa - sb)
        worst = int(np.argmax(diff))
        if diff[worst] > tol_spec:
            return SpectralMismatch(n, worst, float(diff[worst]))
    for n in range(len(a.blocks)):
        sizes_a = [(blk.size, blk.zero) for blk in a.blocks[n]]
        sizes_b = [(blk.size, blk.zero) for blk in b.blocks[n]]
        if sizes_a != sizes_b:
            idx = next(
                (min(x.start, y.start) for x, y in zip(a.blocks[n], b.blocks[n])
                 if (x.size, x.zero) != (y.size, y.zero)),
                min(len(a.blocks[n]), len(b.blocks[n])),
            )
            return SpectralMismatch(n, idx, float(abs(a.spectra[n][idx] - b.spectra[n][idx])), "blocks")
    return None


def structures_compatible(a: SymmetryStructure, b: SymmetryStructure, tol_spec: float = 1e-9) -> bool:
    """Same block sizes in every mode and spectra equal entrywise within ``tol_spec``.

    ``False`` certifies LU inequivalence, since the spectra are LU invariants.
    """
    return spectral_mismatch(a, b, tol_spec) is None

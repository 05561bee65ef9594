"""Deciding local-unitary equivalence of two pure states.

Pipeline: HOSVD both states, compare spectra and degeneracy blocks (a
mismatch certifies inequivalence), then look for a residual symmetry ``Q``
with ``core_b = (Q_1 x ... x Q_N) core_a``. If every block has size one,
``Q`` is diagonal phases and :mod:`lucanon.phase` decides exactly. Otherwise an
alternating block-unitary Procrustes search runs from several seeded starts.
A failed search yields ``Undecided``, never an inequivalence claim.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NumericalFailure, PreconditionViolated
from .hosvd import HOSVDResult, hosvd
from .linalg import polar_unitary
from .phase import solve_phase_symmetry
from .rng import SeededStream
from .symmetry import (
    TOL_DEGEN,
    TOL_ZERO,
    SymmetryStructure,
    spectral_mismatch,
    symmetry_structure,
)
from .tensor import (
    StateTensor,
    dagger,
    mode_product_array,
    multi_apply,
    normalize,
    unfold,
    unitarity_residual,
)

log = logging.getLogger(__name__)

NORM_TOL = 1e-12
# Gauss-Newton polish of the block search: tried every POLISH_EVERY sweeps once
# the residual is below POLISH_BELOW, and whenever the sweeps stall
POLISH_EVERY = 25
POLISH_BELOW = 1e-2


class Tag(str, enum.Enum):
    EQUIVALENT = "Equivalent"
    INEQUIVALENT_SPECTRA = "InequivalentSpectra"
    INEQUIVALENT_PHASE = "InequivalentPhase"
    UNDECIDED = "Undecided"

    @property
    def exit_code(self) -> int:
        if self is Tag.EQUIVALENT:
            return 0
        if self is Tag.UNDECIDED:
            return 2
        return 1


@dataclass(frozen=True)
class DecideOptions:
    tol_equiv: float = 1e-8
    tol_spec: float = 1e-9
    tol_degen: float = TOL_DEGEN
    tol_zero: float = TOL_ZERO
    restarts: int = 32
    max_iters: int = 500
    conv_tol: float = 1e-12
    seed: int = 0
    # per-entry tolerance of the exact phase solver; None means tol_equiv / 100
    tol_phase: float | None = None

    @property
    def phase_tol(self) -> float:
        return self.tol_equiv / 100 if self.tol_phase is None else self.tol_phase


@dataclass(frozen=True)
class Witness:
    """Per-party unitaries ``W`` with ``(W_1 x ... x W_N) a ~= b``."""

    unitaries: tuple[np.ndarray, ...]
    residual: float

    def inverse(self, a: StateTensor, b: StateTensor) -> "Witness":
        """Witness for the reversed pair ``(b, a)``."""
        inv = tuple(dagger(w) for w in self.unitaries)
        return Witness(inv, residual_of(b, a, inv))


def residual_of(a: StateTensor, b: StateTensor, unitaries: Sequence[np.ndarray]) -> float:
    return float(np.linalg.norm((multi_apply(a, unitaries).data - b.data).ravel()))


@dataclass
class Verdict:
    tag: Tag
    witness: Witness | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return self.tag.exit_code

    @property
    def equivalent(self) -> bool:
        return self.tag is Tag.EQUIVALENT

    @property
    def inequivalent(self) -> bool:
        return self.tag in (Tag.INEQUIVALENT_SPECTRA, Tag.INEQUIVALENT_PHASE)


@dataclass
class WitnessReport:
    residual: float
    unitarity: list[float]
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol and all(u <= self.tol for u in self.unitarity)


def verify_witness(a: StateTensor, b: StateTensor, w: Witness | Sequence[np.ndarray], tol: float = 1e-8) -> WitnessReport:
    """Recompute the witness residual and unitarity defects; never raises on bad data."""
    unitaries = w.unitaries if isinstance(w, Witness) else tuple(w)
    try:
        residual = residual_of(a, b, unitaries)
    except (ValueError, IndexError):
        residual = float("inf")
    return WitnessReport(residual, [unitarity_residual(u) for u in unitaries], tol)


# --- block-unitary Procrustes search -------------------------------------


@dataclass
class BlockSearch:
    """Result of :func:`solve_block_symmetry`; ``unitaries`` is set only on success."""

    unitaries: tuple[np.ndarray, ...] | None
    residual: float
    restart: int
    restarts_tried: int
    iterations: int
    best_residuals: list[float] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.unitaries is not None


def _block_polar(f: np.ndarray, blocks) -> np.ndarray:
    q = np.zeros_like(f)
    for blk in blocks:
        sl = slice(blk.start, blk.stop)
        fb = f[sl, sl]
        if blk.size == 1:
            z = fb[0, 0]
            q[sl, sl] = z / abs(z) if abs(z) > 0 else 1.0
        else:
            q[sl, sl] = polar_unitary(fb)
    return q


def _random_block_unitary(blocks, rng: SeededStream) -> np.ndarray:
    d = blocks[-1].stop
    q = np.zeros((d, d), dtype=np.complex128)
    for blk in blocks:
        sl = slice(blk.start, blk.stop)
        q[sl, sl] = rng.unitary(blk.size)
    return q


def _apply_except(arr_q: list[np.ndarray], core: StateTensor, skip: int) -> StateTensor:
    us = [np.eye(q.shape[0]) if m == skip else q for m, q in enumerate(arr_q)]
    return multi_apply(core, us)


def _hermitian_basis(size: int) -> list[np.ndarray]:
    basis = []
    for j in range(size):
        e = np.zeros((size, size), dtype=np.complex128)
        e[j, j] = 1.0
        basis.append(e)
        for k in range(j + 1, size):
            e = np.zeros((size, size), dtype=np.complex128)
            e[j, k] = e[k, j] = 1.0
            basis.append(e)
            e = np.zeros((size, size), dtype=np.complex128)
            e[j, k], e[k, j] = 1j, -1j
            basis.append(e)
    return basis


def _expi(h: np.ndarray) -> np.ndarray:
    """``exp(i h)`` for Hermitian ``h``."""
    evals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * evals)) @ vecs.conj().T


def _gauss_newton(a: StateTensor, b: StateTensor, blocks, qs, opts: DecideOptions, steps: int = 30):
    """Polish ``qs`` by Gauss-Newton steps ``Q_n <- Q_n exp(i H_n)`` with block-diagonal Hermitian ``H_n``.

    Alternating polar steps slow to a crawl near solutions where blocks are
    coupled; this converges quadratically there. Steps that do not lower the
    residual end the polish.
    """
    directions = []  # (mode, slice, generator)
    for n, mode_blocks in enumerate(blocks):
        for blk in mode_blocks:
            for g in _hermitian_basis(blk.size):
                directions.append((n, slice(blk.start, blk.stop), g))
    target = b.data.ravel()
    resid = residual_of(a, b, qs)
    for _ in range(steps):
        if resid <= opts.tol_equiv * 1e-3:
            break
        partial = [_apply_except(qs, a, n).data for n in range(a.order)]
        current = multi_apply(a, qs).data.ravel()
        cols = []
        for n, sl, g in directions:
            gen = np.zeros_like(qs[n])
            gen[sl, sl] = 1j * g
            cols.append(mode_product_array(partial[n], n, qs[n] @ gen).ravel())
        jac = np.array(cols).T
        r = current - target
        jr = np.concatenate([jac.real, jac.imag])
        rr = np.concatenate([r.real, r.imag])
        delta, *_ = np.linalg.lstsq(jr, -rr, rcond=None)
        hs = [np.zeros_like(q) for q in qs]
        for (n, sl, g), x in zip(directions, delta):
            hs[n][sl, sl] += x * g
        trial = [q @ _expi(h) for q, h in zip(qs, hs)]
        new = residual_of(a, b, trial)
        if not new < resid:
            break
        qs, resid = trial, new
    return qs, resid


def _procrustes_run(a: StateTensor, b: StateTensor, blocks, qs, opts: DecideOptions):
    b_unf = [unfold(b, n) for n in range(b.order)]
    prev = np.inf
    resid = np.inf
    it = 0
    for it in range(1, opts.max_iters + 1):
        for n in range(a.order):
            c = _apply_except(qs, a, n)
            f = b_unf[n] @ unfold(c, n).conj().T
            qs[n] = _block_polar(f, blocks[n])
        resid = residual_of(a, b, qs)
        if resid <= opts.tol_equiv:
            break
        stalled = prev < np.inf and abs(prev - resid) <= opts.conv_tol * max(prev, 1e-300)
        if stalled or it == opts.max_iters or (it % POLISH_EVERY == 0 and resid < POLISH_BELOW):
            if resid < POLISH_BELOW:
                qs, resid = _gauss_newton(a, b, blocks, qs, opts)
                if resid <= opts.tol_equiv:
                    break
            if stalled:
                break
        prev = resid
    return qs, resid, it


def solve_block_symmetry(
    core_a: StateTensor,
    core_b: StateTensor,
    s: SymmetryStructure,
    opts: DecideOptions = DecideOptions(),
    s_b: SymmetryStructure | None = None,
) -> BlockSearch:
    """Search for block-diagonal unitaries ``Q`` with ``core_b = (Q_1 x ... x Q_N) core_a``.

    Each sweep sets ``Q_n``, block by block, to the unitary polar factor of the
    matching diagonal block of ``unfold(core_b, n) @ unfold(Q_{-n} core_a, n)^H``,
    where ``Q_{-n}`` applies every current factor except the ``n``-th. Restart 0
    starts at the identity. Restart ``r > 0`` starts at block-diagonal Haar
    unitaries drawn from stream ``r`` of ``opts.seed``. The search stops at the
    first restart whose residual falls to ``opts.tol_equiv``, so the reported
    restart is the lowest successful index. A failed search is not evidence
    of inequivalence.
    """
    if core_a.dims != core_b.dims or s.dims != core_a.dims:
        raise DimensionMismatch(f"dims differ: {core_a.dims}, {core_b.dims}, structure {s.dims}")
    if s_b is not None and spectral_mismatch(s, s_b, np.inf) is not None:
        raise PreconditionViolated("symmetry structures of the two cores are incompatible")
    best = BlockSearch(None, np.inf, -1, 0, 0)
    for r in range(max(opts.restarts, 1)):
        if r == 0:
            qs = [np.eye(d, dtype=np.complex128) for d in core_a.dims]
        else:
            rng = SeededStream(opts.seed, r)
            qs = [_random_block_unitary(s.blocks[n], rng) for n in range(core_a.order)]
        qs, resid, iters = _procrustes_run(core_a, core_b, s.blocks, qs, opts)
        best.best_residuals.append(resid)
        best.restarts_tried = r + 1
        best.iterations += iters
        if resid < best.residual:
            best.residual = resid
            best.restart = r
        if resid <= opts.tol_equiv:
            best.unitaries = tuple(qs)
            best.residual = resid
            best.restart = r
            break
    return best


# --- decision procedure ---------------------------------------------------


def _prepare(t: StateTensor, name: str, notes: list[str]) -> StateTensor:
    nrm = t.norm()
    if abs(nrm - 1.0) > NORM_TOL:
        notes.append(f"{name} normalized (norm was {nrm:.17g})")
        return normalize(t)
    return t


def _witness_from_cores(ha: HOSVDResult, hb: HOSVDResult, qs) -> tuple[np.ndarray, ...]:
    return tuple(ub @ q @ dagger(ua) for ua, ub, q in zip(ha.factors, hb.factors, qs))


def _finish_equivalent(a, b, ha, hb, qs, opts: DecideOptions, diag: dict) -> Verdict:
    ws = _witness_from_cores(ha, hb, qs)
    w = Witness(ws, residual_of(a, b, ws))
    report = verify_witness(a, b, w, opts.tol_equiv)
    diag["witness_residual"] = w.residual
    if not report.passed:
        raise NumericalFailure(
            f"internal error: witness failed end-to-end check (residual {report.residual:.3e}, "
            f"unitarity {max(report.unitarity):.3e})"
        )
    return Verdict(Tag.EQUIVALENT, w, diag)


def decide_lu(a: StateTensor, b: StateTensor, opts: DecideOptions = DecideOptions()) -> Verdict:
    """Decide whether ``b = (U_1 x ... x U_N) a`` for some local unitaries.

    Inputs that are not unit-norm are normalized first (noted in the
    diagnostics). An ``Equivalent`` witness relates the normalized states.
    Spectral mismatches and inconsistent phase systems are certified
    inequivalences. ``Undecided`` arises only when degenerate blocks force
    the numerical search and it fails.
    """
    if a.dims != b.dims:
        raise DimensionMismatch(f"dims differ: {a.dims} vs {b.dims}")
    notes: list[str] = []
    a = _prepare(a, "a", notes)
    b = _prepare(b, "b", notes)
    ha, hb = hosvd(a), hosvd(b)
    sa = symmetry_structure(ha, opts.tol_degen, opts.tol_zero)
    sb = symmetry_structure(hb, opts.tol_degen, opts.tol_zero)
    diag: dict = {
        "notes": notes,
        "spectra_a": [s.tolist() for s in ha.spectra],
        "spectra_b": [s.tolist() for s in hb.spectra],
        "partition": [sa.describe(n) for n in range(a.order)],
        "near_degenerate": [(d.mode, d.index, d.gap) for d in sa.near_degenerate + sb.near_degenerate],
    }
    if diag["near_degenerate"]:
        notes.append("a block boundary lies within 10x of the degeneracy tolerance")

    mismatch = spectral_mismatch(sa, sb, opts.tol_spec)
    if mismatch is not None:
        diag["mismatch"] = {
            "mode": mismatch.mode, "index": mismatch.index,
            "delta": mismatch.delta, "kind": mismatch.kind,
        }
        return Verdict(Tag.INEQUIVALENT_SPECTRA, None, diag)

    if sa.phase_only:
        diag["route"] = "phase"
        res = solve_phase_symmetry(ha.core, hb.core, opts.phase_tol, sa, opts.tol_zero)
        diag["phase"] = {
            "constraints": res.constraints, "kernel_rank": res.kernel_rank,
            "reason": res.reason, "residual": res.residual,
        }
        if res.found and res.residual <= opts.tol_equiv:
            return _finish_equivalent(a, b, ha, hb, res.unitaries(), opts, diag)
        if not res.found and res.certified:
            diag["phase"]["violation"] = res.violation
            return Verdict(Tag.INEQUIVALENT_PHASE, None, diag)
        notes.append("phase solution did not verify; falling back to the block search")
        log.warning("phase solution residual %.3e above tol_equiv; using block search", res.residual)

    diag["route"] = diag.get("route", "block")
    search = solve_block_symmetry(ha.core, hb.core, sa, opts)
    diag["search"] = {
        "restarts": search.restarts_tried, "restart": search.restart,
        "iterations": search.iterations, "best_residual": search.residual,
    }
    if search.found:
        return _finish_equivalent(a, b, ha, hb, search.unitaries, opts, diag)
    return Verdict(Tag.UNDECIDED, None, diag)

"""HOSVD canonicalization and the reduced-density (sorted trace) cross-check."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import left_singular
from .tensor import StateTensor, _check_mode, dagger, multi_apply, unfold


@dataclass(frozen=True)
class HOSVDResult:
    """Core tensor, per-mode factor unitaries and per-mode spectra.

    ``original == multi_apply(core, factors)``; ``spectra[n]`` has ``I_n``
    entries, non-increasing, with zeros padded in when the mode-``n``
    unfolding has fewer columns than rows.
    """

    core: StateTensor
    factors: tuple[np.ndarray, ...]
    spectra: tuple[np.ndarray, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return self.core.dims


def hosvd(t: StateTensor) -> HOSVDResult:
    """Left singular vectors of every unfolding, then ``core = (U_1^H x ... x U_N^H) t``.

    No gauge fixing is applied inside degenerate singular-value groups; the
    factors are whatever the Jacobi sweep produces, which is deterministic for
    a given input and backend.
    """
    factors = []
    spectra = []
    for n in range(t.order):
        u, sigma = left_singular(unfold(t, n))
        factors.append(u)
        spectra.append(sigma)
    core = multi_apply(t, [dagger(u) for u in factors])
    return HOSVDResult(core=core, factors=tuple(factors), spectra=tuple(spectra))


@dataclass
class CoreReport:
    """Residuals of the HOSVD invariants; ``passed`` iff every one is within ``tol``."""

    reconstruction: float
    orthogonality: float
    spectrum_mismatch: float
    energy: float
    unitarity: float
    ordering_violations: list[tuple[int, int]] = field(default_factory=list)
    tol: float = 1e-10

    @property
    def passed(self) -> bool:
        return (
            not self.ordering_violations
            and max(self.reconstruction, self.orthogonality, self.spectrum_mismatch,
                    self.energy, self.unitarity) <= self.tol
        )


def verify_core(r: HOSVDResult, original: StateTensor, tol: float = 1e-10) -> CoreReport:
    """Check a decomposition against ``original`` without raising.

    Ordering violations list ``(mode, index)`` pairs where the slice norm at
    ``index + 1`` exceeds the one at ``index`` by more than ``tol``, or where the
    stored spectrum itself increases.
    """
    recon = multi_apply(r.core, r.factors)
    reconstruction = float(np.max(np.abs(recon.data - original.data)))
    total = original.norm() ** 2
    orth = mismatch = energy = unit = 0.0
    violations = []
    for n in range(r.core.order):
        rows = unfold(r.core, n)
        gram = rows @ rows.conj().T
        norms = np.sqrt(np.abs(np.diag(gram)))
        off = gram - np.diag(np.diag(gram))
        if off.size:
            orth = max(orth, float(np.max(np.abs(off))))
        spec = np.asarray(r.spectra[n])
        mismatch = max(mismatch, float(np.max(np.abs(norms - spec))))
        energy = max(energy, abs(float(np.sum(spec ** 2)) - total))
        u = np.asarray(r.factors[n])
        unit = max(unit, float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0])))))
        for i in range(len(norms) - 1):
            if norms[i + 1] - norms[i] > tol or spec[i + 1] > spec[i]:
                violations.append((n, i))
    return CoreReport(reconstruction, orth, mismatch, energy, unit, violations, tol)


def reduced_density(t: StateTensor, n: int) -> np.ndarray:
    """Single-party reduced density matrix ``rho_n = T_(n) T_(n)^H``."""
    _check_mode(t.order, n)
    m = unfold(t, n)
    return m @ m.conj().T


def sorted_trace_spectrum(t: StateTensor, n: int) -> np.ndarray:
    """Descending eigenvalues of ``rho_n``; equal to the squared mode-``n`` spectrum.

    Computed with a Hermitian eigensolver rather than the Jacobi SVD so it can
    serve as an independent check on :func:`hosvd`.
    """
    evals = np.linalg.eigvalsh(reduced_density(t, n))
    return np.clip(evals[::-1], 0.0, None)

"""Pure-Python fallback for the one-sided Jacobi kernel.

``hestenes(a, vt, tol, abstol, max_sweeps)`` orthogonalizes the rows of ``a``
in place by cyclic-by-row plane rotations and applies every rotation to the
rows of ``vt`` as well. A pair is skipped once its overlap is below
``tol * |a_p| * |a_q|`` or below the absolute floor ``abstol``.

Returns the number of sweeps used, or -1 if rows were still being rotated
after ``max_sweeps`` sweeps. The compiled ``_jacobi`` module implements the
same rotation sequence.
"""

from __future__ import annotations

import math

import numpy as np


def hestenes(a: np.ndarray, vt: np.ndarray, tol: float, abstol: float, max_sweeps: int) -> int:
    m = a.shape[0]
    for sweep in range(max_sweeps):
        rotated = 0
        for p in range(m - 1):
            for q in range(p + 1, m):
                ap = a[p]
                aq = a[q]
                alpha = float(np.vdot(ap, ap).real)
                beta = float(np.vdot(aq, aq).real)
                gamma = complex(np.vdot(ap, aq))
                g = abs(gamma)
                if g <= abstol or g <= tol * math.sqrt(alpha) * math.sqrt(beta):
                    continue
                rotated += 1
                zeta = (beta - alpha) / (2.0 * g)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + math.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                phase = gamma.conjugate() / g
                for rows in (a, vt):
                    x = rows[p].copy()
                    z = phase * rows[q]
                    rows[p] = c * x - s * z
                    rows[q] = s * x + c * z
        if rotated == 0:
            return sweep + 1
    return -1

"""Adaptive embedded Runge-Kutta (Cash-Karp 5(4)) for complex vector fields.

Shared by the isomonodromic integrator and the Painleve-VI integrator.  The
state is a flat complex numpy array; a guard callback can reject steps that
enter a forbidden region (singularity margins), which triggers step-size
reduction and ultimately a StepUnderflowError.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

# Cash-Karp tableau
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [3 / 10, -9 / 10, 6 / 5],
    [-11 / 54, 5 / 2, -70 / 27, 35 / 27],
    [1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096],
]
_B5 = [37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771]
_B4 = [2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4]
_C = [0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8]


class StepUnderflowError(RuntimeError):
    pass


@dataclass
class IntegrationStats:
    steps: int = 0
    rejected: int = 0


def integrate(f: Callable[[float, np.ndarray], np.ndarray],
              y0: np.ndarray,
              s0: float,
              s1: float,
              tol: float = 1e-10,
              h0: Optional[float] = None,
              min_step: float = 1e-14,
              guard: Optional[Callable[[float, np.ndarray], bool]] = None,
              observer: Optional[Callable[[float, np.ndarray], None]] = None,
              ) -> tuple[np.ndarray, IntegrationStats]:
    """Integrate y' = f(s, y) from s0 to s1 (real parameter, complex state).

    `guard(s, y)` returning False marks (s, y) as inadmissible; the step is
    retried with a smaller h.  `observer` is called after each accepted step.
    """
    y = np.array(y0, dtype=complex)
    s = float(s0)
    span = s1 - s0
    if span == 0:
        return y, IntegrationStats()
    direction = 1.0 if span > 0 else -1.0
    h = abs(span) / 16 if h0 is None else abs(h0)
    stats = IntegrationStats()
    scale0 = max(1.0, float(np.abs(y).max()))
    while (s1 - s) * direction > 1e-16 * abs(span):
        h = min(h, abs(s1 - s))
        if h < min_step:
            raise StepUnderflowError(f"step size underflow at s={s}")
        hs = direction * h
        k = []
        failed = False
        for i in range(6):
            yi = y
            for j, aij in enumerate(_A[i]):
                yi = yi + hs * aij * k[j]
            if guard is not None and not guard(s + _C[i] * hs, yi):
                failed = True
                break
            k.append(f(s + _C[i] * hs, yi))
        if not failed:
            y5 = y + hs * sum(b * ki for b, ki in zip(_B5, k))
            y4 = y + hs * sum(b * ki for b, ki in zip(_B4, k))
            err = float(np.abs(y5 - y4).max())
            scale = max(scale0, float(np.abs(y5).max()))
            failed = err > tol * scale or not np.isfinite(err)
            if guard is not None and not failed:
                failed = not guard(s + hs, y5)
        if failed:
            stats.rejected += 1
            h *= 0.35
            continue
        s += hs
        y = y5
        stats.steps += 1
        if observer is not None:
            observer(s, y)
        # PI-ish growth control
        if err == 0:
            h *= 4.0
        else:
            h *= min(4.0, max(0.2, 0.9 * (tol * scale / err) ** 0.2))
    return y, stats

"""Tunneling oscillations: the two-level solution and a unitary grid propagator.

The initial state is the physical-well eigenstate ``psi_l``.  Occupations are
``P_l = int_{x<c} |Psi|^2`` and ``P_r = int_{x>=c} |Psi|^2``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError, StabilityBudgetExceeded

NORM_BUDGET = 1e-9


@dataclass(frozen=True)
class OccupationTrace:
    times: np.ndarray
    P_l: np.ndarray
    P_r: np.ndarray
    period: float
    transfer_time: float
    norm: np.ndarray | None = None

    @property
    def max_P_r(self):
        return float(self.P_r.max())

    def to_csv(self, path):
        """Write columns ``t, P_l, P_r, norm`` with 17 significant digits."""
        norm = self.norm if self.norm is not None else self.P_l + self.P_r
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["t", "P_l", "P_r", "norm"])
            for row in zip(self.times, self.P_l, self.P_r, norm):
                out.writerow([f"{value:.16e}" for value in row])


def two_level_evolve(result, alpha, t, hbar):
    """Amplitudes on ``psi_l`` and ``psi_r`` at time ``t`` starting from ``psi_l``."""
    t = np.asarray(t, dtype=float)
    c2, s2 = math.cos(alpha) ** 2, math.sin(alpha) ** 2
    ph1 = np.exp(-1j * t * result.E1 / hbar)
    ph2 = np.exp(-1j * t * result.E2 / hbar)
    amp_l = ph1 * c2 + ph2 * s2
    amp_r = math.cos(alpha) * math.sin(alpha) * (ph2 - ph1)
    return amp_l, amp_r


def occupation_probabilities(result, alpha, times, hbar):
    """Closed-form ``P_l(t)``, ``P_r(t)`` of the two-level model."""
    times = np.asarray(times, dtype=float)
    c2, s2 = math.cos(alpha) ** 2, math.sin(alpha) ** 2
    beat = np.cos(result.Delta * times / hbar)
    P_l = c2 * c2 + s2 * s2 + 2.0 * c2 * s2 * beat
    P_r = 2.0 * c2 * s2 * (1.0 - beat)
    period = 2.0 * math.pi * hbar / result.Delta
    return OccupationTrace(times, P_l, P_r, period, 0.5 * period)


def p_r_max(delta, detuning):
    """Largest probing-well occupation, ``delta^2 / (delta^2 + detuning^2)``."""
    if not delta > 0:
        raise InputError("delta must be positive")
    return delta * delta / (delta * delta + detuning * detuning)


def _parabolic_vertex(times, values, i):
    if i == 0 or i == values.size - 1:
        return float(times[i]), float(values[i])
    t0, t1, t2 = times[i - 1], times[i], times[i + 1]
    y0, y1, y2 = values[i - 1], values[i], values[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom >= 0.0 or not np.isclose(t1 - t0, t2 - t1):
        return float(t1), float(y1)
    shift = 0.5 * (y0 - y2) / denom
    return float(t1 + shift * (t1 - t0)), float(y1 - 0.25 * (y0 - y2) * shift)


def peak_times(times, values, level=0.5):
    """Maxima of each excursion above ``level * max(values)``, parabola-refined.

    Working per excursion ignores ripples from weak admixtures of other eigenstates.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    above = values > level * values.max()
    peaks = []
    i = 0
    while i < values.size:
        if not above[i]:
            i += 1
            continue
        j = i
        while j < values.size and above[j]:
            j += 1
        k = i + int(np.argmax(values[i:j]))
        peaks.append(_parabolic_vertex(times, values, k))
        i = j
    return peaks


def grid_propagate(op, psi0, t_final, steps, c_split=None, record_every=1, energy_shift=None,
                   norm_budget=NORM_BUDGET):
    """Crank-Nicolson propagation of ``psi0`` under the discretised Hamiltonian.

    The Cayley form is unitary, so the norm is conserved to round-off.  The
    Hamiltonian is shifted by ``energy_shift`` (default: the energy
    expectation of ``psi0``), which changes only a global phase but keeps the
    slow tunneling beat free of the scheme's phase error.

    ``psi0`` is a :class:`~tunnelcatch.eigensolve.BoundState` or a full-grid
    array.  The returned trace carries the time of the first ``P_r`` maximum
    as ``transfer_time``.
    """
    grid = op.grid
    if c_split is not None:
        grid = grid.with_split(c_split)
    split = grid.split_index - 1  # interior indexing
    psi = np.asarray(getattr(psi0, "psi", psi0))
    if psi.shape[0] != grid.n:
        raise InputError("initial state does not live on the operator grid")
    inner = psi[1:-1].astype(complex)
    h = grid.h
    inner /= math.sqrt(float(np.sum(np.abs(inner) ** 2)) * h)
    if energy_shift is None:
        energy_shift = float(np.real(np.vdot(inner, op.matvec(inner)))) * h
    if steps < 1 or record_every < 1:
        raise InputError("steps and record_every must be positive")
    dt = t_final / steps
    P_l, P_r, norm, _ = _kernels.cn_propagate(op.diag, op.off, inner, 0.5 * dt / op.hbar, energy_shift,
                                              int(steps), int(record_every), int(split), h)
    drift = float(np.max(np.abs(norm - 1.0)))
    if drift > norm_budget:
        raise StabilityBudgetExceeded(f"norm drifted by {drift:.3g}")
    times = dt * record_every * np.arange(P_r.shape[0])
    peaks = peak_times(times, P_r)
    peak_t = peaks[0][0] if peaks else float("nan")
    # successive maxima give the beat period directly; otherwise assume a symmetric first half-cycle
    period = peaks[1][0] - peaks[0][0] if len(peaks) > 1 else 2.0 * peak_t
    return OccupationTrace(times, np.asarray(P_l), np.asarray(P_r), period, peak_t, np.asarray(norm))

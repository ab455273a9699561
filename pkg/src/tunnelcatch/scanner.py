"""Resonance scans of the probing well and energy detection from the first peak.

Peaks of ``P_r^max`` are exponentially narrow, so a uniform pre-scan only
brackets the zero-detuning points; each zero is then localised by root
finding and resolved with Lorentzian-scale sampling around it.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from . import semiclassic, squarewell
from .eigensolve import BoundState, classical_frequency
from .errors import InputError, NoPeakFound, NotFirstPeak, ValidityViolated
from .model import check_separation

WIDTH = "width"
DEPTH = "depth"
PARAMETERS = (WIDTH, DEPTH)
PEAK_THRESHOLD = 0.5
# off-resonance criterion between peaks
OFF_RESONANCE = 0.01
MIN_POINTS_ABOVE_HALF = 7
_TOP = 4 * np.finfo(float).eps


class ScanSample(NamedTuple):
    param: float
    P_r_max: float
    Delta: float
    delta: float
    E_r: float
    k: int
    detuning: float


class PeakRecord(NamedTuple):
    k: int
    param_at_peak: float
    predicted_param: float
    P_at_peak: float
    fwhm_param: float
    spacing: float
    fwhm_energy: float
    delta: float


class InferredEnergy(NamedTuple):
    exact: float
    series: float
    k: int


@dataclass(frozen=True)
class ScanCurve:
    parameter: str
    samples: tuple
    E_l: float
    spec: object = field(repr=False)
    peaks: tuple = ()

    def column(self, name):
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def params(self):
        return self.column("param")

    @property
    def P(self):
        return self.column("P_r_max")

    def to_csv(self, path):
        """Columns ``param, P_r_max, delta, detuning, k``."""
        with open(path, "w") as fh:
            fh.write("param,P_r_max,delta,detuning,k\n")
            for s in self.samples:
                fh.write(f"{s.param:.16e},{s.P_r_max:.16e},{s.delta:.16e},{s.detuning:.16e},{s.k}\n")

    def peaks_report(self):
        return {
            "parameter": self.parameter,
            "E_l": _fmt(self.E_l),
            "peaks": [{name: (_fmt(val) if isinstance(val, float) else val) for name, val in p._asdict().items()}
                      for p in self.peaks],
        }

    def write_peaks(self, path):
        with open(path, "w") as fh:
            json.dump(self.peaks_report(), fh, indent=2)
            fh.write("\n")


def _fmt(x):
    return float(f"{x:.16e}")


def worker_count():
    try:
        n = int(os.environ.get("TUNNELCATCH_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else min(4, os.cpu_count() or 1)


class _Sampler:
    """Evaluates ``P_r^max`` for one parameter value of a fixed template."""

    def __init__(self, spec, parameter, E_l, delta_fn, psi_l=None, omega_l=None):
        if parameter not in PARAMETERS:
            raise InputError(f"parameter must be one of {PARAMETERS}")
        if delta_fn not in ("wkb", "wronskian"):
            raise InputError("delta_fn must be 'wkb' or 'wronskian'")
        if delta_fn == "wronskian" and psi_l is None:
            raise InputError("the Wronskian coupling needs the physical state psi_l")
        self.spec, self.parameter, self.E_l = spec, parameter, E_l
        self.delta_fn, self.psi_l = delta_fn, psi_l
        sep = check_separation(spec, E_l)
        if not sep.valid:
            raise ValidityViolated(
                f"b - a = {spec.b - spec.a:.6g} does not exceed the separation integral {sep.integral:.6g}")
        self.barrier = semiclassic.barrier_center(spec, E_l)
        semiclassic.require_two_level(self.barrier)
        self.omega_l = omega_l if omega_l is not None else classical_frequency(spec.left, E_l)

    def spec_at(self, p):
        return self.spec.with_width(p) if self.parameter == WIDTH else self.spec.with_depth(p)

    def level(self, p, k):
        """Level ``k`` at parameter ``p``; ``0.0`` when it does not exist (never matches ``E_l < 0``)."""
        s = self.spec_at(p).right
        E = squarewell.solve_level(s.v, s.w, self.spec.hbar, k)
        return 0.0 if E is None else E

    def delta(self, spec, k, E_r):
        E_l, v = self.E_l, spec.right.v
        if v + E_l <= 0.0:
            return 0.0
        if self.delta_fn == "wkb":
            return semiclassic.wkb_delta(spec, E_l, self.omega_l, self.barrier)
        grid = self.psi_l.grid
        psi = squarewell.eigenfunction(v, spec.right.w, spec.hbar, spec.b, k, grid.x, E=E_r)
        psi_r = BoundState(E_r, psi, k, grid)
        return semiclassic.wronskian_delta(self.psi_l, psi_r, self.barrier.c, spec.hbar)

    def __call__(self, p):
        spec = self.spec_at(p)
        levels = squarewell.solve_levels(spec.right.v, spec.right.w, spec.hbar)
        if not levels:
            return ScanSample(p, 0.0, math.inf, 0.0, 0.0, -1, math.inf)
        best = min(levels, key=lambda lv: abs(lv.E - self.E_l))
        detuning = best.E - self.E_l
        delta = self.delta(spec, best.k, best.E)
        if delta == 0.0:
            return ScanSample(p, 0.0, abs(detuning), 0.0, best.E, best.k, detuning)
        Delta = math.hypot(delta, detuning)
        return ScanSample(p, (delta / Delta) ** 2, Delta, delta, best.E, best.k, detuning)


def sample_at(spec, parameter, value, E_l, delta_fn="wkb", psi_l=None, omega_l=None):
    """One scan sample at ``value`` of the width or depth."""
    return _Sampler(spec, parameter, E_l, delta_fn, psi_l, omega_l)(float(value))


def _evaluate(sampler, params, workers):
    if workers <= 1 or len(params) < 2:
        return [sampler(p) for p in params]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(sampler, params))


def _zero_crossings(sampler, params):
    """Parameters where some level's detuning vanishes, localised by root finding."""
    top = sampler.spec_at(params[-1]).right
    bottom = sampler.spec_at(params[0]).right
    n_levels = max(squarewell.level_count(top.v, top.w, sampler.spec.hbar),
                   squarewell.level_count(bottom.v, bottom.w, sampler.spec.hbar))
    zeros = []
    for k in range(n_levels):
        f = lambda p: sampler.level(p, k) - sampler.E_l
        values = [f(p) for p in params]
        for i in range(len(params) - 1):
            if values[i] == 0.0:
                zeros.append((k, params[i]))
            elif values[i] > 0.0 > values[i + 1]:
                zeros.append((k, optimize.brentq(f, params[i], params[i + 1], xtol=1e-300,
                                                 rtol=4 * np.finfo(float).eps, maxiter=500)))
    return zeros


def _half_width(sampler, k, p0):
    """Parameter distance from the zero at which detuning equals delta."""
    step = 1e-7 * abs(p0)
    slope = (sampler.level(p0 + step, k) - sampler.level(p0 - step, k)) / (2.0 * step)
    spec = sampler.spec_at(p0)
    delta = sampler.delta(spec, k, sampler.level(p0, k))
    if slope == 0.0 or delta == 0.0:
        return 0.0
    return delta / abs(slope)


def scan(spec, parameter, lo, hi, n_samples, E_l, delta_fn="wkb", psi_l=None, omega_l=None, refine=True,
         workers=None):
    """Sample ``P_r^max`` over ``[lo, hi]`` of the probing-well width or depth.

    Each sample takes the probing level nearest ``E_l``, a coupling from
    ``delta_fn`` (``"wkb"`` or ``"wronskian"``; the latter needs the physical
    state ``psi_l``) and evaluates ``delta^2 / (delta^2 + detuning^2)``.  With
    ``refine`` every zero-detuning point found in the range is resolved with
    at least seven samples above half maximum.
    """
    if not hi > lo:
        raise InputError(f"empty scan range [{lo}, {hi}]")
    if n_samples < 2:
        raise InputError("a scan needs at least two samples")
    sampler = _Sampler(spec, parameter, E_l, delta_fn, psi_l, omega_l)
    workers = worker_count() if workers is None else workers
    params = list(np.linspace(lo, hi, n_samples))
    samples = {p: s for p, s in zip(params, _evaluate(sampler, params, workers))}

    if refine:
        for k, p0 in _zero_crossings(sampler, params):
            hw = _half_width(sampler, k, p0)
            if hw == 0.0:
                continue
            spacing = 0.2
            for _ in range(6):
                offsets = np.arange(-40, 41) * spacing
                new = [float(p) for p in p0 + hw * offsets if lo <= p <= hi and p not in samples]
                new.append(p0) if p0 not in samples else None
                for p, s in zip(new, _evaluate(sampler, new, workers)):
                    samples[p] = s
                peak = samples[p0].P_r_max
                near = [s for s in samples.values() if abs(s.param - p0) <= 2.0 * hw and s.k == k]
                if sum(s.P_r_max >= 0.5 * peak for s in near) >= MIN_POINTS_ABOVE_HALF:
                    break
                spacing /= 2.0

    ordered = tuple(samples[p] for p in sorted(samples))
    curve = ScanCurve(parameter, ordered, E_l, spec)
    return ScanCurve(parameter, ordered, E_l, spec, tuple(find_peaks(curve)))


def _vertex(x, y):
    # parabola through three (possibly unevenly spaced) points
    (x0, x1, x2), (y0, y1, y2) = x, y
    d0, d2 = x0 - x1, x2 - x1
    denom = d0 * d2 * (d0 - d2)
    if denom == 0.0:
        return x1, y1
    a = (d2 * (y0 - y1) - d0 * (y2 - y1)) / denom
    b = (d0 * d0 * (y2 - y1) - d2 * d2 * (y0 - y1)) / denom
    if a >= 0.0:
        return x1, y1
    t = -b / (2.0 * a)
    return x1 + t, y1 + b * t + a * t * t


def _crossing(x, y, i, step, half):
    j = i
    while 0 <= j + step < len(y) and y[j + step] >= half:
        j += step
    nxt = j + step
    if not 0 <= nxt < len(y):
        return None
    # linear interpolation between j (above) and nxt (below)
    return x[j] + (half - y[j]) * (x[nxt] - x[j]) / (y[nxt] - y[j])


def _predicted(curve, k):
    s, hbar = curve.spec.right, curve.spec.hbar
    try:
        if curve.parameter == WIDTH:
            return squarewell.resonance_width(curve.E_l, s.v, hbar, k)
        return squarewell.resonance_depth(curve.E_l, s.w, hbar, k).exact
    except InputError:
        return math.nan


def find_peaks(curve, threshold=PEAK_THRESHOLD):
    """Local maxima of ``P_r^max`` above ``threshold`` with sub-sample refinement."""
    x, y = curve.params, curve.P
    E_r, ks, deltas = curve.column("E_r"), curve.column("k"), curve.column("delta")
    peaks = []
    i = 1
    while i < len(y) - 1:
        if y[i] > threshold and y[i] >= y[i - 1] and y[i] > y[i + 1]:
            if 1.0 - y[i] <= _TOP:
                # the sample already sits on the zero-detuning top
                center, height = x[i], y[i]
            else:
                # 1/P of a Lorentzian is an exact parabola in the detuning
                center, inv_height = _vertex(x[i - 1:i + 2], -1.0 / y[i - 1:i + 2])
                height = -1.0 / inv_height
            half = 0.5 * y[i]
            left, right = _crossing(x, y, i, -1, half), _crossing(x, y, i, +1, half)
            fwhm = right - left if left is not None and right is not None else math.nan
            slope = (E_r[i + 1] - E_r[i - 1]) / (x[i + 1] - x[i - 1])
            k = int(ks[i])
            peaks.append(PeakRecord(k, float(center), _predicted(curve, k), float(min(height, 1.0)), float(fwhm),
                                    float(max(x[i] - x[i - 1], x[i + 1] - x[i])), float(abs(slope) * fwhm),
                                    float(deltas[i])))
        i += 1
    return peaks


def infer_energy(first_peak, v, w_at_peak, hbar):
    """Energy of the physical state from the first (``k = 0``) resonance.

    Returns the exact root of the quantization condition at the peak
    parameters and the small-hbar series
    ``-v + pi^2 hbar^2 / w^2 - 4 pi^2 hbar^3 / (w^3 sqrt(v))``.
    """
    if first_peak.k != 0:
        raise NotFirstPeak(f"peak belongs to level k={first_peak.k}, not k=0")
    exact = squarewell.solve_level(v, w_at_peak, hbar, 0)
    series = squarewell.level_asymptotic(v, w_at_peak, hbar, 0, order=1)
    return InferredEnergy(exact, series, 0)


class Detection(NamedTuple):
    curve: ScanCurve
    peak: PeakRecord
    energy: InferredEnergy
    v: float
    w: float


def detect_energy(spec, parameter, lo, hi, n_samples, E_l, delta_fn="wkb", psi_l=None, omega_l=None, workers=None):
    """Scan upward from ``lo`` and infer the physical energy from the first peak.

    The range must start where no probing level can match ``E_l`` yet, so the
    first peak met is the ``k = 0`` resonance.
    """
    curve = scan(spec, parameter, lo, hi, n_samples, E_l, delta_fn, psi_l, omega_l, workers=workers)
    if not curve.peaks:
        raise NoPeakFound(f"no resonance peak in {parameter} range [{lo}, {hi}]")
    first = curve.peaks[0]
    probe = spec.with_width(first.param_at_peak) if parameter == WIDTH else spec.with_depth(first.param_at_peak)
    energy = infer_energy(first, probe.right.v, probe.right.w, spec.hbar)
    return Detection(curve, first, energy, probe.right.v, probe.right.w)

"""Analytic spectrum of the isolated square probing well and its resonance tuning.

The negative levels of ``-hbar**2 d^2/dx^2 - v 1_(b, b+w)`` solve

    w sqrt(v + E) / hbar = pi (k + 1/2) - arctan((v + 2E) / (2 sqrt(-E (v + E))))

for ``k = 0, 1, ...``.  Internally the equation is written in ``y = v + E`` so
that levels near the bottom keep full relative precision.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .errors import EnergyOutOfRange, InputError, NoDepthRoot, RootBracketFailure

_EPS = np.finfo(float).eps


class SquareWellLevel(NamedTuple):
    k: int
    E: float
    residual: float


class DepthResonance(NamedTuple):
    exact: float
    asymptotic: float


def _check_positive(**kw):
    for name, value in kw.items():
        if not value > 0:
            raise InputError(f"{name} must be positive, got {value}")


def _phase(y, minus_e):
    # arctan((v + 2E) / (2 sqrt(-E (v + E)))) with v + E = y, -E = minus_e
    return math.atan2(y - minus_e, 2.0 * math.sqrt(minus_e * y))


def quantization_residual(E, v, w, hbar, k):
    """Left side minus right side of the quantization condition at level ``k``."""
    y, minus_e = v + E, -E
    return w * math.sqrt(y) / hbar - math.pi * (k + 0.5) + _phase(y, minus_e)


def _residual_y(y, v, w, hbar, k):
    return w * math.sqrt(y) / hbar - math.pi * (k + 0.5) + _phase(y, v - y)


def level_count(v, w, hbar):
    """Number of bound levels, ``floor(w sqrt(v) / (pi hbar)) + 1``."""
    _check_positive(v=v, w=w, hbar=hbar)
    return int(math.floor(w * math.sqrt(v) / (math.pi * hbar))) + 1


def solve_level(v, w, hbar, k):
    """Energy of level ``k``; ``None`` when the level does not exist."""
    _check_positive(v=v, w=w, hbar=hbar)
    if k < 0:
        raise InputError("level index must be non-negative")
    lo, hi = _EPS * v, v * (1.0 - _EPS)
    f_lo, f_hi = _residual_y(lo, v, w, hbar, k), _residual_y(hi, v, w, hbar, k)
    if f_hi <= 0.0:
        return None
    if f_lo >= 0.0:
        raise RootBracketFailure(f"level {k}: residual does not change sign on (-v, 0)")
    y, info = optimize.brentq(_residual_y, lo, hi, args=(v, w, hbar, k), xtol=1e-300, rtol=4 * _EPS,
                              maxiter=500, full_output=True)
    if not info.converged:
        raise RootBracketFailure(f"level {k}: root polish did not converge")
    return y - v


def solve_levels(v, w, hbar):
    """All negative levels, sorted by ``k``."""
    levels = []
    for k in range(level_count(v, w, hbar)):
        E = solve_level(v, w, hbar, k)
        if E is None:  # threshold level sitting at E = 0
            break
        levels.append(SquareWellLevel(k, E, quantization_residual(E, v, w, hbar, k)))
    return levels


def level_asymptotic(v, w, hbar, k, order=3):
    """Small-hbar expansion of level ``k``.

    ``order`` counts the correction terms kept inside the bracket multiplying
    the particle-in-a-box energy (0 keeps only that leading term, 3 keeps all).
    """
    if not 0 <= order <= 3:
        raise InputError("order must be between 0 and 3")
    K = (k + 1) ** 2 * math.pi**2
    u = hbar / (w * math.sqrt(v))
    terms = (1.0, -4.0 * u, 12.0 * u**2, -2.0 * (48.0 + K) / 3.0 * u**3)
    return -v + hbar**2 * K / w**2 * math.fsum(terms[: order + 1])


def resonance_width(E_l, v, hbar, k):
    """Width that places level ``k`` of the probing well exactly at ``E_l``."""
    if not -v < E_l < 0:
        raise EnergyOutOfRange(f"E_l={E_l} outside (-v, 0) = ({-v}, 0)")
    y = v + E_l
    bracket = k + 0.5 - math.atan((v + 2.0 * E_l) / (2.0 * math.sqrt(-E_l * y))) / math.pi
    return math.pi * hbar / math.sqrt(y) * bracket


def _depth_residual(u, E_l, w, hbar, k):
    # residual in u = v + E_l > 0
    return w * math.sqrt(u) / hbar - math.pi * (k + 0.5) + _phase(u, -E_l)


def resonance_depth_asymptotic(E_l, w, hbar, k):
    if not E_l < 0:
        raise EnergyOutOfRange(f"E_l={E_l} must be negative")
    K = (k + 1) ** 2 * math.pi**2
    u = hbar / (w * math.sqrt(-E_l))
    terms = (1.0, -4.0 * u, 12.0 * u**2, -4.0 * (24.0 - K) / 3.0 * u**3)
    return -E_l + hbar**2 * K / w**2 * math.fsum(terms)


def resonance_depth(E_l, w, hbar, k):
    """Depth placing level ``k`` at ``E_l``: exact root and small-hbar series."""
    if not E_l < 0:
        raise EnergyOutOfRange(f"E_l={E_l} must be negative")
    _check_positive(w=w, hbar=hbar)
    lo = _EPS * (-E_l)
    hi = 4.0 * (math.pi * hbar * (k + 1) / w) ** 2 + (-E_l)
    for _ in range(200):
        if _depth_residual(hi, E_l, w, hbar, k) > 0.0:
            break
        hi *= 2.0
    else:
        raise NoDepthRoot(f"no depth brings level {k} down to {E_l}")
    u = optimize.brentq(_depth_residual, lo, hi, args=(E_l, w, hbar, k), xtol=1e-300, rtol=4 * _EPS, maxiter=500)
    return DepthResonance(u - E_l, resonance_depth_asymptotic(E_l, w, hbar, k))


def eigenfunction(v, w, hbar, b, k, x, E=None):
    """Unit-normalised eigenfunction of level ``k`` on the real line, evaluated at ``x``.

    Positive on its first lobe, matching the grid eigenvector sign convention.
    """
    if E is None:
        E = solve_level(v, w, hbar, k)
        if E is None:
            raise InputError(f"level {k} does not exist")
    x = np.asarray(x, dtype=float)
    q = math.sqrt(v + E) / hbar
    kappa = math.sqrt(-E) / hbar
    phi = math.atan2(kappa, q)
    amp = 1.0 / math.sqrt(0.5 * w + 1.0 / kappa)
    inside = amp * np.cos(q * (x - b) - phi)
    left = amp * math.cos(phi) * np.exp(np.minimum(kappa * (x - b), 0.0))
    right_edge = amp * math.cos(q * w - phi)
    right = right_edge * np.exp(-np.maximum(kappa * (x - b - w), 0.0))
    return np.where(x <= b, left, np.where(x >= b + w, right, inside))

"""Semiclassical barrier quantities and the two-level approximation.

Barrier actions use ``|p| = sqrt(V - E)``.  The coupling ``delta`` is available
from the WKB closed form (square probing well) and from the Wronskian of the
isolated-well eigenfunctions at the barrier center.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import optimize

from ._quadrature import turning_point_integral
from .errors import BarrierPierced, GridMismatch, InvalidTwoLevel, NonPositiveDelta
from .model import turning_points

# allowance for V - E at quadrature nodes next to a turning point
_PIERCE_TOL = 1e-9


class BarrierData(NamedTuple):
    S_l: float
    S_r: float
    c: float
    full_action: float
    valid_two_level: bool
    x_l: float
    x_r: float
    energy: float


class TwoLevelResult(NamedTuple):
    E1: float
    E2: float
    delta: float
    Delta: float
    alpha: float
    E_l: float
    E_r: float

    @property
    def detuning(self):
        return self.E_r - self.E_l


def tunnel_action(spec, E, lo, hi):
    """``int sqrt(V - E) dx`` over ``[lo, hi]`` inside the barrier.

    ``spec`` is any callable potential.  Endpoints where ``V = E`` get the
    square-root substitution.
    """
    if hi == lo:
        return 0.0
    if hi < lo:
        return -tunnel_action(spec, E, hi, lo)
    scale = max(1.0, abs(E))

    def f(x):
        gap = float(spec(x)) - E
        if gap < -_PIERCE_TOL * scale:
            raise BarrierPierced(f"V({x:.6g}) - E = {gap:.3g} < 0 inside the barrier")
        return math.sqrt(max(gap, 0.0))

    def at_turning(x):
        # turning points of the smooth well, or the square wall seen from the barrier side
        return abs(float(spec(x)) - E) <= 1e-8 * scale

    return turning_point_integral(f, lo, hi, singular_lo=at_turning(lo), singular_hi=at_turning(hi))


def equal_action_point(potential, E, x_l, x_r, total=None):
    """Point splitting the barrier action over ``[x_l, x_r]`` into equal halves.

    Works for any callable potential, not only the square-wall geometry.
    """
    if total is None:
        total = tunnel_action(potential, E, x_l, x_r)
    g = lambda x: tunnel_action(potential, E, x_l, x) - 0.5 * total
    return optimize.brentq(g, x_l, x_r, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def _center_closed_form(spec, E, S_l):
    return 0.5 * (spec.a + spec.b) - S_l / (2.0 * math.sqrt(-E))


def barrier_center(spec, E, method="closed"):
    """Barrier actions and the equal-action point ``c``.

    ``method="closed"`` uses the square-wall closed form
    ``c = (a + b)/2 - S_l / (2 sqrt(-E))``; ``method="root"`` solves the
    equal-action condition numerically.  Both are exposed so they can be
    checked against each other.
    """
    x_l, x_r, _ = turning_points(spec, E)
    a = spec.a
    S_l = tunnel_action(spec, E, x_l, a)
    S_r = 0.0  # vertical wall: x_r = b
    full = S_l + (spec.b - a) * math.sqrt(-E) + S_r
    if method == "closed":
        c = _center_closed_form(spec, E, S_l)
    elif method == "root":
        c = equal_action_point(spec, E, x_l, x_r, total=full)
    else:
        raise ValueError(f"unknown method {method!r}")
    return BarrierData(S_l, S_r, c, full, bool(a < c < spec.b), x_l, x_r, E)


def require_two_level(barrier):
    if not barrier.valid_two_level:
        raise InvalidTwoLevel(
            f"barrier center c={barrier.c:.6g} is not between the well supports; "
            "the probing well is too close to the physical well")
    return barrier


def wkb_delta(spec, E, omega_l, barrier=None):
    """WKB coupling between the physical well and a square probing well at energy ``E``.

    ``2 hbar (-E)^(1/4) sqrt(2 (v + E) omega_l / (pi v w)) exp(-S / hbar)``
    with ``S`` the full barrier action between the turning points.
    """
    if barrier is None:
        barrier = barrier_center(spec, E)
    require_two_level(barrier)
    v, w, hbar = spec.right.v, spec.right.w, spec.hbar
    prefactor = 2.0 * hbar * (-E) ** 0.25 * math.sqrt(2.0 * (v + E) * omega_l / (math.pi * v * w))
    return prefactor * math.exp(-barrier.full_action / hbar)


def _same_grid(a, b):
    ga, gb = a.grid, b.grid
    return ga.n == gb.n and ga.x_min == gb.x_min and ga.x_max == gb.x_max


def wronskian_delta(psi_l, psi_r, c, hbar):
    """``|2 hbar^2 (psi_l psi_r' - psi_r psi_l')|`` at the grid node nearest ``c``."""
    if not _same_grid(psi_l, psi_r):
        raise GridMismatch("states live on different grids")
    grid = psi_l.grid
    j = int(round((c - grid.x_min) / grid.h))
    if not 1 <= j <= grid.n - 2:
        raise GridMismatch(f"barrier center {c} is not an interior grid node")
    h = grid.h
    l, r = psi_l.psi, psi_r.psi
    dl = (l[j + 1] - l[j - 1]) / (2.0 * h)
    dr = (r[j + 1] - r[j - 1]) / (2.0 * h)
    return abs(2.0 * hbar**2 * (l[j] * dr - r[j] * dl))


def two_level_spectrum(E_l, E_r, delta):
    """Eigenvalue pair, splitting and mixing angle of the two-level model."""
    if not delta > 0:
        raise NonPositiveDelta(f"delta must be positive, got {delta}")
    mean = 0.5 * (E_r + E_l)
    detuning = E_r - E_l
    Delta = math.hypot(delta, detuning)
    ratio = detuning / delta
    # tan(alpha) = ratio + sqrt(1 + ratio^2); the cotangent form avoids cancellation for ratio << 0
    if ratio >= 0:
        alpha = math.atan(ratio + math.hypot(1.0, ratio))
    else:
        alpha = 0.5 * math.pi - math.atan(-ratio + math.hypot(1.0, ratio))
    return TwoLevelResult(mean - 0.5 * Delta, mean + 0.5 * Delta, delta, Delta, alpha, E_l, E_r)


def bilocalized_states(psi_l, psi_r, alpha):
    """``(psi_l cos a + psi_r sin a, psi_l sin a - psi_r cos a)``, each renormalised."""
    if not _same_grid(psi_l, psi_r):
        raise GridMismatch("states live on different grids")
    h = psi_l.grid.h
    ca, sa = math.cos(alpha), math.sin(alpha)
    out = []
    for u in (ca * psi_l.psi + sa * psi_r.psi, sa * psi_l.psi - ca * psi_r.psi):
        out.append(u / math.sqrt(np.sum(u * u) * h))
    return tuple(out)

"""Double-well potential: a smooth physical well plus a square probing well.

Units are dimensionless and the Hamiltonian is ``H = -hbar**2 d^2/dx^2 + V``,
so the classical Hamiltonian is ``p**2 + V`` and ``dx/dt = 2 p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy import optimize

from ._quadrature import turning_point_integral
from .errors import InputError, NonMonotoneSlope, NoTurningPoint

HARMONIC_CAP = "harmonic_cap"
SMOOTH_BUMP = "smooth_bump"
FAMILIES = (HARMONIC_CAP, SMOOTH_BUMP)

ROOT_XTOL = 1e-15


@dataclass(frozen=True)
class PhysicalWellSpec:
    """Smooth, compactly supported left well with minimum ``-depth`` at ``center``.

    ``harmonic_cap`` is the parabola ``-depth + omega**2/4 (x-center)**2``
    clipped at zero, so its natural support is ``center +/- 2 sqrt(depth)/omega``.
    ``smooth_bump`` is the C-infinity bump ``-depth exp(1 - 1/(1-s**2))`` with
    ``s = 2 (x - center) / L`` on a support of length ``L`` centred on ``center``.
    """

    family: str
    depth: float
    support: tuple[float, float]
    center: float
    omega: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown well family {self.family!r}; expected one of {FAMILIES}")
        if not self.depth > 0:
            raise InputError("well depth must be positive")
        lo, hi = self.support
        if not hi > lo:
            raise InputError("well support must have positive length")
        if not lo < self.center < hi:
            raise InputError("well center must lie inside the support")
        if self.family == HARMONIC_CAP:
            if self.omega is None or not self.omega > 0:
                raise InputError("harmonic_cap needs a positive omega")
        elif not math.isclose(self.center, 0.5 * (lo + hi), rel_tol=0.0, abs_tol=1e-12 * (hi - lo)):
            raise InputError("smooth_bump center must be the midpoint of its support")
        object.__setattr__(self, "support", (float(lo), float(hi)))

    @classmethod
    def harmonic_cap(cls, depth, omega, center=0.0, support=None):
        if support is None:
            r = 2.0 * math.sqrt(depth) / omega
            support = (center - r, center + r)
        return cls(HARMONIC_CAP, float(depth), tuple(support), float(center), float(omega))

    @classmethod
    def smooth_bump(cls, depth, support):
        lo, hi = support
        return cls(SMOOTH_BUMP, float(depth), (lo, hi), 0.5 * (lo + hi))

    @property
    def a(self):
        """Right edge of the support."""
        return self.support[1]

    @property
    def width(self):
        return self.support[1] - self.support[0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (x > lo) & (x < hi)
        if self.family == HARMONIC_CAP:
            shape = np.minimum(-self.depth + 0.25 * self.omega**2 * (x - self.center) ** 2, 0.0)
        else:
            s2 = (2.0 * (x - self.center) / self.width) ** 2
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                shape = -self.depth * np.exp(1.0 - 1.0 / (1.0 - np.where(s2 < 1.0, s2, 0.0)))
            inside &= s2 < 1.0
        out = np.where(inside, shape, 0.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SquareWellSpec:
    b: float
    w: float
    v: float

    def __post_init__(self):
        if not self.w > 0:
            raise InputError("probing well width must be positive")
        if not self.v > 0:
            raise InputError("probing well depth must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where((x > self.b) & (x < self.b + self.w), -self.v, 0.0)
        return out if out.ndim else float(out)

    def cell_average(self, x, h):
        """Mean of the well over ``[x - h/2, x + h/2]``; continuous in ``b`` and ``w``."""
        x = np.asarray(x, dtype=float)
        overlap = np.minimum(x + 0.5 * h, self.b + self.w) - np.maximum(x - 0.5 * h, self.b)
        return -self.v * np.clip(overlap, 0.0, None) / h


@dataclass(frozen=True)
class DoubleWellSpec:
    left: PhysicalWellSpec
    right: SquareWellSpec
    hbar: float

    def __post_init__(self):
        if not self.hbar > 0:
            raise InputError("hbar must be positive")
        if not self.left.a < self.right.b:
            raise InputError(f"well supports intersect: a={self.left.a} >= b={self.right.b}")

    @property
    def a(self):
        return self.left.a

    @property
    def b(self):
        return self.right.b

    def __call__(self, x):
        return self.left(x) + self.right(x)

    def cell_average(self, x, h):
        return self.left(x) + self.right.cell_average(x, h)

    def with_width(self, w):
        return replace(self, right=replace(self.right, w=float(w)))

    def with_depth(self, v):
        return replace(self, right=replace(self.right, v=float(v)))

    def with_hbar(self, hbar):
        return replace(self, hbar=float(hbar))


class TurningPoints(NamedTuple):
    x_l: float
    x_r: float
    energy: float


class Separation(NamedTuple):
    valid: bool
    margin: float
    integral: float


def eval_potential(spec, x):
    """Return ``V_l(x) + V_r(x)``; exactly zero outside both supports."""
    return spec(x)


def left_turning_point(left, E):
    """Root of ``V_l(x) = E`` on the inner (right) slope of the physical well."""
    if not E < 0:
        raise NoTurningPoint(f"energy {E} is not negative")
    if not E > -left.depth:
        raise NoTurningPoint(f"energy {E} lies below the well minimum {-left.depth}")
    lo, hi = left.center, left.a
    f = lambda x: float(left(x)) - E
    # A support edge below E (clipped cap) acts as a vertical wall.
    edge = float(left(np.nextafter(hi, lo)))
    if edge - E < 0.0:
        return hi
    if f(lo) >= 0.0:
        raise NonMonotoneSlope("well minimum does not lie below the requested energy")
    if edge - E == 0.0:
        return hi
    try:
        x, info = optimize.brentq(f, lo, np.nextafter(hi, lo), xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps,
                                  maxiter=200, full_output=True)
    except ValueError as exc:
        raise NonMonotoneSlope(str(exc)) from exc
    if not info.converged:
        raise NonMonotoneSlope("turning point search did not converge")
    return x


def outer_turning_point(left, E):
    """Root of ``V_l(x) = E`` on the outer (left) slope of the physical well."""
    if not -left.depth < E < 0:
        raise NoTurningPoint(f"energy {E} outside ({-left.depth}, 0)")
    lo, hi = left.support[0], left.center
    f = lambda x: float(left(x)) - E
    edge = float(left(np.nextafter(lo, hi)))
    if edge - E <= 0.0:
        return lo
    try:
        return optimize.brentq(f, np.nextafter(lo, hi), hi, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)
    except ValueError as exc:
        raise NonMonotoneSlope(str(exc)) from exc


def turning_points(spec, E):
    """Barrier turning points at energy ``E``; the square wall gives ``x_r = b``."""
    if not E > -spec.right.v:
        raise NoTurningPoint(f"energy {E} lies below the probing well bottom {-spec.right.v}")
    return TurningPoints(left_turning_point(spec.left, E), spec.b, E)


def separation_integral(left, E):
    """``int sqrt(1 - V_l/E) dx`` over ``[x_l, a]``."""
    x_l = left_turning_point(left, E)
    f = lambda x: math.sqrt(max(1.0 - float(left(x)) / E, 0.0))
    return turning_point_integral(f, x_l, left.a, singular_lo=True)


def check_separation(spec, E):
    """Test whether the probing well is far enough from the physical well.

    Returns ``Separation(valid, margin, integral)`` with
    ``margin = (b - a) - integral``; ``valid`` is ``margin > 0``.
    """
    integral = separation_integral(spec.left, E)
    margin = (spec.b - spec.a) - integral
    return Separation(margin > 0.0, margin, integral)

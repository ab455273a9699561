"""Shared scenario builders for the test suite."""

import math

import mpmath

from tunnelcatch import DoubleWellSpec, Experiment, PhysicalWellSpec, SquareWellSpec

CAP = PhysicalWellSpec.harmonic_cap(1.5, 2.0)
RESONANT_LEVEL = 2
RESONANT_B = 3.0
RESONANT_V = 1.5


def resonant_spec(hbar=0.15, w=0.3, b=RESONANT_B, v=RESONANT_V):
    return DoubleWellSpec(CAP, SquareWellSpec(b, w, v), hbar)


def resonant_experiment(hbar=0.15, **kw):
    return Experiment(resonant_spec(hbar, **kw), level=RESONANT_LEVEL, k=0)


def mp_square_level(v, w, hbar, k, dps=50):
    """Level ``k`` from the even/odd matching conditions, solved in high precision.

    With ``theta = q w / 2`` and ``theta_max = w sqrt(v) / (2 hbar)`` the even
    levels solve ``theta tan(theta) = sqrt(theta_max^2 - theta^2)`` and the odd
    ones ``-theta cot(theta) = sqrt(theta_max^2 - theta^2)``; level ``k`` has
    ``theta`` in ``(k pi/2, (k+1) pi/2)``.
    """
    with mpmath.workdps(dps):
        v, w, hbar = mpmath.mpf(v), mpmath.mpf(w), mpmath.mpf(hbar)
        tmax = w * mpmath.sqrt(v) / (2 * hbar)
        if k % 2 == 0:
            f = lambda t: t * mpmath.sin(t) - mpmath.sqrt(tmax**2 - t**2) * mpmath.cos(t)
        else:
            f = lambda t: -t * mpmath.cos(t) - mpmath.sqrt(tmax**2 - t**2) * mpmath.sin(t)
        lo = k * mpmath.pi / 2
        hi = min((k + 1) * mpmath.pi / 2, tmax)
        if lo >= tmax:
            return None
        eps = mpmath.mpf(10) ** (-dps + 5)
        theta = mpmath.findroot(f, (lo + eps, hi - eps), solver="anderson")
        return (2 * theta * hbar / w) ** 2 - v


def observed_order(hbars, errors):
    """Least-squares slope of ``log(error)`` against ``log(hbar)``."""
    xs = [math.log(h) for h in hbars]
    ys = [math.log(e) for e in errors]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)

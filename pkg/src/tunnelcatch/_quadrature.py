"""Adaptive quadrature with square-root substitution at turning points."""

import math

from scipy import integrate

from .errors import NumericalError

TURNING_WINDOW = 1e-2
EPSABS = 1e-13
EPSREL = 1e-12


def _quad(f, lo, hi):
    if hi <= lo:
        return 0.0
    value, err, info = integrate.quad(f, lo, hi, epsabs=EPSABS, epsrel=EPSREL, limit=400, full_output=1)[:3]
    if err > 1e3 * max(EPSABS, EPSREL * abs(value)):
        raise NumericalError(f"quadrature on [{lo}, {hi}] did not converge (err={err:.3g})")
    return value


def turning_point_integral(f, lo, hi, singular_lo=False, singular_hi=False, window=TURNING_WINDOW):
    """Integrate ``f`` over ``[lo, hi]``.

    Within ``window`` of an endpoint flagged as a turning point the variable is
    changed to ``x = x_turn +/- t**2``, which turns square-root and inverse
    square-root endpoint behaviour into a smooth integrand.
    """
    if hi < lo:
        return -turning_point_integral(f, hi, lo, singular_hi, singular_lo, window)
    length = hi - lo
    if length == 0.0:
        return 0.0
    flagged = int(singular_lo) + int(singular_hi)
    win = min(window, length / 2.0 if flagged == 2 else length) if flagged else 0.0

    total = 0.0
    inner_lo, inner_hi = lo, hi
    if singular_lo:
        total += _quad(lambda t: 2.0 * t * f(lo + t * t), 0.0, math.sqrt(win))
        inner_lo = lo + win
    if singular_hi:
        total += _quad(lambda t: 2.0 * t * f(hi - t * t), 0.0, math.sqrt(win))
        inner_hi = hi - win
    total += _quad(f, inner_lo, inner_hi)
    return total

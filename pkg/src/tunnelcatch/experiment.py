"""Grid-level assembly of a tunnel-catch experiment.

Everything here lives on one fixed grid, so the physical state, the isolated
probing-well states and the double-well eigenpairs are directly comparable.
Resonance is tuned on the grid itself: the width is adjusted until the
discretised probing-well level coincides with the discretised physical level,
which removes discretisation error from the detuning.
"""

from __future__ import annotations

import dataclasses
import math
from functools import cached_property

import numpy as np
from scipy import optimize

from . import eigensolve, semiclassic, squarewell
from .dynamics import grid_propagate
from .eigensolve import Grid, discretize
from .errors import InputError, NumericalError
from .model import check_separation


class Experiment:
    """Physical well state ``level`` against probing-well level ``k``.

    Parameters
    ----------
    spec : DoubleWellSpec
        Geometry; ``spec.right.w`` is only a starting value, widths are passed
        explicitly to the methods below.
    level : int
        Index of the physical-well eigenstate used as the initial state.
    k : int
        Probing-well level to be brought into resonance.
    h : float, optional
        Grid step; defaults to ``hbar / 150``.
    pad_factor : float
        Padding beyond the outer structure in decay lengths ``hbar / sqrt(-E_l)``.
    """

    def __init__(self, spec, level=0, k=0, h=None, pad_factor=eigensolve.DEFAULT_PAD_FACTOR, w_max=None):
        self.spec = spec
        self.level = int(level)
        self.k = int(k)
        self.h = h if h is not None else spec.hbar / eigensolve.DEFAULT_POINTS_PER_HBAR
        self.pad_factor = pad_factor
        self._w_max = w_max

    # -- physical well -------------------------------------------------
    @cached_property
    def _provisional_E_l(self):
        left = self.spec.left
        probe = Grid.for_spec(self.spec, -0.05 * left.depth, h=self.h, pad_factor=self.pad_factor)
        op = discretize(left, probe, self.spec.hbar)
        if eigensolve.count_below(op, 0.0) <= self.level:
            raise InputError(f"physical well has no bound level {self.level} at hbar={self.spec.hbar}")
        return float(eigensolve.eigenvalues(op, self.level, self.level + 1)[0])

    @cached_property
    def w_max(self):
        if self._w_max is not None:
            return self._w_max
        w_res = squarewell.resonance_width(self._provisional_E_l, self.spec.right.v, self.spec.hbar, self.k)
        return max(self.spec.right.w, 2.0 * w_res)

    @cached_property
    def grid(self):
        g = Grid.for_spec(self.spec, self._provisional_E_l, h=self.h, pad_factor=self.pad_factor, w_max=self.w_max)
        barrier = self.barrier
        c = barrier.c if barrier.valid_two_level else 0.5 * (self.spec.a + self.spec.b)
        return g.with_split(c)

    @cached_property
    def left_state(self):
        op = discretize(self.spec.left, self.grid, self.spec.hbar)
        return eigensolve.state_by_index(op, self.level)

    @property
    def E_l(self):
        return self.left_state.E

    @cached_property
    def E_l_extrapolated(self):
        """Physical level with the grid error removed by Richardson extrapolation."""
        g = Grid.for_spec(self.spec, self._provisional_E_l, h=self.h, pad_factor=self.pad_factor)
        return float(eigensolve.extrapolated_eigenvalues(self.spec.left, g, self.spec.hbar,
                                                         self.level, self.level + 1)[0])

    @cached_property
    def barrier(self):
        return semiclassic.barrier_center(self.spec, self._provisional_E_l)

    @cached_property
    def omega_l(self):
        return eigensolve.classical_frequency(self.spec.left, self.E_l)

    def separation(self):
        return check_separation(self.spec, self.E_l)

    # -- probing well --------------------------------------------------
    def _right_operator(self, w):
        return discretize(dataclasses.replace(self.spec.right, w=w), self.grid, self.spec.hbar)

    def E_r(self, w):
        """Grid energy of probing-well level ``k`` at width ``w``."""
        op = self._right_operator(w)
        if eigensolve.count_below(op, 0.0) <= self.k:
            return 0.0
        return float(eigensolve.eigenvalues(op, self.k, self.k + 1)[0])

    def right_state(self, w):
        return eigensolve.state_by_index(self._right_operator(w), self.k)

    def width_for_detuning(self, detuning=0.0):
        """Width at which the grid detuning ``E_r - E_l`` equals ``detuning``."""
        target = self.E_l + detuning
        w0 = squarewell.resonance_width(min(target, -1e-12), self.spec.right.v, self.spec.hbar, self.k)
        f = lambda w: self.E_r(w) - target
        lo, hi = 0.9 * w0, 1.1 * w0
        for _ in range(40):
            if f(lo) > 0.0 > f(hi):
                break
            lo, hi = 0.9 * lo, 1.1 * hi
        else:
            raise NumericalError("could not bracket the resonance width on the grid")
        if hi > self.w_max:
            raise NumericalError("resonance width exceeds the grid reservation")
        return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    @cached_property
    def resonant_width(self):
        return self.width_for_detuning(0.0)

    # -- double well ---------------------------------------------------
    def spec_at(self, w):
        return self.spec.with_width(w)

    def operator(self, w):
        return discretize(self.spec_at(w), self.grid, self.spec.hbar)

    def pair(self, w, window):
        """Double-well eigenpairs within ``E_l +/- window``."""
        return eigensolve.states_between(self.operator(w), self.E_l - window, self.E_l + window)

    def pair_splitting(self, w):
        """The two eigenvalues closest to ``E_l`` and their gap."""
        op = self.operator(w)
        i = eigensolve.count_below(op, self.E_l)
        ev = eigensolve.eigenvalues(op, max(i - 2, 0), i + 2)
        idx = np.argsort(np.abs(ev - self.E_l))[:2]
        lo, hi = sorted(ev[idx])
        return float(lo), float(hi), float(hi - lo)

    def delta_wkb(self, w, energy=None):
        E = self.E_l if energy is None else energy
        spec = self.spec_at(w)
        return semiclassic.wkb_delta(spec, E, self.omega_l, semiclassic.barrier_center(spec, E))

    def delta_wronskian(self, w):
        return semiclassic.wronskian_delta(self.left_state, self.right_state(w), self.grid.c_split, self.spec.hbar)

    def propagate(self, w, periods=1.0, steps_per_period=400, record_every=1, delta=None):
        """Grid propagation of the physical state for ``periods`` beat periods."""
        if delta is None:
            delta = self.pair_splitting(w)[2]
        period = 2.0 * math.pi * self.spec.hbar / delta
        steps = int(math.ceil(periods * steps_per_period))
        return grid_propagate(self.operator(w), self.left_state, periods * period, steps,
                              record_every=record_every)

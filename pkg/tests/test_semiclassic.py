import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tunnelcatch import semiclassic as sc
from tunnelcatch.eigensolve import BoundState, Grid
from tunnelcatch.errors import GridMismatch, InvalidTwoLevel, NonPositiveDelta
from tunnelcatch.model import DoubleWellSpec, PhysicalWellSpec, SquareWellSpec

from helpers import CAP, resonant_spec


def test_flat_barrier_action():
    flat = lambda x: 0.0 * x
    assert sc.tunnel_action(flat, -0.5, 1.0, 3.0) == pytest.approx(2.0 * math.sqrt(0.5), abs=1e-13)


def test_empty_interval_has_no_action():
    assert sc.tunnel_action(CAP, -0.5, 1.1, 1.1) == 0.0


def test_bank_action_closed_form():
    # V - E = x^2 - 1 on [1, sqrt(1.5)]
    F = lambda x: 0.5 * x * math.sqrt(x * x - 1) - 0.5 * math.log(x + math.sqrt(x * x - 1))
    expected = F(math.sqrt(1.5)) - F(1.0)
    assert sc.tunnel_action(CAP, -0.5, 1.0, math.sqrt(1.5)) == pytest.approx(expected, abs=1e-10)


def test_barrier_center_closed_form_matches_root():
    spec = resonant_spec()
    closed = sc.barrier_center(spec, -0.5, method="closed")
    root = sc.barrier_center(spec, -0.5, method="root")
    assert closed.c == pytest.approx(root.c, abs=1e-10)
    left = sc.tunnel_action(spec, -0.5, closed.x_l, closed.c)
    right = sc.tunnel_action(spec, -0.5, closed.c, closed.x_r)
    assert abs(left - right) <= 1e-10
    assert closed.valid_two_level


def test_barrier_center_without_bank_action_is_midpoint():
    # truncated cap whose rim already lies below E: x_l = a, S_l = 0
    left = PhysicalWellSpec.harmonic_cap(1.5, 2.0, support=(-1.0, 1.0))
    spec = DoubleWellSpec(left, SquareWellSpec(3.0, 0.5, 1.5), 0.1)
    data = sc.barrier_center(spec, -0.25)
    assert data.S_l == 0.0
    assert data.c == pytest.approx(2.0, abs=1e-15)


def test_mirror_symmetric_barrier_center():
    right = PhysicalWellSpec.harmonic_cap(1.5, 2.0, center=5.0)
    V = lambda x: CAP(x) + right(x)
    c = sc.equal_action_point(V, -0.5, 1.0, 4.0)
    assert c == pytest.approx(2.5, abs=1e-10)


def test_wkb_delta_refuses_invalid_geometry():
    spec = DoubleWellSpec(CAP, SquareWellSpec(CAP.a + 0.01, 0.3, 1.5), 0.15)
    with pytest.raises(InvalidTwoLevel):
        sc.wkb_delta(spec, -0.75, 2.0)


def test_wkb_delta_decreases_with_separation():
    deltas = [sc.wkb_delta(resonant_spec(b=b), -0.75, 2.0) for b in np.linspace(2.0, 4.0, 9)]
    assert all(a > b for a, b in zip(deltas, deltas[1:]))


def test_coupling_formulas_agree_at_resonance(resonant):
    w = resonant.resonant_width
    wkb = resonant.delta_wkb(w)
    wr = resonant.delta_wronskian(w)
    gap = resonant.pair_splitting(w)[2]
    assert abs(wkb - wr) / wr <= 0.5
    assert abs(wkb - gap) / gap <= 0.5


def _bound(grid, psi, E=-1.0):
    return BoundState(E, psi, 0, grid)


def test_wronskian_of_identical_states_vanishes():
    grid = Grid(0.0, 1.0, 101)
    psi = np.sin(np.pi * grid.x)
    assert sc.wronskian_delta(_bound(grid, psi), _bound(grid, psi), 0.5, 0.1) == 0.0


def test_wronskian_plateau_for_evanescent_pair():
    grid = Grid(0.0, 4.0, 4001)
    kappa = 3.0
    l = _bound(grid, np.exp(-kappa * grid.x))
    r = _bound(grid, np.exp(kappa * (grid.x - 4.0)))
    values = [sc.wronskian_delta(l, r, c, 0.2) for c in np.linspace(1.0, 3.0, 11)]
    assert (max(values) - min(values)) / np.mean(values) <= 0.01


def test_wronskian_requires_common_grid():
    a, b = Grid(0.0, 1.0, 11), Grid(0.0, 1.0, 21)
    with pytest.raises(GridMismatch):
        sc.wronskian_delta(_bound(a, np.ones(11)), _bound(b, np.ones(21)), 0.5, 0.1)


def test_two_level_degenerate_case():
    r = sc.two_level_spectrum(-0.5, -0.5, 1e-3)
    assert (r.E1, r.E2, r.Delta) == pytest.approx((-0.5005, -0.4995, 1e-3), abs=1e-15)
    assert r.alpha == pytest.approx(math.pi / 4, abs=1e-15)


def test_two_level_detuned_by_delta():
    r = sc.two_level_spectrum(-0.5, -0.5 + 1e-3, 1e-3)
    assert r.Delta == pytest.approx(math.sqrt(2) * 1e-3, rel=1e-12)
    assert r.alpha == pytest.approx(3 * math.pi / 8, abs=1e-12)


def test_two_level_large_detuning():
    r = sc.two_level_spectrum(0.0, 100.0, 1.0)
    assert math.pi / 2 - r.alpha <= math.atan(1 / 100)


def test_two_level_rejects_non_positive_delta():
    with pytest.raises(NonPositiveDelta):
        sc.two_level_spectrum(-0.5, -0.5, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-12, 1.0), st.floats(-1e3, 1e3))
def test_two_level_identities(delta, ratio):
    x = ratio * delta
    # anchored at zero so the detuning is represented exactly
    r = sc.two_level_spectrum(0.0, x, delta)
    scale = delta * delta + x * x
    assert abs(r.Delta**2 - delta**2 - (r.E_r - r.E_l) ** 2) <= 1e-12 * scale
    mirrored = sc.two_level_spectrum(0.0, -x, delta)
    assert r.alpha + mirrored.alpha == pytest.approx(math.pi / 2, abs=1e-12)


def test_bilocalized_states_limits():
    grid = Grid(0.0, 1.0, 201)
    h = grid.h
    l = np.sin(np.pi * grid.x)
    r = np.sin(2 * np.pi * grid.x)
    l, r = l / math.sqrt(np.sum(l * l) * h), r / math.sqrt(np.sum(r * r) * h)
    L, R = _bound(grid, l), _bound(grid, r)
    s1, s2 = sc.bilocalized_states(L, R, math.pi / 4)
    np.testing.assert_allclose(s1, (l + r) / math.sqrt(2), atol=1e-12)
    np.testing.assert_allclose(s2, (l - r) / math.sqrt(2), atol=1e-12)
    s1, s2 = sc.bilocalized_states(L, R, 0.0)
    np.testing.assert_allclose(s1, l, atol=1e-14)
    np.testing.assert_allclose(s2, -r, atol=1e-14)


def test_bilocalized_states_match_grid_eigenvectors(resonant):
    w = resonant.resonant_width
    E1, E2, gap = resonant.pair_splitting(w)
    psi_l, psi_r = resonant.left_state, resonant.right_state(w)
    delta = resonant.delta_wronskian(w)
    result = sc.two_level_spectrum(psi_l.E, psi_r.E, delta)
    pair = resonant.pair(w, 10 * gap)
    h = resonant.grid.h
    # both states are positive across the barrier, so the lower eigenvector is the in-phase sum
    for model, exact in zip(sc.bilocalized_states(psi_l, psi_r, result.alpha), pair):
        assert abs(np.dot(model, exact.psi)) * h >= 0.99

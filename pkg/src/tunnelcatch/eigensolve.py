"""Grid oracle for single- and double-well bound states.

The operator ``-hbar**2 d^2/dx^2 + V`` is discretised with second-order central
differences on a uniform grid with Dirichlet walls, which keeps it symmetric
tridiagonal.  Eigenvalues come from Sturm-sequence bisection (robust for the
exponentially close pairs of a double well) and eigenvectors from inverse
iteration with re-orthogonalisation inside clusters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._quadrature import turning_point_integral
from .errors import InputError, NotEnoughBoundStates
from .model import left_turning_point, outer_turning_point

_EPS = np.finfo(float).eps
DEFAULT_PAD_FACTOR = 12.0
DEFAULT_POINTS_PER_HBAR = 150.0


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``x_min .. x_max`` with ``n`` nodes; the end nodes are the walls.

    ``c_split`` divides the line into left and right occupation regions.
    """

    x_min: float
    x_max: float
    n: int
    c_split: float | None = None

    def __post_init__(self):
        if self.n < 3:
            raise InputError("a grid needs at least three nodes")
        if not self.x_max > self.x_min:
            raise InputError("grid bounds must be increasing")
        if self.c_split is not None and not self.x_min < self.c_split < self.x_max:
            raise InputError("split point must lie inside the grid")

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def x(self):
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def interior(self):
        return self.x[1:-1]

    @property
    def split_index(self):
        """Index of the first node at or right of ``c_split``."""
        if self.c_split is None:
            raise InputError("grid has no split point")
        return int(np.searchsorted(self.x, self.c_split, side="left"))

    def refined(self):
        """Same bounds with the step halved."""
        return Grid(self.x_min, self.x_max, 2 * self.n - 1, self.c_split)

    def with_split(self, c_split):
        return Grid(self.x_min, self.x_max, self.n, c_split)

    @classmethod
    def with_step(cls, x_min, x_max, h, c_split=None):
        n = int(math.ceil((x_max - x_min) / h - 1e-9)) + 1
        return cls(x_min, x_min + (n - 1) * h, n, c_split)

    @classmethod
    def for_spec(cls, spec, energy, h=None, pad_factor=DEFAULT_PAD_FACTOR, c_split=None, w_max=None):
        """Grid enclosing both wells with ``pad_factor`` decay lengths of padding.

        ``w_max`` reserves room for probing-well widths up to that value so one
        grid serves a whole tuning search.
        """
        if not energy < 0:
            raise InputError("padding needs a negative target energy")
        hbar = spec.hbar
        if h is None:
            h = hbar / DEFAULT_POINTS_PER_HBAR
        kappa = math.sqrt(-energy) / hbar
        pad = pad_factor / kappa
        right_edge = spec.b + max(spec.right.w, w_max or 0.0)
        if c_split is None:
            c_split = 0.5 * (spec.a + spec.b)
        return cls.with_step(spec.left.support[0] - pad, right_edge + pad, h, c_split)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Interior-node matrix of the discretised Hamiltonian."""

    diag: np.ndarray
    off: np.ndarray
    grid: Grid
    hbar: float

    @property
    def size(self):
        return self.diag.shape[0]

    def matvec(self, u):
        out = self.diag * u
        out[:-1] += self.off * u[1:]
        out[1:] += self.off * u[:-1]
        return out

    def norm_bound(self):
        r = np.abs(self.diag).copy()
        r[:-1] += np.abs(self.off)
        r[1:] += np.abs(self.off)
        return float(r.max())


@dataclass(frozen=True)
class BoundState:
    E: float
    psi: np.ndarray = field(repr=False)
    node_count: int
    grid: Grid = field(repr=False)

    def norm(self):
        return float(np.sum(self.psi**2) * self.grid.h)


def discretize(potential, grid, hbar):
    """Assemble ``diag = 2 hbar^2/h^2 + V(x_i)``, ``off = -hbar^2/h^2`` on interior nodes.

    Objects exposing ``cell_average(x, h)`` are sampled as cell means so that a
    step edge moves continuously with its parameters; plain callables are
    sampled pointwise.
    """
    h = grid.h
    x = grid.interior
    if hasattr(potential, "cell_average"):
        V = np.asarray(potential.cell_average(x, h), dtype=float)
    else:
        V = np.asarray(potential(x), dtype=float) * np.ones_like(x)
    t = hbar**2 / h**2
    return TridiagonalOperator(2.0 * t + V, np.full(x.shape[0] - 1, -t), grid, float(hbar))


def count_below(op, x):
    """Number of eigenvalues strictly below ``x`` (Sturm sign count)."""
    off2 = op.off * op.off
    return _kernels.sturm_count(op.diag, off2, float(x), _kernels.pivmin_of(off2))


def eigenvalues(op, i_lo, i_hi):
    """Eigenvalues with ascending indices ``i_lo .. i_hi - 1``."""
    if i_hi <= i_lo:
        return np.empty(0)
    return np.asarray(_kernels.bisect_eigenvalues(op.diag, op.off, int(i_lo), int(i_hi)))


def _orthogonalize(y, basis):
    for _ in range(2):
        for q in basis:
            y -= np.dot(q, y) * q
    return y


def inverse_iteration(op, lam, basis=(), iterations=5, seed=0):
    """Unit eigenvector (Euclidean norm) for eigenvalue ``lam``.

    ``basis`` holds already computed unit vectors of the same cluster; they are
    projected out twice per iteration.
    """
    norm = op.norm_bound()
    factors = list(_kernels.gt_factor(op.off, op.diag - lam, op.off))
    d = factors[1]
    tiny = _EPS * norm
    d[np.abs(d) < tiny] = tiny
    rng = np.random.default_rng(seed)
    y = rng.uniform(-1.0, 1.0, op.size)
    y /= np.linalg.norm(y)
    for _ in range(iterations):
        y = np.asarray(_kernels.gt_solve(tuple(factors), y))
        y = _orthogonalize(y, basis)
        y /= np.linalg.norm(y)
    return y


def _sign_fix(psi):
    # positive at the first extremum from the left
    mag = np.abs(psi)
    i = int(np.argmax(mag >= 1e-3 * mag.max()))
    while i + 1 < psi.size and mag[i + 1] >= mag[i]:
        i += 1
    return -psi if psi[i] < 0 else psi


def _node_count(psi):
    significant = psi[np.abs(psi) > 1e-6 * np.abs(psi).max()]
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


def _states(op, evals, first_index):
    grid = op.grid
    h = grid.h
    basis, states = [], []
    for j, lam in enumerate(evals):
        vec = inverse_iteration(op, lam, basis, seed=first_index + j)
        basis.append(vec)
        psi = np.zeros(grid.n)
        psi[1:-1] = _sign_fix(vec) / math.sqrt(h)
        states.append(BoundState(float(lam), psi, _node_count(psi[1:-1]), grid))
    return states


def solve_bound_states(op, count):
    """Lowest ``count`` eigenpairs with negative energy, normalised, sorted by energy."""
    if count < 1:
        raise InputError("count must be at least one")
    n_bound = count_below(op, 0.0)
    if n_bound < count:
        raise NotEnoughBoundStates(f"requested {count} bound states, operator has {n_bound}")
    return _states(op, eigenvalues(op, 0, count), 0)


def states_between(op, lo, hi):
    """All eigenpairs with ``lo <= E < hi``."""
    i_lo, i_hi = count_below(op, lo), count_below(op, hi)
    return _states(op, eigenvalues(op, i_lo, i_hi), i_lo)


def state_by_index(op, index):
    """The eigenpair with ascending index ``index``."""
    return _states(op, eigenvalues(op, index, index + 1), index)[0]


def richardson(coarse, fine):
    """Second-order Richardson extrapolation from step ``h`` and ``h/2`` values."""
    return (4.0 * np.asarray(fine) - np.asarray(coarse)) / 3.0


def extrapolated_eigenvalues(potential, grid, hbar, i_lo, i_hi):
    """Eigenvalues on ``grid`` and its refinement, combined by Richardson extrapolation."""
    coarse = eigenvalues(discretize(potential, grid, hbar), i_lo, i_hi)
    fine = eigenvalues(discretize(potential, grid.refined(), hbar), i_lo, i_hi)
    return richardson(coarse, fine)


def classical_frequency(left, E):
    """Angular frequency ``2 pi / T`` of the classical orbit at energy ``E``.

    ``T = int dx / sqrt(E - V_l)`` over the allowed interval, following from
    ``dx/dt = 2 p`` for the Hamiltonian ``p**2 + V``.
    """
    x_out = outer_turning_point(left, E)
    x_in = left_turning_point(left, E)
    # an edge acting as a wall is not a square-root singularity
    wall_out = float(left(np.nextafter(x_out, x_in))) < E and x_out == left.support[0]
    wall_in = float(left(np.nextafter(x_in, x_out))) < E and x_in == left.a

    def f(x):
        gap = E - float(left(x))
        return 1.0 / math.sqrt(gap) if gap > 0 else 0.0

    period = turning_point_integral(f, x_out, x_in, singular_lo=not wall_out, singular_hi=not wall_in)
    return 2.0 * math.pi / period

"""Approachability-based cutter.

Alice tracks, for every grid valuation ``V`` up to resolution ``n_max`` plus
her own cumulative ``f_A``, the running average of ``u_V - 1/2`` where
``u_V`` is what a Bob with valuation ``V`` would have earned from the chosen
pieces. She cuts where the weighted inner product of the next-round payoff
vector with the positive part ``W`` of that average vanishes, which pushes
the average toward the nonpositive orthant.

For a fixed ``W`` the root function ``x -> P(G_x, W)`` is one piecewise
linear function whose knots are the grid points ``i/n`` (plus ``f_A``'s
breakpoints), so it is aggregated once per round and bisected by a kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .engine import AliceStrategy, L
from .errors import NumericalError, ResourceError

GRID_CAP = 12
MAX_BISECT = 200
FA = "f_A"


@dataclass(frozen=True)
class GridValuation:
    """Grid cumulative with slope ``d[i]`` on ``[i/n, (i+1)/n]``; ``d`` sums to ``n``.

    ``is_alice`` marks the extra coordinate standing for Alice's own
    cumulative; its ``d`` is empty.
    """

    n: int
    d: tuple
    is_alice: bool = False

    @property
    def ident(self):
        if self.is_alice:
            return f"n{self.n}:{FA}"
        return f"n{self.n}:" + "-".join(str(v) for v in self.d)

    def knot_values(self):
        """``V(i/n)`` for ``i = 0..n`` as floats."""
        return np.concatenate([[0.0], np.cumsum(self.d)]) / self.n


def compositions(n, parts):
    """All tuples of ``parts`` nonnegative integers summing to ``n``, lexicographic."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def enumerate_grid(n, cap=GRID_CAP):
    if n < 1:
        raise ValueError("grid resolution must be positive")
    if n > cap:
        raise ResourceError(f"grid resolution {n} exceeds cap {cap}")
    out = [GridValuation(n, d) for d in compositions(n, n)]
    if n == 2:
        out.append(GridValuation(2, (), True))
    return out


def eval_grid(g, x, vA=None):
    """Exact evaluation (``Fraction`` input gives ``Fraction`` output)."""
    if not (0 <= x <= 1):
        raise ValueError(f"x={x!r} outside [0, 1]")
    if g.is_alice:
        if vA is None:
            raise ValueError("evaluating the f_A coordinate needs Alice's valuation")
        return vA.cumulative(float(x))
    n = g.n
    i = min(int(math.floor(x * n)), n - 1)
    base = Fraction(sum(g.d[:i]), n)
    val = base + (x - Fraction(i, n)) * g.d[i]
    return val if isinstance(x, Fraction) else float(val)


def nearest_grid(v, n):
    """Grid valuation with ``V_n(i/n) = round_half_up(n * v(i/n)) / n``."""
    levels = [0]
    for i in range(1, n):
        levels.append(int(math.floor(n * v.cumulative(i / n) + 0.5)))
    levels.append(n)
    levels = np.maximum.accumulate(np.clip(levels, 0, n))
    return GridValuation(n, tuple(int(k) for k in np.diff(levels)))


class CoordinateSpace:
    """Tracked coordinates ``(n, V)`` for ``n <= n_max`` with their weights
    ``1 / (2**n |V_n|)`` and precomputed knot tables."""

    def __init__(self, n_max, vA, cap=GRID_CAP):
        if n_max < 2:
            raise ValueError("n_max must be at least 2 so that f_A is tracked")
        self.n_max = n_max
        self.vA = vA
        coords, weights = [], []
        for n in range(1, n_max + 1):
            level = enumerate_grid(n, cap)
            coords.extend(level)
            weights.extend([1.0 / (2.0 ** n * len(level))] * len(level))
        self.coords = coords
        self.ids = [g.ident for g in coords]
        self.weights = np.array(weights)
        self.fa_index = next(i for i, g in enumerate(coords) if g.is_alice)
        grid_pts = {Fraction(i, n) for n in range(1, n_max + 1) for i in range(n + 1)}
        knots = sorted(float(p) for p in grid_pts)
        self.alice_pl = vA.is_piecewise_linear
        if self.alice_pl:
            knots = sorted(set(knots) | {float(b) for b in vA.breakpoints})
        self.knots = np.array(knots)
        K = np.empty((len(coords), len(knots)))
        for i, g in enumerate(coords):
            if g.is_alice:
                K[i] = vA.cumulative_many(self.knots) if self.alice_pl else 0.0
            else:
                K[i] = np.interp(self.knots, np.arange(g.n + 1) / g.n, g.knot_values())
        self.K = K
        self.S = np.diff(K, axis=1) / np.diff(self.knots)

    def __len__(self):
        return len(self.coords)

    def values(self, x):
        """``V(x)`` for every tracked coordinate."""
        k = int(np.searchsorted(self.knots, x, side="right")) - 1
        if k >= len(self.knots) - 1:
            vals = self.K[:, -1].copy()
        else:
            vals = self.K[:, k] + (x - self.knots[k]) * self.S[:, k]
        vals[self.fa_index] = self.vA.cumulative(x)
        return vals

    def as_vector(self, X):
        """Coordinate map (dict keyed by id or GridValuation, or array) to a vector."""
        if isinstance(X, dict):
            v = np.zeros(len(self))
            index = {ident: i for i, ident in enumerate(self.ids)}
            for key, val in X.items():
                v[index[key.ident if isinstance(key, GridValuation) else key]] = val
            return v
        v = np.asarray(X, dtype=np.float64)
        if v.shape != (len(self),):
            raise ValueError(f"coordinate vector must have length {len(self)}")
        return v


def inner_product(X, Y, space):
    """Truncated weighted inner product ``sum_n w_n sum_V X(n,V) Y(n,V)``."""
    return float(np.dot(space.weights, space.as_vector(X) * space.as_vector(Y)))


@dataclass
class BlackwellState:
    space: CoordinateSpace
    t: int = 0
    Ubar: np.ndarray = None
    history: list = field(default_factory=list)

    def __post_init__(self):
        if self.Ubar is None:
            self.Ubar = np.zeros(len(self.space))

    @property
    def W(self):
        return np.maximum(self.Ubar, 0.0)

    @property
    def Y(self):
        return np.minimum(self.Ubar, 0.0)

    @property
    def delta(self):
        W = self.W
        return float(np.dot(self.space.weights, W * W))


def new_state(n_max, vA, cap=GRID_CAP):
    return BlackwellState(CoordinateSpace(n_max, vA, cap))


def root_function(state):
    """``x -> P(G_x, W)`` for the current state (reference evaluation)."""
    sp = state.space
    wW = sp.weights * state.W
    return lambda x: float(np.dot(wW, sp.values(x) - 0.5))


def find_root_cut(state, eps_root=1e-12):
    sp = state.space
    wW = sp.weights * state.W
    total = float(np.sum(wW))
    if total == 0.0:
        return 0.5
    if sp.alice_pl:
        ys = wW @ sp.K - 0.5 * total
        slopes = np.diff(ys) / np.diff(sp.knots)
        x, it = kernels.PiecewiseLinear(sp.knots, ys, slopes).bisect_root(eps_root, MAX_BISECT)
    else:
        x, it = _bisect(root_function(state), eps_root, MAX_BISECT)
    if it < 0:
        raise NumericalError(f"root bisection did not reach |P| <= {eps_root} in {MAX_BISECT} steps")
    return x


def _bisect(fn, eps, max_iter):
    lo, hi = 0.0, 1.0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        p = fn(mid)
        if -eps <= p <= eps:
            return mid, it
        if p < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), -1


def observe_round(state, a, b):
    if not (0.0 <= a <= 1.0):
        raise ValueError(f"cut {a!r} outside [0, 1]")
    vals = state.space.values(a)
    U = (vals if b == L else 1.0 - vals) - 0.5
    state.t += 1
    state.Ubar += (U - state.Ubar) / state.t
    return state


class BlackwellAlice(AliceStrategy):
    """Cut at the root of ``P(G_x, W_{t-1})`` each round.

    ``diagnostics`` holds ``(t, delta_t, cut_t, max_coordinate_id, max_Ubar)``.
    """

    def __init__(self, vA, n_max=6, eps_root=1e-12, record=True):
        if eps_root <= 0:
            raise ValueError("eps_root must be positive")
        self.vA = vA
        self.n_max = n_max
        self.eps_root = eps_root
        self.record = record
        self._space = CoordinateSpace(n_max, vA)

    def reset(self, T, rng):
        super().reset(T, rng)
        self.state = BlackwellState(self._space)
        self.diagnostics = []

    def cut(self):
        return find_root_cut(self.state, self.eps_root)

    def observe(self, a, b):
        st = observe_round(self.state, a, b)
        if self.record:
            i = int(np.argmax(st.Ubar))
            self.diagnostics.append((st.t, st.delta, a, st.space.ids[i], float(st.Ubar[i])))


def blackwell_alice(vA, n_max=6, eps_root=1e-12):
    return BlackwellAlice(vA, n_max, eps_root)


DIAGNOSTIC_HEADER = ["t", "delta_t", "cut_t", "max_coordinate_id", "max_Ubar"]


def write_diagnostics(rows, path):
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DIAGNOSTIC_HEADER)
        for t, d, x, ident, m in rows:
            w.writerow([t, format(d, ".12g"), format(x, ".12g"), ident, format(m, ".12g")])

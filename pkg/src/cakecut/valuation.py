"""Valuations over the unit cake [0, 1].

A valuation is an atomless probability measure described by its cumulative
function ``C(x) = V([0, x])``. Three kinds are supported:

* ``piecewise``: piecewise-constant density on given breakpoints;
* ``two-block``: density ``1/(2y)`` on ``[0, y]`` and ``1/(2(1-y))`` after,
  so that the midpoint is exactly ``y``;
* ``remark-unbounded``: ``C(x) = x`` on ``[0, 1/2]`` and
  ``1/2 + 2**(-1/(2x-1))`` after. Its density is not bounded below.

The piecewise kinds are evaluated through the compiled kernels.
"""

from __future__ import annotations

import math
from bisect import bisect_right

import numpy as np

from . import kernels
from .errors import DegenerateIntervalError, DomainError, ValuationError

MASS_TOL = 1e-9
TIE_TOL = 1e-12

PIECEWISE = "piecewise"
TWO_BLOCK = "two-block"
REMARK_UNBOUNDED = "remark-unbounded"
KINDS = (PIECEWISE, TWO_BLOCK, REMARK_UNBOUNDED)

# sup of the remark-unbounded density, attained at 2x - 1 = ln(2) / 2
_REMARK_DENSITY_MAX = 8.0 / (math.e ** 2 * math.log(2.0))


def _check_point(x, name="x"):
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"{name}={x!r} is outside [0, 1]")


class Valuation:
    """A cumulative function on [0, 1] with interval and inverse queries."""

    def __init__(self, kind, breakpoints=None, densities=None, y=None):
        if kind not in KINDS:
            raise ValuationError(f"unknown valuation kind {kind!r}")
        self.kind = kind
        self.y = None
        if kind == REMARK_UNBOUNDED:
            self.breakpoints = None
            self.densities = None
            self.delta = 0.0
            self.Delta = max(1.0, _REMARK_DENSITY_MAX)
            self._pl = None
            return
        if kind == TWO_BLOCK:
            y = float(y) if y is not None else float("nan")
            if not (0.0 < y < 1.0):
                raise ValuationError(f"two-block needs 0 < y < 1, got {y!r}")
            self.y = y
            breakpoints = [0.0, y, 1.0]
            densities = [1.0 / (2.0 * y), 1.0 / (2.0 * (1.0 - y))]
            ys = np.array([0.0, 0.5, 1.0])
        xs = np.asarray(breakpoints, dtype=np.float64)
        dens = np.asarray(densities, dtype=np.float64)
        if xs.ndim != 1 or dens.ndim != 1 or len(xs) < 2 or len(dens) != len(xs) - 1:
            raise ValuationError("need k+1 breakpoints and k densities")
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValuationError("breakpoints must start at 0 and end at 1")
        if not np.all(np.diff(xs) > 0):
            raise ValuationError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(dens)) or np.any(dens < 0):
            raise ValuationError("densities must be finite and nonnegative")
        mass = float(np.sum(dens * np.diff(xs)))
        if abs(mass - 1.0) > MASS_TOL:
            raise ValuationError(f"total mass is {mass!r}, expected 1")
        if kind == PIECEWISE:
            ys = np.concatenate([[0.0], np.cumsum(dens * np.diff(xs))])
            ys[-1] = 1.0
        self.breakpoints = xs
        self.densities = dens
        self.delta = float(dens.min())
        self.Delta = float(dens.max())
        self._ys_np = ys
        self._pl = kernels.PiecewiseLinear(xs, ys, dens)

    # -- queries -----------------------------------------------------------
    @property
    def is_piecewise_linear(self):
        return self.kind != REMARK_UNBOUNDED

    @property
    def pl(self):
        """Kernel object for the cumulative (piecewise kinds only)."""
        return self._pl

    def knots(self):
        """Return ``(xs, ys, slopes)`` of a piecewise-linear cumulative."""
        if not self.is_piecewise_linear:
            raise ValuationError("remark-unbounded has no finite knot set")
        return self.breakpoints, self._ys_np, self.densities

    def cumulative(self, x):
        x = float(x)
        _check_point(x)
        if self._pl is None:
            return _remark_cumulative(x)
        return self._pl.eval(x)

    def cumulative_many(self, x):
        """Vectorized ``cumulative``; same arithmetic as the scalar path."""
        x = np.asarray(x, dtype=np.float64)
        if x.size and (np.nanmin(x) < 0.0 or np.nanmax(x) > 1.0 or np.isnan(x).any()):
            raise DomainError("points must lie in [0, 1]")
        if self._pl is None:
            return np.array([_remark_cumulative(float(v)) for v in x.ravel()]).reshape(x.shape)
        xs, ys, sl = self.breakpoints, self._ys_np, self.densities
        k = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
        out = ys[k] + (x - xs[k]) * sl[k]
        return np.where(x >= xs[-1], ys[-1], out)

    def interval_value(self, a, b):
        _check_point(a, "a")
        _check_point(b, "b")
        if a > b:
            raise DomainError(f"interval [{a}, {b}] has a > b")
        return self.cumulative(b) - self.cumulative(a)

    def inverse(self, target):
        """Leftmost ``x`` with ``C(x) == target``."""
        if not (0.0 <= target <= 1.0):
            raise DomainError(f"target value {target!r} outside [0, 1]")
        if self._pl is None:
            return _remark_inverse(target)
        return self._pl.inverse(float(target))

    def point_at_value(self, lo, hi, frac):
        """Leftmost ``x`` in ``[lo, hi]`` with ``V([lo, x]) = frac * V([lo, hi])``."""
        _check_point(lo, "lo")
        _check_point(hi, "hi")
        if lo > hi:
            raise DomainError(f"interval [{lo}, {hi}] has lo > hi")
        if not (0.0 <= frac <= 1.0):
            raise DomainError(f"frac={frac!r} outside [0, 1]")
        c_lo = self.cumulative(lo)
        c_hi = self.cumulative(hi)
        if c_hi - c_lo <= 0.0:
            raise DegenerateIntervalError(f"V([{lo}, {hi}]) = 0")
        x = self.inverse(c_lo + frac * (c_hi - c_lo))
        return min(max(x, lo), hi)

    def midpoint(self):
        return self.point_at_value(0.0, 1.0, 0.5)

    def midpoint_range(self):
        """Leftmost and rightmost points with ``C(x) = 1/2``."""
        m = self.midpoint()
        if self._pl is None:
            return m, m
        ys = self._ys_np
        k = bisect_right(list(ys), 0.5)
        if k >= 2 and ys[k - 1] == 0.5 and ys[k - 2] == 0.5:
            return m, float(self.breakpoints[k - 1])
        return m, m

    # -- serialization -----------------------------------------------------
    def to_dict(self):
        if self.kind == REMARK_UNBOUNDED:
            return {"kind": REMARK_UNBOUNDED}
        if self.kind == TWO_BLOCK:
            return {"kind": TWO_BLOCK, "y": self.y}
        return {
            "kind": PIECEWISE,
            "breakpoints": [float(v) for v in self.breakpoints],
            "densities": [float(v) for v in self.densities],
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise ValuationError(f"valuation literal needs a 'kind': {d!r}")
        kind = d["kind"]
        if kind == PIECEWISE:
            extra = set(d) - {"kind", "breakpoints", "densities"}
            if extra or "breakpoints" not in d or "densities" not in d:
                raise ValuationError(f"bad piecewise literal {d!r}")
            return cls(PIECEWISE, d["breakpoints"], d["densities"])
        if kind == TWO_BLOCK:
            if set(d) != {"kind", "y"}:
                raise ValuationError(f"bad two-block literal {d!r}")
            return cls(TWO_BLOCK, y=d["y"])
        if kind == REMARK_UNBOUNDED:
            if set(d) != {"kind"}:
                raise ValuationError(f"bad remark-unbounded literal {d!r}")
            return cls(REMARK_UNBOUNDED)
        raise ValuationError(f"unknown valuation kind {kind!r}")

    def __eq__(self, other):
        return isinstance(other, Valuation) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self.to_dict()))

    def __repr__(self):
        return f"Valuation({self.to_dict()!r})"


def _remark_cumulative(x):
    if x <= 0.5:
        return x
    return 0.5 + 2.0 ** (-1.0 / (2.0 * x - 1.0))


def _remark_inverse(v):
    if v <= 0.5:
        return v
    if v >= 1.0:
        return 1.0
    return 0.5 - 1.0 / (2.0 * math.log2(v - 0.5))


# -- constructors and free-function API ------------------------------------

def uniform():
    return Valuation(PIECEWISE, [0.0, 1.0], [1.0])


def piecewise(breakpoints, densities):
    return Valuation(PIECEWISE, breakpoints, densities)


def two_block(y):
    return Valuation(TWO_BLOCK, y=y)


def remark_unbounded():
    return Valuation(REMARK_UNBOUNDED)


def remark_alice():
    """Density 1/2 on [0, 1/2] and 3/2 after; midpoint 2/3."""
    return piecewise([0.0, 0.5, 1.0], [0.5, 1.5])


def cumulative(v, x):
    return v.cumulative(x)


def interval_value(v, a, b):
    return v.interval_value(a, b)


def point_at_value(v, lo, hi, frac):
    return v.point_at_value(lo, hi, frac)


def midpoint(v):
    return v.midpoint()


def stackelberg_value(vA, vB):
    """Alice's payoff from cutting at Bob's midpoint, ties broken her way.

    When Bob's midpoint is a plateau Alice may cut anywhere on it, so the
    left piece is taken at the plateau's right end and vice versa.
    """
    m_lo, m_hi = vB.midpoint_range()
    c_lo = vB.cumulative(m_lo)
    c_hi = vB.cumulative(m_hi)
    if abs(2.0 * c_lo - 1.0) <= TIE_TOL or abs(2.0 * c_hi - 1.0) <= TIE_TOL:
        return max(vA.cumulative(m_hi), 1.0 - vA.cumulative(m_lo))
    if c_lo > 0.5:
        # Bob keeps [0, m]; Alice gets the right piece
        return 1.0 - vA.cumulative(m_lo)
    return vA.cumulative(m_lo)


def random_piecewise(rng, delta, Delta, segments=None, max_tries=100000):
    """Random piecewise valuation whose densities lie in ``[delta, Delta]``.

    The segment count is uniform on ``segments`` (default 2..8). Interior
    breakpoints are sorted uniforms; raw densities are uniform on
    ``[delta, Delta]`` and rescaled to unit mass. Draws whose rescaled
    densities leave the bounds are rejected.
    """
    if not (0.0 < delta <= 1.0 <= Delta):
        raise ValuationError("need 0 < delta <= 1 <= Delta")
    lo_k, hi_k = segments if segments is not None else (2, 8)
    for _ in range(max_tries):
        k = int(rng.integers(lo_k, hi_k + 1))
        inner = np.sort(rng.random(k - 1))
        bps = np.concatenate([[0.0], inner, [1.0]])
        widths = np.diff(bps)
        if np.any(widths <= 1e-9):
            continue
        dens = rng.uniform(delta, Delta, size=k)
        dens = dens / float(np.sum(dens * widths))
        if dens.min() >= delta and dens.max() <= Delta:
            try:
                return piecewise(bps, dens)
            except ValuationError:
                continue
    raise ValuationError(f"could not draw a valuation within [{delta}, {Delta}]")

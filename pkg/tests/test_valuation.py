import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cakecut import valuation as V
from cakecut.errors import DegenerateIntervalError, DomainError, ValuationError


def exact_cumulative(bps, dens, x):
    """Rational integral of a piecewise-constant density up to x."""
    total = Fraction(0)
    for lo, hi, d in zip(bps[:-1], bps[1:], dens):
        if x <= lo:
            break
        total += (min(x, hi) - lo) * d
    return total


@st.composite
def rational_piecewise(draw):
    k = draw(st.integers(1, 6))
    cuts = sorted(set(draw(st.lists(st.integers(1, 63), min_size=k - 1, max_size=k - 1))))
    bps = [Fraction(0)] + [Fraction(c, 64) for c in cuts] + [Fraction(1)]
    raw = [Fraction(draw(st.integers(1, 16)), 4) for _ in range(len(bps) - 1)]
    mass = sum((b - a) * d for a, b, d in zip(bps[:-1], bps[1:], raw))
    dens = [d / mass for d in raw]
    return bps, dens


@st.composite
def float_valuation(draw):
    bps, dens = draw(rational_piecewise())
    return V.piecewise([float(b) for b in bps], [float(d) for d in dens])


# -- examples --------------------------------------------------------------

def test_heavy_left_examples(heavy_left):
    assert heavy_left.cumulative(0.5) == 0.75
    assert heavy_left.midpoint() == pytest.approx(1 / 3, abs=1e-15)


def test_stackelberg_examples(uni, heavy_left):
    assert V.stackelberg_value(uni, heavy_left) == pytest.approx(2 / 3, abs=1e-15)
    assert V.stackelberg_value(heavy_left, uni) == 0.75


def test_point_at_value_example(uni):
    assert V.point_at_value(uni, 0.2, 0.8, 1 / 6) == pytest.approx(0.3, abs=1e-15)


def test_uniform_basics(uni):
    assert uni.cumulative(0.37) == 0.37
    assert uni.midpoint() == 0.5
    assert uni.interval_value(0.2, 0.7) == pytest.approx(0.5)


@pytest.mark.parametrize("y", [0.01, 0.3, 0.5, 0.7, 0.123456789, 0.99])
def test_two_block_midpoint_is_exact(y):
    v = V.two_block(y)
    assert v.midpoint() == y
    assert v.cumulative(y) == 0.5
    assert v.delta == min(1 / (2 * y), 1 / (2 * (1 - y)))


def test_remark_unbounded():
    v = V.remark_unbounded()
    assert v.cumulative(0.25) == 0.25
    assert v.cumulative(0.5) == 0.5
    assert v.cumulative(1.0) == 1.0
    assert v.cumulative(0.75) == pytest.approx(0.5 + 2 ** -2)
    assert v.midpoint() == 0.5
    for x in [0.55, 0.6, 0.75, 0.9, 0.999]:
        assert v.inverse(v.cumulative(x)) == pytest.approx(x, abs=1e-12)
    # density sup is 8 / (e^2 ln 2), attained at 2x - 1 = ln2 / 2
    xs = np.linspace(0.5001, 1.0, 200001)
    dens = np.gradient(v.cumulative_many(xs), xs)
    assert v.Delta == pytest.approx(dens.max(), rel=1e-4)
    assert v.delta == 0.0


def test_remark_alice():
    v = V.remark_alice()
    assert v.midpoint() == pytest.approx(2 / 3)
    assert V.stackelberg_value(v, V.remark_unbounded()) == 0.75


def test_plateau_leftmost_and_stackelberg():
    # zero density on [0.4, 0.6]; Bob is indifferent anywhere on it
    vB = V.piecewise([0.0, 0.4, 0.6, 1.0], [1.25, 0.0, 1.25])
    assert vB.midpoint() == 0.4
    assert vB.midpoint_range() == (0.4, 0.6)
    assert vB.point_at_value(0.0, 1.0, 0.5) == 0.4
    # uniform Alice cuts at 0.4 and takes the right piece
    assert V.stackelberg_value(V.uniform(), vB) == pytest.approx(0.6)


# -- errors ----------------------------------------------------------------

def test_domain_errors(uni):
    with pytest.raises(DomainError):
        uni.cumulative(1.5)
    with pytest.raises(DomainError):
        uni.cumulative(-0.1)
    with pytest.raises(DomainError):
        uni.interval_value(0.6, 0.4)
    with pytest.raises(DomainError):
        uni.point_at_value(0.0, 1.0, 1.2)
    with pytest.raises(DomainError):
        uni.cumulative_many([0.2, 1.1])


def test_degenerate_interval():
    v = V.piecewise([0.0, 0.4, 0.6, 1.0], [1.25, 0.0, 1.25])
    with pytest.raises(DegenerateIntervalError):
        v.point_at_value(0.45, 0.55, 0.5)
    with pytest.raises(DegenerateIntervalError):
        V.uniform().point_at_value(0.3, 0.3, 0.5)


@pytest.mark.parametrize("lit", [
    {"kind": "piecewise", "breakpoints": [0, 1], "densities": [2]},
    {"kind": "piecewise", "breakpoints": [0, 0.5, 0.5, 1], "densities": [1, 1, 1]},
    {"kind": "piecewise", "breakpoints": [0.1, 1], "densities": [1]},
    {"kind": "piecewise", "breakpoints": [0, 0.5, 1], "densities": [-1, 3]},
    {"kind": "piecewise", "breakpoints": [0, 1], "densities": [1, 1]},
    {"kind": "two-block", "y": 1.0},
    {"kind": "two-block"},
    {"kind": "nope"},
    {"kind": "remark-unbounded", "y": 3},
])
def test_bad_literals(lit):
    with pytest.raises(ValuationError):
        V.Valuation.from_dict(lit)


# -- properties ------------------------------------------------------------

@given(rational_piecewise(), st.lists(st.integers(0, 1024), min_size=1, max_size=20))
def test_cumulative_matches_exact_integral(vd, pts):
    bps, dens = vd
    v = V.piecewise([float(b) for b in bps], [float(d) for d in dens])
    for p in pts:
        x = Fraction(p, 1024)
        assert v.cumulative(float(x)) == pytest.approx(float(exact_cumulative(bps, dens, x)), abs=1e-12)


@given(float_valuation(), st.lists(st.floats(0, 1), min_size=2, max_size=30))
def test_monotone_normalized_and_vectorized(v, pts):
    assert v.cumulative(0.0) == 0.0
    assert v.cumulative(1.0) == 1.0
    pts = sorted(pts)
    vals = [v.cumulative(x) for x in pts]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert np.array_equal(v.cumulative_many(pts), np.array(vals))


@given(float_valuation(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_interval_additivity(v, a, b, c):
    a, b, c = sorted([a, b, c])
    assert v.interval_value(a, c) == pytest.approx(v.interval_value(a, b) + v.interval_value(b, c), abs=1e-12)


@given(float_valuation(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_point_at_value_round_trip(v, lo, hi, frac):
    lo, hi = sorted([lo, hi])
    if v.interval_value(lo, hi) <= 1e-9:
        return
    x = v.point_at_value(lo, hi, frac)
    assert lo <= x <= hi
    assert v.interval_value(lo, x) == pytest.approx(frac * v.interval_value(lo, hi), abs=1e-10)


@given(float_valuation())
def test_serialization_round_trip(v):
    d = v.to_dict()
    w = V.Valuation.from_dict(d)
    assert w == v and w.to_dict() == d


@given(st.integers(0, 10**6))
def test_random_piecewise_respects_bounds(seed):
    rng = np.random.default_rng(seed)
    v = V.random_piecewise(rng, 0.25, 4.0)
    assert 2 <= len(v.densities) <= 8
    assert v.densities.min() >= 0.25 and v.densities.max() <= 4.0
    assert float(np.sum(v.densities * np.diff(v.breakpoints))) == pytest.approx(1.0, abs=1e-12)


def test_random_piecewise_narrow_ratio():
    rng = np.random.default_rng(0)
    v = V.random_piecewise(rng, 0.9, 1.08)
    assert v.Delta / v.delta <= 1.2 + 1e-12


@given(float_valuation(), float_valuation())
def test_stackelberg_dominates_any_cut(vA, vB):
    """No cut beats u* against a Bob who takes his strictly better piece."""
    u = V.stackelberg_value(vA, vB)
    for x in np.linspace(0, 1, 41):
        cb = vB.cumulative(x)
        if abs(2 * cb - 1) < 1e-9:
            continue
        got = 1 - vA.cumulative(x) if cb > 0.5 else vA.cumulative(x)
        assert got <= u + 1e-12


def test_remark_inverse_formula():
    v = V.remark_unbounded()
    for target in [0.51, 0.6, 0.75, 0.99]:
        x = v.inverse(target)
        assert x == pytest.approx(0.5 - 1 / (2 * math.log2(target - 0.5)))
        assert v.cumulative(x) == pytest.approx(target, abs=1e-12)

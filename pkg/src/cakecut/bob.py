"""Chooser strategies."""

from __future__ import annotations

import math
from bisect import bisect_right

from .engine import SEQUENTIAL, SIMULTANEOUS, BobStrategy, L, R
from .valuation import TIE_TOL


class ConstantBob(BobStrategy):
    def __init__(self, side):
        if side not in (L, R):
            raise ValueError(f"side must be L or R, got {side!r}")
        self.side = side

    def choose(self, a):
        return self.side


def constant_bob(side):
    return ConstantBob(side)


class MyopicBob(BobStrategy):
    """Take the piece worth more to Bob this round.

    Ties (within ``TIE_TOL``) go to ``L``, ``R``, ``toward-alice`` (take the
    piece Alice values less) or a ``seeded-random`` fair coin.
    """

    modes = (SEQUENTIAL,)
    TIE_RULES = ("L", "R", "toward-alice", "seeded-random")

    def __init__(self, vB, tie_break="L", vA=None):
        if tie_break not in self.TIE_RULES:
            raise ValueError(f"unknown tie rule {tie_break!r}")
        if tie_break == "toward-alice" and vA is None:
            raise ValueError("toward-alice tie-breaking needs Alice's valuation")
        self.vB = vB
        self.vA = vA
        self.tie_break = tie_break

    def choose(self, a):
        c = self.vB.cumulative(a)
        diff = 2.0 * c - 1.0
        if diff > TIE_TOL:
            return L
        if diff < -TIE_TOL:
            return R
        if self.tie_break == "seeded-random":
            return L if self.rng.random() < 0.5 else R
        if self.tie_break == "toward-alice":
            return L if self.vA.cumulative(a) <= 0.5 else R
        return self.tie_break


def myopic_bob(vB, tie_break="L", vA=None):
    return MyopicBob(vB, tie_break, vA)


class ThresholdBob(BobStrategy):
    """Take ``L`` exactly when the cut lies strictly right of ``x``.

    Against a myopic Bob's rule this is honest play for a midpoint at ``x``.
    """

    modes = (SEQUENTIAL,)

    def __init__(self, x):
        self.x = float(x)

    def choose(self, a):
        return L if a > self.x else R


def honest_threshold_bob(x):
    return ThresholdBob(x)


class DeceptiveBob(BobStrategy):
    """Lie on a narrow window left of his midpoint until a budget is spent.

    Cuts right of ``m_B`` get ``L`` and cuts left of
    ``m_B - T**((alpha-1)/2)`` get ``R``. Inside the closed window he answers
    ``L`` (a lie) while fewer than ``T**((alpha+1)/2)`` window cuts have been
    seen, then ``R``.
    """

    modes = (SEQUENTIAL,)

    def __init__(self, vB, alpha):
        if not (0.0 <= alpha < 1.0):
            raise ValueError("alpha must lie in [0, 1)")
        self.vB = vB
        self.alpha = float(alpha)
        self.m_B = vB.midpoint()

    def reset(self, T, rng):
        super().reset(T, rng)
        self.width = float(T) ** ((self.alpha - 1.0) / 2.0)
        self.budget = float(T) ** ((self.alpha + 1.0) / 2.0)
        self.window_lo = self.m_B - self.width
        self.count = 0

    def choose(self, a):
        if a > self.m_B:
            return L
        if a < self.window_lo:
            return R
        b = R if self.count >= self.budget else L
        self.count += 1
        return b


def deceptive_bob(vB, alpha):
    return DeceptiveBob(vB, alpha)


def deceptive_regret_bound(vB, alpha, T):
    """Upper bound on the deceptive Bob's regret.

    At most ``ceil(T**((alpha+1)/2))`` lies, each costing
    ``2 V_B([a, m_B]) <= 2 Delta_B T**((alpha-1)/2)``.
    """
    lies = math.ceil(float(T) ** ((alpha + 1.0) / 2.0))
    return lies * 2.0 * vB.Delta * float(T) ** ((alpha - 1.0) / 2.0)


class ThresholdSwitchBob(BobStrategy):
    """Pretend his midpoint is Alice's two-thirds point, then switch.

    Let ``x`` and ``y`` be where Alice's cumulative reaches 2/3 and 5/6.
    While the number of cuts seen in ``(x, y]`` (this round included) is at
    most ``3 r T**beta`` he answers honestly for midpoint ``x``; afterwards
    honestly for midpoint ``y``.
    """

    modes = (SEQUENTIAL,)

    def __init__(self, vA, r=1.0, beta=0.5):
        self.x = vA.inverse(2.0 / 3.0)
        self.y = vA.inverse(5.0 / 6.0)
        self.r = float(r)
        self.beta = float(beta)

    def reset(self, T, rng):
        super().reset(T, rng)
        self.limit = 3.0 * self.r * float(T) ** self.beta
        self.k = 0

    def choose(self, a):
        if self.x < a <= self.y:
            self.k += 1
        m = self.x if self.k <= self.limit else self.y
        return L if a > m else R


def threshold_switch_bob(vA, r=1.0, beta=0.5):
    return ThresholdSwitchBob(vA, r, beta)


class RemarkFakerBob(BobStrategy):
    """Fake a midpoint at ``y = 1/2 + 1/((2 - 2 alpha) log2 T + 2)``.

    Cuts below ``y`` get ``R``, cuts at or above get ``L``.
    """

    modes = (SEQUENTIAL,)

    def __init__(self, alpha=0.5):
        self.alpha = float(alpha)

    def reset(self, T, rng):
        super().reset(T, rng)
        self.y = remark_fake_point(self.alpha, T)

    def choose(self, a):
        return R if a < self.y else L


def remark_fake_point(alpha, T):
    return 0.5 + 1.0 / ((2.0 - 2.0 * alpha) * math.log2(T) + 2.0)


def remark_faker_bob(alpha=0.5):
    return RemarkFakerBob(alpha)


class IntervalAlternatingBob(BobStrategy):
    """Split the cake into ``P = ceil(sqrt T)`` intervals of equal value to
    Bob and alternate ``R, L, R, ...`` separately within each interval.

    Intervals are half-open ``[z_{j-1}, z_j)``; the last one is closed.
    """

    modes = (SEQUENTIAL,)

    def __init__(self, vB):
        self.vB = vB

    def reset(self, T, rng):
        super().reset(T, rng)
        self.P = math.ceil(math.sqrt(T))
        self.z = [self.vB.point_at_value(0.0, 1.0, j / self.P) for j in range(self.P + 1)]
        self.z[0], self.z[-1] = 0.0, 1.0
        self._inner = self.z[1:-1]
        self.counts = [0] * self.P

    def interval_of(self, a):
        return bisect_right(self._inner, a)

    def choose(self, a):
        j = self.interval_of(a)
        self.counts[j] += 1
        return R if self.counts[j] % 2 == 1 else L


def interval_alternating_bob(vB):
    return IntervalAlternatingBob(vB)


class RandomBob(BobStrategy):
    """Fair coin each round, independent of the cut."""

    def __init__(self, seed=None):
        self.seed = seed

    def reset(self, T, rng):
        import numpy as np

        super().reset(T, rng if self.seed is None else np.random.default_rng(self.seed))

    def choose(self, a):
        return L if self.rng.random() < 0.5 else R


def random_bob(seed=None):
    return RandomBob(seed)


class FictitiousBob(BobStrategy):
    """Best response to Alice's empirical cuts (simultaneous mode only).

    ``beta`` accumulates ``2 V_B([0, a]) - 1``; positive means the left
    piece has been worth more on average.
    """

    modes = (SIMULTANEOUS,)
    TIE_RULES = ("L", "R", "seeded-random")

    def __init__(self, vB, tie_break="L"):
        if tie_break not in self.TIE_RULES:
            raise ValueError(f"unknown tie rule {tie_break!r}")
        self.vB = vB
        self.tie_break = tie_break

    def reset(self, T, rng):
        super().reset(T, rng)
        self.beta = 0.0

    def choose(self, a):
        if self.beta > 0.0:
            return L
        if self.beta < 0.0:
            return R
        if self.tie_break == "seeded-random":
            return L if self.rng.random() < 0.5 else R
        return self.tie_break

    def observe(self, a, b):
        self.beta += 2.0 * self.vB.cumulative(a) - 1.0


def fictitious_bob(vB, tie_break="L"):
    return FictitiousBob(vB, tie_break)


def interval_alternating_bounds(T, delta, Delta):
    """Per-round average bounds ``(u_B lower, u_A upper)`` for the
    interval-alternating Bob, with ``delta``/``Delta`` density bounds."""
    s = math.sqrt(T)
    return 0.5 - 1.0 / s, 0.5 + (Delta / (2.0 * delta) + 2.0) / s

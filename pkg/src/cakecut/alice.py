"""Cutter strategies.

``BinarySearchAlice`` and ``ExploreCommitAlice`` learn Bob's midpoint from his
choices; ``FictitiousAlice`` best-responds to Bob's empirical choice
frequencies; ``FixedCutAlice`` always cuts at the same point. The Blackwell
strategy lives in :mod:`cakecut.blackwell`.
"""

from __future__ import annotations

import math

from .engine import SIMULTANEOUS, AliceStrategy, L, R


EXPLORE_PROBES = 5


class FixedCutAlice(AliceStrategy):
    def __init__(self, x):
        if not (0.0 <= x <= 1.0):
            raise ValueError(f"cut {x!r} outside [0, 1]")
        self.x = float(x)

    def cut(self):
        return self.x


def fixed_cut_alice(x):
    return FixedCutAlice(x)


class BinarySearchAlice(AliceStrategy):
    """Halve a bracket known to contain Bob's midpoint, then exploit.

    Exploration lasts ``tau`` rounds (default ``ceil(ln T)``); each round cuts
    the bracket into halves of equal value to Alice and keeps the half Bob's
    choice points to. Exploitation uses the bracket that was in force during
    the last exploration round: if Alice's own midpoint lies outside it she
    cuts ``1/T`` beyond the near edge, otherwise at her midpoint.
    """

    def __init__(self, vA, tau=None):
        self.vA = vA
        self.tau_override = tau
        self.m_A = vA.midpoint()

    def reset(self, T, rng):
        super().reset(T, rng)
        if T < 2:
            raise ValueError("binary search needs T >= 2")
        self.tau = self.tau_override if self.tau_override is not None else math.ceil(math.log(T))
        self.lo, self.hi = 0.0, 1.0
        self.brackets = [(0.0, 1.0)]
        self.t = 0
        self.pending = None
        self.chi = None

    def cut(self):
        if self.t < self.tau:
            self.pending = self.vA.point_at_value(self.lo, self.hi, 0.5)
            return self.pending
        if self.chi is None:
            self.chi = self.exploit_cut(*self.brackets[max(self.tau - 1, 0)])
        return self.chi

    def exploit_cut(self, lo, hi):
        if self.m_A <= lo:
            return max(0.0, lo - 1.0 / self.T)
        if self.m_A >= hi:
            return min(1.0, hi + 1.0 / self.T)
        return self.m_A

    def observe(self, a, b):
        if self.t < self.tau:
            if b == L:
                self.hi = self.pending
            else:
                self.lo = self.pending
            self.brackets.append((self.lo, self.hi))
        self.t += 1


def binary_search_alice(vA, tau=None):
    return BinarySearchAlice(vA, tau)


def known_alpha(alpha):
    """``f(T) = T**alpha``."""
    return lambda T: float(T) ** alpha


def unknown_alpha():
    """``f(T) = T / (ln T)**4``."""
    return lambda T: float(T) / math.log(T) ** 4


def explore_commit_params(T, f):
    """Return ``(eta, n)``: probe repetitions and number of shrink iterations."""
    eta = math.ceil(math.sqrt(f * T))
    n = math.floor(-math.log2(3.0 * math.sqrt(f / T) * math.log(T)))
    return eta, n


def shrink_bracket(probes, votes, lo, hi):
    """New bracket from the five probe points and their majority votes.

    The vote sequence is padded with a virtual ``R`` before probe 1 and a
    virtual ``L`` after probe 5; the first ``R -> L`` transition at position
    ``j`` selects the bracket. ``j = 0`` gives ``[lo, a_3]``, ``j = 5`` gives
    ``[a_3, hi]`` and otherwise ``[a_{j-1}, a_{j+2}]`` with ``a_0 = lo`` and
    ``a_6 = hi``. For monotone vote patterns this is the standard rule.
    """
    pts = [lo] + list(probes) + [hi]
    seq = [R] + list(votes) + [L]
    j = next(i for i in range(6) if seq[i] == R and seq[i + 1] == L)
    if j == 0:
        return lo, pts[3]
    if j == 5:
        return pts[3], hi
    return pts[j - 1], pts[j + 2]


class ExploreCommitAlice(AliceStrategy):
    """Robust explore-then-commit against Bobs with bounded regret ``f(T)``.

    Each iteration probes the five sixths-points of the current bracket
    ``eta`` times each, takes Bob's majority choice at every probe (ties count
    as ``R``) and shrinks the bracket to a third of its value. After ``n``
    iterations Alice commits to her midpoint clamped into the bracket.
    """

    def __init__(self, vA, f):
        self.vA = vA
        self.f = f
        self.m_A = vA.midpoint()

    def reset(self, T, rng):
        super().reset(T, rng)
        fT = self.f(T) if callable(self.f) else float(self.f)
        self.eta, self.n = explore_commit_params(T, fT)
        self.lo, self.hi = 0.0, 1.0
        self.brackets = [(0.0, 1.0)]
        self.iteration = 0
        self.chi = None
        if self.n <= 0:
            self.chi = self.m_A
        else:
            self._start_iteration()

    def _start_iteration(self):
        self.probes = [self.vA.point_at_value(self.lo, self.hi, j / 6.0)
                       for j in range(1, EXPLORE_PROBES + 1)]
        self.probe = 0
        self.reps = 0
        self.left_votes = [0] * EXPLORE_PROBES

    def _commit(self):
        if self.m_A < self.lo:
            return self.lo
        if self.m_A > self.hi:
            return self.hi
        return self.m_A

    def cut(self):
        if self.chi is not None:
            return self.chi
        return self.probes[self.probe]

    def observe(self, a, b):
        if self.chi is not None:
            return
        if b == L:
            self.left_votes[self.probe] += 1
        self.reps += 1
        if self.reps < self.eta:
            return
        self.reps = 0
        self.probe += 1
        if self.probe < EXPLORE_PROBES:
            return
        votes = [L if 2 * k > self.eta else R for k in self.left_votes]
        self.lo, self.hi = shrink_bracket(self.probes, votes, self.lo, self.hi)
        self.brackets.append((self.lo, self.hi))
        self.iteration += 1
        if self.iteration >= self.n:
            self.chi = self._commit()
        else:
            self._start_iteration()


def explore_commit_alice(vA, f=None, alpha=None):
    """Build the strategy from ``f`` (callable or constant), a known
    ``alpha`` or, when both are omitted, the unknown-alpha schedule."""
    if f is None:
        f = known_alpha(alpha) if alpha is not None else unknown_alpha()
    return ExploreCommitAlice(vA, f)


class FictitiousAlice(AliceStrategy):
    """Best response to Bob's empirical choices (simultaneous mode only).

    With ``alpha = #R - #L`` so far, Alice cuts at 1 when Bob has mostly
    taken the right piece and at 0 when he has mostly taken the left one.
    """

    modes = (SIMULTANEOUS,)
    TIE_RULES = ("cut-zero", "cut-one", "cut-own-midpoint", "seeded-random")

    def __init__(self, vA, tie_break="cut-zero"):
        if tie_break not in self.TIE_RULES:
            raise ValueError(f"unknown tie rule {tie_break!r}")
        self.vA = vA
        self.tie_break = tie_break

    def reset(self, T, rng):
        super().reset(T, rng)
        self.alpha = 0

    def cut(self):
        if self.alpha > 0:
            return 1.0
        if self.alpha < 0:
            return 0.0
        if self.tie_break == "cut-zero":
            return 0.0
        if self.tie_break == "cut-one":
            return 1.0
        if self.tie_break == "cut-own-midpoint":
            return self.vA.midpoint()
        return float(self.rng.random())

    def observe(self, a, b):
        self.alpha += 1 if b == R else -1


def fictitious_alice(vA, tie_break="cut-zero"):
    return FictitiousAlice(vA, tie_break)



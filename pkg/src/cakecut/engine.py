"""Round loop, history bookkeeping, regret accounting and trajectory files.

Each round Alice cuts at ``a_t`` and Bob keeps ``[0, a_t]`` (``"L"``) or
``[a_t, 1]`` (``"R"``); Alice receives the other piece. In sequential mode
Bob sees ``a_t`` before choosing, in simultaneous mode he does not.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ModeError, ProtocolViolation
from .valuation import stackelberg_value

SEQUENTIAL = "sequential"
SIMULTANEOUS = "simultaneous"
MODES = (SEQUENTIAL, SIMULTANEOUS)
L, R = "L", "R"

ALICE_ID, BOB_ID = 0, 1

TRAJECTORY_HEADER = ["t", "a_t", "b_t", "u_A_t", "u_B_t", "cum_u_A", "cum_u_B"]


def player_rng(seed, player_id):
    """Deterministic generator for one player of one run."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(player_id)]))


class AliceStrategy:
    """Cutter. ``reset`` starts a fresh game, ``cut`` proposes the next cut
    and ``observe`` receives the completed round."""

    modes = MODES

    def reset(self, T, rng):
        self.T = T
        self.rng = rng

    def cut(self):
        raise NotImplementedError

    def observe(self, a, b):
        pass


class BobStrategy:
    """Chooser. ``choose`` gets the cut in sequential mode and ``None`` in
    simultaneous mode."""

    modes = MODES

    def reset(self, T, rng):
        self.T = T
        self.rng = rng

    def choose(self, a):
        raise NotImplementedError

    def observe(self, a, b):
        pass


@dataclass
class History:
    """Completed game record; arrays are indexed by round ``t - 1``."""

    cuts: np.ndarray
    choices: np.ndarray
    u_A: np.ndarray
    u_B: np.ndarray
    mode: str = SEQUENTIAL
    meta: dict = field(default_factory=dict)

    @property
    def T(self):
        return len(self.cuts)

    @property
    def left(self):
        return self.choices == L

    @property
    def total_A(self):
        return float(np.sum(self.u_A))

    @property
    def total_B(self):
        return float(np.sum(self.u_B))

    def prefix(self, t):
        return History(self.cuts[:t], self.choices[:t], self.u_A[:t], self.u_B[:t], self.mode)

    def concat(self, other):
        return History(
            np.concatenate([self.cuts, other.cuts]),
            np.concatenate([self.choices, other.choices]),
            np.concatenate([self.u_A, other.u_A]),
            np.concatenate([self.u_B, other.u_B]),
            self.mode,
        )


def payoffs(vA, vB, cuts, choices):
    """Per-round payoffs ``(u_A, u_B)`` for given cuts and choices."""
    cuts = np.asarray(cuts, dtype=np.float64)
    left = np.asarray(choices) == L
    cb = vB.cumulative_many(cuts)
    ca = vA.cumulative_many(cuts)
    u_B = np.where(left, cb, 1.0 - cb)
    u_A = np.where(left, 1.0 - ca, ca)
    return u_A, u_B


def make_history(vA, vB, cuts, choices, mode=SEQUENTIAL):
    cuts = np.asarray(cuts, dtype=np.float64)
    choices = np.asarray(choices, dtype="<U1")
    bad = ~np.isin(choices, [L, R])
    if bad.any():
        raise ProtocolViolation(f"invalid choice {choices[bad][0]!r}")
    u_A, u_B = payoffs(vA, vB, cuts, choices)
    return History(cuts, choices, u_A, u_B, mode)


def run_game(alice, bob, vA, vB, T, mode=SEQUENTIAL, seed=0):
    """Play ``T`` rounds and return the full history.

    Both strategies are reset first, so the same objects can be reused.
    Each player draws from its own generator seeded by ``(seed, player id)``.
    """
    if mode not in MODES:
        raise ModeError(f"unknown mode {mode!r}")
    T = int(T)
    if T < 1:
        raise ValueError("T must be at least 1")
    for who, strat in (("alice", alice), ("bob", bob)):
        if mode not in strat.modes:
            raise ModeError(f"{type(strat).__name__} ({who}) does not support {mode} mode")
    alice.reset(T, player_rng(seed, ALICE_ID))
    bob.reset(T, player_rng(seed, BOB_ID))
    seq = mode == SEQUENTIAL
    cuts = [0.0] * T
    choices = [L] * T
    a_cut, b_choose = alice.cut, bob.choose
    a_obs, b_obs = alice.observe, bob.observe
    for t in range(T):
        a = a_cut()
        if not (0.0 <= a <= 1.0):
            raise ProtocolViolation(f"round {t + 1}: cut {a!r} outside [0, 1]")
        b = b_choose(a if seq else None)
        if b != L and b != R:
            raise ProtocolViolation(f"round {t + 1}: choice {b!r} is not L or R")
        a_obs(a, b)
        b_obs(a, b)
        cuts[t] = a
        choices[t] = b
    return make_history(vA, vB, cuts, choices, mode)


def stackelberg_regret(history, vA, vB):
    """``T * u_A^* - sum_t u_A^t``, unclamped (may be negative)."""
    return history.T * stackelberg_value(vA, vB) - history.total_A


def bob_regret(history, vB):
    """Sum over rounds of Bob's best piece minus the piece he took."""
    cb = vB.cumulative_many(history.cuts)
    best = np.maximum(cb, 1.0 - cb)
    return float(np.sum(best - history.u_B))


def summary(history, vA, vB):
    T = history.T
    return {
        "T": T,
        "mode": history.mode,
        "total_u_A": history.total_A,
        "total_u_B": history.total_B,
        "avg_u_A": history.total_A / T,
        "avg_u_B": history.total_B / T,
        "stackelberg_value": stackelberg_value(vA, vB),
        "stackelberg_regret": stackelberg_regret(history, vA, vB),
        "bob_regret": bob_regret(history, vB),
    }


# -- trajectory files --------------------------------------------------------

def _fmt(x):
    return format(float(x), ".12g")


def write_trajectory(history, path):
    cum_a = np.cumsum(history.u_A)
    cum_b = np.cumsum(history.u_B)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_HEADER)
        for i in range(history.T):
            w.writerow([i + 1, _fmt(history.cuts[i]), history.choices[i],
                        _fmt(history.u_A[i]), _fmt(history.u_B[i]),
                        _fmt(cum_a[i]), _fmt(cum_b[i])])


def read_trajectory(path):
    """Read a trajectory file back into ``(cuts, choices, u_A, u_B)``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != TRAJECTORY_HEADER:
        raise ValueError(f"{path}: not a trajectory file (bad header)")
    body = rows[1:]
    for i, r in enumerate(body):
        if len(r) != len(TRAJECTORY_HEADER) or int(r[0]) != i + 1:
            raise ValueError(f"{path}: malformed row {i + 2}")
    cuts = np.array([float(r[1]) for r in body])
    choices = np.array([r[2] for r in body], dtype="<U1")
    u_A = np.array([float(r[3]) for r in body])
    u_B = np.array([float(r[4]) for r in body])
    return cuts, choices, u_A, u_B


# -- fused fictitious-play path ---------------------------------------------

ALICE_TIE_RULES = ("cut-zero", "cut-one", "cut-own-midpoint", "seeded-random")
BOB_TIE_RULES = ("L", "R", "seeded-random")


def run_fictitious_play(vA, vB, T, alice_tie="cut-zero", bob_tie="L", seed=0):
    """Simultaneous fictitious play for both players in one compiled loop.

    Produces the same history as ``run_game`` with ``fictitious_alice`` and
    ``fictitious_bob`` under the same seed.
    """
    from . import kernels

    if alice_tie not in ALICE_TIE_RULES or bob_tie not in BOB_TIE_RULES:
        raise ValueError(f"unknown tie rule {alice_tie!r} / {bob_tie!r}")
    if not vB.is_piecewise_linear:
        from .alice import fictitious_alice
        from .bob import fictitious_bob

        return run_game(fictitious_alice(vA, alice_tie), fictitious_bob(vB, bob_tie),
                        vA, vB, T, SIMULTANEOUS, seed)
    T = int(T)
    coins_a = player_rng(seed, ALICE_ID).random(T) if alice_tie == "seeded-random" else np.zeros(1)
    coins_b = player_rng(seed, BOB_ID).random(T) if bob_tie == "seeded-random" else np.zeros(1)
    mid_a = vA.midpoint() if alice_tie == "cut-own-midpoint" else 0.0
    cuts, left = kernels.fp_simulate(
        vB.pl, T,
        ALICE_TIE_RULES.index(alice_tie), BOB_TIE_RULES.index(bob_tie),
        mid_a, coins_a, coins_b)
    choices = np.where(np.asarray(left) == 1, L, R)
    return make_history(vA, vB, cuts, choices, SIMULTANEOUS)



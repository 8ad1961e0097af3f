"""Phase-space diagnostics for fictitious play.

With ``alpha_t = #R - #L`` over Bob's first ``t`` choices and
``beta_t = sum_i (2 V_B([0, a_i]) - 1)``, the radius ``rho_t = |alpha_t| +
|beta_t|`` never shrinks and grows only on axis-crossing rounds. The checks
below verify those facts and the payoff envelopes they imply on a finished
history.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .engine import L

BETA_TOL = 1e-12
RHO_TOL = 1e-9
SQRT10 = math.sqrt(10.0)


@dataclass
class SpiralSeries:
    """Series for ``t = 0..T``; index 0 is the all-zero fake round.

    ``crossing[t]`` says whether round ``t`` is axis-crossing. Round ``T``
    can only be classified through ``alpha_T = 0`` since ``beta_{T+1}`` does
    not exist.
    """

    alpha: np.ndarray
    beta: np.ndarray
    rho: np.ndarray
    crossing: np.ndarray

    @property
    def T(self):
        return len(self.alpha) - 1

    @property
    def crossing_rounds(self):
        return np.flatnonzero(self.crossing)


def _sign(x):
    return np.where(x > BETA_TOL, 1, np.where(x < -BETA_TOL, -1, 0))


def compute_series(history, vB):
    left = np.asarray(history.choices) == L
    steps_a = np.where(left, -1, 1).astype(np.int64)
    alpha = np.concatenate([[0], np.cumsum(steps_a)])
    steps_b = 2.0 * vB.cumulative_many(history.cuts) - 1.0
    beta = np.concatenate([[0.0], np.cumsum(steps_b)])
    rho = np.abs(alpha) + np.abs(beta)
    s = _sign(beta)
    crossing = alpha == 0
    into_pos = (s[1:] > 0) & (s[:-1] <= 0)
    into_neg = (s[1:] < 0) & (s[:-1] >= 0)
    crossing[:-1] |= into_pos | into_neg
    return SpiralSeries(alpha, beta, rho, crossing)


def _result(passed, fp_only, detail=""):
    return {"passed": bool(passed), "fp_only": fp_only, "detail": detail}


def _first(mask):
    idx = np.flatnonzero(mask)
    return int(idx[0]) if len(idx) else None


def check_spiral_invariants(s, history):
    """Per-invariant pass/fail report for a completed history.

    Keys: ``alpha_steps``, ``beta_steps``, ``rho_start`` (structural) and
    ``rho_monotone``, ``crossing_spacing``, ``bob_envelope``, ``rho_terminal``
    (valid for fictitious play only, flagged via ``fp_only``).
    """
    T = s.T
    rep = {}
    da = np.diff(s.alpha)
    bad = _first(np.abs(da) != 1)
    rep["alpha_steps"] = _result(bad is None, False, "" if bad is None else f"round {bad + 1}")

    db = np.abs(np.diff(s.beta))
    extreme = (history.cuts == 0.0) | (history.cuts == 1.0)
    # |step| == 1 exactly at the extreme cuts (assumes no zero-density end pieces)
    bad_b = (db > 1.0 + RHO_TOL) | (extreme & (np.abs(db - 1.0) > RHO_TOL)) | (~extreme & (db >= 1.0))
    bad = _first(bad_b)
    rep["beta_steps"] = _result(bad is None, False, "" if bad is None else f"round {bad + 1}")

    ok = s.rho[0] == 0.0 and bool(np.all(s.rho[1:] >= 1.0 - RHO_TOL))
    rep["rho_start"] = _result(ok, True)

    # (a) radius never shrinks; flat off crossings, grows by at most 2 on them
    dr = np.diff(s.rho)
    cr = s.crossing[:-1]
    bad_mono = (dr < -RHO_TOL) | (~cr & (np.abs(dr) > RHO_TOL)) | (cr & (dr > 2.0 + RHO_TOL))
    bad = _first(bad_mono)
    rep["rho_monotone"] = _result(bad is None, True, "" if bad is None else f"round {bad}")

    # (b) if t-1 and tau are consecutive crossings: rho_t - 2 <= tau - t <= rho_t
    c = s.crossing_rounds
    viol = None
    for prev, nxt in zip(c[:-1], c[1:]):
        t = prev + 1
        gap = nxt - t
        r = s.rho[t]
        if not (r - 2.0 - RHO_TOL <= gap <= r + RHO_TOL):
            viol = f"crossings {prev} -> {nxt}: gap {gap}, rho {r:.6g}"
            break
    rep["crossing_spacing"] = _result(viol is None, True, viol or "")

    # (c) |sum_i (2 u_B^i - 1)| <= rho_t
    env = np.abs(np.cumsum(2.0 * history.u_B - 1.0))
    bad = _first(env > s.rho[1:] + RHO_TOL)
    rep["bob_envelope"] = _result(bad is None, True, "" if bad is None else f"round {bad + 1}")

    # (d) rho_T <= 2 sqrt(10 T), asserted for T >= 5
    if T >= 5:
        ok = s.rho[T] <= 2.0 * math.sqrt(10.0 * T) + RHO_TOL
        rep["rho_terminal"] = _result(ok, True, f"rho_T={s.rho[T]:.6g}")
    else:
        rep["rho_terminal"] = _result(True, True, "T < 5: not asserted")
    return rep


def all_passed(report):
    return all(v["passed"] for v in report.values())


def payoff_bounds_report(history, s=None):
    """Normalized payoff deviations and whether each stays within its constant."""
    T = history.T
    uA, uB = history.total_A, history.total_B
    rt = math.sqrt(T) if T else 1.0
    middle = int(np.sum((history.cuts != 0.0) & (history.cuts != 1.0)))
    out = {
        "T": T,
        "valid": T >= 5,
        "bob_deficit": (uB - T / 2.0) / rt,
        "total_deficit": (uA + uB - T) / rt,
        "alice_dev": abs(uA / T - 0.5) * rt if T else 0.0,
        "bob_dev": abs(uB / T - 0.5) * rt if T else 0.0,
        "middle_cuts": middle,
    }
    limits = {"bob_deficit": SQRT10, "total_deficit": SQRT10,
              "alice_dev": 2.0 * SQRT10, "bob_dev": SQRT10}
    flags = {}
    for key, lim in limits.items():
        flags[key] = abs(out[key]) <= lim + RHO_TOL
    flags["middle_cuts"] = middle < math.sqrt(10.0 * T)
    out["within"] = flags
    out["passed"] = (not out["valid"]) or all(flags.values())
    return out


SPIRAL_HEADER = ["t", "alpha", "beta", "rho", "is_axis_crossing"]


def write_spiral(s, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SPIRAL_HEADER)
        for t in range(len(s.alpha)):
            w.writerow([t, int(s.alpha[t]), format(float(s.beta[t]), ".12g"),
                        format(float(s.rho[t]), ".12g"), int(bool(s.crossing[t]))])

"""Experiment orchestration: single runs, parameter sweeps, trajectory analysis."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import engine
from .blackwell import BlackwellAlice, write_diagnostics
from .bob import deceptive_regret_bound, interval_alternating_bounds
from .config import RunConfig, SweepConfig, dump_json
from .fp_analysis import (all_passed, check_spiral_invariants, compute_series,
                          payoff_bounds_report, write_spiral)
from .valuation import random_piecewise

OUTPUT_ENV = "CAKECUT_OUTPUT_DIR"
DEFAULT_DIR = "cakecut-out"
DELTA_SLACK = 1e-6


def output_dir(configured=None):
    d = configured or os.environ.get(OUTPUT_ENV) or DEFAULT_DIR
    os.makedirs(d, exist_ok=True)
    return d


def simulate(cfg: RunConfig):
    """Play the configured game; returns ``(history, alice, bob)``."""
    alice, bob = cfg.build()
    if cfg.alice["kind"] == "fictitious" and cfg.bob["kind"] == "fictitious":
        h = engine.run_fictitious_play(
            cfg.vA, cfg.vB, cfg.T,
            cfg.alice["params"].get("tie_break", "cut-zero"),
            cfg.bob["params"].get("tie_break", "L"), cfg.seed)
        return h, alice, bob
    h = engine.run_game(alice, bob, cfg.vA, cfg.vB, cfg.T, cfg.mode, cfg.seed)
    return h, alice, bob


def blackwell_curves(alice, history):
    """``max_t delta_t t`` and the first payoff-bound failures for a Blackwell run."""
    if not isinstance(alice, BlackwellAlice):
        return None
    rows = alice.diagnostics
    dt = np.array([r[1] * r[0] for r in rows[1:]]) if len(rows) > 1 else np.zeros(0)
    return {"max_delta_t_times_t": float(dt.max()) if len(dt) else 0.0}


def bound_checks(cfg, history, alice, summ):
    """Explicit finite-T bounds applicable to this Alice/Bob pairing.

    Returns a list of ``{"check", "value", "bound", "passed"}`` records.
    """
    T = history.T
    ak, bk = cfg.alice["kind"], cfg.bob["kind"]
    vA, vB = cfg.vA, cfg.vB
    out = []

    def add(name, value, bound, passed=None):
        out.append({"check": name, "value": float(value), "bound": float(bound),
                    "passed": bool(value <= bound if passed is None else passed)})

    regret = summ["stackelberg_regret"]
    if ak == "binary-search" and bk == "myopic" and T >= 2:
        tau = cfg.alice["params"].get("tau") or math.ceil(math.log(T))
        add("binary_search_regret", regret, binary_search_bound(T, tau, vA.Delta))
    if ak == "explore-commit" and bk in ("myopic", "deceptive"):
        f = cfg.f_of_T()
        add("explore_commit_regret", regret, explore_commit_bound(T, f))
    if bk == "deceptive":
        alpha = float(cfg.bob["params"].get("alpha", 0.5))
        add("deceptive_bob_regret", summ["bob_regret"], deceptive_regret_bound(vB, alpha, T))
    if bk == "remark-unbounded-faker":
        alpha = float(cfg.bob["params"].get("alpha", 0.5))
        add("faker_bob_regret", summ["bob_regret"], float(T) ** alpha)
    if bk == "interval-alternating" and vA.delta > 0 and vB.delta > 0:
        lo_b, hi_a = interval_alternating_bounds(T, min(vA.delta, vB.delta), max(vA.Delta, vB.Delta))
        add("interval_bob_payoff", lo_b - summ["avg_u_B"], 0.0)
        add("interval_alice_payoff", summ["avg_u_A"], hi_a)
    if isinstance(alice, BlackwellAlice):
        for name, value, bound in blackwell_checks(alice, history, vB.Delta):
            add(name, value, bound)
    if ak == "fictitious" and bk == "fictitious":
        s = compute_series(history, vB)
        rep = check_spiral_invariants(s, history)
        pay = payoff_bounds_report(history, s)
        for name, r in rep.items():
            out.append({"check": f"spiral_{name}", "value": float(r["passed"]), "bound": 1.0,
                        "passed": r["passed"]})
        if pay["valid"]:
            for name, ok in pay["within"].items():
                v = pay[name]
                out.append({"check": f"fp_{name}", "value": float(v), "bound": float("nan"),
                            "passed": bool(ok)})
    return out


def binary_search_bound(T, tau, Delta):
    return tau + (T - tau) * (2.0 ** (1 - tau) + Delta / T)


def explore_commit_bound(T, f):
    return (5.0 / math.log(2.0) + 6.0) * math.sqrt(f * T) * math.log(T)


def blackwell_checks(alice, history, Delta_B):
    """Worst-case slack of the three per-round Blackwell guarantees.

    Each entry is ``(name, value, bound)`` with the worst round's value.
    """
    rows = alice.diagnostics
    t = np.arange(1, history.T + 1, dtype=np.float64)
    delta = np.array([r[1] for r in rows])
    res = []
    if history.T >= 2:
        res.append(("blackwell_delta_t_times_t", float(np.max(delta[1:] * t[1:])), 1.0 + DELTA_SLACK))
    if history.T >= 3:
        avg_a = np.cumsum(history.u_A) / t
        avg_b = np.cumsum(history.u_B) / t
        tt = t[2:]
        gap_a = (0.5 - 4.0 / np.sqrt(tt - 1.0)) - avg_a[2:]
        gap_b = avg_b[2:] - (0.5 + (5.0 * Delta_B + 11.0) / np.log(2.0 * tt / 5.0))
        res.append(("blackwell_alice_payoff", float(np.max(gap_a)), 0.0))
        res.append(("blackwell_bob_payoff", float(np.max(gap_b)), 0.0))
    return res


def run(cfg: RunConfig, write=True):
    """Run one game; write trajectory/summary (and diagnostics if flagged)."""
    history, alice, bob = simulate(cfg)
    summ = engine.summary(history, cfg.vA, cfg.vB)
    summ["seed"] = cfg.seed
    summ["alice"] = cfg.alice["kind"]
    summ["bob"] = cfg.bob["kind"]
    bw = blackwell_curves(alice, history)
    if bw:
        summ.update(bw)
    summ["bound_checks"] = bound_checks(cfg, history, alice, summ)
    if write:
        d = output_dir(cfg.output.get("dir"))
        traj = os.path.join(d, cfg.output["trajectory"])
        engine.write_trajectory(history, traj)
        summ["trajectory_path"] = traj
        if cfg.diagnostics.get("spiral"):
            p = os.path.join(d, "spiral.csv")
            write_spiral(compute_series(history, cfg.vB), p)
            summ["spiral_path"] = p
        if cfg.diagnostics.get("blackwell_delta") and isinstance(alice, BlackwellAlice):
            p = os.path.join(d, "blackwell_delta.csv")
            write_diagnostics(alice.diagnostics, p)
            summ["delta_path"] = p
        with open(os.path.join(d, cfg.output["summary"]), "w") as fh:
            fh.write(dump_json(summ))
    return summ, history


# -- sweeps -------------------------------------------------------------------

SWEEP_COLUMNS = [
    "instance", "T", "seed", "alice", "bob", "mode",
    "total_u_A", "total_u_B", "avg_u_A", "avg_u_B", "stackelberg_value",
    "stackelberg_regret", "bob_regret",
    "regret_over_log_T", "regret_over_sqrt_fT_log_T",
    "alice_dev_sqrt_T", "bob_dev_sqrt_T", "max_delta_t_times_t",
    "checks_passed", "checks_failed",
]


def _instance_valuations(sweep, i):
    base = sweep.base
    if sweep.instances is None:
        return base.vA, base.vB
    inst = sweep.instances
    rng = np.random.default_rng([int(inst["seed"]), i])
    seg = tuple(inst["segments"])
    vA, vB = base.vA, base.vB
    if "vA" in inst["players"]:
        vA = random_piecewise(rng, inst["delta"], inst["Delta"], seg)
    if "vB" in inst["players"]:
        vB = random_piecewise(rng, inst["delta"], inst["Delta"], seg)
    return vA, vB


def _grid(sweep):
    count = sweep.instances["count"] if sweep.instances else 1
    for i in range(count):
        vA, vB = _instance_valuations(sweep, i)
        for T in sweep.T:
            for seed in sweep.seeds:
                yield i, sweep.base.with_updates(T=T, seed=seed, vA=vA, vB=vB)


def _sweep_point(job):
    i, cfg = job
    summ, _ = run(cfg, write=False)
    T = summ["T"]
    f = cfg.f_of_T()
    reg = summ["stackelberg_regret"]
    row = {
        "instance": i, "T": T, "seed": cfg.seed,
        "alice": cfg.alice["kind"], "bob": cfg.bob["kind"], "mode": cfg.mode,
        "total_u_A": summ["total_u_A"], "total_u_B": summ["total_u_B"],
        "avg_u_A": summ["avg_u_A"], "avg_u_B": summ["avg_u_B"],
        "stackelberg_value": summ["stackelberg_value"],
        "stackelberg_regret": reg, "bob_regret": summ["bob_regret"],
        "regret_over_log_T": reg / math.log(T) if T > 1 else "",
        "regret_over_sqrt_fT_log_T": reg / (math.sqrt(f * T) * math.log(T)) if f and T > 1 else "",
        "alice_dev_sqrt_T": abs(summ["avg_u_A"] - 0.5) * math.sqrt(T),
        "bob_dev_sqrt_T": abs(summ["avg_u_B"] - 0.5) * math.sqrt(T),
        "max_delta_t_times_t": summ.get("max_delta_t_times_t", ""),
        "checks_passed": sum(c["passed"] for c in summ["bound_checks"]),
        "checks_failed": sum(not c["passed"] for c in summ["bound_checks"]),
    }
    violations = [dict(c, instance=i, T=T, seed=cfg.seed)
                  for c in summ["bound_checks"] if not c["passed"]]
    return row, violations


def _cell(v):
    if isinstance(v, float):
        return format(v, ".12g")
    return v


def sweep(sweep_cfg: SweepConfig, write=True):
    """Run every grid point; returns ``(rows, violations)`` in grid order."""
    jobs = list(_grid(sweep_cfg))
    if sweep_cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=sweep_cfg.workers) as ex:
            results = list(ex.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    rows = [r for r, _ in results]
    violations = [v for _, vs in results for v in vs]
    if write:
        d = output_dir(sweep_cfg.output.get("dir"))
        with open(os.path.join(d, sweep_cfg.output["csv"]), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SWEEP_COLUMNS)
            for r in rows:
                w.writerow([_cell(r[c]) for c in SWEEP_COLUMNS])
        with open(os.path.join(d, sweep_cfg.output["report"]), "w") as fh:
            fh.write(dump_json({"grid_points": len(rows), "violations": violations}))
    return rows, violations


# -- analysis of stored trajectories ----------------------------------------------

def analyze(trajectory_path, vB, vA=None, spiral_out=None):
    """Recompute regrets and the spiral series from a trajectory file.

    Bob's payoffs are recomputed from the stored cuts; Alice's come from the
    file unless ``vA`` is given.
    """
    cuts, choices, u_A_file, _ = engine.read_trajectory(trajectory_path)
    if vA is not None:
        h = engine.make_history(vA, vB, cuts, choices)
    else:
        u_A, u_B = engine.payoffs(vB, vB, cuts, choices)
        h = engine.History(cuts, choices, u_A_file, u_B)
    out = {
        "T": h.T,
        "total_u_A": h.total_A,
        "total_u_B": h.total_B,
        "avg_u_A": h.total_A / h.T if h.T else 0.0,
        "avg_u_B": h.total_B / h.T if h.T else 0.0,
        "bob_regret": engine.bob_regret(h, vB),
    }
    if vA is not None:
        out["stackelberg_regret"] = engine.stackelberg_regret(h, vA, vB)
    s = compute_series(h, vB)
    rep = check_spiral_invariants(s, h)
    out["rho_T"] = float(s.rho[-1])
    out["axis_crossings"] = int(np.sum(s.crossing))
    out["spiral_checks"] = {k: v["passed"] for k, v in rep.items()}
    out["spiral_all_passed"] = all_passed(rep)
    out["payoff_bounds"] = payoff_bounds_report(h, s)
    if spiral_out:
        write_spiral(s, spiral_out)
        out["spiral_path"] = spiral_out
    return out


def to_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=float)

"""Run and sweep configurations (JSON files).

A run config looks like::

    {"mode": "sequential", "T": 1000, "seed": 0,
     "alice": {"kind": "binary-search", "params": {}},
     "bob": {"kind": "myopic", "params": {"tie_break": "L"}},
     "vA": {"kind": "piecewise", "breakpoints": [0, 1], "densities": [1]},
     "vB": {"kind": "two-block", "y": 0.7},
     "output": {"dir": null, "trajectory": "trajectory.csv", "summary": "summary.json"},
     "diagnostics": {"spiral": false, "blackwell_delta": false}}

A sweep config wraps a run config under ``base`` and adds grid axes.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

from . import alice as A
from . import bob as B
from .blackwell import BlackwellAlice
from .engine import MODES, SEQUENTIAL
from .errors import ConfigError, ModeError, ValuationError
from .valuation import Valuation

ALICE_KINDS = {
    "binary-search": {"tau"},
    "explore-commit": {"alpha", "unknown_alpha", "f"},
    "blackwell": {"n_max", "eps_root"},
    "fictitious": {"tie_break"},
    "fixed": {"x"},
}
BOB_KINDS = {
    "myopic": {"tie_break"},
    "deceptive": {"alpha"},
    "threshold-switch": {"r", "beta"},
    "interval-alternating": set(),
    "random": {"seed"},
    "fictitious": {"tie_break"},
    "remark-unbounded-faker": {"alpha"},
    "constant": {"side"},
}

DEFAULT_OUTPUT = {"dir": None, "trajectory": "trajectory.csv", "summary": "summary.json"}
DEFAULT_DIAGNOSTICS = {"spiral": False, "blackwell_delta": False}


def _strategy_spec(raw, kinds, where, errors):
    if not isinstance(raw, dict) or "kind" not in raw:
        errors.append(f"{where}: expected an object with 'kind'")
        return None
    kind = raw["kind"]
    if kind not in kinds:
        errors.append(f"{where}.kind: unknown kind {kind!r} (choose from {sorted(kinds)})")
        return None
    params = raw.get("params", {}) or {}
    if not isinstance(params, dict):
        errors.append(f"{where}.params: expected an object")
        return None
    extra = set(params) - kinds[kind]
    if extra:
        errors.append(f"{where}.params: unknown parameter(s) {sorted(extra)} for {kind!r}")
    extra_top = set(raw) - {"kind", "params"}
    if extra_top:
        errors.append(f"{where}: unknown field(s) {sorted(extra_top)}")
    return {"kind": kind, "params": dict(params)}


def _valuation(raw, where, errors):
    try:
        return Valuation.from_dict(raw)
    except (ValuationError, TypeError, ValueError) as exc:
        errors.append(f"{where}: {exc}")
        return None


@dataclass
class RunConfig:
    T: int
    alice: dict
    bob: dict
    vA: Valuation
    vB: Valuation
    mode: str = SEQUENTIAL
    seed: int = 0
    output: dict = field(default_factory=lambda: dict(DEFAULT_OUTPUT))
    diagnostics: dict = field(default_factory=lambda: dict(DEFAULT_DIAGNOSTICS))

    @classmethod
    def from_dict(cls, d, where="config"):
        errors = []
        if not isinstance(d, dict):
            raise ConfigError(f"{where}: expected a JSON object")
        known = {"mode", "T", "seed", "alice", "bob", "vA", "vB", "output", "diagnostics"}
        extra = set(d) - known
        if extra:
            errors.append(f"{where}: unknown field(s) {sorted(extra)}")
        for req in ("T", "alice", "bob", "vA", "vB"):
            if req not in d:
                errors.append(f"{where}.{req}: missing")
        mode = d.get("mode", SEQUENTIAL)
        if mode not in MODES:
            errors.append(f"{where}.mode: must be one of {list(MODES)}")
        T = d.get("T")
        if "T" in d and (not isinstance(T, int) or isinstance(T, bool) or T < 1):
            errors.append(f"{where}.T: must be a positive integer")
        seed = d.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            errors.append(f"{where}.seed: must be a nonnegative integer")
        alice = _strategy_spec(d["alice"], ALICE_KINDS, f"{where}.alice", errors) if "alice" in d else None
        bob = _strategy_spec(d["bob"], BOB_KINDS, f"{where}.bob", errors) if "bob" in d else None
        vA = _valuation(d["vA"], f"{where}.vA", errors) if "vA" in d else None
        vB = _valuation(d["vB"], f"{where}.vB", errors) if "vB" in d else None
        output = dict(DEFAULT_OUTPUT)
        output.update(d.get("output") or {})
        if set(output) - set(DEFAULT_OUTPUT):
            errors.append(f"{where}.output: unknown field(s) {sorted(set(output) - set(DEFAULT_OUTPUT))}")
        diagnostics = dict(DEFAULT_DIAGNOSTICS)
        diagnostics.update(d.get("diagnostics") or {})
        if set(diagnostics) - set(DEFAULT_DIAGNOSTICS):
            errors.append(f"{where}.diagnostics: unknown field(s) "
                          f"{sorted(set(diagnostics) - set(DEFAULT_DIAGNOSTICS))}")
        if errors:
            raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))
        cfg = cls(T=T, alice=alice, bob=bob, vA=vA, vB=vB, mode=mode, seed=seed,
                  output=output, diagnostics=diagnostics)
        cfg.build()  # parameter and mode checks
        return cfg

    def to_dict(self):
        return {
            "mode": self.mode,
            "T": self.T,
            "seed": self.seed,
            "alice": copy.deepcopy(self.alice),
            "bob": copy.deepcopy(self.bob),
            "vA": self.vA.to_dict(),
            "vB": self.vB.to_dict(),
            "output": dict(self.output),
            "diagnostics": dict(self.diagnostics),
        }

    def with_updates(self, **kw):
        d = self.to_dict()
        for k, v in kw.items():
            d[k] = v.to_dict() if isinstance(v, Valuation) else v
        return RunConfig.from_dict(d)

    def build(self):
        """Instantiate ``(alice, bob)``; raises ConfigError or ModeError."""
        try:
            alice = build_alice(self.alice, self.vA, self.vB)
            bob = build_bob(self.bob, self.vA, self.vB)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid strategy parameters: {exc}") from exc
        for who, strat in (("alice", alice), ("bob", bob)):
            if self.mode not in strat.modes:
                raise ModeError(f"{who} kind {getattr(self, who)['kind']!r} "
                                f"does not support {self.mode} mode")
        return alice, bob

    def f_of_T(self):
        """The regret budget ``f(T)`` implied by an explore-commit Alice, if any."""
        if self.alice["kind"] != "explore-commit":
            return None
        p = self.alice["params"]
        if "f" in p:
            return float(p["f"])
        if "alpha" in p and not p.get("unknown_alpha"):
            return float(self.T) ** float(p["alpha"])
        return float(self.T) / math.log(self.T) ** 4


def build_alice(spec, vA, vB):
    kind, p = spec["kind"], spec["params"]
    if kind == "binary-search":
        return A.binary_search_alice(vA, p.get("tau"))
    if kind == "explore-commit":
        if "f" in p:
            return A.explore_commit_alice(vA, f=float(p["f"]))
        if p.get("unknown_alpha") or "alpha" not in p:
            return A.explore_commit_alice(vA)
        return A.explore_commit_alice(vA, alpha=float(p["alpha"]))
    if kind == "blackwell":
        return BlackwellAlice(vA, int(p.get("n_max", 6)), float(p.get("eps_root", 1e-12)))
    if kind == "fictitious":
        return A.fictitious_alice(vA, p.get("tie_break", "cut-zero"))
    if kind == "fixed":
        if "x" not in p:
            raise ValueError("fixed Alice needs params.x")
        return A.fixed_cut_alice(float(p["x"]))
    raise ValueError(f"unknown alice kind {kind!r}")


def build_bob(spec, vA, vB):
    kind, p = spec["kind"], spec["params"]
    if kind == "myopic":
        return B.myopic_bob(vB, p.get("tie_break", "L"), vA)
    if kind == "deceptive":
        return B.deceptive_bob(vB, float(p.get("alpha", 0.5)))
    if kind == "threshold-switch":
        return B.threshold_switch_bob(vA, float(p.get("r", 1.0)), float(p.get("beta", 0.5)))
    if kind == "interval-alternating":
        return B.interval_alternating_bob(vB)
    if kind == "random":
        return B.random_bob(p.get("seed"))
    if kind == "fictitious":
        return B.fictitious_bob(vB, p.get("tie_break", "L"))
    if kind == "remark-unbounded-faker":
        return B.remark_faker_bob(float(p.get("alpha", 0.5)))
    if kind == "constant":
        return B.constant_bob(p.get("side", "L"))
    raise ValueError(f"unknown bob kind {kind!r}")


@dataclass
class SweepConfig:
    base: RunConfig
    T: list
    seeds: list
    instances: dict = None
    workers: int = 1
    output: dict = field(default_factory=lambda: {"dir": None, "csv": "sweep.csv",
                                                  "report": "bound_report.json"})

    @classmethod
    def from_dict(cls, d):
        errors = []
        if not isinstance(d, dict):
            raise ConfigError("sweep config: expected a JSON object")
        extra = set(d) - {"base", "T", "seeds", "instances", "workers", "output"}
        if extra:
            errors.append(f"sweep: unknown field(s) {sorted(extra)}")
        if "base" not in d:
            raise ConfigError("invalid configuration:\n  sweep.base: missing")
        base = RunConfig.from_dict(d["base"], where="sweep.base")
        Ts = d.get("T", [base.T])
        if not isinstance(Ts, list) or not Ts or not all(
                isinstance(t, int) and not isinstance(t, bool) and t >= 1 for t in Ts):
            errors.append("sweep.T: must be a nonempty list of positive integers")
        seeds = d.get("seeds", [base.seed])
        if isinstance(seeds, int) and not isinstance(seeds, bool):
            seeds = list(range(seeds)) if seeds >= 1 else None
        if not isinstance(seeds, list) or not seeds or not all(
                isinstance(s, int) and not isinstance(s, bool) and s >= 0 for s in seeds):
            errors.append("sweep.seeds: must be a positive count or a list of nonnegative integers")
        inst = d.get("instances")
        if inst is not None:
            inst = dict(inst)
            allowed = {"count", "delta", "Delta", "segments", "seed", "players"}
            if set(inst) - allowed:
                errors.append(f"sweep.instances: unknown field(s) {sorted(set(inst) - allowed)}")
            inst.setdefault("count", 1)
            inst.setdefault("delta", 0.25)
            inst.setdefault("Delta", 4.0)
            inst.setdefault("segments", [2, 8])
            inst.setdefault("seed", 0)
            inst.setdefault("players", ["vA", "vB"])
            if not (0 < inst["delta"] <= 1 <= inst["Delta"]):
                errors.append("sweep.instances: need 0 < delta <= 1 <= Delta")
            seg = inst["segments"]
            if not (isinstance(seg, list) and len(seg) == 2 and 1 <= seg[0] <= seg[1]):
                errors.append("sweep.instances.segments: expected [min, max] with 1 <= min <= max")
            if not set(inst["players"]) <= {"vA", "vB"}:
                errors.append("sweep.instances.players: subset of ['vA', 'vB']")
            if not isinstance(inst["count"], int) or inst["count"] < 1:
                errors.append("sweep.instances.count: must be a positive integer")
        workers = d.get("workers", 1)
        if not isinstance(workers, int) or workers < 1:
            errors.append("sweep.workers: must be a positive integer")
        output = {"dir": None, "csv": "sweep.csv", "report": "bound_report.json"}
        output.update(d.get("output") or {})
        if errors:
            raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))
        return cls(base=base, T=list(Ts), seeds=list(seeds), instances=inst,
                   workers=workers, output=output)

    def to_dict(self):
        d = {"base": self.base.to_dict(), "T": list(self.T), "seeds": list(self.seeds),
             "workers": self.workers, "output": dict(self.output)}
        if self.instances is not None:
            d["instances"] = copy.deepcopy(self.instances)
        return d


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc


def dump_json(d):
    return json.dumps(d, indent=2, sort_keys=True) + "\n"

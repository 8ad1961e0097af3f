"""Repeated cake cutting between a cutter (Alice) and a chooser (Bob).

Submodules
----------
valuation    cumulative valuations on [0, 1] and the Stackelberg benchmark
engine       round loop, histories, regrets, trajectory files
alice, bob   strategies for each side
blackwell    approachability-based cutter and its grid machinery
fp_analysis  fictitious-play phase-space checks
config, runner, cli   configuration files and experiment orchestration
kernels      compiled hot loops with a pure-Python fallback
"""

from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]

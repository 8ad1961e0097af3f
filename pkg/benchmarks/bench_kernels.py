"""Compare the compiled kernels with the pure-Python fallback.

Each workload runs in a fresh interpreter so the backend is chosen at import,
exactly as a user would get it. Usage:

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "pl_eval_1e5": """
import numpy as np
from cakecut import valuation as V
v = V.random_piecewise(np.random.default_rng(0), 0.25, 4.0)
xs = np.random.default_rng(1).random(100000).tolist()
def work():
    for x in xs:
        v.cumulative(x)
""",
    "pl_inverse_1e5": """
import numpy as np
from cakecut import valuation as V
v = V.random_piecewise(np.random.default_rng(0), 0.25, 4.0)
ts = np.random.default_rng(1).random(100000).tolist()
def work():
    for t in ts:
        v.inverse(t)
""",
    "fictitious_play_T1e5": """
import numpy as np
from cakecut import engine as E, valuation as V
rng = np.random.default_rng(0)
vA, vB = V.random_piecewise(rng, 0.25, 4.0), V.random_piecewise(rng, 0.25, 4.0)
def work():
    E.run_fictitious_play(vA, vB, 100000, "seeded-random", "seeded-random", seed=1)
""",
    "blackwell_T2000": """
import numpy as np
from cakecut import engine as E, valuation as V, blackwell as B
from cakecut.bob import myopic_bob
rng = np.random.default_rng(0)
vA, vB = V.random_piecewise(rng, 0.25, 4.0), V.random_piecewise(rng, 0.25, 4.0)
def work():
    E.run_game(B.blackwell_alice(vA), myopic_bob(vB), vA, vB, 2000)
""",
    "binary_search_T1e5": """
import numpy as np
from cakecut import engine as E, valuation as V
from cakecut.alice import binary_search_alice
from cakecut.bob import myopic_bob
rng = np.random.default_rng(0)
vA, vB = V.random_piecewise(rng, 0.25, 4.0), V.random_piecewise(rng, 0.25, 4.0)
def work():
    E.run_game(binary_search_alice(vA), myopic_bob(vB), vA, vB, 100000)
""",
}

TIMER = """
import json, timeit
from cakecut import BACKEND
times = timeit.repeat(work, number=1, repeat={repeat})
print(json.dumps({{"backend": BACKEND, "best": min(times)}}))
"""


def time_workload(code, pure, repeat):
    env = dict(os.environ)
    env.pop("CAKECUT_PURE_PYTHON", None)
    if pure:
        env["CAKECUT_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code + TIMER.format(repeat=repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    print(f"{'workload':<24}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for name, code in WORKLOADS.items():
        fast = time_workload(code, False, args.repeat)
        slow = time_workload(code, True, args.repeat)
        note = "  (extension missing)" if fast["backend"] == "python" else ""
        print(f"{name:<24}{fast['best']:>11.3f}s{slow['best']:>11.3f}s"
              f"{slow['best'] / fast['best']:>9.2f}x{note}")


if __name__ == "__main__":
    main()

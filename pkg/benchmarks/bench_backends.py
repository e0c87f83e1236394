"""Compare the numba and pure-Python kernel backends.

The backend is fixed at import time, so each timing runs in a child
process with GSVTREE_BACKEND set.  Timings exclude JIT compilation: the
child warms the kernel up on the real workload before the clock starts.

Usage: python3 benchmarks/bench_backends.py [--repeats N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
import numpy as np
from gsvtree.backend import active_backend
from gsvtree.fast import ensemble_gsv
from gsvtree.synthetic import random_ensemble, random_partition, wide_fixture

case, repeats = sys.argv[1], int(sys.argv[2])
if case == "wide":
    ensemble, x, partition = wide_fixture()
else:
    rng = np.random.default_rng(0)
    ensemble = random_ensemble(rng, n_trees=50, n_features=30, max_depth=8)
    partition = random_partition(rng, 30, 6)
    x = rng.random(30)

ensemble_gsv(ensemble, x, partition)  # warm-up / JIT
times = []
for _ in range(repeats):
    t0 = time.perf_counter()
    result = ensemble_gsv(ensemble, x, partition)
    times.append(time.perf_counter() - t0)
print(json.dumps({
    "backend": active_backend(),
    "best_ms": min(times) * 1e3,
    "mean_ms": sum(times) / len(times) * 1e3,
    "check": sum(result.values),
}))
"""


def run(backend: str, case: str, repeats: int) -> dict:
    env = dict(os.environ, GSVTREE_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", CHILD, case, str(repeats)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    cases = [
        ("deep", "50 trees, 30 features, depth 8, 6 groups"),
        ("wide", "100 trees, 1131 features, depth 6, 12 groups"),
    ]
    print(f"{'case':<6} {'backend':<8} {'best ms':>10} {'mean ms':>10}")
    results: dict[tuple[str, str], dict] = {}
    for case, label in cases:
        for backend in ("python", "numba"):
            r = run(backend, case, args.repeats)
            results[case, backend] = r
            print(f"{case:<6} {r['backend']:<8} {r['best_ms']:>10.3f} "
                  f"{r['mean_ms']:>10.3f}")
        py = results[case, "python"]
        nb = results[case, "numba"]
        if abs(py["check"] - nb["check"]) > 1e-9 * max(1.0, abs(py["check"])):
            raise SystemExit(f"{case}: backends disagree: "
                             f"{py['check']} vs {nb['check']}")
        speedup = py["best_ms"] / nb["best_ms"]
        print(f"{'':<6} ({label}; numba speedup {speedup:.1f}x)")


if __name__ == "__main__":
    main()

"""Benchmark the sigma-min scan kernel: numba backend vs numpy fallback.

Run:  python3 benchmarks/bench_scan.py [n_gridpoints]

Forces each backend in a subprocess (the backend is chosen at import time
from QGLAB_NO_NUMBA), times the same scan on the bundled dumbbell graph,
and prints a small table.  The numba timing excludes JIT warmup.
"""

import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
import qglab
from qglab import kernels, parse_graph
from qglab.spectral import _edge_arrays

n = int(sys.argv[1])
g = parse_graph(qglab.bundled_graph_path("dumbbell.qg"))
eo, et, ln, _ = _edge_arrays(g)
nv = len(g.vertices)
ks = np.linspace(0.05, 12.0, n)

kernels.scan_sigma_min(eo, et, ln, nv, ks[:2])  # warmup / JIT compile
best = min(
    (lambda t0: (kernels.scan_sigma_min(eo, et, ln, nv, ks),
                 time.perf_counter() - t0)[1])(time.perf_counter())
    for _ in range(3))
print(json.dumps({"backend": kernels.BACKEND, "seconds": best}))
"""


def run(no_numba: bool, n: int) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["QGLAB_NO_NUMBA"] = "1"
    else:
        env.pop("QGLAB_NO_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKER, str(n)],
                         capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 4000
    print(f"sigma-min scan over {n} grid points (dumbbell, 13 edges, 8 vertices)")
    results = [run(True, n), run(False, n)]
    for r in results:
        print(f"  {r['backend']:>6}: {r['seconds'] * 1e3:9.1f} ms")
    if results[0]["backend"] != results[1]["backend"]:
        print(f"  speedup: {results[0]['seconds'] / results[1]['seconds']:.2f}x")
    else:
        print("  (numba unavailable; both runs used the numpy fallback)")


if __name__ == "__main__":
    main()

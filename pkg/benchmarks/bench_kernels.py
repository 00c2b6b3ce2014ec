"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--points 100000]

Each path runs in a fresh interpreter so that JACKSONINE_NO_NUMBA is read
before anything is imported.  Numba timings exclude the first (compiling)
call.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from jacksonine import _accel, jack
from jacksonine.hyper import MultiplicityB, bessel_B_batch
from jacksonine.laguerre import LaguerreParams, laguerre_normalized

repeat, npts = int(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(0)
pts = rng.uniform(0, 1, size=(npts, 3))
k = MultiplicityB(3, 1, 0.5)

def best(fn):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

out = {
    "numba": _accel.numba_enabled(),
    "monomials_m8": best(lambda: jack.monomial_block_values(8, pts)),
    "bessel_B_batch": best(lambda: bessel_B_batch(k, pts, [0.5, 0.3j, 0.1])),
    "binomials_64_32": best(lambda: jack.binomial_row_float((64, 32), 0.5)),
    "laguerre_128_64": best(lambda: laguerre_normalized((128, 64), LaguerreParams(2, 0.5, 1.0), [0.01, 0.02])),
}
print(json.dumps(out))
"""


def run(no_numba: bool, repeat: int, points: int) -> dict:
    env = dict(os.environ)
    env.pop("JACKSONINE_NO_NUMBA", None)
    if no_numba:
        env["JACKSONINE_NO_NUMBA"] = "1"
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat), str(points)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=100_000)
    args = ap.parse_args(argv)
    fast = run(False, args.repeat, args.points)
    slow = run(True, args.repeat, args.points)
    print(f"{'kernel':<18}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for key in fast:
        if key == "numba":
            continue
        print(f"{key:<18}{fast[key]:>12.4f}{slow[key]:>12.4f}{slow[key] / fast[key]:>10.2f}")
    if not fast["numba"]:
        print("note: numba is unavailable, both columns use numpy")
    return 0


if __name__ == "__main__":
    sys.exit(main())

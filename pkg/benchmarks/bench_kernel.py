"""Compare the compiled row-reduction kernel with the pure-Python fallback.

Two measurements:
  * the raw kernel on random dense Gaussian-integer rows (same rows for both);
  * an end-to-end module computation, run in subprocesses with and without
    GKMOD_PURE_PYTHON=1.

Usage: python3 benchmarks/bench_kernel.py [--rows 160] [--cols 200] [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from gkmod import _kernel_py

try:
    from gkmod import _kernel as _kernel_c
except ImportError:
    _kernel_c = None

END_TO_END = """
import time
from gkmod import BACKEND
from gkmod.isotypic import full_truncation
from gkmod.lie import sl2_standard
from gkmod.modules import direct_sum_check, generate_submodule
from gkmod.polynomial import parse_polynomial
from gkmod.variety import Variety
lie, V = sl2_standard(), Variety(2)
t = time.perf_counter()
hs = [generate_submodule(parse_polynomial(s, 2), lie, V, 8) for s in ("1", "r2", "q+", "q-")]
assert direct_sum_check(hs, full_truncation(V, 8)).spanning
print(BACKEND, time.perf_counter() - t)
"""


def random_rows(n_rows: int, n_cols: int, seed: int, per_row: int | None = None, spread: int = 20):
    rnd = random.Random(seed)
    rows = []
    for _ in range(n_rows):
        ent = {}
        for c in rnd.sample(range(n_cols), per_row or max(1, n_cols // 3)):
            a, b = rnd.randint(-spread, spread), rnd.randint(-spread, spread)
            if a or b:
                ent[c] = (a, b)
        rows.append((rnd.randint(1, 30), ent))
    return rows


def time_kernel(impl, rows, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        basis = {}
        t = time.perf_counter()
        for den, ent in rows:
            impl.insert_row(den, dict(ent), basis)
        best = min(best, time.perf_counter() - t)
    return best


def end_to_end(pure: bool) -> str:
    env = dict(os.environ)
    env["GKMOD_PURE_PYTHON"] = "1" if pure else "0"
    out = subprocess.run([sys.executable, "-c", END_TO_END], capture_output=True, text=True, env=env, check=True)
    backend, secs = out.stdout.split()
    return f"{backend:>8s}  {float(secs):8.3f} s"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=160)
    ap.add_argument("--cols", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    workloads = [
        ("dense rows, entries grow into big integers", random_rows(args.rows, args.cols, seed=0)),
        ("sparse rows, small entries", random_rows(4 * args.rows, 4 * args.cols, seed=1, per_row=4, spread=3)),
    ]
    for title, rows in workloads:
        t_py = time_kernel(_kernel_py, rows, args.repeat)
        print(f"raw kernel, {title}: {len(rows)} rows (best of {args.repeat})")
        print(f"  python    {t_py:8.3f} s")
        if _kernel_c is None:
            print("  compiled  not built")
            continue
        b_py, b_c = {}, {}
        for den, ent in rows:
            _kernel_py.insert_row(den, dict(ent), b_py)
            _kernel_c.insert_row(den, dict(ent), b_c)
        assert b_py == b_c, "backends disagree"
        t_c = time_kernel(_kernel_c, rows, args.repeat)
        print(f"  compiled  {t_c:8.3f} s   speedup x{t_py / t_c:.2f}")
    print("end to end: Example 1 decomposition at D = 8")
    print("  " + end_to_end(pure=True))
    if _kernel_c is not None:
        print("  " + end_to_end(pure=False))
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Compare the numba and numpy paths of the hot kernels.

Run ``python benchmarks/bench_kernels.py``. Each kernel is called once per
backend before timing so numba's compilation is excluded. Both paths are
checked to agree before their timings are reported.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hypball import _kernels
from hypball._accel import HAVE_NUMBA
from hypball.fieldlab import make_preset
from hypball.normlab import level_measure


def best_of(fn, repeat):
    fn()  # warm-up: compilation and caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def agree(a, b):
    if isinstance(a, tuple):
        return all(agree(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-10, atol=0.0, equal_nan=True)


def cases(size):
    rng = np.random.default_rng(0)
    t = rng.uniform(0.0, 0.95, size)
    num, den = np.array([1.0, 1.5, 0.5]), np.array([2.5, 3.0])
    U = np.cumsum(rng.standard_normal((512, 1024)), axis=1) * 0.05
    levels = np.linspace(-2.0, 2.0, 200)
    field = make_preset("exp_linear", 2)
    return {
        "pfq_batch": lambda b: _kernels.pfq_batch(num, den, t, backend=b),
        "crossings": lambda b: _kernels.crossings(U, levels, backend=b),
        "level_measure": lambda b: level_measure(field, 2, 2.0, 1.0, backend=b, points=100).mu,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=20_000, help="series evaluation points")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    print(f"{'kernel':<14} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, fn in cases(args.size).items():
        outs = {b: fn(b) for b in backends}
        if len(backends) == 2 and not agree(outs["numpy"], outs["numba"]):
            raise SystemExit(f"{name}: backends disagree")
        secs = {b: best_of(lambda b=b: fn(b), args.repeat) for b in backends}
        speed = secs["numpy"] / secs["numba"] if "numba" in secs else float("nan")
        print(f"{name:<14} " + " ".join(f"{secs[b]:>9.4f}s" for b in backends) + f"   {speed:6.1f}x")


if __name__ == "__main__":
    main()

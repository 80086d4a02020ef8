import os
import subprocess
import sys

import numpy as np
import pytest

from hypball import _kernels
from hypball._accel import backend_name


def test_pfq_backends_agree(backend):
    t = np.linspace(-0.9, 0.95, 101)
    num, den = np.array([1.0, 0.5, 1.5]), np.array([2.0, 2.5])
    ref = _kernels.pfq_batch(num, den, t, backend="numpy")
    got = _kernels.pfq_batch(num, den, t, backend=backend)
    np.testing.assert_allclose(got[0], ref[0], rtol=1e-14)
    assert np.array_equal(got[2], ref[2])
    assert got[3].all()


def test_partial_sums_backends_agree(backend):
    num, den = np.array([1.0, 1.0, 0.5]), np.array([2.0, 2.5])
    cps = np.array([10, 100, 1000])
    ref = _kernels.partial_sums_at(num, den, 1.0, cps, backend="numpy")
    np.testing.assert_allclose(_kernels.partial_sums_at(num, den, 1.0, cps, backend=backend), ref, rtol=1e-13)


def _brute_crossings(U, levels):
    out = []
    for j in range(U.shape[0]):
        for i in range(U.shape[1] - 1):
            a, b = U[j, i], U[j, i + 1]
            for k, L in enumerate(levels):
                if (a > L) != (b > L) and not (np.isnan(a) or np.isnan(b)):
                    out.append((j, i, k, a > b))
    return sorted(out)


def test_crossings_match_brute_force(backend, rng):
    for _ in range(30):
        U = np.cumsum(rng.standard_normal((5, 40)), axis=1) * rng.uniform(0.05, 2.0)
        U[rng.random(U.shape) < 0.05] = -np.inf
        U[rng.random(U.shape) < 0.02] = np.nan
        levels = np.sort(rng.normal(size=rng.integers(0, 12)))
        ray, seg, lev, down = _kernels.crossings(U, levels, backend=backend)
        got = sorted(zip(ray.tolist(), seg.tolist(), lev.tolist(), down.tolist()))
        assert got == _brute_crossings(U, levels)


def test_crossings_empty_inputs(backend):
    ray, *_ = _kernels.crossings(np.zeros((3, 1)), np.array([0.5]), backend=backend)
    assert ray.size == 0
    ray, *_ = _kernels.crossings(np.zeros((3, 5)), np.array([]), backend=backend)
    assert ray.size == 0


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        backend_name("fortran")


def test_env_flag_selects_numpy():
    code = "from hypball._accel import USE_NUMBA, backend_name; print(USE_NUMBA, backend_name())"
    env = dict(os.environ, HYPBALL_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "numpy"]


def test_numpy_path_end_to_end():
    # a level profile through the fallback path matches the closed form
    code = (
        "import numpy as np\n"
        "from hypball.fieldlab import Constant\n"
        "from hypball.normlab import level_measure\n"
        "t = np.geomspace(0.9, 0.01, 9)\n"
        "p = level_measure(Constant(1.0), 2, 1.0, 1.0, t)\n"
        "ref = 4 * np.pi * (1 / t - 1)\n"
        "print(float(np.max(np.abs(p.mu / ref - 1))))\n"
    )
    env = dict(os.environ, HYPBALL_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert float(out.stdout) < 1e-6

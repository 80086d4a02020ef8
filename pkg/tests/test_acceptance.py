"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the per-criterion
lines are also collected in the terminal summary.
"""
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from hypball.ballgeo import isoperimetric_check, upsilon
from hypball.fieldlab import Constant, fd_hyperbolic_laplacian, make_preset, presets_for
from hypball.normlab import bergman_norm, g_function, hardy_norm, level_measure, mu1_n2
from hypball.planar2d import (
    coefficient_inequality_check,
    isoperimetric_constant,
    isoperimetric_constant_alt,
    isoperimetric_inequality_check,
    parseval_check,
    random_mapping,
)
from hypball.quadrature import uniform_ball
from hypball.verify import contraction_suite, lemma_trials, limit_suite, monotone_suite, weaktype_suite
from hypball.weightfn import WeightSpec, log_phi, phi, radial_ode_oracle, sandwich_margins


@contextmanager
def criterion(number, title, limit_s):
    """Time the block, check the runtime limit and print one verdict line."""
    t0 = time.perf_counter()
    ok, detail = False, ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        ok = elapsed < limit_s
        detail = f"{elapsed:.2f}s (limit {limit_s:g}s)"
        assert ok, f"runtime {elapsed:.2f}s exceeds {limit_s:g}s"
    except AssertionError as exc:
        detail = detail or str(exc).splitlines()[0]
        raise
    finally:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} [{detail}]"
        print(line)
        ACCEPTANCE_LINES.append(line)


def test_criterion_01_weight_anchors():
    with criterion(1, "closed-form weights and sandwich", 1.0):
        r = np.linspace(0.0, 0.999, 1000)
        assert np.max(np.abs(phi(2, r) - (1 - r**2))) < 1e-12
        assert np.max(np.abs(phi(4, r) - np.exp(-1.5 * r**2) * (1 - r**2) ** 3)) < 1e-10
        for n in (3, 4, 5):
            lo, hi = sandwich_margins(n, r[1:])
            assert np.all(lo > 0) and np.all(hi > 0)


def test_criterion_02_ode_oracle():
    with criterion(2, "radial ODE oracle", 5.0):
        r = np.linspace(0.0, 0.99, 400)
        for n in (2, 3, 4):
            for b in (1.0, float((n - 1) ** 2)):
                assert radial_ode_oracle(WeightSpec(n, b), r).max_deviation < 1e-6


def test_criterion_03_laplacian_certificate():
    with criterion(3, "FD Laplacian of log Phi", 5.0):
        rng = np.random.default_rng(3)
        for n in (2, 3, 4):
            x = uniform_ball(n, 100, rng, rmax=0.9)
            v = fd_hyperbolic_laplacian(lambda p: log_phi(n, np.linalg.norm(p, axis=1)), x)
            target = -4.0 * (n - 1) ** 2
            assert np.max(np.abs(v / target - 1)) < 1e-4


def test_criterion_04_isoperimetry():
    with criterion(4, "isoperimetric profile and inequalities", 5.0):
        v = np.logspace(-3, 3, 2000)
        assert np.max(np.abs(upsilon(2, v) * (4 * np.pi + v) - 1)) < 1e-8
        eps = np.finfo(float).eps
        for n in (2, 3, 4):
            for s in np.linspace(3.0 / 300, 3.0, 300):
                rep = isoperimetric_check(n, s)
                assert abs(rep.ball_equality_residual) < 1e-8 * rep.perimeter**2
                if n == 2:
                    # the n = 2 relation is an identity; its margin is zero up to rounding
                    assert rep.newes_margin >= -64 * eps * rep.scale
                else:
                    assert rep.newes_margin >= 0


def test_criterion_05_norm_anchors():
    with criterion(5, "norms of 1 and of |z|", 10.0):
        one = Constant(1.0)
        for n in (2, 3):
            for p in (0.5, 1.0, 2.0, 3.5):
                assert abs(hardy_norm(one, p, n).value - 1) < 1e-8
                for alpha in (1.2, 2.0, 3.0):
                    assert abs(bergman_norm(one, n, p, alpha).value - 1) < 1e-8
        z = make_preset("planar_z", 2)
        for p in (1.0, 2.0, 3.0):
            for alpha in (1.5, 2.0, 3.0):
                # ||z||^p = (alpha - 1) B(p/2 + 1, alpha - 1)
                ref = ((alpha - 1) * math.gamma(p / 2 + 1) * math.gamma(alpha - 1) / math.gamma(p / 2 + alpha)) ** (1 / p)
                assert abs(bergman_norm(z, 2, p, alpha, nodes=128).value - ref) < 1e-6


def test_criterion_06_level_set_anchor():
    with criterion(6, "level-set profile of f = 1", 60.0):
        prof = level_measure(Constant(1.0), 2, 1.0, 1.0, points=200, decades=4.0)
        ref = mu1_n2(prof.t_grid)
        inside = ref > 0
        assert np.max(np.abs(prof.mu[inside] / ref[inside] - 1)) < 1e-6
        assert np.all(prof.mu[~inside] == 0)
        G = g_function(prof)
        assert np.max(np.abs(G.g - 1)) < 1e-6
        G3 = g_function(level_measure(Constant(1.0), 3, 1.0, 1.0, points=100, decades=4.0))
        assert G3.relative_spread() <= 1e-4


def test_criterion_07_contraction_chain():
    with criterion(7, "contraction chain over presets", 600.0):
        alphas = (1.2, 1.5, 2.0, 3.0)
        runs = equality_runs = 0
        for n in (2, 3):
            names = presets_for(n)
            assert len(names) >= 6 and "pullback_unit" in names and "pullback_exp" in names
            for name in names:
                for r in (0.5, 1.0, 2.0):
                    rep = contraction_suite(make_preset(name, n, r), n, r, alphas)
                    assert rep.passed, (n, name, r, rep.failures()[:2])
                    runs += 1
                    if name in ("unit", "const"):
                        assert "equality" in rep.margins
                        equality_runs += 1
        assert runs >= 6 * 2 * 3 and equality_runs == 12


def test_criterion_08_monotone_g():
    with criterion(8, "g(t) nonincreasing over the preset ensemble", 600.0):
        combos = []
        for n in (2, 3):
            for name in presets_for(n):
                for a, alpha in ((1.0, 1.0), (2.0, 1.5)):
                    if n == 3 and name in ("const", "exp_quadratic", "product_power"):
                        continue
                    combos.append((n, name, a, alpha))
        assert len(combos) >= 20
        for n, name, a, alpha in combos:
            rep, _, _ = monotone_suite(make_preset(name, n), n, a, alpha, points=120)
            assert rep.passed, (n, name, a, alpha, rep.failures()[:2])


def test_criterion_09_weak_type():
    with criterion(9, "mu(t) <= mu_1(t) for normalized presets", 600.0):
        cases = [(2, name, 2.0) for name in presets_for(2)]
        cases += [(3, name, 2.0) for name in ("unit", "exp_linear", "combination", "pullback_unit", "pullback_exp")]
        cases += [(2, "exp_linear", 1.0), (2, "pullback_unit", 1.0)]
        assert len({(n, name) for n, name, _ in cases}) >= 10
        for n, name, p in cases:
            f = make_preset(name, n, r=p)
            assert f.bounded
            rep, _ = weaktype_suite(f, n, p, points=120)
            assert rep.passed, (n, name, p, rep.failures()[:2])


def test_criterion_10_planar_corollaries():
    with criterion(10, "planar coefficient and isoperimetric inequalities", 120.0):
        rng = np.random.default_rng(10)
        seeds = [int(s) for s in rng.integers(0, 2**31, 100)]
        maps = [random_mapping(s) for s in seeds]
        for p in (1.25, 1.5, 1.75):
            for f in maps:
                area, coeff = parseval_check(f, p)
                assert abs(area - coeff) < 1e-6 * max(coeff, 1.0)
                rep = coefficient_inequality_check(f, p)
                assert rep.margins["lhs<=rhs1"][0] >= -1e-8 and rep.margins["lhs<=rhs2"][0] >= -1e-8
        for p in (1.5, 2.0, 3.0):
            for f in maps:
                assert isoperimetric_inequality_check(f, p).margins["isoperimetric"][0] >= -1e-8
        C2 = isoperimetric_constant(2)
        assert abs(C2 - 1.3065629648763766) < 1e-12
        for v in isoperimetric_constant_alt(2).values():
            assert abs(v - C2) < 1e-12


def test_criterion_11_limits():
    with criterion(11, "Bergman norms of |z| increase to the Hardy norm", 60.0):
        alphas = (1.5, 1.2, 1.05)
        rep = limit_suite(make_preset("planar_z", 2), 2, 2.0, alphas=alphas)
        sq = np.asarray(rep.quantities["bergman"]) ** 2
        order = sorted(alphas, reverse=True)
        np.testing.assert_allclose(sq, [1 / a for a in order], rtol=0, atol=1e-6)
        assert np.all(np.diff(sq) > 0) and np.all(sq < 1)
        assert rep.passed, rep.failures()


def test_criterion_12_lemma():
    with criterion(12, "rearrangement lemma oracle", 60.0):
        rep = lemma_trials(1000, seed=12)
        assert rep.margins["inequality"].size == 1000
        assert rep.passed, rep.failures()[:3]
        assert "equality_g1" in rep.margins

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypball.ballgeo import MobiusMap
from hypball.fieldlab import Constant, make_preset, mobius_pullback
from hypball.normlab import (
    NormReport,
    bergman_from_profile,
    bergman_norm,
    g_function,
    hardy_norm,
    level_measure,
    mu1,
    mu1_n2,
    profile_integral,
    radial_level_oracle,
    spherical_mean,
    tau_factor,
)
from hypball.weightfn import DivergenceError


def test_tau_factor():
    assert tau_factor(2) == pytest.approx(4 * math.pi)
    assert tau_factor(3) == pytest.approx(8 * 4 * math.pi / 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_norms_of_constants(n):
    f = Constant(1.0)
    assert hardy_norm(f, 2.0, n).value == pytest.approx(1.0, abs=1e-14)
    assert bergman_norm(f, n, 2.0, 2.0).value == pytest.approx(1.0, abs=1e-14)
    assert bergman_norm(Constant(3.0), n, 1.5, 2.5).value == pytest.approx(3.0, rel=1e-14)


def test_planar_closed_forms():
    z = make_preset("planar_z", 2)
    one_plus_z = make_preset("planar_1pz", 2)
    assert hardy_norm(one_plus_z, 2.0).value == pytest.approx(math.sqrt(2), rel=1e-12)
    assert hardy_norm(z, 3.0).value == pytest.approx(1.0, rel=1e-12)
    rep = bergman_norm(z, 2, 2.0, 2.0)
    assert rep.value == pytest.approx(math.sqrt(0.5), rel=1e-10)
    # ||z||_{p, alpha}^p = (alpha - 1) B(p/2 + 1, alpha - 1)
    for p, a in [(1.0, 1.5), (3.0, 2.5)]:
        ref = ((a - 1) * math.gamma(p / 2 + 1) * math.gamma(a - 1) / math.gamma(p / 2 + a)) ** (1 / p)
        rep = bergman_norm(z, 2, p, a)
        assert abs(rep.value - ref) <= rep.error and rep.error < 1e-5


def test_hardy_radial_matches_boundary():
    f = make_preset("exp_linear", 2)
    b = hardy_norm(f, 2.0, method="boundary")
    r = hardy_norm(f, 2.0, method="radial")
    assert abs(b.value - r.value) <= b.error + r.error + 1e-9


def test_spherical_mean_increases_with_radius():
    f = make_preset("exp_quadratic", 3)
    means = [spherical_mean(f, 1.5, r, 3) for r in (0.0, 0.3, 0.6, 0.9)]
    assert np.all(np.diff(means) > 0)
    assert means[0] == pytest.approx(math.exp(1.5 * f.log_abs(np.zeros(3))), rel=1e-14)


def test_norm_report_rejects_negative():
    with pytest.raises(ValueError):
        NormReport("hardy", {}, -1.0, 0.0)


def test_bergman_argument_checks():
    with pytest.raises(ValueError):
        bergman_norm(Constant(1.0), 2, 2.0, 1.0)
    with pytest.raises(ValueError):
        bergman_norm(Constant(1.0), 2, 0.0, 2.0)
    with pytest.raises((ValueError, DivergenceError)):
        bergman_norm(Constant(1.0), 3, 2.0, 0.5)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha, p", [(2.0, 2.0), (1.5, 3.0)])
def test_pullback_preserves_bergman_norm(n, alpha, p):
    f = make_preset("exp_linear", n)
    m = MobiusMap(np.array([0.35, -0.2] + [0.1] * (n - 2)))
    a = bergman_norm(f, n, p, alpha)
    b = bergman_norm(mobius_pullback(f, m, alpha, p), n, p, alpha)
    assert abs(a.value - b.value) <= 10 * (a.error + b.error) + 1e-8


def test_mu1_planar_closed_form():
    t = np.logspace(-4, 0, 50)
    np.testing.assert_allclose(mu1(2, t), mu1_n2(t), rtol=1e-12, atol=1e-12)
    assert mu1(3, 1.0) == 0.0


@pytest.mark.parametrize("n", [3, 4])
def test_mu1_matches_root_finding(n):
    for t in (0.9, 0.3, 1e-2, 1e-4):
        assert float(mu1(n, t)) == pytest.approx(radial_level_oracle(n, 1.0, t), rel=1e-9)
    assert float(mu1(n, 0.2, alpha=2.0)) == pytest.approx(radial_level_oracle(n, 2.0, 0.2), rel=1e-9)


def test_level_profile_of_unit_planar():
    prof = level_measure(Constant(1.0), 2, 1.0, 1.0, points=60, decades=3.0)
    ref = mu1_n2(prof.t_grid)
    assert prof.t_max == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(prof.mu - ref) <= prof.mu_err + 1e-9 * ref)
    assert np.max(np.abs(prof.mu - ref)[1:] / ref[1:]) < 1e-6


def test_level_profile_n3_against_oracle():
    prof = level_measure(Constant(1.0), 3, 1.0, 2.0, points=30, decades=3.0)
    ref = np.array([radial_level_oracle(3, 2.0, t) for t in prof.t_grid])
    assert np.all(np.abs(prof.mu - ref) <= prof.mu_err + 1e-12 * ref)


@pytest.mark.parametrize("name", ["exp_linear", "pullback_exp"])
def test_level_profile_is_monotone(name):
    prof = level_measure(make_preset(name, 2), 2, 1.0, 1.0, points=80)
    assert prof.monotone_violation() <= 0
    assert g_function(prof).increase_violation() <= 0


def test_g_is_constant_for_unit():
    prof = level_measure(Constant(1.0), 2, 1.0, 1.0, points=40, decades=3.0)
    G = g_function(prof)
    assert np.all(np.abs(G.g - 1.0) <= G.g_err + 1e-9)
    np.testing.assert_allclose(G.Theta(G.Lambda(prof.mu)), prof.mu, rtol=1e-9, atol=1e-20)


@pytest.mark.parametrize("n", [2, 3])
def test_profile_integral_matches_bergman_norm(n):
    # ||f||_{p, alpha}^p = c(alpha) int |f|^p Phi^alpha dtau via the distribution function
    f = make_preset("exp_linear", n)
    prof = level_measure(f, n, 2.0, 2.0, points=201, decades=6.0)
    via_profile = bergman_from_profile(prof, q=1.0)
    direct = bergman_norm(f, n, 2.0, 2.0)
    assert abs(via_profile.value - direct.value) <= 3 * (via_profile.error + direct.error)
    assert abs(via_profile.value / direct.value - 1) < 1e-4


def test_profile_integral_of_weight():
    # int Phi_2^q dtau = 1 / c(q) = 1 / (q - 1) for n = 2
    prof = level_measure(Constant(1.0), 2, 0.0, 1.0, points=201, decades=6.0)
    for q in (1.5, 2.0, 3.0):
        val, err = profile_integral(prof, q)
        assert abs(val - 1 / (q - 1)) <= 3 * err + 1e-9
    with pytest.raises(ValueError):
        profile_integral(prof, 1.0)


@settings(max_examples=10)
@given(st.floats(0.05, 0.99), st.floats(1.0, 4.0))
def test_mu1_decreasing_in_t(t, alpha):
    for n in (2, 3):
        assert mu1(n, t, alpha) > mu1(n, min(1.0, t * 1.01), alpha)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from hypball.planar2d import (
    MINIMAL_SURFACE_NOTE,
    HarmonicMapping,
    binom_weight,
    bergman_2p,
    coefficient_inequality_check,
    coefficient_sum,
    corollary_co32_check,
    disk_weighted_mean,
    hardy_p,
    inverse_jacobian,
    isoperimetric_constant,
    isoperimetric_constant_alt,
    isoperimetric_inequality_check,
    minimal_surface_integrand,
    parseval_check,
    random_mapping,
)

ONE_PLUS_Z = HarmonicMapping((1.0, 1.0))
Z = HarmonicMapping((0.0, 1.0))


def test_mapping_validation_and_padding():
    f = HarmonicMapping((1.0,), (0.0, 0.0, 2.0))
    assert f.degree == 2 and f.a_coeffs.size == 3
    with pytest.raises(ValueError):
        HarmonicMapping((1.0,), (1.0,))
    z = np.array([0.3 + 0.1j])
    assert f(z)[0] == pytest.approx(1 + 2 * np.conj(z[0] ** 2))
    assert f.jacobian(z)[0] == pytest.approx(-16 * abs(z[0]) ** 2)


def test_csv_round_trip(tmp_path):
    f = random_mapping(3, N=5)
    g = HarmonicMapping.from_csv(f.to_csv())
    np.testing.assert_array_equal(f.a_coeffs, g.a_coeffs)
    p = tmp_path / "m.csv"
    p.write_text(f.to_csv())
    np.testing.assert_array_equal(f.b_coeffs, HarmonicMapping.from_csv(str(p)).b_coeffs)
    with pytest.raises(ValueError):
        HarmonicMapping.from_csv("k,re_a\n")


def test_binom_weight_values():
    assert binom_weight(1.5, 0) == 1.0
    np.testing.assert_allclose(binom_weight(2.0, np.arange(10)), 1.0, rtol=1e-14)
    assert binom_weight(4 / 3, 1) == pytest.approx(1.5, rel=1e-14)
    assert binom_weight(4 / 3, 2) == pytest.approx(1.5 * 2.5 / 2, rel=1e-14)
    with pytest.raises(ValueError):
        binom_weight(0.0, 1)


def test_coefficient_sum_examples():
    assert coefficient_sum(ONE_PLUS_Z, 4 / 3) == pytest.approx(5 / 3, rel=1e-15)
    assert coefficient_sum(ONE_PLUS_Z, 2.0) == pytest.approx(2.0, rel=1e-15)


def test_coefficient_check_one_plus_z():
    rep = coefficient_inequality_check(ONE_PLUS_Z, 4 / 3)
    assert rep.quantities["lhs"] == pytest.approx(5 / 3)
    ref, _ = integrate.quad(lambda t: (2 * abs(math.cos(t / 2))) ** (4 / 3), 0, 2 * math.pi, limit=200)
    h, e = hardy_p(ONE_PLUS_Z.ab_norm, 4 / 3)
    assert abs(rep.quantities["rhs1_abnorm_hp"] - (ref / (2 * math.pi)) ** 1.5) <= 2 * h * e
    assert rep.passed


def test_coefficient_check_constant_is_equality():
    rep = coefficient_inequality_check(HarmonicMapping((2.0,)), 1.5)
    assert rep.quantities["lhs"] == pytest.approx(4.0)
    assert rep.quantities["rhs1_abnorm_hp"] == pytest.approx(4.0, rel=1e-14)
    assert rep.quantities["rhs2_fp_cos"] * (1 - abs(math.cos(math.pi / 1.5))) == pytest.approx(4.0, rel=1e-14)
    with pytest.raises(ValueError):
        coefficient_inequality_check(ONE_PLUS_Z, 2.0)


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.sampled_from([1.25, 1.5, 1.75]))
def test_parseval_random(seed, p):
    area, coeff = parseval_check(random_mapping(seed), p)
    assert abs(area - coeff) <= 1e-6 * max(coeff, 1.0)


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.sampled_from([1.25, 1.5, 1.75]))
def test_coefficient_inequalities_random(seed, p):
    assert coefficient_inequality_check(random_mapping(seed), p).passed


def test_isoperimetric_constant_forms():
    assert isoperimetric_constant(2) == pytest.approx(1.3065629648763766, rel=1e-15)
    alt = isoperimetric_constant_alt(2)
    for v in alt.values():
        assert abs(v - isoperimetric_constant(2)) < 1e-12
    for p in np.linspace(1.05, 6.0, 40):
        alt = isoperimetric_constant_alt(p)
        for v in alt.values():
            assert abs(v - isoperimetric_constant(p)) < 1e-12 * v
    vals = [isoperimetric_constant(p) for p in (2, 4, 8, 16, 64)]
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] / (2 * 64 / math.pi) == pytest.approx(1.0, rel=1e-3)
    with pytest.raises(ValueError):
        isoperimetric_constant(1.0)


def test_isoperimetric_check_examples():
    rep = isoperimetric_inequality_check(Z, 2.0)
    assert rep.quantities["bergman_2p"] == pytest.approx(3 ** -0.25, rel=1e-12)
    assert rep.quantities["hardy_p"] == pytest.approx(1.0, rel=1e-14)
    assert rep.margins["isoperimetric"][0] == pytest.approx(isoperimetric_constant(2) - 3 ** -0.25, rel=1e-12)
    c = isoperimetric_inequality_check(HarmonicMapping((0.7,)), 3.0)
    assert c.margins["isoperimetric"][0] == pytest.approx((isoperimetric_constant(3) - 1) * 0.7, rel=1e-12)


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.sampled_from([1.5, 2.0, 3.0]))
def test_isoperimetric_random(seed, p):
    f = random_mapping(seed, N=5)
    h, _ = hardy_p(f, p)
    assert isoperimetric_inequality_check(f.scaled(1 / h), p).passed


def test_disk_weighted_mean_normalized():
    for a in (1.2, 2.0, 3.5):
        assert disk_weighted_mean(lambda z: np.ones(z.shape), a) == pytest.approx(1.0, rel=1e-13)
    # (alpha - 1) int r^2 (1 - r^2)^(alpha - 2) dA/pi = 1/alpha
    assert disk_weighted_mean(lambda z: np.abs(z) ** 2, 3.0) == pytest.approx(1 / 3, rel=1e-13)


def test_bergman_2p_of_z():
    v, e = bergman_2p(Z, 2.0)
    assert v == pytest.approx(3 ** -0.25, rel=1e-12) and e < 1e-12


def test_co32_examples():
    rep = corollary_co32_check(HarmonicMapping((1.0,)), 2.0, 3.0)
    assert rep.quantities["weighted_lhs"] == pytest.approx(1.0, rel=1e-13)
    assert rep.quantities["hardy_rhs"] == pytest.approx(1.0, rel=1e-14)
    rep = corollary_co32_check(Z, 2.0, 2.0)
    assert rep.quantities["weighted_lhs"] == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert rep.quantities["hardy_rhs"] == pytest.approx(1.0, rel=1e-14)
    assert rep.passed


@settings(max_examples=15)
@given(st.integers(0, 10_000), st.floats(1.1, 4.0), st.floats(1.1, 3.0))
def test_co32_random(seed, p, alpha):
    assert corollary_co32_check(random_mapping(seed, N=6), p, alpha).passed


def test_co32_inverse_jacobian():
    f = HarmonicMapping((0.0, 1.0), (0.0, 0.0, 0.2))
    F = inverse_jacobian(f)
    rep = corollary_co32_check(f, 2.0, 2.0, integrand=F, label="inverse_jacobian")
    assert rep.passed
    with pytest.raises(ValueError):
        inverse_jacobian(HarmonicMapping((0.0, 1.0), (0.0, 0.0, 0.8)))


def test_co32_minimal_surface_note():
    F = minimal_surface_integrand([1.0, 0.5], [0.0, 0.7])
    rep = corollary_co32_check(HarmonicMapping((0.0,)), 2.0, 2.0, integrand=F, label="minimal_surface")
    assert rep.passed and MINIMAL_SURFACE_NOTE in rep.notes


def test_random_mapping_is_deterministic():
    f, g = random_mapping(7), random_mapping(7)
    np.testing.assert_array_equal(f.a_coeffs, g.a_coeffs)
    assert random_mapping(7, analytic=True).b_coeffs.any() == False  # noqa: E712

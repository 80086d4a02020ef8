import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypball.ballgeo import MobiusMap
from hypball.fieldlab import (
    PRESETS,
    BoundaryData,
    Constant,
    ExpHarmonic,
    FieldFormatError,
    MobiusPullback,
    PlanarModulus,
    Power,
    Product,
    PositiveCombination,
    certify_log_subharmonic,
    fd_hyperbolic_laplacian,
    load_field,
    make_preset,
    mobius_pullback,
    parse_field,
    poisson_extend,
    poisson_kernel,
    presets_for,
)
from hypball.quadrature import sphere_rule
from hypball.weightfn import log_phi


def test_poisson_kernel_examples():
    assert poisson_kernel(2, np.zeros(2), np.array([1.0, 0.0])) == 1.0
    assert poisson_kernel(2, np.array([0.5, 0.0]), np.array([1.0, 0.0])) == pytest.approx(3.0)
    assert poisson_kernel(2, np.array([0.5, 0.0]), np.array([-1.0, 0.0])) == pytest.approx(1 / 3)
    assert poisson_kernel(3, np.array([0.5, 0, 0]), np.array([1.0, 0, 0])) == pytest.approx(9.0)
    K = poisson_kernel(3, np.zeros((4, 3)), np.eye(3))
    assert K.shape == (4, 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_poisson_kernel_integrates_to_one(n):
    rule = sphere_rule(n, 64)
    x = np.array([[0.3] + [0.1] * (n - 1), [-0.5] + [0.0] * (n - 1)])
    np.testing.assert_allclose(poisson_kernel(n, x, rule.points) @ rule.weights, 1.0, rtol=1e-10)


def test_poisson_extend_planar_cosine():
    data = BoundaryData(1.0, [0.5, 0.0])
    r = np.linspace(0, 0.8, 5)
    x = np.stack([r, np.zeros_like(r)], axis=1)
    res = poisson_extend(data, x, m=64)
    assert np.all(np.abs(res.value - (1 + 0.5 * r)) <= res.error + 1e-13)
    assert np.all(res.error < 1e-5)
    np.testing.assert_allclose(data.extend_exact(x), 1 + 0.5 * r, atol=1e-15)


def test_radial_factor_against_mpmath():
    # n = 3: linear data zeta_1 extends to R_1(|x|^2) x_1
    data = BoundaryData(0.0, [1.0, 0.0, 0.0])
    rr = 0.7
    at_one = mpmath.hyp2f1(1, -0.5, 2.5, 1)
    ref = float(mpmath.hyp2f1(1, -0.5, 2.5, rr**2) / at_one) * rr
    assert data.extend_exact(np.array([rr, 0, 0])) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("n", [3, 4])
def test_exact_extension_matches_quadrature(n):
    A = np.zeros((n, n))
    A[0, 0], A[0, 1], A[1, 1] = 0.4, 0.3, -0.2
    data = BoundaryData(0.2, np.arange(1, n + 1) / n, A)
    x = np.array([[0.2] * n, [-0.5] + [0.1] * (n - 1)])
    res = poisson_extend(data, x, m=48)
    np.testing.assert_allclose(data.extend_exact(x), res.value, atol=1e-9)


def test_boundary_data_symmetrizes_and_bounds():
    data = BoundaryData(1.0, [0.0, 0.0], [[0.0, 1.0], [0.0, 0.0]])
    np.testing.assert_array_equal(data.A, [[0, 0.5], [0.5, 0]])
    assert data.degree == 2 and data.inf_bound() == pytest.approx(0.5)
    assert data.is_positive()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fd_laplacian_of_log_phi(n):
    x = np.array([[0.1, 0.2] + [0.0] * (n - 2), [0.5, -0.3] + [0.1] * (n - 2)])
    v = fd_hyperbolic_laplacian(lambda p: log_phi(n, np.linalg.norm(p, axis=1)), x, h=1e-3)
    np.testing.assert_allclose(v, -4.0 * (n - 1) ** 2, rtol=1e-5)


@pytest.mark.parametrize("n", [2, 3])
def test_fd_laplacian_kills_m_harmonic(n):
    data = BoundaryData(0.3, [0.5] + [0.0] * (n - 1))
    x = np.array([[0.2] * n, [0.4] + [-0.1] * (n - 1)])
    assert np.max(np.abs(fd_hyperbolic_laplacian(data.extend_exact, x, h=1e-3))) < 1e-5


def test_fd_stencil_outside_ball():
    with pytest.raises(ValueError):
        fd_hyperbolic_laplacian(lambda p: p[:, 0], np.array([0.999, 0.0]), h=0.01)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("name", ["unit", "exp_linear", "exp_quadratic", "combination", "product_power", "pullback_exp"])
def test_presets_certify(n, name):
    rep = certify_log_subharmonic(make_preset(name, n), n, samples=300, seed=1)
    assert rep.passed, rep.counterexamples[:3]


@pytest.mark.parametrize("name", ["planar_z", "planar_1pz", "planar_harmonic"])
def test_planar_presets_certify(name):
    assert certify_log_subharmonic(make_preset(name, 2), 2, samples=300, seed=2).passed


def test_certifier_rejects_superharmonic():
    class Bad(Constant):
        def log_abs(self, x):
            xs = np.atleast_2d(x)
            return -np.sum(xs * xs, axis=1)

    rep = certify_log_subharmonic(Bad(), 2, samples=50)
    assert not rep.passed


def test_pullback_of_constant_is_weight_ratio():
    a = np.array([0.3, -0.4, 0.1])
    f = MobiusPullback(Constant(1.0), a, 0.5)
    x = np.array([[0.1, 0.2, 0.3], [0.0, 0.0, 0.0]])
    m = MobiusMap(a)
    ref = 0.5 * (log_phi(3, np.linalg.norm(m.apply(x), axis=1)) - log_phi(3, np.linalg.norm(x, axis=1)))
    np.testing.assert_allclose(f.log_abs(x), ref, atol=1e-13)
    g = mobius_pullback(Constant(1.0), m, 1.0, 2.0)
    np.testing.assert_allclose(g.log_abs(x), ref, atol=1e-13)


def test_pullback_centered_at_origin_is_reflection():
    # the involution with center 0 is x -> -x
    child = make_preset("exp_linear", 3)
    f = MobiusPullback(child, np.zeros(3), 0.7)
    x = np.array([[0.1, 0.2, 0.3]])
    np.testing.assert_allclose(f.log_abs(x), child.log_abs(-x), atol=1e-14)
    assert MobiusPullback(Constant(2.0), np.zeros(3), 1.0).is_constant


def test_node_algebra():
    e = ExpHarmonic(BoundaryData(0.0, [0.6, 0.0]))
    x = np.array([[0.2, 0.1], [-0.3, 0.4]])
    np.testing.assert_allclose(Power(e, 2.0).log_abs(x), 2 * e.log_abs(x))
    np.testing.assert_allclose(Product([e, Constant(3.0)]).log_abs(x), e.log_abs(x) + math.log(3))
    comb = PositiveCombination([1.0, 2.0], [e, Constant(1.0)])
    np.testing.assert_allclose(comb(x), e(x) + 2.0, rtol=1e-14)
    with pytest.raises(ValueError):
        PositiveCombination([1.0, -1.0], [e, Constant(1.0)])
    with pytest.raises(ValueError):
        Power(e, -1.0)
    with pytest.raises(ValueError):
        Constant(0.0)


def test_log_sup_bound_is_an_upper_bound(rng):
    for n in (2, 3):
        for name in presets_for(n):
            f = make_preset(name, n)
            g = rng.standard_normal((2000, n))
            x = g / np.linalg.norm(g, axis=1, keepdims=True) * rng.random((2000, 1)) ** (1 / n) * 0.999
            assert np.max(f.log_abs(x)) <= f.log_sup_bound() + 1e-12, name


@pytest.mark.parametrize("name", PRESETS)
def test_describe_round_trip(name):
    n = 2
    f = make_preset(name, n, r=2.0)
    g = parse_field(f.describe(), n)
    x = np.array([[0.1, -0.2], [0.5, 0.3], [-0.7, 0.1]])
    np.testing.assert_array_equal(f.log_abs(x), g.log_abs(x))
    assert g.describe() == f.describe()


def test_parse_field_text():
    text = """
# two nodes under a combination
combination weights=1,0.5
  exp_harmonic c0=0 c=0.6,0,0
  pullback center=0.2,0,0 exponent=0.5
    const c=2
"""
    f = parse_field(text, 3)
    assert isinstance(f, PositiveCombination) and len(f.children) == 2
    assert np.isfinite(f.log_abs(np.array([0.1, 0.1, 0.1])))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "const c=1\nconst c=2",
        "power p=2",
        " const c=1",
        "const c",
        "exp_harmonic c=1,2",
        "bogus x=1",
        "const c=-1",
        "planar a=0,1",
        "preset name=nope",
    ],
)
def test_parse_field_errors(text):
    with pytest.raises(FieldFormatError):
        parse_field(text, 3)


def test_load_field(tmp_path):
    assert isinstance(load_field("unit", 2), Constant)
    p = tmp_path / "f.txt"
    p.write_text("planar a=1,1j\n")
    assert isinstance(load_field(str(p), 2), PlanarModulus)
    with pytest.raises(FieldFormatError):
        load_field(str(tmp_path / "missing.txt"), 2)


@given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6), st.floats(0.05, 2.0))
def test_exp_harmonic_log_is_extension(c1, c2, p):
    data = BoundaryData(0.1, [c1, c2])
    f = Power(ExpHarmonic(data), p)
    x = np.array([[0.3, -0.2]])
    np.testing.assert_allclose(f.log_abs(x), p * data.extend_exact(x), rtol=1e-13, atol=1e-15)

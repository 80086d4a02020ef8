"""Test fields on the unit ball built from the admissible monoid.

Every field is a tree of nodes. Each constructor preserves
log-M-subharmonicity of ``|f|``:

* ``Constant(c)`` with ``c > 0``;
* ``ExpHarmonic(data)``: ``exp(P_h[data])``, the exponential of an
  M-harmonic function (the group part of the monoid);
* ``Power(child, p)`` with ``p >= 0``;
* ``Product(children)``;
* ``PositiveCombination(weights, children)`` with positive weights;
* ``MobiusPullback(child, center, exponent)``:
  ``f(m(x)) * (Phi_n(m(x)) / Phi_n(x))^exponent``;
* ``PlanarModulus`` (n = 2): ``|a(z)|`` or ``sqrt(|a|^2 + |b|^2)`` with
  ``a, b`` polynomials.

Fields are evaluated in log space: ``field.log_abs(x)`` takes an ``(N, n)``
array and returns ``log|f|`` (``-inf`` at zeros).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
import numpy as np
from scipy.special import hyp2f1, logsumexp

from .ballgeo import BallPoint, MobiusMap, bracket_sq
from .quadrature import QuadratureError, sphere_rule
from .weightfn import e_constant, log_phi

# --------------------------------------------------------------------------
# Poisson kernel and extension
# --------------------------------------------------------------------------


def _rows(x):
    if isinstance(x, BallPoint):
        return x.coords[None, :], True
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x[None, :], True
    return x, False


def poisson_kernel(n, x, zeta):
    """P_h(x, zeta) = (1 - |x|^2)^{n-1} / |x - zeta|^{2n-2}.

    ``x`` is a point or an (N, n) array; ``zeta`` a unit vector or an (M, n)
    array. Returns a scalar, an (N,) / (M,) vector or an (N, M) matrix.
    """
    xs, xsingle = _rows(x)
    zs = zeta.coords if hasattr(zeta, "coords") else np.asarray(zeta, dtype=np.float64)
    zsingle = zs.ndim == 1
    zs = np.atleast_2d(zs)
    xx = np.einsum("ij,ij->i", xs, xs)
    d2 = xx[:, None] + 1.0 - 2.0 * xs @ zs.T
    out = ((1.0 - xx)[:, None] / d2) ** (n - 1)
    if xsingle and zsingle:
        return float(out[0, 0])
    if xsingle:
        return out[0]
    if zsingle:
        return out[:, 0]
    return out


@dataclass(frozen=True)
class BoundaryData:
    """Quadratic boundary data ``c0 + <c, zeta> + zeta^T A zeta`` on the sphere.

    ``A`` is symmetrized on construction. ``resolution`` sets the product
    sphere rule used when the data is extended by quadrature.
    """

    c0: float
    c: np.ndarray
    A: np.ndarray = None
    resolution: int = 48

    def __post_init__(self):
        c = np.array(self.c, dtype=np.float64).ravel()
        n = c.size
        if n < 2:
            raise ValueError("boundary data needs dimension >= 2")
        A = np.zeros((n, n)) if self.A is None else np.array(self.A, dtype=np.float64)
        if A.shape != (n, n):
            A = A.reshape(n, n)
        A = 0.5 * (A + A.T)
        for arr in (c, A):
            arr.flags.writeable = False
        object.__setattr__(self, "c0", float(self.c0))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)

    @property
    def n(self):
        return self.c.size

    @property
    def degree(self):
        if np.any(self.A != 0):
            return 2
        return 1 if np.any(self.c != 0) else 0

    def __call__(self, zeta):
        z = np.atleast_2d(np.asarray(zeta, dtype=np.float64))
        return self.c0 + z @ self.c + np.einsum("ij,jk,ik->i", z, self.A, z)

    def sup_bound(self):
        """Upper bound for the data (and, by the maximum principle, its extension)."""
        return self.c0 + float(np.linalg.norm(self.c)) + float(np.linalg.eigvalsh(self.A)[-1])

    def inf_bound(self):
        return self.c0 - float(np.linalg.norm(self.c)) + float(np.linalg.eigvalsh(self.A)[0])

    def is_positive(self, samples=4096, seed=0):
        """Sampled positivity check, backed by the analytic lower bound."""
        if self.inf_bound() > 0:
            return True
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((samples, self.n))
        z = g / np.linalg.norm(g, axis=1, keepdims=True)
        return bool(np.all(self(z) > 0))

    def extend_exact(self, x):
        """M-harmonic extension via the radial factors of spherical harmonics.

        A degree-k harmonic ``Y_k`` extends to ``R_k(|x|^2) Y_k(x)`` with
        ``R_k(z) = 2F1(k, 1-n/2; k+n/2; z) / 2F1(k, 1-n/2; k+n/2; 1)``.
        """
        xs, single = _rows(x)
        n = self.n
        tr = float(np.trace(self.A))
        A0 = self.A - tr / n * np.eye(n)
        z = np.einsum("ij,ij->i", xs, xs)
        out = np.full(z.shape, self.c0 + tr / n)
        if np.any(self.c != 0):
            out += _radial_factor(n, 1, z) * (xs @ self.c)
        if np.any(A0 != 0):
            out += _radial_factor(n, 2, z) * np.einsum("ij,jk,ik->i", xs, A0, xs)
        return float(out[0]) if single else out


def _radial_factor(n, k, z):
    if n == 2:
        return np.ones_like(z)
    b, c = 1.0 - n / 2.0, k + n / 2.0
    at_one = math.gamma(c) * math.gamma(c - k - b) / (math.gamma(c - k) * math.gamma(c - b))
    return hyp2f1(k, b, c, z) / at_one


@dataclass
class ExtensionResult:
    value: np.ndarray
    error: np.ndarray
    resolution: int


def poisson_extend(data, x, m=None, tol=1e-8, strict=False):
    """Poisson extension ``int P_h(x, zeta) f(zeta) dsigma(zeta)`` by sphere quadrature.

    ``data`` is a :class:`BoundaryData` or any callable on (M, n) unit
    vectors. The error estimate compares the rule at resolution ``m`` with
    ``m/2``. With ``strict=True`` a :class:`QuadratureError` is raised when
    the estimate exceeds ``tol`` (relative to ``max(1, |value|)``).
    """
    xs, single = _rows(x)
    n = xs.shape[1]
    if m is None:
        m = getattr(data, "resolution", 48)
    fine = sphere_rule(n, m)
    coarse = sphere_rule(n, max(m // 2, 4))

    def apply(rule):
        vals = np.asarray(data(rule.points), dtype=np.float64)
        K = poisson_kernel(n, xs, rule.points)
        return K @ (rule.weights * vals)

    v = apply(fine)
    err = np.abs(v - apply(coarse))
    if strict and np.any(err > tol * np.maximum(1.0, np.abs(v))):
        raise QuadratureError(
            f"Poisson extension: error estimate {err.max():.3g} exceeds tol at resolution {m}"
        )
    if single:
        return ExtensionResult(float(v[0]), float(err[0]), m)
    return ExtensionResult(v, err, m)


# --------------------------------------------------------------------------
# finite-difference hyperbolic Laplacian
# --------------------------------------------------------------------------


def fd_hyperbolic_laplacian(u, x, h=None, rel_step=1e-3):
    """Central-difference ``(1-|x|^2)^2 Lap u + 2(n-2)(1-|x|^2) <x, grad u>``.

    ``u`` maps an (N, n) array to (N,) values. ``h`` defaults to
    ``rel_step * (1 - |x|)`` per point. Truncation error is O(h^2).
    """
    xs, single = _rows(x)
    N, n = xs.shape
    r = np.sqrt(np.einsum("ij,ij->i", xs, xs))
    if h is None:
        h = rel_step * (1.0 - r)
    h = np.broadcast_to(np.asarray(h, dtype=np.float64), (N,)).copy()
    if np.any(r + h * math.sqrt(n) >= 1.0) or np.any(h <= 0):
        raise ValueError("finite-difference stencil leaves the ball; reduce h")
    eye = np.eye(n)
    stencil = np.concatenate(
        [xs[:, None, :], xs[:, None, :] + h[:, None, None] * eye, xs[:, None, :] - h[:, None, None] * eye],
        axis=1,
    )
    vals = np.asarray(u(stencil.reshape(-1, n)), dtype=np.float64).reshape(N, 2 * n + 1)
    c, plus, minus = vals[:, :1], vals[:, 1 : n + 1], vals[:, n + 1 :]
    lap = np.sum(plus - 2.0 * c + minus, axis=1) / h**2
    grad = (plus - minus) / (2.0 * h[:, None])
    w = 1.0 - r**2
    out = w**2 * lap + 2.0 * (n - 2) * w * np.einsum("ij,ij->i", xs, grad)
    return float(out[0]) if single else out


# --------------------------------------------------------------------------
# field nodes
# --------------------------------------------------------------------------


class TestField:
    """Base class of monoid-closed fields (not a pytest test class)."""

    __test__ = False
    kind = "field"

    #: dimension the field is tied to, or ``None`` if it works in any dimension
    n = None

    def log_abs(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return np.exp(self.log_abs(x))

    def log_boundary(self, zeta):
        """log of the continuous boundary values on unit vectors ``zeta``."""
        raise NotImplementedError(f"{self.kind} has no boundary values")

    def log_sup_bound(self):
        """An upper bound for ``sup log|f|`` over the ball."""
        raise NotImplementedError

    @property
    def bounded(self):
        return all(c.bounded for c in self.children)

    @property
    def is_constant(self):
        return False

    @property
    def children(self):
        return ()

    def check_dimension(self, n):
        if self.n is not None and self.n != n:
            raise ValueError(f"field is {self.n}-dimensional, requested n={n}")
        for c in self.children:
            c.check_dimension(n)

    def params(self):
        return {}

    def describe(self, indent=0):
        """Tree text in the plain-text field description format."""
        items = " ".join(f"{k}={_fmt_value(v)}" for k, v in self.params().items())
        line = " " * indent + self.kind + (" " + items if items else "")
        return "\n".join([line] + [c.describe(indent + 2) for c in self.children])

    def certificate(self):
        """Nested construction record justifying log-M-subharmonicity."""
        return {"kind": self.kind, "rule": self.rule, "children": [c.certificate() for c in self.children]}

    rule = ""

    def __repr__(self):
        return f"<{type(self).__name__}\n{self.describe()}>"


def _fmt_value(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return ",".join(_fmt_scalar(x) for x in np.ravel(v))
    return _fmt_scalar(v)


def _fmt_scalar(x):
    if isinstance(x, (complex, np.complexfloating)):
        return repr(complex(x)).strip("()")
    return repr(float(x))


class Constant(TestField):
    kind = "const"
    rule = "positive constant: log c is M-harmonic"

    def __init__(self, c=1.0):
        c = float(c)
        if not c > 0:
            raise ValueError("Constant needs c > 0")
        self.c = c

    def log_abs(self, x):
        xs, single = _rows(x)
        out = np.full(xs.shape[0], math.log(self.c))
        return float(out[0]) if single else out

    def log_boundary(self, zeta):
        return self.log_abs(zeta)

    def log_sup_bound(self):
        return math.log(self.c)

    @property
    def bounded(self):
        return True

    @property
    def is_constant(self):
        return True

    def params(self):
        return {"c": self.c}


class ExpHarmonic(TestField):
    kind = "exp_harmonic"
    rule = "exp of an M-harmonic function (group G)"

    def __init__(self, data, method="exact"):
        if not isinstance(data, BoundaryData):
            raise TypeError("ExpHarmonic needs BoundaryData")
        if method not in ("exact", "quadrature"):
            raise ValueError("method must be 'exact' or 'quadrature'")
        self.data = data
        self.method = method
        self.n = data.n

    def log_abs(self, x):
        if self.method == "exact":
            return self.data.extend_exact(x)
        return poisson_extend(self.data, x).value

    def log_boundary(self, zeta):
        return self.data(zeta)

    def log_sup_bound(self):
        return self.data.sup_bound()

    @property
    def bounded(self):
        return True

    @property
    def is_constant(self):
        return self.data.degree == 0

    def params(self):
        d = {"c0": self.data.c0, "c": self.data.c}
        if np.any(self.data.A != 0):
            d["A"] = self.data.A
        return d


class Power(TestField):
    kind = "power"
    rule = "nonnegative power of a monoid element"

    def __init__(self, child, p):
        p = float(p)
        if p < 0:
            raise ValueError("Power exponent must be nonnegative")
        self.child = child
        self.p = p
        self.n = child.n

    @property
    def children(self):
        return (self.child,)

    def _scale(self, v):
        if self.p == 0.0:
            return np.zeros_like(v) if isinstance(v, np.ndarray) else 0.0
        return self.p * v

    def log_abs(self, x):
        return self._scale(self.child.log_abs(x))

    def log_boundary(self, zeta):
        return self._scale(self.child.log_boundary(zeta))

    def log_sup_bound(self):
        return self.p * self.child.log_sup_bound()

    @property
    def is_constant(self):
        return self.p == 0.0 or self.child.is_constant

    def params(self):
        return {"p": self.p}


def _common_dim(children):
    dims = {c.n for c in children if c.n is not None}
    if len(dims) > 1:
        raise ValueError(f"children have mismatched dimensions {sorted(dims)}")
    return dims.pop() if dims else None


class Product(TestField):
    kind = "product"
    rule = "product of monoid elements"

    def __init__(self, children):
        children = tuple(children)
        if not children:
            raise ValueError("Product needs at least one child")
        self._children = children
        self.n = _common_dim(children)

    @property
    def children(self):
        return self._children

    def log_abs(self, x):
        return sum(c.log_abs(x) for c in self._children)

    def log_boundary(self, zeta):
        return sum(c.log_boundary(zeta) for c in self._children)

    def log_sup_bound(self):
        return sum(c.log_sup_bound() for c in self._children)

    @property
    def is_constant(self):
        return all(c.is_constant for c in self._children)


class PositiveCombination(TestField):
    kind = "combination"
    rule = "positive combination in the convex cone E_+"

    def __init__(self, weights, children):
        w = np.array(weights, dtype=np.float64).ravel()
        children = tuple(children)
        if w.size != len(children) or not children:
            raise ValueError("weights and children must match and be nonempty")
        if np.any(w <= 0):
            raise ValueError("combination weights must be strictly positive")
        w.flags.writeable = False
        self.weights = w
        self._children = children
        self.n = _common_dim(children)

    @property
    def children(self):
        return self._children

    def _combine(self, parts):
        stack = np.stack([np.atleast_1d(p) for p in parts])
        out = logsumexp(stack, axis=0, b=self.weights[:, None])
        return out if np.ndim(parts[0]) else float(out[0])

    def log_abs(self, x):
        return self._combine([c.log_abs(x) for c in self._children])

    def log_boundary(self, zeta):
        return self._combine([c.log_boundary(zeta) for c in self._children])

    def log_sup_bound(self):
        return float(logsumexp([c.log_sup_bound() for c in self._children], b=self.weights))

    @property
    def is_constant(self):
        return all(c.is_constant for c in self._children)

    def params(self):
        return {"weights": self.weights}


class MobiusPullback(TestField):
    """``g(x) = f(m(x)) (Phi_n(|m(x)|) / Phi_n(|x|))^exponent``.

    With ``exponent = alpha / p`` this preserves the (alpha, p) Bergman norm
    and the distribution of ``|f|^p Phi_n^alpha`` under the invariant measure.
    Its boundary values are ``f(m(zeta)) P_h(center, zeta)^exponent``.
    """

    kind = "pullback"
    rule = "Mobius pullback with Phi_n ratio (log Phi_n has constant Delta_h)"

    def __init__(self, child, center, exponent):
        exponent = float(exponent)
        if exponent < 0:
            raise ValueError("pullback exponent must be nonnegative")
        c = np.asarray(center.coords if isinstance(center, BallPoint) else center, dtype=np.float64)
        if child.n is not None and c.size != child.n:
            raise ValueError("center dimension does not match child")
        self.child = child
        self.map = MobiusMap(BallPoint(c))
        self.exponent = exponent
        self.n = c.size

    @property
    def children(self):
        return (self.child,)

    def log_abs(self, x):
        xs, single = _rows(x)
        y = self.map.apply(xs)
        out = np.asarray(self.child.log_abs(y), dtype=np.float64)
        if self.exponent:
            ry = np.sqrt(np.minimum(np.einsum("ij,ij->i", y, y), 1.0 - 1e-16))
            rx = np.sqrt(np.einsum("ij,ij->i", xs, xs))
            out = out + self.exponent * (log_phi(self.n, ry) - log_phi(self.n, rx))
        return float(out[0]) if single else out

    def log_boundary(self, zeta):
        zs, single = _rows(zeta)
        a = self.map.center
        y = self.map.apply(zs)
        y = y / np.linalg.norm(y, axis=1, keepdims=True)
        out = np.asarray(self.child.log_boundary(y), dtype=np.float64)
        if self.exponent:
            logP = (self.n - 1) * (math.log1p(-a.norm_sq) - np.log(bracket_sq(zs, a)))
            out = out + self.exponent * logP
        return float(out[0]) if single else out

    def log_sup_bound(self):
        a = self.map.center.norm
        ratio = (self.n - 1) * math.log((1 + a) / (1 - a)) - math.log(e_constant(self.n))
        return self.child.log_sup_bound() + self.exponent * ratio

    @property
    def is_constant(self):
        return self.child.is_constant and (self.exponent == 0 or self.map.is_identity)

    def params(self):
        return {"center": self.map.center.coords, "exponent": self.exponent}


class PlanarModulus(TestField):
    """n = 2 only: ``|a(z)|`` (``mode="abs"``) or ``sqrt(|a|^2 + |b|^2)``
    (``mode="norm"``) for polynomial coefficient sequences ``a`` and ``b``.
    """

    kind = "planar"
    rule = "log|a| harmonic / log(|a|^2+|b|^2) subharmonic for analytic a, b"
    n = 2

    def __init__(self, a, b=(), mode="abs"):
        a = np.array(a, dtype=np.complex128).ravel()
        b = np.array(b if len(b) else [0.0], dtype=np.complex128).ravel()
        if mode not in ("abs", "norm"):
            raise ValueError("mode must be 'abs' or 'norm'")
        if mode == "abs" and np.any(b != 0):
            raise ValueError("mode 'abs' ignores b; pass b only with mode 'norm'")
        if not np.any(a != 0) and not np.any(b != 0):
            raise ValueError("PlanarModulus of the zero function")
        self.a, self.b, self.mode = a, b, mode

    def _log(self, xs):
        z = xs[:, 0] + 1j * xs[:, 1]
        A = np.polynomial.polynomial.polyval(z, self.a)
        with np.errstate(divide="ignore"):
            if self.mode == "abs":
                return np.log(np.abs(A))
            B = np.polynomial.polynomial.polyval(z, self.b)
            return 0.5 * np.log(np.abs(A) ** 2 + np.abs(B) ** 2)

    def log_abs(self, x):
        xs, single = _rows(x)
        if xs.shape[1] != 2:
            raise ValueError("PlanarModulus lives in n = 2")
        out = self._log(xs)
        return float(out[0]) if single else out

    def log_boundary(self, zeta):
        return self.log_abs(zeta)

    def log_sup_bound(self):
        sa = float(np.sum(np.abs(self.a)))
        sb = float(np.sum(np.abs(self.b)))
        return 0.5 * math.log(sa**2 + sb**2) if self.mode == "norm" else math.log(sa)

    @property
    def bounded(self):
        return True

    @property
    def is_constant(self):
        return not np.any(self.a[1:] != 0) and not np.any(self.b != 0)

    def params(self):
        d = {"mode": self.mode, "a": self.a}
        if self.mode == "norm":
            d["b"] = self.b
        return d

    def describe(self, indent=0):
        a = ",".join(_fmt_scalar(complex(v)) for v in self.a)
        line = f"{' ' * indent}planar mode={self.mode} a={a}"
        if self.mode == "norm":
            line += " b=" + ",".join(_fmt_scalar(complex(v)) for v in self.b)
        return line


def mobius_pullback(field, m, alpha, p):
    """Pullback of ``field`` by ``m`` with exponent ``alpha / p``."""
    center = m.center if isinstance(m, MobiusMap) else m
    return MobiusPullback(field, center, alpha / p)


# --------------------------------------------------------------------------
# certification
# --------------------------------------------------------------------------


@dataclass
class CertificateReport:
    samples: int
    seed: int
    values: np.ndarray
    tolerances: np.ndarray
    points: np.ndarray
    structure: dict
    counterexamples: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return not self.counterexamples

    @property
    def min_value(self):
        return float(np.min(self.values))


def certify_log_subharmonic(field, n, samples=1000, seed=0, rmax=0.9):
    """Check ``Delta_h log|f| >= -eps`` at random interior points.

    ``eps`` per point is four times the difference between steps ``h`` and
    ``2h`` (a Richardson estimate of the O(h^2) truncation) plus a
    round-off floor. The structural certificate is reported alongside.
    """
    field.check_dimension(n)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((samples, n))
    z = g / np.linalg.norm(g, axis=1, keepdims=True)
    pts = z * (rmax * rng.random(samples) ** (1.0 / n))[:, None]
    r = np.linalg.norm(pts, axis=1)
    h = 1e-3 * (1.0 - r)
    v1 = fd_hyperbolic_laplacian(field.log_abs, pts, h=h)
    v2 = fd_hyperbolic_laplacian(field.log_abs, pts, h=2.0 * h)
    scale = np.abs(field.log_abs(pts)) + 1.0
    roundoff = 100.0 * n * np.finfo(float).eps * scale / h**2 * (1.0 - r**2) ** 2
    tol = 4.0 * np.abs(v1 - v2) + roundoff
    bad = np.nonzero(~(v1 >= -tol))[0]
    cex = [(pts[i].tolist(), float(v1[i]), float(tol[i])) for i in bad]
    return CertificateReport(samples, seed, v1, tol, pts, field.certificate(), cex)


# --------------------------------------------------------------------------
# presets and the text format
# --------------------------------------------------------------------------

PRESETS = (
    "unit",
    "const",
    "exp_linear",
    "exp_quadratic",
    "combination",
    "product_power",
    "pullback_unit",
    "pullback_exp",
    "planar_z",
    "planar_1pz",
    "planar_harmonic",
)

PLANAR_PRESETS = ("planar_z", "planar_1pz", "planar_harmonic")


def _e(n, i, v=1.0):
    out = np.zeros(n)
    out[i % n] = v
    return out


def make_preset(name, n, r=1.0):
    """Build a named preset in dimension ``n``.

    ``r`` is the Hardy exponent a suite will use; ``pullback_unit`` takes
    exponent ``1/r`` so that it is norm-extremal for the (alpha, r alpha)
    chain.
    """
    if name in PLANAR_PRESETS and n != 2:
        raise ValueError(f"preset {name!r} is planar (n = 2 only)")
    if name == "unit":
        return Constant(1.0)
    if name == "const":
        return Constant(1.7)
    exp_linear = ExpHarmonic(BoundaryData(0.0, _e(n, 0, 0.6)))
    if name == "exp_linear":
        return exp_linear
    if name == "exp_quadratic":
        A = np.zeros((n, n))
        A[0, 0], A[1, 1] = 0.5, -0.3
        A[0, 1] = A[1, 0] = 0.2
        return ExpHarmonic(BoundaryData(0.1, 0.3 * _e(n, 0) - 0.25 * _e(n, 1), A))
    other = ExpHarmonic(BoundaryData(-0.2, _e(n, 1, -0.8)))
    combination = PositiveCombination([1.0, 0.5], [exp_linear, other])
    if name == "combination":
        return combination
    if name == "product_power":
        return Product([Power(exp_linear, 1.5), combination])
    center = 0.4 * _e(n, 0) + 0.2 * _e(n, 1)
    if name == "pullback_unit":
        return MobiusPullback(Constant(1.0), center, 1.0 / r)
    if name == "pullback_exp":
        return MobiusPullback(exp_linear, -0.5 * center, 0.5)
    if name == "planar_z":
        return PlanarModulus([0.0, 1.0])
    if name == "planar_1pz":
        return PlanarModulus([1.0, 1.0])
    if name == "planar_harmonic":
        return PlanarModulus([1.0, 0.5], [0.0, 0.0, 0.3j], mode="norm")
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def presets_for(n):
    return [p for p in PRESETS if n == 2 or p not in PLANAR_PRESETS]


class FieldFormatError(ValueError):
    """Malformed field description text."""


def _parse_floats(text):
    return np.array([float(v) for v in text.split(",") if v.strip()], dtype=np.float64)


def _parse_complex(text):
    return np.array([complex(v.replace(" ", "")) for v in text.split(",") if v.strip()])


def _build(kind, kw, children, n, lineno):
    def need(key):
        if key not in kw:
            raise FieldFormatError(f"line {lineno}: {kind} needs {key}=")
        return kw[key]

    def no_children():
        if children:
            raise FieldFormatError(f"line {lineno}: {kind} takes no children")

    try:
        if kind == "const":
            no_children()
            return Constant(float(kw.get("c", "1")))
        if kind == "exp_harmonic":
            no_children()
            c = _parse_floats(kw.get("c", ",".join(["0"] * n)))
            if c.size != n:
                raise FieldFormatError(f"line {lineno}: c must have {n} entries")
            A = _parse_floats(kw["A"]).reshape(n, n) if "A" in kw else None
            return ExpHarmonic(BoundaryData(float(kw.get("c0", "0")), c, A))
        if kind == "power":
            if len(children) != 1:
                raise FieldFormatError(f"line {lineno}: power takes exactly one child")
            return Power(children[0], float(need("p")))
        if kind == "product":
            return Product(children)
        if kind == "combination":
            return PositiveCombination(_parse_floats(need("weights")), children)
        if kind == "pullback":
            if len(children) != 1:
                raise FieldFormatError(f"line {lineno}: pullback takes exactly one child")
            return MobiusPullback(children[0], _parse_floats(need("center")), float(need("exponent")))
        if kind == "planar":
            no_children()
            mode = kw.get("mode", "abs")
            b = _parse_complex(kw["b"]) if "b" in kw else ()
            return PlanarModulus(_parse_complex(need("a")), b, mode=mode)
        if kind == "preset":
            no_children()
            return make_preset(need("name"), n, float(kw.get("r", "1")))
    except FieldFormatError:
        raise
    except (ValueError, TypeError) as exc:
        raise FieldFormatError(f"line {lineno}: {exc}") from exc
    raise FieldFormatError(f"line {lineno}: unknown node kind {kind!r}")


def parse_field(text, n):
    """Parse the indented plain-text field format (see README).

    One node per line: ``kind key=value ...``; children are indented two
    spaces deeper than their parent. Lines starting with ``#`` are ignored.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip(" "))
        if indent % 2:
            raise FieldFormatError(f"line {lineno}: indentation must be a multiple of 2")
        tokens = body.split()
        kw = {}
        for tok in tokens[1:]:
            if "=" not in tok:
                raise FieldFormatError(f"line {lineno}: expected key=value, got {tok!r}")
            k, v = tok.split("=", 1)
            kw[k] = v
        lines.append((indent // 2, tokens[0], kw, lineno))
    if not lines:
        raise FieldFormatError("empty field description")

    pos = 0

    def node(depth):
        nonlocal pos
        d, kind, kw, lineno = lines[pos]
        if d != depth:
            raise FieldFormatError(f"line {lineno}: unexpected indentation")
        pos += 1
        kids = []
        while pos < len(lines) and lines[pos][0] > depth:
            kids.append(node(depth + 1))
        return _build(kind, kw, kids, n, lineno)

    root = node(0)
    if pos != len(lines):
        raise FieldFormatError(f"line {lines[pos][3]}: more than one root node")
    try:
        root.check_dimension(n)
    except ValueError as exc:
        raise FieldFormatError(str(exc)) from exc
    return root


def load_field(spec, n, r=1.0):
    """Resolve a preset name or a path to a field description file."""
    if spec in PRESETS:
        return make_preset(spec, n, r)
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FieldFormatError(f"{spec!r} is neither a preset nor a readable file") from exc
    return parse_field(text, n)


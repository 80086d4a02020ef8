"""Hyperbolic geometry of the unit ball: volumes, perimeters, the isoperimetric
profile and Mobius automorphisms.

Hyperbolic volume is ``|E|_h = int_E (2 / (1 - |x|^2))^n dx`` (no ``1/omega_n``).
The ball ``B_s`` of hyperbolic radius ``s`` has Euclidean radius ``tanh(s/2)``,
perimeter ``P_s = n omega_n sinh^{n-1}(s)`` and volume
``V_s = n omega_n int_0^s sinh^{n-1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.optimize import brentq

from .quadrature import adaptive_gk, gauss_legendre_01

_GL_SMALL = 2.0  # below this the sinh-power integral uses Gauss-Legendre
_GL_NODES = 40


def unit_ball_volume(n):
    """Euclidean volume omega_n = pi^{n/2} / Gamma(n/2 + 1) of the unit ball."""
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_area(n):
    """Area n omega_n of the unit sphere S^{n-1}."""
    return n * unit_ball_volume(n)


def sinh_power_integral(m, s):
    """W_m(s) = int_0^s sinh^m(t) dt, vectorized over ``s >= 0``.

    Small arguments use a 40-point Gauss-Legendre rule (the integrand is
    entire); larger ones the reduction
    ``I_m = sinh^{m-1} cosh / m - (m-1)/m I_{m-2}``, stable once ``s >= 2``.
    """
    s = np.asarray(s, dtype=np.float64)
    out = np.empty_like(s)
    flat_s = s.ravel()
    flat = out.ravel()
    small = flat_s <= _GL_SMALL
    if small.any():
        x, w = gauss_legendre_01(_GL_NODES)
        ss = flat_s[small]
        nodes = ss[:, None] * x[None, :]
        flat[small] = ss * (np.sinh(nodes) ** m @ w)
    big = ~small
    if big.any():
        sb = flat_s[big]
        sh, ch = np.sinh(sb), np.cosh(sb)
        if m % 2 == 0:
            val, k = sb.copy(), 0
        else:
            val, k = 2.0 * np.sinh(0.5 * sb) ** 2, 1
        while k < m:
            k += 2
            val = sh ** (k - 1) * ch / k - (k - 1) / k * val
        flat[big] = val
    return out.reshape(s.shape) if s.ndim else float(out)


def hyperbolic_ball_volume(n, s, rtol=1e-10, method="quad"):
    """Hyperbolic volume V_s of the ball of hyperbolic radius ``s``.

    ``method="quad"`` integrates ``sinh^{n-1}`` with adaptive Gauss-Kronrod
    at relative tolerance ``rtol``; ``method="closed"`` uses the elementary
    antiderivative (vectorized).
    """
    if method == "closed":
        return sphere_area(n) * sinh_power_integral(n - 1, s)
    s = float(s)
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s == 0.0:
        return 0.0
    val, _ = adaptive_gk(lambda t: np.sinh(t) ** (n - 1), 0.0, s, rtol=rtol)
    return sphere_area(n) * val


def hyperbolic_ball_perimeter(n, s):
    """Hyperbolic perimeter P_s = n omega_n sinh^{n-1}(s)."""
    return sphere_area(n) * np.sinh(s) ** (n - 1)


def inverse_volume(n, v, tol=1e-13):
    """Radius S(v) of the hyperbolic ball with volume ``v``."""
    v = float(v)
    if v < 0:
        raise ValueError("v must be nonnegative")
    if v == 0.0:
        return 0.0
    hi = 1.0
    while hyperbolic_ball_volume(n, hi, method="closed") < v:
        hi *= 2.0
    return brentq(
        lambda s: hyperbolic_ball_volume(n, s, method="closed") - v,
        0.0,
        hi,
        xtol=tol * max(hi, 1.0) * 1e-3,
        rtol=4 * np.finfo(float).eps,
    )


def upsilon(n, v):
    """Isoperimetric profile Upsilon(v) = v / P_{S(v)}^2 (vectorized)."""
    return get_profile(n).upsilon(v)


@dataclass
class IsoperimetricReport:
    n: int
    s: float
    volume: float
    perimeter: float
    newes_lhs: float
    newes_rhs: float
    newes_margin: float
    ball_equality_residual: float
    scale: float
    tol: float

    @property
    def newes_holds(self):
        return self.newes_margin >= -self.tol * self.scale

    @property
    def ball_equality_holds(self):
        return abs(self.ball_equality_residual) <= self.tol * max(self.perimeter**2, 1.0)

    @property
    def passed(self):
        return self.newes_holds and self.ball_equality_holds


def isoperimetric_check(n, s, tol=1e-10):
    """Evaluate both isoperimetric relations on the ball ``B_s``.

    ``newes``: ``P^n - n^n omega_n V^{n-1} >= (n-1)^n V^n``.
    ``ball_equality_residual``: ``P^2 - V / Upsilon(V)`` which vanishes on balls.
    """
    s = float(s)
    if not s > 0:
        raise ValueError("s must be positive")
    om = unit_ball_volume(n)
    V = hyperbolic_ball_volume(n, s)
    P = float(hyperbolic_ball_perimeter(n, s))
    lhs = P**n - n**n * om * V ** (n - 1)
    rhs = (n - 1) ** n * V**n
    resid = P**2 - V / float(upsilon(n, V))
    scale = max(P**n, n**n * om * V ** (n - 1), rhs)
    return IsoperimetricReport(n, s, V, P, lhs, rhs, lhs - rhs, resid, scale, tol)


# --------------------------------------------------------------------------
# cached profile table
# --------------------------------------------------------------------------

_PANEL = 1.0
_DEG = 28
S_CAP = 48.0  # 2 artanh(r) stays below ~38 for any double r < 1
SMALL_S = 1e-4  # below this the two-term series is exact to double precision


def _vp_ratio_raw(m, s):
    """V_s / P_s = W_m(s) / sinh^m(s), with the s -> 0 limit 0."""
    s = np.asarray(s, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = sinh_power_integral(m, s) / np.sinh(s) ** m
    return np.where(s > 0, r, 0.0)


class IsoperimetricProfile:
    """Read-mostly table for one dimension ``n``.

    Holds a piecewise Chebyshev representation of ``V/P`` on panels of unit
    width over ``[0, S_CAP]`` and of its antiderivative
    ``L(s) = int_0^s V/P``. Because ``dV = P ds``,
    ``int_0^v Upsilon = L(S(v))``. Instances are immutable after
    construction, so concurrent readers are safe.
    """

    def __init__(self, n):
        if n < 2 or int(n) != n:
            raise ValueError("n must be an integer >= 2")
        self.n = int(n)
        self.m = self.n - 1
        self.area = sphere_area(self.n)
        npan = int(S_CAP / _PANEL)
        self._edges = np.arange(npan + 1) * _PANEL
        k = np.arange(_DEG + 1)
        cheb_x = np.cos(np.pi * (k + 0.5) / (_DEG + 1))
        ratio_c = np.empty((npan, _DEG + 1))
        lam_c = np.empty((npan, _DEG + 2))
        base = np.empty(npan + 1)
        base[0] = 0.0
        for i in range(npan):
            a, b = self._edges[i], self._edges[i + 1]
            nodes = 0.5 * (a + b) + 0.5 * (b - a) * cheb_x
            coef = C.chebfit(cheb_x, _vp_ratio_raw(self.m, nodes), _DEG)
            ratio_c[i] = coef
            integ = C.chebint(coef, lbnd=-1.0) * (0.5 * (b - a))
            lam_c[i] = integ
            base[i + 1] = base[i] + C.chebval(1.0, integ)
        self._ratio_c = ratio_c
        self._lam_c = lam_c
        self._lam_base = base
        for arr in (self._edges, ratio_c, lam_c, base):
            arr.flags.writeable = False

    # -- helpers ----------------------------------------------------------
    def _panel(self, s):
        idx = np.floor(s / _PANEL).astype(np.int64)
        np.clip(idx, 0, len(self._edges) - 2, out=idx)
        a = self._edges[idx]
        x = 2.0 * (s - a) / _PANEL - 1.0
        return idx, x

    @staticmethod
    def _clenshaw(coefs, x):
        b0 = np.zeros_like(x)
        b1 = np.zeros_like(x)
        for j in range(coefs.shape[1] - 1, 0, -1):
            b0, b1 = coefs[:, j] + 2.0 * x * b0 - b1, b0
        return coefs[:, 0] + x * b0 - b1

    def _check_s(self, s):
        s = np.asarray(s, dtype=np.float64)
        if np.any(s < 0):
            raise ValueError("s must be nonnegative")
        return s

    # -- geometric quantities --------------------------------------------
    def volume(self, s):
        return self.area * sinh_power_integral(self.m, self._check_s(s))

    def perimeter(self, s):
        return self.area * np.sinh(self._check_s(s)) ** self.m

    def vp_ratio(self, s):
        """V_s / P_s; tends to 1/(n-1) as s grows."""
        s = self._check_s(s)
        flat = s.ravel()
        out = np.empty_like(flat)
        inside = flat <= S_CAP
        if inside.any():
            idx, x = self._panel(flat[inside])
            out[inside] = self._clenshaw(self._ratio_c[idx], x)
        if (~inside).any():
            out[~inside] = _vp_ratio_raw(self.m, flat[~inside])
        tiny = flat < SMALL_S
        if tiny.any():
            # V/P = s/n (1 - m s^2 / (3(n+2))) + O(s^5)
            st = flat[tiny]
            out[tiny] = st / self.n * (1.0 - self.m * st * st / (3.0 * (self.n + 2)))
        return out.reshape(s.shape) if s.ndim else float(out[0])

    def L(self, s):
        """int_0^s V_sigma / P_sigma d sigma (vectorized)."""
        s = self._check_s(s)
        flat = s.ravel()
        out = np.empty_like(flat)
        inside = flat <= S_CAP
        if inside.any():
            idx, x = self._panel(flat[inside])
            out[inside] = self._lam_base[idx] + self._clenshaw(self._lam_c[idx], x)
        if (~inside).any():
            # V/P = 1/m up to terms below double precision out here
            out[~inside] = self._lam_base[-1] + (flat[~inside] - S_CAP) / self.m
        tiny = flat < SMALL_S
        if tiny.any():
            s2 = flat[tiny] ** 2
            out[tiny] = s2 / (2.0 * self.n) * (1.0 - self.m * s2 / (6.0 * (self.n + 2)))
        return out.reshape(s.shape) if s.ndim else float(out[0])

    def L_inverse(self, y, tol=1e-14):
        """Solve L(s) = y for s >= 0 (Newton with bisection safeguard)."""
        y = np.asarray(y, dtype=np.float64)
        if np.any(y < 0):
            raise ValueError("L_inverse needs y >= 0")
        flat = y.ravel()
        # L ~ s^2/(2n) near 0 and ~ s/m for large s
        s = np.maximum(np.sqrt(2.0 * self.n * flat), self.m * flat + 1.0)
        lo = np.zeros_like(flat)
        hi = np.maximum(s, 1.0) * 2.0
        s = np.minimum(s, hi)
        for _ in range(100):
            f = self.L(s) - flat
            lo = np.where(f < 0, s, lo)
            hi = np.where(f > 0, s, hi)
            d = self.vp_ratio(s)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(d > 0, f / d, np.inf)
            new = s - step
            bad = ~((new > lo) & (new < hi))
            new = np.where(bad, 0.5 * (lo + hi), new)
            done = np.abs(new - s) <= tol * np.maximum(1.0, s)
            s = new
            if done.all():
                break
        return s.reshape(y.shape) if y.ndim else float(s[0])

    def radius(self, v, tol=1e-14):
        """S(v): hyperbolic radius of the ball with volume ``v`` (vectorized)."""
        v = np.asarray(v, dtype=np.float64)
        if np.any(v < 0):
            raise ValueError("v must be nonnegative")
        flat = v.ravel()
        om = self.area / self.n
        small = (flat / om) ** (1.0 / self.n)
        with np.errstate(divide="ignore"):
            large = np.log(np.maximum(flat, 1e-300) * self.m * 2.0**self.m / self.area) / self.m
        # V_s >= omega_n s^n and V_s <= area e^{ms} / (m 2^m) bracket the root
        lo = np.maximum(large, 0.0)
        hi = small * (1.0 + 1e-12) + 1e-300
        s = np.clip(large, lo, hi)
        act = np.nonzero(flat > 0)[0]
        for _ in range(200):
            if act.size == 0:
                break
            sa, va = s[act], flat[act]
            f = self.volume(sa) - va
            lo[act] = np.where(f < 0, sa, lo[act])
            hi[act] = np.where(f > 0, sa, hi[act])
            P = self.perimeter(sa)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = np.where(P > 0, f / P, np.inf)
            new = sa - step
            done = np.abs(step) <= tol * np.maximum(1.0, sa)
            bad = ~done & ~((new >= lo[act]) & (new <= hi[act]))
            new = np.where(bad, 0.5 * (lo[act] + hi[act]), new)
            s[act] = new
            act = act[~done]
        else:
            raise RuntimeError("radius: Newton iteration did not converge")
        s = np.where(flat == 0, 0.0, s)
        return s.reshape(v.shape) if v.ndim else float(s[0])

    def upsilon(self, v):
        v = np.asarray(v, dtype=np.float64)
        if np.any(v <= 0):
            raise ValueError("Upsilon is defined for v > 0")
        s = self.radius(v)
        # v / P^2 written as (V/P) / P
        out = self.vp_ratio(s) / self.perimeter(s)
        return out if v.ndim else float(out)

    def lam(self, v):
        """int_0^v Upsilon(x) dx = L(S(v))."""
        return self.L(self.radius(v))

    def lam_inverse(self, y):
        """Volume v with int_0^v Upsilon = y."""
        return self.volume(self.L_inverse(y))


@lru_cache(maxsize=None)
def get_profile(n):
    """Shared, lazily built profile table for dimension ``n``."""
    return IsoperimetricProfile(n)


# --------------------------------------------------------------------------
# points and Mobius maps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BallPoint:
    """A point of the open unit ball with cached squared norm."""

    coords: np.ndarray
    norm_sq: float = field(init=False)

    def __post_init__(self):
        c = np.array(self.coords, dtype=np.float64).ravel()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        ns = float(c @ c)
        if not ns < 1.0:
            raise ValueError("BallPoint must lie in the open unit ball")
        object.__setattr__(self, "norm_sq", ns)

    @property
    def dim(self):
        return self.coords.size

    @property
    def norm(self):
        return math.sqrt(self.norm_sq)


@dataclass(frozen=True)
class SpherePoint:
    """A unit vector."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=np.float64).ravel()
        nrm = float(np.linalg.norm(c))
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError("SpherePoint must have unit norm")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)


def _as_points(x):
    if isinstance(x, (BallPoint, SpherePoint)):
        return x.coords[None, :], True
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x[None, :], True
    return x, False


def bracket_sq(x, a):
    """[x, a]^2 = 1 + |x|^2 |a|^2 - 2 <x, a> (vectorized over rows of x)."""
    pts, single = _as_points(x)
    a = a.coords if isinstance(a, BallPoint) else np.asarray(a, dtype=np.float64)
    out = 1.0 + np.einsum("ij,ij->i", pts, pts) * (a @ a) - 2.0 * pts @ a
    return float(out[0]) if single else out


@dataclass(frozen=True)
class MobiusMap:
    """The involutive ball automorphism exchanging 0 and ``center``.

    ``phi_a(x) = (a |x - a|^2 + (1 - |a|^2)(a - x)) / [x, a]^2`` with
    ``|phi_a(x)| = |x - a| / [x, a]``.
    """

    center: BallPoint

    def __post_init__(self):
        if not isinstance(self.center, BallPoint):
            object.__setattr__(self, "center", BallPoint(self.center))

    @classmethod
    def identity(cls, n):
        return cls(BallPoint(np.zeros(n)))

    @property
    def n(self):
        return self.center.dim

    @property
    def is_identity(self):
        return self.center.norm_sq == 0.0

    def apply(self, x):
        """Image of a point or of an (N, n) array of points."""
        pts, single = _as_points(x)
        a = self.center.coords
        aa = self.center.norm_sq
        if aa == 0.0:
            out = -pts  # phi_0(x) = -x
        else:
            d = pts - a
            dd = np.einsum("ij,ij->i", d, d)
            br = bracket_sq(pts, a)
            out = (a[None, :] * dd[:, None] + (1.0 - aa) * (a[None, :] - pts)) / br[:, None]
        if single:
            return BallPoint(out[0]) if isinstance(x, BallPoint) else out[0]
        return out

    def one_minus_norm_sq(self, x):
        """1 - |phi(x)|^2 = (1 - |a|^2)(1 - |x|^2) / [x, a]^2, cancellation free."""
        pts, single = _as_points(x)
        xx = np.einsum("ij,ij->i", pts, pts)
        out = (1.0 - self.center.norm_sq) * (1.0 - xx) / bracket_sq(pts, self.center)
        return float(out[0]) if single else out

    def jacobian(self, x):
        """|det D phi(x)| = ((1 - |phi(x)|^2) / (1 - |x|^2))^n."""
        pts, single = _as_points(x)
        out = ((1.0 - self.center.norm_sq) / bracket_sq(pts, self.center)) ** self.n
        return float(out[0]) if single else out


def mobius_apply(m, x):
    return m.apply(x)


def mobius_jacobian(m, x):
    return m.jacobian(x)


def hyperbolic_distance(x, y):
    """Hyperbolic distance in the ball model with metric 2|dx| / (1 - |x|^2)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    num = np.sqrt(np.sum((x - y) ** 2, axis=-1))
    den = np.sqrt((1.0 - np.sum(x * x, axis=-1)) * (1.0 - np.sum(y * y, axis=-1)))
    return 2.0 * np.arcsinh(num / den)

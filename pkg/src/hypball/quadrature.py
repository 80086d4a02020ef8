"""Quadrature rules: adaptive Gauss-Kronrod, Gauss-Jacobi on [0, 1], sphere rules."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

# Gauss-Kronrod 7/15 nodes on [-1, 1]
_XK = np.array([
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245, 0.405845151377397166906606412076961,
    0.586087235467691130294144845693013, 0.741531185599394439863864773280788,
    0.864864423359769072789712788640926, 0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
_WG = np.zeros(15)
_WG[1::2] = [
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]


MAX_SPHERE_NODES = 2_000_000


class QuadratureError(ArithmeticError):
    """Raised when an integral cannot be resolved to the requested accuracy."""


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = np.asarray(f(c + h * _XK), dtype=np.float64)
    k = h * np.dot(_WK, y)
    g = h * np.dot(_WG, y)
    return k, abs(k - g)


def adaptive_gk(f, a, b, rtol=1e-10, atol=0.0, max_panels=2000):
    """Globally adaptive Gauss-Kronrod (7, 15) quadrature of a vectorized f.

    Returns ``(value, error_estimate)``. Raises :class:`QuadratureError` when
    the panel budget runs out before ``error <= max(atol, rtol*|value|)``.
    """
    if a == b:
        return 0.0, 0.0
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val, err)]
    total, total_err = val, err
    panels = 1
    while total_err > max(atol, rtol * abs(total)):
        if panels >= max_panels:
            raise QuadratureError(
                f"adaptive_gk: {panels} panels, error {total_err:.3g} > tolerance"
            )
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        panels += 1
    # re-sum to shed accumulated rounding in the running total
    total = math.fsum(item[3] for item in heap)
    total_err = math.fsum(item[4] for item in heap)
    return total, total_err


@lru_cache(maxsize=256)
def gauss_jacobi_01(n, a, b):
    """Nodes/weights for int_0^1 w^a (1-w)^b f(w) dw with n points."""
    x, wt = roots_jacobi(n, a, b)  # weight (1-x)^a (1+x)^b on [-1, 1]
    w = 0.5 * (1.0 - x)
    wt = wt * 2.0 ** (-(a + b + 1.0))
    order = np.argsort(w)
    w, wt = w[order], wt[order]
    w.flags.writeable = False
    wt.flags.writeable = False
    return w, wt


@lru_cache(maxsize=64)
def gauss_legendre_01(n):
    x, wt = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * wt


@dataclass(frozen=True)
class SphereRule:
    """Points on the unit sphere S^{n-1} with weights summing to one."""

    points: np.ndarray
    weights: np.ndarray
    method: str
    resolution: int

    @property
    def dim(self):
        return self.points.shape[1]

    def integrate(self, values):
        """Weighted sum over the last axis of ``values``."""
        return np.asarray(values) @ self.weights


def _product_points(n, m):
    if n == 2:
        M = 2 * m
        th = 2.0 * np.pi * np.arange(M) / M
        return np.column_stack([np.cos(th), np.sin(th)]), np.full(M, 1.0 / M)
    # last coordinate tau has density ~ (1 - tau^2)^{(n-3)/2}
    a = 0.5 * (n - 3)
    tau, wt = roots_jacobi(m, a, a)
    wt = wt / wt.sum()
    sub_pts, sub_wt = _product_points(n - 1, m)
    rad = np.sqrt(1.0 - tau**2)
    pts = np.concatenate(
        [np.column_stack([r * sub_pts, np.full(len(sub_pts), t)]) for r, t in zip(rad, tau)]
    )
    wts = np.concatenate([w * sub_wt for w in wt])
    return pts, wts


@lru_cache(maxsize=64)
def _cached_product(n, m):
    pts, wts = _product_points(n, m)
    pts.flags.writeable = False
    wts.flags.writeable = False
    return pts, wts


def default_sphere_resolution(n):
    """Resolution giving a few thousand product nodes in dimension ``n``."""
    return {2: 128, 3: 32, 4: 16, 5: 10}.get(n, 6)


def sphere_rule(n, m=32, method="product", seed=0):
    """Quadrature on S^{n-1}.

    ``product``: trapezoid in each azimuth (2m points) times Gauss-Jacobi in
    the remaining angles (m points each) -- spectrally accurate for smooth
    integrands. ``mc``: ``m`` seeded uniform random points with equal weights.
    """
    if n < 2:
        raise ValueError("sphere rules need n >= 2")
    if method == "product":
        size = 2 * int(m) * int(m) ** (n - 2)
        if size > MAX_SPHERE_NODES:
            raise ValueError(
                f"product rule with m={m} in n={n} has {size} nodes; "
                f"lower m or use method='mc'"
            )
        pts, wts = _cached_product(n, int(m))
        return SphereRule(pts, wts, "product", int(m))
    if method == "mc":
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((int(m), n))
        pts = g / np.linalg.norm(g, axis=1, keepdims=True)
        return SphereRule(pts, np.full(int(m), 1.0 / m), "mc", int(m))
    raise ValueError(f"unknown sphere rule method {method!r}")


def uniform_sphere(n, size, rng):
    g = rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def uniform_ball(n, size, rng, rmax=1.0):
    """Uniform samples in the Euclidean ball of radius rmax."""
    z = uniform_sphere(n, size, rng)
    r = rmax * rng.random(size) ** (1.0 / n)
    return z * r[:, None]

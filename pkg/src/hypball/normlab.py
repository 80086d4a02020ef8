"""Hardy and Bergman norms, superlevel measures and the monotone function g.

Level sets are measured in hyperbolic polar coordinates about a centre ``c``
(normally the maximiser of ``u``). Along the geodesic ray
``s -> phi_c(tanh(s/2) zeta)`` the superlevel set ``{u > t}`` is a union of
intervals, and its hyperbolic volume is

    mu(t) = sum_zeta w_zeta * sum_intervals [V(s_out) - V(s_in)]

with ``V(s)`` the volume of the hyperbolic ball of radius ``s``. This is exact
for any centre (Mobius maps are isometries); only the sphere quadrature and
the root location along rays are approximate. Measures use ``|E|_h``, the
volume of the metric ``2|dx|/(1-|x|^2)``; the invariant measure is
``tau = |.|_h / (2^n omega_n)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import optimize

from . import _kernels
from .ballgeo import (
    MobiusMap,
    BallPoint,
    get_profile,
    hyperbolic_ball_volume,
    sinh_power_integral,
    sphere_area,
    unit_ball_volume,
)
from .quadrature import default_sphere_resolution, sphere_rule
from .weightfn import c_alpha, log_phi, radial_rule


# quadrature sums of positive terms carry about this much relative rounding
ROUND_FLOOR = 16.0 * np.finfo(float).eps


class ProfileError(RuntimeError):
    """A level profile failed a consistency check (monotonicity, t_max)."""


class NormError(ArithmeticError):
    """A norm could not be computed to the requested accuracy."""


def tau_factor(n):
    """``|E|_h / tau(E) = 2^n omega_n``."""
    return 2.0**n * unit_ball_volume(n)


# --------------------------------------------------------------------------
# norms
# --------------------------------------------------------------------------


@dataclass
class NormReport:
    """Outcome of a norm computation."""

    kind: str
    params: dict
    value: float
    error: float
    method: dict = dc_field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if not self.value >= 0 or not self.error >= 0:
            raise ValueError("norm value and error must be nonnegative")

    def as_dict(self):
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "value": self.value,
            "error": self.error,
            "method": dict(self.method),
            "seed": self.seed,
        }


def _rule(n, m, sphere, seed):
    if m is None:
        m = default_sphere_resolution(n) if sphere == "product" else 20000
    return sphere_rule(n, m, method=sphere, seed=seed)


def _coarse(rule, n, seed):
    if rule.method == "mc":
        return None
    return sphere_rule(n, max(rule.resolution // 2, 2), "product", seed)


def _sphere_average(values, rule):
    """Mean over the sphere plus a Monte Carlo standard error (0 for product)."""
    mean = float(rule.integrate(values))
    if rule.method == "mc":
        return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))
    return mean, 0.0


def _log_abs(field, pts):
    return np.asarray(field.log_abs(pts), dtype=np.float64)


def spherical_mean(field, p, r, n=None, m=None, sphere="product", seed=0, with_error=False):
    """``int_S |f(r zeta)|^p d sigma(zeta)`` with normalized surface measure."""
    n = _dim(field, n)
    if not p > 0:
        raise ValueError("p must be positive")
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    rule = _rule(n, m, sphere, seed)
    val, se = _sphere_average(np.exp(p * _log_abs(field, r * rule.points)), rule)
    if not with_error:
        return val
    coarse = _coarse(rule, n, seed)
    if coarse is not None:
        se = abs(val - float(coarse.integrate(np.exp(p * _log_abs(field, r * coarse.points)))))
    return val, se


def _dim(field, n):
    if n is None:
        if field.n is None:
            raise ValueError("dimension n is required for dimension-free fields")
        return field.n
    field.check_dimension(n)
    return int(n)


def _boundary_mean(field, p, n, rule):
    return _sphere_average(np.exp(p * np.asarray(field.log_boundary(rule.points))), rule)


def hardy_norm(field, p, n=None, method="boundary", m=None, sphere="product", seed=0, levels=14):
    """Hardy norm ``sup_r (int_S |f(r zeta)|^p)^(1/p)``.

    ``boundary`` integrates the continuous boundary values (the limit of the
    monotone means); ``radial`` takes means at ``r = 1 - 2^-k`` and
    extrapolates the increasing sequence to ``r = 1`` by repeated Richardson
    steps in ``h = 1 - r``.
    """
    n = _dim(field, n)
    if not p > 0:
        raise ValueError("p must be positive")
    if not field.bounded:
        raise NormError("Hardy norms are only computed for bounded fields")
    rule = _rule(n, m, sphere, seed)
    meta = {"sphere": rule.method, "resolution": rule.resolution, "route": method}
    if field.is_constant:
        val = math.exp(float(_log_abs(field, np.zeros((1, n)))[0]))
        return NormReport("hardy", {"p": p, "n": n}, val, 0.0, meta | {"route": "constant"}, seed)
    if method == "boundary":
        try:
            I, se = _boundary_mean(field, p, n, rule)
        except NotImplementedError:
            method = "radial"
        else:
            coarse = _coarse(rule, n, seed)
            err = se if coarse is None else abs(I - _boundary_mean(field, p, n, coarse)[0])
            err += ROUND_FLOOR * I
            val = I ** (1.0 / p)
            return NormReport("hardy", {"p": p, "n": n}, val, val * err / (p * I), meta, seed)
    if method != "radial":
        raise ValueError(f"unknown Hardy route {method!r}")
    meta["route"] = "radial"
    h = 0.5 ** np.arange(1, levels + 1)
    means = np.array([spherical_mean(field, p, 1.0 - hk, n, rule.resolution, rule.method, seed) for hk in h])
    # Neville table in h at h = 0
    table = [means.copy()]
    for k in range(1, min(5, levels)):
        prev = table[-1]
        table.append(prev[1:] + (prev[1:] - prev[:-1]) / (2.0**k - 1.0))
    best = table[-1][-1]
    err = abs(table[-1][-1] - table[-1][-2]) + abs(table[-1][-1] - table[-2][-1])
    best = max(best, means.max())
    val = best ** (1.0 / p)
    meta |= {"radii": (1.0 - h).tolist(), "means": means.tolist()}
    return NormReport("hardy", {"p": p, "n": n}, val, val * err / (p * best), meta, seed)


def _bergman_integral(field, n, p, alpha, nodes, rule):
    r, W = radial_rule(n, alpha, nodes)
    pts = rule.points
    means = np.empty(r.size)
    for i, ri in enumerate(r):
        means[i] = float(rule.integrate(np.exp(p * _log_abs(field, ri * pts))))
    return float(np.dot(W, means) / W.sum())


def bergman_norm(field, n=None, p=2.0, alpha=2.0, nodes=64, m=None, sphere="product", seed=0):
    """Weighted Bergman norm ``(c(alpha) int |f|^p Phi_n^alpha dtau)^(1/p)``.

    The radial integral uses Gauss-Jacobi nodes in ``w = 1 - r^2`` with the
    weight's algebraic endpoint behaviour built in, so ``c(alpha)`` cancels
    as the total mass of the same rule. The error estimate compares against
    half the radial nodes and half the sphere resolution.
    """
    n = _dim(field, n)
    if not p > 0:
        raise ValueError("p must be positive")
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    c_alpha(n, alpha, nodes=8)  # raises DivergenceError early
    rule = _rule(n, m, sphere, seed)
    meta = {"sphere": rule.method, "resolution": rule.resolution, "radial_nodes": nodes}
    params = {"p": p, "alpha": alpha, "n": n}
    if field.is_constant:
        val = math.exp(float(_log_abs(field, np.zeros((1, n)))[0]))
        return NormReport("bergman", params, val, 0.0, meta, seed)
    I = _bergman_integral(field, n, p, alpha, nodes, rule)
    err = abs(I - _bergman_integral(field, n, p, alpha, max(nodes // 2, 4), rule))
    coarse = _coarse(rule, n, seed)
    if coarse is None:
        r, W = radial_rule(n, alpha, nodes)
        vals = np.stack([np.exp(p * _log_abs(field, ri * rule.points)) for ri in r])
        per_point = (W / W.sum()) @ vals
        err += float(np.std(per_point, ddof=1) / math.sqrt(per_point.size))
    else:
        err += abs(I - _bergman_integral(field, n, p, alpha, nodes, coarse))
    err += ROUND_FLOOR * I
    val = I ** (1.0 / p)
    return NormReport("bergman", params, val, val * err / (p * I), meta, seed)


# --------------------------------------------------------------------------
# extremal profile
# --------------------------------------------------------------------------


def mu1_n2(t):
    """Extremal profile for n = 2: ``4 pi max(1/t - 1, 0)``."""
    t = np.asarray(t, dtype=np.float64)
    return 4.0 * np.pi * np.maximum(1.0 / t - 1.0, 0.0)


def mu1(n, t, alpha=1.0):
    """``|{Phi_n^alpha > t}|_h``: a ball of radius ``L^-1(-log t / (alpha (n-1)^2))``."""
    t = np.asarray(t, dtype=np.float64)
    prof = get_profile(n)
    y = -np.log(np.minimum(t, 1.0)) / (alpha * (n - 1) ** 2)
    return np.where(t < 1.0, prof.volume(prof.L_inverse(y)), 0.0)


# --------------------------------------------------------------------------
# level profiles
# --------------------------------------------------------------------------


@dataclass
class LevelProfile:
    """``t -> mu(t) = |{u > t}|_h`` for ``u = |f|^a Phi_n^alpha``."""

    n: int
    a: float
    alpha: float
    t_grid: np.ndarray
    mu: np.ndarray
    mu_err: np.ndarray
    t_max: float
    t_max_interval: tuple
    center: np.ndarray
    meta: dict = dc_field(default_factory=dict)

    @property
    def gamma(self):
        return self.alpha * (self.n - 1) ** 2

    def __len__(self):
        return self.t_grid.size

    def monotone_violation(self):
        """Largest increase of mu with t beyond the combined error bars."""
        order = np.argsort(-self.t_grid)
        mu, err = self.mu[order], self.mu_err[order]
        excess = (mu[:-1] - mu[1:]) - (err[:-1] + err[1:])
        return float(excess.max()) if excess.size else -math.inf

    def rows(self):
        return [
            {"t": float(t), "mu": float(m), "mu_err": float(e)}
            for t, m, e in zip(self.t_grid, self.mu, self.mu_err)
        ]


def _log_u(field, n, a, alpha, log_scale, pts):
    r = np.sqrt(np.minimum(np.einsum("ij,ij->i", pts, pts), 1.0 - 1e-16))
    out = alpha * log_phi(n, r)
    if a:
        out = out + a * (_log_abs(field, pts) + log_scale)
    return out


def _ball_from_tangent(y):
    """Exponential map at 0: ``y`` in R^n to the point at distance ``|y|``."""
    y = np.atleast_2d(y)
    s = np.linalg.norm(y, axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        x = np.where(s > 0, np.tanh(0.5 * s) * y / np.where(s > 0, s, 1.0), 0.0)
    return x


def locate_max(field, n, a, alpha, log_scale=0.0, seed=0, samples=2000, starts=5):
    """Multi-start ascent for ``max u``; returns ``(center, log_t_max)``."""
    if field.is_constant or a == 0:
        c = np.zeros(n)
        return c, float(_log_u(field, n, a, alpha, log_scale, c[None, :])[0])
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((samples, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    s = 4.0 * rng.random(samples) ** (1.0 / n)
    y0 = np.vstack([np.zeros(n), g * s[:, None]])
    vals = _log_u(field, n, a, alpha, log_scale, _ball_from_tangent(y0))
    vals = np.where(np.isfinite(vals), vals, -np.inf)
    best_y, best = y0[np.argmax(vals)], float(np.max(vals))

    def neg(y):
        v = float(_log_u(field, n, a, alpha, log_scale, _ball_from_tangent(y))[0])
        return -v if np.isfinite(v) else 1e300

    for idx in np.argsort(-vals)[:starts]:
        res = optimize.minimize(neg, y0[idx], method="L-BFGS-B", options={"ftol": 1e-15, "gtol": 1e-11})
        if -res.fun > best:
            best, best_y = -float(res.fun), res.x
    return _ball_from_tangent(best_y)[0], best


def _s_max(field, n, a, alpha, log_scale, log_t_min, center):
    """Radius beyond which ``u < t_min`` is guaranteed.

    ``u <= exp(a sup log|f|) (1-|x|^2)^(alpha(n-1))`` and
    ``1 - |x|^2 <= cosh^-2((s - d0)/2)`` for points at distance ``s`` from a
    centre at distance ``d0`` from the origin.
    """
    d0 = 2.0 * math.atanh(min(float(np.linalg.norm(center)), 1.0 - 1e-16))
    log_M = a * (field.log_sup_bound() + log_scale) if a else 0.0
    k = (log_M - log_t_min + math.log(2.0)) / (2.0 * alpha * (n - 1))
    if k <= 0:
        return max(d0, 1e-3)
    return d0 + 2.0 * math.acosh(math.exp(k))


# monomial coefficients of the cubic through (0, U0) .. (3, U3)
_VINV = np.linalg.inv(np.vander(np.arange(4.0), 4, increasing=True))


def _refine_roots(U, s, ray, seg, lev, levels):
    """Roots of the cubic interpolant of ``U`` on the crossing segments."""
    S = U.shape[1]
    h = s[1] - s[0]
    L = levels[lev]
    if S < 4:
        u0, u1 = U[ray, seg], U[ray, seg + 1]
        return s[seg] + h * (L - u0) / (u1 - u0)
    start = np.clip(seg - 1, 0, S - 4)
    idx = start[:, None] + np.arange(4)[None, :]
    vals = U[ray[:, None], idx]
    bad = ~np.isfinite(vals).all(axis=1)
    vals = np.where(np.isfinite(vals), vals, L[:, None] - 60.0)
    coef = vals @ _VINV.T
    lo = (seg - start).astype(np.float64)
    hi = lo + 1.0
    ulo = vals[np.arange(len(seg)), seg - start]
    sign = np.where(ulo > L, 1.0, -1.0)  # sign of p - L at lo
    a, b = lo.copy(), hi.copy()
    for _ in range(48):
        mid = 0.5 * (a + b)
        pm = ((coef[:, 3] * mid + coef[:, 2]) * mid + coef[:, 1]) * mid + coef[:, 0]
        same = (pm - L) * sign > 0
        a = np.where(same, mid, a)
        b = np.where(same, b, mid)
    tau = 0.5 * (a + b)
    if bad.any():
        u0 = vals[bad, seg[bad] - start[bad]]
        u1 = vals[bad, seg[bad] - start[bad] + 1]
        tau[bad] = lo[bad] + (L[bad] - u0) / (u1 - u0)
    return s[start] + h * tau


def _ray_contributions(U, s, levels, V, backend):
    """Per-ray ``sum(+-V(s*))`` for each level; shape (R, T)."""
    R = U.shape[0]
    out = np.zeros((R, levels.size))
    ray, seg, lev, down = _kernels.crossings(U, levels, backend)
    if ray.size:
        roots = _refine_roots(U, s, ray, seg, lev, levels)
        sign = np.where(down, 1.0, -1.0)
        np.add.at(out, (ray, lev), sign * V(roots))
    # rays still inside the set at s_max (cannot happen past the decay bound)
    inside = U[:, -1][:, None] > levels[None, :]
    out += inside * V(np.full(1, s[-1]))[0]
    return out


def _sample_rays(field, n, a, alpha, log_scale, center, rule, s, levels, backend, chunk_points):
    m = MobiusMap(BallPoint(center))
    rad = np.tanh(0.5 * s)
    R, S = rule.points.shape[0], s.size
    area = sphere_area(n)

    def V(x):
        return area * sinh_power_integral(n - 1, x)

    fine = np.zeros((R, levels.size))
    coarse_s = np.zeros((R, levels.size))
    umax = -np.inf
    step = max(1, chunk_points // S)
    for j0 in range(0, R, step):
        zeta = rule.points[j0:j0 + step]
        local = (zeta[:, None, :] * rad[None, :, None]).reshape(-1, n)
        pts = local if m.is_identity else m.apply(local)
        U = _log_u(field, n, a, alpha, log_scale, pts).reshape(len(zeta), S)
        umax = max(umax, float(np.nanmax(U)))
        fine[j0:j0 + step] = _ray_contributions(U, s, levels, V, backend)
        coarse_s[j0:j0 + step] = _ray_contributions(U[:, ::2], s[::2], levels, V, backend)
    return fine, coarse_s, umax


def level_measure(
    field,
    n,
    a,
    alpha,
    t_grid=None,
    *,
    m=None,
    sphere="product",
    h=0.02,
    scale=1.0,
    seed=0,
    points=200,
    decades=4.0,
    backend=None,
    chunk_points=1_000_000,
    check=True,
):
    """Superlevel measures ``mu(t) = |{|f|^a Phi_n^alpha > t}|_h`` on a grid.

    ``scale`` multiplies the field (used to normalise it to unit norm).
    ``t_grid`` defaults to ``points`` geometric levels from ``t_max`` down to
    ``t_max * 10^-decades``. Errors combine a sphere term (resolution ``m``
    against ``m/2``, or the Monte Carlo standard error) and a radial term
    (step ``h`` against ``2h``).
    """
    n = _dim(field, n)
    if a < 0:
        raise ValueError("a must be nonnegative")
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if a and not field.bounded:
        raise ProfileError("level profiles need a bounded field")
    log_scale = math.log(scale)
    center, log_tmax = locate_max(field, n, a, alpha, log_scale, seed)
    t_max = math.exp(log_tmax)
    if t_grid is None:
        t_grid = t_max * np.logspace(0.0, -decades, points)
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if np.any(t_grid <= 0):
        raise ValueError("levels must be positive")
    log_levels = np.log(t_grid)
    order = np.argsort(log_levels)
    levels = log_levels[order]
    s_max = _s_max(field, n, a, alpha, log_scale, levels[0], center)
    S = max(int(math.ceil(s_max / h)), 8)
    S += S % 2  # even count of steps so the 2h grid ends at s_max too
    s = np.linspace(0.0, S * h, S + 1)
    rule = _rule(n, m, sphere, seed)
    fine, coarse_s, umax = _sample_rays(field, n, a, alpha, log_scale, center, rule, s, levels, backend, chunk_points)
    mu_sorted = rule.weights @ fine
    err_h = np.abs(mu_sorted - rule.weights @ coarse_s)
    if rule.method == "mc":
        err_sphere = np.std(fine, axis=0, ddof=1) / math.sqrt(fine.shape[0])
    elif n == 2:
        # the even-indexed nodes form the half-resolution trapezoid rule
        err_sphere = np.abs(mu_sorted - 2.0 * rule.weights[::2] @ fine[::2])
    else:
        crule = _coarse(rule, n, seed)
        cf, _, _ = _sample_rays(field, n, a, alpha, log_scale, center, crule, s, levels, backend, chunk_points)
        err_sphere = np.abs(mu_sorted - crule.weights @ cf)
    # rounding: near the sphere 1 - |x|^2 ~ 4 e^-s carries relative error eps e^s
    s_eff = get_profile(n).radius(np.abs(mu_sorted))
    err_round = np.abs(mu_sorted) * (1e-12 + 16.0 * np.finfo(float).eps * (n - 1) * np.exp(s_eff))
    err_sorted = err_h + err_sphere + err_round
    mu = np.empty_like(mu_sorted)
    err = np.empty_like(err_sorted)
    mu[order], err[order] = mu_sorted, err_sorted
    mu = np.maximum(mu, 0.0)
    updated = umax > log_tmax + 1e-12 * max(1.0, abs(log_tmax))
    if updated:
        warnings.warn("t_max was underestimated; a larger value was found along rays", RuntimeWarning)
        t_max = math.exp(umax)
    upper = math.exp(a * (field.log_sup_bound() + log_scale)) if a else 1.0
    meta = {
        "rays": int(rule.points.shape[0]),
        "sphere": rule.method,
        "resolution": rule.resolution,
        "h": h,
        "s_max": float(s[-1]),
        "seed": seed,
        "t_max_updated": bool(updated),
        "scale": scale,
    }
    prof = LevelProfile(n, float(a), float(alpha), t_grid, mu, err, t_max, (t_max, max(upper, t_max)), center, meta)
    if check:
        viol = prof.monotone_violation()
        if viol > 0:
            raise ProfileError(f"mu increases with t by {viol:.3g} beyond its error bars")
    return prof


# --------------------------------------------------------------------------
# g(t), Lambda and Theta
# --------------------------------------------------------------------------


@dataclass
class GTable:
    """``g(t) = t exp(Lambda(mu(t)))`` with ``Lambda(v) = gamma int_0^v Upsilon``."""

    n: int
    gamma: float
    t: np.ndarray
    mu: np.ndarray
    g: np.ndarray
    g_err: np.ndarray
    lam: np.ndarray

    def Lambda(self, v):
        return self.gamma * get_profile(self.n).lam(np.asarray(v, dtype=np.float64))

    def Theta(self, y):
        """Inverse of ``Lambda``."""
        return get_profile(self.n).lam_inverse(np.asarray(y, dtype=np.float64) / self.gamma)

    def increase_violation(self):
        """Largest increase of g with t beyond the combined error bars."""
        order = np.argsort(self.t)
        g, e = self.g[order], self.g_err[order]
        excess = (g[1:] - g[:-1]) - (e[1:] + e[:-1])
        return float(excess.max()) if excess.size else -math.inf

    def relative_spread(self):
        return float((self.g.max() - self.g.min()) / self.g.mean())


def g_function(profile, n=None):
    """Tabulate ``g`` and ``Lambda(mu)`` on the profile grid, with errors."""
    n = profile.n if n is None else int(n)
    gamma = profile.gamma
    prof = get_profile(n)
    mu, err = profile.mu, profile.mu_err
    lam = gamma * prof.lam(mu)
    g = profile.t_grid * np.exp(lam)
    hi = profile.t_grid * np.exp(gamma * prof.lam(mu + err))
    lo = profile.t_grid * np.exp(gamma * prof.lam(np.maximum(mu - err, 0.0)))
    g_err = np.maximum(hi - g, g - lo)
    return GTable(n, gamma, profile.t_grid.copy(), mu.copy(), g, g_err, lam)


# --------------------------------------------------------------------------
# integrals through the distribution function
# --------------------------------------------------------------------------


def _romberg_log(y, lt):
    """Trapezoid in ``log t`` with one Romberg step; returns (value, error).

    Romberg needs a uniform grid whose interval count is a multiple of four;
    leftover intervals at the low end are summed by the plain trapezoid rule.
    """
    d = np.diff(lt)
    k = (y.size - 1) % 4
    if y.size < 9 or np.ptp(d) > 1e-9 * np.mean(d):
        T1 = float(np.trapezoid(y, lt))
        T2 = float(np.trapezoid(y[::2], lt[::2])) if (y.size - 1) % 2 == 0 else T1
        return T1, abs(T1 - T2)
    head = float(np.trapezoid(y[: k + 1], lt[: k + 1]))
    yy, ll = y[k:], lt[k:]
    T1 = float(np.trapezoid(yy, ll))
    T2 = float(np.trapezoid(yy[::2], ll[::2]))
    T4 = float(np.trapezoid(yy[::4], ll[::4]))
    R1 = T1 + (T1 - T2) / 3.0
    R2 = T2 + (T2 - T4) / 3.0
    return head + R1, abs(R1 - R2) + abs(head) * 1e-3


def profile_integral(profile, q=1.0):
    """``int u^q dtau = q / (2^n omega_n) int_0^t_max mu(t) t^(q-1) dt``.

    The grid part is integrated in ``log t`` (trapezoid plus a Romberg
    step). Below the smallest level ``mu ~ K t^(-1/alpha)``, which is how
    ``u`` decays toward the sphere, and that piece is integrated in closed
    form; its error is the drift of the fitted ``K`` over a decade of ``t``.
    """
    if not q * profile.alpha > 1:
        raise ValueError("the tail integral needs q alpha > 1")
    order = np.argsort(profile.t_grid)
    t, mu, mu_err = profile.t_grid[order], profile.mu[order], profile.mu_err[order]
    lt = np.log(t)
    y = mu * t**q
    if t[-1] < profile.t_max * (1.0 - 1e-12):
        lt = np.append(lt, math.log(profile.t_max))
        y = np.append(y, 0.0)
    main, err = _romberg_log(y, lt)
    inv = 1.0 / profile.alpha
    e = q - inv
    K = mu * t**inv
    j = min(int(np.searchsorted(t, 10.0 * t[0])), t.size - 1)
    tail = K[0] * t[0] ** e / e
    err += abs(K[0] - K[j]) * t[0] ** e / e
    err += float(np.trapezoid(mu_err * t**q, lt[: t.size]))
    c = q / tau_factor(profile.n)
    return c * (main + tail), c * err


def bergman_from_profile(profile, q=1.0):
    """The Bergman norm ``||f||_{q alpha, q a}`` from the profile of ``u``.

    ``||f||^{qa}_{q alpha, qa} = c(q alpha) int u^q dtau`` for
    ``u = |f|^a Phi_n^alpha``.
    """
    if profile.a == 0:
        raise ValueError("profile carries no field exponent")
    I, err = profile_integral(profile, q)
    scale = profile.meta.get("scale", 1.0)
    p = q * profile.a
    c = c_alpha(profile.n, q * profile.alpha)
    val = (c * I) ** (1.0 / p) / scale
    return NormReport(
        "bergman",
        {"p": p, "alpha": q * profile.alpha, "n": profile.n},
        val,
        val * err / (p * I),
        {"route": "profile", "levels": int(profile.t_grid.size)},
        profile.meta.get("seed", 0),
    )


def radial_level_oracle(n, alpha, t):
    """``|{Phi_n^alpha > t}|_h`` by bracketing root-finding on ``Phi_n``.

    Independent of the profile table: solves ``alpha log Phi_n(r) = log t``
    with ``brentq`` and integrates the ball volume adaptively.
    """
    if t >= 1:
        return 0.0
    r = optimize.brentq(lambda x: alpha * log_phi(n, x, method="series") - math.log(t), 0.0, 1.0 - 1e-15, xtol=1e-15)
    return hyperbolic_ball_volume(n, 2.0 * math.atanh(r), rtol=1e-12)


__all__ = [
    "NormReport",
    "NormError",
    "ProfileError",
    "LevelProfile",
    "GTable",
    "spherical_mean",
    "hardy_norm",
    "bergman_norm",
    "level_measure",
    "locate_max",
    "g_function",
    "mu1",
    "mu1_n2",
    "profile_integral",
    "bergman_from_profile",
    "radial_level_oracle",
    "tau_factor",
]

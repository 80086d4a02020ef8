"""Inequality suites for log-M-subharmonic fields.

Every suite returns a :class:`VerdictReport`; a check fails only when its
margin is below minus its combined error estimate. Fields are normalised to
unit norm by dividing by the computed norm, and the norm's error is carried
into the tolerance through the local slope of the level profile.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fieldlab import Constant, MobiusPullback
from .normlab import (
    bergman_norm,
    g_function,
    hardy_norm,
    level_measure,
    mu1,
    mu1_n2,
    profile_integral,
    tau_factor,
)
from .quadrature import uniform_ball
from .reports import VerdictReport
from .weightfn import c_alpha, log_phi

DEFAULT_LIMIT_ALPHAS = (1.5, 1.2, 1.1, 1.05, 1.02)
REL_FLOOR = 1e-12


def equality_expected(field, exponent):
    """Constants, and pullbacks of constants with the given Phi exponent."""
    if field.is_constant:
        return True
    return (
        isinstance(field, MobiusPullback)
        and field.child.is_constant
        and math.isclose(field.exponent, exponent, rel_tol=1e-14)
    )


# --------------------------------------------------------------------------
# transforms G
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TransformSpec:
    """An increasing transform ``G`` with ``G(0) = 0``.

    ``power``: ``t^s`` (``params = (s,)``). ``pwl``: piecewise linear with
    ``params = (knots, slopes)``, knots starting at 0 and slopes
    nondecreasing (convex). ``step``: piecewise constant with
    ``params = (points, jumps)`` and positive jumps at the points.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind == "power":
            (s,) = self.params
            if not s > 0:
                raise ValueError("power exponent must be positive")
            object.__setattr__(self, "params", (float(s),))
        elif self.kind == "pwl":
            knots, slopes = (np.asarray(x, dtype=np.float64) for x in self.params)
            if knots.size != slopes.size or knots[0] != 0 or np.any(np.diff(knots) <= 0):
                raise ValueError("pwl knots must start at 0 and increase, one slope per knot")
            if np.any(slopes < 0):
                raise ValueError("pwl slopes must be nonnegative (increasing G)")
            object.__setattr__(self, "params", (tuple(knots.tolist()), tuple(slopes.tolist())))
        elif self.kind == "step":
            pts, jumps = (np.asarray(x, dtype=np.float64) for x in self.params)
            if pts.size != jumps.size or np.any(pts <= 0) or np.any(jumps <= 0):
                raise ValueError("step points and jumps must be positive")
            object.__setattr__(self, "params", (tuple(pts.tolist()), tuple(jumps.tolist())))
        else:
            raise ValueError(f"unknown transform kind {self.kind!r}")
        grid = np.linspace(0.0, 2.0 * max(self.scale_hint(), 1.0), 257)
        vals = self(grid)
        if np.any(np.diff(vals) < -1e-12 * (1 + np.abs(vals[1:]))):
            raise ValueError("G is not increasing")

    def scale_hint(self):
        if self.kind == "power":
            return 1.0
        return float(max(self.params[0]))

    @property
    def convex(self):
        if self.kind == "power":
            return self.params[0] >= 1
        if self.kind == "pwl":
            return bool(np.all(np.diff(self.params[1]) >= 0))
        return False

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "power":
            return t ** self.params[0]
        if self.kind == "pwl":
            knots, slopes = (np.asarray(x) for x in self.params)
            ends = np.append(knots[1:], np.inf)
            seg = np.clip(t[..., None] - knots, 0.0, ends - knots)
            return seg @ slopes
        pts, jumps = (np.asarray(x) for x in self.params)
        return (t[..., None] > pts) @ jumps

    def derivative(self, t):
        """Density of ``dG`` (jumps excluded)."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "power":
            s = self.params[0]
            return s * t ** (s - 1.0)
        if self.kind == "pwl":
            knots, slopes = (np.asarray(x) for x in self.params)
            idx = np.searchsorted(knots, t, side="right") - 1
            return slopes[np.clip(idx, 0, slopes.size - 1)]
        return np.zeros_like(t)

    def breakpoints(self):
        if self.kind == "power":
            return ()
        return tuple(p for p in self.params[0] if p > 0)

    def describe(self):
        if self.kind == "power":
            return f"power s={self.params[0]!r}"
        return f"{self.kind} " + ";".join(",".join(repr(float(v)) for v in part) for part in self.params)


def stieltjes(G, t, mu, mu_err, t_lo):
    """``int mu dG~`` with ``G~(t) = G(max(t, t_lo)) - G(t_lo)``.

    ``G~`` stays increasing (and convex when ``G`` is), so the extremal
    comparisons apply to it. ``t`` must be a sorted grid starting at
    ``t_lo`` that contains the breakpoints of ``G``. Returns (value, error).
    """
    order = np.argsort(t)
    t, mu, mu_err = t[order], mu[order], mu_err[order]
    keep = t >= t_lo * (1 - 1e-15)
    t, mu, mu_err = t[keep], mu[keep], mu_err[keep]
    val, err = 0.0, 0.0
    if G.kind in ("power", "pwl"):
        # split at breakpoints so the density is smooth on each piece
        cuts = [0] + [int(np.searchsorted(t, b)) for b in G.breakpoints() if t[0] < b < t[-1]] + [t.size - 1]
        for i0, i1 in zip(cuts[:-1], cuts[1:]):
            if i1 <= i0:
                continue
            sl = slice(i0, i1 + 1)
            lt = np.log(t[sl])
            mid = 0.5 * (t[sl][:-1] + t[sl][1:]) if G.kind == "pwl" else None
            dens = G.derivative(t[sl]) if G.kind == "power" else None
            if G.kind == "pwl":
                # constant slope per piece: evaluate it inside the piece
                dens = np.full(lt.size, float(G.derivative(mid[0])))
            y = mu[sl] * dens * t[sl]
            y_err = mu_err[sl] * dens * t[sl]
            T1 = float(np.trapezoid(y, lt))
            T2 = float(np.trapezoid(y[::2], lt[::2])) if (y.size - 1) % 2 == 0 and y.size > 2 else T1
            val += T1
            err += abs(T1 - T2) + float(np.trapezoid(y_err, lt))
    else:
        pts, jumps = (np.asarray(x) for x in G.params)
        for p, h in zip(pts, jumps):
            if p < t_lo:
                continue
            k = int(np.argmin(np.abs(t - p)))
            if not math.isclose(t[k], p, rel_tol=1e-12):
                raise ValueError(f"grid lacks the step point {p}")
            val += h * mu[k]
            err += h * mu_err[k]
    return val, err


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _slope_error(t, mu, rel):
    """``|d mu / d log t| * rel``: effect of a relative level shift ``rel``."""
    order = np.argsort(t)
    lt = np.log(t[order])
    d = np.abs(np.gradient(mu[order], lt))
    out = np.empty_like(d)
    out[order] = d * rel
    return out


def _common_grid(t_hi, decades, points, extra=()):
    grid = t_hi * np.logspace(0.0, -decades, points)
    if extra:
        grid = np.unique(np.concatenate([grid, np.asarray(extra, dtype=np.float64)]))[::-1]
    return grid


def _extremal_mu(n, t, alpha):
    t = np.asarray(t, dtype=np.float64)
    if n == 2:
        return 4.0 * np.pi * np.maximum(t ** (-1.0 / alpha) - 1.0, 0.0)
    return mu1(n, t, alpha)


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------


def contraction_suite(field, n, r, alphas, hardy_kw=None, bergman_kw=None, seed=0):
    """``||f||_{beta,q} <= ||f||_{alpha,p} <= ||f||_{h^r}`` with ``p = r alpha``."""
    alphas = sorted(float(a) for a in alphas)
    if any(a <= 1 for a in alphas):
        raise ValueError("alphas must exceed 1")
    if not r > 0:
        raise ValueError("r must be positive")
    H = hardy_norm(field, r, n, seed=seed, **(hardy_kw or {}))
    norms = [H]
    for a in alphas:
        norms.append(bergman_norm(field, n, r * a, a, seed=seed, **(bergman_kw or {})))
    vals = np.array([x.value for x in norms])
    errs = np.array([x.error for x in norms])
    rep = VerdictReport(
        "contraction",
        {"n": n, "r": r, "alphas": alphas, "seed": seed, "field": field.describe()},
        quantities={"labels": ["hardy"] + [f"bergman(alpha={a:g},p={r * a:g})" for a in alphas], "norms": vals, "norm_errors": errs},
        provenance={"hardy": H.method, "bergman": norms[-1].method},
    )
    floor = REL_FLOOR * vals[:-1]
    rep.add("chain", vals[:-1] - vals[1:], errs[:-1] + errs[1:] + floor)
    if equality_expected(field, 1.0 / r):
        rep.add("equality", -np.abs(vals[:-1] - vals[1:]), errs[:-1] + errs[1:] + floor)
        rep.notes.append("equality case: constant or Mobius pullback of a constant")
    return rep


def monotone_suite(field, n, a, alpha, t_grid=None, seed=0, **level_kw):
    """``g(t) = t exp(Lambda(mu(t)))`` is nonincreasing on ``(0, t_max)``."""
    prof = level_measure(field, n, a, alpha, t_grid, seed=seed, **level_kw)
    G = g_function(prof)
    order = np.argsort(G.t)
    g, e = G.g[order], G.g_err[order]
    floor = REL_FLOOR * g
    rep = VerdictReport(
        "monotone",
        {"n": n, "a": a, "alpha": alpha, "seed": seed, "gamma": prof.gamma, "field": field.describe()},
        quantities={"t": G.t, "mu": G.mu, "g": G.g, "g_err": G.g_err, "t_max": prof.t_max},
        provenance=dict(prof.meta),
    )
    # g(t_k) - g(t_{k+1}) >= 0 for t_k < t_{k+1}
    rep.add("g_nonincreasing", g[:-1] - g[1:], e[:-1] + e[1:] + floor[:-1])
    if field.is_constant:
        rep.add("g_constant", -np.abs(g - g[-1]), e + e[-1] + floor)
    rep.add("mu_nonincreasing", np.array([-max(prof.monotone_violation(), 0.0)]), 0.0)
    return rep, G, prof


def _normalized_profile(field, n, p, alpha, norm, t_grid, seed, level_kw):
    scale = 1.0 / norm.value
    prof = level_measure(field, n, p, alpha, t_grid, scale=scale, seed=seed, **level_kw)
    # relative error of the level u: p * (norm error / norm)
    shift = _slope_error(prof.t_grid, prof.mu, p * norm.error / norm.value)
    return prof, prof.mu_err + shift


def weaktype_suite(field, n, p, seed=0, t_grid=None, decades=4.0, points=200, **level_kw):
    """``mu(t) <= mu_1(t)`` after normalising ``||f||_{h^p} = 1`` (alpha = 1)."""
    H = hardy_norm(field, p, n, seed=seed)
    if t_grid is None:
        t_grid = _common_grid(1.0, decades, points)
    prof, err = _normalized_profile(field, n, p, 1.0, H, t_grid, seed, level_kw)
    ref = _extremal_mu(n, prof.t_grid, 1.0)
    rep = VerdictReport(
        "weaktype",
        {"n": n, "p": p, "seed": seed, "field": field.describe()},
        quantities={"t": prof.t_grid, "mu": prof.mu, "mu1": ref, "hardy_norm": H.value, "hardy_error": H.error},
        provenance=dict(prof.meta),
    )
    floor = REL_FLOOR * ref
    rep.add("mu<=mu1", ref - prof.mu, err + floor)
    # the sampler applied to the extremal reproduces the closed form
    unit = level_measure(Constant(1.0), n, p, 1.0, t_grid, seed=seed, **level_kw)
    if n == 2:
        closed = mu1_n2(unit.t_grid)
        rep.add("mu1_reference", -np.abs(unit.mu - closed), 1e-6 * closed + 1e-300)
    else:
        rep.add("mu1_reference", -np.abs(unit.mu - ref), unit.mu_err + 1e-9 * ref)
    if equality_expected(field, 1.0 / p):
        rep.add("equality", -np.abs(ref - prof.mu), err + floor)
    return rep, prof


def hardy_theorem_suite(field, n, p, G, seed=0, decades=4.0, points=201, **level_kw):
    """``int G(|f|^p Phi_n) dtau <= int G(Phi_n) dtau`` under ``||f||_{h^p} = 1``.

    Both sides are Stieltjes integrals ``int mu dG`` of the level profiles,
    with ``G`` frozen below the smallest level (see :func:`stieltjes`).
    """
    H = hardy_norm(field, p, n, seed=seed)
    t_grid = _common_grid(1.0, decades, points, extra=[b for b in G.breakpoints() if b <= 1.0])
    prof, err = _normalized_profile(field, n, p, 1.0, H, t_grid, seed, level_kw)
    ref = _extremal_mu(n, prof.t_grid, 1.0)
    t_lo = float(prof.t_grid.min())
    lhs, el = stieltjes(G, prof.t_grid, prof.mu, err, t_lo)
    rhs, er = stieltjes(G, prof.t_grid, ref, REL_FLOOR * ref, t_lo)
    c = 1.0 / tau_factor(n)
    rep = VerdictReport(
        "hardy-thm",
        {"n": n, "p": p, "G": G.describe(), "t_lo": t_lo, "seed": seed, "field": field.describe()},
        quantities={"lhs": c * lhs, "rhs": c * rhs, "hardy_norm": H.value},
        provenance=dict(prof.meta),
    )
    rep.add("lhs<=rhs", c * (rhs - lhs), c * (el + er) + REL_FLOOR * c * rhs)
    if equality_expected(field, 1.0 / p):
        rep.add("equality", -abs(c * (rhs - lhs)), c * (el + er) + REL_FLOOR * c * rhs)
    return rep


def bergman_theorem_suite(field, n, p, alpha, G, seed=0, decades=4.0, points=201, **level_kw):
    """``int G(|f|^p Phi_n^alpha) dtau <= int G(Phi_n^alpha) dtau`` under
    ``||f||_{alpha,p} = 1`` for convex increasing ``G``.

    For ``G = t^s`` with ``s alpha > 1`` both sides are full integrals: the
    extremal side is ``1/c(s alpha)`` exactly and the other comes from the
    profile (with its tail model). Otherwise ``G`` is frozen below the
    smallest level.
    """
    if not G.convex:
        raise ValueError("the Bergman comparison needs a convex G")
    B = bergman_norm(field, n, p, alpha, seed=seed)
    t_grid = _common_grid(1.0, decades, points, extra=[b for b in G.breakpoints() if b <= 1.0])
    prof, err = _normalized_profile(field, n, p, alpha, B, t_grid, seed, level_kw)
    rep = VerdictReport(
        "bergman-thm",
        {"n": n, "p": p, "alpha": alpha, "G": G.describe(), "seed": seed, "field": field.describe()},
        provenance=dict(prof.meta),
    )
    if G.kind == "power" and G.params[0] * alpha > 1:
        s = G.params[0]
        prof.mu_err = err
        lhs, el = profile_integral(prof, q=s)
        rhs, er = 1.0 / c_alpha(n, s * alpha, nodes=128), 0.0
        # the norm's own error shifts the full integral by s p (dN/N)
        el += lhs * s * p * B.error / B.value
        rep.notes.append("full integrals (power G)")
    else:
        ref = _extremal_mu(n, prof.t_grid, alpha)
        t_lo = float(prof.t_grid.min())
        c = 1.0 / tau_factor(n)
        lhs, el = (c * x for x in stieltjes(G, prof.t_grid, prof.mu, err, t_lo))
        rhs, er = (c * x for x in stieltjes(G, prof.t_grid, ref, REL_FLOOR * ref, t_lo))
        rep.params["t_lo"] = t_lo
    rep.quantities = {"lhs": lhs, "rhs": rhs, "bergman_norm": B.value}
    if G.kind == "power" and G.params[0] == 1:
        # G linear: both sides are 1/c(alpha) by the norm constraint itself
        rep.add("norm_constraint", -abs(rhs - lhs), el + er + REL_FLOOR * abs(rhs))
    rep.add("lhs<=rhs", rhs - lhs, el + er + REL_FLOOR * abs(rhs))
    if equality_expected(field, alpha / p):
        rep.add("equality", -abs(rhs - lhs), el + er + REL_FLOOR * abs(rhs))
    return rep


# --------------------------------------------------------------------------
# rearrangement lemma
# --------------------------------------------------------------------------


@dataclass
class LemmaReport:
    lhs: float
    rhs: float
    constraint_residual: float
    scale: float
    tolerance: float

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def passed(self):
        return self.margin >= -self.tolerance


def enforce_constraint(phi, g, t, w, tol=1e-13):
    """Scale ``g`` by ``lambda`` so that ``sum phi(lambda g/t) w = sum phi(1/t) w``.

    The left side increases with ``lambda``; the root is bracketed and found
    by bisection. Raises ``ValueError`` when no bracket exists.
    """
    target = float(np.dot(phi(1.0 / t), w))

    def F(lam):
        return float(np.dot(phi(lam * g / t), w)) - target

    lo, hi = 1.0, 1.0
    while F(lo) > 0:
        lo *= 0.5
        if lo < 1e-12:
            raise ValueError("constraint cannot be met (no lower bracket)")
    while F(hi) < 0:
        hi *= 2.0
        if hi > 1e12:
            raise ValueError("constraint cannot be met (no upper bracket)")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if F(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    lam = 0.5 * (lo + hi)
    return lam, F(lam)


def rearrangement_lemma_oracle(phi, psi, g, t, w=None, constrain=True):
    """Brute-force check of the rearrangement lemma on a discrete measure.

    ``phi``, ``psi`` increasing positive callables; ``g`` nonincreasing
    positive samples on the grid ``t`` with weights ``w``. If ``constrain``
    the time scale of ``g`` is adjusted to meet the equal-integral
    condition; otherwise a violated condition is rejected.
    """
    t = np.asarray(t, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    w = np.full(t.size, 1.0 / t.size) if w is None else np.asarray(w, dtype=np.float64)
    if np.any(np.diff(t) <= 0) or np.any(t <= 0):
        raise ValueError("t must be positive and increasing")
    if np.any(g <= 0) or np.any(np.diff(g) > 0):
        raise ValueError("g must be positive and nonincreasing")
    base = phi(1.0 / t)
    if constrain:
        lam, resid = enforce_constraint(phi, g, t, w)
    else:
        lam = 1.0
        resid = float(np.dot(phi(g / t), w) - np.dot(base, w))
        if abs(resid) > 1e-10 * float(np.dot(base, w)):
            raise ValueError(f"equal-integral condition violated by {resid:.3g}")
    ps = psi(t)
    lhs = float(np.dot(phi(lam * g / t) * ps, w))
    rhs = float(np.dot(base * ps, w))
    # a residual eps in the constraint moves the bound by at most eps * max psi
    tol = abs(resid) * float(ps.max()) + 1e-12 * abs(rhs)
    return LemmaReport(lhs, rhs, resid, lam, tol)


def _random_increasing(rng):
    kind = rng.integers(3)
    if kind == 0:
        k = rng.uniform(0.3, 3.0)
        return lambda s: np.asarray(s, dtype=np.float64) ** k
    if kind == 1:
        k = rng.uniform(0.05, 1.0)
        return lambda s: np.log1p(k * np.asarray(s, dtype=np.float64))
    knots = np.sort(rng.uniform(0.0, 20.0, 6))
    heights = np.cumsum(rng.uniform(0.0, 1.0, 6))
    return lambda s: 1e-3 + np.interp(s, knots, heights)


def lemma_trials(trials=1000, seed=0, size=64):
    """Random constrained instances; returns a VerdictReport."""
    rng = np.random.default_rng(seed)
    margins, tols = [], []
    for _ in range(trials):
        t_max = rng.uniform(0.5, 2.0)
        t = np.sort(rng.uniform(0.01, t_max, size))
        t = np.unique(t)
        w = rng.uniform(0.1, 1.0, t.size)
        g = np.sort(rng.uniform(0.2, 5.0, t.size))[::-1]
        steps = rng.integers(1, 6)
        idx = np.sort(rng.choice(t.size, steps, replace=False))
        g = np.repeat(g[idx], np.diff(np.append(idx, t.size)))
        g = np.concatenate([np.full(idx[0], g[0]), g])[: t.size]
        phi, psi = _random_increasing(rng), _random_increasing(rng)
        rep = rearrangement_lemma_oracle(phi, psi, g, t, w)
        margins.append(rep.margin)
        tols.append(rep.tolerance)
    phi0 = _random_increasing(rng)
    psi0 = _random_increasing(rng)
    t = np.linspace(0.05, 1.0, 40)
    eq = rearrangement_lemma_oracle(phi0, psi0, np.ones(t.size), t)
    out = VerdictReport("lemma", {"trials": trials, "seed": seed, "size": size})
    out.add("inequality", np.array(margins), np.array(tols))
    out.add("equality_g1", -abs(eq.margin), eq.tolerance + 1e-13 * abs(eq.rhs))
    out.quantities = {"min_margin": float(np.min(margins)), "equality_margin": eq.margin}
    return out


def lemma_from_pipeline(G, psi=None):
    """Apply the lemma with ``Phi(s) = Theta(log s)`` from an actual g table."""
    t = np.sort(G.t)
    g = G.g[np.argsort(G.t)]
    g = np.minimum.accumulate(g[::-1])[::-1]  # clip rounding-level increases
    w = np.gradient(t)

    def phi(s):
        y = np.log(np.asarray(s, dtype=np.float64))
        out = np.zeros_like(y)
        pos = y > 0
        out[pos] = G.Theta(y[pos])
        return out + 1e-300

    psi = psi or (lambda x: np.asarray(x, dtype=np.float64))
    return rearrangement_lemma_oracle(phi, psi, g / g[-1] if g[-1] > 0 else g, t, w)


# --------------------------------------------------------------------------
# limits
# --------------------------------------------------------------------------


def limit_suite(field, n, p, alphas=DEFAULT_LIMIT_ALPHAS, seed=0, samples=1000, bergman_kw=None):
    """``||f||_{alpha,p}`` increases to ``||f||_p`` as ``alpha -> 1+``.

    Also checks ``||f||_{alpha, alpha p} <= ||f||_p`` and reports the empirical
    constant ``C_1 = max |f|^p Phi_n / ||f||_p^p`` over random points.
    """
    alphas = sorted((float(a) for a in alphas), reverse=True)
    H = hardy_norm(field, p, n, seed=seed)
    kw = bergman_kw or {}
    seq = [bergman_norm(field, n, p, a, seed=seed, **kw) for a in alphas]
    seq_ap = [bergman_norm(field, n, a * p, a, seed=seed, **kw) for a in alphas]
    v = np.array([x.value for x in seq])
    e = np.array([x.error for x in seq])
    vap = np.array([x.value for x in seq_ap])
    eap = np.array([x.error for x in seq_ap])
    rep = VerdictReport(
        "limits",
        {"n": n, "p": p, "alphas": alphas, "seed": seed, "field": field.describe()},
        quantities={"hardy": H.value, "bergman": v, "bergman_errors": e, "bergman_alpha_p": vap},
    )
    floor = REL_FLOOR * H.value
    rep.add("below_hardy", H.value - v, e + H.error + floor)
    rep.add("below_hardy_alpha_p", H.value - vap, eap + H.error + floor)
    rep.add("monotone_in_alpha", v[1:] - v[:-1], e[1:] + e[:-1] + floor)
    if len(alphas) >= 2:
        a1, a2 = alphas[-1] - 1.0, alphas[-2] - 1.0
        extrap = v[-1] + (v[-1] - v[-2]) * a1 / (a2 - a1)
        rep.quantities["extrapolated_limit"] = extrap
        step = abs(extrap - v[-1])
        rep.add("limit_matches_hardy", -abs(extrap - H.value), step + e[-1] + e[-2] + H.error + floor)
    # empirical pointwise constant
    rng = np.random.default_rng(seed)
    pts = uniform_ball(n, samples, rng, rmax=0.99)
    r = np.linalg.norm(pts, axis=1)
    vals = np.exp(p * np.asarray(field.log_abs(pts)) + log_phi(n, r)) / H.value**p
    rep.quantities["C1_empirical"] = float(vals.max())
    rep.notes.append("C1 is an empirical supremum over sampled points, not asserted")
    return rep


__all__ = [
    "TransformSpec",
    "stieltjes",
    "equality_expected",
    "contraction_suite",
    "monotone_suite",
    "weaktype_suite",
    "hardy_theorem_suite",
    "bergman_theorem_suite",
    "rearrangement_lemma_oracle",
    "enforce_constraint",
    "lemma_trials",
    "lemma_from_pipeline",
    "limit_suite",
    "LemmaReport",
    "VerdictReport",
]

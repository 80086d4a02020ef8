"""The radial weight Phi_n, the family u_b, the constant E_n and c(alpha).

``u_b`` solves ``Delta_h log u = -4b`` radially:

    log u_b(r) = b (2-n) r^2 / ((n-1) n) * F[1, 1, 2-n/2; 2, 1+n/2; r^2]
                 + b / (n-1) * log(1 - r^2)

and ``Phi_n = u_{(n-1)^2}``. Two evaluation routes are provided:

* the series route sums the hypergeometric series directly;
* the profile route uses the identity ``log u_b(r) = -b L(s)`` where
  ``s = 2 artanh r`` is the hyperbolic distance to the origin and
  ``L(s) = int_0^s V_sigma / P_sigma d sigma`` comes from the isoperimetric
  profile table. It is exact to rounding for every ``r < 1``.

For even ``n`` the series terminates and is always used. For odd ``n`` the
series is used for ``r^2 <= 1/2`` and the profile route beyond, where the
series converges slowly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .ballgeo import get_profile
from .quadrature import gauss_jacobi_01, gauss_legendre_01
from .specfun import HypergeometricSpec, SeriesError, gauss_F0_array, series_F, series_F_array

PHI_SERIES_TOL = 1e-16
_SERIES_CUTOFF = 0.5


@dataclass(frozen=True)
class WeightSpec:
    """Dimension ``n`` and exponent ``b`` of the weight ``u_b``."""

    n: int
    b: float
    tol: float = PHI_SERIES_TOL

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")
        if not self.b >= 0:
            raise ValueError("b must be nonnegative")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def phi(cls, n):
        return cls(n, (n - 1) ** 2)


def _weight_series_spec(n, tol=PHI_SERIES_TOL):
    return HypergeometricSpec((1.0, 1.0, 2.0 - n / 2.0), (2.0, 1.0 + n / 2.0), tol=tol)


def _terminates(n):
    return n % 2 == 0


def weight_exponent_series(n, t, tol=PHI_SERIES_TOL, backend=None):
    """(2-n)/n * t * F[1, 1, 2-n/2; 2, 1+n/2; t] for t = r^2 in [0, 1)."""
    t = np.asarray(t, dtype=np.float64)
    if n == 2:
        return np.zeros_like(t)
    if n == 4:
        return -0.5 * t
    vals, _ = series_F_array(_weight_series_spec(n, tol), t, backend=backend, strict=False)
    return (2.0 - n) / n * t * vals


def log_u_b(spec, r, method="auto"):
    """log u_b(r), vectorized over r in [0, 1).

    ``method``: ``"auto"``, ``"series"`` (always sum the series) or
    ``"profile"`` (always use the isoperimetric-profile identity).
    """
    n, b = spec.n, spec.b
    r = np.asarray(r, dtype=np.float64)
    if np.any(r < 0) or np.any(r >= 1):
        raise ValueError("r must lie in [0, 1)")
    if b == 0.0:
        return np.zeros_like(r) if r.ndim else 0.0
    t = r * r
    out = np.empty_like(t)
    flat_t, flat_r, flat = t.ravel(), r.ravel(), out.ravel()
    if method == "series" or _terminates(n):
        use_series = np.ones(flat_t.shape, dtype=bool)
    elif method == "profile":
        use_series = np.zeros(flat_t.shape, dtype=bool)
    elif method == "auto":
        use_series = flat_t <= _SERIES_CUTOFF
    else:
        raise ValueError(f"unknown method {method!r}")
    if use_series.any():
        ts = flat_t[use_series]
        pref = weight_exponent_series(n, ts, spec.tol) * (b / (n - 1))
        flat[use_series] = pref + b / (n - 1) * np.log1p(-ts)
    rest = ~use_series
    if rest.any():
        s = 2.0 * np.arctanh(flat_r[rest])
        flat[rest] = -b * get_profile(n).L(s)
    return out if r.ndim else float(out)


def u_b(spec, r, method="auto"):
    """The weight u_b(r)."""
    return np.exp(log_u_b(spec, r, method))


def log_phi(n, r, method="auto"):
    """log Phi_n(r) computed in log space (no underflow near r = 1)."""
    return log_u_b(WeightSpec.phi(n), r, method)


def phi(n, r, method="auto"):
    """Phi_n(r); equals 1 - r^2 for n = 2."""
    return np.exp(log_phi(n, r, method))


def phi_prefactor(n, r):
    """log Phi_n(r) - (n-1) log(1 - r^2), the smooth bounded exponent."""
    r = np.asarray(r, dtype=np.float64)
    return log_phi(n, r) - (n - 1) * np.log1p(-r * r)


@lru_cache(maxsize=None)
def _e_constant_cached(n, tol):
    if n == 2:
        return 1.0, 0.0
    if _terminates(n):
        res = series_F(_weight_series_spec(n, tol), 1.0)
        return math.exp((n - 1) * (2 - n) / n * res.value), 0.0
    res = series_F(_weight_series_spec(n, 1e-13), 1.0)
    k = (n - 1) * (2 - n) / n
    val = math.exp(k * res.value)
    return val, abs(k) * val * res.error


def e_constant(n, with_error=False, tol=1e-13):
    """E_n = exp{(n-1)(2-n)/n * F[1, 1, 2-n/2; 2, 1+n/2; 1]}.

    The lower constant in ``E_n (1-r^2)^{n-1} <= Phi_n(r) <= (1-r^2)^{n-1}``.
    """
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    val, err = _e_constant_cached(int(n), tol)
    return (val, err) if with_error else val


class DivergenceError(ArithmeticError):
    """The Bergman-type radial integral diverges."""


def radial_exponent(n, alpha):
    """kappa = alpha (n-1) - n; the radial weight behaves like (1-r^2)^kappa."""
    return alpha * (n - 1) - n


def radial_rule(n, alpha, nodes=64):
    """Quadrature for ``int_B F(|x|) Phi^alpha (1-|x|^2)^{-n} dV / omega_n``.

    Returns ``(r, weights)`` such that the integral equals
    ``sum(weights * F(r))`` for smooth ``F``. The substitution
    ``w = 1 - r^2`` turns the measure into
    ``(n/2) w^kappa (1-w)^{(n-2)/2} exp(alpha * prefactor) dw``, handled
    by Gauss-Jacobi with the algebraic endpoint factors built in.
    """
    kappa = radial_exponent(n, alpha)
    if not kappa > -1.0:
        raise DivergenceError(
            f"alpha (n-1) - n = {kappa:.6g} <= -1: weighted integral diverges"
        )
    w, wt = gauss_jacobi_01(int(nodes), float(kappa), (n - 2) / 2.0)
    r = np.sqrt(1.0 - w)
    weights = 0.5 * n * wt * np.exp(alpha * phi_prefactor(n, r))
    return r, weights


def c_alpha(n, alpha, nodes=64, with_error=False):
    """Bergman normalization c(alpha) with ``1/c = int_B Phi^alpha dtau``.

    ``dtau = (1-|x|^2)^{-n} dV / omega_n``. For ``n = 2``, ``c = alpha - 1``.
    """
    if not alpha > 1:
        raise ValueError("c(alpha) needs alpha > 1")
    _, wts = radial_rule(n, alpha, nodes)
    inv = wts.sum()
    if not with_error:
        return 1.0 / inv
    _, wts2 = radial_rule(n, alpha, max(nodes // 2, 4))
    err = abs(1.0 / inv - 1.0 / wts2.sum())
    return 1.0 / inv, err


@dataclass
class OracleTable:
    r: np.ndarray
    log_u_closed: np.ndarray
    log_u_ode: np.ndarray
    max_deviation: float


def radial_ode_oracle(spec, r_grid, panel_nodes=20):
    """Rebuild log u_b by integrating its radial ODE solution.

    The bounded solution of the radial equation has derivative
    ``h(r) = -4 b r F0[1, 1-n/2; 1+n/2; r^2] / (n (1 - r^2))`` where
    ``F0`` is the Gauss function; ``log u_b(r) = int_0^r h``. Each grid
    interval is integrated with a Gauss-Legendre panel, and the running
    sum is compared with the closed form.
    """
    n, b = spec.n, spec.b
    r = np.asarray(r_grid, dtype=np.float64)
    if np.any(np.diff(r) < 0) or r.size == 0 or r[0] < 0 or r[-1] >= 1:
        raise ValueError("r_grid must be nondecreasing in [0, 1)")
    closed = np.asarray(log_u_b(spec, r), dtype=np.float64)
    if b == 0.0:
        return OracleTable(r, closed, np.zeros_like(r), float(np.max(np.abs(closed))))
    x, w = gauss_legendre_01(panel_nodes)
    edges = np.concatenate(([0.0], r))
    a, c = edges[:-1], edges[1:]
    nodes = a[:, None] + (c - a)[:, None] * x[None, :]
    z = nodes * nodes
    f0 = gauss_F0_array(1.0, 1.0 - n / 2.0, 1.0 + n / 2.0, z, tol=1e-16)
    h = -4.0 * b * nodes * f0 / (n * (1.0 - z))
    pieces = (c - a) * (h @ w)
    ode = np.cumsum(pieces)
    return OracleTable(r, closed, ode, float(np.max(np.abs(ode - closed))))


def sandwich_margins(n, r):
    """Lower and upper margins of ``E_n (1-r^2)^{n-1} <= Phi_n <= (1-r^2)^{n-1}``
    in log space: ``(log Phi - log lower, log upper - log Phi)``."""
    r = np.asarray(r, dtype=np.float64)
    lp = log_phi(n, r)
    lw = (n - 1) * np.log1p(-r * r)
    return lp - (math.log(e_constant(n)) + lw), lw - lp


def c_alpha_quad(n, alpha):
    """Independent check of 1/c(alpha) by adaptive quadrature in r (scipy)."""
    kappa = radial_exponent(n, alpha)
    if not kappa > -1.0:
        raise DivergenceError("integral diverges")

    def f(r):
        return n * r ** (n - 1) * math.exp(alpha * log_phi(n, r) - n * math.log1p(-r * r))

    val, _ = integrate.quad(f, 0.0, 1.0, limit=400, epsabs=0.0, epsrel=1e-11)
    return 1.0 / val


__all__ = [
    "WeightSpec",
    "SeriesError",
    "DivergenceError",
    "log_u_b",
    "u_b",
    "log_phi",
    "phi",
    "phi_prefactor",
    "e_constant",
    "c_alpha",
    "c_alpha_quad",
    "radial_rule",
    "radial_exponent",
    "radial_ode_oracle",
    "sandwich_margins",
    "weight_exponent_series",
]

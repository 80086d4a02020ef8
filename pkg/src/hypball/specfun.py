"""Generalized hypergeometric series with truncation control, plus gamma/beta.

The series used throughout is

    F[a1..ap; b1..bq; t] = sum_k (a1)_k ... (ap)_k / (k! (b1)_k ... (bq)_k) t^k

with ``p = q + 1``. Summation stops once three consecutive terms are below
``tol`` relative to the running sum; the reported error is a geometric tail
bound. At ``t = 1`` the terms decay only algebraically, so partial sums at
doubling cut-offs are Richardson-extrapolated in powers of ``1/K``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gamma, rgamma

from . import _kernels

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 100_000


class SeriesError(ArithmeticError):
    """Raised when a series cannot be summed to the requested tolerance."""


def _is_nonpositive_int(x):
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameter block of a hypergeometric series."""

    numerators: tuple
    denominators: tuple
    tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        object.__setattr__(self, "numerators", tuple(float(a) for a in self.numerators))
        object.__setattr__(self, "denominators", tuple(float(b) for b in self.denominators))
        for b in self.denominators:
            if _is_nonpositive_int(b):
                raise ValueError(f"denominator parameter {b} is a nonpositive integer")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    @property
    def excess(self):
        """sum(denominators) - sum(numerators); t = 1 converges iff > 0."""
        return sum(self.denominators) - sum(self.numerators)

    @property
    def terminating(self):
        return any(_is_nonpositive_int(a) for a in self.numerators)


@dataclass
class SeriesResult:
    value: float
    error: float
    n_terms: int
    extras: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.value
        yield self.error


def pochhammer(a, k):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    out = 1
    for j in range(int(k)):
        out *= a + j
    if isinstance(out, float) and math.isinf(out):
        raise OverflowError(f"pochhammer({a}, {k}) overflows")
    return out


def beta(a, b):
    """Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    if a <= 0 or b <= 0:
        raise ValueError("beta requires positive arguments")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def _sum_at_one(spec, backend=None):
    s = spec.excess
    if not s > 0:
        raise SeriesError(f"series diverges at t=1 (parameter excess {s:.6g} <= 0)")
    k0 = 64
    checkpoints = []
    K = k0
    while K <= spec.max_terms:
        checkpoints.append(K)
        K *= 2
    if len(checkpoints) < 2:
        checkpoints = [max(1, spec.max_terms // 2), spec.max_terms]
    sums = _kernels.partial_sums_at(spec.numerators, spec.denominators, 1.0, checkpoints, backend)
    # Richardson table; error of S_K ~ sum_i c_i K^-(s+i)
    table = [[sums[0]]]
    best, err = sums[0], math.inf
    for j in range(1, len(sums)):
        row = [sums[j]]
        for i in range(1, j + 1):
            factor = 2.0 ** (s + i - 1)
            row.append(row[i - 1] + (row[i - 1] - table[j - 1][i - 1]) / (factor - 1.0))
        new_err = abs(row[-1] - table[j - 1][-1])
        table.append(row)
        if new_err < err:
            best, err = row[-1], new_err
        if err <= spec.tol * abs(best):
            return SeriesResult(best, err, checkpoints[j], {"method": "richardson"})
    if err <= 1e3 * spec.tol * abs(best):
        return SeriesResult(best, err, checkpoints[-1], {"method": "richardson"})
    raise SeriesError(f"t=1 summation reached max_terms with error {err:.3g}")


def series_F(spec, t, backend=None, strict=True):
    """Sum the hypergeometric series of ``spec`` at scalar ``t`` in (-1, 1].

    Returns a :class:`SeriesResult` (unpacks as ``value, error``).
    """
    t = float(t)
    if not -1.0 < t <= 1.0:
        raise ValueError("t must lie in (-1, 1]")
    if t == 1.0 and not spec.terminating:
        if len(spec.numerators) != len(spec.denominators) + 1:
            raise ValueError("t = 1 summation needs p = q + 1 parameters")
        return _sum_at_one(spec, backend)
    val, bound, nterms, ok = _kernels.pfq_batch(
        spec.numerators, spec.denominators, np.array([t]), spec.tol, spec.max_terms, backend=backend
    )
    if strict and not ok[0]:
        raise SeriesError(f"max_terms={spec.max_terms} exceeded before reaching tol at t={t}")
    return SeriesResult(float(val[0]), float(bound[0]), int(nterms[0]))


def series_F_array(spec, t, backend=None, strict=True):
    """Vectorized :func:`series_F` for t in (-1, 1); returns (values, bounds)."""
    t = np.asarray(t, dtype=np.float64)
    flat = t.ravel()
    if flat.size and (flat.max() >= 1.0 or flat.min() <= -1.0):
        raise ValueError("series_F_array requires |t| < 1")
    val, bound, _, ok = _kernels.pfq_batch(
        spec.numerators, spec.denominators, flat, spec.tol, spec.max_terms, backend=backend
    )
    if strict and not ok.all():
        raise SeriesError("max_terms exceeded for some arguments")
    return val.reshape(t.shape), bound.reshape(t.shape)


def F3(a, b, c, u, v, t, tol=DEFAULT_TOL, max_terms=DEFAULT_MAX_TERMS):
    """The three-over-two series F[a, b, c; u, v; t] as a plain float."""
    return series_F(HypergeometricSpec((a, b, c), (u, v), tol, max_terms), t).value


def gauss_F0(a, b, c, z, tol=DEFAULT_TOL, max_terms=DEFAULT_MAX_TERMS):
    """Gauss function 2F1(a, b; c; z) by direct summation, z in [0, 1]."""
    if _is_nonpositive_int(c):
        raise ValueError("c must not be a nonpositive integer")
    if not 0.0 <= z <= 1.0:
        raise ValueError("z must lie in [0, 1]")
    if z == 1.0 and not (_is_nonpositive_int(a) or _is_nonpositive_int(b)):
        if not c - a - b > 0:
            raise SeriesError("2F1 diverges at z=1 unless c - a - b > 0")
        return float(gamma(c) * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b))
    return series_F(HypergeometricSpec((a, b), (c,), tol, max_terms), z).value


def gauss_F0_euler(a, b, c, z):
    """2F1 via the Euler integral; valid for c > b > 0 and z < 1.

    Returns ``(value, quadrature_error)``.
    """
    if not c > b > 0:
        raise ValueError("Euler integral needs c > b > 0")
    if not z < 1.0:
        raise ValueError("Euler integral needs z < 1")
    w = integrate.quad(
        lambda x: (1.0 - z * x) ** (-a),
        0.0,
        1.0,
        weight="alg",
        wvar=(b - 1.0, c - b - 1.0),
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    B = beta(b, c - b)
    return w[0] / B, w[1] / B


def gauss_F0_array(a, b, c, z, tol=DEFAULT_TOL, max_terms=DEFAULT_MAX_TERMS, backend=None):
    """Vectorized 2F1(a, b; c; z) for z in [0, 1)."""
    spec = HypergeometricSpec((a, b), (c,), tol, max_terms)
    return series_F_array(spec, z, backend=backend, strict=False)[0]

"""Planar (n = 2) consequences: harmonic mappings ``f = a + conj(b)``.

Disk integrals with the weight ``(1-|z|^2)^(alpha-2)`` are computed in
``w = 1 - r^2`` by Gauss-Jacobi (exponent ``alpha - 2`` built in) times the
trapezoid rule in the angle; boundary means use the trapezoid rule on the
circle. For polynomial mappings both are exact up to rounding on ``|f|^2``
and spectrally accurate on smooth powers of it.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .quadrature import gauss_jacobi_01
from .reports import VerdictReport

CIRCLE_NODES = 2**12
AREA_RADIAL = 256
AREA_ANGULAR = 512

MINIMAL_SURFACE_NOTE = "p = alpha = 2: this is the isoperimetric inequality for minimal surfaces"


@dataclass(frozen=True)
class HarmonicMapping:
    """``f(z) = sum a_k z^k + conj(sum b_k z^k)`` with ``b_0 = 0``."""

    a_coeffs: tuple
    b_coeffs: tuple = (0j,)

    def __post_init__(self):
        a = np.array(self.a_coeffs, dtype=np.complex128).ravel()
        b = np.array(self.b_coeffs if len(self.b_coeffs) else [0.0], dtype=np.complex128).ravel()
        if a.size == 0:
            raise ValueError("a_coeffs must be nonempty")
        if b[0] != 0:
            raise ValueError("b_0 must vanish")
        N = max(a.size, b.size)
        a = np.pad(a, (0, N - a.size))
        b = np.pad(b, (0, N - b.size))
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a_coeffs", a)
        object.__setattr__(self, "b_coeffs", b)

    @property
    def degree(self):
        return self.a_coeffs.size - 1

    @property
    def tail_bound(self):
        """Coefficients beyond the stored degree are zero."""
        return 0.0

    @staticmethod
    def _poly(c, z):
        out = np.zeros_like(z, dtype=np.complex128)
        for ck in c[::-1]:
            out = out * z + ck
        return out

    def a(self, z):
        return self._poly(self.a_coeffs, np.asarray(z, dtype=np.complex128))

    def b(self, z):
        return self._poly(self.b_coeffs, np.asarray(z, dtype=np.complex128))

    def da(self, z):
        k = np.arange(1, self.a_coeffs.size)
        return self._poly(k * self.a_coeffs[1:], np.asarray(z, dtype=np.complex128))

    def db(self, z):
        k = np.arange(1, self.b_coeffs.size)
        return self._poly(k * self.b_coeffs[1:], np.asarray(z, dtype=np.complex128))

    def __call__(self, z):
        return self.a(z) + np.conj(self.b(z))

    def modulus(self, z):
        return np.abs(self(z))

    def ab_norm(self, z):
        """``sqrt(|a|^2 + |b|^2)``, whose log is subharmonic."""
        return np.sqrt(np.abs(self.a(z)) ** 2 + np.abs(self.b(z)) ** 2)

    def jacobian(self, z):
        """``J_f = |a'|^2 - |b'|^2``."""
        return np.abs(self.da(z)) ** 2 - np.abs(self.db(z)) ** 2

    def scaled(self, c):
        return HarmonicMapping(self.a_coeffs * c, self.b_coeffs * c)

    @classmethod
    def from_csv(cls, path_or_text):
        """Rows ``k, Re a_k, Im a_k, Re b_k, Im b_k`` (header optional)."""
        try:
            with open(path_or_text, newline="") as fh:
                text = fh.read()
        except (OSError, ValueError):
            text = path_or_text
        rows = []
        for rec in csv.reader(text.splitlines()):
            if not rec or rec[0].strip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in rec[:5]])
            except ValueError:
                if rows:
                    raise
                continue  # header
        if not rows:
            raise ValueError("no coefficient rows found")
        K = int(max(r[0] for r in rows)) + 1
        a = np.zeros(K, dtype=np.complex128)
        b = np.zeros(K, dtype=np.complex128)
        for r in rows:
            if len(r) != 5 or r[0] < 0 or r[0] != int(r[0]):
                raise ValueError(f"bad coefficient row {r}")
            k = int(r[0])
            a[k] = complex(r[1], r[2])
            b[k] = complex(r[3], r[4])
        return cls(tuple(a), tuple(b))

    def to_csv(self):
        lines = ["k,re_a,im_a,re_b,im_b"]
        for k, (ak, bk) in enumerate(zip(self.a_coeffs, self.b_coeffs)):
            lines.append(",".join([str(k)] + [repr(float(v)) for v in (ak.real, ak.imag, bk.real, bk.imag)]))
        return "\n".join(lines) + "\n"


def random_mapping(seed, N=16, decay=2.0, analytic=False):
    """Complex Gaussian coefficients scaled by ``k^-decay``; ``b_0 = 0``."""
    rng = np.random.default_rng(seed)
    k = np.maximum(np.arange(N + 1), 1).astype(float) ** -decay
    a = (rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)) / math.sqrt(2) * k
    b = (rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)) / math.sqrt(2) * k
    b[0] = 0
    if analytic:
        b[:] = 0
    return HarmonicMapping(tuple(a), tuple(b))


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


def circle_mean(F, nodes=CIRCLE_NODES):
    """``int_0^2pi F(e^{i theta}) d theta / 2 pi`` by the trapezoid rule."""
    th = 2.0 * np.pi * np.arange(nodes) / nodes
    return float(np.mean(F(np.exp(1j * th))))


def hardy_p(F, p, nodes=CIRCLE_NODES):
    """``(mean |F|^p on the circle)^(1/p)`` with an error from half the nodes."""
    v1 = circle_mean(lambda z: np.abs(F(z)) ** p, nodes)
    v2 = circle_mean(lambda z: np.abs(F(z)) ** p, nodes // 2)
    val = v1 ** (1.0 / p)
    return val, val * abs(v1 - v2) / (p * v1)


def disk_weighted_mean(F, alpha, radial=AREA_RADIAL, angular=AREA_ANGULAR):
    """``(alpha-1) int_D F (1-|z|^2)^(alpha-2) dA / pi`` (alpha > 1).

    With ``w = 1 - r^2`` this is ``(alpha-1) int_0^1 w^(alpha-2) M(w) dw``
    where ``M`` is the circle mean of ``F`` at radius ``sqrt(1-w)``.
    """
    if not alpha > 1:
        raise ValueError("alpha must exceed 1")
    w, wt = gauss_jacobi_01(int(radial), float(alpha - 2.0), 0.0)
    r = np.sqrt(1.0 - w)
    th = 2.0 * np.pi * np.arange(angular) / angular
    z = r[:, None] * np.exp(1j * th)[None, :]
    means = np.mean(F(z), axis=1)
    return float((alpha - 1.0) * np.dot(wt, means))


def disk_mean_with_error(F, alpha, radial=AREA_RADIAL, angular=AREA_ANGULAR):
    v1 = disk_weighted_mean(F, alpha, radial, angular)
    v2 = disk_weighted_mean(F, alpha, radial // 2, angular // 2)
    return v1, abs(v1 - v2)


# --------------------------------------------------------------------------
# coefficient inequalities
# --------------------------------------------------------------------------


def binom_weight(p, k):
    """``binom(k + 2/p - 1, k)`` through log-gamma."""
    if not p > 0:
        raise ValueError("p must be positive")
    k = np.asarray(k)
    if np.any(k < 0):
        raise ValueError("k must be nonnegative")
    s = 2.0 / p
    out = np.exp(gammaln(k + s) - gammaln(k + 1.0) - gammaln(s))
    return out if out.ndim else float(out)


def coefficient_sum(f, p):
    """``sum (|a_k|^2 + |b_k|^2) / binom(k + 2/p - 1, k)``."""
    k = np.arange(f.a_coeffs.size)
    c = np.abs(f.a_coeffs) ** 2 + np.abs(f.b_coeffs) ** 2
    return float(math.fsum(c / binom_weight(p, k)))


def parseval_check(f, p, radial=AREA_RADIAL, angular=AREA_ANGULAR):
    """``(area-quadrature ||f||^2_{2/p,2}, coefficient sum)``."""
    area = disk_weighted_mean(lambda z: np.abs(f(z)) ** 2, 2.0 / p, radial, angular)
    return area, coefficient_sum(f, p)


def coefficient_inequality_check(f, p, nodes=CIRCLE_NODES):
    """Coefficient bounds against two boundary norms (1 < p < 2).

    ``LHS = sum (|a_k|^2+|b_k|^2)/c(k)`` equals ``||f||^2_{2/p,2}``; it is
    bounded by ``RHS1 = ||sqrt(|a|^2+|b|^2)||_p^2`` (the contraction into
    the weighted space) and by ``RHS2 = ||f||_p^2 / (1 - |cos(pi/p)|)``.
    """
    if not 1 < p < 2:
        raise ValueError("coefficient inequalities need 1 < p < 2")
    lhs = coefficient_sum(f, p)
    area, _ = parseval_check(f, p)
    h1, e1 = hardy_p(f.ab_norm, p, nodes)
    h2, e2 = hardy_p(f, p, nodes)
    k = 1.0 - abs(math.cos(math.pi / p))
    rhs1, rhs2 = h1**2, h2**2 / k
    rep = VerdictReport(
        "coeff",
        {"p": p, "degree": f.degree, "circle_nodes": nodes},
        quantities={"lhs": lhs, "area_norm_sq": area, "rhs1_abnorm_hp": rhs1, "rhs2_fp_cos": rhs2},
    )
    tiny = 64 * np.finfo(float).eps * max(lhs, 1e-300)
    rep.add("lhs<=rhs1", rhs1 - lhs, 2 * h1 * e1 + tiny)
    rep.add("lhs<=rhs2", rhs2 - lhs, 2 * h2 * e2 / k + tiny)
    rep.add("parseval", -abs(area - lhs), 1e-6 * max(lhs, 1.0))
    rep.notes.append("rhs1 uses sqrt(|a|^2+|b|^2); rhs2 uses |f| with the 1/(1-|cos pi/p|) factor")
    return rep


# --------------------------------------------------------------------------
# isoperimetric-type inequality
# --------------------------------------------------------------------------


def isoperimetric_constant(p):
    """``C_p = sqrt(2) cos(pi/4p) / (1 - |cos(pi/p)|)^(1/2)``."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    return math.sqrt(2.0) * math.cos(math.pi / (4 * p)) / math.sqrt(1.0 - abs(math.cos(math.pi / p)))


def isoperimetric_constant_alt(p):
    """The simplified forms: ``csc(pi/4p)/2`` for p >= 2 and
    ``cos(pi/4p) sec(pi/2p)`` for 1 < p <= 2 (both at p = 2)."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    out = {}
    if p >= 2:
        out["csc"] = 0.5 / math.sin(math.pi / (4 * p))
    if p <= 2:
        out["cos_sec"] = math.cos(math.pi / (4 * p)) / math.cos(math.pi / (2 * p))
    return out


def bergman_2p(f, p, radial=AREA_RADIAL, angular=AREA_ANGULAR):
    """Unweighted ``(int_D |f|^2p dA/pi)^(1/2p)`` with an error estimate."""
    v, e = disk_mean_with_error(lambda z: np.abs(f(z)) ** (2 * p), 2.0, radial, angular)
    val = v ** (1.0 / (2 * p))
    return val, val * e / (2 * p * v)


def isoperimetric_inequality_check(f, p, nodes=CIRCLE_NODES):
    """``||f||_{B^2p} <= C_p ||f||_p``."""
    C = isoperimetric_constant(p)
    lhs, el = bergman_2p(f, p)
    hp, eh = hardy_p(f, p, nodes)
    rep = VerdictReport(
        "isoperim",
        {"p": p, "degree": f.degree, "circle_nodes": nodes},
        quantities={"bergman_2p": lhs, "hardy_p": hp, "C_p": C},
    )
    rep.add("isoperimetric", C * hp - lhs, el + C * eh + 64 * np.finfo(float).eps * lhs)
    return rep


# --------------------------------------------------------------------------
# weighted contraction for log-subharmonic integrands
# --------------------------------------------------------------------------


def minimal_surface_integrand(p_coeffs, q_coeffs):
    """``|f_x|`` from Enneper-Weierstrass data: ``|f_x|^2 = |P| (1 + |Q|^2)``."""
    P = np.array(p_coeffs, dtype=np.complex128)
    Q = np.array(q_coeffs, dtype=np.complex128)

    def F(z):
        z = np.asarray(z, dtype=np.complex128)
        return np.sqrt(np.abs(HarmonicMapping._poly(P, z)) * (1.0 + np.abs(HarmonicMapping._poly(Q, z)) ** 2))

    return F


def inverse_jacobian(f, grid=64):
    """``1/J_f`` for a sense-preserving diffeomorphism; checks ``J_f > 0``."""
    r = np.linspace(0.0, 1.0, grid)
    th = 2.0 * np.pi * np.arange(4 * grid) / (4 * grid)
    J = f.jacobian(r[:, None] * np.exp(1j * th)[None, :])
    if not np.all(J > 0):
        raise ValueError("J_f must be positive on the closed disk")
    return lambda z: 1.0 / f.jacobian(z)


def corollary_co32_check(f, p, alpha, integrand=None, nodes=CIRCLE_NODES, label=None):
    """``((alpha-1) int F^p (1-|z|^2)^(alpha-2) dA/pi)^(1/p) <= ||F||_{p/alpha}``.

    ``F`` defaults to ``sqrt(|a|^2+|b|^2)``; any positive function with
    subharmonic logarithm and continuous boundary values may be supplied
    (``1/J_f``, minimal-surface data).
    """
    if not (p > 1 and alpha > 1):
        raise ValueError("need p > 1 and alpha > 1")
    F = f.ab_norm if integrand is None else integrand
    v, e = disk_mean_with_error(lambda z: np.abs(F(z)) ** p, alpha)
    lhs = v ** (1.0 / p)
    el = lhs * e / (p * v)
    rhs, er = hardy_p(F, p / alpha, nodes)
    rep = VerdictReport(
        "co32",
        {"p": p, "alpha": alpha, "integrand": label or ("ab_norm" if integrand is None else "custom")},
        quantities={"weighted_lhs": lhs, "hardy_rhs": rhs},
    )
    rep.add("co32", rhs - lhs, el + er + 64 * np.finfo(float).eps * lhs)
    if p == 2 and alpha == 2 and label == "minimal_surface":
        rep.notes.append(MINIMAL_SURFACE_NOTE)
    return rep


__all__ = [
    "HarmonicMapping",
    "random_mapping",
    "binom_weight",
    "coefficient_sum",
    "parseval_check",
    "coefficient_inequality_check",
    "isoperimetric_constant",
    "isoperimetric_constant_alt",
    "isoperimetric_inequality_check",
    "bergman_2p",
    "hardy_p",
    "circle_mean",
    "disk_weighted_mean",
    "corollary_co32_check",
    "minimal_surface_integrand",
    "inverse_jacobian",
]

"""Numerics for log-M-subharmonic functions on the real hyperbolic ball.

Modules: ``specfun`` (hypergeometric series), ``ballgeo`` (hyperbolic
balls, isoperimetric profile, Mobius maps), ``weightfn`` (the radial weight
``Phi_n``), ``fieldlab`` (test fields), ``normlab`` (norms and level
profiles), ``planar2d`` (planar harmonic mappings), ``verify`` (inequality
suites) and ``cli``.
"""

__version__ = "0.1.0"

__all__ = ["specfun", "ballgeo", "weightfn", "fieldlab", "normlab", "planar2d", "verify", "cli", "reports"]

"""Distributions of the per-element gain ``z = h * g * cos(phase_err)``.

The density of ``z`` is a one-dimensional integral over an auxiliary angle
``psi`` in ``[0, pi/2]``::

    f_z(z) = L exp(-2z) - (2L/pi) int exp(-2 z s(psi)) dpsi,
    s(psi) = sqrt(1 + tan(pi/L)^2 / sin(psi)^2)

and its transforms follow by integrating over ``z`` in closed form first.
Internally everything is expressed through the Laplace transform
``M(lam) = E[exp(-lam z)]``; the characteristic function is
``phi(t) = E[exp(j t z)] = M(-j t)``.

For ``L = 2`` the tangent is infinite and every quantity collapses to the
exponential law ``f_z(z) = 2 exp(-2z)``; those cases are dispatched to the
closed forms instead of evaluating ``tan(pi/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, quad_vec

from .channel import RisConfig
from .errors import DomainError, RegimeError
from .specfun import Tolerance, erf

__all__ = [
    "GcqSpec",
    "gcq_nodes",
    "pdf_v",
    "pdf_gv",
    "pdf_gv_integral",
    "pdf_z",
    "cdf_z",
    "pdf_z_small",
    "mean_z",
    "laplace_z",
    "chf_z",
    "chf_z_gcq",
    "chf_x",
]

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class GcqSpec:
    """Node count of the Gauss-Chebyshev rule."""

    n_nodes: int = 20

    def __post_init__(self) -> None:
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 1:
            raise DomainError(f"n_nodes must be an integer >= 1, got {self.n_nodes}")


def gcq_nodes(n: int) -> np.ndarray:
    """Chebyshev nodes ``a_k = cos(pi (2k - 1) / (2n))`` for k = 1..n."""
    k = np.arange(1, n + 1)
    return np.cos(np.pi * (2 * k - 1) / (2 * n))


def _check_levels(L: int) -> None:
    if int(L) != L or L < 2:
        raise DomainError(f"levels must be an integer >= 2, got {L}")


def _tan(L: int) -> float:
    return math.tan(math.pi / L)


def _scalar_or_array(out, scalar: bool):
    if scalar:
        out = np.asarray(out).reshape(())
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def pdf_v(v, L: int):
    """Density of ``v = cos(phase_err)``: ``L / (pi sqrt(1 - v^2))`` on ``[cos(pi/L), 1)``."""
    _check_levels(L)
    scalar = np.ndim(v) == 0
    v = np.asarray(v, dtype=float)
    if np.any(v == 1.0):
        raise DomainError("pdf_v is singular at v = 1; integrate with an open endpoint")
    inside = (v >= math.cos(math.pi / L)) & (v < 1.0)
    out = np.zeros_like(v)
    out[inside] = L / (math.pi * np.sqrt(1.0 - v[inside] ** 2))
    return _scalar_or_array(out, scalar)


def pdf_gv(u, L: int):
    """Density of ``g * v``: ``(L / sqrt(pi)) exp(-u^2) erf(u tan(pi/L))``."""
    _check_levels(L)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("pdf_gv requires u >= 0")
    if L == 2:
        out = (2.0 / math.sqrt(math.pi)) * np.exp(-u * u)
    else:
        out = (L / math.sqrt(math.pi)) * np.exp(-u * u) * erf(u * _tan(L))
    return _scalar_or_array(out, scalar)


def pdf_gv_integral(u: float, L: int, tol: Tolerance = Tolerance()) -> float:
    """Density of ``g * v`` from the product-distribution integral.

    ``f(u) = (2 L u / pi) int_{cos(pi/L)}^1 exp(-u^2/w^2) / (w^2 sqrt(1 - w^2)) dw``,
    evaluated after substituting ``w = cos(theta)`` to remove the
    endpoint singularity. Independent check on :func:`pdf_gv`.
    """
    _check_levels(L)
    if u < 0:
        raise DomainError("pdf_gv_integral requires u >= 0")
    if u == 0:
        return 0.0

    def integrand(theta):
        c2 = math.cos(theta) ** 2
        if c2 == 0.0:
            return 0.0
        return math.exp(-u * u / c2) / c2

    val, _ = quad(integrand, 0.0, math.pi / L, epsabs=0.0, epsrel=tol.rel_tol, limit=200)
    return 2.0 * L * u / math.pi * val


def _psi_points(scale_lo: float, scale_hi: float) -> list[float]:
    """Geometric breakpoints in psi between two feature widths."""
    lo = max(min(scale_lo, _HALF_PI), 1e-14)
    hi = max(min(scale_hi, _HALF_PI), lo)
    if lo >= _HALF_PI:
        return []
    pts = np.geomspace(lo, hi, num=max(2, int(math.log10(hi / lo)) + 2))
    return [float(p) for p in pts if 0.0 < p < _HALF_PI]


def _psi_integral(integrand, points: list[float], tol: Tolerance, size: int):
    """Adaptive integral over psi in [0, pi/2]; scalar quad for one output, quad_vec otherwise."""
    if size == 1:
        def scalar(psi):
            return float(np.asarray(integrand(psi)).reshape(-1)[0])

        val, _ = quad(scalar, 0.0, _HALF_PI, epsabs=0.0, epsrel=tol.rel_tol, points=points or None, limit=200)
        return np.array([val])
    val, _ = quad_vec(integrand, 0.0, _HALF_PI, epsabs=0.0, epsrel=tol.rel_tol, points=points or None)
    return val


def pdf_z(z, L: int, tol: Tolerance = Tolerance()):
    """Density of the per-element gain ``z = h g cos(phase_err)``.

    Written as ``(2L/pi) int_0^{pi/2} exp(-2z) (1 - exp(-2z (s - 1))) dpsi``
    which equals the two-term form but never subtracts nearly equal
    numbers at small z. The psi-integral is adaptive (Gauss-Kronrod).
    """
    _check_levels(L)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0) or not np.all(np.isfinite(z)):
        raise DomainError("pdf_z requires finite z >= 0")
    if L == 2:
        return _scalar_or_array(2.0 * np.exp(-2.0 * z), scalar)
    T = _tan(L)

    def integrand(psi):
        u = math.sin(psi)
        r = math.sqrt(u * u + T * T)
        with np.errstate(divide="ignore"):
            excess = (r - u) / u  # s - 1
        return np.exp(-2.0 * z) * -np.expm1(-2.0 * z * excess)

    # The integrand saturates for sin(psi) below roughly 2 z tan(pi/L).
    pos = z[z > 0]
    points = _psi_points(2 * T * pos.min(), 2 * T * pos.max()) if pos.size else []
    val = _psi_integral(integrand, points, tol, z.size)
    return _scalar_or_array(2.0 * L / math.pi * val, scalar)


def cdf_z(z, L: int, tol: Tolerance = Tolerance()):
    """Distribution function of ``z``; the z-integral of :func:`pdf_z` done in closed form."""
    _check_levels(L)
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0):
        raise DomainError("cdf_z requires z >= 0")
    if L == 2:
        return _scalar_or_array(-np.expm1(-2.0 * z), scalar)
    T = _tan(L)

    def integrand(psi):
        u = math.sin(psi)
        r = math.sqrt(u * u + T * T)
        # (1 - e^{-2z})/2 - (1 - e^{-2zs})/(2s), with 1/s = u/r
        with np.errstate(divide="ignore"):
            s = r / u
        return -0.5 * np.expm1(-2.0 * z) + 0.5 * (u / r) * np.expm1(-2.0 * z * s)

    val = _psi_integral(integrand, [], tol, z.size)
    return _scalar_or_array(np.clip(2.0 * L / math.pi * val, 0.0, 1.0), scalar)


def pdf_z_small(z, L: int):
    """Leading small-z behaviour ``(4L/pi) tan(pi/L) z ln(1 / (z tan(pi/L)))``.

    Only meaningful for ``0 < z < 1/tan(pi/L)``. At ``L = 2`` the density
    does not vanish at the origin, so there is no such asymptote.
    """
    _check_levels(L)
    if L == 2:
        raise RegimeError("small-z asymptote needs L > 2; f_z(z) = 2 exp(-2z) is exact at L = 2")
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("pdf_z_small requires z > 0")
    T = _tan(L)
    out = 4.0 * L / math.pi * T * z * np.log(1.0 / (z * T))
    return _scalar_or_array(out, scalar)


def mean_z(L: int) -> float:
    """``E[z] = E[h] E[g] E[v] = (L/4) sin(pi/L)``."""
    _check_levels(L)
    return 0.25 * L * math.sin(math.pi / L)


def laplace_z(lam, L: int, gcq: GcqSpec | None = None, tol: Tolerance = Tolerance()):
    """Laplace transform ``E[exp(-lam z)]`` for complex ``lam`` with ``Re(lam) >= 0``.

    ``gcq=None`` integrates over psi adaptively; otherwise the
    Gauss-Chebyshev rule with ``gcq.n_nodes`` nodes is applied in the
    linear map ``psi = (pi/4)(a + 1)``.
    """
    _check_levels(L)
    scalar = np.ndim(lam) == 0
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    if L == 2:
        return _scalar_or_array(2.0 / (2.0 + lam), scalar)
    T = _tan(L)
    if gcq is not None:
        a = gcq_nodes(gcq.n_nodes)
        u = np.sin(0.25 * np.pi * (a + 1.0))
        s = np.sqrt(1.0 + T * T / (u * u))
        weights = np.sqrt(1.0 - a * a)
        terms = weights / (lam[:, None] + 2.0 * s)
        out = L / (2.0 + lam) - L * np.pi / (2 * gcq.n_nodes) * terms.sum(axis=1)
        return _scalar_or_array(out, scalar)

    def integrand(psi):
        u = math.sin(psi)
        r = math.sqrt(u * u + T * T)
        # 1/(2+lam) - 1/(2s+lam) with s = r/u, multiplied through by u
        return (2.0 * r - 2.0 * u) / ((2.0 + lam) * (2.0 * r + lam * u))

    # Feature width in psi is about 2 tan(pi/L) / |lam| for large |lam|.
    mag = np.abs(lam)
    big = mag[mag > 1.0]
    points = _psi_points(2 * T / big.max(), 2 * T / big.min()) if big.size else []
    val, _ = quad_vec(integrand, 0.0, _HALF_PI, epsabs=0.0, epsrel=tol.rel_tol, points=points or None)
    return _scalar_or_array(2.0 * L / math.pi * val, scalar)


def chf_z(t, L: int, tol: Tolerance = Tolerance()):
    """Characteristic function ``E[exp(j t z)]`` with adaptive psi-quadrature.

    The z-integral of the density against ``exp(j t z)`` is carried out
    analytically, leaving one smooth integral over psi. Satisfies
    ``chf_z(-t) = conj(chf_z(t))`` and ``chf_z(0) = 1``.
    """
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("chf_z requires finite t")
    return laplace_z(-1j * t, L, None, tol)


def chf_z_gcq(t, L: int, spec: GcqSpec = GcqSpec()):
    """Characteristic function from the n-node Gauss-Chebyshev rule.

    ``phi(t) ~ L/(2 - jt) - (L pi / 2n) sum_k sqrt(1 - a_k^2) / (2 s_k - jt)``
    with ``s_k = s(pi (a_k + 1) / 4)``. The endpoint behaviour of the
    mapped integrand limits this rule to O(1/n^2) convergence.
    ``L = 2`` returns the exact ``2 / (2 - jt)``.
    """
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("chf_z_gcq requires finite t")
    return laplace_z(-1j * t, L, spec)


def chf_x(t, rho: float, config: RisConfig, spec: GcqSpec | None = None, tol: Tolerance = Tolerance()):
    """Characteristic function of ``sqrt(rho) * sum_i z_i`` over i.i.d. elements."""
    if not rho > 0:
        raise DomainError("rho must be positive")
    t = np.asarray(t, dtype=float)
    scaled = math.sqrt(rho) * t
    phi = chf_z(scaled, config.levels, tol) if spec is None else chf_z_gcq(scaled, config.levels, spec)
    return phi**config.n_elements

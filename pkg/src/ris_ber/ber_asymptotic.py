"""High-SNR closed forms: asymptotic BER, diversity order, coding gain.

Two regimes behave differently. With two phase levels the per-element
density is exponential and does not vanish at the origin, giving
diversity ``N/2``. With more levels the density vanishes like
``z ln(1/z)`` near the origin, giving diversity ``N`` with a slowly
varying ``ln(rho)^N`` factor.

Gamma-function products are accumulated as sums of logarithms so that
``N`` up to a few hundred stays finite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .channel import RisConfig
from .errors import DomainError, RegimeError
from .specfun import ln_gamma

__all__ = [
    "Regime",
    "DiversityReport",
    "multilevel_prefactor",
    "ber_asym_multilevel",
    "ber_asym_twolevel",
    "ber_asym",
    "pdf_gamma_norm_twolevel",
    "pdf_x_small",
    "diversity_report",
    "quantization_penalty",
    "local_slope_multilevel",
]

_LOG_SQRT_PI = 0.5 * math.log(math.pi)


class Regime(str, enum.Enum):
    TWO_LEVEL = "two_level"
    MULTI_LEVEL = "multi_level"


@dataclass(frozen=True)
class DiversityReport:
    diversity_order: float
    coding_gain: float
    regime: Regime


def _log_multilevel_base(L: int) -> float:
    # ln(2 L tan(pi/L) / pi)
    return math.log(2.0 * L * math.tan(math.pi / L) / math.pi)


def multilevel_prefactor(n_elements: int, L: int) -> float:
    """``(2 L tan(pi/L) / pi)^N``; tends to ``2^N`` as L grows."""
    if L <= 2:
        raise RegimeError("prefactor contains tan(pi/L) and needs L > 2")
    return math.exp(n_elements * _log_multilevel_base(L))


def _log_ber_multilevel(rho: float, n: int, L: int) -> float:
    return (
        n * _log_multilevel_base(L)
        + n * math.log(math.log(rho))
        + ln_gamma(n + 0.5)
        - math.log(2.0)
        - _LOG_SQRT_PI
        - math.log(n + 1.0)
        - ln_gamma(2.0 * n)
        - n * math.log(rho)
    )


def ber_asym_multilevel(rho: float, config: RisConfig) -> float:
    """Asymptotic BER for L > 2.

    ``(2L tan(pi/L)/pi)^N ln(rho)^N Gamma(N + 1/2) / (2 sqrt(pi) (N+1) Gamma(2N)) rho^-N``
    """
    if config.levels == 2:
        raise RegimeError("L = 2 has its own asymptote; use ber_asym_twolevel")
    if not rho > 1:
        raise DomainError("ber_asym_multilevel needs rho > 1 so that ln(rho) > 0")
    return math.exp(_log_ber_multilevel(rho, config.n_elements, config.levels))


def _log_twolevel_constant(n: int) -> float:
    # ln(2^(N-1) Gamma(N/2 + 1/2) / (sqrt(pi) Gamma(N + 1)))
    return (n - 1) * math.log(2.0) + ln_gamma(0.5 * n + 0.5) - _LOG_SQRT_PI - ln_gamma(n + 1.0)


def ber_asym_twolevel(rho: float, n_elements: int) -> float:
    """Asymptotic BER for L = 2: ``2^(N-1) Gamma(N/2 + 1/2) / (sqrt(pi) Gamma(N+1)) rho^(-N/2)``."""
    if not rho > 0:
        raise DomainError("rho must be positive")
    if n_elements < 1:
        raise DomainError("n_elements must be >= 1")
    return math.exp(_log_twolevel_constant(n_elements) - 0.5 * n_elements * math.log(rho))


def ber_asym(rho: float, config: RisConfig) -> float:
    """Dispatch to the asymptote matching ``config.levels``."""
    if config.levels == 2:
        return ber_asym_twolevel(rho, config.n_elements)
    return ber_asym_multilevel(rho, config)


def pdf_gamma_norm_twolevel(gamma: float, n_elements: int) -> float:
    """Density of the normalised SNR ``gamma / rho = (sum z_i)^2`` at L = 2.

    ``2^(N-1) gamma^(N/2 - 1) exp(-2 sqrt(gamma)) / Gamma(N)``: the sum of N
    rate-2 exponentials is Gamma(N, 2), and this is the law of its square.
    Exact at every SNR, not only asymptotically.
    """
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    n = n_elements
    log_f = (
        n * math.log(2.0)
        - math.log(2.0)
        + (0.5 * n - 1.0) * math.log(gamma)
        - 2.0 * math.sqrt(gamma)
        - ln_gamma(float(n))
    )
    return math.exp(log_f)


def pdf_x_small(x: float, rho: float, config: RisConfig) -> float:
    """Small-x density of the scaled amplitude for L > 2.

    ``(2 L tan(pi/L) / (rho pi))^N x^(2N-1) ln(rho x)^N / Gamma(2N)``, defined
    only where ``rho x > 1``.
    """
    if config.levels == 2:
        raise RegimeError("pdf_x_small needs L > 2")
    if not (x > 0 and rho > 0 and rho * x > 1):
        raise DomainError("pdf_x_small needs x > 0 and rho x > 1")
    n = config.n_elements
    log_f = (
        n * (_log_multilevel_base(config.levels) - math.log(rho))
        + (2 * n - 1) * math.log(x)
        + n * math.log(math.log(rho * x))
        - ln_gamma(2.0 * n)
    )
    return math.exp(log_f)


def diversity_report(config: RisConfig, rho: float | None = None) -> DiversityReport:
    """Diversity order and coding gain.

    The L > 2 coding gain contains ``ln(rho)`` and needs an explicit ``rho > 1``.
    """
    n = config.n_elements
    if config.levels == 2:
        gain = math.exp(-2.0 / n * _log_twolevel_constant(n))
        return DiversityReport(0.5 * n, gain, Regime.TWO_LEVEL)
    if rho is None or not rho > 1:
        raise DomainError("the L > 2 coding gain needs rho > 1")
    log_const = _log_ber_multilevel(rho, n, config.levels) + n * math.log(rho)
    return DiversityReport(float(n), math.exp(-log_const / n), Regime.MULTI_LEVEL)


def quantization_penalty(rho: float, L: int, n_elements: int) -> float:
    """BER increase in dB over infinite phase resolution.

    L > 2 gives ``10 log10(L tan(pi/L) / pi)``, independent of rho and N.
    """
    if L < 2:
        raise DomainError("L must be >= 2")
    if L > 2:
        return 10.0 * math.log10(L * math.tan(math.pi / L) / math.pi)
    if not rho > 1:
        raise DomainError("the L = 2 penalty needs rho > 1")
    n = n_elements
    log_val = (
        0.5 * n * math.log(rho)
        - n * math.log(math.log(rho))
        + ln_gamma(0.5 * n + 0.5)
        + math.log(n + 1.0)
        + (2 * n - 1) * math.log(2.0)
        - math.log(n)
        - _LOG_SQRT_PI
    )
    return 10.0 * log_val / math.log(10.0)


def local_slope_multilevel(rho: float, n_elements: int) -> float:
    """``-d log(P_e) / d log(rho)`` of the L > 2 asymptote: ``N (1 - 1/ln rho)``."""
    if not rho > 1:
        raise DomainError("rho must exceed 1")
    return n_elements * (1.0 - 1.0 / math.log(rho))

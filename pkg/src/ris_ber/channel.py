"""RIS-assisted link model: Rayleigh hops, quantized phase error, combined amplitude.

Amplitudes use the unit-power Rayleigh density ``f(x) = 2 x exp(-x^2)``;
the residual phase error of an L-level quantizer is uniform on
``[-pi/L, pi/L]``. The raw channel phase and the quantized shift are never
materialised because only their difference enters the received signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "RisConfig",
    "ChannelDraw",
    "SnrPoint",
    "stream_rng",
    "sample_channel",
    "combined_amplitude",
    "instantaneous_snr",
]

# Independent random streams derived from one root seed.
STREAMS = {"h": 0, "g": 1, "phase": 2, "noise": 3, "symbols": 4}

_RAYLEIGH_SCALE = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class RisConfig:
    """Surface size and phase resolution."""

    n_elements: int
    levels: int

    def __post_init__(self) -> None:
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise DomainError(f"n_elements must be an integer >= 1, got {self.n_elements}")
        if int(self.levels) != self.levels or self.levels < 2:
            raise DomainError(f"levels must be an integer >= 2, got {self.levels}")

    @property
    def max_phase_error(self) -> float:
        return math.pi / self.levels


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """Per-element amplitudes and phase errors.

    Arrays have shape ``(..., N)``; a leading batch axis holds many
    independent realisations.
    """

    h: np.ndarray
    g: np.ndarray
    phase_err: np.ndarray
    levels: int

    def __post_init__(self) -> None:
        h = np.asarray(self.h, dtype=float)
        g = np.asarray(self.g, dtype=float)
        ph = np.asarray(self.phase_err, dtype=float)
        if not (h.shape == g.shape == ph.shape) or h.ndim == 0:
            raise DomainError("h, g and phase_err must share a non-scalar shape")
        if np.any(h < 0) or np.any(g < 0):
            raise DomainError("amplitudes must be nonnegative")
        if self.levels < 2:
            raise DomainError("levels must be >= 2")
        # one ulp of slack so pi/L itself round-trips
        if np.any(np.abs(ph) > math.pi / self.levels * (1 + 1e-15)):
            raise DomainError(f"phase errors must lie in [-pi/{self.levels}, pi/{self.levels}]")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "phase_err", ph)

    @property
    def n_elements(self) -> int:
        return self.h.shape[-1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelDraw):
            return NotImplemented
        return (
            self.levels == other.levels
            and np.array_equal(self.h, other.h)
            and np.array_equal(self.g, other.g)
            and np.array_equal(self.phase_err, other.phase_err)
        )


@dataclass(frozen=True)
class SnrPoint:
    """Transmit SNR in linear and dB scale."""

    rho: float

    def __post_init__(self) -> None:
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise DomainError(f"rho must be positive and finite, got {self.rho}")

    @classmethod
    def from_db(cls, rho_db: float) -> SnrPoint:
        return cls(10.0 ** (rho_db / 10.0))

    @property
    def rho_db(self) -> float:
        return 10.0 * math.log10(self.rho)


def stream_rng(seed: int, stream: str, batch: int = 0) -> np.random.Generator:
    """Generator for one named stream of one sample batch.

    Each (seed, batch, stream) triple maps to its own ``SeedSequence`` spawn
    key, so any stream can be regenerated without touching the others.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(batch, STREAMS[stream]))
    return np.random.default_rng(ss)


def sample_channel(
    config: RisConfig, seed: int, n_draws: int | None = None, batch: int = 0
) -> ChannelDraw:
    """Draw channel realisations.

    With ``n_draws=None`` a single draw of shape ``(N,)`` is returned,
    otherwise a batch of shape ``(n_draws, N)``.
    """
    shape = (config.n_elements,) if n_draws is None else (n_draws, config.n_elements)
    h = stream_rng(seed, "h", batch).rayleigh(_RAYLEIGH_SCALE, shape)
    g = stream_rng(seed, "g", batch).rayleigh(_RAYLEIGH_SCALE, shape)
    bound = config.max_phase_error
    phase = stream_rng(seed, "phase", batch).uniform(-bound, bound, shape)
    return ChannelDraw(h, g, phase, config.levels)


def combined_amplitude(draw: ChannelDraw):
    """``x = sum_i h_i g_i cos(phase_err_i)`` over the last axis."""
    # sin(pi/2 - |e|) is exactly 0 at e = pi/2, where np.cos gives 6e-17
    v = np.sin(0.5 * math.pi - np.abs(draw.phase_err))
    x = np.maximum(np.sum(draw.h * draw.g * v, axis=-1), 0.0)
    return float(x) if np.ndim(x) == 0 else x


def instantaneous_snr(x, snr: SnrPoint):
    """Received SNR ``rho * x^2``."""
    if np.any(np.asarray(x) < 0):
        raise DomainError("amplitude must be nonnegative")
    return snr.rho * np.square(x) if np.ndim(x) else snr.rho * float(x) ** 2

"""Monte Carlo BER oracles.

``ber_semi_analytic`` averages the exact conditional error probability
``erfc(sqrt(rho) x) / 2`` over channel draws, so only channel randomness
contributes variance. ``ber_bit_sim`` transmits random BPSK symbols
through additive Gaussian noise of variance ``1 / (2 rho)`` and counts
sign errors; it exists to check that noise calibration.

Samples are processed in fixed-size batches, each seeded from
``(seed, batch index)``. Batch statistics are merged in batch order, so the
estimate does not depend on how many worker threads ran the batches.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ber_exact import worker_count
from .channel import RisConfig, combined_amplitude, sample_channel, stream_rng
from .errors import DomainError
from .specfun import erfc

__all__ = ["McEstimate", "ber_semi_analytic", "ber_bit_sim", "bit_sim_given_amplitude"]

BATCH_SIZE = 1 << 17
MIN_SAMPLES = 1000


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    def __post_init__(self) -> None:
        if self.std_error < 0 or not 0.0 <= self.mean <= 1.0 or self.n_samples < 1:
            raise DomainError(f"inconsistent estimate {self}")


@dataclass
class _Moments:
    """Count, mean and centred sum of squares; merged with Chan's pairwise rule."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> _Moments:
        mean = float(np.mean(values))
        return cls(values.size, mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other: _Moments) -> None:
        if other.n == 0:
            return
        n = self.n + other.n
        delta = other.mean - self.mean
        self.mean += delta * other.n / n
        self.m2 += other.m2 + delta * delta * self.n * other.n / n
        self.n = n


def _batches(n_samples: int) -> list[tuple[int, int]]:
    full, rest = divmod(n_samples, BATCH_SIZE)
    sizes = [BATCH_SIZE] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run(batch_fn, n_samples: int, seed: int, workers: int | None) -> McEstimate:
    if n_samples < MIN_SAMPLES:
        raise DomainError(f"n_samples must be >= {MIN_SAMPLES}")
    jobs = _batches(n_samples)
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: batch_fn(*job), jobs))
    else:
        parts = [batch_fn(*job) for job in jobs]
    total = _Moments()
    for part in parts:
        total.merge(part)
    var = total.m2 / (total.n - 1)
    return McEstimate(total.mean, math.sqrt(var / total.n), total.n, seed)


def _check_rho(rho: float) -> None:
    if not (rho > 0 and math.isfinite(rho)):
        raise DomainError("rho must be positive and finite")


def ber_semi_analytic(
    rho: float, config: RisConfig, n_samples: int, seed: int, workers: int | None = None
) -> McEstimate:
    """Average of ``erfc(sqrt(rho) x) / 2`` over ``n_samples`` channel draws."""
    _check_rho(rho)
    scale = math.sqrt(rho)

    def batch(index: int, size: int) -> _Moments:
        x = combined_amplitude(sample_channel(config, seed, size, batch=index))
        return _Moments.of(0.5 * erfc(scale * x))

    return _run(batch, n_samples, seed, workers)


def _bit_errors(x: np.ndarray, rho: float, seed: int, index: int) -> np.ndarray:
    size = x.shape[0]
    alpha = np.where(stream_rng(seed, "symbols", index).random(size) < 0.5, -1.0, 1.0)
    noise = stream_rng(seed, "noise", index).normal(0.0, math.sqrt(0.5 / rho), size)
    r = x * alpha + noise
    decided = np.where(r >= 0.0, 1.0, -1.0)
    return (decided != alpha).astype(float)


def ber_bit_sim(
    rho: float, config: RisConfig, n_samples: int, seed: int, workers: int | None = None
) -> McEstimate:
    """Bit-level simulation: random symbol, channel, noise of variance 1/(2 rho), sign detector."""
    _check_rho(rho)

    def batch(index: int, size: int) -> _Moments:
        x = combined_amplitude(sample_channel(config, seed, size, batch=index))
        return _Moments.of(_bit_errors(x, rho, seed, index))

    return _run(batch, n_samples, seed, workers)


def bit_sim_given_amplitude(
    x: float, rho: float, n_samples: int, seed: int, workers: int | None = None
) -> McEstimate:
    """Bit-level simulation with the combined amplitude held fixed at ``x``."""
    _check_rho(rho)
    if x < 0:
        raise DomainError("amplitude must be nonnegative")

    def batch(index: int, size: int) -> _Moments:
        return _Moments.of(_bit_errors(np.full(size, float(x)), rho, seed, index))

    return _run(batch, n_samples, seed, workers)

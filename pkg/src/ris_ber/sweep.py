"""SNR sweeps over the BER methods and their CSV representation."""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .ber_asymptotic import ber_asym
from .ber_exact import QuadratureSpec, ber_chf
from .channel import RisConfig
from .errors import ConvergenceError, DomainError
from .montecarlo import ber_bit_sim, ber_semi_analytic
from .phase_stats import GcqSpec
from .specfun import Tolerance

__all__ = [
    "Method",
    "BerPoint",
    "SweepRequest",
    "snr_grid",
    "parse_snr_range",
    "run_sweep",
    "write_csv",
    "read_csv",
    "CSV_FIELDS",
]

log = logging.getLogger(__name__)

CSV_FIELDS = ("rho_db", "ber", "std_error", "method", "n_elements", "levels", "n_samples", "seed")


class Method(str, enum.Enum):
    EXACT_CHF = "exact_chf"
    EXACT_CHF_GCQ = "exact_chf_gcq"
    ASYM = "asym"
    MC_SEMI = "mc_semi"
    MC_BIT = "mc_bit"

    @property
    def is_monte_carlo(self) -> bool:
        return self in (Method.MC_SEMI, Method.MC_BIT)


@dataclass(frozen=True)
class BerPoint:
    """One BER value. ``ber`` is NaN when the computation failed."""

    rho_db: float
    ber: float
    method: Method
    n_elements: int
    levels: int
    std_error: float | None = None
    n_samples: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "method", Method(self.method))
        if self.method.is_monte_carlo != (self.std_error is not None):
            raise DomainError("std_error is present exactly for Monte Carlo methods")
        if not self.failed and not 0.0 <= self.ber <= 0.5 + 1e-12:
            raise DomainError(f"ber out of range: {self.ber}")

    @property
    def failed(self) -> bool:
        return math.isnan(self.ber)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BerPoint):
            return NotImplemented
        mine, theirs = self._key(), other._key()
        return mine == theirs

    def _key(self):
        ber = "nan" if self.failed else self.ber
        return (self.rho_db, ber, self.method, self.n_elements, self.levels, self.std_error, self.n_samples, self.seed)


@dataclass(frozen=True)
class SweepRequest:
    config: RisConfig
    rho_db_start: float
    rho_db_stop: float
    rho_db_step: float
    methods: tuple[Method, ...] = (Method.EXACT_CHF,)
    n_samples: int = 100_000
    seed: int = 0
    gcq_nodes: int = 20
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self) -> None:
        if not self.rho_db_step > 0:
            raise DomainError("SNR step must be positive")
        if self.rho_db_start > self.rho_db_stop:
            raise DomainError("SNR start must not exceed stop")
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))


def snr_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid ``start, start + step, ..., <= stop``, rounded to kill float drift."""
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def parse_snr_range(text: str) -> tuple[float, float, float]:
    """Parse ``start:stop:step`` (or a single value) in dB."""
    parts = text.split(":")
    if len(parts) == 1:
        v = float(parts[0])
        return v, v, 1.0
    if len(parts) == 2:
        return float(parts[0]), float(parts[1]), 1.0
    if len(parts) == 3:
        return float(parts[0]), float(parts[1]), float(parts[2])
    raise ValueError(f"bad SNR range {text!r}; expected start:stop:step")


def _evaluate(method: Method, rho_db: float, req: SweepRequest) -> BerPoint:
    cfg = req.config
    rho = 10.0 ** (rho_db / 10.0)
    common = dict(rho_db=rho_db, method=method, n_elements=cfg.n_elements, levels=cfg.levels)
    if method.is_monte_carlo:
        fn = ber_semi_analytic if method is Method.MC_SEMI else ber_bit_sim
        est = fn(rho, cfg, req.n_samples, req.seed)
        return BerPoint(ber=est.mean, std_error=est.std_error, n_samples=est.n_samples, seed=req.seed, **common)
    try:
        if method is Method.ASYM:
            ber = ber_asym(rho, cfg)
        else:
            gcq = GcqSpec(req.gcq_nodes) if method is Method.EXACT_CHF_GCQ else None
            ber = ber_chf(rho, cfg, QuadratureSpec(tol=req.tol, gcq=gcq))
    except (ConvergenceError, DomainError) as exc:
        log.warning("%s at %s dB (N=%d, L=%d) failed: %s", method.value, rho_db, cfg.n_elements, cfg.levels, exc)
        ber = math.nan
    if not math.isnan(ber) and ber > 0.5:
        # the closed-form asymptotes are not bounded by 1/2 at low SNR
        log.warning("%s at %s dB exceeds 1/2 (%.4g); marked failed", method.value, rho_db, ber)
        ber = math.nan
    return BerPoint(ber=ber, **common)


def run_sweep(req: SweepRequest) -> list[BerPoint]:
    """One point per (method, SNR), sorted by method name then SNR.

    Monte Carlo points reuse ``req.seed`` at every SNR (common random
    numbers), which keeps simulated curves smooth.
    """
    grid = snr_grid(req.rho_db_start, req.rho_db_stop, req.rho_db_step)
    points = [_evaluate(m, db, req) for m in dict.fromkeys(req.methods) for db in grid]
    return sorted(points, key=lambda p: (p.method.value, p.rho_db))


def _fmt_float(v: float | None) -> str:
    if v is None:
        return ""
    return repr(float(v))


def _fmt_int(v: int | None) -> str:
    return "" if v is None else str(int(v))


def write_csv(points: Iterable[BerPoint], out: TextIO, header: bool = True) -> None:
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(CSV_FIELDS)
    for p in points:
        writer.writerow(
            [
                _fmt_float(p.rho_db),
                _fmt_float(p.ber),
                _fmt_float(p.std_error),
                p.method.value,
                _fmt_int(p.n_elements),
                _fmt_int(p.levels),
                _fmt_int(p.n_samples),
                _fmt_int(p.seed),
            ]
        )


def read_csv(src: TextIO | str) -> list[BerPoint]:
    if isinstance(src, str):
        src = io.StringIO(src)
    reader = csv.DictReader(src)
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")

    def opt(text: str, kind):
        return None if text == "" else kind(text)

    return [
        BerPoint(
            rho_db=float(row["rho_db"]),
            ber=float(row["ber"]),
            std_error=opt(row["std_error"], float),
            method=Method(row["method"]),
            n_elements=int(row["n_elements"]),
            levels=int(row["levels"]),
            n_samples=opt(row["n_samples"], int),
            seed=opt(row["seed"], int),
        )
        for row in reader
    ]

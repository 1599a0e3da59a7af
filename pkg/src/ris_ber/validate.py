"""Self-check suite behind ``ris-ber validate``.

Each check returns a :class:`CheckResult` holding the measured deviation
and the allowed one. ``quick`` shrinks sample counts and grids so the run
finishes in well under a minute; ``full`` uses the sizes the library is
specified against.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterator

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.stats import kstest

from . import specfun
from .ber_asymptotic import ber_asym_multilevel, ber_asym_twolevel, quantization_penalty
from .ber_exact import ber_chf
from .channel import RisConfig, combined_amplitude, sample_channel
from .montecarlo import ber_bit_sim, ber_semi_analytic
from .phase_stats import GcqSpec, cdf_z, chf_z, chf_z_gcq, mean_z, pdf_z, pdf_z_small

__all__ = ["CheckResult", "run_validate", "LEVELS"]

LEVELS = ("quick", "full")


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    allowed: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _db(rho_db: float) -> float:
    return 10.0 ** (rho_db / 10.0)


def _le(name: str, measured: float, allowed: float, detail: str = "") -> CheckResult:
    return CheckResult(name, float(measured), float(allowed), bool(measured <= allowed), detail)


def check_erf_complement(full: bool) -> CheckResult:
    x = np.linspace(-10, 10, 2001 if full else 201)
    return _le("specfun.erf_plus_erfc", np.max(np.abs(specfun.erf(x) + specfun.erfc(x) - 1.0)), 1e-12)


def check_dawson_ode(full: bool) -> CheckResult:
    x = np.linspace(-5, 5, 1001 if full else 101)
    h = 1e-5
    deriv = (specfun.dawson(x + h) - specfun.dawson(x - h)) / (2 * h)
    rhs = 1.0 - 2.0 * x * specfun.dawson(x)
    return _le("specfun.dawson_ode", np.max(np.abs(deriv - rhs) / np.maximum(np.abs(rhs), 1e-3)), 1e-6)


def check_lngamma_recurrence(full: bool) -> CheckResult:
    x = np.arange(0.5, 21.0, 1.0)
    err = np.abs(specfun.ln_gamma(x + 1) - specfun.ln_gamma(x) - np.log(x))
    return _le("specfun.ln_gamma_recurrence", np.max(err), 1e-12)


def check_pdf_z_moments(full: bool) -> list[CheckResult]:
    out = []
    for L in (2, 3, 4, 8, 16) if full else (2, 4):
        norm = quad(lambda z: pdf_z(z, L), 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        mean = quad(lambda z: z * pdf_z(z, L), 0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        out.append(_le(f"phase_stats.pdf_z_norm[L={L}]", abs(norm - 1.0), 1e-8))
        out.append(_le(f"phase_stats.pdf_z_mean[L={L}]", abs(mean / mean_z(L) - 1.0), 1e-6))
    return out


def check_chf_basics(full: bool) -> list[CheckResult]:
    t = np.linspace(-50, 50, 201)
    l2 = np.max(np.abs(chf_z(t, 2) - 2.0 / (2.0 - 1j * t)))
    zero = max(abs(chf_z(0.0, L) - 1.0) for L in (2, 3, 4, 8))
    return [
        _le("phase_stats.chf_z_at_zero", zero, 1e-10),
        _le("phase_stats.chf_z_two_level_closed_form", l2, 1e-12),
    ]


def check_gcq(full: bool) -> list[CheckResult]:
    t = np.logspace(-2, 2, 41 if full else 9)
    worst = 0.0
    monotone = True
    for L in (3, 4, 8):
        ref = chf_z(t, L, specfun.Tolerance(rel_tol=1e-13))
        worst = max(worst, float(np.max(np.abs(chf_z_gcq(t, L, GcqSpec(20)) - ref) / np.abs(ref))))
        errs = [np.max(np.abs(chf_z_gcq(t, L, GcqSpec(n)) - ref) / np.abs(ref)) for n in (5, 10, 20, 40, 80)]
        monotone &= all(b < a for a, b in zip(errs, errs[1:]))
    return [
        _le("phase_stats.gcq_n20_relative_error", worst, 1e-8),
        CheckResult("phase_stats.gcq_error_decreases_with_n", float(monotone), 1.0, monotone),
    ]


def check_small_z(full: bool) -> CheckResult:
    ratio = pdf_z(1e-5, 4) / pdf_z_small(1e-5, 4)
    return _le("phase_stats.pdf_z_small_ratio", abs(ratio - 1.0), 0.1, f"ratio={ratio:.6f}")


def check_ks(full: bool) -> list[CheckResult]:
    n = 1_000_000 if full else 100_000
    out = []
    for L in (2, 4):
        draw = sample_channel(RisConfig(1, L), seed=11, n_draws=n)
        z = combined_amplitude(draw)
        grid = np.concatenate([[0.0], np.geomspace(1e-6, 20.0, 3000)])
        cdf = PchipInterpolator(grid, cdf_z(grid, L))
        res = kstest(z, lambda v: cdf(np.minimum(v, 20.0)))
        critical = 1.628 / math.sqrt(n)
        out.append(_le(f"channel.ks_z[L={L}]", res.statistic, critical, f"p={res.pvalue:.3g}"))
    return out


def check_penalty(full: bool) -> list[CheckResult]:
    return [
        _le("ber_asymptotic.penalty[L=3]", abs(quantization_penalty(100.0, 3, 1) - 2.1852), 1e-3),
        _le("ber_asymptotic.penalty[L=4]", abs(quantization_penalty(100.0, 4, 1) - 1.0491), 1e-3),
        _le("ber_asymptotic.penalty[L=1024]", quantization_penalty(100.0, 1024, 1), 0.01),
    ]


def check_cross_path(full: bool) -> CheckResult:
    ns = (1, 2, 3, 5) if full else (1, 3)
    dbs = (0, 10, 20) if full else (0, 10)
    samples = 10_000_000 if full else 100_000
    worst = 0.0
    for n in ns:
        for L in (2, 3, 4):
            for db in dbs:
                cfg = RisConfig(n, L)
                est = ber_semi_analytic(_db(db), cfg, samples, seed=1000 + 10 * n + L)
                z = abs(ber_chf(_db(db), cfg) - est.mean) / est.std_error
                worst = max(worst, z)
    return _le("ber_exact.cross_path_sigmas", worst, 4.0)


def check_noise_calibration(full: bool) -> CheckResult:
    samples = 1_000_000 if full else 100_000
    worst = 0.0
    for n in (1, 2, 3):
        for L in (2, 3, 4):
            for db in (0, 5):
                cfg = RisConfig(n, L)
                a = ber_semi_analytic(_db(db), cfg, samples, seed=7)
                b = ber_bit_sim(_db(db), cfg, samples, seed=8)
                worst = max(worst, abs(a.mean - b.mean) / math.hypot(a.std_error, b.std_error))
    return _le("montecarlo.noise_calibration_sigmas", worst, 4.0)


def check_fig1(full: bool) -> CheckResult:
    dbs = np.arange(0, 31, 1 if full else 5)
    curves = {L: np.array([ber_chf(_db(db), RisConfig(5, L)) for db in dbs]) for L in (2, 3, 4)}
    decreasing = all(np.all(np.diff(c) < 0) for c in curves.values())
    ordered = bool(np.all(curves[2] > curves[3]) and np.all(curves[3] > curves[4]))
    gap = np.log10(curves[2]) - np.log10(curves[3])
    widening = bool(np.all(np.diff(gap[dbs >= 10]) > 0))
    ok = decreasing and ordered and widening
    return CheckResult(
        "ber_exact.fig1_shape", float(ok), 1.0, ok, f"decreasing={decreasing} ordered={ordered} widening={widening}"
    )


def check_asymptotes(full: bool) -> list[CheckResult]:
    out = []
    dbs = (20, 25, 30, 35, 40)
    for n in (1, 2, 3):
        cfg2, cfg4 = RisConfig(n, 2), RisConfig(n, 4)
        r2 = ber_chf(_db(40), cfg2) / ber_asym_twolevel(_db(40), n)
        out.append(
            CheckResult(f"ber_asymptotic.twolevel_ratio_40dB[N={n}]", r2, 1.25, 0.8 <= r2 <= 1.25, "range [0.8, 1.25]")
        )
        ratios = [ber_chf(_db(db), cfg4) / ber_asym_multilevel(_db(db), cfg4) for db in dbs]
        r4 = ratios[-1]
        out.append(CheckResult(f"ber_asymptotic.multilevel_ratio_40dB[N={n}]", r4, 2.0, 0.5 <= r4 <= 2.0, "range [0.5, 2]"))
        gaps = [abs(r - 1.0) for r in ratios]
        approaching = all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:]))
        out.append(
            CheckResult(
                f"ber_asymptotic.multilevel_ratio_approaches_1[N={n}]",
                gaps[-1],
                gaps[0],
                approaching,
                "ratios " + ", ".join(f"{r:.4f}" for r in ratios),
            )
        )
    return out


def check_slopes(full: bool) -> list[CheckResult]:
    out = []
    for n in (2, 4):
        p30, p40 = (ber_chf(_db(db), RisConfig(n, 2)) for db in (30, 40))
        slope = math.log10(p30 / p40)
        target = n / 2
        out.append(_le(f"ber_asymptotic.twolevel_slope[N={n}]", abs(slope / target - 1), 0.15, f"slope={slope:.4f}"))
        p35, p40 = (ber_chf(_db(db), RisConfig(n, 4)) for db in (35, 40))
        slope = math.log10(p35 / p40) / 0.5
        target = n * (1 - 1 / math.log(_db(37.5)))
        out.append(_le(f"ber_asymptotic.multilevel_slope[N={n}]", abs(slope / target - 1), 0.15, f"slope={slope:.4f}"))
    return out


_CHECKS: tuple[Callable[[bool], CheckResult | list[CheckResult]], ...] = (
    check_erf_complement,
    check_dawson_ode,
    check_lngamma_recurrence,
    check_pdf_z_moments,
    check_chf_basics,
    check_gcq,
    check_small_z,
    check_ks,
    check_penalty,
    check_cross_path,
    check_noise_calibration,
    check_fig1,
    check_asymptotes,
    check_slopes,
)


def run_validate(level: str = "quick") -> Iterator[CheckResult]:
    """Run every check, yielding results as they complete."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    full = level == "full"
    for check in _CHECKS:
        start = time.perf_counter()
        res = check(full)
        elapsed = time.perf_counter() - start
        for r in res if isinstance(res, list) else [res]:
            yield CheckResult(r.name, r.measured, r.allowed, r.passed, r.detail, round(elapsed, 3))

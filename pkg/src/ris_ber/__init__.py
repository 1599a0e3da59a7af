"""Bit error rate of BPSK over a reconfigurable intelligent surface with
Rayleigh fading and L-level quantized phase compensation.

Three independent routes to the same number: characteristic-function
inversion (:func:`ber_chf`), high-SNR closed forms (:func:`ber_asym`) and
seeded Monte Carlo (:func:`ber_semi_analytic`, :func:`ber_bit_sim`).
"""

from __future__ import annotations

from .ber_asymptotic import (
    DiversityReport,
    Regime,
    ber_asym,
    ber_asym_multilevel,
    ber_asym_twolevel,
    diversity_report,
    quantization_penalty,
)
from .ber_exact import QuadratureSpec, ber_chf, g_kernel
from .channel import ChannelDraw, RisConfig, SnrPoint, combined_amplitude, sample_channel
from .errors import ConvergenceError, DomainError, RegimeError
from .montecarlo import McEstimate, ber_bit_sim, ber_semi_analytic
from .phase_stats import GcqSpec, chf_x, chf_z, chf_z_gcq, mean_z, pdf_z
from .specfun import Tolerance
from .sweep import BerPoint, Method, SweepRequest, read_csv, run_sweep, write_csv

__version__ = "0.1.0"

__all__ = [
    "BerPoint",
    "ChannelDraw",
    "ConvergenceError",
    "DiversityReport",
    "DomainError",
    "GcqSpec",
    "McEstimate",
    "Method",
    "QuadratureSpec",
    "Regime",
    "RegimeError",
    "RisConfig",
    "SnrPoint",
    "SweepRequest",
    "Tolerance",
    "ber_asym",
    "ber_asym_multilevel",
    "ber_asym_twolevel",
    "ber_bit_sim",
    "ber_chf",
    "ber_semi_analytic",
    "chf_x",
    "chf_z",
    "chf_z_gcq",
    "combined_amplitude",
    "diversity_report",
    "g_kernel",
    "mean_z",
    "pdf_z",
    "quantization_penalty",
    "read_csv",
    "run_sweep",
    "sample_channel",
    "write_csv",
]

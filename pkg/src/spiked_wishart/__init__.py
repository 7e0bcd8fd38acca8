"""Exact, asymptotic and simulated laws of the scaled condition number of
single-spiked complex Wishart matrices."""

from .asymptotic import (
    AsymptoticParams,
    cdf_scaled_kappa,
    cdf_scaled_min_eig,
    pdf_scaled_kappa,
)
from .determinant import SmallMatrix, det, vandermonde
from .ensemble import (
    Dims,
    EmpiricalDistribution,
    SpikeParams,
    eigenvalues_hermitian,
    joint_density,
    kappa_sq,
    monte_carlo,
    sample_spiked_gaussian,
    simulate,
)
from .exact import (
    ExactPdfParams,
    NestedIndexIterator,
    Q_det,
    R_det,
    T_det,
    cdf_kappa_sq,
    cdf_min_eig,
    mgf_kappa_sq,
    pdf_kappa_sq,
    pdf_kappa_sq_alpha0,
    pdf_kappa_sq_alpha1,
    pdf_kappa_sq_white,
    pdf_min_eig,
)
from .quadrature import IntegrationResult, integrate, integrate_2d_ordered
from .signedlog import SignedLog, log_gamma, pochhammer, signedlog_add
from .special import HypSeriesParams, bessel_i, hyp_pfq, laguerre

__version__ = "0.1.0"

__all__ = [
    "AsymptoticParams",
    "cdf_scaled_kappa",
    "cdf_scaled_min_eig",
    "pdf_scaled_kappa",
    "SmallMatrix",
    "det",
    "vandermonde",
    "Dims",
    "EmpiricalDistribution",
    "SpikeParams",
    "eigenvalues_hermitian",
    "joint_density",
    "kappa_sq",
    "monte_carlo",
    "sample_spiked_gaussian",
    "simulate",
    "ExactPdfParams",
    "NestedIndexIterator",
    "Q_det",
    "R_det",
    "T_det",
    "cdf_kappa_sq",
    "cdf_min_eig",
    "mgf_kappa_sq",
    "pdf_kappa_sq",
    "pdf_kappa_sq_alpha0",
    "pdf_kappa_sq_alpha1",
    "pdf_kappa_sq_white",
    "pdf_min_eig",
    "IntegrationResult",
    "integrate",
    "integrate_2d_ordered",
    "SignedLog",
    "log_gamma",
    "pochhammer",
    "signedlog_add",
    "HypSeriesParams",
    "bessel_i",
    "hyp_pfq",
    "laguerre",
]

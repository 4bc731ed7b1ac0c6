"""Discrete spectrum of H = H₀ + V on the even subspace of ℓ²(ℤ).

H₀ is the lattice Laplacian with dispersion ε(p) = 1 - cos p (band [0, 2]);
V carries an on-site strength ``mu`` and a nearest-neighbour strength ``lam``.
"""
from .dispersion import (
    BandDomainError,
    CouplingPair,
    DeterminantProfile,
    EdgeCoefficients,
    determinant,
    determinant_derivative,
    edge_coefficients,
    integral_a,
    integral_b,
    integral_c,
    quad_reference,
)
from .eigensolver import (
    BirmanSchwingerSystem,
    Eigenfunction,
    EigenvalueReport,
    NearThreshold,
    birman_schwinger_system,
    eigenfunction,
    find_discrete_spectrum,
    rank1_lambda_eigenvalue,
    rank1_mu_eigenvalue,
)
from .oracle import (
    HalfLineMatrix,
    NotConverged,
    build_half_line,
    eigenvalues_outside_band,
    sturm_count,
    truncation_error_probe,
)
from .regions import RegionLabel, classify, classify_lower, classify_upper

__all__ = [
    "BandDomainError",
    "BirmanSchwingerSystem",
    "CouplingPair",
    "DeterminantProfile",
    "EdgeCoefficients",
    "Eigenfunction",
    "EigenvalueReport",
    "HalfLineMatrix",
    "NearThreshold",
    "NotConverged",
    "RegionLabel",
    "birman_schwinger_system",
    "build_half_line",
    "classify",
    "classify_lower",
    "classify_upper",
    "determinant",
    "determinant_derivative",
    "edge_coefficients",
    "eigenfunction",
    "eigenvalues_outside_band",
    "find_discrete_spectrum",
    "integral_a",
    "integral_b",
    "integral_c",
    "quad_reference",
    "rank1_lambda_eigenvalue",
    "rank1_mu_eigenvalue",
    "sturm_count",
    "truncation_error_probe",
]

"""Coupling-plane regions with a fixed number of eigenvalues on each side.

Above the band the count is decided by S = μλ - μ - λ, the sign of the
(z-2)^(-1/2) coefficient of Δ, together with the position of μ against 1:

    G2+ : S > 0, μ > 1        (two eigenvalues above 2)
    G1+ : S < 0, or S = 0 with μ > 1
    G0+ : S > 0, μ < 1, or S = 0 with μ < 1

Below the band the same holds with T = μλ + μ + λ and μ compared to -1.
S = 0 forces μ ≠ 1 (it reads (μ-1)(λ-1) = 1), so the μ comparisons never
tie on the critical curves themselves.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dispersion import CouplingPair, lower_discriminant, upper_discriminant
from .eigensolver import find_discrete_spectrum

BOUNDARY = "BOUNDARY"
UNCLASSIFIED = "UNCLASSIFIED"
DEFAULT_BOUNDARY_TOL = 1e-12

_NAMED = {
    ("G0-", "G2+"): "G02",
    ("G0-", "G1+"): "G01",
    ("G1-", "G1+"): "G11",
    ("G1-", "G0+"): "G10",
    ("G2-", "G0+"): "G20",
}


@dataclass(frozen=True)
class RegionLabel:
    name: str
    n_below: int
    n_above: int
    upper_class: str
    lower_class: str


def _edge_class(disc: float, mu: float, pivot: float, tol: float, sign: int) -> str:
    # sign=+1: "two" needs mu > pivot; sign=-1: "two" needs mu < pivot
    beyond = sign * (mu - pivot)
    suffix = "+" if sign > 0 else "-"
    if disc > tol:
        if beyond > 0:
            return "G2" + suffix
        if beyond < 0:
            return "G0" + suffix
        return BOUNDARY
    if disc < -tol:
        return "G1" + suffix
    if beyond > tol:
        return "G1" + suffix
    if beyond < -tol:
        return "G0" + suffix
    return BOUNDARY


def classify_upper(cp: CouplingPair, boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> str:
    if boundary_tol < 0:
        raise ValueError("boundary_tol must be non-negative")
    return _edge_class(upper_discriminant(cp), cp.mu, 1.0, boundary_tol, +1)


def classify_lower(cp: CouplingPair, boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> str:
    if boundary_tol < 0:
        raise ValueError("boundary_tol must be non-negative")
    return _edge_class(lower_discriminant(cp), cp.mu, -1.0, boundary_tol, -1)


def classify(cp: CouplingPair, boundary_tol: float = DEFAULT_BOUNDARY_TOL) -> RegionLabel:
    """Region name and predicted (n_below, n_above).

    Boundary points and class combinations outside the five named regions
    get their counts from the determinant root finder instead.
    """
    upper = classify_upper(cp, boundary_tol)
    lower = classify_lower(cp, boundary_tol)
    if upper == BOUNDARY or lower == BOUNDARY:
        n_below, n_above = find_discrete_spectrum(cp).counts
        return RegionLabel(BOUNDARY, n_below, n_above, upper, lower)
    name = _NAMED.get((lower, upper))
    if name is None:
        n_below, n_above = find_discrete_spectrum(cp).counts
        return RegionLabel(UNCLASSIFIED, n_below, n_above, upper, lower)
    return RegionLabel(name, int(lower[1]), int(upper[1]), upper, lower)

"""Dispersion integrals and the Fredholm determinant for ε(p) = 1 - cos p.

All integrals are taken over the torus (-π, π] against the normalized
measure dν = dp / 2π.  With A = z - 1 (so |A| > 1 off the band) the three
integrals reduce to a single square root::

    a(z) =  ∫ dν / (z - ε)         = sign(A) / sqrt(A² - 1)
    b(z) = -∫ cos q dν / (z - ε)   = A a - 1
    c(z) =  ∫ cos² q dν / (z - ε)  = A² a - A

``quad_reference`` evaluates the defining integrals directly and exists only
to check the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BAND_BOTTOM = 0.0
BAND_TOP = 2.0
#: Points closer than this to a band edge are rejected.
EDGE_GUARD = 1e-13
#: Leading edge constant: a(2 + s) ~ EDGE_CONSTANT / sqrt(s).
EDGE_CONSTANT = 1.0 / math.sqrt(2.0)

KERNELS = ("one", "cos", "cos2")


class BandDomainError(ValueError):
    """Raised when a spectral point lies in (or too close to) the band [0, 2]."""


def edge_distance(z: float) -> float:
    """Distance from ``z`` to the closed band [0, 2]; 0 inside."""
    if z < BAND_BOTTOM:
        return BAND_BOTTOM - z
    if z > BAND_TOP:
        return z - BAND_TOP
    return 0.0


def check_spectral_point(z: float) -> float:
    z = float(z)
    if not math.isfinite(z):
        raise BandDomainError(f"spectral point must be finite, got {z!r}")
    if edge_distance(z) < EDGE_GUARD:
        raise BandDomainError(
            f"z={z!r} is inside the band [0, 2] or within {EDGE_GUARD:g} of an edge"
        )
    return z


def _a(z: float) -> float:
    # z(z-2) = A² - 1 without cancellation when z is large
    return math.copysign(1.0, z - 1.0) / math.sqrt(z * (z - 2.0))


def integral_a(z: float) -> float:
    """Return a(z) = ∫ dν / (z - ε(q)).

    Positive above the band, negative below it.

    >>> round(integral_a(3.0), 10)
    0.5773502692
    """
    return _a(check_spectral_point(z))


def integral_b(z: float) -> float:
    """Return b(z) = -∫ cos q dν / (z - ε(q)); strictly positive off the band."""
    z = check_spectral_point(z)
    return (z - 1.0) * _a(z) - 1.0


def integral_c(z: float) -> float:
    """Return c(z) = ∫ cos² q dν / (z - ε(q)); has the sign of z - 1."""
    z = check_spectral_point(z)
    shift = z - 1.0
    return shift * shift * _a(z) - shift


def integrals(z: float) -> tuple[float, float, float]:
    """Return ``(a, b, c)`` at ``z`` from one square root."""
    z = check_spectral_point(z)
    shift = z - 1.0
    a = _a(z)
    return a, shift * a - 1.0, shift * shift * a - shift


def quad_reference(kernel: str, z: float, nodes: int = 4096) -> float:
    """Periodic trapezoidal approximation of a, b or c.

    Parameters
    ----------
    kernel : {"one", "cos", "cos2"}
        Selects the integrand numerator.  ``"cos"`` carries the leading minus
        sign of b, so each kernel reproduces the corresponding closed form.
    z : float
        Spectral point outside [0, 2].
    nodes : int
        Number of equispaced nodes on the torus, at least 16.
    """
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if int(nodes) != nodes or nodes < 16:
        raise ValueError(f"nodes must be an integer >= 16, got {nodes!r}")
    z = check_spectral_point(z)
    q = -math.pi + 2.0 * math.pi * (np.arange(int(nodes)) + 1.0) / nodes
    cos_q = np.cos(q)
    denom = z - (1.0 - cos_q)
    if kernel == "one":
        num = np.ones_like(q)
    elif kernel == "cos":
        num = -cos_q
    else:
        num = cos_q * cos_q
    return float(np.mean(num / denom))


@dataclass(frozen=True)
class CouplingPair:
    """On-site strength ``mu`` and nearest-neighbour strength ``lam``."""

    mu: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.lam)):
            raise ValueError(f"couplings must be finite, got ({self.mu}, {self.lam})")
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "lam", float(self.lam))

    def reflected(self) -> CouplingPair:
        return CouplingPair(-self.mu, -self.lam)


@dataclass(frozen=True)
class DeterminantProfile:
    z: float
    a: float
    b: float
    c: float
    delta: float


def compose_delta(mu: float, lam: float, a: float, b: float, c: float) -> float:
    return (1.0 - mu * a) * (1.0 - lam * c) - mu * lam * (b * b)


def determinant(cp: CouplingPair, z: float) -> DeterminantProfile:
    """Evaluate Δ(μ, λ; z) = (1 - μa)(1 - λc) - μλb² together with a, b, c."""
    a, b, c = integrals(z)
    return DeterminantProfile(float(z), a, b, c, compose_delta(cp.mu, cp.lam, a, b, c))


def delta_grid(cp: CouplingPair, z: np.ndarray) -> np.ndarray:
    """Vectorized Δ for an array of points already known to be off the band."""
    z = np.asarray(z, dtype=float)
    shift = z - 1.0
    a = np.sign(shift) / np.sqrt(z * (z - 2.0))
    b = shift * a - 1.0
    c = shift * shift * a - shift
    return (1.0 - cp.mu * a) * (1.0 - cp.lam * c) - cp.mu * cp.lam * (b * b)


def integral_derivatives(z: float) -> tuple[float, float, float]:
    """Return (a', b', c') at ``z``.

    a' = -A a³ follows from a = sign(A)(A² - 1)^(-1/2).
    """
    a, _, _ = integrals(z)
    shift = z - 1.0
    da = -shift * a ** 3
    db = a + shift * da
    dc = 2.0 * shift * a + shift * shift * da - 1.0
    return da, db, dc


def determinant_derivative(cp: CouplingPair, z: float) -> float:
    """Exact dΔ/dz obtained by differentiating the composed determinant."""
    a, b, c = integrals(z)
    da, db, dc = integral_derivatives(z)
    mu, lam = cp.mu, cp.lam
    return (
        -mu * da * (1.0 - lam * c)
        - lam * dc * (1.0 - mu * a)
        - 2.0 * mu * lam * b * db
    )


@dataclass(frozen=True)
class EdgeCoefficients:
    """Leading and constant terms of Δ at z -> 2+ and z -> 0-.

    Near the top edge Δ ≈ c_plus_half (z-2)^(-1/2) + c_plus_0, near the bottom
    edge Δ ≈ c_minus_half (-z)^(-1/2) + c_minus_0.
    """

    c_plus_half: float
    c_plus_0: float
    c_minus_half: float
    c_minus_0: float
    b2: float = EDGE_CONSTANT
    b0: float = EDGE_CONSTANT


def upper_discriminant(cp: CouplingPair) -> float:
    """μλ - μ - λ; its sign decides the behaviour of Δ at 2+."""
    return cp.mu * cp.lam - cp.mu - cp.lam


def lower_discriminant(cp: CouplingPair) -> float:
    """μλ + μ + λ; its sign decides the behaviour of Δ at 0-."""
    return cp.mu * cp.lam + cp.mu + cp.lam


def edge_coefficients(cp: CouplingPair) -> EdgeCoefficients:
    mu, lam = cp.mu, cp.lam
    return EdgeCoefficients(
        c_plus_half=EDGE_CONSTANT * upper_discriminant(cp),
        c_plus_0=1.0 + lam - mu * lam,
        c_minus_half=EDGE_CONSTANT * lower_discriminant(cp),
        c_minus_0=1.0 - lam - mu * lam,
    )

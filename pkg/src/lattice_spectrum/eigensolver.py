"""Discrete spectrum from the zeros of the Fredholm determinant.

A point z off the band is an eigenvalue exactly when Δ(μ, λ; z) = 0.  The
search scans Δ on a grid that is logarithmic in the distance to each band
edge (where Δ may diverge like (edge distance)^(-1/2)) and uniform further
out, then bisects every sign change.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import (
    BAND_BOTTOM,
    BAND_TOP,
    CouplingPair,
    check_spectral_point,
    compose_delta,
    delta_grid,
    determinant,
    determinant_derivative,
    edge_coefficients,
    edge_distance,
    integrals,
)

SCAN_FLOOR = 1e-12
NEAR_THRESHOLD = 1e-10
MERGE_DISTANCE = 1e-9
RESIDUAL_TOL = 1e-10
SINGULAR_TOL = 1e-10

_LOG_POINTS = 241
_UNIFORM_STEP = 0.01


@dataclass(frozen=True)
class NearThreshold:
    """A zero of Δ that sits (or would sit) within 1e-10 of a band edge."""

    edge: float
    distance: float
    detail: str


@dataclass(frozen=True)
class EigenvalueReport:
    mu: float
    lam: float
    below: tuple[float, ...]
    above: tuple[float, ...]
    zeta_mu: float | None
    zeta_lambda: float | None
    zeta_min: float | None
    zeta_max: float | None
    tolerance: float
    warnings: tuple[NearThreshold, ...] = field(default=())

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return self.below + self.above

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.below), len(self.above)


def rank1_mu_eigenvalue(mu: float) -> float:
    """Eigenvalue of the on-site perturbation alone: 1 + sign(μ) sqrt(1 + μ²)."""
    if mu == 0:
        raise ValueError("mu = 0 gives no eigenvalue (Δ ≡ 1)")
    return 1.0 + math.copysign(math.hypot(1.0, mu), mu)


def rank1_lambda_eigenvalue(lam: float) -> float:
    """Unique zero of 1 - λ c(z); above the band for λ > 0, below for λ < 0."""
    if lam == 0:
        raise ValueError("lambda = 0 gives no eigenvalue (Δ ≡ 1)")

    # c is monotone on each side and c(2 + s) ~ s^(-1/2)/sqrt(2), so the zero
    # has edge distance below lam²; bracket in edge distance.
    def f(s: float) -> float:
        z = BAND_TOP + s if lam > 0 else BAND_BOTTOM - s
        _, _, c = integrals(z)
        return 1.0 - lam * c

    lo, hi = SCAN_FLOOR, max(1.0, 2.0 * lam * lam)
    if f(lo) >= 0.0:
        raise ArithmeticError(f"rank-1 level for lambda={lam} is below the scan floor")
    while f(hi) < 0.0:
        hi *= 2.0
    s = _bisect(f, lo, hi)
    return BAND_TOP + s if lam > 0 else BAND_BOTTOM - s


def _bisect(f, lo: float, hi: float) -> float:
    """Bisection on a bracket with f(lo), f(hi) of opposite sign.

    Runs until the bracket stops shrinking in floating point; about 60
    halvings at most.
    """
    f_lo = f(lo)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo if abs(f(lo)) <= abs(f(hi)) else hi


def residual_scale(cp: CouplingPair, z: float) -> float:
    """Local size of Δ at ``z``, at least 1.

    The larger of the two terms that cancel in Δ and of |z Δ'(z)|.  Near a
    band edge Δ' is so steep that adjacent doubles differ in Δ by far more
    than 1e-10; measured against |z Δ'| the residual bounds the relative
    error of the root instead.
    """
    a, b, c = integrals(z)
    return max(
        1.0,
        abs((1.0 - cp.mu * a) * (1.0 - cp.lam * c)),
        abs(cp.mu * cp.lam) * b * b,
        abs(z * determinant_derivative(cp, z)),
    )


def is_determinant_root(cp: CouplingPair, z: float, tol: float = RESIDUAL_TOL) -> bool:
    if edge_distance(z) <= 0.0:
        return False
    return abs(determinant(cp, z).delta) <= tol * residual_scale(cp, z)


def _scan_offsets(radius: float) -> np.ndarray:
    """Edge distances for the sign-change scan, ascending."""
    logs = np.logspace(math.log10(SCAN_FLOOR), 0.0, _LOG_POINTS)
    if radius <= 1.0:
        return logs[logs < radius]
    uniform = np.arange(1.0 + _UNIFORM_STEP, radius, _UNIFORM_STEP)
    return np.concatenate([logs, uniform, [radius]])


def _side_roots(cp, side: int, radius: float, extra: list[float]):
    """Roots of Δ on one side of the band, ordered by edge distance."""
    edge = BAND_TOP if side > 0 else BAND_BOTTOM
    offsets = _scan_offsets(radius)
    # the rank-1 levels are points where Δ = -μλb², which separates the two
    # same-side roots whenever μλ > 0
    extras = [abs(z - edge) for z in extra if (z - edge) * side > SCAN_FLOOR]
    if extras:
        offsets = np.concatenate([offsets, extras])
    # gaps exactly representable above the top edge, so that a pair and its
    # mirror see the same sign changes; bisection below runs at full precision
    offsets = np.unique((BAND_TOP + offsets) - BAND_TOP)
    values = delta_grid(cp, edge + side * offsets)

    def f(s: float) -> float:
        a, b, c = integrals(edge + side * s)
        return compose_delta(cp.mu, cp.lam, a, b, c)

    roots, warnings = [], []
    exact = values == 0.0
    negative = values < 0.0
    flips = np.flatnonzero((negative[:-1] != negative[1:]) & ~exact[:-1] & ~exact[1:])
    roots.extend(offsets[exact].tolist())
    for i in flips.tolist():
        roots.append(_bisect(f, float(offsets[i]), float(offsets[i + 1])))
    roots.sort()

    # a root hidden below the scan floor shows up as opposite signs of the
    # leading and constant edge coefficients with a tiny ratio
    ec = edge_coefficients(cp)
    half, const = (ec.c_plus_half, ec.c_plus_0) if side > 0 else (ec.c_minus_half, ec.c_minus_0)
    if half != 0.0 and const != 0.0 and (half < 0.0) != (const < 0.0):
        predicted = (half / const) ** 2
        if predicted < SCAN_FLOOR:
            warnings.append(NearThreshold(edge, predicted, "zero below scan floor, not reported"))
    for s in roots:
        if s < NEAR_THRESHOLD:
            warnings.append(NearThreshold(edge, float(s), "zero within 1e-10 of the edge"))
    return [float(s) for s in roots], warnings


def _merge(values: list[float]) -> list[float]:
    merged: list[float] = []
    for v in sorted(values):
        if merged and v - merged[-1] < MERGE_DISTANCE:
            continue
        merged.append(v)
    return merged


def find_discrete_spectrum(cp: CouplingPair, tol: float = 1e-12) -> EigenvalueReport:
    """All eigenvalues of H = H₀ + V outside [0, 2].

    Parameters
    ----------
    cp : CouplingPair
    tol : float
        Required bracket width for each root, in [1e-14, 1e-6].  Bisection is
        run to floating-point resolution regardless.
    """
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-14, 1e-6], got {tol}")
    zeta_mu = rank1_mu_eigenvalue(cp.mu) if cp.mu != 0 else None
    zeta_lambda = None
    if cp.lam != 0:
        try:
            zeta_lambda = rank1_lambda_eigenvalue(cp.lam)
        except ArithmeticError:
            pass
    zeta_min = zeta_max = None
    if zeta_mu is not None and zeta_lambda is not None:
        if (zeta_mu > BAND_TOP) == (zeta_lambda > BAND_TOP):
            zeta_min, zeta_max = sorted((zeta_mu, zeta_lambda))
    extra = [z for z in (zeta_mu, zeta_lambda) if z is not None]

    # |ζ| <= ||H₀|| + ||V|| < 3 + |μ| + |λ|
    outer = 3.0 + abs(cp.mu) + abs(cp.lam)
    up, warn_up = _side_roots(cp, +1, outer - BAND_TOP, extra)
    down, warn_down = _side_roots(cp, -1, outer, extra)
    above = _merge([BAND_TOP + s for s in up])
    below = _merge([BAND_BOTTOM - s for s in down])

    achieved = 0.0
    for z in below + above:
        achieved = max(achieved, 2.0 * math.ulp(z))
    return EigenvalueReport(
        mu=cp.mu,
        lam=cp.lam,
        below=tuple(below),
        above=tuple(above),
        zeta_mu=zeta_mu,
        zeta_lambda=zeta_lambda,
        zeta_min=zeta_min,
        zeta_max=zeta_max,
        tolerance=achieved,
        warnings=tuple(warn_down + warn_up),
    )


@dataclass(frozen=True)
class BirmanSchwingerSystem:
    """The 2x2 system M (c1, c2)ᵀ = 0 whose determinant is Δ.

    c1 = ∫ψ dν and c2 = ∫cos t ψ dν.  ``c1``/``c2`` are None unless M is
    numerically singular.
    """

    z: float
    m11: float
    m12: float
    m21: float
    m22: float
    c1: float | None = None
    c2: float | None = None

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def apply(self, c1: float, c2: float) -> tuple[float, float]:
        return self.m11 * c1 + self.m12 * c2, self.m21 * c1 + self.m22 * c2


def birman_schwinger_system(cp: CouplingPair, z: float) -> BirmanSchwingerSystem:
    z = check_spectral_point(z)
    a, b, c = integrals(z)
    mu, lam = cp.mu, cp.lam
    m11, m12, m21, m22 = 1.0 - mu * a, lam * b, mu * b, 1.0 - lam * c
    if abs(compose_delta(mu, lam, a, b, c)) > SINGULAR_TOL * residual_scale(cp, z):
        return BirmanSchwingerSystem(z, m11, m12, m21, m22)
    # each candidate is orthogonal to one row; take the longer one
    first = (m12, -m11)
    second = (-m22, m21)
    v = first if math.hypot(*first) >= math.hypot(*second) else second
    norm = math.hypot(*v)
    if norm == 0.0:
        # M vanishes identically; any unit vector spans the kernel
        v, norm = (1.0, 0.0), 1.0
    c1, c2 = v[0] / norm, v[1] / norm
    if c1 < 0.0 or (c1 == 0.0 and c2 < 0.0):
        c1, c2 = -c1, -c2
    return BirmanSchwingerSystem(z, m11, m12, m21, m22, c1 + 0.0, c2 + 0.0)


@dataclass(frozen=True)
class Eigenfunction:
    eigenvalue: float
    c1: float
    c2: float
    lattice_values: np.ndarray

    def decay_ratios(self) -> np.ndarray:
        v = self.lattice_values
        return v[1:] / v[:-1]

    def half_line_vector(self) -> np.ndarray:
        """Coordinates in the even-subspace isometry g = (f0, √2 f1, √2 f2, ...)."""
        g = np.array(self.lattice_values, dtype=float)
        g[1:] *= math.sqrt(2.0)
        return g


def expected_decay_ratio(z: float) -> float:
    """Signed limit of ψ̂(x+1)/ψ̂(x) for a bound state at z.

    Magnitude |A| - sqrt(A² - 1) with A = z - 1; alternating above the band,
    single-signed below it.
    """
    shift = z - 1.0
    r = abs(shift) - math.sqrt(shift * shift - 1.0)
    return -r if shift > 0 else r


def eigenfunction(cp: CouplingPair, eigenvalue: float, x_max: int) -> Eigenfunction:
    """Lattice eigenfunction ψ̂(0..x_max) for a verified eigenvalue.

    ψ(q) = (μ c1 + λ c2 cos q) / (z - ε(q)) is transformed with a periodic
    trapezoid on max(64·x_max, 1024) nodes.
    """
    if int(x_max) != x_max or x_max < 1:
        raise ValueError(f"x_max must be a positive integer, got {x_max!r}")
    z = check_spectral_point(eigenvalue)
    if not is_determinant_root(cp, z):
        raise ValueError(f"{eigenvalue!r} is not a zero of Δ for {cp}")
    system = birman_schwinger_system(cp, z)
    c1, c2 = system.c1, system.c2
    nodes = max(64 * int(x_max), 1024)
    q = 2.0 * math.pi * np.arange(nodes) / nodes
    cos_q = np.cos(q)
    psi = (cp.mu * c1 + cp.lam * c2 * cos_q) / (z - 1.0 + cos_q)
    xs = np.arange(int(x_max) + 1)
    values = np.cos(np.outer(xs, q)) @ psi / nodes
    return Eigenfunction(z, c1, c2, values)

"""Finite-lattice oracle: the even-subspace Hamiltonian on sites x = 0..n.

Even sequences f(x) = f(-x) are mapped isometrically onto the half line by
g(0) = f(0), g(x) = sqrt(2) f(x) for x >= 1.  In these coordinates the
operator is a symmetric tridiagonal (Jacobi) matrix whose only non-Toeplitz
entries sit at the first two sites.  A hard Dirichlet wall is placed at
x = n + 1.

Eigenvalues outside the band are isolated with Sturm counts and bisection,
so this path shares no code with the determinant root finder.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from .dispersion import BAND_BOTTOM, BAND_TOP, CouplingPair

PROBE_SIZES = (256, 512, 1024, 2048, 4096, 8192)
MIN_ORDER = 8

_TINY = sys.float_info.min ** 0.5


class NotConverged(RuntimeError):
    """Raised when the truncation probe does not settle by n = 8192."""


@dataclass(frozen=True)
class HalfLineMatrix:
    n: int
    diag: tuple[float, ...]
    offdiag: tuple[float, ...]

    @property
    def order(self) -> int:
        return self.n + 1

    def norm_bound(self) -> float:
        """Gershgorin bound on the spectral radius."""
        d, e = self.diag, self.offdiag
        bound = 0.0
        for i, di in enumerate(d):
            r = (abs(e[i - 1]) if i > 0 else 0.0) + (abs(e[i]) if i < len(e) else 0.0)
            bound = max(bound, abs(di) + r)
        return bound

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diag)
            + np.diag(self.offdiag, 1)
            + np.diag(self.offdiag, -1)
        )

    def matvec(self, v: np.ndarray) -> np.ndarray:
        d = np.asarray(self.diag)
        e = np.asarray(self.offdiag)
        out = d * v
        out[:-1] += e * v[1:]
        out[1:] += e * v[:-1]
        return out


def build_half_line(cp: CouplingPair, n: int) -> HalfLineMatrix:
    """Truncated even-subspace Hamiltonian of order n + 1."""
    if int(n) != n or n < MIN_ORDER:
        raise ValueError(f"truncation size must be an integer >= {MIN_ORDER}, got {n!r}")
    n = int(n)
    diag = [1.0] * (n + 1)
    diag[0] = 1.0 + cp.mu
    diag[1] = 1.0 + 0.5 * cp.lam
    offdiag = [-0.5] * n
    offdiag[0] = -1.0 / math.sqrt(2.0)
    return HalfLineMatrix(n, tuple(diag), tuple(offdiag))


def build_full_line(cp: CouplingPair, n: int) -> np.ndarray:
    """Dense matrix on sites -n..n, written straight from the coordinate form.

    Only used to cross-check the even-subspace reduction.
    """
    size = 2 * n + 1
    h = np.zeros((size, size))
    idx = np.arange(size)
    h[idx, idx] = 1.0
    h[idx[:-1], idx[:-1] + 1] = -0.5
    h[idx[1:], idx[1:] - 1] = -0.5
    h[n, n] += cp.mu
    h[n - 1, n - 1] += 0.5 * cp.lam
    h[n + 1, n + 1] += 0.5 * cp.lam
    return h


def sturm_count(m: HalfLineMatrix, x: float) -> int:
    """Number of eigenvalues of ``m`` strictly below ``x``.

    Counts negative pivots of the LDLᵀ factorization of m - x.  A pivot that
    lands exactly on zero is replaced by -tiny, which treats x as lying
    infinitesimally above the offending eigenvalue of the leading block;
    this keeps the count exact for x that is not itself an eigenvalue of m.
    """
    d, e = m.diag, m.offdiag
    count = 0
    pivot = d[0] - x
    if pivot == 0.0:
        pivot = -_TINY
    if pivot < 0.0:
        count += 1
    for i in range(1, len(d)):
        ei = e[i - 1]
        pivot = (d[i] - x) - ei * ei / pivot
        if pivot == 0.0:
            pivot = -_TINY
        if pivot < 0.0:
            count += 1
    return count


def _bisect_kth(m: HalfLineMatrix, k: int, lo: float, hi: float, tol: float) -> float:
    """Bisect for the k-th smallest eigenvalue (0-based) inside (lo, hi]."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sturm_count(m, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def eigenvalues_outside_band(
    cp: CouplingPair, n: int, tol: float = 1e-10
) -> tuple[list[float], list[float]]:
    """Eigenvalues of the truncated matrix below 0 and above 2.

    Parameters
    ----------
    cp : CouplingPair
    n : int
        Truncation size, at least 256.
    tol : float
        Final bracket width of each eigenvalue, at least 1e-12.

    Returns
    -------
    below, above : list of float
        Sorted ascending.
    """
    if n < 256:
        raise ValueError(f"oracle truncation must be >= 256, got {n}")
    if tol < 1e-12:
        raise ValueError(f"oracle tolerance must be >= 1e-12, got {tol}")
    m = build_half_line(cp, n)
    bound = m.norm_bound() + 1.0
    n_below = sturm_count(m, BAND_BOTTOM)
    n_upto_top = sturm_count(m, BAND_TOP)
    n_above = m.order - n_upto_top
    below = [_bisect_kth(m, k, -bound, BAND_BOTTOM, tol) for k in range(n_below)]
    above = [
        _bisect_kth(m, k, BAND_TOP, bound, tol)
        for k in range(n_upto_top, m.order)
    ]
    return below, above


def outside_counts(cp: CouplingPair, n: int) -> tuple[int, int]:
    """(n_below, n_above) of the truncated matrix, without locating them."""
    m = build_half_line(cp, n)
    return sturm_count(m, BAND_BOTTOM), m.order - sturm_count(m, BAND_TOP)


def truncation_error_probe(cp: CouplingPair, tol_target: float = 1e-8) -> int:
    """Smallest probe size whose outside-band spectrum is stable under doubling.

    Raises
    ------
    NotConverged
        If even n = 8192 moves an eigenvalue by ``tol_target`` or more.
    """
    if tol_target < 1e-10:
        raise ValueError(f"tol_target must be >= 1e-10, got {tol_target}")
    eig_tol = max(tol_target * 1e-2, 1e-12)
    # a shallow level may be missing from both n and 2n, which would look
    # stable; the counts at the largest size guard against that
    reference = outside_counts(cp, 2 * PROBE_SIZES[-1])
    previous = eigenvalues_outside_band(cp, PROBE_SIZES[0], eig_tol)
    for n in PROBE_SIZES:
        doubled = eigenvalues_outside_band(cp, 2 * n, eig_tol)
        counts = (len(previous[0]), len(previous[1]))
        if counts == reference and _spectra_close(previous, doubled, tol_target):
            return n
        previous = doubled
    raise NotConverged(
        f"outside-band spectrum of {cp} still moving at n={PROBE_SIZES[-1]}"
    )


def _spectra_close(first, second, tol: float) -> bool:
    for side_a, side_b in zip(first, second):
        if len(side_a) != len(side_b):
            return False
        if any(abs(x - y) >= tol for x, y in zip(side_a, side_b)):
            return False
    return True

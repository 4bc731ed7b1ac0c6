import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_spectrum.dispersion import CouplingPair, determinant, quad_reference
from lattice_spectrum.eigensolver import (
    birman_schwinger_system,
    eigenfunction,
    expected_decay_ratio,
    find_discrete_spectrum,
    is_determinant_root,
    rank1_lambda_eigenvalue,
    rank1_mu_eigenvalue,
    residual_scale,
)
from lattice_spectrum.oracle import build_half_line, eigenvalues_outside_band
from lattice_spectrum.regions import classify


def cubic_root():
    """Real root > 1 of w³ - w = 1/2, solved independently of the package."""
    roots = np.roots([1.0, 0.0, -1.0, -0.5])
    return float(max(r.real for r in roots if abs(r.imag) < 1e-12))


def test_rank1_mu_examples():
    assert rank1_mu_eigenvalue(1) == pytest.approx(1 + math.sqrt(2), abs=1e-15)
    assert rank1_mu_eigenvalue(-1) == pytest.approx(1 - math.sqrt(2), abs=1e-15)
    z = rank1_mu_eigenvalue(0.01)
    assert z == pytest.approx(2.00005, abs=1e-6)
    assert z - 2 == pytest.approx(0.01**2 / 2, rel=1e-3)
    with pytest.raises(ValueError):
        rank1_mu_eigenvalue(0)


@pytest.mark.parametrize("mu", [0.1, 1, 5, 37.5])
def test_rank1_mu_sides(mu):
    assert rank1_mu_eigenvalue(mu) > 2
    assert rank1_mu_eigenvalue(-mu) < 0


def test_rank1_lambda_examples():
    w = cubic_root()
    assert w == pytest.approx(1.1915, abs=1e-4)
    assert rank1_lambda_eigenvalue(1) == pytest.approx(1 + w, abs=1e-12)
    assert rank1_lambda_eigenvalue(-1) == pytest.approx(1 - w, abs=1e-12)
    assert rank1_lambda_eigenvalue(1) == pytest.approx(2.1915, abs=1e-3)
    assert 2 < rank1_lambda_eigenvalue(1e-3) < 2 + 1e-5
    with pytest.raises(ValueError):
        rank1_lambda_eigenvalue(0)


@given(st.floats(1e-2, 50))
def test_rank1_lambda_is_zero_of_one_minus_lambda_c(lam):
    for sign in (1, -1):
        z = rank1_lambda_eigenvalue(sign * lam)
        assert (z > 2) if sign > 0 else (z < 0)
        p = determinant(CouplingPair(0, sign * lam), z)
        assert abs(p.delta) <= 1e-12 * max(1, abs(sign * lam * p.c))


def test_spectrum_examples():
    empty = find_discrete_spectrum(CouplingPair(0, 0))
    assert empty.below == () and empty.above == ()
    assert empty.zeta_mu is None and empty.zeta_lambda is None

    r = find_discrete_spectrum(CouplingPair(2, 3))
    assert r.below == ()
    z1, z2 = r.above
    assert 2 < z1 < r.zeta_min <= r.zeta_max < z2
    assert {r.zeta_min, r.zeta_max} == {rank1_mu_eigenvalue(2), rank1_lambda_eigenvalue(3)}

    r = find_discrete_spectrum(CouplingPair(1, -1))
    assert len(r.below) == 1 and r.below[0] < 0
    assert len(r.above) == 1 and r.above[0] > 2
    assert r.zeta_min is None and r.zeta_max is None


def test_tolerance_range_enforced():
    for tol in (1e-15, 1e-5):
        with pytest.raises(ValueError):
            find_discrete_spectrum(CouplingPair(1, 1), tol)


pairs = st.tuples(st.floats(-6, 6), st.floats(-6, 6))


@settings(max_examples=80, deadline=None)
@given(pairs)
def test_report_invariants(pair):
    cp = CouplingPair(*pair)
    r = find_discrete_spectrum(cp)
    assert len(r.below) + len(r.above) <= 2
    assert all(z < 0 for z in r.below) and all(z > 2 for z in r.above)
    assert list(r.below) == sorted(set(r.below))
    assert list(r.above) == sorted(set(r.above))
    for z in r.eigenvalues:
        assert abs(determinant(cp, z).delta) <= 1e-10 * residual_scale(cp, z)


@settings(max_examples=60, deadline=None)
@given(pairs)
def test_spectral_reflection(pair):
    cp = CouplingPair(*pair)
    r = find_discrete_spectrum(cp)
    m = find_discrete_spectrum(cp.reflected())
    assert len(r.below) == len(m.above) and len(r.above) == len(m.below)
    assert np.allclose(r.below, sorted(2 - z for z in m.above), atol=1e-10, rtol=0)
    assert np.allclose(r.above, sorted(2 - z for z in m.below), atol=1e-10, rtol=0)


@pytest.mark.parametrize("mu, lam", [(2, 3), (3, 2), (1.5, 4), (5, 5), (1.25, 6)])
def test_interlacing_in_two_above_region(mu, lam):
    cp = CouplingPair(mu, lam)
    assert classify(cp).name == "G02"
    r = find_discrete_spectrum(cp)
    z1, z2 = r.above
    margin = 1e-10
    assert 2 + margin < z1 < r.zeta_min - margin
    assert r.zeta_max + margin < z2


@pytest.mark.parametrize("mu, lam", [(-2, -3), (-3, -2), (-1.5, -4), (-5, -5)])
def test_interlacing_in_two_below_region(mu, lam):
    cp = CouplingPair(mu, lam)
    assert classify(cp).name == "G20"
    r = find_discrete_spectrum(cp)
    z1, z2 = r.below
    margin = 1e-10
    assert z1 < r.zeta_min - margin
    assert r.zeta_max + margin < z2 < -margin


@pytest.mark.parametrize("mu, lam", [(2, 3), (2, -0.5), (1, -1), (-2, 0.5), (-2, -3), (0, 2.5), (4, 0)])
def test_agrees_with_lattice_oracle(mu, lam):
    cp = CouplingPair(mu, lam)
    r = find_discrete_spectrum(cp)
    below, above = eigenvalues_outside_band(cp, 4096, 1e-11)
    assert (len(below), len(above)) == r.counts
    for z_det, z_orc in zip(r.eigenvalues, below + above):
        assert abs(z_det - z_orc) <= 1e-8


def test_near_threshold_below_scan_floor():
    r = find_discrete_spectrum(CouplingPair(1e-7, 0))
    assert r.above == ()
    assert len(r.warnings) == 1
    w = r.warnings[0]
    assert w.edge == 2.0 and w.distance == pytest.approx(0.5e-14, rel=1e-6)


def test_near_threshold_reported_root():
    r = find_discrete_spectrum(CouplingPair(1e-5, 0))
    assert len(r.above) == 1
    assert r.above[0] - 2 == pytest.approx(5e-11, rel=1e-3)
    assert [w.edge for w in r.warnings] == [2.0]


def test_no_warnings_for_ordinary_levels():
    assert find_discrete_spectrum(CouplingPair(2, 3)).warnings == ()


def test_birman_schwinger_determinant_identity():
    for mu, lam, z in [(2, 3, 4.0), (1, -1, -0.3), (-2, 0.5, 7.5), (0.2, -4, 2.0001)]:
        cp = CouplingPair(mu, lam)
        s = birman_schwinger_system(cp, z)
        d = determinant(cp, z).delta
        assert s.det == pytest.approx(d, rel=1e-14, abs=1e-14 * residual_scale(cp, z))
        assert s.c1 is None and s.c2 is None


def test_birman_schwinger_identity_for_free_operator():
    s = birman_schwinger_system(CouplingPair(0, 0), 3.0)
    assert (s.m11, s.m12, s.m21, s.m22) == (1.0, 0.0, 0.0, 1.0)
    assert s.c1 is None


def test_birman_schwinger_rank1_degeneration():
    # with λ = 0 the second functional c2 = ∫cos t ψ dν is slaved to c1:
    # c2 = -μ b c1, which is the kernel direction of M
    z = 1 + math.sqrt(2)
    s = birman_schwinger_system(CouplingPair(1, 0), z)
    assert s.m11 == pytest.approx(0, abs=1e-15)
    b = math.sqrt(2) - 1
    assert s.c2 / s.c1 == pytest.approx(-b, rel=1e-12)
    assert math.hypot(*s.apply(s.c1, s.c2)) <= 1e-10
    assert s.c1**2 + s.c2**2 == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("mu, lam", [(2, 3), (1, -1), (-2, -3), (2, -0.5), (0, 1.7)])
def test_null_vector_at_computed_roots(mu, lam):
    cp = CouplingPair(mu, lam)
    for z in find_discrete_spectrum(cp).eigenvalues:
        s = birman_schwinger_system(cp, z)
        assert s.c1 is not None
        assert math.hypot(*s.apply(s.c1, s.c2)) <= 1e-10
        assert s.c1**2 + s.c2**2 == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("mu, lam", [(2, 3), (1, -1), (-2, 0.5), (1, 0)])
def test_null_vector_reproduces_its_functionals(mu, lam):
    # ψ = (μ c1 + λ c2 cos q)/(z - ε) must satisfy ∫ψ dν = c1, ∫cos q ψ dν = c2;
    # checked with the quadrature oracle kernels
    cp = CouplingPair(mu, lam)
    for z in find_discrete_spectrum(cp).eigenvalues:
        s = birman_schwinger_system(cp, z)
        a = quad_reference("one", z, 8192)
        cos_int = -quad_reference("cos", z, 8192)
        cos2 = quad_reference("cos2", z, 8192)
        assert mu * s.c1 * a + lam * s.c2 * cos_int == pytest.approx(s.c1, abs=1e-9)
        assert mu * s.c1 * cos_int + lam * s.c2 * cos2 == pytest.approx(s.c2, abs=1e-9)


def _relative_residual(cp, ef, n):
    m = build_half_line(cp, n)
    g = np.zeros(m.order)
    v = ef.half_line_vector()
    g[: len(v)] = v
    return np.linalg.norm(m.matvec(g) - ef.eigenvalue * g) / np.linalg.norm(g)


def test_eigenfunction_rank1_example():
    cp = CouplingPair(1, 0)
    z = 1 + math.sqrt(2)
    ef = eigenfunction(cp, z, 20)
    ratios = ef.decay_ratios()
    assert np.allclose(ratios, -(math.sqrt(2) - 1), atol=1e-9)
    assert _relative_residual(cp, ef, 80) <= 1e-6


def test_eigenfunction_rejects_non_eigenvalues():
    with pytest.raises(ValueError):
        eigenfunction(CouplingPair(0, 0), 3.0, 10)
    with pytest.raises(ValueError):
        eigenfunction(CouplingPair(1, 0), 2.5, 10)
    with pytest.raises(ValueError):
        eigenfunction(CouplingPair(1, 0), 1 + math.sqrt(2), 0)


@pytest.mark.parametrize("mu, lam", [(1, -1), (2, 3), (-2, -3), (-2, 0.5)])
def test_eigenfunction_decay_and_residual(mu, lam):
    cp = CouplingPair(mu, lam)
    x_max = 60
    for z in find_discrete_spectrum(cp).eigenvalues:
        ef = eigenfunction(cp, z, x_max)
        assert is_determinant_root(cp, z)
        values = ef.lattice_values
        r = expected_decay_ratio(z)
        assert 0 < abs(r) < 1
        # geometric from x = 1 on; compare where values are well above roundoff
        usable = np.abs(values[:-1]) > 1e-9 * np.abs(values).max()
        ratios = ef.decay_ratios()[usable][1:]
        assert np.allclose(ratios, r, atol=1e-6)
        assert _relative_residual(cp, ef, 4 * x_max) <= 1e-6


def test_decay_sign_convention():
    # ground state below the band keeps one sign; the state above alternates
    cp = CouplingPair(1, -1)
    r = find_discrete_spectrum(cp)
    low = eigenfunction(cp, r.below[0], 30).lattice_values
    high = eigenfunction(cp, r.above[0], 30).lattice_values
    assert np.all(np.sign(low[1:12]) == np.sign(low[1]))
    assert np.all(np.sign(high[1:12]) * np.sign(high[2:13]) < 0)

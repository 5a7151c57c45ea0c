import itertools

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate
from scipy.special import eval_hermite, factorial

from dpsqed.errors import OutOfRegimeError, ValidationError
from dpsqed.greens import kernels, scans
from dpsqed.greens.kernels import LatticeSite

SITES = [(0, 0, 0), (1, 0, 0), (0, 2, 1), (2, 1, 1)]


def h(n, x):
    return eval_hermite(n, x) * np.exp(-x * x / 2) / np.sqrt(2.0 ** n * factorial(n) * np.sqrt(np.pi))


def spherical_oracle(n, n_hat, radial):
    """nquad over (r, theta, phi) of radial(r) * prod_a h_{n_a} h_{n_hat_a} on the unit-sphere direction."""
    def f(phi, th, r):
        x = r * np.array([np.sin(th) * np.cos(phi), np.sin(th) * np.sin(phi), np.cos(th)])
        prod = np.prod([h(n[a], x[a]) * h(n_hat[a], x[a]) for a in range(3)])
        return radial(r) * prod * np.sin(th)

    return integrate.nquad(f, [[0, 2 * np.pi], [0, np.pi], [0, 12]], opts={"epsabs": 1e-11, "epsrel": 1e-10})[0]


# --- lattice sites


def test_site_validation():
    assert LatticeSite((1, 2, 3)).degree == 6
    for bad in [(1, 2), (-1, 0, 0), (0.5, 0, 0), (True, 0, 0)]:
        with pytest.raises(ValidationError):
            LatticeSite(bad)


def test_sphere_moment_against_quadrature():
    for a, b, c in [(0, 0, 0), (2, 0, 0), (2, 2, 0), (4, 2, 2), (1, 0, 0)]:
        f = lambda phi, th: (
            (np.sin(th) * np.cos(phi)) ** a * (np.sin(th) * np.sin(phi)) ** b * np.cos(th) ** c * np.sin(th)
        )
        ref = integrate.dblquad(f, 0, np.pi, 0, 2 * np.pi, epsabs=1e-13)[0]
        assert kernels.sphere_moment(a, b, c) == pytest.approx(ref, abs=1e-12)
    assert kernels.sphere_moment(0, 0, 0) == pytest.approx(4 * np.pi)


# --- potential Green's function


def test_potential_ground_state_closed_form():
    g = kernels.potential_greens((0, 0, 0), (0, 0, 0))
    assert g.converged
    assert g.value == pytest.approx(2.0, abs=1e-13)


@pytest.mark.parametrize("n,n_hat", [((1, 0, 0), (1, 0, 0)), ((2, 0, 0), (0, 0, 0)), ((1, 1, 0), (0, 1, 1))])
def test_potential_against_spherical_oracle(n, n_hat):
    g = kernels.potential_greens(n, n_hat)
    phase = np.prod([1j ** n[a] * np.conj(1j ** n_hat[a]) for a in range(3)])
    ref = phase * spherical_oracle(n, n_hat, lambda r: 1.0)
    assert g.value == pytest.approx(ref, abs=1e-9)


def test_potential_conjugate_symmetry():
    for n, m in itertools.combinations(SITES, 2):
        a = kernels.potential_greens(n, m).value
        b = kernels.potential_greens(m, n).value
        assert a == pytest.approx(np.conj(b), abs=1e-13)


def test_potential_finite_on_small_lattice():
    for n in itertools.product(range(5), repeat=3):
        g = kernels.potential_greens(n, n)
        assert g.converged and np.isfinite(g.value)


# --- Klein-Gordon coincidence


def test_kg_ground_state_against_oracle():
    g = kernels.kg_coincidence_spatial((0, 0, 0), 1.0)
    ref = 0.5 * 4 * mp.pi * mp.pi ** -1.5 * mp.quad(lambda r: r * r * mp.exp(-r * r) / mp.sqrt(r * r + 1), [0, mp.inf])
    assert g.converged
    assert g.value.real == pytest.approx(float(ref), rel=1e-10)
    assert g.value.real == pytest.approx(0.34046029514993914, rel=1e-10)


def test_kg_against_spherical_oracle():
    n = (1, 0, 1)
    g = kernels.kg_coincidence_spatial(n, 0.5)
    ref = 0.5 * spherical_oracle(n, n, lambda r: r * r / np.sqrt(r * r + 0.25))
    assert g.value.real == pytest.approx(ref, rel=1e-8)


def test_kg_decreases_with_mass():
    vals = [kernels.kg_coincidence_spatial((1, 0, 0), mu).value.real for mu in (0.0, 0.5, 1.0, 2.0)]
    assert np.all(np.diff(vals) < 0)


def test_kg_finite_on_small_lattice():
    for n in itertools.product(range(5), repeat=3):
        g = kernels.kg_coincidence_spatial(n, 1.0)
        assert g.converged and np.isfinite(g.value)


def test_kg_rejects_negative_mass():
    with pytest.raises(ValidationError):
        kernels.kg_coincidence_spatial((0, 0, 0), -1.0)


# --- D+


def test_dplus_coincidence_value():
    # closed form -(i/2) pi^{-3/2} 4 pi int r e^{-r^2} dr
    d = kernels.dplus_coincidence()
    assert d.real == pytest.approx(0.0, abs=1e-14)
    assert d.imag == pytest.approx(-1 / np.sqrt(np.pi), rel=1e-12)


def test_dminus_is_negative_dplus():
    assert kernels.dminus_coincidence() == -kernels.dplus_coincidence()


@pytest.mark.parametrize("tau", [0.7, -2.0, 4.5])
def test_dplus_ground_state_with_time_offset(tau):
    d = kernels.dplus_direct((0, 0, 0), (0, 0, 0), tau).value
    ref = -0.5j * 4 * mp.pi ** -0.5 * mp.quad(lambda r: r * mp.exp(-r * r) * mp.expj(r * tau), [0, mp.inf])
    assert d == pytest.approx(complex(ref), abs=1e-10)


@pytest.mark.parametrize("n,n_hat", [((0, 0, 0), (0, 0, 0)), ((1, 0, 0), (1, 0, 0)), ((2, 0, 0), (0, 0, 0)), ((1, 1, 0), (1, 1, 0)), ((0, 2, 1), (0, 0, 1))])
@pytest.mark.parametrize("tau", [0.0, 1.5, -4.0])
def test_series_matches_direct(n, n_hat, tau):
    s = kernels.dplus_series_term(n, n_hat, tau)
    d = kernels.dplus_direct(n, n_hat, tau).value
    assert abs(s - d) <= 1e-6


def test_odd_axis_parity_vanishes():
    assert kernels.dplus_series_term((1, 0, 0), (0, 0, 0)) == 0
    assert abs(kernels.dplus_direct((1, 0, 0), (0, 0, 0)).value) < 1e-12
    assert abs(kernels.potential_greens((0, 1, 0), (0, 0, 0)).value) < 1e-13


def test_series_out_of_regime():
    with pytest.raises(OutOfRegimeError):
        kernels.dplus_series_term((3, 0, 0), (0, 0, 0))
    with pytest.raises(OutOfRegimeError):
        kernels.dplus_series_term((0, 0, 0), (0, 0, 0), tau=6.5)


@pytest.mark.parametrize("a,b,z", [(0.5, 1.5, 0.3), (-1.5, 0.5, -2.0), (2.0, 1.5, 1.0 + 2.0j), (-3.0, 0.5, -8.0j)])
def test_kummer_against_mpmath(a, b, z):
    assert kernels.kummer_m(a, b, z) == pytest.approx(complex(mp.hyp1f1(a, b, z)), rel=1e-12)


@pytest.mark.parametrize("nu", [-1, -2, -3, -4.5])
@pytest.mark.parametrize("z", [0.0, 0.8, -1.2j, 1.0 - 2.0j])
def test_parabolic_cylinder_against_mpmath(nu, z):
    assert kernels.parabolic_cylinder_d(nu, z) == pytest.approx(complex(mp.pcfd(nu, z)), rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("m", [1, 2, 5])
@pytest.mark.parametrize("tau", [0.0, 2.0, -5.0])
def test_radial_moment_against_mpmath(m, tau):
    ref = mp.quad(lambda r: r ** m * mp.exp(-r * r) * mp.expj(r * tau), [0, mp.inf])
    assert kernels.radial_moment(m, tau) == pytest.approx(complex(ref), abs=1e-12)


@pytest.mark.parametrize("n", range(6))
def test_hermite_coefficients_against_numpy(n):
    c = kernels.hermite_poly_coefficients(n)
    x = np.linspace(-2, 2, 9)
    poly = sum(v * x ** p for p, v in c.items())
    np.testing.assert_allclose(poly * np.exp(-x * x / 2), h(n, x), atol=1e-14)


# --- cutoff scans


@pytest.fixture(scope="module")
def scan_a():
    return scans.cutoff_scan_A()


@pytest.fixture(scope="module")
def photon():
    return scans.cutoff_scan_continuous_photon()


def test_scan_a_logarithmic(scan_a):
    assert abs(scan_a.fit.degree) <= 0.1
    assert scan_a.fit.log_coefficient > 1.0
    assert not scan_a.fit.inconclusive
    assert scan_a.tags[0] == "delta(0)^1"


def test_scan_a_log_coefficient_mass_independent(scan_a):
    other = scans.cutoff_scan_A(m=2.0)
    assert other.fit.log_coefficient == pytest.approx(scan_a.fit.log_coefficient, rel=0.1)


def test_scan_a_refinement_stable(scan_a):
    fine = scans.cutoff_scan_A(lambdas=scans.refine_grid(scans.DEFAULT_LAMBDAS))
    assert abs(fine.fit.degree - scan_a.fit.degree) < 0.1


def test_photon_quadratic(photon):
    assert photon.fit.degree == pytest.approx(2.0, abs=0.15)
    ratio = np.asarray(photon.values) / np.asarray(photon.lambdas) ** 2
    assert ratio[-1] == pytest.approx(ratio[-2], rel=0.01)
    assert ratio[-1] == pytest.approx(2 * np.pi ** 2, rel=0.01)


def test_photon_refinement_and_order_independence(photon):
    fine = scans.cutoff_scan_continuous_photon(lambdas=scans.refine_grid(scans.DEFAULT_LAMBDAS))
    assert abs(fine.fit.degree - photon.fit.degree) < 0.1
    rev = scans.cutoff_scan_continuous_photon(lambdas=scans.DEFAULT_LAMBDAS[::-1])
    assert rev.fit == photon.fit


def test_fit_growth_on_known_laws():
    # secant derivatives are exact for powers on a geometric grid
    lam = np.geomspace(10, 1000, 5)
    assert scans.fit_growth(lam, 3 * lam ** 2).degree == pytest.approx(2.0, abs=1e-12)
    f = scans.fit_growth(lam, 5 * np.log(lam) + 1)
    assert f.degree == pytest.approx(0.0, abs=1e-12)
    assert f.log_coefficient == pytest.approx(5.0)
    assert scans.fit_growth(lam, np.ones(5)).inconclusive


@pytest.mark.parametrize(
    "bad", [[10, 100, 1000], [10, 20, 30, 40], [10, 10, 100, 1000], [-1, 10, 100, 1000], [1, 10, np.inf, 100]]
)
def test_validate_lambdas_rejects(bad):
    with pytest.raises(ValidationError):
        scans.validate_lambdas(bad)


def test_channel_scan_is_seeded():
    a = scans.cutoff_scan_channels(1, samples=2000, seed=7)
    b = scans.cutoff_scan_channels(1, samples=2000, seed=7)
    assert a.values == b.values
    assert all(np.isfinite(a.values))
    assert "seed=7" in a.tags
    with pytest.raises(ValidationError):
        scans.cutoff_scan_channels(4, samples=10)


def test_free_ball_against_quadrature():
    A, lam = 0.7, 3.0
    one = integrate.quad(lambda u: (u * u + A) ** -2, -lam, lam)[0]
    two = integrate.quad(lambda u: 2 * np.pi * u * (u * u + A) ** -2, 0, lam)[0]
    three = integrate.quad(lambda u: 4 * np.pi * u * u * (u * u + A) ** -2, 0, lam)[0]
    for nf, ref in [(1, one), (2, two), (3, three)]:
        assert scans._free_ball(nf, np.array(A), lam) == pytest.approx(ref, rel=1e-12)

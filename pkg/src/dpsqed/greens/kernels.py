"""Three-dimensional Green's-function integrals of the lattice model.

All integrands are products of one-dimensional basis functions, so they
factor into e^{-|k|^2} times a polynomial. Integrals are done in spherical
coordinates: product Gauss-Legendre(cos theta) x trapezoid(phi) on the
sphere, and Gauss-Hermite or adaptive quadrature in the radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np
from scipy import integrate
from scipy.special import gamma

from ..basis import hermite_functions, phase
from ..errors import OutOfRegimeError, ValidationError
from ..quadrature import DEFAULT_QUAD, QuadConfig, QuadratureResult, gauss_hermite, gauss_legendre, rounding_floor

SERIES_MAX_INDEX = 2
SERIES_MAX_TAU = 6.0


@dataclass(frozen=True)
class LatticeSite:
    n: tuple

    def __post_init__(self):
        n = tuple(self.n)
        if len(n) != 3 or any(isinstance(v, bool) or int(v) != v or v < 0 for v in n):
            raise ValidationError(f"lattice site needs three nonnegative integers, got {self.n!r}")
        object.__setattr__(self, "n", tuple(int(v) for v in n))

    @property
    def degree(self) -> int:
        return sum(self.n)


def _site(s) -> LatticeSite:
    return s if isinstance(s, LatticeSite) else LatticeSite(tuple(s))


@lru_cache(maxsize=32)
def sphere_rule(n_theta: int, n_phi: int):
    """Directions and weights integrating polynomials of degree < min(2 n_theta, n_phi) exactly."""
    ct, wt = gauss_legendre(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    st = np.sqrt(1 - ct ** 2)
    dirs = np.stack(
        [
            (st[:, None] * np.cos(phi)[None, :]).ravel(),
            (st[:, None] * np.sin(phi)[None, :]).ravel(),
            np.repeat(ct, n_phi),
        ]
    )
    w = np.repeat(wt, n_phi) * (2 * np.pi / n_phi)
    dirs.setflags(write=False)
    w.setflags(write=False)
    return dirs, w


def _angular_rule(degree: int, extra: int = 0):
    return sphere_rule(degree // 2 + 2 + extra, degree + 2 + 2 * extra)


def _polynomial_product(n, n_hat, points: np.ndarray) -> np.ndarray:
    """prod_a P_{n_a}(x_a) P_{n_hat_a}(x_a) with P_n = h_n e^{x^2/2}; points shape (3, m)."""
    out = np.ones(points.shape[1])
    for a in range(3):
        top = max(n[a], n_hat[a])
        tab = hermite_functions(top, points[a], weighted=False)
        out = out * tab[n[a]] * tab[n_hat[a]]
    return out


def _site_phase(n, n_hat) -> complex:
    out = 1 + 0j
    for a in range(3):
        out *= phase(n[a]) * np.conj(phase(n_hat[a]))
    return out


def angular_average(n, n_hat, r, extra: int = 0) -> np.ndarray:
    """Q(r) = int dOmega prod_a P P at radius r (vectorized in r)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    deg = sum(n) + sum(n_hat)
    dirs, w = _angular_rule(deg, extra)
    pts = (r[:, None, None] * dirs[None, :, :]).transpose(1, 0, 2).reshape(3, -1)
    vals = _polynomial_product(n, n_hat, pts).reshape(r.size, -1)
    return vals @ w


def potential_greens(n, n_hat, quad: QuadConfig = DEFAULT_QUAD) -> QuadratureResult:
    """G(n, n_hat) = int (k.k)^{-1} prod_a xi_{n_a}(k_a) conj(xi_{n_hat_a}(k_a)) d^3k.

    The r^2 of the measure cancels the kernel, leaving the even function
    e^{-r^2} Q(r) on the half line, which Gauss-Hermite integrates exactly.
    """
    n, n_hat = _site(n).n, _site(n_hat).n
    deg = sum(n) + sum(n_hat)

    def rule(extra):
        x, w = gauss_hermite(deg // 2 + 4 + extra)
        q = angular_average(n, n_hat, x, extra)
        return 0.5 * np.sum(w * q), 0.5 * np.sum(w * np.abs(q))

    v1, mag = rule(0)
    v2, _ = rule(4)
    err = float(abs(v1 - v2) + rounding_floor(mag))
    val = complex(_site_phase(n, n_hat) * v1)
    return QuadratureResult(val, err, err <= quad.tolerance * max(1.0, abs(val)), "spherical-gauss-hermite")


def _radial_adaptive(f, quad: QuadConfig):
    """Adaptive half-line quadrature of a real radial integrand."""
    val, err = integrate.quad(f, 0, np.inf, epsabs=quad.tolerance, epsrel=quad.tolerance, limit=400)
    return val, err


def kg_coincidence_spatial(n, mu: float, quad: QuadConfig = DEFAULT_QUAD) -> QuadratureResult:
    """Klein-Gordon coincidence value with the on-shell energy weight pi/sqrt(k.k + mu^2).

    Includes the (2 pi)^{-1} pi^{-3/2} prefactor, so the result is
    (1/2) int prod_j h_{n_j}(k_j)^2 / sqrt(k.k + mu^2) d^3k.
    """
    n = _site(n).n
    if not mu >= 0:
        raise ValidationError("mu must be nonnegative")

    def f(r):
        return float(r * r * np.exp(-r * r) * angular_average(n, n, r)[0] / np.sqrt(r * r + mu * mu))

    val, err = _radial_adaptive(f, quad)
    val *= 0.5
    err *= 0.5
    return QuadratureResult(complex(val), float(err), err <= 10 * quad.tolerance * max(1.0, abs(val)), "adaptive")


def dplus_direct(n, n_hat, tau: float = 0.0, quad: QuadConfig = DEFAULT_QUAD) -> QuadratureResult:
    """Positive-frequency propagator by direct integration.

    The energy contour around the positive pole contributes
    -i pi e^{i omega tau}/omega with omega = |k|, giving
    (-i/2) int prod xi conj(xi) e^{i r tau} / r d^3k.
    """
    n, n_hat = _site(n).n, _site(n_hat).n

    def part(trig):
        def f(r):
            return float(r * np.exp(-r * r) * trig(r * tau) * angular_average(n, n_hat, r)[0])

        return _radial_adaptive(f, quad)

    re, e1 = part(np.cos)
    im, e2 = part(np.sin)
    val = -0.5j * _site_phase(n, n_hat) * complex(re, im)
    err = 0.5 * float(np.hypot(e1, e2))
    return QuadratureResult(complex(val), err, err <= 10 * quad.tolerance * max(1.0, abs(val)), "adaptive")


def dplus_coincidence(quad: QuadConfig = DEFAULT_QUAD) -> complex:
    """D+ at coincident ground-state sites and equal times, by direct integration."""
    return dplus_direct((0, 0, 0), (0, 0, 0), 0.0, quad).require_converged().value


def dminus_coincidence(quad: QuadConfig = DEFAULT_QUAD) -> complex:
    """Negative-frequency counterpart; the pole at -omega flips the sign at tau = 0."""
    return -dplus_coincidence(quad)


# ---------------------------------------------------------------------------
# closed-form series


def kummer_m(a: float, b: float, z: complex, tol: float = 1e-17, max_terms: int = 500) -> complex:
    """Confluent hypergeometric M(a, b, z) by its power series."""
    term = 1 + 0j
    total = term
    for j in range(max_terms):
        term *= (a + j) / (b + j) * z / (j + 1)
        total += term
        if abs(term) <= tol * abs(total) and j > 2:
            return complex(total)
    raise OutOfRegimeError("Kummer series did not converge; argument too large")


def parabolic_cylinder_d(nu: float, z: complex) -> complex:
    """D_nu(z) from the two Kummer series (small to moderate |z|)."""
    w = z * z / 2
    pre = 2 ** (nu / 2) * np.exp(-z * z / 4)
    g1 = gamma((1 - nu) / 2)
    g2 = gamma(-nu / 2)
    t1 = np.sqrt(np.pi) / g1 * kummer_m(-nu / 2, 0.5, w) if np.isfinite(g1) else 0.0
    t2 = np.sqrt(2 * np.pi) * z / g2 * kummer_m((1 - nu) / 2, 1.5, w) if np.isfinite(g2) else 0.0
    return complex(pre * (t1 - t2))


def radial_moment(m: int, tau: float) -> complex:
    """int_0^inf r^m e^{-r^2} e^{i r tau} dr via a parabolic cylinder function."""
    return complex(
        2 ** (-(m + 1) / 2) * factorial(m) * np.exp(-tau * tau / 8) * parabolic_cylinder_d(-(m + 1), -1j * tau / np.sqrt(2))
    )


def sphere_moment(a: int, b: int, c: int) -> float:
    """int x^a y^b z^c dOmega over the unit sphere."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    return float(2 * gamma((a + 1) / 2) * gamma((b + 1) / 2) * gamma((c + 1) / 2) / gamma((a + b + c + 3) / 2))


def hermite_poly_coefficients(n: int) -> dict:
    """Coefficients of P_n(x) = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) by power."""
    norm = np.pi ** -0.25 / np.sqrt(2.0 ** n * factorial(n))
    out = {}
    for j in range(n // 2 + 1):
        out[n - 2 * j] = norm * factorial(n) * (-1) ** j * 2.0 ** (n - 2 * j) / (factorial(j) * factorial(n - 2 * j))
    return out


def _product_coefficients(na: int, nb: int) -> dict:
    out: dict = {}
    for p1, c1 in hermite_poly_coefficients(na).items():
        for p2, c2 in hermite_poly_coefficients(nb).items():
            out[p1 + p2] = out.get(p1 + p2, 0.0) + c1 * c2
    return out


def dplus_series_term(n, n_hat, tau: float = 0.0) -> complex:
    """Finite-sum expansion of D+ for quantum numbers up to 2.

    Expands the polynomial part in monomials, integrates the angles exactly
    and uses parabolic cylinder functions for the radial moments.
    """
    n, n_hat = _site(n).n, _site(n_hat).n
    if max(n + n_hat) > SERIES_MAX_INDEX:
        raise OutOfRegimeError(f"series form is limited to quantum numbers <= {SERIES_MAX_INDEX}")
    if abs(tau) > SERIES_MAX_TAU:
        raise OutOfRegimeError(f"series form is limited to |t - t_hat| <= {SERIES_MAX_TAU}")
    axes = [_product_coefficients(n[a], n_hat[a]) for a in range(3)]
    total = 0j
    for pa, ca in axes[0].items():
        for pb, cb in axes[1].items():
            for pc, cc in axes[2].items():
                ang = sphere_moment(pa, pb, pc)
                if ang:
                    total += ca * cb * cc * ang * radial_moment(pa + pb + pc + 1, tau)
    return complex(-0.5j * _site_phase(n, n_hat) * total)

"""The vertex distribution delta#(p, q, k) = sum_n xi_n(p) xi_n(q) xi_n(k).

Exact partial sums, the asymptotic closed form d# with its four sharp and
four soft channels, three-dimensional products and the large-N tails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import _check_index, _sweep, eval_xi, hermite_functions, phase
from .distributions import TWO_PI, DistributionValue, form_label, make_term, same_line
from .errors import ValidationError
from .quadrature import DEFAULT_QUAD, QuadConfig, QuadratureResult, check_node_count, gauss_hermite, node_count, rounding_floor

VARIABLES = ("p", "q", "k")
# the four channels and the sign in front of i sgn(channel) in the soft terms
CHANNELS = ((1, 1, 1), (-1, 1, 1), (1, 1, -1), (-1, 1, -1))
SOFT_SIGNS = (1, -1, -1, 1)
SIGMA_PREFACTOR = (2.0 * np.sqrt(np.pi)) ** -3


def channel_values(p: float, q: float, k: float) -> np.ndarray:
    return np.array([np.dot(c, (p, q, k)) for c in CHANNELS], dtype=float)


def channel_labels() -> list[str]:
    return [form_label(c, VARIABLES) for c in CHANNELS]


def _vertex_weights(n: np.ndarray) -> np.ndarray:
    """(-i)^n = i^{3n}, exact."""
    return np.array([phase(3 * int(m)) for m in n])


def delta_sharp_partial(p: float, q: float, k: float, N: int) -> complex:
    """sum_{n=0}^{N} xi_n(p) xi_n(q) xi_n(k) from one shared recurrence sweep."""
    N = _check_index(N)
    total = 0j
    for n, h in enumerate(_sweep(N, np.array([p, q, k], dtype=float))):
        total += phase(3 * n) * (h[0] * h[1] * h[2])
    return complex(total)


def delta_sharp_terms(p: float, q: float, k: float, M: int) -> np.ndarray:
    """Individual terms xi_n(p) xi_n(q) xi_n(k) for n = 0..M."""
    h = hermite_functions(M, np.array([p, q, k], dtype=float))
    return _vertex_weights(np.arange(M + 1)) * h[:, 0] * h[:, 1] * h[:, 2]


def delta3_sharp_partial(pvec, qvec, kvec, Nvec) -> complex:
    """Product over the three axes of the one-dimensional partial sums."""
    pvec, qvec, kvec, Nvec = (tuple(v) for v in (pvec, qvec, kvec, Nvec))
    if not all(len(v) == 3 for v in (pvec, qvec, kvec, Nvec)):
        raise ValidationError("vector arguments must be triples")
    out = 1 + 0j
    for a in range(3):
        out *= delta_sharp_partial(pvec[a], qvec[a], kvec[a], Nvec[a])
    return out


def d_sharp_distribution() -> DistributionValue:
    """Asymptotic closed form of the vertex distribution, as a distribution."""
    terms = []
    for c, s in zip(CHANNELS, SOFT_SIGNS):
        terms.append(make_term(1.0 / TWO_PI, factors=((c, 0.5, 0),), deltas=(c,)))
        terms.append(make_term(0.25 / TWO_PI, factors=((c, -0.5, 0),)))
        terms.append(make_term(0.25j * s / TWO_PI, factors=((c, -0.5, 1),)))
    return DistributionValue(tuple(terms), VARIABLES)


def d_sharp(p: float | None = None, q: float | None = None, k: float | None = None) -> DistributionValue:
    """d#(p, q, k); with a point given, ``smooth()`` evaluates there."""
    dist = d_sharp_distribution()
    if p is None:
        return dist
    return dist.at(p, q, k)


def sigma_N(p: float | None, q: float | None, k: float | None, N: int) -> DistributionValue:
    """Large-N tail form with its N^{-1/2}-suppressed spikes on every channel."""
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise ValidationError(f"N must be a positive integer, got {N!r}")
    a = SIGMA_PREFACTOR * N ** -0.25
    terms = []
    for c in CHANNELS:
        terms.append(make_term(a * N ** -0.5, factors=((c, -1.0, 0),), deltas=(c,)))
        terms.append(make_term(1j * a, factors=((c, -1.0, 1),)))
    dist = DistributionValue(tuple(terms), VARIABLES)
    return dist if p is None else dist.at(p, q, k)


def pair_with_test_function(m: int, p: float, q: float, N: int, quad: QuadConfig = DEFAULT_QUAD) -> QuadratureResult:
    """int conj(xi_m(k)) delta#_N(p, q, k) dk by Gauss-Hermite quadrature."""
    m, N = _check_index(m), _check_index(N)
    if m > N:
        raise ValidationError("need m <= N")
    coeff = _vertex_weights(np.arange(N + 1)) * np.prod(hermite_functions(N, np.array([p, q])), axis=1)

    def rule(npts):
        x, w = gauss_hermite(npts)
        pk = hermite_functions(max(N, m), x, weighted=False)
        integrand = np.conj(phase(m)) * pk[m] * (coeff @ pk[: N + 1])
        return np.sum(w * integrand), np.sum(w * np.abs(integrand))

    npts = node_count(2 * max(m, N) + 64, quad)
    v1, mag = rule(npts)
    v2, _ = rule(check_node_count(npts, quad))
    err = float(abs(v1 - v2) + rounding_floor(mag))
    return QuadratureResult(complex(v1), err, err <= quad.tolerance, "gauss-hermite")


@dataclass(frozen=True)
class DistinctnessReport:
    m: int
    p: float
    q: float
    pairing: complex
    pairing_error: float
    dirac_value: complex
    difference: float


def theorem_a1_distinctness(m: int, p: float, q: float, N: int, quad: QuadConfig = DEFAULT_QUAD) -> DistinctnessReport:
    """Compare the pairing of xi_m with delta# against what 2 pi delta(p+q+k) would give."""
    res = pair_with_test_function(m, p, q, N, quad)
    dirac = complex(np.conj(eval_xi(m, -(p + q))))
    # 2 pi delta(p+q+k) paired with conj(xi_m) gives conj(xi_m(-(p+q))) = xi_m(p+q)
    return DistinctnessReport(m, p, q, res.value, res.error_estimate, dirac, float(abs(res.value - dirac)))


@dataclass(frozen=True)
class TailComparison:
    point: tuple
    N: int
    M: int
    xi_tail: complex
    zeta_tail: complex
    sigma_smooth: complex
    envelope_ratio: float
    xi_envelope_ratio: float
    integral_form: complex | None
    claim: str = "asymptotic (qualitative envelope), not a convergence statement"


def zeta_tail(p: float, q: float, k: float, N: int, M: int) -> complex:
    n = np.arange(N + 1, M + 1)
    if n.size == 0:
        return 0j
    amp = np.pi ** -1.5 * n ** -0.75
    rn = 2.0 * np.sqrt(n)
    even = amp * np.cos(rn * p) * np.cos(rn * q) * np.cos(rn * k)
    odd = -1j * amp * np.sin(rn * p) * np.sin(rn * q) * np.sin(rn * k)
    return complex(np.sum(np.where(n % 2 == 0, even, odd)))


def zeta_tail_integral_form(p: float, q: float, k: float, N: int, M: float | None = None) -> complex:
    """Channel integrals standing in for the zeta tail.

    Each channel contributes int y^{-3/4} exp(+-2 i c sqrt y) dy over
    [N + 1/2, M + 1/2] (midpoint placement of the sum), evaluated by the
    oscillatory segment summation.
    """
    from .oscillatory import tail_integral

    total = 0j
    for c, s in zip(channel_values(p, q, k), SOFT_SIGNS):
        val = tail_integral(s * c, N + 0.5).value
        if M is not None:
            val -= tail_integral(s * c, M + 0.5).value
        total += val
    return SIGMA_PREFACTOR * total


def tail_partial_vs_sigma(
    p: float, q: float, k: float, N: int, M: int, quad: QuadConfig = DEFAULT_QUAD, with_integral: bool = True
) -> TailComparison:
    """Brute-force xi and zeta tails n = N+1..M against the smooth part of sigma_N."""
    N, M = _check_index(N), _check_index(M)
    if M < N:
        raise ValidationError("need M >= N")
    sig = sigma_N(p, q, k, max(N, 1)).smooth()
    if M == N:
        return TailComparison((p, q, k), N, M, 0j, 0j, sig, 0.0, 0.0, 0j if with_integral else None)
    if N < 32:
        raise ValidationError("need N >= 32 for the asymptotic comparison")
    xi = complex(np.sum(delta_sharp_terms(p, q, k, M)[N + 1 :]))
    zt = zeta_tail(p, q, k, N, M)
    integ = zeta_tail_integral_form(p, q, k, N, M) if with_integral else None
    return TailComparison((p, q, k), N, M, xi, zt, sig, abs(zt) / abs(sig), abs(xi) / abs(sig), integ)

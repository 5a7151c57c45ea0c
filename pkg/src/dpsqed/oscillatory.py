"""Summation of slowly decaying oscillatory integrals by sign segments.

The half-line integral of x^{-beta} sin(kx) (or cos, or exp) is split at the
zeros of the oscillating factor. The resulting alternating series of segment
integrals is accelerated by repeated averaging of its partial sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaln

from .distributions import DistributionValue, make_term
from .errors import OutOfRegimeError, ValidationError
from .quadrature import QuadratureResult, gauss_legendre, rounding_floor

SEGMENT_NODES = 32
AVERAGING_DEPTH = 20
TOLERANCE = 1e-10
DEFAULT_MAX_SEGMENTS = 4096
ASYMPTOTIC_GUARD = 5.0


@dataclass(frozen=True)
class Segment:
    start: float
    stop: float
    value: float
    part: str = "sin"


@dataclass(frozen=True)
class SegmentSum:
    segments: tuple
    accumulated: complex
    alternation_verified: bool
    error_estimate: float
    converged: bool
    spike: DistributionValue | None = None

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.segments])

    @property
    def segments_used(self) -> int:
        return len(self.segments)

    def as_result(self) -> QuadratureResult:
        return QuadratureResult(self.accumulated, self.error_estimate, self.converged, "segment-sum")


def repeated_average(partial: np.ndarray, depth: int) -> float:
    """Average neighbouring partial sums ``depth`` times and return the survivor."""
    t = np.asarray(partial[-(depth + 1) :], dtype=float)
    while t.size > 1:
        t = 0.5 * (t[:-1] + t[1:])
    return float(t[0])


def _zeros_after(start: float, k: float, trig: str, count: int) -> np.ndarray:
    """First ``count`` zeros of trig(kx) strictly greater than ``start``."""
    step = np.pi / abs(k)
    offset = 0.0 if trig == "sin" else 0.5
    first = int(np.floor(start / step - offset)) + 1
    z = (first + offset + np.arange(count)) * step
    return z[z > start] if z[0] <= start else z


def _first_segment(k: float, beta: float, trig: str, a: float) -> float:
    """int_0^a x^{-beta} trig(kx) dx by termwise integration of the Taylor series (|ka| <= pi)."""
    j = np.arange(40)
    e = 2 * j + (1 if trig == "sin" else 0)
    logfact = gammaln(e + 1.0)
    mag = np.exp(e * np.log(abs(k) * a) - logfact) * a ** (1.0 - beta) / (e + 1.0 - beta)
    sign = (-1.0) ** j * (np.sign(k) if trig == "sin" else 1.0)
    return float(np.sum(sign * mag))


def _segment_integrals(k: float, beta: float, trig: str, edges: np.ndarray, singular_first: bool) -> np.ndarray:
    fn = np.sin if trig == "sin" else np.cos
    xl, wl = gauss_legendre(SEGMENT_NODES)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    x = a[:, None] + (xl[None, :] + 1.0) * half[:, None]
    with np.errstate(divide="ignore"):
        vals = (wl[None, :] * fn(k * x) * x ** -beta).sum(axis=1) * half
    if singular_first:
        vals[0] = _first_segment(k, beta, trig, edges[1])
    return vals


def _segment_series(k: float, beta: float, trig: str, start: float, max_segments: int, tol: float = TOLERANCE):
    """Segment sum of int_start^inf x^{-beta} trig(kx) dx with averaging acceleration."""
    if max_segments < AVERAGING_DEPTH + 2:
        raise ValidationError(f"max_segments must be at least {AVERAGING_DEPTH + 2}")
    count = min(64, max_segments)
    while True:
        zeros = _zeros_after(start, k, trig, count)
        edges = np.concatenate(([start], zeros[: count]))
        c = _segment_integrals(k, beta, trig, edges, singular_first=(start == 0.0))
        partial = np.cumsum(c)
        est = repeated_average(partial, AVERAGING_DEPTH)
        prev = repeated_average(partial[:-1], AVERAGING_DEPTH)
        err = abs(est - prev) + rounding_floor(float(np.sum(np.abs(c))))
        done = err < tol * max(1.0, abs(est))
        if done or count >= max_segments:
            break
        count = min(2 * count, max_segments)
    signs = np.sign(c)
    alternating = bool(np.all(signs[1:] == -signs[:-1]) and np.all(signs != 0))
    segs = tuple(Segment(float(a), float(b), float(v), trig) for a, b, v in zip(edges[:-1], edges[1:], c))
    return segs, est, alternating, err, done


def _check_k_beta(k: float, beta: float):
    if not np.isfinite(k) or k == 0:
        raise ValidationError("k must be finite and nonzero")
    if not 0 < beta < 1:
        raise ValidationError("beta must lie in (0, 1)")


def segment_sum_sin(k: float, beta: float, max_segments: int = DEFAULT_MAX_SEGMENTS) -> SegmentSum:
    """int_0^inf sin(kx) x^{-beta} dx over the segments [n pi/|k|, (n+1) pi/|k|]."""
    _check_k_beta(k, beta)
    segs, est, alt, err, done = _segment_series(k, beta, "sin", 0.0, max_segments)
    return SegmentSum(segs, complex(est), alt, err, done)


def segment_sum_cos(k: float, beta: float, max_segments: int = DEFAULT_MAX_SEGMENTS) -> SegmentSum:
    """int_0^inf cos(kx) x^{-beta} dx; segments end at the zeros (n + 1/2) pi/|k|."""
    _check_k_beta(k, beta)
    segs, est, alt, err, done = _segment_series(k, beta, "cos", 0.0, max_segments)
    return SegmentSum(segs, complex(est), alt, err, done)


def exp_spike(beta: float) -> DistributionValue:
    """-2 cos((1-beta) pi/2) Gamma(-beta) |k|^beta delta(k), kept symbolic."""
    coef = -2.0 * np.cos((1.0 - beta) * np.pi / 2) * gamma(-beta)
    return DistributionValue((make_term(coef, factors=(((1,), beta, 0),), deltas=((1,),)),), ("k",))


def segment_sum_exp(k: float, beta: float, max_segments: int = DEFAULT_MAX_SEGMENTS) -> SegmentSum:
    """Off-spike part of int_0^inf e^{ikx} x^{-beta} dx from cosine and sine segment sums."""
    c = segment_sum_cos(k, beta, max_segments)
    s = segment_sum_sin(k, beta, max_segments)
    return SegmentSum(
        c.segments + s.segments,
        complex(c.accumulated.real, s.accumulated.real),
        c.alternation_verified and s.alternation_verified,
        float(np.hypot(c.error_estimate, s.error_estimate)),
        c.converged and s.converged,
        exp_spike(beta),
    )


def closed_form_sin(k: float, beta: float) -> float:
    return float(np.sign(k) * gamma(1 - beta) * np.sin((1 - beta) * np.pi / 2) / abs(k) ** (1 - beta))


def closed_form_exp(k: float, beta: float) -> complex:
    return complex(gamma(1 - beta) / abs(k) ** (1 - beta) * np.exp(1j * np.sign(k) * (1 - beta) * np.pi / 2))


def mean_value_offsets(result: SegmentSum, k: float, beta: float) -> np.ndarray:
    """Theta_n with |c_n| = (2/|k|) ((n + Theta_n) pi/|k|)^{-beta}.

    The mean-value theorem for integrals places the evaluation point of
    x^{-beta} inside segment n, so each Theta_n must fall in (0, 1).
    Only sine segments starting at the origin are meaningful here.
    """
    c = np.abs(np.array([s.value for s in result.segments if s.part == "sin"]))
    n = np.arange(c.size)
    xi = (c * abs(k) / 2.0) ** (-1.0 / beta)
    return xi * abs(k) / np.pi - n


def tail_integral(k: float, N: float, max_segments: int = DEFAULT_MAX_SEGMENTS) -> QuadratureResult:
    """int_N^inf y^{-3/4} e^{2ik sqrt y} dy = sqrt 2 int_{2 sqrt N}^inf x^{-1/2} e^{ikx} dx."""
    if not np.isfinite(k) or k == 0:
        raise ValidationError("k must be finite and nonzero")
    if not N >= 1:
        raise ValidationError("N must be at least 1")
    a = 2.0 * np.sqrt(N)
    _, re, _, e1, ok1 = _segment_series(k, 0.5, "cos", a, max_segments)
    _, im, _, e2, ok2 = _segment_series(k, 0.5, "sin", a, max_segments)
    r2 = np.sqrt(2.0)
    return QuadratureResult(complex(r2 * re, r2 * im), float(r2 * np.hypot(e1, e2)), ok1 and ok2, "segment-sum")


def tail_leading_order(k: float, N: float) -> complex:
    """Two-term integration-by-parts expansion of the tail integral for large |k| sqrt N."""
    ph = np.exp(2j * k * np.sqrt(N))
    return complex(ph * (1j * N ** -0.25 / k + N ** -0.75 / (4 * k * k)))


@dataclass(frozen=True)
class TailAsymptotic:
    spike_weight: float
    smooth: complex
    spike_tag: str = "delta(k)"


def tail_asymptotic(k: float, N: float) -> TailAsymptotic:
    """Compressed large-N form N^{-1/4}|k|^{-1}[N^{-1/2} delta(k) + i sgn(k)]."""
    if not np.isfinite(k) or k == 0:
        raise ValidationError("k must be finite and nonzero")
    if abs(k) * np.sqrt(N) < ASYMPTOTIC_GUARD:
        raise OutOfRegimeError(f"|k| sqrt(N) = {abs(k) * np.sqrt(N):.3g} is below {ASYMPTOTIC_GUARD}")
    base = N ** -0.25 / abs(k)
    return TailAsymptotic(spike_weight=float(base * N ** -0.5), smooth=complex(1j * np.sign(k) * base))


@dataclass(frozen=True)
class TailDeviation:
    k: float
    N: float
    numeric: complex
    asymptotic: complex
    modulus_deviation: float
    phase_aware_deviation: float


def compare_tail(k: float, N: float) -> TailDeviation:
    """Relative deviation of the compressed form from the numerical tail.

    The compressed form has no e^{2ik sqrt N} phase, so the primary metric
    compares moduli; the full complex deviation is reported alongside.
    """
    num = tail_integral(k, N).require_converged().value
    asy = tail_asymptotic(k, N).smooth
    return TailDeviation(
        float(k),
        float(N),
        num,
        asy,
        abs(abs(num) - abs(asy)) / abs(num),
        abs(num - asy) / abs(num),
    )

"""Cutoff scans that read off the degree of divergence of self-energy integrands.

Each scan integrates a scalar coefficient function over the Euclidean ball
|k| <= Lambda for a grid of cutoffs and fits the growth law. The degree is
the slope of log|dI/dlog Lambda| against log Lambda; a logarithmic
divergence has degree 0 with a nonzero coefficient of log Lambda.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..errors import ValidationError

DEFAULT_LAMBDAS = (10.0, 30.0, 100.0, 300.0, 1000.0)
RESIDUAL_THRESHOLD = 0.1
FOUR_D_SPHERE = 2 * np.pi ** 2  # area of the unit 3-sphere

DISCRETE_TAGS = ("delta(0)^1",)
CONTINUOUS_TAGS = ("delta(0)^4",)


@dataclass(frozen=True)
class GrowthFit:
    degree: float
    log_coefficient: float
    residual: float
    inconclusive: bool


@dataclass(frozen=True)
class CutoffScan:
    lambdas: tuple
    values: tuple
    fit: GrowthFit
    label: str
    tags: tuple = ()
    components: dict | None = None

    def __post_init__(self):
        lam = np.asarray(self.lambdas)
        if lam.size < 4 or np.any(np.diff(lam) <= 0):
            raise ValidationError("a scan needs at least 4 strictly increasing cutoffs")


def validate_lambdas(lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size < 4:
        raise ValidationError(f"need at least 4 cutoffs, got {lam.size}")
    if np.any(~np.isfinite(lam)) or np.any(lam <= 0):
        raise ValidationError("cutoffs must be positive and finite")
    lam = np.sort(lam)
    if np.any(np.diff(lam) == 0):
        raise ValidationError("cutoffs must be distinct")
    if lam[-1] / lam[0] < 100 * (1 - 1e-12):
        raise ValidationError("cutoffs must span at least two decades")
    return lam


def fit_growth(lambdas, values) -> GrowthFit:
    """Growth degree from local log-derivatives plus a least-squares log coefficient."""
    lam = np.asarray(lambdas, dtype=float)
    val = np.asarray(values, dtype=float)
    order = np.argsort(lam)
    lam, val = lam[order], val[order]
    t = np.log(lam)
    deriv = np.diff(val) / np.diff(t)
    mid = 0.5 * (t[1:] + t[:-1])
    with np.errstate(divide="ignore"):
        y = np.log(np.abs(deriv))
    if not np.all(np.isfinite(y)):
        return GrowthFit(float("nan"), 0.0, float("inf"), True)
    slope, icpt = np.polyfit(mid, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * mid + icpt)) ** 2)))
    log_coef = float(np.polyfit(t, val, 1)[0])
    return GrowthFit(float(slope), log_coef, resid, resid > RESIDUAL_THRESHOLD)


def refine_grid(lambdas) -> np.ndarray:
    """Insert the geometric midpoint between neighbouring cutoffs."""
    lam = np.sort(np.asarray(lambdas, dtype=float))
    mids = np.sqrt(lam[1:] * lam[:-1])
    return np.sort(np.concatenate([lam, mids]))


def _radial_integral(f, lam: float) -> float:
    """int_0^Lambda f(K) dK, split at decades so quad sees each scale."""
    edges = [0.0]
    e = 1e-3
    while e < lam:
        edges.append(e)
        e *= 10
    edges.append(lam)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)[0]
    return total


def _scan_a_values(m: float, lam: float):
    """Coefficients of I and gamma^4 in integrand A, per unit mass, after Wick rotation.

    The shift k^4 -> k^4 + m x leaves the denominator K^2 + m^2 x^2; the
    odd k^4 numerator term drops, leaving 2 m (identity) and m(1 - x) (gamma^4).
    """

    def inner(x):
        a2 = (m * x) ** 2
        return FOUR_D_SPHERE * _radial_integral(lambda K: K ** 3 / (K * K + a2) ** 2, lam)

    opts = dict(epsabs=1e-11, epsrel=1e-10, limit=200, points=[1e-6, 1e-3])
    ident = integrate.quad(lambda x: 2.0 * inner(x), 0.0, 1.0, **opts)[0]
    g4 = integrate.quad(lambda x: (1.0 - x) * inner(x), 0.0, 1.0, **opts)[0]
    return ident, g4


def cutoff_scan_A(m: float = 1.0, lambdas=DEFAULT_LAMBDAS) -> CutoffScan:
    """Discrete-model fermion self-energy integrand A; expected logarithmic growth."""
    if not m > 0:
        raise ValidationError("mass must be positive")
    lam = validate_lambdas(lambdas)
    pairs = [_scan_a_values(m, L) for L in lam]
    ident = [p[0] for p in pairs]
    g4 = [p[1] for p in pairs]
    return CutoffScan(
        tuple(float(x) for x in lam),
        tuple(float(v) for v in ident),
        fit_growth(lam, ident),
        "A: identity coefficient",
        DISCRETE_TAGS + ("wick-rotated", "per unit mass"),
        {"gamma4": tuple(float(v) for v in g4), "gamma4_fit": fit_growth(lam, g4)},
    )


def photon_integrand(K, m: float):
    """Trace of the continuum one-loop photon self-energy at zero external momentum, angle averaged."""
    return 4.0 * (0.5 * K * K + m * m) / (K * K + m * m) ** 2


def cutoff_scan_continuous_photon(m: float = 1.0, lambdas=DEFAULT_LAMBDAS) -> CutoffScan:
    """Continuum photon self-energy scalar; expected quadratic growth."""
    if not m > 0:
        raise ValidationError("mass must be positive")
    lam = validate_lambdas(lambdas)
    vals = [FOUR_D_SPHERE * _radial_integral(lambda K: K ** 3 * photon_integrand(K, m), L) for L in lam]
    return CutoffScan(
        tuple(float(x) for x in lam),
        tuple(float(v) for v in vals),
        fit_growth(lam, vals),
        "continuum photon self-energy",
        CONTINUOUS_TAGS + ("wick-rotated",),
    )


# ---------------------------------------------------------------------------
# channel-weighted integrands, Monte Carlo


def _free_ball(n_free: int, A: np.ndarray, lam: float) -> np.ndarray:
    """int over the n_free-ball of radius lam of (u^2 + A)^{-2} d^n u, closed form."""
    s = np.sqrt(A)
    at = np.arctan(lam / s)
    if n_free == 1:
        return lam / (A * (lam * lam + A)) + at / (A * s)
    if n_free == 2:
        return np.pi * (1.0 / A - 1.0 / (lam * lam + A))
    if n_free == 3:
        return 2 * np.pi * (at / s - lam / (lam * lam + A))
    raise ValidationError("n_free must be 1, 2 or 3")


def _mixture_sample(rng, size, lam, eta):
    """Draw u in [-lam, lam] from (log-uniform | |u|^{-1/2} | uniform)/3; return u and density."""
    which = rng.integers(0, 3, size)
    v = rng.random(size)
    sgn = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    L = np.log(lam / eta)
    mag = np.where(which == 0, eta * np.exp(v * L), np.where(which == 1, lam * v * v, lam * v))
    u = sgn * mag
    a = np.abs(u)
    dens = (np.where(a >= eta, 1.0 / (2 * a * L), 0.0) + 1.0 / (4 * np.sqrt(lam * np.maximum(a, 1e-300))) + 1.0 / (2 * lam)) / 3
    return u, dens


def channel_factor(k: np.ndarray, q: np.ndarray, eta: float) -> np.ndarray:
    """|k+q|^{-1} + |k-q|^{-1} + 2|k^2-q^2|^{-1/2}, with |.|^{-1} cut below eta."""
    s = np.abs(k + q)
    d = np.abs(k - q)
    inv = lambda a: np.where(a >= eta, 1.0 / np.maximum(a, eta), 0.0)
    with np.errstate(divide="ignore"):
        cross = np.where(s * d > 0, 2.0 / np.sqrt(np.maximum(s * d, 1e-300)), 0.0)
    return inv(s) + inv(d) + cross


def cutoff_scan_channels(
    axes: int,
    m: float = 1.0,
    lambdas=DEFAULT_LAMBDAS,
    samples: int = 200_000,
    seed: int = 12345,
    eta: float = 1e-6,
) -> CutoffScan:
    """Integrands B (one axis), C (two axes) and D (three axes) with channel weights.

    For each weighted axis a the pair (k_a, q_a) is sampled in channel
    variables s = k_a + q_a, d = k_a - q_a on [-Lambda, Lambda]^2; the
    remaining 4 - axes Euclidean components are integrated in closed form
    over their ball. The same uniforms are reused for every cutoff.
    """
    if axes not in (1, 2, 3):
        raise ValidationError("axes must be 1, 2 or 3")
    if not m > 0:
        raise ValidationError("mass must be positive")
    lam_grid = validate_lambdas(lambdas)
    values = []
    for lam in lam_grid:
        rng = np.random.default_rng(seed)
        x = rng.random(samples)
        weight = np.ones(samples)
        A = (m * x) ** 2
        for _ in range(axes):
            s, ps = _mixture_sample(rng, samples, lam, eta)
            d, pd = _mixture_sample(rng, samples, lam, eta)
            k = 0.5 * (s + d)
            q = 0.5 * (s - d)
            # dk dq = ds dd / 2
            weight = weight * channel_factor(k, q, eta) * 0.5 / (ps * pd)
            A = A + (1 - x) * k * k + x * q * q
        vals = 2.0 * weight * _free_ball(4 - axes, A, lam)
        values.append(float(np.mean(vals)))
    label = {1: "B", 2: "C", 3: "D"}[axes] + ": identity coefficient (Monte Carlo)"
    return CutoffScan(
        tuple(float(v) for v in lam_grid),
        tuple(values),
        fit_growth(lam_grid, values),
        label,
        DISCRETE_TAGS + ("wick-rotated", "per unit mass", f"channel guard eta={eta:g}", f"seed={seed}", f"samples={samples}"),
    )

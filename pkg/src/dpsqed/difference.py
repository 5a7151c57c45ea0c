"""The discrete difference operator, its principal-value Green's function and
the toy-model perturbation solvers in both representations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .basis import (
    _check_index,
    eval_xi,
    hermite_functions,
    phase,
    xi_derivative,
    xi_second_derivative_at_zero,
    xi_table,
)
from .errors import QuadratureError, ValidationError
from .quadrature import (
    DEFAULT_QUAD,
    QuadConfig,
    QuadratureResult,
    check_node_count,
    gauss_hermite,
    node_count,
    rounding_floor,
)

TAILS = ("zero", "undefined")
DEFAULT_NMAX = 256


class TruncationWarning(UserWarning):
    """The last decade of a truncated Green's-function sum is not negligible."""


@dataclass(frozen=True)
class GridFunction:
    """Complex function on n = 0..n_max with a declared tail beyond n_max."""

    values: np.ndarray
    tail: str = "zero"

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.size < 3:
            raise ValidationError(f"grid function needs n_max >= 2, got n_max = {v.size - 1}")
        if self.tail not in TAILS:
            raise ValidationError(f"tail must be one of {TAILS}, got {self.tail!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_max(self) -> int:
        return self.values.size - 1

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return self.values.size

    @classmethod
    def from_function(cls, f, n_max: int, tail: str = "undefined") -> "GridFunction":
        return cls(np.array([f(n) for n in range(n_max + 1)], dtype=complex), tail)


def delta_sharp(psi: GridFunction) -> GridFunction:
    """(1/sqrt 2)[sqrt(n+1) psi(n+1) - sqrt(n) psi(n-1)] for n = 0..n_max-1."""
    v = psi.values
    n = np.arange(v.size - 1)
    lower = np.concatenate(([0.0], v[:-2]))
    out = (np.sqrt(n + 1.0) * v[1:] - np.sqrt(n) * lower) / np.sqrt(2.0)
    return GridFunction(out, tail="undefined")


def delta_sharp_array(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Difference operator along ``axis`` of a plain array (no length floor)."""
    v = np.moveaxis(np.asarray(values), axis, 0)
    n = np.arange(v.shape[0] - 1).reshape((-1,) + (1,) * (v.ndim - 1))
    lower = np.concatenate((np.zeros_like(v[:1]), v[:-2]), axis=0)
    out = (np.sqrt(n + 1.0) * v[1:] - np.sqrt(n) * lower) / np.sqrt(2.0)
    return np.moveaxis(out, 0, axis)


@lru_cache(maxsize=16)
def _cpv_tables(nmax: int, npts: int):
    """CPV integrals of k^-1 h_m h_n, together with the absolute-term sums."""
    x, w = gauss_hermite(npts)
    p = hermite_functions(nmax, x, weighted=False)
    weight = w / x
    val = (p * weight) @ p.T
    mag = (np.abs(p) * np.abs(weight)) @ np.abs(p).T
    idx = np.arange(nmax + 1)
    even = (idx[:, None] + idx[None, :]) % 2 == 0
    # even part of the integrand integrates to zero against k^-1
    val[even] = 0.0
    mag[even] = 0.0
    val.setflags(write=False)
    mag.setflags(write=False)
    return val, mag


def cpv_matrix(nmax: int, quad: QuadConfig = DEFAULT_QUAD):
    """C[n, m] = CPV int k^-1 xi_n(k) conj(xi_m(k)) dk for n, m <= nmax.

    Returns ``(C, err)``. An even node count keeps k = 0 off the grid.
    """
    nmax = _check_index(nmax)
    npts = node_count(2 * nmax + 64, quad, even=True)
    v1, mag = _cpv_tables(nmax, npts)
    v2, _ = _cpv_tables(nmax, check_node_count(npts, quad))
    err = np.abs(v1 - v2) + rounding_floor(1.0) * mag
    ph = np.array([phase(n) for n in range(nmax + 1)])
    return v1 * (ph[:, None] * np.conj(ph)[None, :]), err


def greens_function(n: int, n_hat: int, quad: QuadConfig = DEFAULT_QUAD) -> QuadratureResult:
    """G(n, n_hat) = (1/i) CPV int k^-1 xi_n(k) conj(xi_n_hat(k)) dk."""
    n, n_hat = _check_index(n), _check_index(n_hat)
    c, err = cpv_matrix(max(n, n_hat), quad)
    e = float(err[n, n_hat])
    return QuadratureResult(complex(-1j * c[n, n_hat]), e, e <= quad.tolerance, "gauss-hermite")


def greens_matrix(nmax: int, quad: QuadConfig = DEFAULT_QUAD):
    c, err = cpv_matrix(nmax, quad)
    return -1j * c, err


def _homogeneous(n_max: int, alpha: complex) -> np.ndarray:
    return alpha * xi_table(n_max, 0.0)


def _tail_check(phi: np.ndarray, psi_part: np.ndarray, g: np.ndarray):
    """Warn when the last decade of sources still moves rows well below it.

    Rows inside the last decade need those sources by construction, so only
    rows n < 0.9 n_max serve as a proxy for the dropped n_hat > n_max terms.
    """
    n = phi.size
    if n < 20:
        return
    cut = n - n // 10
    last = g[:cut, cut:] @ phi[cut:]
    scale = max(float(np.max(np.abs(psi_part))), np.finfo(float).tiny)
    if np.max(np.abs(last)) > 1e-6 * scale:
        warnings.warn(
            "last decade of the Green's-function sum contributes more than 1e-6 relative; "
            "consider a larger n_max",
            TruncationWarning,
            stacklevel=3,
        )


def solve_difference(phi: GridFunction, alpha: complex, quad: QuadConfig = DEFAULT_QUAD) -> GridFunction:
    """psi = alpha xi_n(0) + sum_m phi(m) G(n, m), truncated at phi.n_max.

    The residual of the difference equation on 0..n_max-1 is checked
    against the quadrature tolerance.
    """
    n_max = phi.n_max
    g, err = greens_matrix(n_max, quad)
    if err.max() > quad.tolerance:
        raise QuadratureError(f"Green's function error estimate {err.max():.3g} above tolerance")
    part = g @ phi.values
    _tail_check(phi.values, part, g)
    psi = GridFunction(_homogeneous(n_max, alpha) + part, tail="undefined")
    res = residual(psi, phi)
    bound = quad.tolerance * max(1.0, float(np.abs(phi.values).max()))
    if res > bound:
        raise QuadratureError(f"difference-equation residual {res:.3g} exceeds {bound:.3g}")
    return psi


def residual(psi: GridFunction, phi: GridFunction) -> float:
    """max |Delta# psi - phi| over the points where both are defined."""
    d = delta_sharp(psi).values
    m = min(d.size, phi.values.size)
    return float(np.max(np.abs(d[:m] - phi.values[:m])))


# ---------------------------------------------------------------------------
# perturbation series


@dataclass(frozen=True)
class DivergentTerm:
    """Record of a cutoff-dependent constant detected and excluded at some order."""

    order: int
    description: str
    coefficients: tuple = ()
    growth_exponent: float | None = None


@dataclass(frozen=True)
class PerturbationSeries:
    """Orders psi_0, psi_1, ... with the expansion unit u so that psi = sum u^j psi_j."""

    orders: tuple
    coupling: float
    divergent_flags: tuple
    unit: complex

    def resummed(self) -> np.ndarray:
        total = np.zeros(len(self.orders[0]), dtype=complex)
        for j, psi in enumerate(self.orders):
            total = total + self.unit ** j * np.asarray(psi.values)
        return total

    def contributions(self) -> list:
        return [self.unit ** j * np.asarray(psi.values) for j, psi in enumerate(self.orders)]


def _check_nmax(n_max, floor=2) -> int:
    n_max = _check_index(n_max)
    if n_max < floor:
        raise ValidationError(f"n_max must be at least {floor}, got {n_max}")
    return n_max


def truncated_second_order_growth(n: int, cutoffs, alpha: complex = 1.0, quad: QuadConfig = DEFAULT_QUAD):
    """Partial sums S(M) = sum_{m <= M} psi_1(m) G(n, m) of the divergent second order.

    Returns ``(cutoffs, |S(M)|, fitted exponent)``. The sums do not settle as
    M grows, which is how the divergent constant shows up on the lattice.
    """
    cutoffs = np.asarray(sorted(cutoffs), dtype=int)
    top = int(cutoffs[-1])
    g, _ = greens_matrix(top, quad)
    psi1 = -1j * alpha * np.array([xi_derivative(m, 0.0) for m in range(top + 1)])
    terms = g[n] * psi1
    partial = np.abs(np.cumsum(terms)[cutoffs])
    slope = float(np.polyfit(np.log(cutoffs), np.log(partial), 1)[0])
    return cutoffs, partial, slope


def perturb_linear_discrete(
    e: float,
    order: int = 2,
    n_max: int = DEFAULT_NMAX,
    quad: QuadConfig = DEFAULT_QUAD,
    alpha: complex = 1.0,
) -> PerturbationSeries:
    """Discrete solution of Delta# psi = i e psi, expanded in powers of (i e).

    Second order splits into alpha xi_n(0) lim k^-2 (divergent, flagged and
    dropped) and the finite part -alpha xi_n''(0)/2 at even n.
    """
    order = int(order)
    if order < 0 or order > 2:
        raise ValidationError(f"order must be 0, 1 or 2, got {order}")
    n_max = _check_nmax(n_max)
    psi0 = GridFunction(_homogeneous(n_max, alpha), tail="undefined")
    orders = [psi0]
    flags = [None]
    if order >= 1:
        orders.append(solve_difference(psi0, 0.0, quad))
        flags.append(None)
    if order >= 2:
        g, err = greens_matrix(n_max, quad)
        raw = g @ orders[1].values
        idx = np.arange(n_max + 1)
        finite = np.array(
            [-alpha * xi_second_derivative_at_zero(n) / 2 if n % 2 == 0 else 0.0 for n in idx],
            dtype=complex,
        )
        # odd rows come straight from the Green's sum and vanish by parity
        finite[idx % 2 == 1] = raw[idx % 2 == 1]
        orders.append(GridFunction(finite, tail="undefined"))
        coeff = tuple(complex(c) for c in psi0.values)
        cut = [m for m in (16, 32, 64, 128, 256) if m <= n_max]
        slope = truncated_second_order_growth(0, cut, alpha, quad)[2] if len(cut) >= 2 else None
        flags.append(
            DivergentTerm(
                order=2,
                description="alpha xi_n(0) lim_{k->0} k^-2: excluded; truncated Green's sums grow with the cutoff",
                coefficients=coeff,
                growth_exponent=slope,
            )
        )
    return PerturbationSeries(tuple(orders), float(e), tuple(flags), 1j * e)


def perturb_nonlinear_discrete(
    e: float,
    n_max: int = DEFAULT_NMAX,
    quad: QuadConfig = DEFAULT_QUAD,
    alpha: complex = 1.0,
) -> PerturbationSeries:
    """Discrete solution of Delta# psi = e psi^2 (pointwise square) through second order."""
    n_max = _check_nmax(n_max, 8)
    psi0 = GridFunction(_homogeneous(n_max, alpha), tail="undefined")
    psi1 = solve_difference(GridFunction(psi0.values ** 2), 0.0, quad)
    psi2 = solve_difference(GridFunction(2 * psi0.values * psi1.values), 0.0, quad)
    return PerturbationSeries((psi0, psi1, psi2), float(e), (None, None, None), complex(e))


# ---------------------------------------------------------------------------
# continuous representation


def _sign_kernel_solve(source, x: float, L: float) -> float:
    """Particular solution (1/2)[int_{-L}^x s - int_x^L s] of psi' = s on [-L, L]."""
    opts = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
    left = integrate.quad(source, -L, x, **opts)[0]
    right = integrate.quad(source, x, L, **opts)[0]
    return 0.5 * (left - right)


def _fit_exponent(L, values):
    if len(L) < 2:
        return None
    return float(np.polyfit(np.log(L), np.log(np.abs(values)), 1)[0])


@dataclass(frozen=True)
class ContinuousReport:
    """Orders of a continuous-representation toy model at one point x."""

    model: str
    e: float
    alpha: float
    x: float
    L_values: tuple
    orders: tuple
    cutoff_terms: tuple
    growth_exponent: float | None
    unit: complex
    exact: complex
    divergent_flags: tuple = field(default=())

    @property
    def resummed(self) -> complex:
        return complex(sum(self.unit ** j * c for j, c in enumerate(self.orders)))

    @property
    def resummation_error(self) -> float:
        return abs(self.resummed - self.exact)

    def contributions(self) -> list:
        return [complex(self.unit ** j * c) for j, c in enumerate(self.orders)]


def _check_lvalues(L_values):
    L = np.asarray(L_values, dtype=float).reshape(-1)
    if L.size == 0 or np.any(L <= 0) or np.any(np.diff(L) <= 0):
        raise ValidationError("L_values must be positive and strictly increasing")
    return L


def perturb_linear_continuous(e: float, L_values, alpha: float = 1.0, x: float = 0.5) -> ContinuousReport:
    """Continuous solution of psi' = i e psi on [-L, L], expanded in (i e).

    psi_1 = alpha x is cutoff free; psi_2 picks up -(alpha/2) L^2, read off
    at x = 0 for each L and fitted for its growth exponent.
    """
    L = _check_lvalues(L_values)
    if abs(x) > L[0]:
        raise ValidationError("x must lie inside the smallest box")
    psi1 = [_sign_kernel_solve(lambda s: alpha, x, Lv) for Lv in L]
    if not np.allclose(psi1, alpha * x, atol=1e-10):
        raise QuadratureError("first order should not depend on the cutoff")
    cutoff = np.array([_sign_kernel_solve(lambda s: alpha * s, 0.0, Lv) for Lv in L])
    psi2_raw = _sign_kernel_solve(lambda s: alpha * s, x, L[-1])
    psi2 = psi2_raw - cutoff[-1]
    flags = (None, None, DivergentTerm(2, "-(alpha/2) L^2 cutoff term: excluded", tuple(cutoff), _fit_exponent(L, cutoff)))
    return ContinuousReport(
        model="linear",
        e=float(e),
        alpha=float(alpha),
        x=float(x),
        L_values=tuple(L),
        orders=(complex(alpha), complex(psi1[-1]), complex(psi2)),
        cutoff_terms=tuple(float(c) for c in cutoff),
        growth_exponent=_fit_exponent(L, cutoff),
        unit=1j * e,
        exact=complex(alpha * np.exp(1j * e * x)),
        divergent_flags=flags,
    )


def perturb_nonlinear_continuous(e: float, alpha: float, x: float, L_values) -> ContinuousReport:
    """Continuous solution of psi' = e psi^2, expanded in e; exact alpha/(1 - e alpha x)."""
    if not abs(e * alpha * x) < 1:
        raise ValidationError("need |e alpha x| < 1")
    L = _check_lvalues(L_values)
    if abs(x) > L[0]:
        raise ValidationError("x must lie inside the smallest box")
    psi1 = _sign_kernel_solve(lambda s: alpha ** 2, x, L[-1])
    cutoff = np.array([_sign_kernel_solve(lambda s: 2 * alpha ** 3 * s, 0.0, Lv) for Lv in L])
    psi2 = _sign_kernel_solve(lambda s: 2 * alpha ** 3 * s, x, L[-1]) - cutoff[-1]
    expo = _fit_exponent(L, cutoff) if alpha != 0 else None
    flags = (None, None, DivergentTerm(2, "-alpha^3 L^2 cutoff term: excluded", tuple(cutoff), expo))
    return ContinuousReport(
        model="nonlinear",
        e=float(e),
        alpha=float(alpha),
        x=float(x),
        L_values=tuple(L),
        orders=(complex(alpha), complex(psi1), complex(psi2)),
        cutoff_terms=tuple(float(c) for c in cutoff),
        growth_exponent=expo,
        unit=complex(e),
        exact=complex(alpha / (1 - e * alpha * x)),
        divergent_flags=flags,
    )

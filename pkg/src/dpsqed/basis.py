"""Momentum-space Hermite basis functions and their large-n counterparts.

The basis is

    xi_n(k) = i^n h_n(k),

where h_n are the orthonormal Hermite functions. Values are produced by the
normalized three-term recurrence, carried with a running log scale so that
neither the Gaussian factor nor the polynomial growth under- or overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import QuadratureError, ValidationError
from .quadrature import DEFAULT_QUAD, QuadConfig, check_node_count, gauss_hermite, node_count, rounding_floor

PI_M14 = np.pi ** -0.25
_PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)
_RESCALE = 1e100
_LOG_RESCALE = np.log(_RESCALE)


def phase(n: int) -> complex:
    """i**n as an exact quarter turn."""
    return _PHASES[n % 4]


def _check_index(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValidationError(f"index must be a nonnegative integer, got {n!r}")
    return int(n)


def _sweep(nmax: int, k, weighted: bool = True) -> Iterator[np.ndarray]:
    """Yield h_0(k), ..., h_nmax(k) in order.

    With ``weighted=False`` the Gaussian factor is dropped, giving the
    polynomial part h_n(k) e^{k^2/2}.
    """
    k = np.asarray(k, dtype=float)
    log_scale = np.full(k.shape, -0.25 * np.log(np.pi))
    if weighted:
        log_scale = log_scale - 0.5 * k * k
    prev = np.zeros_like(k)
    cur = np.ones_like(k)
    yield np.exp(log_scale)
    for n in range(nmax):
        nxt = k * np.sqrt(2.0 / (n + 1)) * cur - np.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            log_scale = np.where(big, log_scale + _LOG_RESCALE, log_scale)
        yield cur * np.exp(log_scale)


def hermite_functions(nmax: int, k, *, weighted: bool = True) -> np.ndarray:
    """Table of real orthonormal Hermite functions, shape (nmax+1,) + shape(k)."""
    nmax = _check_index(nmax)
    k = np.asarray(k, dtype=float)
    out = np.empty((nmax + 1,) + k.shape)
    for n, row in enumerate(_sweep(nmax, k, weighted)):
        out[n] = row
    return out


def hermite_function(n: int, k):
    """Single real orthonormal Hermite function h_n(k)."""
    n = _check_index(n)
    row = None
    for row in _sweep(n, k):
        pass
    return row if np.ndim(row) else float(row)


def xi_table(nmax: int, k) -> np.ndarray:
    """Complex table xi_0(k), ..., xi_nmax(k)."""
    h = hermite_functions(nmax, k)
    ph = np.array([phase(n) for n in range(h.shape[0])])
    return h * ph.reshape((-1,) + (1,) * (h.ndim - 1))


def eval_xi(n: int, k):
    """xi_n(k) = i^n h_n(k)."""
    n = _check_index(n)
    if not np.all(np.isfinite(k)):
        raise ValidationError("k must be finite")
    return phase(n) * hermite_function(n, k)


def hermite_function_derivative(n: int, k):
    """h_n'(k) from the ladder identity h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}."""
    n = _check_index(n)
    h = hermite_functions(n + 1, k)
    lower = h[n - 1] if n > 0 else 0.0
    out = np.sqrt(n / 2.0) * lower - np.sqrt((n + 1) / 2.0) * h[n + 1]
    return out if np.ndim(out) else float(out)


def xi_derivative(n: int, k):
    """d/dk xi_n(k)."""
    return phase(n) * hermite_function_derivative(n, k)


def xi_second_derivative_at_zero(n: int) -> complex:
    """xi_n''(0), using h_n'' = (k^2 - 2n - 1) h_n."""
    n = _check_index(n)
    return -(2 * n + 1) * eval_xi(n, 0.0)


def eval_zeta(n: int, k):
    """Large-n counterpart zeta_n(k) of the basis function."""
    n = _check_index(n)
    if n < 2:
        return eval_xi(n, k)
    amp = np.pi ** -0.5 * n ** -0.25
    arg = 2.0 * np.asarray(k, dtype=float) * np.sqrt(n)
    if n % 2 == 0:
        out = amp * np.cos(arg) + 0j
    else:
        out = 1j * amp * np.sin(arg)
    return out if np.ndim(out) else complex(out)


def zeta_table(nmax: int, k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    return np.stack([np.asarray(eval_zeta(n, k), dtype=complex) for n in range(nmax + 1)])


@dataclass(frozen=True)
class BasisValue:
    n: int
    k: float
    value: complex
    asymptotic: bool = False


def basis_value(n: int, k: float, *, asymptotic: bool = False) -> BasisValue:
    f = eval_zeta if asymptotic else eval_xi
    return BasisValue(n=_check_index(n), k=float(k), value=complex(f(n, k)), asymptotic=asymptotic)


def gram_matrix(nmax: int, quad: QuadConfig = DEFAULT_QUAD):
    """Gauss-Hermite Gram matrix of conj(xi_m) xi_n for m, n <= nmax.

    Returns ``(gram, error)`` with elementwise error estimates from a
    second rule with 16 extra nodes plus a rounding floor.
    """
    nmax = _check_index(nmax)
    npts = node_count(2 * nmax + 64, quad)
    ph = np.array([phase(n) for n in range(nmax + 1)])
    rel = np.conj(ph)[:, None] * ph[None, :]

    def rule(npts):
        x, w = gauss_hermite(npts)
        p = hermite_functions(nmax, x, weighted=False)
        return (p * w) @ p.T, (np.abs(p) * w) @ np.abs(p).T

    g1, a1 = rule(npts)
    g2, _ = rule(check_node_count(npts, quad))
    err = np.abs(g1 - g2) + rounding_floor(1.0) * a1
    return g1 * rel, err


def orthonormality_defect(m: int, n: int, quad: QuadConfig = DEFAULT_QUAD) -> float:
    """|<xi_m, xi_n> - delta_mn| by Gauss-Hermite quadrature."""
    m, n = _check_index(m), _check_index(n)
    gram, err = gram_matrix(max(m, n), quad)
    if err[m, n] > quad.tolerance:
        raise QuadratureError(f"orthonormality integral error estimate {err[m, n]:.3g} above tolerance")
    return float(abs(gram[m, n] - (1.0 if m == n else 0.0)))


def orthonormality_defects(nmax: int, quad: QuadConfig = DEFAULT_QUAD) -> np.ndarray:
    """All defects for m, n <= nmax from a single Gram matrix."""
    gram, err = gram_matrix(nmax, quad)
    if err.max() > quad.tolerance:
        raise QuadratureError(f"Gram matrix error estimate {err.max():.3g} above tolerance")
    return np.abs(gram - np.eye(nmax + 1))

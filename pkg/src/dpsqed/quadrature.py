"""Quadrature plumbing: configuration, result type and cached node tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermite, roots_legendre

from .errors import QuadratureError, ValidationError

EPS = np.finfo(float).eps

METHODS = ("segment-sum", "gauss-hermite", "adaptive", "spherical-gauss-hermite", "closed-form")


@dataclass(frozen=True)
class QuadConfig:
    """Tolerance and node budget for the quadrature routines.

    ``nodes`` overrides the default node count of rules that pick one
    themselves; ``None`` keeps the default.
    """

    tolerance: float = 1e-10
    max_nodes: int = 4096
    nodes: int | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_nodes < 16:
            raise ValidationError(f"max_nodes must be at least 16, got {self.max_nodes}")
        if self.nodes is not None and self.nodes < 2:
            raise ValidationError(f"nodes must be at least 2, got {self.nodes}")


DEFAULT_QUAD = QuadConfig()


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    converged: bool
    method: str

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be nonnegative")
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")

    def require_converged(self) -> "QuadratureResult":
        if not self.converged:
            raise QuadratureError(
                f"{self.method} quadrature did not converge "
                f"(error estimate {self.error_estimate:.3g})"
            )
        return self


def _readonly(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


@lru_cache(maxsize=64)
def gauss_hermite(n: int):
    """Nodes and weights for the weight e^{-x^2}."""
    x, w = roots_hermite(n)
    return _readonly(x, w)


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    x, w = roots_legendre(n)
    return _readonly(x, w)


def node_count(default: int, cfg: QuadConfig, *, even: bool = False) -> int:
    n = cfg.nodes if cfg.nodes is not None else default
    return _within_budget(n + (n % 2 if even else 0), cfg)


def check_node_count(npts: int, cfg: QuadConfig) -> int:
    """Node count of the comparison rule used for error estimates."""
    return _within_budget(npts + 16, cfg)


def _within_budget(n: int, cfg: QuadConfig) -> int:
    if n > cfg.max_nodes:
        raise QuadratureError(f"rule needs {n} nodes, budget is {cfg.max_nodes}")
    return n


def rounding_floor(abs_terms_sum: float) -> float:
    """Floating-point floor for a sum whose absolute terms add to the given value."""
    return 64 * EPS * abs_terms_sum

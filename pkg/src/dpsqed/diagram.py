"""Power counting for graphs of the trilinear fermion-fermion-boson interaction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import ValidationError

E_MAGNITUDE = float(np.sqrt(4 * np.pi / 137))

CONVERGES = "converges"
DIVERGES = "diverges"
FURRY = "vanishes_by_furry"


@dataclass(frozen=True)
class DiagramSpec:
    E_F: int
    E_B: int
    j: int
    l: int = 0
    sigma_sign: int = 1
    charge_q: Fraction = Fraction(-1)

    def __post_init__(self):
        for name in ("E_F", "E_B", "j", "l"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ValidationError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.sigma_sign not in (1, -1):
            raise ValidationError("sigma_sign must be +1 or -1")
        object.__setattr__(self, "charge_q", Fraction(self.charge_q))
        if self.E_F % 2:
            raise ValidationError("E_F must be even: fermion lines pair in and out")


def derive_internal_lines(spec: DiagramSpec) -> tuple[int, int]:
    """I_F = j - E_F/2 and I_B = (j - E_B)/2, both nonnegative integers."""
    I_F = Fraction(spec.j) - Fraction(spec.E_F, 2)
    I_B = Fraction(spec.j - spec.E_B, 2)
    if I_F < 0 or I_F.denominator != 1:
        raise ValidationError(f"infeasible topology: I_F = j - E_F/2 = {I_F} is not a nonnegative integer")
    if I_B < 0 or I_B.denominator != 1:
        raise ValidationError(f"infeasible topology: I_B = (j - E_B)/2 = {I_B} is not a nonnegative integer")
    I_F, I_B = int(I_F), int(I_B)
    assert spec.j == I_F + spec.E_F // 2 == 2 * I_B + spec.E_B
    return I_F, I_B


def is_feasible(E_F: int, E_B: int, j: int) -> bool:
    return E_F % 2 == 0 and j - E_F // 2 >= 0 and j >= E_B and (j - E_B) % 2 == 0


def _require_vertex(spec: DiagramSpec):
    if spec.j < 1:
        raise ValidationError("divergence degrees need at least one vertex")


def kappa_raw(I_F: int, I_B: int, j: int) -> int:
    """Counting form: momenta, loop integrals, propagator falloff and vertex tails."""
    return 3 * (I_B + I_F) + (I_B + I_F - j + 1) - I_F - 2 * I_B - 3 * j


def kappa_hat_raw(I_F: int, I_B: int, j: int) -> int:
    return 4 * (I_B + I_F - j + 1) - I_F - 2 * I_B - 3 * j


def kappa_from_externals(E_F, E_B) -> Fraction:
    """1 - E_B - (3/2) E_F; total over the rationals, including odd E_F."""
    return 1 - Fraction(E_B) - Fraction(3, 2) * Fraction(E_F)


def kappa_hat_from_externals(E_F, E_B, j) -> Fraction:
    return 4 - 3 * Fraction(j) - Fraction(E_B) - Fraction(3, 2) * Fraction(E_F)


def kappa(spec: DiagramSpec) -> Fraction:
    _require_vertex(spec)
    I_F, I_B = derive_internal_lines(spec)
    raw = Fraction(kappa_raw(I_F, I_B, spec.j))
    closed = kappa_from_externals(spec.E_F, spec.E_B)
    if raw != closed:
        raise AssertionError(f"counting form {raw} differs from closed form {closed}")
    return closed


def kappa_hat(spec: DiagramSpec) -> Fraction:
    _require_vertex(spec)
    I_F, I_B = derive_internal_lines(spec)
    raw = Fraction(kappa_hat_raw(I_F, I_B, spec.j))
    closed = kappa_hat_from_externals(spec.E_F, spec.E_B, spec.j)
    if raw != closed:
        raise AssertionError(f"counting form {raw} differs from closed form {closed}")
    if kappa(spec) - raw != 3 * (spec.j - 1):
        raise AssertionError("gap law violated")
    return closed


def mixed_degree_interval(spec: DiagramSpec) -> tuple[Fraction, Fraction]:
    """Degrees of the mixed products lie in [kappa_hat, kappa]."""
    return kappa_hat(spec), kappa(spec)


def converges(spec: DiagramSpec) -> str:
    derive_internal_lines(spec)
    if spec.E_F == 0 and spec.E_B == 1:
        return FURRY
    return CONVERGES if Fraction(3, 2) * spec.E_F + spec.E_B > 1 else DIVERGES


def prefactor(spec: DiagramSpec, e_magnitude: float = E_MAGNITUDE) -> float:
    """(-1)^l sgn(sigma) (-q |e|)^j."""
    if spec.j > 0:
        derive_internal_lines(spec)
    return float((-1) ** spec.l * spec.sigma_sign * (-float(spec.charge_q) * e_magnitude) ** spec.j)


@dataclass(frozen=True)
class DiagramRow:
    E_F: int
    E_B: int
    j: int
    I_F: int
    I_B: int
    kappa: Fraction
    kappa_hat: Fraction
    verdict: str


def classify(spec: DiagramSpec) -> DiagramRow:
    I_F, I_B = derive_internal_lines(spec)
    return DiagramRow(spec.E_F, spec.E_B, spec.j, I_F, I_B, kappa(spec), kappa_hat(spec), converges(spec))


def enumerate_feasible(max_j: int) -> Iterator[DiagramSpec]:
    """Every feasible (E_F, E_B, j) with 1 <= j <= max_j, ordered by j, E_F, E_B."""
    for j in range(1, max_j + 1):
        for E_F in range(0, 2 * j + 1, 2):
            for E_B in range(0, j + 1):
                if is_feasible(E_F, E_B, j):
                    yield DiagramSpec(E_F, E_B, j)

"""Immutable sums of smooth power-law terms and Dirac spikes on linear forms.

A term is

    coefficient * prod_c |c|^a_c sgn(c)^s_c * prod_d delta(d) * delta(0)^z

where c, d are integer linear forms in the declared variables. Products
(and ``annihilate``) follow two rules:

* a spike carrying a positive power of its own form, or an odd power of its
  sign, vanishes (|k| delta(k) = 0, sgn(k) delta(k) = 0);
* a squared spike is delta(d) delta(0); the delta(0) stays a symbolic
  factor counted in ``delta_zero``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularPointError, ValidationError

SPIKE_TOL = 1e-9
TWO_PI = 2.0 * np.pi  # overall normalization of the vertex closed form

Form = tuple


def canonical(form: Form) -> tuple[Form, int]:
    """Return (form with first nonzero coefficient positive, sign flipped)."""
    for c in form:
        if c:
            return (form, 1) if c > 0 else (tuple(-x for x in form), -1)
    raise ValidationError("zero linear form")


def form_label(form: Form, variables: Sequence[str]) -> str:
    """Readable label with positive terms first, e.g. ``q+k-p``."""
    pos = [(c, v) for c, v in zip(form, variables) if c > 0]
    neg = [(c, v) for c, v in zip(form, variables) if c < 0]
    text = ""
    for c, v in pos + neg:
        mag = "" if abs(c) == 1 else str(abs(c))
        text += ("-" if c < 0 else "+") + mag + v
    return text[1:] if text.startswith("+") else text


def same_line(f: Form, g: Form) -> bool:
    return canonical(f)[0] == canonical(g)[0]


@dataclass(frozen=True)
class Term:
    coefficient: complex
    factors: tuple = ()  # ((form, power, sign_power), ...) on distinct lines
    deltas: tuple = ()  # (form, ...) on distinct lines
    delta_zero: int = 0

    @property
    def is_spike(self) -> bool:
        return bool(self.deltas)

    def annihilated(self) -> bool:
        for d in self.deltas:
            for f, a, s in self.factors:
                if same_line(f, d) and (a > 0 or s % 2):
                    return True
        return self.coefficient == 0


def make_term(coefficient, factors=(), deltas=(), delta_zero=0) -> Term:
    """Build a term, merging factors and deltas that live on the same line.

    The first orientation seen for a line is kept as its representative;
    sgn factors given in the opposite orientation flip the coefficient.
    """
    coef = complex(coefficient)
    merged: dict = {}
    for form, power, sgn in factors:
        form = tuple(form)
        key, flip = canonical(form)
        rep, a, s = merged.get(key, (form, 0.0, 0))
        if canonical(rep)[1] != flip and sgn % 2:
            coef = -coef
        merged[key] = (rep, a + power, (s + sgn) % 2)
    dz = delta_zero
    ds: dict = {}
    for form in deltas:
        key, _ = canonical(tuple(form))
        if key in ds:
            dz += 1
        else:
            ds[key] = tuple(form)
    fac = tuple((rep, a, s) for _, (rep, a, s) in sorted(merged.items()) if a != 0 or s != 0)
    return Term(coef, fac, tuple(ds[k] for k in sorted(ds)), dz)


@dataclass(frozen=True)
class DistributionValue:
    """Sum of terms in the variables ``variables``; optionally anchored at a point."""

    terms: tuple
    variables: tuple = ("p", "q", "k")
    point: tuple | None = None

    def __post_init__(self):
        n = len(self.variables)
        for t in self.terms:
            for f, _, _ in t.factors:
                if len(f) != n:
                    raise ValidationError("factor form has wrong arity")
            for d in t.deltas:
                if len(d) != n:
                    raise ValidationError("delta form has wrong arity")
        if self.point is not None and len(self.point) != n:
            raise ValidationError("point has wrong arity")

    @property
    def smooth_terms(self) -> tuple:
        return tuple(t for t in self.terms if not t.is_spike)

    @property
    def spikes(self) -> tuple:
        return tuple(t for t in self.terms if t.is_spike)

    def at(self, *point) -> "DistributionValue":
        return DistributionValue(self.terms, self.variables, tuple(float(x) for x in point))

    def _point(self, point):
        if point:
            return np.asarray(point, dtype=float)
        if self.point is None:
            raise ValidationError("no evaluation point given")
        return np.asarray(self.point, dtype=float)

    def smooth(self, *point) -> complex:
        """Smooth part at a point off every spike manifold it depends on."""
        x = self._point(point)
        total = 0j
        for t in self.smooth_terms:
            val = t.coefficient
            for f, a, s in t.factors:
                c = float(np.dot(f, x))
                if abs(c) < SPIKE_TOL and (a < 0 or s % 2):
                    raise SingularPointError(
                        f"smooth part singular on {form_label(f, self.variables)} = 0"
                    )
                val *= abs(c) ** a * (np.sign(c) if s % 2 else 1.0)
            total += val
        return complex(total)

    def near_spikes(self, *point) -> list[str]:
        """Labels of spike forms within the guard band of the point."""
        x = self._point(point)
        out = []
        for t in self.spikes:
            for d in t.deltas:
                if abs(float(np.dot(d, x))) < SPIKE_TOL:
                    lab = form_label(d, self.variables)
                    if lab not in out:
                        out.append(lab)
        return out

    def spike_inventory(self) -> list[str]:
        """Human-readable spike terms; delta(0) factors appear as tags."""
        out = []
        for t in self.spikes:
            parts = [f"({t.coefficient.real:.17g}{t.coefficient.imag:+.17g}j)"]
            for f, a, s in t.factors:
                lab = form_label(f, self.variables)
                if a:
                    parts.append(f"|{lab}|^{a:g}")
                if s % 2:
                    parts.append(f"sgn({lab})")
            parts += [f"delta({form_label(d, self.variables)})" for d in t.deltas]
            if t.delta_zero:
                parts.append(f"delta(0)^{t.delta_zero}")
            out.append("*".join(parts))
        return out

    def symbolic_tags(self) -> list[str]:
        z = sorted({t.delta_zero for t in self.terms if t.delta_zero})
        return [f"delta(0)^{d}" for d in z]

    def __mul__(self, other: "DistributionValue") -> "DistributionValue":
        if not isinstance(other, DistributionValue):
            return NotImplemented
        if other.variables != self.variables:
            raise ValidationError("variables differ")
        terms = []
        for a in self.terms:
            for b in other.terms:
                t = make_term(
                    a.coefficient * b.coefficient,
                    a.factors + b.factors,
                    a.deltas + b.deltas,
                    a.delta_zero + b.delta_zero,
                )
                if not t.annihilated():
                    terms.append(t)
        return DistributionValue(tuple(terms), self.variables, self.point)

    def annihilate(self) -> "DistributionValue":
        """Drop every term that the annihilation table sends to zero."""
        kept = tuple(t for t in self.terms if not t.annihilated())
        return DistributionValue(kept, self.variables, self.point)

    def scale(self, factor: complex) -> "DistributionValue":
        return DistributionValue(
            tuple(Term(t.coefficient * factor, t.factors, t.deltas, t.delta_zero) for t in self.terms),
            self.variables,
            self.point,
        )

    def conj(self) -> "DistributionValue":
        return DistributionValue(
            tuple(Term(t.coefficient.conjugate(), t.factors, t.deltas, t.delta_zero) for t in self.terms),
            self.variables,
            self.point,
        )

"""Exact algebra over exponential polynomials.

An exponential polynomial is a finite sum of terms ``c * t**m * exp(lam*t)``.
For the eco-epidemic system every exponent ``lam`` is an integer combination
of the three linear rates of the model, so rates are stored as integer
vectors ``(a, b, c)`` meaning ``a*r - b*d1 - c*d2``.  Two exponents are equal
exactly when their vectors are equal; the model parameters enter only when a
series is evaluated or when an ODE is integrated.

The class is closed under addition, multiplication, differentiation and the
solution of ``y' + a*y = f`` with ``a`` one of the model's linear rates,
which is all that is needed to carry the perturbation recursion to any order.

    >>> from hpm_ecoepi.expoly import ExpPolySeries, RateVector
    >>> s = ExpPolySeries.single(0.01, RateVector(1, 0, 0))
    >>> (s * s).terms[0].rate
    RateVector(a=2, b=0, c=0)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

__all__ = [
    "RateVector",
    "ExpPolyTerm",
    "ExpPolySeries",
    "NumericalResonance",
    "ZERO_RATE",
    "collect",
    "evaluate",
    "multiply",
    "derivative",
    "integrate_linear_ode",
]

# relative size below which a lattice-distinct exponent sum counts as zero
DEGENERACY_RTOL = 1e-12


class NumericalResonance(ArithmeticError):
    """Lattice-distinct exponents nearly coincide for the given parameters."""


class RateVector(NamedTuple):
    """Integer exponent ``a*r - b*d1 - c*d2``."""

    a: int = 0
    b: int = 0
    c: int = 0

    def __add__(self, other):  # type: ignore[override]
        return RateVector(self.a + other.a, self.b + other.b, self.c + other.c)

    def __neg__(self):
        return RateVector(-self.a, -self.b, -self.c)

    def __sub__(self, other):
        return self + (-other)

    def value(self, params) -> float:
        return self.a * params.r - self.b * params.d1 - self.c * params.d2

    def scale(self, params) -> float:
        """Magnitude used to judge whether ``value`` is a rounding artefact."""
        return abs(self.a) * params.r + abs(self.b) * params.d1 + abs(self.c) * params.d2

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def label(self) -> str:
        """Human readable exponent, e.g. ``r-d1-2d2``."""
        parts = []
        for k, sym, sign in ((self.a, "r", 1), (self.b, "d1", -1), (self.c, "d2", -1)):
            if k == 0:
                continue
            k = sign * k
            mag = "" if abs(k) == 1 else str(abs(k))
            parts.append(("-" if k < 0 else "+") + mag + sym)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


ZERO_RATE = RateVector(0, 0, 0)


@dataclass(frozen=True)
class ExpPolyTerm:
    coeff: float
    power: int
    rate: RateVector

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("power must be nonnegative")
        if not math.isfinite(self.coeff):
            raise ValueError(f"non-finite coefficient {self.coeff!r}")

    @property
    def key(self) -> tuple[int, RateVector]:
        return (self.power, self.rate)


def _sort_key(key):
    power, rate = key
    return (tuple(rate), power)


@dataclass(frozen=True)
class ExpPolySeries:
    """Immutable finite sum of :class:`ExpPolyTerm`.

    Instances built through the constructors and operators below are always
    canonical: one term per ``(power, rate)`` key, no zero coefficients, terms
    ordered by rate and then power.  Construct directly from an arbitrary
    term list only if you intend to call :func:`collect` afterwards.
    """

    terms: tuple[ExpPolyTerm, ...] = ()

    @classmethod
    def from_terms(cls, terms: Iterable[ExpPolyTerm]) -> "ExpPolySeries":
        return collect(cls(tuple(terms)))

    @classmethod
    def single(cls, coeff: float, rate: RateVector, power: int = 0) -> "ExpPolySeries":
        return cls.from_terms([ExpPolyTerm(float(coeff), power, RateVector(*rate))])

    @classmethod
    def zero(cls) -> "ExpPolySeries":
        return cls(())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "ExpPolySeries") -> "ExpPolySeries":
        return collect(ExpPolySeries(self.terms + other.terms))

    def __neg__(self) -> "ExpPolySeries":
        return self.scaled(-1.0)

    def __sub__(self, other: "ExpPolySeries") -> "ExpPolySeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ExpPolySeries):
            return multiply(self, other)
        return self.scaled(other)

    __rmul__ = __mul__

    def scaled(self, factor: float) -> "ExpPolySeries":
        factor = float(factor)
        if factor == 0.0:
            return ExpPolySeries.zero()
        return collect(
            ExpPolySeries(tuple(ExpPolyTerm(t.coeff * factor, t.power, t.rate) for t in self.terms))
        )

    def coefficient(self, rate: RateVector, power: int = 0) -> float:
        """Coefficient of ``t**power * exp(rate*t)``; 0.0 when absent."""
        rate = RateVector(*rate)
        for term in self.terms:
            if term.rate == rate and term.power == power:
                return term.coeff
        return 0.0

    def rates(self) -> set[RateVector]:
        return {t.rate for t in self.terms}

    def max_power(self) -> int:
        return max((t.power for t in self.terms), default=0)

    def value_at_zero(self) -> float:
        return math.fsum(t.coeff for t in self.terms if t.power == 0)

    def __call__(self, params, t):
        return evaluate(self, params, t)


def collect(series: ExpPolySeries) -> ExpPolySeries:
    """Merge like terms and drop exact zeros; result is sorted canonically."""
    acc: dict[tuple[int, RateVector], float] = {}
    for term in series.terms:
        acc[term.key] = acc.get(term.key, 0.0) + term.coeff
    terms = tuple(
        ExpPolyTerm(acc[key], key[0], key[1])
        for key in sorted(acc, key=_sort_key)
        if acc[key] != 0.0
    )
    return ExpPolySeries(terms)


def evaluate(series: ExpPolySeries, params, t):
    """Evaluate at scalar or array ``t``.  Returns a float for scalar input."""
    tt = np.asarray(t, dtype=float)
    if tt.ndim == 0:
        x = float(tt)
        return math.fsum(
            term.coeff * (x**term.power if term.power else 1.0) * math.exp(term.rate.value(params) * x)
            for term in series.terms
        )
    out = np.zeros_like(tt)
    for term in series.terms:
        lam = term.rate.value(params)
        if term.power == 0:
            out = out + term.coeff * np.exp(lam * tt)
        else:
            out = out + term.coeff * tt**term.power * np.exp(lam * tt)
    return out


def multiply(f: ExpPolySeries, g: ExpPolySeries) -> ExpPolySeries:
    terms = [
        ExpPolyTerm(u.coeff * v.coeff, u.power + v.power, u.rate + v.rate)
        for u in f.terms
        for v in g.terms
    ]
    return collect(ExpPolySeries(tuple(terms)))


def derivative(series: ExpPolySeries, params) -> ExpPolySeries:
    """Term-wise time derivative (needs ``params`` for the exponent values)."""
    terms = []
    for term in series.terms:
        lam = term.rate.value(params)
        if lam != 0.0:
            terms.append(ExpPolyTerm(term.coeff * lam, term.power, term.rate))
        if term.power > 0:
            terms.append(ExpPolyTerm(term.coeff * term.power, term.power - 1, term.rate))
    return collect(ExpPolySeries(tuple(terms)))


def _particular(term: ExpPolyTerm, decay: RateVector, params) -> list[ExpPolyTerm]:
    """Particular solution of ``y' + a*y = c t^m e^{lam t}``."""
    shift = term.rate + decay  # lattice vector of lam + a
    resonant = shift.is_zero()
    if not resonant:
        s = shift.value(params)
        if abs(s) <= DEGENERACY_RTOL * shift.scale(params):
            # lam + a vanishes only through a parameter coincidence
            if s != 0.0:
                raise NumericalResonance(
                    f"exponent {term.rate.label()} is within rounding of the "
                    f"homogeneous rate {(-decay).label()} (difference {s:.3e})"
                )
            resonant = True
    if resonant:
        m = term.power
        return [ExpPolyTerm(term.coeff / (m + 1), m + 1, term.rate)]
    # y = e^{lam t} sum_j q_j t^j with q_m = c/s, q_j = -(j+1) q_{j+1} / s
    out = []
    q = term.coeff / s
    out.append(ExpPolyTerm(q, term.power, term.rate))
    for j in range(term.power - 1, -1, -1):
        q = -(j + 1) * q / s
        out.append(ExpPolyTerm(q, j, term.rate))
    return out


def integrate_linear_ode(
    decay: RateVector, forcing: ExpPolySeries, y0: float, params
) -> ExpPolySeries:
    """Closed-form solution of ``y' + a*y = forcing``, ``y(0) = y0``.

    ``decay`` is the lattice vector whose value is ``a``; the homogeneous
    solution therefore has rate ``-decay``.  Forcing terms whose rate equals
    ``-decay`` produce secular terms ``t**(m+1)/(m+1) * exp(lam*t)``.  The same
    limit is used when the two rates differ as vectors but their values agree
    exactly for these parameters; a near miss within rounding raises
    :class:`NumericalResonance` because the non-resonant formula would divide
    by noise.
    """
    decay = RateVector(*decay)
    terms: list[ExpPolyTerm] = []
    for term in forcing.terms:
        terms.extend(_particular(term, decay, params))
    particular = collect(ExpPolySeries(tuple(terms)))
    kappa = float(y0) - particular.value_at_zero()
    homogeneous = ExpPolyTerm(kappa, 0, -decay)
    return collect(ExpPolySeries(particular.terms + (homogeneous,)))

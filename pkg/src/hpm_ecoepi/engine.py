"""Homotopy perturbation expansion of the eco-epidemic model.

The linear operators ``d/dt - r``, ``d/dt + d1`` and ``d/dt + d2`` stay on the
left and everything quadratic is multiplied by the embedding parameter ``p``.
Substituting ``S = S_0 + p S_1 + p^2 S_2 + ...`` (likewise ``I`` and ``P``) and
matching powers of ``p`` gives, for ``k >= 1``::

    S_k' - r S_k  = -(r/K) [SS]_{k-1} - (r/K + delta) [SI]_{k-1} - c1 [SP]_{k-1}
    I_k' + d1 I_k = delta [SI]_{k-1} - c2 [IP]_{k-1}
    P_k' + d2 P_k = e c1 [SP]_{k-1} + e c2 [IP]_{k-1}

where ``[XY]_n = sum_{i+j=n} X_i Y_j`` and every correction starts from zero.
Each order is solved in closed form with
:func:`hpm_ecoepi.expoly.integrate_linear_ode`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expoly import ExpPolySeries, RateVector, derivative, evaluate, integrate_linear_ode
from .model import InitialState, ModelParams, quadratic_coefficients, rhs

__all__ = [
    "HpmExpansion",
    "AssembledSolution",
    "HOMOGENEOUS_RATES",
    "DECAYS",
    "zeroth_order",
    "order_k_forcing",
    "extend",
    "expand",
    "assemble",
    "solve",
    "residual",
]

# exponents of the zeroth-order solutions: e^{rt}, e^{-d1 t}, e^{-d2 t}
HOMOGENEOUS_RATES = (RateVector(1, 0, 0), RateVector(0, 1, 0), RateVector(0, 0, 1))
# y' + a*y convention: a = -r, d1, d2
DECAYS = tuple(-h for h in HOMOGENEOUS_RATES)

_PAIRS = {"SS": (0, 0), "SI": (0, 1), "SP": (0, 2), "IP": (1, 2)}


@dataclass(frozen=True)
class HpmExpansion:
    params: ModelParams
    ics: InitialState
    S_terms: tuple[ExpPolySeries, ...]
    I_terms: tuple[ExpPolySeries, ...]
    P_terms: tuple[ExpPolySeries, ...]

    @property
    def order(self) -> int:
        return len(self.S_terms) - 1

    def component(self, k: int) -> tuple[ExpPolySeries, ExpPolySeries, ExpPolySeries]:
        return self.S_terms[k], self.I_terms[k], self.P_terms[k]

    def _columns(self):
        return (self.S_terms, self.I_terms, self.P_terms)


@dataclass(frozen=True)
class AssembledSolution:
    params: ModelParams
    order: int
    S: ExpPolySeries
    I: ExpPolySeries
    P: ExpPolySeries

    @property
    def series(self) -> tuple[ExpPolySeries, ExpPolySeries, ExpPolySeries]:
        return (self.S, self.I, self.P)

    def __call__(self, t) -> np.ndarray:
        """Stacked ``(S, I, P)``; shape ``(3,)`` for scalar t, ``(3, n)`` otherwise."""
        return np.array([evaluate(s, self.params, t) for s in self.series])


def zeroth_order(params: ModelParams, ics: InitialState):
    return tuple(
        ExpPolySeries.single(y0, rate)
        for y0, rate in zip((ics.S0, ics.I0, ics.P0), HOMOGENEOUS_RATES)
    )


def _cauchy(xs, ys, n: int) -> ExpPolySeries:
    total = ExpPolySeries.zero()
    for i in range(n + 1):
        total = total + xs[i] * ys[n - i]
    return total


def order_k_forcing(params: ModelParams, expansion: HpmExpansion, k: int):
    """Right-hand sides of the order-``k`` linear problems for (S, I, P)."""
    if k < 1:
        raise ValueError("forcing is defined for k >= 1; order 0 is homogeneous")
    if expansion.order < k - 1:
        raise ValueError(f"expansion holds orders 0..{expansion.order}, need 0..{k - 1}")
    cols = expansion._columns()
    coefs = quadratic_coefficients(params)
    out = [ExpPolySeries.zero() for _ in range(3)]
    for name, (i, j) in _PAIRS.items():
        if not any(coefs[name]):
            continue
        product = _cauchy(cols[i], cols[j], k - 1)
        for eq, c in enumerate(coefs[name]):
            if c != 0.0:
                out[eq] = out[eq] + product.scaled(c)
    return tuple(out)


def _start(params: ModelParams, ics: InitialState) -> HpmExpansion:
    S0, I0, P0 = zeroth_order(params, ics)
    return HpmExpansion(params, ics, (S0,), (I0,), (P0,))


def extend(expansion: HpmExpansion, params: ModelParams | None = None) -> HpmExpansion:
    """Return a new expansion with one more order."""
    params = expansion.params if params is None else params
    k = expansion.order + 1
    forcing = order_k_forcing(params, expansion, k)
    new = [
        integrate_linear_ode(decay, f, 0.0, params)
        for decay, f in zip(DECAYS, forcing)
    ]
    return HpmExpansion(
        params,
        expansion.ics,
        expansion.S_terms + (new[0],),
        expansion.I_terms + (new[1],),
        expansion.P_terms + (new[2],),
    )


def expand(params: ModelParams, ics: InitialState, order: int = 2) -> HpmExpansion:
    if order < 0:
        raise ValueError("order must be >= 0")
    expansion = _start(params, ics)
    for _ in range(order):
        expansion = extend(expansion, params)
    return expansion


def assemble(expansion: HpmExpansion, N: int | None = None) -> AssembledSolution:
    """Sum orders ``0..N`` (the ``p -> 1`` limit of the truncated series)."""
    N = expansion.order if N is None else N
    if not 0 <= N <= expansion.order:
        raise ValueError(f"N={N} outside 0..{expansion.order}")
    sums = []
    for col in expansion._columns():
        total = ExpPolySeries.zero()
        for k in range(N + 1):
            total = total + col[k]
        sums.append(total)
    return AssembledSolution(expansion.params, N, *sums)


def solve(params: ModelParams, ics: InitialState, order: int = 2) -> AssembledSolution:
    return assemble(expand(params, ics, order))


def residual(params: ModelParams, solution: AssembledSolution, t) -> np.ndarray:
    """``d/dt (truncated series) - rhs(series)`` with analytic derivatives."""
    values = solution(t)
    slopes = np.array([evaluate(derivative(s, params), params, t) for s in solution.series])
    return slopes - rhs(params, values)

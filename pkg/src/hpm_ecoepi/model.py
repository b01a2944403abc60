"""Prey-predator model with disease circulating in the prey.

    dS/dt = r S (1 - (S + I)/K) - c1 S P - delta S I
    dI/dt = delta S I - c2 I P - d1 I
    dP/dt = e (c1 S + c2 I) P - d2 P

``S`` is susceptible prey, ``I`` infected prey, ``P`` predators.  ``K`` may be
``inf`` to switch the logistic term off.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

__all__ = [
    "ModelParams",
    "InitialState",
    "ValidationReport",
    "InvalidModel",
    "FIG1_PARAMS",
    "FIG1_STATE",
    "validate",
    "rhs",
    "linear_rates",
    "quadratic_coefficients",
    "resonance_hazards",
]

_POSITIVE = ("r", "K", "d1", "d2")
_NONNEGATIVE = ("c1", "c2", "delta", "e")


@dataclass(frozen=True)
class ModelParams:
    r: float
    K: float
    c1: float
    c2: float
    delta: float
    e: float
    d1: float
    d2: float

    @property
    def inv_K(self) -> float:
        return 0.0 if math.isinf(self.K) else 1.0 / self.K

    def replace(self, **changes) -> "ModelParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ModelParams(**values)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class InitialState:
    S0: float
    I0: float
    P0: float

    def as_array(self) -> np.ndarray:
        return np.array([self.S0, self.I0, self.P0], dtype=float)


# parameter set and initial data used for the published comparison figure
FIG1_PARAMS = ModelParams(r=0.1, K=0.3, c1=0.1, c2=0.2, delta=0.1, e=0.1, d1=0.2, d2=0.2)
FIG1_STATE = InitialState(0.01, 0.01, 0.01)


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


class InvalidModel(ValueError):
    """Raised by callers that need valid inputs; carries the report."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(report.errors))


def _close(x: float, y: float) -> bool:
    return math.isclose(x, y, rel_tol=1e-12, abs_tol=0.0)


def resonance_hazards(params: ModelParams) -> list[str]:
    """Rate coincidences that make closed-form denominators vanish."""
    r, d1, d2 = params.r, params.d1, params.d2
    checks = (
        ("r = d1", d1, "r-d1"),
        ("r = d2", d2, "r-d2"),
        ("r = 2*d1", 2 * d1, "r-2d1"),
        ("r = 2*d2", 2 * d2, "r-2d2"),
        ("r = d1+d2", d1 + d2, "r-d1-d2"),
    )
    return [
        f"resonance hazard: {what} makes the ({den}) denominator vanish"
        for what, value, den in checks
        if _close(r, value)
    ]


def validate(params: ModelParams, ics: InitialState | None = None) -> ValidationReport:
    """Check hard constraints (errors) and modelling advisories (warnings)."""
    report = ValidationReport()
    for name in _POSITIVE:
        v = getattr(params, name)
        ok = v > 0 and (math.isfinite(v) or (name == "K" and v == math.inf))
        if not ok:
            report.errors.append(f"{name} must be positive")
    for name in _NONNEGATIVE:
        v = getattr(params, name)
        if not (math.isfinite(v) and v >= 0):
            report.errors.append(f"{name} must be nonnegative")
    if ics is not None:
        for name in ("S0", "I0", "P0"):
            v = getattr(ics, name)
            if not (math.isfinite(v) and v > 0):
                report.errors.append(f"{name} must be positive")
    if report.errors:
        return report

    if params.c1 >= params.c2:
        report.warnings.append("c1 >= c2: susceptible prey is expected to escape predators more often")
    if not 0 < params.e < 1:
        report.warnings.append("e outside (0, 1): conversion efficiency is normally a proper fraction")
    report.warnings.extend(resonance_hazards(params))
    return report


def rhs(params: ModelParams, state) -> np.ndarray:
    S, I, P = state
    p = params
    dS = p.r * S * (1.0 - (S + I) * p.inv_K) - p.c1 * S * P - p.delta * S * I
    dI = p.delta * S * I - p.c2 * I * P - p.d1 * I
    dP = p.e * (p.c1 * S + p.c2 * I) * P - p.d2 * P
    return np.array([dS, dI, dP])


def linear_rates(params: ModelParams) -> np.ndarray:
    """Diagonal linear part kept on the left: ``(r, -d1, -d2)``."""
    return np.array([params.r, -params.d1, -params.d2])


def quadratic_coefficients(params: ModelParams) -> dict[str, tuple[float, float, float]]:
    """Coefficients of the products SS, SI, SP, IP in (dS, dI, dP).

    ``rhs(x) == linear_rates * x + sum(coef * product)`` for every state.
    """
    p = params
    rk = p.r * p.inv_K
    return {
        "SS": (-rk, 0.0, 0.0),
        "SI": (-(rk + p.delta), p.delta, 0.0),
        "SP": (-p.c1, 0.0, p.e * p.c1),
        "IP": (0.0, -p.c2, p.e * p.c2),
    }

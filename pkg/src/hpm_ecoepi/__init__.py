"""Homotopy perturbation series for a prey-predator model with infected prey.

Submodules:

* :mod:`~hpm_ecoepi.expoly` - exact exponential-polynomial algebra
* :mod:`~hpm_ecoepi.model` - parameters, validation and right-hand side
* :mod:`~hpm_ecoepi.engine` - the perturbation expansion to any order
* :mod:`~hpm_ecoepi.paper_series` - the published series and its audit
* :mod:`~hpm_ecoepi.oracle` - fixed-step RK4 reference trajectories
* :mod:`~hpm_ecoepi.cli` - ``simulate`` / ``compare`` / ``audit`` / ``coeffs``
"""
from .engine import assemble, expand, residual, solve
from .expoly import ExpPolySeries, ExpPolyTerm, RateVector, integrate_linear_ode
from .model import FIG1_PARAMS, FIG1_STATE, InitialState, ModelParams, rhs, validate
from .oracle import integrate, sample
from .paper_series import AUDIT_PARAMS, audit, evaluate_paper_series, paper_coefficients

__version__ = "0.1.0"

__all__ = [
    "ExpPolySeries",
    "ExpPolyTerm",
    "RateVector",
    "integrate_linear_ode",
    "ModelParams",
    "InitialState",
    "FIG1_PARAMS",
    "FIG1_STATE",
    "rhs",
    "validate",
    "expand",
    "assemble",
    "solve",
    "residual",
    "integrate",
    "sample",
    "paper_coefficients",
    "evaluate_paper_series",
    "audit",
    "AUDIT_PARAMS",
]

"""Exponential polynomials: build, multiply, differentiate, integrate.

Run with ``python demos/01_exp_poly_algebra.py``.
"""
# %%
from hpm_ecoepi.expoly import (
    ExpPolySeries,
    RateVector,
    derivative,
    evaluate,
    integrate_linear_ode,
)
from hpm_ecoepi.model import FIG1_PARAMS as params

# Exponents are integer vectors (a, b, c) standing for a*r - b*d1 - c*d2,
# so equality of exponents never depends on floating point.
S0 = ExpPolySeries.single(0.01, RateVector(1, 0, 0))   # 0.01 e^{rt}
I0 = ExpPolySeries.single(0.01, RateVector(0, 1, 0))   # 0.01 e^{-d1 t}

# %%
# Products add exponent vectors.
SI = S0 * I0
for term in SI:
    print(f"{term.coeff:+.3e} t^{term.power} exp(({term.rate.label()}) t)")

# %%
# y' + d1*y = SI with y(0) = 0.  The forcing rate r-d1 is different from the
# homogeneous rate -d1, so the answer is two plain exponentials.
y = integrate_linear_ode(RateVector(0, -1, 0), SI, 0.0, params)
for term in y:
    print(f"{term.coeff:+.6e} exp(({term.rate.label()}) t)")

res = evaluate(derivative(y, params), params, 1.5) + params.d1 * evaluate(y, params, 1.5) - evaluate(SI, params, 1.5)
print("residual at t=1.5:", res)

# %%
# Forcing at the homogeneous rate gives a secular t*e^{-d1 t} term.
z = integrate_linear_ode(RateVector(0, -1, 0), I0, 0.0, params)
print([(t.coeff, t.power, t.rate.label()) for t in z])

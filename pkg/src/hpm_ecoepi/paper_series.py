"""The published second-order closed-form series and an audit of its constants.

The 23 published constants (A1..A9 for S, B1..B7 for I, C1..C7 for P) are
transcribed exactly as printed, suspected typos included.  :func:`audit`
compares each of them with the coefficient of the same exponential in the
expansion computed by :mod:`hpm_ecoepi.engine`, at the perturbation order
the constant belongs to.

Two transcription choices need a reading of the typesetting:

* B3 and C3 span two lines.  The reading kept here is the dimensionally
  consistent one: in B3 the whole bracket multiplies S(0)I(0)P(0); in C3 the
  bracket holds an S(0)I(0)P(0) part and an S(0)P(0)^2 part, both over
  (r - d1).
* A8 carries ``-1/(r-d1) (delta/r + 1/K) (...)``.  The literal reading
  multiplies by ``(delta/r + 1/K)``; the alternative divides by it.  Both are
  evaluated and the audit header names the one closer to the expansion.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .engine import HOMOGENEOUS_RATES, expand
from .expoly import ExpPolySeries, NumericalResonance, RateVector, evaluate
from .model import FIG1_PARAMS, FIG1_STATE, InitialState, ModelParams

__all__ = [
    "ResonantParameters",
    "PaperCoefficients",
    "AuditRecord",
    "AuditReport",
    "CONSTANT_NAMES",
    "PRINTED_RATES",
    "AUDIT_PARAMS",
    "MATCH_RTOL",
    "paper_coefficients",
    "paper_series",
    "evaluate_paper_series",
    "initial_defect",
    "relative_difference",
    "audit",
    "constant_order",
    "exit_status",
]

MATCH_RTOL = 1e-9

# the published comparison parameters with d2 moved off d1 so that distinct
# coefficient formulas do not coincide numerically
AUDIT_PARAMS = FIG1_PARAMS.replace(d2=0.3)

R = RateVector
PRINTED_RATES: dict[str, RateVector] = {
    "A1": R(2, 0, 0), "A2": R(1, 1, 0), "A3": R(1, 0, 1), "A4": R(3, 0, 0),
    "A5": R(1, 1, 1), "A6": R(1, 2, 0), "A7": R(1, 0, 2), "A8": R(2, 1, 0),
    "A9": R(2, 0, 1),
    "B1": R(1, 1, 0), "B2": R(0, 1, 1), "B3": R(1, 1, 1), "B4": R(1, 2, 0),
    "B5": R(2, 1, 0), "B6": R(0, 2, 1), "B7": R(0, 1, 2),
    "C1": R(1, 0, 1), "C2": R(0, 1, 1), "C3": R(1, 1, 1), "C4": R(1, 0, 2),
    "C5": R(2, 0, 1), "C6": R(0, 1, 2), "C7": R(0, 2, 1),
}
CONSTANT_NAMES = tuple(PRINTED_RATES)
_VARIABLE = {"A": 0, "B": 1, "C": 2}
_VARNAMES = ("S", "I", "P")

# denominators appearing in each printed formula
_DENOMINATORS: dict[str, tuple[str, ...]] = {
    "A1": ("K",), "A2": ("d1", "K"), "A3": ("d2",), "A4": ("K",),
    "A5": ("d1+d2", "d1", "d2", "K"), "A6": ("K", "d1", "d2"), "A7": ("d2",),
    "A8": ("r-d1", "r", "K", "d1"), "A9": ("r-d2", "K", "d2", "r"),
    "B1": ("r",), "B2": ("d1",), "B3": ("r-d2", "d1", "d2", "r"),
    "B4": ("d2", "r-d1"), "B5": ("2r", "r", "K"), "B6": ("d2", "d1+d2"),
    "B7": ("d1", "d2"),
    "C1": ("r",), "C2": ("d2",), "C3": ("r-d1", "r", "d2"), "C4": ("d2", "r-d2"),
    "C5": ("2r", "r", "K"), "C6": ("d1", "d1+d2"), "C7": ("d1", "d2"),
}


class ResonantParameters(ValueError):
    """Printed constants are undefined because a denominator vanishes."""

    def __init__(self, denominators):
        self.denominators = tuple(denominators)
        super().__init__("vanishing denominators in printed constants: " + ", ".join(self.denominators))


def _denominator_values(p: ModelParams) -> dict[str, float]:
    return {
        "K": p.K, "r": p.r, "2r": 2 * p.r, "d1": p.d1, "d2": p.d2,
        "d1+d2": p.d1 + p.d2, "r-d1": p.r - p.d1, "r-d2": p.r - p.d2,
    }


def _vanishing(p: ModelParams) -> set[str]:
    scale = p.r + p.d1 + p.d2
    return {
        name for name, v in _denominator_values(p).items()
        if v == 0 or (name.startswith("r-") and abs(v) <= 1e-12 * scale)
    }


def _printed_formulas(p: ModelParams, x: InitialState) -> dict[str, float]:
    r, c1, c2, dl, e, d1, d2 = p.r, p.c1, p.c2, p.delta, p.e, p.d1, p.d2
    iK = p.inv_K
    S, I, P = x.S0, x.I0, x.P0
    v: dict[str, float] = {}

    def put(name, fn):
        try:
            v[name] = float(fn())
        except ZeroDivisionError:
            v[name] = math.nan

    put("A1", lambda: -S**2 * iK)
    put("A2", lambda: (1 / d1) * (r * iK + dl) * S * I)
    put("A3", lambda: (c1 / d2) * S * P)
    put("A4", lambda: S**3 * iK**2)
    put("A5", lambda: (1 / (d1 + d2)) * ((r * iK + dl) * (2 * c2 / d1 + c1 / d2) - e * c2**2 / d2) * S * I * P)
    put("A6", lambda: r * c1 * iK / (2 * d1 * d2) * I * S * P + dl / (2 * d1**2) * (r * iK + dl) * I**2 * S)
    put("A7", lambda: c1**2 / d2**2 * S * P**2)
    put("A8", lambda: -(1 / (r - d1)) * (dl / r + iK) * (2 * r**2 * iK / d1 - r * iK + dl) * S**2 * I)
    put("A9", lambda: -(1 / (r - d2)) * (2 * r * c1 * iK / d2 - e * c1**2 / r - c1 * iK) * S**2 * P)
    put("B1", lambda: dl / r * S * I)
    put("B2", lambda: c2 / d1 * I * P)
    put("B3", lambda: (1 / (r - d2)) * (dl * (c1 / d2 + c2 / d1) - c2 * (e * c1 + dl) / r) * S * I * P)
    put("B4", lambda: dl * c1 / (d2 * (r - d1)) * S * I * P)
    put("B5", lambda: dl / (2 * r) * (dl / r - iK) * S**2 * I)
    put("B6", lambda: -e * c2**2 / (d2 * (d1 + d2)) * I**2 * P)
    put("B7", lambda: c2**2 / (2 * d2 * d1) * P**2 * I)
    put("C1", lambda: e * c1 / r * S * P)
    put("C2", lambda: -e * c2 / d2 * I * P)
    put("C3", lambda: (1 / (r - d1)) * ((e**2 * c1 * c2 / r + e * c2 * dl / r - e**2 * c1 * c2 / d2) * S * I * P
                                        + e * c1**2 / d2 * S * P**2))
    put("C4", lambda: e * c1**2 / (d2 * (r - d2)) * S * P**2)
    put("C5", lambda: e * c1 / (2 * r) * (e * c1 / r - iK) * S**2 * P)
    put("C6", lambda: -e * c2**2 / (d1 * (d1 + d2)) * P**2 * I)
    put("C7", lambda: e**2 * c2**2 / (2 * d2 * d1) * I**2 * P)
    put("A8_alt", lambda: -(2 * r**2 * iK / d1 - r * iK + dl) / ((r - d1) * (dl / r + iK)) * S**2 * I)
    return v


@dataclass(frozen=True)
class PaperCoefficients:
    """Evaluated published constants; undefined ones hold ``nan``."""

    values: dict[str, float]
    undefined: dict[str, tuple[str, ...]] = field(default_factory=dict)
    A8_alternative: float = math.nan

    rates = PRINTED_RATES

    @property
    def A(self) -> tuple[float, ...]:
        return tuple(self.values[f"A{i}"] for i in range(1, 10))

    @property
    def B(self) -> tuple[float, ...]:
        return tuple(self.values[f"B{i}"] for i in range(1, 8))

    @property
    def C(self) -> tuple[float, ...]:
        return tuple(self.values[f"C{i}"] for i in range(1, 8))

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    @property
    def well_defined(self) -> bool:
        return not self.undefined

    def table(self) -> str:
        lines = [f"{'name':<5} {'exponent':<12} {'value':>24}"]
        for name in CONSTANT_NAMES:
            val = self.values[name]
            txt = "UNDEFINED" if name in self.undefined else f"{val:.17g}"
            lines.append(f"{name:<5} {PRINTED_RATES[name].label():<12} {txt:>24}")
        return "\n".join(lines)


def paper_coefficients(params: ModelParams, ics: InitialState, strict: bool = True) -> PaperCoefficients:
    """Evaluate every published constant verbatim.

    With ``strict`` (the default) any vanishing denominator raises
    :class:`ResonantParameters`; otherwise the affected constants are ``nan``
    and listed in ``undefined``.
    """
    zero = _vanishing(params)
    raw = _printed_formulas(params, ics)
    undefined = {}
    for name in CONSTANT_NAMES:
        bad = tuple(d for d in _DENOMINATORS[name] if d in zero)
        if bad or not math.isfinite(raw[name]):
            undefined[name] = bad or ("rounding",)
    if strict and undefined:
        names = sorted({d for ds in undefined.values() for d in ds})
        raise ResonantParameters(names)
    values = {n: (math.nan if n in undefined else raw[n]) for n in CONSTANT_NAMES}
    alt = math.nan if "A8" in undefined else raw["A8_alt"]
    return PaperCoefficients(values, undefined, alt)


def paper_series(coeffs: PaperCoefficients, ics: InitialState) -> tuple[ExpPolySeries, ...]:
    """The printed approximations as exp-poly series (S, I, P)."""
    if not coeffs.well_defined:
        raise ResonantParameters(sorted({d for ds in coeffs.undefined.values() for d in ds}))
    out = []
    for var, y0 in enumerate((ics.S0, ics.I0, ics.P0)):
        series = ExpPolySeries.single(y0, HOMOGENEOUS_RATES[var])
        letter = "ABC"[var]
        for name in CONSTANT_NAMES:
            if name[0] == letter:
                series = series + ExpPolySeries.single(coeffs[name], PRINTED_RATES[name])
        out.append(series)
    return tuple(out)


def evaluate_paper_series(coeffs: PaperCoefficients, params: ModelParams, ics: InitialState, t):
    import numpy as np

    return np.array([evaluate(s, params, t) for s in paper_series(coeffs, ics)])


def initial_defect(coeffs: PaperCoefficients) -> tuple[float, float, float]:
    """``(sum A, sum B, sum C)``: how far the printed series misses the initial data."""
    return (math.fsum(coeffs.A), math.fsum(coeffs.B), math.fsum(coeffs.C))


def relative_difference(printed: float, derived: float) -> float:
    """``|printed - derived| / min(|printed|, |derived|)``; 0 when both vanish.

    Symmetric in its arguments, so a constant off by a factor ``q`` reports
    ``|q - 1|`` whichever side is larger.
    """
    if printed == derived:
        return 0.0
    if not (math.isfinite(printed) and math.isfinite(derived)):
        return math.nan
    denom = min(abs(printed), abs(derived))
    if denom == 0.0:
        return math.inf
    return abs(printed - derived) / denom


@dataclass(frozen=True)
class AuditRecord:
    name: str
    variable: str
    exponent: str
    order: int
    printed: float
    derived: float
    assembled: float
    abs_diff: float
    rel_diff: float
    verdict: str

    def as_dict(self) -> dict:
        def enc(x):
            return x if math.isfinite(x) else str(x)

        return {
            "name": self.name,
            "variable": self.variable,
            "exponent": self.exponent,
            "order": self.order,
            "printed": enc(self.printed),
            "derived": enc(self.derived),
            "assembled": enc(self.assembled),
            "abs_diff": enc(self.abs_diff),
            "rel_diff": enc(self.rel_diff),
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class AuditReport:
    records: tuple[AuditRecord, ...]
    header: tuple[str, ...]
    engine_only: tuple[str, ...]
    printed_only: tuple[str, ...]
    coincidences: tuple[str, ...]

    def __getitem__(self, name: str) -> AuditRecord:
        for rec in self.records:
            if rec.name == name:
                return rec
        raise KeyError(name)

    def verdicts(self) -> dict[str, str]:
        return {rec.name: rec.verdict for rec in self.records}

    def to_records(self) -> list[dict]:
        return [rec.as_dict() for rec in self.records]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(d, sort_keys=True) + "\n" for d in self.to_records())

    def to_table(self) -> str:
        lines = ["# " + h for h in self.header]
        for c in self.coincidences:
            lines.append("# coincidence warning: " + c)
        lines.append(f"{'name':<5} {'var':<3} {'exponent':<10} {'printed':>24} {'derived':>24} {'rel_diff':>10}  verdict")
        for rec in self.records:
            lines.append(
                f"{rec.name:<5} {rec.variable:<3} {rec.exponent:<10} {rec.printed:>24.17g} "
                f"{rec.derived:>24.17g} {rec.rel_diff:>10.3g}  {rec.verdict}"
            )
        if self.engine_only:
            lines.append("# exponentials in the order-2 expansion that the printed series lacks:")
            lines.extend("#   " + s for s in self.engine_only)
        if self.printed_only:
            lines.append("# printed exponentials absent from the order-2 expansion:")
            lines.extend("#   " + s for s in self.printed_only)
        return "\n".join(lines) + "\n"


def constant_order(name: str) -> int:
    """Perturbation order a printed constant belongs to.

    A particular term of order ``k`` is a product of ``k + 1`` zeroth-order
    exponentials, so its rate vector has component sum ``k + 1``.
    """
    return sum(PRINTED_RATES[name]) - 1


def _orders(params: ModelParams, ics: InitialState, order: int = 2):
    ex = expand(params, ics, order)
    return [ex.component(k) for k in range(order + 1)]


def _compare(params: ModelParams, ics: InitialState):
    coeffs = paper_coefficients(params, ics, strict=False)
    try:
        comps = _orders(params, ics)
        engine_note = None
    except NumericalResonance as exc:
        comps = None
        engine_note = str(exc)
    records = []
    for name in CONSTANT_NAMES:
        var = _VARIABLE[name[0]]
        rate = PRINTED_RATES[name]
        k = constant_order(name)
        printed = coeffs[name]
        if comps is None:
            derived = assembled = math.nan
        else:
            derived = comps[k][var].coefficient(rate)
            assembled = math.fsum(comps[j][var].coefficient(rate) for j in range(1, len(comps)))
        if name in coeffs.undefined or comps is None:
            verdict = "UNDEFINED"
            rel = absd = math.nan
        else:
            absd = abs(printed - derived)
            rel = relative_difference(printed, derived)
            verdict = "MATCH" if rel <= MATCH_RTOL else "MISMATCH"
        records.append(
            AuditRecord(name, _VARNAMES[var], rate.label(), k, printed, derived, assembled, absd, rel, verdict)
        )
    return coeffs, comps, records, engine_note


def _perturbed(params: ModelParams, ics: InitialState):
    # distinct small detunings; a symbolic identity survives them, a numerical
    # coincidence does not
    f = (1.000313, 0.999287, 1.000571, 0.999419, 1.000733, 0.999151, 1.000877, 0.999613)
    names = ("r", "K", "c1", "c2", "delta", "e", "d1", "d2")
    p2 = params.replace(**{n: getattr(params, n) * k for n, k in zip(names, f)})
    x2 = InitialState(ics.S0 * 1.000419, ics.I0 * 0.999533, ics.P0 * 1.000661)
    return p2, x2


def _rate_coincidences(params: ModelParams) -> list[str]:
    r, d1, d2 = params.r, params.d1, params.d2
    return [
        f"{sa} = {sb}: distinct printed formulas may agree numerically"
        for a, b, sa, sb in ((r, d1, "r", "d1"), (r, d2, "r", "d2"), (d1, d2, "d1", "d2"))
        if math.isclose(a, b, rel_tol=1e-12)
    ]


def _exponent_collisions(params: ModelParams) -> list[str]:
    out = []
    for letter in "ABC":
        names = [n for n in CONSTANT_NAMES if n[0] == letter]
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                ra, rb = PRINTED_RATES[a], PRINTED_RATES[b]
                if math.isclose(ra.value(params), rb.value(params), rel_tol=1e-12, abs_tol=1e-15):
                    out.append(f"exponents of {a} ({ra.label()}) and {b} ({rb.label()}) are numerically equal")
    return out


def _structure(comps) -> tuple[list[str], list[str]]:
    engine_only, printed_only = [], []
    for var in range(3):
        letter = "ABC"[var]
        printed = {(PRINTED_RATES[n], constant_order(n)) for n in CONSTANT_NAMES if n[0] == letter}
        for k in range(1, len(comps)):
            for term in comps[k][var].terms:
                if term.power == 0 and (term.rate, k) in printed:
                    continue
                if term.power == 0 and term.rate == HOMOGENEOUS_RATES[var]:
                    kind = "homogeneous correction"
                elif term.power == 0 and any(term.rate == rate for rate, _ in printed):
                    kind = "cross-order contribution to a printed exponential"
                else:
                    kind = "term"
                tpow = "" if term.power == 0 else f"t^{term.power} "
                engine_only.append(
                    f"{_VARNAMES[var]}{k}: {kind} {tpow}exp(({term.rate.label()})t) coefficient {term.coeff:.17g}"
                )
        for name in CONSTANT_NAMES:
            if name[0] != letter:
                continue
            k = constant_order(name)
            present = {t.rate for t in comps[k][var].terms if t.power == 0}
            if PRINTED_RATES[name] not in present:
                printed_only.append(f"{_VARNAMES[var]}{k}: {name} exp(({PRINTED_RATES[name].label()})t)")
    return engine_only, printed_only


def audit(params: ModelParams = AUDIT_PARAMS, ics: InitialState = FIG1_STATE) -> AuditReport:
    """Compare the 23 printed constants with the order-2 expansion.

    Each constant is compared with the coefficient of its exponential in the
    expansion component of its own perturbation order (see
    :func:`constant_order`); the ``assembled`` field also carries the total
    coefficient over orders 1..2.  Constants whose printed denominators vanish
    get verdict ``UNDEFINED``.  A constant that matches here but no longer
    matches after a small detuning of every parameter is reported as a
    coincidental match.
    """
    coeffs, comps, records, engine_note = _compare(params, ics)

    header = [
        "audit of printed constants against the order-2 homotopy perturbation expansion",
        "params: " + ", ".join(f"{k}={v!r}" for k, v in params.as_dict().items()),
        f"initial state: S0={ics.S0!r}, I0={ics.I0!r}, P0={ics.P0!r}",
        "derived = coefficient of the same exponential in the expansion term of the constant's order",
        f"MATCH when rel_diff <= {MATCH_RTOL:g}; rel_diff = |printed-derived|/min(|printed|,|derived|)",
        "reading of B3: whole bracket multiplies S(0)I(0)P(0)",
        "reading of C3: [(e^2c1c2/r + ec2delta/r - e^2c1c2/d2) S(0)I(0)P(0) + (ec1^2/d2) S(0)P(0)^2] / (r-d1)",
    ]
    if engine_note:
        header.append("expansion unavailable: " + engine_note)
    if coeffs.undefined:
        header.append("undefined constants: " + ", ".join(
            f"{n} (zero {'/'.join(d)})" for n, d in coeffs.undefined.items()))
    else:
        sA, sB, sC = initial_defect(coeffs)
        header.append(f"t=0 defect of printed series: sum A={sA:.17g}, sum B={sB:.17g}, sum C={sC:.17g}")
    if comps is not None and "A8" not in coeffs.undefined:
        derived = comps[constant_order("A8")][0].coefficient(PRINTED_RATES["A8"])
        lit = relative_difference(coeffs["A8"], derived)
        alt = relative_difference(coeffs.A8_alternative, derived)
        closer = "literal (multiply)" if lit <= alt else "alternative (divide)"
        header.append(
            f"A8 readings: literal={coeffs['A8']:.17g} (rel {lit:.3g}), "
            f"divide-by-(delta/r+1/K)={coeffs.A8_alternative:.17g} (rel {alt:.3g}); closer: {closer}"
        )
    header.extend("note: " + c for c in _exponent_collisions(params))

    coincidences = _rate_coincidences(params)
    matched = [rec.name for rec in records if rec.verdict == "MATCH"]
    if matched:
        p2, x2 = _perturbed(params, ics)
        _, _, rec2, note2 = _compare(p2, x2)
        if note2 is None:
            v2 = {r.name: r for r in rec2}
            for name in matched:
                if v2[name].verdict == "MISMATCH":
                    coincidences.append(
                        f"{name} matches only coincidentally (rel diff {v2[name].rel_diff:.3g} after detuning parameters)"
                    )

    engine_only, printed_only = ([], []) if comps is None else _structure(comps)
    return AuditReport(tuple(records), tuple(header), tuple(engine_only), tuple(printed_only), tuple(coincidences))


def exit_status(report: AuditReport) -> int:
    verdicts = set(report.verdicts().values())
    if "UNDEFINED" in verdicts:
        return 3
    if "MISMATCH" in verdicts:
        return 2
    return 0

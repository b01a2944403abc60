import numpy as np
import pytest

from hpm_ecoepi.model import FIG1_PARAMS, FIG1_STATE, InitialState, ModelParams

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record a pass/fail line for the acceptance summary, then assert."""

    def record(name: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")


@pytest.fixture
def fig1():
    return FIG1_PARAMS, FIG1_STATE


def random_params(rng: np.random.Generator, distinct: bool = True) -> ModelParams:
    """Parameters with rates spread far enough apart to avoid resonances."""
    while True:
        p = ModelParams(
            r=rng.uniform(0.05, 0.5),
            K=rng.uniform(0.1, 2.0),
            c1=rng.uniform(0.0, 0.5),
            c2=rng.uniform(0.0, 0.5),
            delta=rng.uniform(0.0, 0.5),
            e=rng.uniform(0.05, 0.95),
            d1=rng.uniform(0.05, 0.5),
            d2=rng.uniform(0.05, 0.5),
        )
        if not distinct:
            return p
        # keep every small-integer combination of (r, -d1, -d2) away from zero
        vals = [
            a * p.r - b * p.d1 - c * p.d2
            for a in range(0, 5) for b in range(0, 5) for c in range(0, 5)
            if (a, b, c) != (0, 0, 0) and abs(a) + b + c <= 5
        ]
        extra = [p.r - p.d1, p.r - p.d2, p.d1 - p.d2, p.r - 2 * p.d1, p.r - 2 * p.d2, 2 * p.r - p.d1 - p.d2]
        if min(abs(v) for v in vals + extra) > 0.01:
            return p


def random_state(rng: np.random.Generator) -> InitialState:
    return InitialState(*rng.uniform(0.005, 0.05, size=3))

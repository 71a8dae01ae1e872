from __future__ import annotations

from pathlib import Path

import pytest

from chronode import network
from chronode.scenario import ScenarioSpec, parse_scenario

PRESETS = Path(__file__).resolve().parents[1] / "src" / "chronode" / "presets"


def load_preset(name: str) -> ScenarioSpec:
    return parse_scenario((PRESETS / f"{name}.scn").read_text(encoding="utf-8"))


def run_spec(spec: ScenarioSpec, seed: int = 0, max_steps: int | None = None,
             tiebreak: str = "default"):
    engine = network.build_network(spec, seed=seed, tiebreak=tiebreak)
    budget = max_steps if max_steps is not None else (spec.budget or 100_000)
    trace = network.run_until_quiescent(engine, budget)
    return engine, trace


@pytest.fixture(scope="session")
def pimeson_spec():
    return load_preset("pimeson")


@pytest.fixture(scope="session")
def pimeson_run(pimeson_spec):
    return run_spec(pimeson_spec, seed=1)


@pytest.fixture(scope="session")
def twofc_run():
    return run_spec(load_preset("twofc"), seed=1)

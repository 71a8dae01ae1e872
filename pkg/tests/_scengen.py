"""Seeded random scenario generation for property and acceptance tests.

Scenarios are small (configurable node count), quick to quiesce, and
deliberately stress the awkward spots: coincident excitations, zero and
unequal link lengths, exact tick-boundary alignment, re-arming chains.
All randomness flows from one `random.Random` so a seed reproduces the
exact scenario.
"""

from __future__ import annotations

import random
from fractions import Fraction

from chronode.infostate import Qubit
from chronode.scenario import (
    ClockDecl,
    Deterministic,
    DetectorDecl,
    ExciteDecl,
    Exponential,
    FcDecl,
    LinkDecl,
    ScenarioSpec,
)

_PERIODS = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(3, 4)]

_PARTICLES = ["proton", "neutron", "photon", "electron"]


def _lifetime(rng: random.Random, period: Fraction):
    if rng.random() < 0.15:
        return Exponential(period * Fraction(rng.randint(1, 4)))
    # strictly positive, at most a dozen ticks, sometimes tick-aligned
    if rng.random() < 0.4:
        return Deterministic(period * rng.randint(1, 8))
    return Deterministic(period * Fraction(rng.randint(1, 24), rng.randint(2, 5)))


def _emit(rng: random.Random, index: int) -> tuple[Qubit, ...]:
    slots = [Qubit("n", Fraction(index + 1))]
    if rng.random() < 0.6:
        slots.append(Qubit("energy", Fraction(rng.randint(1, 500)), "eV"))
    if rng.random() < 0.5:
        slots.append(Qubit(f"in-{rng.choice(_PARTICLES)}", Fraction(1)))
        slots.append(Qubit(f"out-{rng.choice(_PARTICLES)}", Fraction(1)))
    return tuple(slots)


def random_scenario(seed: int, min_nodes: int = 3, max_nodes: int = 8) -> ScenarioSpec:
    rng = random.Random(seed)
    period = rng.choice(_PERIODS)
    clocks = [ClockDecl("B", period)]
    n_detectors = rng.randint(1, 2)
    detectors = [DetectorDecl(f"D{i}", "B") for i in range(n_detectors)]
    remaining = rng.randint(max(min_nodes - 1 - n_detectors, 1),
                            max_nodes - 1 - n_detectors)
    fcs = [FcDecl(f"F{i}", _lifetime(rng, period), Fraction(rng.randint(0, 9)),
                  _emit(rng, i))
           for i in range(remaining)]

    links = []
    def add_link(src: str, dst: str) -> None:
        roll = rng.random()
        if roll < 0.3:
            length = Fraction(0)
        elif roll < 0.7:
            length = period * rng.randint(1, 3)
        else:
            length = period * Fraction(rng.randint(1, 15), rng.randint(2, 6))
        links.append(LinkDecl(src, dst, length, Fraction(1)))

    # every unstable node reaches at least one detector; occasional chains
    for fc in fcs:
        add_link(fc.id, rng.choice(detectors).id)
    for fc in fcs:
        if len(fcs) > 1 and rng.random() < 0.45:
            other = rng.choice([f for f in fcs if f.id != fc.id])
            add_link(fc.id, other.id)

    rearm = "on-arrival" if rng.random() < 0.4 else "none"
    excites = []
    for i, fc in enumerate(fcs):
        if i == 0 or rng.random() < 0.7:
            if rng.random() < 0.5:
                at = period * rng.randint(0, 3)          # tick-aligned
            else:
                at = period * Fraction(rng.randint(0, 12), 4)
            excites.append(ExciteDecl(fc.id, at))
    if rng.random() < 0.25 and excites:
        # a coincident second excitation somewhere
        target = rng.choice(fcs)
        excites.append(ExciteDecl(target.id, excites[0].at))

    return ScenarioSpec(
        clocks=tuple(clocks),
        fcs=tuple(fcs),
        detectors=tuple(detectors),
        links=tuple(links),
        excites=tuple(excites),
        rearm=rearm,
        budget=200,
    )

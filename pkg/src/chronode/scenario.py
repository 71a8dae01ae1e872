"""Scenario files: the line-oriented network description grammar.

One directive per line, ``#`` starts a comment.  Numbers accept decimal,
scientific or ``p/q`` forms; canonical emission always writes ``p/q`` or
a bare integer, so ``parse(emit(spec)) == spec`` holds exactly.

    sc <id> period=<rational>s
    fc <id> lifetime=<rational>s|exp(<rational>s) [energy=<rational>eV]
            [emit=<slot>(;<slot>)*]
    det <id> clock=<sc-id>
    link <src> <dst> length=<rational>m [speed=<rational>]
    excite <fc-id> at=<rational>s
    rearm <none|on-arrival>
    budget <positive-int>

Slots use the ``tag=value[unit]`` form shared with traces.  Node ids live
in one namespace and may not repeat.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import DuplicateId, ScenarioSyntaxError, UnknownDirective
from .infostate import CONFIG_INDEX, Qubit, parse_qubit, render_qubit
from .rationals import format_rational, parse_rational

SPEED_OF_LIGHT = Fraction(299792458)

REARM_NONE = "none"
REARM_ON_ARRIVAL = "on-arrival"


@dataclass(frozen=True, slots=True)
class Deterministic:
    duration: Fraction

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError("deterministic lifetime must be positive")


@dataclass(frozen=True, slots=True)
class Exponential:
    mean: Fraction

    def __post_init__(self):
        if self.mean <= 0:
            raise ValueError("exponential mean must be positive")


@dataclass(frozen=True, slots=True)
class ClockDecl:
    id: str
    period: Fraction


@dataclass(frozen=True, slots=True)
class FcDecl:
    id: str
    lifetime: Deterministic | Exponential
    energy: Fraction
    emit: tuple[Qubit, ...]


@dataclass(frozen=True, slots=True)
class DetectorDecl:
    id: str
    clock: str


@dataclass(frozen=True, slots=True)
class LinkDecl:
    src: str
    dst: str
    length: Fraction
    speed: Fraction


@dataclass(frozen=True, slots=True)
class ExciteDecl:
    node: str
    at: Fraction


@dataclass(frozen=True, slots=True)
class ScenarioSpec:
    clocks: tuple[ClockDecl, ...] = ()
    fcs: tuple[FcDecl, ...] = ()
    detectors: tuple[DetectorDecl, ...] = ()
    links: tuple[LinkDecl, ...] = ()
    excites: tuple[ExciteDecl, ...] = ()
    rearm: str = REARM_NONE
    budget: int | None = None


_DEFAULT_EMIT = (Qubit(CONFIG_INDEX, Fraction(1)),)


def _column(line: str, token: str) -> int:
    pos = line.find(token)
    return pos + 1 if pos >= 0 else 1


def _strip_unit(value: str, unit: str, lineno: int, line: str) -> Fraction:
    if not value.endswith(unit):
        raise ScenarioSyntaxError(
            f"expected a value ending in {unit!r}, got {value!r}",
            lineno, _column(line, value),
        )
    try:
        return parse_rational(value[: -len(unit)])
    except (ValueError, ZeroDivisionError) as exc:
        raise ScenarioSyntaxError(str(exc), lineno, _column(line, value)) from exc


def _fields(tokens: list[str], lineno: int, line: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for token in tokens:
        key, eq, value = token.partition("=")
        if not eq or not key:
            raise ScenarioSyntaxError(
                f"expected key=value, got {token!r}", lineno, _column(line, token)
            )
        if key in out:
            raise ScenarioSyntaxError(
                f"repeated field {key!r}", lineno, _column(line, token)
            )
        out[key] = value
    return out


def _take(fields: dict[str, str], key: str, lineno: int, line: str) -> str:
    if key not in fields:
        raise ScenarioSyntaxError(f"missing field {key!r}", lineno, 1)
    return fields.pop(key)


def _check_id(name: str, seen: set[str], lineno: int, line: str) -> str:
    bad = set(';|[]=#:/,') | set(" \t")
    if not name or any(c in bad for c in name):
        raise ScenarioSyntaxError(f"invalid id {name!r}", lineno, _column(line, name))
    if name in seen:
        raise DuplicateId(f"id {name!r} already declared", lineno, _column(line, name))
    seen.add(name)
    return name


def parse_scenario(text: str) -> ScenarioSpec:
    clocks: list[ClockDecl] = []
    fcs: list[FcDecl] = []
    detectors: list[DetectorDecl] = []
    links: list[LinkDecl] = []
    excites: list[ExciteDecl] = []
    rearm = REARM_NONE
    budget: int | None = None
    seen: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        directive, args = tokens[0], tokens[1:]

        if directive == "sc":
            if not args:
                raise ScenarioSyntaxError("sc needs an id", lineno)
            node = _check_id(args[0], seen, lineno, line)
            fields = _fields(args[1:], lineno, line)
            period = _strip_unit(_take(fields, "period", lineno, line), "s", lineno, line)
            if period <= 0:
                raise ScenarioSyntaxError("period must be positive", lineno)
            clocks.append(ClockDecl(node, period))

        elif directive == "fc":
            if not args:
                raise ScenarioSyntaxError("fc needs an id", lineno)
            node = _check_id(args[0], seen, lineno, line)
            fields = _fields(args[1:], lineno, line)
            life_text = _take(fields, "lifetime", lineno, line)
            if life_text.startswith("exp(") and life_text.endswith(")"):
                mean = _strip_unit(life_text[4:-1], "s", lineno, line)
                lifetime: Deterministic | Exponential = Exponential(mean)
            else:
                lifetime = Deterministic(_strip_unit(life_text, "s", lineno, line))
            energy = Fraction(0)
            if "energy" in fields:
                energy = _strip_unit(fields.pop("energy"), "eV", lineno, line)
                if energy < 0:
                    raise ScenarioSyntaxError("energy must be nonnegative", lineno)
            emit = _DEFAULT_EMIT
            if "emit" in fields:
                try:
                    emit = tuple(parse_qubit(s) for s in fields.pop("emit").split(";"))
                except ValueError as exc:
                    raise ScenarioSyntaxError(str(exc), lineno) from exc
            fcs.append(FcDecl(node, lifetime, energy, emit))

        elif directive == "det":
            if not args:
                raise ScenarioSyntaxError("det needs an id", lineno)
            node = _check_id(args[0], seen, lineno, line)
            fields = _fields(args[1:], lineno, line)
            detectors.append(DetectorDecl(node, _take(fields, "clock", lineno, line)))

        elif directive == "link":
            if len(args) < 2:
                raise ScenarioSyntaxError("link needs src and dst", lineno)
            fields = _fields(args[2:], lineno, line)
            length = _strip_unit(_take(fields, "length", lineno, line), "m", lineno, line)
            if length < 0:
                raise ScenarioSyntaxError("length must be nonnegative", lineno)
            speed = SPEED_OF_LIGHT
            if "speed" in fields:
                try:
                    speed = parse_rational(fields.pop("speed"))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ScenarioSyntaxError(str(exc), lineno) from exc
            if speed <= 0:
                raise ScenarioSyntaxError("speed must be positive", lineno)
            links.append(LinkDecl(args[0], args[1], length, speed))

        elif directive == "excite":
            if not args:
                raise ScenarioSyntaxError("excite needs a node id", lineno)
            fields = _fields(args[1:], lineno, line)
            at = _strip_unit(_take(fields, "at", lineno, line), "s", lineno, line)
            if at < 0:
                raise ScenarioSyntaxError("excitation coordinate must be nonnegative", lineno)
            excites.append(ExciteDecl(args[0], at))

        elif directive == "rearm":
            if len(args) != 1 or args[0] not in (REARM_NONE, REARM_ON_ARRIVAL):
                raise ScenarioSyntaxError("rearm takes 'none' or 'on-arrival'", lineno)
            rearm = args[0]

        elif directive == "budget":
            if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                raise ScenarioSyntaxError("budget takes a positive integer", lineno)
            budget = int(args[0])

        else:
            raise UnknownDirective(f"unknown directive {directive!r}", lineno)

        if directive in ("sc", "fc", "det", "link", "excite") and fields:
            key = next(iter(fields))
            raise ScenarioSyntaxError(
                f"unexpected field {key!r}", lineno, _column(line, key)
            )

    return ScenarioSpec(
        tuple(clocks), tuple(fcs), tuple(detectors), tuple(links),
        tuple(excites), rearm, budget,
    )


def emit_scenario(spec: ScenarioSpec) -> str:
    """Canonical text form; round-trips through `parse_scenario` exactly."""
    lines = []
    for clock in spec.clocks:
        lines.append(f"sc {clock.id} period={format_rational(clock.period)}s")
    for fc in spec.fcs:
        if isinstance(fc.lifetime, Deterministic):
            life = f"{format_rational(fc.lifetime.duration)}s"
        else:
            life = f"exp({format_rational(fc.lifetime.mean)}s)"
        emit = ";".join(render_qubit(s) for s in fc.emit)
        lines.append(
            f"fc {fc.id} lifetime={life} "
            f"energy={format_rational(fc.energy)}eV emit={emit}"
        )
    for det in spec.detectors:
        lines.append(f"det {det.id} clock={det.clock}")
    for link in spec.links:
        lines.append(
            f"link {link.src} {link.dst} length={format_rational(link.length)}m "
            f"speed={format_rational(link.speed)}"
        )
    for excite in spec.excites:
        lines.append(f"excite {excite.node} at={format_rational(excite.at)}s")
    lines.append(f"rearm {spec.rearm}")
    if spec.budget is not None:
        lines.append(f"budget {spec.budget}")
    return "\n".join(lines) + "\n"


def canonical_digest(spec: ScenarioSpec) -> str:
    return hashlib.sha256(emit_scenario(spec).encode("utf-8")).hexdigest()


def _mirror_tag(tag: str) -> str:
    if tag.startswith("in-"):
        return "out-" + tag[3:]
    if tag.startswith("out-"):
        return "in-" + tag[4:]
    return tag


def mirror_scenario(spec: ScenarioSpec) -> ScenarioSpec:
    """Swap incoming/outgoing particle identities in emission templates.

    Reversing a process swaps which particles are fed in and which come
    out; the unstable configuration in the middle, and therefore every
    derived arrow, stays put.  The transform is an involution.
    """
    mirrored = []
    for fc in spec.fcs:
        emit = tuple(
            Qubit(_mirror_tag(s.tag), s.value, s.unit) for s in fc.emit
        )
        mirrored.append(replace(fc, emit=emit))
    return replace(spec, fcs=tuple(mirrored))

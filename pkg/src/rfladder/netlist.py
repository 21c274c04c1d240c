"""Ladder-circuit description: section topologies, a text format, a builder.

A netlist is two real reference-impedance ports around an ordered list
of two-port sections. The wiring inside each resonator is a modeling
choice, so the topology is data: the default ladder uses a series R-L
followed by a shunt C per resonator, with the feed line as an ideal
transmission-line section, but every topology is first-class in the
text format.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from . import sinum
from .errors import InputError

TOPOLOGIES = (
    "series_rlc",
    "shunt_series_rlc",
    "shunt_parallel_rlc",
    "series_rl_shunt_c",
    "tline",
)

_RLC_KEYS = ("R", "L", "C")
_TLINE_KEYS = ("z0", "eps_eff", "len")
PARAMETER_KEYS = _RLC_KEYS + _TLINE_KEYS

_ALLOWED = {t: frozenset(_RLC_KEYS) for t in TOPOLOGIES if t != "tline"}
_ALLOWED["tline"] = frozenset(_TLINE_KEYS)
_REQUIRED = {"series_rl_shunt_c": ("L", "C"), "tline": _TLINE_KEYS}

_NAME_RE = re.compile(r"[A-Za-z_]\w*")

DEFAULT_PORTS = (50.0, 4.5)


class NetlistError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLine(NetlistError):
    pass


class UnknownTopology(NetlistError):
    def __init__(self, topology: str, line: int | None = None):
        self.topology = topology
        super().__init__(f"unknown topology {topology!r}", line)


class BadValueSuffix(NetlistError):
    def __init__(self, token: str, line: int | None = None):
        self.token = token
        super().__init__(f"bad value {token!r}", line)


class DuplicatePort(NetlistError):
    def __init__(self, which: str, line: int | None = None):
        self.which = which
        super().__init__(f"port {which!r} declared twice", line)


class MissingPort(NetlistError):
    def __init__(self, which: str):
        self.which = which
        super().__init__(f"missing 'port {which}' declaration")


class DuplicateSectionName(NetlistError):
    def __init__(self, name: str, line: int | None = None):
        self.name = name
        super().__init__(f"duplicate section name {name!r}", line)


class MissingRequiredParameter(NetlistError):
    def __init__(self, parameter: str, line: int | None = None):
        self.parameter = parameter
        super().__init__(f"missing required parameter {parameter!r}", line)


class ForbiddenParameter(NetlistError):
    def __init__(self, parameter: str, line: int | None = None):
        self.parameter = parameter
        super().__init__(f"parameter {parameter!r} not allowed for this topology", line)


class NonPositiveParameter(NetlistError):
    def __init__(self, parameter: str, line: int | None = None):
        self.parameter = parameter
        super().__init__(f"parameter {parameter!r} violates its positivity bound", line)


def _validate_section(topology: str, params: dict[str, float], line: int | None) -> None:
    if topology not in TOPOLOGIES:
        raise UnknownTopology(topology, line)
    allowed = _ALLOWED[topology]
    for key in params:
        if key not in allowed:
            raise ForbiddenParameter(key, line)
    for key in _REQUIRED.get(topology, ()):
        if key not in params:
            raise MissingRequiredParameter(key, line)
    if topology != "tline" and topology != "series_rl_shunt_c" and not params:
        raise MissingRequiredParameter("one of R, L, C", line)
    for key, value in params.items():
        if key == "len":
            ok = value >= 0
        elif key == "eps_eff":
            ok = value >= 1
        else:
            ok = value > 0
        if not ok or not math.isfinite(value):
            raise NonPositiveParameter(key, line)


@dataclass(frozen=True)
class Section:
    """One cascaded two-port stage of the ladder."""

    name: str
    topology: str
    params: dict[str, float]

    def __post_init__(self):
        if not _NAME_RE.fullmatch(self.name):
            raise MalformedLine(f"bad section name {self.name!r}")
        _validate_section(self.topology, self.params, None)


@dataclass(frozen=True)
class Netlist:
    """Ordered sections between the input and output reference impedances."""

    input_port_impedance: float
    output_port_impedance: float
    sections: tuple[Section, ...] = ()

    def __post_init__(self):
        for which, z in (("in", self.input_port_impedance), ("out", self.output_port_impedance)):
            if not (math.isfinite(z) and z > 0):
                raise NonPositiveParameter(f"port {which} z0")
        seen = set()
        for section in self.sections:
            if section.name in seen:
                raise DuplicateSectionName(section.name)
            seen.add(section.name)

    def section(self, name: str) -> Section:
        for section in self.sections:
            if section.name == name:
                return section
        raise NetlistError(f"no section named {name!r}")


def _parse_number(token: str, line: int) -> float:
    try:
        return sinum.parse_value(token)
    except ValueError:
        raise BadValueSuffix(token, line) from None


def parse(text: str) -> Netlist:
    """Parse the netlist text format.

    Line-oriented; ``#`` starts a comment. Exactly one ``port in`` and
    one ``port out`` are required; sections cascade in file order from
    the input port to the output port.
    """
    in_z: float | None = None
    out_z: float | None = None
    sections: list[Section] = []
    names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "port":
            if len(tokens) != 3 or tokens[1] not in ("in", "out") or not tokens[2].startswith("z0="):
                raise MalformedLine(f"expected 'port in|out z0=<value>', got {line!r}", lineno)
            value = _parse_number(tokens[2][3:], lineno)
            if not (math.isfinite(value) and value > 0):
                raise NonPositiveParameter("z0", lineno)
            if tokens[1] == "in":
                if in_z is not None:
                    raise DuplicatePort("in", lineno)
                in_z = value
            else:
                if out_z is not None:
                    raise DuplicatePort("out", lineno)
                out_z = value
        elif tokens[0] == "section":
            if len(tokens) < 3 or not tokens[2].startswith("topology="):
                raise MalformedLine(
                    f"expected 'section <name> topology=<topo> ...', got {line!r}", lineno
                )
            name = tokens[1]
            if not _NAME_RE.fullmatch(name):
                raise MalformedLine(f"bad section name {name!r}", lineno)
            if name in names:
                raise DuplicateSectionName(name, lineno)
            topology = tokens[2][len("topology="):]
            params: dict[str, float] = {}
            for token in tokens[3:]:
                key, sep, rawval = token.partition("=")
                if not sep or key not in PARAMETER_KEYS:
                    raise MalformedLine(f"bad parameter {token!r}", lineno)
                if key in params:
                    raise MalformedLine(f"duplicate parameter {key!r}", lineno)
                params[key] = _parse_number(rawval, lineno)
            _validate_section(topology, params, lineno)
            names.add(name)
            sections.append(Section(name, topology, params))
        else:
            raise MalformedLine(f"unrecognized line {line!r}", lineno)

    if in_z is None:
        raise MissingPort("in")
    if out_z is None:
        raise MissingPort("out")
    return Netlist(in_z, out_z, tuple(sections))


def serialize(netlist: Netlist) -> str:
    """Render the canonical text form: parameters alphabetical, SI suffixes."""
    lines = [
        f"port in z0={sinum.format_value(netlist.input_port_impedance)}",
        f"port out z0={sinum.format_value(netlist.output_port_impedance)}",
    ]
    for section in netlist.sections:
        parts = [f"section {section.name} topology={section.topology}"]
        parts += [f"{k}={sinum.format_value(section.params[k])}" for k in sorted(section.params)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FeedLine:
    """Transmission-line parameters of the feed section."""

    characteristic_impedance: float
    effective_permittivity: float
    length: float


def from_elements(elements, feed: FeedLine | None = None, ports=DEFAULT_PORTS) -> Netlist:
    """Build the default ladder from extracted elements.

    Elements with an inductance become series R-L / shunt C resonator
    sections in order; an element without one (the feed cavity) becomes
    the tline section when `feed` is given, else a bare shunt capacitor.
    """
    if not elements:
        raise NetlistError("element list is empty")
    sections = []
    for el in elements:
        name = f"c{el.source_cavity_index}"
        if el.inductance is None:
            if feed is not None:
                sections.append(
                    Section(
                        name,
                        "tline",
                        {
                            "z0": feed.characteristic_impedance,
                            "eps_eff": feed.effective_permittivity,
                            "len": feed.length,
                        },
                    )
                )
            else:
                sections.append(Section(name, "shunt_parallel_rlc", {"C": el.capacitance}))
        else:
            params = {"L": el.inductance, "C": el.capacitance}
            if el.resistance:
                params["R"] = el.resistance
            sections.append(Section(name, "series_rl_shunt_c", params))
    return Netlist(ports[0], ports[1], tuple(sections))

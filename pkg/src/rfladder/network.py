"""Frequency-domain two-port analysis of a netlist.

Every section maps to a 2x2 chain (ABCD) matrix; a cascade is the
left-to-right matrix product with the input side first. S-parameters
use real, possibly distinct, reference impedances at the two ports.
The sweep evaluates all frequencies in one vectorized pass and returns
samples in grid order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NonPositiveFrequency, NumericalError
from .geometry import SPEED_OF_LIGHT
from .netlist import Netlist, Section


class EmptyCascade(InputError):
    pass


class SingularTermination(NumericalError):
    pass


class DegenerateDenominator(NumericalError):
    pass


class OutOfRange(NumericalError):
    pass


class NonPositiveImpedance(InputError):
    pass


@dataclass(frozen=True)
class AbcdMatrix:
    """Chain matrix of one two-port: b in ohms, c in siemens."""

    a: complex
    b: complex
    c: complex
    d: complex

    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c


IDENTITY = AbcdMatrix(1.0, 0.0, 0.0, 1.0)


def _section_abcd_array(section: Section, frequencies: np.ndarray) -> np.ndarray:
    """ABCD matrices of `section` at each frequency, shape (F, 2, 2)."""
    w = 2.0 * np.pi * frequencies
    p = section.params
    out = np.zeros((len(frequencies), 2, 2), dtype=complex)

    if section.topology == "tline":
        theta = w * math.sqrt(p["eps_eff"]) * p["len"] / SPEED_OF_LIGHT
        z0 = p["z0"]
        out[:, 0, 0] = np.cos(theta)
        out[:, 0, 1] = 1j * z0 * np.sin(theta)
        out[:, 1, 0] = 1j * np.sin(theta) / z0
        out[:, 1, 1] = np.cos(theta)
        return out

    def branch_z():
        z = np.zeros(len(frequencies), dtype=complex)
        if "R" in p:
            z += p["R"]
        if "L" in p:
            z += 1j * w * p["L"]
        if "C" in p:
            z += 1.0 / (1j * w * p["C"])
        return z

    if section.topology == "series_rlc":
        z = branch_z()
        out[:, 0, 0] = 1.0
        out[:, 0, 1] = z
        out[:, 1, 1] = 1.0
    elif section.topology == "shunt_series_rlc":
        out[:, 0, 0] = 1.0
        out[:, 1, 0] = 1.0 / branch_z()
        out[:, 1, 1] = 1.0
    elif section.topology == "shunt_parallel_rlc":
        y = np.zeros(len(frequencies), dtype=complex)
        if "R" in p:
            y += 1.0 / p["R"]
        if "L" in p:
            y += 1.0 / (1j * w * p["L"])
        if "C" in p:
            y += 1j * w * p["C"]
        out[:, 0, 0] = 1.0
        out[:, 1, 0] = y
        out[:, 1, 1] = 1.0
    elif section.topology == "series_rl_shunt_c":
        z = 1j * w * p["L"] + p.get("R", 0.0)
        y = 1j * w * p["C"]
        out[:, 0, 0] = 1.0 + z * y
        out[:, 0, 1] = z
        out[:, 1, 0] = y
        out[:, 1, 1] = 1.0
    else:  # unreachable for validated sections
        raise InputError(f"unknown topology {section.topology!r}")
    return out


def section_abcd(section: Section, frequency: float) -> AbcdMatrix:
    """Chain matrix of one section at a single frequency."""
    if not frequency > 0:
        raise NonPositiveFrequency("frequency must be > 0")
    m = _section_abcd_array(section, np.array([frequency], dtype=float))[0]
    return AbcdMatrix(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


def cascade(matrices) -> AbcdMatrix:
    """Left-to-right product of chain matrices (input side first)."""
    matrices = list(matrices)
    if not matrices:
        raise EmptyCascade("cascade of zero matrices")
    a, b, c, d = 1.0 + 0j, 0j, 0j, 1.0 + 0j
    for m in matrices:
        a, b, c, d = (
            a * m.a + b * m.c,
            a * m.b + b * m.d,
            c * m.a + d * m.c,
            c * m.b + d * m.d,
        )
    return AbcdMatrix(a, b, c, d)


def input_impedance(m: AbcdMatrix, load: complex) -> complex:
    """Impedance seen at the input with the output terminated in `load`."""
    denom = m.c * load + m.d
    if denom == 0:
        raise SingularTermination("C*ZL + D vanished")
    return (m.a * load + m.b) / denom


def reflection(z_in: complex, z_ref: float) -> complex:
    """Reflection coefficient (z_in - z_ref) / (z_in + z_ref)."""
    if not z_ref > 0:
        raise NonPositiveImpedance("reference impedance must be > 0")
    denom = z_in + z_ref
    if denom == 0:
        raise DegenerateDenominator("z_in + z_ref vanished")
    return (z_in - z_ref) / denom


def abcd_to_s(m: AbcdMatrix, z01: float, z02: float):
    """Convert a chain matrix to (s11, s12, s21, s22) with real references."""
    if not z01 > 0 or not z02 > 0:
        raise NonPositiveImpedance("reference impedances must be > 0")
    denom = m.a * z02 + m.b + m.c * z01 * z02 + m.d * z01
    if denom == 0:
        raise DegenerateDenominator("conversion denominator vanished")
    root = math.sqrt(z01 * z02)
    s11 = (m.a * z02 + m.b - m.c * z01 * z02 - m.d * z01) / denom
    s12 = 2.0 * m.determinant() * root / denom
    s21 = 2.0 * root / denom
    s22 = (-m.a * z02 + m.b - m.c * z01 * z02 + m.d * z01) / denom
    return s11, s12, s21, s22


def vswr(s11_magnitude: float) -> float:
    """Standing-wave ratio (1 + |s11|) / (1 - |s11|) for |s11| in [0, 1)."""
    if not 0 <= s11_magnitude < 1:
        raise OutOfRange(f"|s11| = {s11_magnitude} outside [0, 1)")
    return (1.0 + s11_magnitude) / (1.0 - s11_magnitude)


class InvalidGrid(InputError):
    pass


@dataclass(frozen=True)
class SweepGrid:
    """Linear frequency grid, hertz."""

    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self):
        if not 0 < self.start < self.stop:
            raise InvalidGrid("need 0 < start < stop")
        if self.points < 2:
            raise InvalidGrid("need at least 2 points")
        if self.spacing != "linear":
            raise InvalidGrid(f"unsupported spacing {self.spacing!r}")

    def frequencies(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


DB_FLOOR = -300.0  # reported dB of an exact-zero reflection


def magnitude_db(values: np.ndarray) -> np.ndarray:
    """20*log10|x| with zeros clamped to the -300 dB floor."""
    mag = np.maximum(np.abs(values), 10 ** (DB_FLOOR / 20.0))
    return 20.0 * np.log10(mag)


@dataclass(frozen=True, eq=False)
class SParameterTrace:
    """Reflection (and optionally transmission) samples over frequency."""

    frequencies: np.ndarray
    s11: np.ndarray
    s21: np.ndarray | None = None
    s12: np.ndarray | None = None
    s22: np.ndarray | None = None
    reference_impedances: tuple[float, float] = (50.0, 50.0)

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "s11", np.asarray(self.s11, dtype=complex))
        for name in ("s21", "s12", "s22"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, np.asarray(value, dtype=complex))
                if len(getattr(self, name)) != len(f):
                    raise InputError(f"{name} length differs from frequency length")
        if len(self.s11) != len(f):
            raise InputError("s11 length differs from frequency length")
        if len(f) and not f[0] > 0:
            raise InputError("frequencies must be positive")
        if len(f) > 1 and not np.all(np.diff(f) > 0):
            raise InputError("frequencies must be strictly increasing")

    def __len__(self) -> int:
        return len(self.frequencies)

    def s11_db(self) -> np.ndarray:
        return magnitude_db(self.s11)


def netlist_abcd_array(netlist: Netlist, frequencies: np.ndarray):
    """Cascaded ABCD over frequency plus the product of section determinants.

    The determinant product tracks reciprocity exactly: each section's
    determinant is 1 up to a rounding term, while the determinant of
    the multiplied-out cascade loses accuracy when entries are large.
    """
    total = np.broadcast_to(np.eye(2, dtype=complex), (len(frequencies), 2, 2)).copy()
    det = np.ones(len(frequencies), dtype=complex)
    for section in netlist.sections:
        m = _section_abcd_array(section, frequencies)
        det *= m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
        total = total @ m
    return total, det


def sweep(netlist: Netlist, grid: SweepGrid) -> SParameterTrace:
    """Simulate the netlist over the grid, returning the full S set."""
    freqs = grid.frequencies()
    total, det = netlist_abcd_array(netlist, freqs)
    z01 = netlist.input_port_impedance
    z02 = netlist.output_port_impedance
    a, b = total[:, 0, 0], total[:, 0, 1]
    c, d = total[:, 1, 0], total[:, 1, 1]
    denom = a * z02 + b + c * z01 * z02 + d * z01
    if np.any(denom == 0):
        raise DegenerateDenominator("conversion denominator vanished during sweep")
    root = math.sqrt(z01 * z02)
    s11 = (a * z02 + b - c * z01 * z02 - d * z01) / denom
    s21 = 2.0 * root / denom
    s12 = s21 * det
    s22 = (-a * z02 + b - c * z01 * z02 + d * z01) / denom
    return SParameterTrace(freqs, s11, s21, s12, s22, (z01, z02))

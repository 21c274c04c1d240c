"""Trace analysis: operating bands, mismatch efficiency, VSWR, similarity.

A band is a maximal frequency interval where the reflection magnitude
stays at or below a dB threshold; edges are interpolated linearly in
(frequency, dB) between the bracketing samples because thresholds are
specified in dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import sinum
from .elements import NonPositiveElement
from .errors import InputError
from .network import SParameterTrace, vswr


class EmptyTrace(InputError):
    pass


class BandOutsideTrace(InputError):
    pass


class NoOverlap(InputError):
    pass


@dataclass(frozen=True)
class BandReport:
    """Bands below threshold plus figures of merit over the widest one."""

    bands: tuple[tuple[float, float], ...]
    threshold_db: float
    widest_band: int | None
    mismatch_efficiency_percent: float | None
    max_vswr_in_band: float | None


@dataclass(frozen=True)
class SimilarityReport:
    """How closely two reflection traces agree around a dB threshold."""

    band_agreement_percent: float
    mean_abs_db_deviation: float
    common_grid_points: int


def find_bands(trace: SParameterTrace, threshold_db: float) -> list[tuple[float, float]]:
    """Maximal intervals with s11 dB <= threshold, edges interpolated."""
    if len(trace) == 0:
        raise EmptyTrace("trace has no samples")
    f = trace.frequencies
    db = trace.s11_db()
    below = db <= threshold_db

    def crossing(i_out: int, i_in: int) -> float:
        # crossing between a sample above threshold and one at/below it
        return f[i_out] + (threshold_db - db[i_out]) * (f[i_in] - f[i_out]) / (
            db[i_in] - db[i_out]
        )

    bands = []
    i = 0
    n = len(f)
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        lo = f[i] if i == 0 else crossing(i - 1, i)
        hi = f[j] if j == n - 1 else crossing(j + 1, j)
        bands.append((float(lo), float(hi)))
        i = j + 1
    return bands


def _band_samples(trace: SParameterTrace, band: tuple[float, float]):
    """In-band frequencies and dB values, with interpolated edge points."""
    f_lo, f_hi = band
    f = trace.frequencies
    if f_lo > f_hi or f_lo < f[0] or f_hi > f[-1]:
        raise BandOutsideTrace(f"band {band} outside trace span ({f[0]}, {f[-1]})")
    db = trace.s11_db()
    inner = (f > f_lo) & (f < f_hi)
    xs = np.concatenate(([f_lo], f[inner], [f_hi]))
    ys = np.concatenate(
        ([np.interp(f_lo, f, db)], db[inner], [np.interp(f_hi, f, db)])
    )
    return xs, ys


def mismatch_efficiency(trace: SParameterTrace, band: tuple[float, float]) -> float:
    """Band-averaged percentage of incident power not reflected.

    Trapezoidal average of 1 - |s11|^2 over the band, interpolating the
    trace (in dB) at the band edges.
    """
    if len(trace) == 0:
        raise EmptyTrace("trace has no samples")
    xs, ys = _band_samples(trace, band)
    power = 1.0 - (10.0 ** (ys / 20.0)) ** 2
    if xs[-1] == xs[0]:
        return float(100.0 * power[0])
    return float(100.0 * np.trapezoid(power, xs) / (xs[-1] - xs[0]))


def resonant_frequency(inductance: float, capacitance: float) -> float:
    """Series-resonance frequency 1 / (2*pi*sqrt(L*C)), in hertz."""
    if not inductance > 0:
        raise NonPositiveElement("inductance")
    if not capacitance > 0:
        raise NonPositiveElement("capacitance")
    return 1.0 / (2.0 * math.pi * math.sqrt(inductance * capacitance))


def compare_traces(
    a: SParameterTrace, b: SParameterTrace, threshold_db: float
) -> SimilarityReport:
    """Agreement of two traces resampled (linearly in dB) onto a's grid.

    Agreement counts the grid points where both traces sit on the same
    side of the threshold; the deviation is the mean |dB difference|.
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptyTrace("trace has no samples")
    lo = max(a.frequencies[0], b.frequencies[0])
    hi = min(a.frequencies[-1], b.frequencies[-1])
    if lo > hi:
        raise NoOverlap("frequency spans do not overlap")
    keep = (a.frequencies >= lo) & (a.frequencies <= hi)
    if not np.any(keep):
        raise NoOverlap("no grid points of the first trace inside the overlap")
    f = a.frequencies[keep]
    db_a = a.s11_db()[keep]
    db_b = np.interp(f, b.frequencies, b.s11_db())
    same_side = (db_a <= threshold_db) == (db_b <= threshold_db)
    return SimilarityReport(
        band_agreement_percent=float(100.0 * np.mean(same_side)),
        mean_abs_db_deviation=float(np.mean(np.abs(db_a - db_b))),
        common_grid_points=int(len(f)),
    )


def band_report(trace: SParameterTrace, threshold_db: float) -> BandReport:
    """Bands plus efficiency and worst VSWR over the widest band."""
    bands = tuple(find_bands(trace, threshold_db))
    if not bands:
        return BandReport(bands, threshold_db, None, None, None)
    widest = max(range(len(bands)), key=lambda k: bands[k][1] - bands[k][0])
    efficiency = mismatch_efficiency(trace, bands[widest])
    _, ys = _band_samples(trace, bands[widest])
    worst = float(np.max(ys))
    max_vswr = vswr(10.0 ** (worst / 20.0))
    return BandReport(bands, threshold_db, widest, efficiency, max_vswr)


def band_report_text(report: BandReport) -> str:
    """Flat key=value rendering of a band report."""
    lines = [
        f"threshold_db = {sinum.format_bare(report.threshold_db)}",
        f"bands = {len(report.bands)}",
    ]
    for k, (lo, hi) in enumerate(report.bands):
        lines.append(f"band{k}_low_hz = {sinum.format_bare(lo)}")
        lines.append(f"band{k}_high_hz = {sinum.format_bare(hi)}")
    if report.widest_band is not None:
        lines.append(f"widest_band = {report.widest_band}")
        lines.append(
            "mismatch_efficiency_percent = "
            f"{sinum.format_bare(report.mismatch_efficiency_percent)}"
        )
        lines.append(f"max_vswr_in_band = {sinum.format_bare(report.max_vswr_in_band)}")
    return "\n".join(lines) + "\n"


def bands_csv(report: BandReport) -> str:
    """One band per row: index, low edge, high edge."""
    lines = ["band,f_low_hz,f_high_hz"]
    for k, (lo, hi) in enumerate(report.bands):
        lines.append(f"{k},{sinum.format_bare(lo)},{sinum.format_bare(hi)}")
    return "\n".join(lines) + "\n"


def similarity_text(report: SimilarityReport) -> str:
    """Flat key=value rendering of a similarity report."""
    return (
        f"band_agreement_percent = {sinum.format_bare(report.band_agreement_percent)}\n"
        f"mean_abs_db_deviation = {sinum.format_bare(report.mean_abs_db_deviation)}\n"
        f"common_grid_points = {report.common_grid_points}\n"
    )


def similarity_csv(report: SimilarityReport) -> str:
    """Single-row CSV form of a similarity report."""
    return (
        "band_agreement_percent,mean_abs_db_deviation,common_grid_points\n"
        f"{sinum.format_bare(report.band_agreement_percent)},"
        f"{sinum.format_bare(report.mean_abs_db_deviation)},"
        f"{report.common_grid_points}\n"
    )

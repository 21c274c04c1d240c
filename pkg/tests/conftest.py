"""Shared fixtures and corpus generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from rfladder.geometry import canonical_cavities, canonical_geometry
from rfladder.netlist import Netlist, Section

RLC_TOPOLOGIES = (
    "series_rlc",
    "shunt_series_rlc",
    "shunt_parallel_rlc",
    "series_rl_shunt_c",
)

# Reference per-cavity element values (pF / nH / ohm columns).
REFERENCE_ELEMENTS = (
    # (W mm, d mm, C pF, L nH, R ohm); None marks the feed cavity dashes
    (3.2, 60.0, 0.0014, None, None),
    (18.0, 7.0, 0.417, 2.39, 3.3),
    (27.0, 7.5, 1.09, 3.28, 22.35),
    (36.0, 8.5, 1.69, 3.9, 20.0),
    (51.0, 10.5, 2.1, 5.15, 37.5),
    (62.0, 24.0, 4.2, 10.0, 35.5),
)


@pytest.fixture
def geometry():
    return canonical_geometry()


@pytest.fixture
def cavities():
    return canonical_cavities()


def reference_ladder() -> Netlist:
    """Ladder built from the reference element table plus the feed line."""
    sections = [
        Section(
            "c0",
            "tline",
            {"z0": 50.70748624138301, "eps_eff": 3.32599074017086, "len": 0.06},
        )
    ]
    for k, (_, _, c_pf, l_nh, r_ohm) in enumerate(REFERENCE_ELEMENTS[1:], start=1):
        sections.append(
            Section(
                f"c{k}",
                "series_rl_shunt_c",
                {"R": r_ohm, "L": l_nh * 1e-9, "C": c_pf * 1e-12},
            )
        )
    return Netlist(50.0, 4.5, tuple(sections))


def log_uniform(rng: np.random.Generator, lo: float, hi: float) -> float:
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def random_section(rng: np.random.Generator, name: str, lossless: bool) -> Section:
    """One random section with values spanning the reference-table decades."""
    topologies = RLC_TOPOLOGIES + ("tline",)
    topology = topologies[rng.integers(len(topologies))]
    if topology == "tline":
        params = {
            "z0": log_uniform(rng, 4.5, 80.0),
            "eps_eff": float(rng.uniform(1.0, 4.4)),
            "len": log_uniform(rng, 1e-3, 0.1),
        }
    elif topology == "series_rl_shunt_c":
        params = {"L": log_uniform(rng, 1e-9, 2e-8), "C": log_uniform(rng, 1e-15, 5e-12)}
        if not lossless and rng.random() < 0.7:
            params["R"] = log_uniform(rng, 1.0, 50.0)
    else:
        keys = ["L", "C"] if lossless else ["R", "L", "C"]
        chosen = [k for k in keys if rng.random() < 0.6]
        if not chosen:
            chosen = [keys[rng.integers(len(keys))]]
        draw = {
            "R": lambda: log_uniform(rng, 1.0, 50.0),
            "L": lambda: log_uniform(rng, 1e-9, 2e-8),
            "C": lambda: log_uniform(rng, 1e-15, 5e-12),
        }
        params = {k: draw[k]() for k in chosen}
    return Section(name, topology, params)


def random_netlist(rng: np.random.Generator, lossless: bool = False) -> Netlist:
    sections = tuple(
        random_section(rng, f"s{k}", lossless) for k in range(int(rng.integers(1, 9)))
    )
    return Netlist(log_uniform(rng, 5.0, 100.0), log_uniform(rng, 1.0, 100.0), sections)

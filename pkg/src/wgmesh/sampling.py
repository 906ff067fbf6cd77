"""Temporal sampling of critically sampled meshes and resonator planning."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .dispersion import critical_dc_limit
from .errors import DomainError
from .geometry import SQRT3, Disc, MeshGeometry, build_topology, critical_length

GEOMETRIES = (MeshGeometry.SQUARE, MeshGeometry.TRIANGULAR, MeshGeometry.HEXAGONAL)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class BandSpec:
    """Circular spatial band of radius ``B`` (cycles per metre)."""

    B: float

    def __post_init__(self):
        _positive("B", self.B)


@dataclass(frozen=True)
class MediumSpec:
    c: float
    f_max: float
    r: float

    def __post_init__(self):
        for name in ("c", "f_max", "r"):
            _positive(name, getattr(self, name))

    @property
    def band(self) -> BandSpec:
        return BandSpec(self.f_max / self.c)


def critical_sample_rate(c: float, band: BandSpec | float) -> float:
    """Lowest temporal rate that keeps a band-limited travelling wave alias free: ``2cB``."""
    B = band.B if isinstance(band, BandSpec) else _positive("B", band)
    return 2.0 * _positive("c", c) * B


def corrected_sample_rate(geometry: MeshGeometry | str, c: float, band: BandSpec | float) -> float:
    """Sample rate that brings the low-frequency speed of a critically sampled mesh to ``c``."""
    return critical_sample_rate(c, band) / critical_dc_limit(geometry)


def _two_significant(x: float) -> float:
    return float(f"{x:.2g}")


def junction_count(geometry: MeshGeometry | str, D: float, r: float) -> int:
    """Junctions needed to tile a disc of radius ``r``, by area per junction."""
    geometry = MeshGeometry.parse(geometry)
    area = math.pi * r * r
    if geometry is MeshGeometry.SQUARE:
        return round(area / D ** 2)
    cell = SQRT3 / 2 * D ** 2
    if geometry is MeshGeometry.TRIANGULAR:
        return round(area / cell)
    return round(2.0 / 3.0 * area / cell)


@dataclass(frozen=True)
class GeometryPlan:
    D: float
    N: int
    Fs: float
    Fbar: float


@dataclass(frozen=True)
class ResonatorPlan:
    medium: MediumSpec
    B: float
    geometries: dict[MeshGeometry, GeometryPlan]
    rounded_lengths: bool = False

    def __getitem__(self, geometry: MeshGeometry | str) -> GeometryPlan:
        return self.geometries[MeshGeometry.parse(geometry)]

    def to_dict(self) -> dict:
        def sig(x):
            return float(f"{x:.6g}")
        out = {"B": sig(self.B)}
        for g, p in self.geometries.items():
            out[g.value] = {"D": sig(p.D), "N": p.N, "Fs": sig(p.Fs), "Fbar": sig(p.Fbar)}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def table(self) -> str:
        head = f"{'geometry':<12}{'D [mm]':>10}{'N':>8}{'Fs [Hz]':>14}{'Fbar [Hz]':>14}"
        lines = [f"B = {self.B:.6g} 1/m", head, "-" * len(head)]
        for g, p in self.geometries.items():
            lines.append(f"{g.value:<12}{p.D * 1e3:>10.4g}{p.N:>8d}{p.Fs:>14.6g}{p.Fbar:>14.6g}")
        return "\n".join(lines) + "\n"


def plan_resonator(medium: MediumSpec, rounded_lengths: bool = False) -> ResonatorPlan:
    """Critical lengths, junction counts and sample rates for a round resonator.

    With ``rounded_lengths`` the critical lengths are rounded to two
    significant digits before the junction counts are computed; this
    gives 744, 645 and 1308 for the 10 kHz, 10 cm example, where full
    precision gives 744, 644 and 1288.  Sample rates never depend on the rounding.
    """
    band = medium.band
    Fs = critical_sample_rate(medium.c, band)
    plans = {}
    for g in GEOMETRIES:
        D = critical_length(g, band.B)
        if rounded_lengths:
            D = _two_significant(D)
        plans[g] = GeometryPlan(D, junction_count(g, D, medium.r), Fs,
                                corrected_sample_rate(g, medium.c, band))
    return ResonatorPlan(medium, band.B, plans, rounded_lengths)


def lattice_junction_counts(plan: ResonatorPlan) -> dict[MeshGeometry, int]:
    """Junctions enumerated on the actual lattices of ``plan`` inside the resonator disc."""
    disc = Disc(plan.medium.r)
    return {g: len(build_topology(g, p.D, disc)) for g, p in plan.geometries.items()}

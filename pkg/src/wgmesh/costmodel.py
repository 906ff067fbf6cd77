"""Per-junction cost accounting for each geometry and formulation.

Everything is normalised to the square mesh at equal spatial bandwidth
with its corrected sample rate set to one.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

from .dispersion import critical_dc_limit
from .errors import TimingResolutionWarning
from .geometry import MeshGeometry, build_topology, critical_length, periodic_cell, sample_density, lattice_basis
from .simulator import Excitation, Formulation, inject, rest_state, run

GEOMETRIES = (MeshGeometry.SQUARE, MeshGeometry.TRIANGULAR, MeshGeometry.HEXAGONAL)
FORMULATIONS = (Formulation.WAVEGUIDE_MESH, Formulation.FINITE_DIFFERENCE)

# Row labels in table order, mapped to CostRow attributes.
ROWS = (
    ("additions per junction", "adds_per_junction"),
    ("multiplications per junction", "mults_per_junction"),
    ("memory locations per junction", "mem_per_junction"),
    ("density of junctions", "junction_density"),
    ("density of memory locations", "mem_density"),
    ("sample rate", "relative_sample_rate"),
    ("additions per unit time and space", "adds_per_unit_time_space"),
    ("multiplications per unit time and space", "mults_per_unit_time_space"),
)


def relative_junction_density(geometry: MeshGeometry | str) -> float:
    """Junction density at critical sampling, relative to the square mesh."""
    geometry = MeshGeometry.parse(geometry)
    dens = sample_density(lattice_basis(geometry, critical_length(geometry, 1.0)))
    return dens / sample_density(lattice_basis(MeshGeometry.SQUARE, critical_length(MeshGeometry.SQUARE, 1.0)))


def relative_sample_rate(geometry: MeshGeometry | str) -> float:
    """Corrected sample rate relative to the square mesh."""
    return critical_dc_limit(MeshGeometry.SQUARE) / critical_dc_limit(geometry)


@dataclass(frozen=True)
class CostRow:
    geometry: MeshGeometry
    formulation: Formulation
    adds_per_junction: int
    mults_per_junction: int
    mem_per_junction: int
    junction_density: float
    relative_sample_rate: float
    shift_eligible: bool

    @property
    def mem_density(self) -> float:
        return self.mem_per_junction * self.junction_density

    @property
    def adds_per_unit_time_space(self) -> float:
        return self.adds_per_junction * self.junction_density * self.relative_sample_rate

    @property
    def mults_per_unit_time_space(self) -> float:
        return self.mults_per_junction * self.junction_density * self.relative_sample_rate

    def values(self) -> list[float]:
        return [float(getattr(self, attr)) for _, attr in ROWS]


def cost_row(geometry: MeshGeometry | str, formulation: Formulation | str) -> CostRow:
    """Per-junction and per-unit-time-and-space costs of one implementation.

    A waveguide-mesh junction with ``N`` ports scatters with ``2N - 1``
    additions and one multiplication by ``2/N`` and stores ``N`` waves.  The
    finite-difference update of the same junction takes ``N`` additions
    (``N - 1`` for the neighbour sum, one for the subtraction), one
    multiplication, and two stored values.  The multiplication by ``1/2``
    of the square mesh can be a bit shift.
    """
    geometry = MeshGeometry.parse(geometry)
    formulation = Formulation.parse(formulation)
    N = geometry.ports
    if formulation is Formulation.WAVEGUIDE_MESH:
        adds, mem = 2 * N - 1, N
    else:
        adds, mem = N, 2
    return CostRow(geometry, formulation, adds, 1, mem,
                   relative_junction_density(geometry), relative_sample_rate(geometry),
                   shift_eligible=geometry is MeshGeometry.SQUARE)


def cost_table() -> list[CostRow]:
    """All six cells, waveguide-mesh columns first, each in square/triangular/hexagonal order."""
    return [cost_row(g, f) for f in FORMULATIONS for g in GEOMETRIES]


def format_table(rows: list[CostRow] | None = None, fmt: str = "text") -> str:
    rows = cost_table() if rows is None else rows
    if fmt == "csv":
        out = ["geometry,formulation," + ",".join(attr for _, attr in ROWS) + ",shift_eligible"]
        for r in rows:
            vals = ",".join(f"{v:.12g}" for v in r.values())
            out.append(f"{r.geometry.value},{r.formulation.value},{vals},{int(r.shift_eligible)}")
        return "\n".join(out) + "\n"
    abbrev = {MeshGeometry.SQUARE: "Sq.", MeshGeometry.TRIANGULAR: "Tr.", MeshGeometry.HEXAGONAL: "Hex."}
    label_w = max(len(label) for label, _ in ROWS) + 2
    head = " " * label_w + "".join(f"{r.formulation.value.upper() + ' ' + abbrev[r.geometry]:>12}" for r in rows)
    lines = [head]
    for label, attr in ROWS:
        lines.append(f"{label:<{label_w}}" + "".join(f"{float(getattr(r, attr)):>12.6g}" for r in rows))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class BenchmarkResult:
    geometry: MeshGeometry
    formulation: Formulation
    junctions: int
    steps: int
    seconds: float
    junction_updates_per_second: float
    measured_ratio_to_square: float
    modeled_ratio_to_square: float
    reliable: bool


def _time_run(geometry: MeshGeometry, formulation: Formulation, size: int, steps: int) -> tuple[int, float]:
    nx, ny = {MeshGeometry.SQUARE: (size, size),
              MeshGeometry.TRIANGULAR: (size, max(1, size // 2)),
              MeshGeometry.HEXAGONAL: (max(1, size // 2), max(1, size // 2))}[geometry]
    topo = build_topology(geometry, 1.0, periodic_cell(geometry, 1.0, nx, ny))
    state = inject(rest_state(topo, formulation), Excitation.impulse(topo.center_junction()), 0)
    t0 = time.perf_counter()
    run(state, steps)
    return len(topo), time.perf_counter() - t0


def benchmark(geometry: MeshGeometry | str, formulation: Formulation | str,
              topology_size: int = 64, steps: int = 200) -> BenchmarkResult:
    """Time the stepping loop on a periodic mesh of roughly ``topology_size**2`` junctions.

    The cost per junction update is scaled by relative junction density and
    sample rate and compared with the square finite-difference mesh, giving
    a wall-clock counterpart of the modelled additions per unit time and
    space.  Runs shorter than 10 ms emit :class:`TimingResolutionWarning`.
    """
    geometry = MeshGeometry.parse(geometry)
    formulation = Formulation.parse(formulation)
    J, secs = _time_run(geometry, formulation, topology_size, steps)
    reliable = secs >= 0.01
    if geometry is MeshGeometry.SQUARE and formulation is Formulation.FINITE_DIFFERENCE:
        J0, secs0 = J, secs
    else:
        J0, secs0 = _time_run(MeshGeometry.SQUARE, Formulation.FINITE_DIFFERENCE, topology_size, steps)
        reliable = reliable and secs0 >= 0.01
    if not reliable:
        warnings.warn("benchmark run shorter than 10 ms; timings are unreliable",
                      TimingResolutionWarning, stacklevel=2)
    per_update = secs / (J * steps)
    per_update0 = secs0 / (J0 * steps)
    row = cost_row(geometry, formulation)
    scale = row.junction_density * row.relative_sample_rate
    measured = per_update * scale / per_update0
    modeled = row.adds_per_unit_time_space / cost_row(MeshGeometry.SQUARE, Formulation.FINITE_DIFFERENCE).adds_per_unit_time_space
    return BenchmarkResult(geometry, formulation, J, steps, secs, J * steps / secs if secs > 0 else math.inf,
                           measured, modeled, reliable)

"""Two-dimensional digital waveguide meshes and their finite-difference equivalents.

Each geometry comes in the waveguide-mesh form (wave variables on
branches) and the finite-difference form (signals at junctions).
"""

from .errors import ConfigurationError, DomainError, TimingResolutionWarning
from .geometry import (
    Boundary,
    DirectionSet,
    Disc,
    LatticeBasis,
    MeshGeometry,
    MeshTopology,
    SubtractedLattice,
    TorusRect,
    build_topology,
    critical_length,
    distance_spectrum,
    lattice_basis,
    neighbor_directions,
    periodic_cell,
    reciprocal_basis,
    sample_density,
)
from .dispersion import (
    OUT_OF_BAND,
    DispersionMap,
    SpatialFrequency,
    Variant,
    critical_dc_limit,
    critical_speed_ratio,
    dc_limit,
    dispersion_map,
    geometric_factor,
    normalized_speed_ratio,
    phase_shift,
    speed_ratio,
)
from .simulator import (
    Excitation,
    Formulation,
    ProbeSeries,
    SimState,
    fd_step,
    inject,
    measure_plane_wave_phase,
    rest_state,
    run,
    scatter_step,
    total_energy,
)
from .sampling import (
    BandSpec,
    MediumSpec,
    ResonatorPlan,
    corrected_sample_rate,
    critical_sample_rate,
    plan_resonator,
)
from .costmodel import CostRow, benchmark, cost_row, cost_table

__version__ = "0.1.0"

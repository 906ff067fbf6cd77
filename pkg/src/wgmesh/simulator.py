"""Time-domain engines: waveguide mesh (branch state) and finite differences (junction state).

Waveguide-mesh state holds, for every port of every junction, the wave
travelling *into* the junction.  One step scatters at every junction and
moves each outgoing wave along its branch with a unit delay.  The
finite-difference state holds the junction signal at the current and the
previous time step.

Both engines are linear and shift-invariant.  Excitations are injected so
that the two formulations stay exactly equivalent on periodic meshes:

* waveguide mesh: every incoming wave at the junction gains ``e/2``, which
  raises the junction signal by ``e``;
* finite differences: the current value gains ``e`` and the previous value
  of each neighbour gains ``e/N``, which is the image of the same
  perturbation in junction coordinates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .dispersion import FrequencyLike, _components, phase_shift
from .errors import ConfigurationError, DomainError
from .geometry import (
    Boundary,
    MeshGeometry,
    MeshTopology,
    TorusRect,
    build_topology,
    periodic_cell,
)


class Formulation(enum.Enum):
    WAVEGUIDE_MESH = "wm"
    FINITE_DIFFERENCE = "fd"

    @classmethod
    def parse(cls, value: "Formulation | str") -> "Formulation":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"waveguide-mesh": "wm", "waveguide": "wm", "mesh": "wm",
                   "finite-difference": "fd", "difference": "fd"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown formulation {value!r}") from None


@dataclass(frozen=True, eq=False)
class SimState:
    """Immutable snapshot of a simulation at step ``step_index``.

    For the waveguide mesh ``waves`` has shape ``(J, N)``; ``waves[j, k]`` is
    the wave entering junction ``j`` through port ``k``.  For finite
    differences ``now`` and ``prev`` have shape ``(J,)``.
    """

    formulation: Formulation
    topology: MeshTopology
    waves: NDArray[np.float64] | None = None
    now: NDArray[np.float64] | None = None
    prev: NDArray[np.float64] | None = None
    step_index: int = 0

    @property
    def is_wm(self) -> bool:
        return self.formulation is Formulation.WAVEGUIDE_MESH

    def junction_signal(self) -> NDArray[np.float64]:
        """Physical field value at every junction."""
        if self.is_wm:
            return (2.0 / self.topology.ports) * self.waves.sum(axis=1)
        return self.now.copy()


def rest_state(topology: MeshTopology, formulation: Formulation | str) -> SimState:
    formulation = Formulation.parse(formulation)
    J, N = len(topology), topology.ports
    if formulation is Formulation.WAVEGUIDE_MESH:
        return SimState(formulation, topology, waves=np.zeros((J, N)))
    return SimState(formulation, topology, now=np.zeros(J), prev=np.zeros(J))


def fd_state(topology: MeshTopology, now: ArrayLike, prev: ArrayLike, step_index: int = 0) -> SimState:
    now = np.array(now, dtype=float)
    prev = np.array(prev, dtype=float)
    if now.shape != (len(topology),) or prev.shape != (len(topology),):
        raise DomainError("finite-difference state needs one value per junction")
    return SimState(Formulation.FINITE_DIFFERENCE, topology, now=now, prev=prev, step_index=step_index)


def wm_state(topology: MeshTopology, waves: ArrayLike, step_index: int = 0) -> SimState:
    waves = np.array(waves, dtype=float)
    if waves.shape != (len(topology), topology.ports):
        raise DomainError(f"waveguide state needs shape {(len(topology), topology.ports)}")
    return SimState(Formulation.WAVEGUIDE_MESH, topology, waves=waves, step_index=step_index)


def scatter_junction(incoming: ArrayLike) -> NDArray[np.float64]:
    """Outgoing waves of one lossless junction with equal port impedances."""
    s = np.asarray(incoming, dtype=float)
    return (2.0 / len(s)) * s.sum() - s


def _scatter_propagate(topology: MeshTopology, waves: NDArray) -> NDArray:
    N = topology.ports
    v = (2.0 / N) * waves.sum(axis=1)
    out = v[:, None] - waves
    src, sign = topology.wave_routing
    return (sign * out.ravel()[src]).reshape(waves.shape)


def _fd_next(topology: MeshTopology, now: NDArray, prev: NDArray) -> NDArray:
    padded = np.append(now, 0.0)  # index -1 reads the clamped rim
    nbr_sum = padded[topology.neighbors].sum(axis=1)
    return (2.0 / topology.ports) * nbr_sum - prev


def scatter_step(state: SimState) -> SimState:
    if not state.is_wm:
        raise DomainError("scatter_step needs a waveguide-mesh state")
    waves = _scatter_propagate(state.topology, state.waves)
    return replace(state, waves=waves, step_index=state.step_index + 1)


def fd_step(state: SimState) -> SimState:
    if state.is_wm:
        raise DomainError("fd_step needs a finite-difference state")
    nxt = _fd_next(state.topology, state.now, state.prev)
    return replace(state, now=nxt, prev=state.now.copy(), step_index=state.step_index + 1)


def step(state: SimState) -> SimState:
    return scatter_step(state) if state.is_wm else fd_step(state)


@dataclass(frozen=True, eq=False)
class Excitation:
    """Additive drive ``signal[n]`` applied to one junction at step ``n``."""

    junction_index: int
    signal: NDArray[np.float64]

    def __post_init__(self):
        sig = np.array(self.signal, dtype=float).ravel()
        if not np.all(np.isfinite(sig)):
            raise DomainError("excitation signal must be finite")
        object.__setattr__(self, "signal", sig)

    @classmethod
    def impulse(cls, junction_index: int, amplitude: float = 1.0, delay: int = 0) -> "Excitation":
        sig = np.zeros(delay + 1)
        sig[delay] = amplitude
        return cls(junction_index, sig)

    def value(self, n: int) -> float:
        return float(self.signal[n]) if 0 <= n < len(self.signal) else 0.0


def _check_junction(topology: MeshTopology, j: int) -> int:
    if not (0 <= int(j) < len(topology)):
        raise DomainError(f"junction {j} out of range for a mesh of {len(topology)} junctions")
    return int(j)


def _inject_arrays(state: SimState, j: int, e: float, waves, now, prev) -> None:
    topo = state.topology
    if state.is_wm:
        waves[j] += e / 2.0
    else:
        now[j] += e
        nbrs = topo.neighbors[j]
        np.add.at(prev, nbrs[nbrs >= 0], e / topo.ports)


def inject(state: SimState, excitation: Excitation, n: int | None = None) -> SimState:
    """Apply ``excitation.signal[n]`` at the current step; ``n`` defaults to the step index."""
    j = _check_junction(state.topology, excitation.junction_index)
    e = excitation.value(state.step_index if n is None else n)
    if e == 0.0:
        return state
    if state.is_wm:
        waves = state.waves.copy()
        _inject_arrays(state, j, e, waves, None, None)
        return replace(state, waves=waves)
    now, prev = state.now.copy(), state.prev.copy()
    _inject_arrays(state, j, e, None, now, prev)
    return replace(state, now=now, prev=prev)


@dataclass(frozen=True, eq=False)
class ProbeSeries:
    junction_index: int
    samples: NDArray[np.float64]

    def to_csv(self, start_step: int = 0) -> str:
        rows = ["step,value"]
        rows += [f"{start_step + n},{v:.17g}" for n, v in enumerate(self.samples)]
        return "\n".join(rows) + "\n"

    def write_csv(self, path: str | Path, start_step: int = 0) -> None:
        Path(path).write_text(self.to_csv(start_step))


@dataclass(frozen=True, eq=False)
class RunResult:
    final: SimState
    probes: list[ProbeSeries]
    snapshots: dict[int, NDArray[np.float64]] = field(default_factory=dict)


def snapshot_csv(topology: MeshTopology, values: ArrayLike) -> str:
    values = np.asarray(values, dtype=float)
    rows = ["index,x,y,value"]
    for j, ((x, y), v) in enumerate(zip(topology.positions, values)):
        rows.append(f"{j},{x:.9g},{y:.9g},{v:.17g}")
    return "\n".join(rows) + "\n"


def write_snapshot(directory: str | Path, step_index: int, topology: MeshTopology, values: ArrayLike) -> Path:
    path = Path(directory) / f"snap_{step_index}.csv"
    path.write_text(snapshot_csv(topology, values))
    return path


def run(
    state: SimState,
    steps: int,
    probes: Sequence[int] = (),
    excitations: Iterable[Excitation] = (),
    snapshot_every: int | None = None,
) -> RunResult:
    """Advance ``steps`` time steps.

    At each step ``n`` (counted from ``state.step_index``) the excitations
    are injected, probes and snapshots record the junction signal, and the
    state is advanced.  Probe series therefore have exactly ``steps``
    samples.  Indices are validated before any stepping.
    """
    if steps < 0:
        raise DomainError("steps must be non-negative")
    topo = state.topology
    probes = [_check_junction(topo, p) for p in probes]
    excitations = list(excitations)
    for ex in excitations:
        _check_junction(topo, ex.junction_index)
    if snapshot_every is not None and snapshot_every < 1:
        raise DomainError("snapshot_every must be >= 1")

    wm = state.is_wm
    waves = state.waves.copy() if wm else None
    now = None if wm else state.now.copy()
    prev = None if wm else state.prev.copy()
    records = np.zeros((len(probes), steps))
    snapshots: dict[int, NDArray] = {}
    probe_idx = np.array(probes, dtype=np.int64)
    scale = 2.0 / topo.ports
    n0 = state.step_index

    for i in range(steps):
        n = n0 + i
        for ex in excitations:
            e = ex.value(n)
            if e != 0.0:
                _inject_arrays(state, ex.junction_index, e, waves, now, prev)
        want_snap = snapshot_every is not None and n % snapshot_every == 0
        if len(probes) or want_snap:
            signal = scale * waves.sum(axis=1) if wm else now
            records[:, i] = signal[probe_idx]
            if want_snap:
                snapshots[n] = signal.copy()
        if wm:
            waves = _scatter_propagate(topo, waves)
        else:
            now, prev = _fd_next(topo, now, prev), now

    if wm:
        final = replace(state, waves=waves, step_index=n0 + steps)
    else:
        final = replace(state, now=now, prev=prev, step_index=n0 + steps)
    series = [ProbeSeries(p, records[i]) for i, p in enumerate(probes)]
    return RunResult(final, series, snapshots)


def total_energy(state: SimState) -> float:
    """Sum of squared branch wave variables, accumulated in a fixed order."""
    if not state.is_wm:
        raise DomainError("total_energy is defined for waveguide-mesh states only")
    return math.fsum((state.waves.ravel() ** 2).tolist())


def commensurate_torus(geometry: MeshGeometry | str, D: float, f: FrequencyLike,
                       max_cells: int = 256) -> TorusRect:
    """Smallest :func:`periodic_cell` torus on which the plane wave ``f`` is periodic."""
    geometry = MeshGeometry.parse(geometry)
    x, y = (float(c) for c in _components(f))
    base = periodic_cell(geometry, D, 1, 1)
    counts = []
    for comp, period in ((x, base.width), (y, base.height)):
        for m in range(1, max_cells + 1):
            cycles = comp * period * m
            if abs(cycles - round(cycles)) < 1e-9:
                counts.append(m)
                break
        else:
            raise ConfigurationError(
                f"frequency {comp} has no whole number of cycles over up to {max_cells} periods")
    return periodic_cell(geometry, D, counts[0], counts[1])


def plane_wave_coefficient(topology: MeshTopology, values: ArrayLike, f: FrequencyLike) -> complex:
    x, y = (float(c) for c in _components(f))
    arg = 2.0 * math.pi * (topology.positions @ np.array([x, y]))
    return complex(np.asarray(values) @ np.exp(-1j * arg))


def measure_plane_wave_phase(
    geometry: MeshGeometry | str,
    D: float,
    f: FrequencyLike,
    steps: int = 400,
    region: TorusRect | None = None,
    discard: int = 10,
) -> float:
    """Measured phase advance per step (radians, positive) of a travelling plane wave.

    A finite-difference torus is seeded with ``cos(2 pi <x, xi>)`` and a
    previous step retarded by the analytic phase shift.  The phase of the
    spatial Fourier coefficient at ``f`` is then tracked.  Its mean rotation
    per step is returned; for the hexagonal mesh the rotation is taken over
    pairs of steps and halved, which cancels the alternating mode carried
    by the two junction orientations.
    """
    geometry = MeshGeometry.parse(geometry)
    x, y = (float(c) for c in _components(f))
    if x == 0.0 and y == 0.0:
        return 0.0
    if region is None:
        region = commensurate_torus(geometry, D, (x, y))
    W, H = region.width, region.height
    for comp, period in ((x, W), (y, H)):
        if abs(comp * period - round(comp * period)) > 1e-9:
            raise ConfigurationError(f"frequency {(x, y)} is not periodic on a {W} x {H} torus")
    lag = geometry.alpha
    if steps < discard + 2 * lag:
        raise DomainError(f"need at least {discard + 2 * lag} steps")
    topo = build_topology(geometry, D, region, Boundary.PERIODIC)

    seed = abs(phase_shift(geometry, D, (x, y)))
    arg = 2.0 * math.pi * (topo.positions @ np.array([x, y]))
    now, prev = np.cos(arg), np.cos(arg + seed)
    basis = np.exp(-1j * arg)
    coeff = np.empty(steps, dtype=complex)
    for n in range(steps):
        coeff[n] = now @ basis
        now, prev = _fd_next(topo, now, prev), now
    c = coeff[discard:]
    rotation = np.angle(c[lag:] * np.conj(c[:-lag]))
    return float(-rotation.mean() / lag)

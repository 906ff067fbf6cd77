"""Sampling lattices and finite mesh topologies for the three 2D mesh geometries.

Junction positions are generated from integer coordinates on a *fine*
lattice.  The square mesh uses the square lattice, the triangular mesh the
triangular lattice, and the hexagonal mesh keeps the triangular-lattice
points that are not on the coarse sublattice of index 3.

The hexagonal mesh is laid out in a frame rotated by 90 degrees with
respect to the bases returned by :func:`lattice_basis`, so that its
nearest-neighbour directions (90, 210 and 330 degrees) agree with the
cosine arguments of the hexagonal geometric factor in
:mod:`wgmesh.dispersion`.  Rotations leave densities and distance spectra
unchanged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConfigurationError, DomainError

SQRT3 = math.sqrt(3.0)


class MeshGeometry(enum.Enum):
    SQUARE = "square"
    TRIANGULAR = "triangular"
    HEXAGONAL = "hexagonal"

    @property
    def ports(self) -> int:
        """Number of waveguide ports per junction."""
        return {"square": 4, "triangular": 6, "hexagonal": 3}[self.value]

    @property
    def orientation_count(self) -> int:
        return 2 if self is MeshGeometry.HEXAGONAL else 1

    @property
    def alpha(self) -> int:
        """Time-step multiplicity of the von Neumann recurrence."""
        return 2 if self is MeshGeometry.HEXAGONAL else 1

    @classmethod
    def parse(cls, value: "MeshGeometry | str") -> "MeshGeometry":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"s": "square", "swm": "square", "t": "triangular",
                   "twm": "triangular", "h": "hexagonal", "hwm": "hexagonal"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown mesh geometry {value!r}") from None


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    FIXED_RIM = "fixed-rim"

    @classmethod
    def parse(cls, value: "Boundary | str") -> "Boundary":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        if key in ("fixed", "rim", "fixedrim"):
            key = "fixed-rim"
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown boundary kind {value!r}") from None


def _check_length(D: float, name: str = "D") -> float:
    D = float(D)
    if not (D > 0 and math.isfinite(D)):
        raise DomainError(f"{name} must be a positive finite length, got {D}")
    return D


@dataclass(frozen=True, eq=False)
class LatticeBasis:
    """A nonsingular 2x2 basis; the lattice is ``matrix @ u`` for integer ``u``."""

    matrix: NDArray[np.float64]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2, 2):
            raise DomainError(f"lattice basis must be 2x2, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.det == 0.0 or not np.all(np.isfinite(m)):
            raise DomainError("lattice basis is singular")

    @property
    def columns(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return self.matrix[:, 0], self.matrix[:, 1]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def __repr__(self) -> str:
        return f"LatticeBasis({self.matrix.tolist()!r})"


@dataclass(frozen=True, eq=False)
class SubtractedLattice:
    """Point set ``fine \\ coarse``, used for the hexagonal mesh."""

    fine: LatticeBasis
    coarse: LatticeBasis
    subtract: bool = True


BasisLike = Union[LatticeBasis, SubtractedLattice, ArrayLike]


def lattice_basis(geometry: MeshGeometry | str, D: float) -> LatticeBasis | SubtractedLattice:
    """Return the sampling lattice of a mesh with waveguide length ``D``.

    Square and triangular meshes get a single basis.  The hexagonal mesh gets
    a :class:`SubtractedLattice` carrying the fine basis ``L_t(D)`` and the
    coarse basis ``L_T(D)`` whose points are removed.
    """
    geometry = MeshGeometry.parse(geometry)
    D = _check_length(D)
    tri = LatticeBasis([[D, D / 2], [0.0, SQRT3 * D / 2]])
    if geometry is MeshGeometry.SQUARE:
        return LatticeBasis([[D, 0.0], [0.0, D]])
    if geometry is MeshGeometry.TRIANGULAR:
        return tri
    coarse = LatticeBasis([[1.5 * D, 0.0], [SQRT3 * D / 2, SQRT3 * D]])
    return SubtractedLattice(fine=tri, coarse=coarse)


def _as_basis(basis: BasisLike) -> LatticeBasis | SubtractedLattice:
    if isinstance(basis, (LatticeBasis, SubtractedLattice)):
        return basis
    return LatticeBasis(basis)


def sample_density(basis: BasisLike) -> float:
    """Samples per unit area, ``1/|det L|``."""
    basis = _as_basis(basis)
    if isinstance(basis, SubtractedLattice):
        return sample_density(basis.fine) - sample_density(basis.coarse)
    return 1.0 / abs(basis.det)


def reciprocal_basis(basis: BasisLike) -> LatticeBasis:
    """Basis of the lattice of spectral image centres (inverse transpose)."""
    basis = _as_basis(basis)
    if isinstance(basis, SubtractedLattice):
        raise DomainError("reciprocal_basis needs a single lattice; pass .fine or .coarse")
    return LatticeBasis(np.linalg.inv(basis.matrix).T)


def critical_length(geometry: MeshGeometry | str, B: float) -> float:
    """Longest waveguide length whose circular spectral images (radius B) do not overlap."""
    geometry = MeshGeometry.parse(geometry)
    B = float(B)
    if not (B > 0 and math.isfinite(B)):
        raise DomainError(f"spatial bandwidth must be positive, got {B}")
    if geometry is MeshGeometry.SQUARE:
        return 1.0 / (2.0 * B)
    if geometry is MeshGeometry.TRIANGULAR:
        return 1.0 / (SQRT3 * B)
    return 1.0 / (3.0 * B)


def distance_spectrum(basis: BasisLike, count: int) -> NDArray[np.float64]:
    """Sorted distances from the origin to the ``count`` closest other lattice points."""
    basis = _as_basis(basis)
    if isinstance(basis, SubtractedLattice):
        raise DomainError("distance_spectrum needs a single lattice")
    n = int(math.isqrt(count)) + 3
    while True:
        r = np.arange(-n, n + 1)
        u = np.stack(np.meshgrid(r, r, indexing="ij"), axis=-1).reshape(-1, 2)
        norms = np.linalg.norm(u @ basis.matrix.T, axis=1)
        rim = norms[np.abs(u).max(axis=1) == n].min()
        inner = np.sort(norms[(norms > 0) & (norms < rim)])
        if inner.size >= count:
            return inner[:count]
        n *= 2


# Integer neighbour offsets in fine-lattice coordinates.  Port order matters:
# it fixes which port of the neighbour a branch lands on (see reverse_ports).
_OFFSETS = {
    MeshGeometry.SQUARE: np.array([(1, 0), (-1, 0), (0, 1), (0, -1)]),
    MeshGeometry.TRIANGULAR: np.array([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]),
    MeshGeometry.HEXAGONAL: np.array([(1, 0), (-1, 1), (0, -1)]),
}
_REVERSE_PORT = {
    MeshGeometry.SQUARE: np.array([1, 0, 3, 2]),
    MeshGeometry.TRIANGULAR: np.array([3, 4, 5, 0, 1, 2]),
    MeshGeometry.HEXAGONAL: np.array([0, 1, 2]),
}
_ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


def lattice_frame(geometry: MeshGeometry | str, D: float) -> NDArray[np.float64]:
    """Matrix mapping fine-lattice integer coordinates to junction positions."""
    geometry = MeshGeometry.parse(geometry)
    D = _check_length(D)
    if geometry is MeshGeometry.SQUARE:
        return np.array([[D, 0.0], [0.0, D]])
    tri = np.array([[D, D / 2], [0.0, SQRT3 * D / 2]])
    if geometry is MeshGeometry.TRIANGULAR:
        return tri
    return _ROT90 @ tri


def _offsets(geometry: MeshGeometry, orientation: int) -> NDArray[np.int64]:
    if orientation not in range(geometry.orientation_count):
        raise DomainError(f"orientation {orientation} invalid for {geometry.value} mesh")
    off = _OFFSETS[geometry]
    return -off if orientation == 1 else off


def _hex_coset(u: NDArray[np.int64]) -> NDArray[np.int64]:
    # 0 on the coarse sublattice, 1/2 for the two junction orientations
    return (u[..., 0] - u[..., 1]) % 3


@dataclass(frozen=True, eq=False)
class DirectionSet:
    directions: NDArray[np.float64]
    orientation_tag: int = 0

    def __len__(self) -> int:
        return len(self.directions)


def neighbor_directions(geometry: MeshGeometry | str, D: float, orientation_tag: int = 0) -> DirectionSet:
    """Vectors from a junction to its ``N`` neighbours, in port order."""
    geometry = MeshGeometry.parse(geometry)
    frame = lattice_frame(geometry, D)
    vecs = _offsets(geometry, int(orientation_tag)) @ frame.T
    vecs.setflags(write=False)
    return DirectionSet(vecs, int(orientation_tag))


@dataclass(frozen=True)
class TorusRect:
    width: float
    height: float


@dataclass(frozen=True)
class Disc:
    radius: float


Region = Union[TorusRect, Disc]


def periodic_cell(geometry: MeshGeometry | str, D: float, nx: int, ny: int) -> TorusRect:
    """Smallest commensurate rectangle repeated ``nx`` by ``ny`` times.

    Junction counts: ``nx*ny`` (square), ``2*nx*ny`` (triangular) and
    ``4*nx*ny`` (hexagonal).
    """
    geometry = MeshGeometry.parse(geometry)
    D = _check_length(D)
    if nx < 1 or ny < 1:
        raise DomainError("cell repetition counts must be >= 1")
    if geometry is MeshGeometry.SQUARE:
        return TorusRect(nx * D, ny * D)
    if geometry is MeshGeometry.TRIANGULAR:
        return TorusRect(nx * D, ny * SQRT3 * D)
    return TorusRect(nx * SQRT3 * D, ny * 3.0 * D)


class Junction(NamedTuple):
    index: int
    position: tuple[float, float]
    orientation_tag: int
    is_boundary: bool


@dataclass(frozen=True, eq=False)
class MeshTopology:
    """Finite set of junctions with port-ordered adjacency.

    ``neighbors[j, k]`` is the junction reached through port ``k`` of
    junction ``j``, or -1 for a boundary port.  A branch leaving ``j``
    through port ``k`` enters the neighbour through port
    ``reverse_ports[k]``.
    """

    geometry: MeshGeometry
    D: float
    boundary: Boundary
    region: Region
    coords: NDArray[np.int64]
    positions: NDArray[np.float64]
    orientation: NDArray[np.int64]
    neighbors: NDArray[np.int64]

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def n_junctions(self) -> int:
        return len(self.positions)

    @property
    def ports(self) -> int:
        return self.geometry.ports

    @property
    def reverse_ports(self) -> NDArray[np.int64]:
        return _REVERSE_PORT[self.geometry]

    @cached_property
    def is_boundary(self) -> NDArray[np.bool_]:
        return (self.neighbors < 0).any(axis=1)

    def degree(self, j: int) -> int:
        return int((self.neighbors[j] >= 0).sum())

    def junction(self, j: int) -> Junction:
        x, y = self.positions[j]
        return Junction(int(j), (float(x), float(y)), int(self.orientation[j]), bool(self.is_boundary[j]))

    @property
    def junctions(self) -> list[Junction]:
        return [self.junction(j) for j in range(len(self))]

    def nearest_junction(self, point: ArrayLike) -> int:
        d = np.linalg.norm(self.positions - np.asarray(point, dtype=float), axis=1)
        return int(np.argmin(d))

    def center_junction(self) -> int:
        if isinstance(self.region, TorusRect):
            return self.nearest_junction((self.region.width / 2, self.region.height / 2))
        return self.nearest_junction((0.0, 0.0))

    @cached_property
    def wave_routing(self) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Flat gather map for branch propagation.

        Incoming wave ``(j, k)`` at the next step equals ``sign * out.flat[src]``
        where ``out`` holds the outgoing waves.  Boundary ports reflect their
        own outgoing wave with inverted sign.
        """
        J, N = self.neighbors.shape
        own = np.arange(J * N).reshape(J, N)
        src = self.neighbors * N + self.reverse_ports[None, :]
        boundary = self.neighbors < 0
        src = np.where(boundary, own, src).ravel()
        sign = np.where(boundary, -1.0, 1.0).ravel()
        src.setflags(write=False)
        sign.setflags(write=False)
        return src, sign

    def to_text(self) -> str:
        lines = [f"{self.geometry.value} {self.D:.9g} {self.boundary.value} {len(self)}"]
        for j in range(len(self)):
            x, y = self.positions[j]
            nbrs = " ".join(str(int(n)) for n in self.neighbors[j])
            lines.append(f"{j} {x:.9g} {y:.9g} {int(self.orientation[j])} "
                         f"{int(self.is_boundary[j])} {nbrs}")
        return "\n".join(lines) + "\n"

    def write_text(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


def build_topology(
    geometry: MeshGeometry | str,
    D: float,
    region: Region,
    boundary: Boundary | str | None = None,
) -> MeshTopology:
    """Enumerate the junctions of a mesh inside ``region``.

    ``TorusRect`` regions must be periodic, with width and height that are
    whole multiples of the lattice periods (see :func:`periodic_cell`).
    ``Disc`` regions use a clamped rim: junctions strictly inside the
    circle are kept and missing neighbours become boundary ports.

    Raises:
        ConfigurationError: incommensurate torus or region/boundary mismatch.
        DomainError: non-positive lengths or an empty region.
    """
    geometry = MeshGeometry.parse(geometry)
    D = _check_length(D)
    if boundary is None:
        boundary = Boundary.PERIODIC if isinstance(region, TorusRect) else Boundary.FIXED_RIM
    boundary = Boundary.parse(boundary)
    frame = lattice_frame(geometry, D)
    if isinstance(region, TorusRect):
        if boundary is not Boundary.PERIODIC:
            raise ConfigurationError("a TorusRect region requires periodic boundaries")
        return _build_torus(geometry, D, frame, region)
    if isinstance(region, Disc):
        if boundary is not Boundary.FIXED_RIM:
            raise ConfigurationError("a Disc region requires a fixed rim")
        return _build_disc(geometry, D, frame, region)
    raise ConfigurationError(f"unsupported region {region!r}")


def _orientations(geometry: MeshGeometry, u: NDArray[np.int64]) -> NDArray[np.int64]:
    if geometry is MeshGeometry.HEXAGONAL:
        return _hex_coset(u) - 1
    return np.zeros(len(u), dtype=np.int64)


def _keep(geometry: MeshGeometry, u: NDArray[np.int64]) -> NDArray[np.bool_]:
    if geometry is MeshGeometry.HEXAGONAL:
        return _hex_coset(u) != 0
    return np.ones(len(u), dtype=bool)


def _neighbor_coords(geometry: MeshGeometry, u: NDArray[np.int64], orient: NDArray[np.int64]) -> NDArray[np.int64]:
    off = _OFFSETS[geometry]
    sign = np.where(orient == 1, -1, 1)[:, None, None]
    return u[:, None, :] + sign * off[None, :, :]


def _build_torus(geometry: MeshGeometry, D: float, frame: NDArray, region: TorusRect) -> MeshTopology:
    W, H = float(region.width), float(region.height)
    if not (W > 0 and H > 0):
        raise DomainError("torus dimensions must be positive")
    periods = np.linalg.solve(frame, np.array([[W, 0.0], [0.0, H]]))
    M = np.rint(periods).astype(np.int64)
    if not np.allclose(periods, M, rtol=0, atol=1e-9 * max(1.0, np.abs(periods).max())):
        raise ConfigurationError(
            f"torus {W} x {H} is not commensurate with the {geometry.value} lattice of spacing {D}")
    if geometry is MeshGeometry.HEXAGONAL and np.any(_hex_coset(M.T) != 0):
        raise ConfigurationError("hexagonal torus periods must lie on the coarse sublattice")
    det = int(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    adj = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=np.int64)
    if det < 0:
        det, adj = -det, -adj

    corners = np.array([[0, 0], M[:, 0], M[:, 1], M[:, 0] + M[:, 1]])
    lo, hi = corners.min(axis=0), corners.max(axis=0)
    g = np.stack(np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1),
                             indexing="ij"), axis=-1).reshape(-1, 2)
    t = g @ adj.T
    inside = np.all((t >= 0) & (t < det), axis=1) & _keep(geometry, g)
    u, t = g[inside], t[inside]
    if len(u) == 0:
        raise DomainError("region too small to hold a junction")
    order = np.lexsort((t[:, 0], t[:, 1]))
    u, t = u[order], t[order]

    keys = t[:, 0] * det + t[:, 1]
    sorter = np.argsort(keys)
    orient = _orientations(geometry, u)
    nb = _neighbor_coords(geometry, u, orient)
    nt = (nb @ adj.T) % det
    nkeys = nt[..., 0] * det + nt[..., 1]
    pos_in_sorted = np.searchsorted(keys[sorter], nkeys)
    neighbors = sorter[pos_in_sorted]
    if not np.array_equal(keys[neighbors], nkeys):
        raise ConfigurationError("torus wrap produced a neighbour outside the junction set")

    positions = t.astype(float) / det * np.array([W, H])
    return MeshTopology(geometry, D, Boundary.PERIODIC, region, u, positions, orient, neighbors)


def _build_disc(geometry: MeshGeometry, D: float, frame: NDArray, region: Disc) -> MeshTopology:
    r = float(region.radius)
    if not (r > 0 and math.isfinite(r)):
        raise DomainError("disc radius must be positive")
    smin = np.linalg.svd(frame, compute_uv=False).min()
    n = int(math.ceil(r / smin)) + 2
    rng = np.arange(-n, n + 1)
    g = np.stack(np.meshgrid(rng, rng, indexing="ij"), axis=-1).reshape(-1, 2)
    pos = g @ frame.T
    inside = (np.hypot(pos[:, 0], pos[:, 1]) < r) & _keep(geometry, g)
    u, positions = g[inside], pos[inside]
    if len(u) == 0:
        raise DomainError("region too small to hold a junction")
    order = np.lexsort((positions[:, 0], positions[:, 1]))
    u, positions = u[order], positions[order]

    span = 2 * n + 3
    def encode(c):
        return (c[..., 0] + n + 1) * span + (c[..., 1] + n + 1)
    keys = encode(u)
    sorter = np.argsort(keys)
    sorted_keys = keys[sorter]
    orient = _orientations(geometry, u)
    nkeys = encode(_neighbor_coords(geometry, u, orient))
    idx = np.clip(np.searchsorted(sorted_keys, nkeys), 0, len(keys) - 1)
    found = sorted_keys[idx] == nkeys
    neighbors = np.where(found, sorter[idx], -1)
    return MeshTopology(geometry, D, Boundary.FIXED_RIM, region, u, positions, orient, neighbors)

"""Von Neumann dispersion analysis of the three mesh geometries.

All functions accept a spatial frequency as a :class:`SpatialFrequency` or
any ``(xi_x, xi_y)`` pair; the components may be numpy arrays, in which
case the evaluation is elementwise.  Scalar calls return floats, or the
:data:`OUT_OF_BAND` marker where ``|b| > 2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConfigurationError, DomainError
from .geometry import SQRT3, MeshGeometry, _check_length, critical_length

TWO_PI = 2.0 * math.pi
# slack for |b| exceeding 2 by rounding only
_B_TOL = 1e-12


class SpatialFrequency(NamedTuple):
    xi_x: float
    xi_y: float

    @property
    def xi(self) -> float:
        return math.hypot(self.xi_x, self.xi_y)


class _OutOfBand:
    """Marker for frequencies with no propagating solution (``|b| > 2``)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OUT_OF_BAND"

    def __str__(self) -> str:
        return "oob"

    def __bool__(self) -> bool:
        return False


OUT_OF_BAND = _OutOfBand()
FrequencyLike = Union[SpatialFrequency, tuple, ArrayLike]


def _components(f: FrequencyLike) -> tuple[NDArray, NDArray]:
    xi_x, xi_y = f
    return np.asarray(xi_x, dtype=float), np.asarray(xi_y, dtype=float)


def _as_scalar_or_array(value: NDArray):
    return float(value) if np.ndim(value) == 0 else value


def _factor_and_gap(geometry: MeshGeometry, D: float, x: NDArray, y: NDArray) -> tuple[NDArray, NDArray]:
    """``b`` and ``2 - b``; the gap is a sum of squared sines, so it keeps full precision near dc."""
    w = TWO_PI * D
    if geometry is MeshGeometry.SQUARE:
        args = (w * x, w * y)
        b = np.cos(args[0]) + np.cos(args[1])
        scale = 2.0
    elif geometry is MeshGeometry.TRIANGULAR:
        args = (w * x, w * (0.5 * x + SQRT3 / 2 * y), w * (0.5 * x - SQRT3 / 2 * y))
        b = (2.0 / 3.0) * sum(np.cos(a) for a in args)
        scale = 4.0 / 3.0
    else:
        args = (w * SQRT3 * x, w * (SQRT3 / 2 * x + 1.5 * y), w * (SQRT3 / 2 * x - 1.5 * y))
        b = (8.0 / 9.0) * sum(np.cos(a) for a in args) - 2.0 / 3.0
        scale = 16.0 / 9.0
    gap = scale * sum(np.sin(0.5 * a) ** 2 for a in args)
    return b, gap


def geometric_factor(geometry: MeshGeometry | str, D: float, f: FrequencyLike):
    """Geometric factor ``b_g`` of the two-term time recurrence.

    >>> geometric_factor("square", 1.0, (0.5, 0.5))
    -2.0
    """
    geometry = MeshGeometry.parse(geometry)
    D = _check_length(D)
    x, y = _components(f)
    return _as_scalar_or_array(_factor_and_gap(geometry, D, x, y)[0])


def _angle(b: NDArray, gap: NDArray | None = None) -> tuple[NDArray, NDArray[np.bool_]]:
    """Branch-continuous ``atan2(sqrt(4 - b^2), b)`` in ``[0, pi]`` plus an out-of-band mask.

    ``4 - b^2`` is formed as ``(2 - b)(2 + b)``, taking ``2 - b`` from
    ``gap`` when the caller has it in a cancellation-free form.
    """
    b = np.asarray(b, dtype=float)
    oob = np.abs(b) > 2.0 + _B_TOL
    bc = np.clip(b, -2.0, 2.0)
    gap = 2.0 - bc if gap is None else np.asarray(gap, dtype=float)
    theta = np.arctan2(np.sqrt(np.maximum(gap * (2.0 + bc), 0.0)), bc)
    return np.where(oob, np.nan, theta), oob


def _finish(values: NDArray, oob: NDArray[np.bool_]):
    if np.ndim(values) == 0:
        return OUT_OF_BAND if bool(oob) else float(values)
    return np.ma.masked_array(values, mask=oob)


def phase_from_factor(b: ArrayLike, alpha: int = 1):
    """Per-step phase shift ``-atan2(sqrt(4 - b^2), b) / alpha``."""
    theta, oob = _angle(b)
    return _finish(-theta / alpha, oob)


def phase_shift(geometry: MeshGeometry | str, D: float, f: FrequencyLike):
    """Spatial phase shift (radians) of a plane wave during one time step."""
    geometry = MeshGeometry.parse(geometry)
    x, y = _components(f)
    theta, oob = _angle(*_factor_and_gap(geometry, _check_length(D), x, y))
    return _finish(-theta / geometry.alpha, oob)


def _ratio(geometry: MeshGeometry, D_factor: float, D_ref: float, f: FrequencyLike):
    x, y = _components(f)
    xi = np.hypot(x, y)
    if np.any(xi == 0):
        raise DomainError("speed ratio is undefined at xi = 0; use the dc limit")
    theta, oob = _angle(*_factor_and_gap(geometry, D_factor, x, y))
    return _finish(theta / (TWO_PI * geometry.alpha * D_ref * xi), oob)


def speed_ratio(geometry: MeshGeometry | str, D: float, f: FrequencyLike):
    """Ratio of mesh to ideal propagation speed when ``D = cT``."""
    geometry = MeshGeometry.parse(geometry)
    D = _check_length(D)
    return _ratio(geometry, D, D, f)


def dc_limit(geometry: MeshGeometry | str) -> float:
    """Low-frequency limit of :func:`speed_ratio`; ``1/sqrt(2)`` for every geometry."""
    MeshGeometry.parse(geometry)
    return 1.0 / math.sqrt(2.0)


def critical_speed_ratio(geometry: MeshGeometry | str, B: float, f: FrequencyLike):
    """Speed ratio of a critically sampled mesh, timed against ``D_s = 1/(2B)``.

    The geometric factor uses the geometry's own critical length, while the
    ideal phase advance per step is that of the reference square length.
    """
    geometry = MeshGeometry.parse(geometry)
    Dg = critical_length(geometry, B)
    return _ratio(geometry, Dg, critical_length(MeshGeometry.SQUARE, B), f)


def critical_dc_limit(geometry: MeshGeometry | str) -> float:
    """Closed-form dc value of :func:`critical_speed_ratio` (independent of B)."""
    geometry = MeshGeometry.parse(geometry)
    return dc_limit(geometry) * critical_length(geometry, 1.0) / critical_length(MeshGeometry.SQUARE, 1.0)


def normalized_speed_ratio(geometry: MeshGeometry | str, B: float, f: FrequencyLike):
    """Critical speed ratio rescaled to one at dc."""
    geometry = MeshGeometry.parse(geometry)
    k = critical_speed_ratio(geometry, B, f)
    if k is OUT_OF_BAND:
        return k
    return k / critical_dc_limit(geometry)


class Variant(enum.Enum):
    RAW = "raw"
    CRITICAL = "critical"
    NORMALIZED = "normalized"

    @classmethod
    def parse(cls, value: "Variant | str") -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigurationError(f"unknown dispersion variant {value!r}") from None


@dataclass(frozen=True, eq=False)
class DispersionMap:
    """Speed ratios sampled at cell centres of a rectangular frequency grid.

    Arrays are indexed ``[iy, ix]``.  ``k`` is NaN where ``out_of_band`` is
    set; ``b`` is always finite.  For the critical variants ``in_band``
    marks cells inside the circular band ``|xi| <= B``.
    """

    geometry: MeshGeometry
    variant: Variant
    length: float
    xi_x: NDArray[np.float64]
    xi_y: NDArray[np.float64]
    b: NDArray[np.float64]
    k: NDArray[np.float64]
    out_of_band: NDArray[np.bool_]
    in_band: NDArray[np.bool_]

    @property
    def shape(self) -> tuple[int, int]:
        return self.k.shape

    def to_csv(self) -> str:
        rows = ["xi_x,xi_y,b,k"]
        for iy, y in enumerate(self.xi_y):
            for ix, x in enumerate(self.xi_x):
                k = "oob" if self.out_of_band[iy, ix] else f"{self.k[iy, ix]:.9g}"
                rows.append(f"{x:.9g},{y:.9g},{self.b[iy, ix]:.9g},{k}")
        return "\n".join(rows) + "\n"

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def _cell_centres(half_width: float, n: int) -> NDArray[np.float64]:
    h = 2.0 * half_width / n
    return -half_width + h * (np.arange(n) + 0.5)


def dispersion_map(
    geometry: MeshGeometry | str,
    variant: Variant | str,
    value: float,
    resolution: int | tuple[int, int],
) -> DispersionMap:
    """Sample a speed-ratio variant on a dense grid.

    ``value`` is the waveguide length ``D`` for the raw variant, covering
    ``|xi_x|, |xi_y| < 1/(2D)``; for the critical and normalized variants
    it is the band radius ``B`` and the grid covers ``[-B, B]^2``.  A cell
    centred on the origin takes the closed-form dc value.
    """
    geometry = MeshGeometry.parse(geometry)
    variant = Variant.parse(variant)
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    nx, ny = int(nx), int(ny)
    if nx < 2 or ny < 2:
        raise ConfigurationError("dispersion map resolution must be at least 2x2")
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ConfigurationError(f"map parameter must be positive, got {value}")

    if variant is Variant.RAW:
        half, D_factor, D_ref, dc = 0.5 / value, value, value, dc_limit(geometry)
    else:
        half = value
        D_factor = critical_length(geometry, value)
        D_ref = critical_length(MeshGeometry.SQUARE, value)
        dc = critical_dc_limit(geometry)
    xs, ys = _cell_centres(half, nx), _cell_centres(half, ny)
    X, Y = np.meshgrid(xs, ys)
    xi = np.hypot(X, Y)
    b, gap = _factor_and_gap(geometry, D_factor, X, Y)
    theta, oob = _angle(b, gap)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = theta / (TWO_PI * geometry.alpha * D_ref * xi)
    k = np.where(xi == 0, dc, k)
    if variant is Variant.NORMALIZED:
        k = k / dc
    in_band = xi <= half if variant is not Variant.RAW else np.ones_like(oob)
    return DispersionMap(geometry, variant, value, xs, ys, b, k, oob, in_band)

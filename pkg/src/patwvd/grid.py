"""Sampling grids and field containers shared by every other module.

Conventions.  The image lives on the half plane y > 0 with the detector
line at y = 0.  All axes are cell centered: x nodes sit at
x0 + (i + 1/2)*delta_x, y nodes at (k + 1/2)*delta_x and t nodes at
(m + 1/2)*delta_t.  No sample ever falls on y = 0 or t = 0, which keeps
the y^(1/2) and t^(-1/2) weight factors of the forward model finite.
Sound speed is normalized to 1, so delta_t and delta_x share units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, InvalidGrid, SupportViolation


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Uniform spatial/temporal lattice.

    n_x, n_y are the image sample counts along the detector (x) and depth
    (y) axes; n_t is the number of time samples of the detector trace.
    x_min is the left edge of the first detector cell; the x extent is
    [x_min, x_min + n_x*delta_x] and defaults to an interval centered at 0.
    """

    n_x: int
    n_y: int
    n_t: int
    delta_x: float
    delta_t: float
    x_min: float = field(default=math.nan)

    def __post_init__(self):
        for name in ("n_x", "n_y", "n_t"):
            count = getattr(self, name)
            if not _is_power_of_two(int(count)):
                raise InvalidGrid(f"{name}={count} must be a power of two >= 2")
        if not (self.delta_x > 0 and self.delta_t > 0):
            raise InvalidGrid("steps must be positive")
        if math.isnan(self.x_min):
            object.__setattr__(self, "x_min", -0.5 * self.n_x * self.delta_x)

    @property
    def x_extent(self) -> tuple[float, float]:
        return (self.x_min, self.x_min + self.n_x * self.delta_x)

    @property
    def y_extent(self) -> tuple[float, float]:
        return (0.0, self.n_y * self.delta_x)

    @property
    def t_max(self) -> float:
        return self.n_t * self.delta_t

    def x_nodes(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_x) + 0.5) * self.delta_x

    def y_nodes(self) -> np.ndarray:
        return (np.arange(self.n_y) + 0.5) * self.delta_x

    def t_nodes(self) -> np.ndarray:
        return (np.arange(self.n_t) + 0.5) * self.delta_t

    def is_nyquist_ok(self, omega: float) -> bool:
        """True iff both steps satisfy the sampling bound pi/omega."""
        limit = math.pi / omega
        return self.delta_x <= limit and self.delta_t <= limit

    def image_cell_measure(self) -> float:
        return self.delta_x * self.delta_x

    def data_cell_measure(self) -> float:
        return self.delta_x * self.delta_t


def make_grid(n_x: int, n_y: int, n_t: int, delta_x: float, delta_t: float,
              x_min: float = math.nan) -> Grid2D:
    """Validated grid constructor; raises InvalidGrid on bad parameters."""
    return Grid2D(n_x=n_x, n_y=n_y, n_t=n_t, delta_x=delta_x, delta_t=delta_t,
                  x_min=x_min)


def _freeze(values: np.ndarray, shape: tuple[int, int], what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != shape:
        raise GridMismatch(f"{what} values have shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} values must be finite")
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ImageField:
    """Real samples of an initial-pressure image on an (x, y) grid."""

    grid: Grid2D
    values: np.ndarray
    support_box: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        arr = _freeze(self.values, (self.grid.n_x, self.grid.n_y), "image")
        object.__setattr__(self, "values", arr)
        if self.support_box is not None:
            self._check_support()

    def _check_support(self):
        x0, x1, y0, y1 = self.support_box
        xs = self.grid.x_nodes()[:, None]
        ys = self.grid.y_nodes()[None, :]
        outside = (xs < x0) | (xs > x1) | (ys < y0) | (ys > y1)
        if np.any((self.values != 0) & outside):
            raise SupportViolation("image has mass outside its declared support box")

    def with_values(self, values: np.ndarray) -> "ImageField":
        return ImageField(self.grid, values)


@dataclass(frozen=True, eq=False)
class DataField:
    """Real samples of a detector trace on an (x, t) grid.

    Row m corresponds to t = (m + 1/2)*delta_t.
    """

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        arr = _freeze(self.values, (self.grid.n_x, self.grid.n_t), "data")
        object.__setattr__(self, "values", arr)

    def with_values(self, values: np.ndarray) -> "DataField":
        return DataField(self.grid, values)


Field = ImageField | DataField


def _cell_measure(f: Field) -> float:
    if isinstance(f, ImageField):
        return f.grid.image_cell_measure()
    return f.grid.data_cell_measure()


def inner_product(a: Field, b: Field) -> float:
    """Riemann-sum approximation of the L2 inner product.

    The cell measure is delta_x^2 for image fields and delta_x*delta_t for
    data fields.  Both operands must share grid and kind.
    """
    if type(a) is not type(b) or a.grid != b.grid:
        raise GridMismatch("inner_product requires fields of one kind on one grid")
    return float(np.dot(a.values.ravel(), b.values.ravel()) * _cell_measure(a))


def norm(f: Field) -> float:
    """L2 norm induced by inner_product."""
    return math.sqrt(max(inner_product(f, f), 0.0))

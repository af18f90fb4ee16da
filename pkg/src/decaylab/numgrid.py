"""Uniform Dirichlet grids on ``[-L, L]^dim`` and the discrete operators on them.

Fields are stored as arrays of shape ``(N,) * dim`` in C order, so a flat
view is the row-major node ordering.  Every reduction here is a plain
``np.sum`` over a contiguous array, which numpy evaluates with a fixed
pairwise tree: results are bitwise reproducible and independent of thread
count.  BLAS-backed products (``np.dot``, ``@``) are deliberately avoided.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid on ``[-half_width, half_width]^dim``.

    Boundary nodes (any index equal to 0 or N-1) carry homogeneous Dirichlet
    data.
    """

    dim: int
    half_width: float
    points: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.points < 3:
            raise ValueError(f"too few points per axis: {self.points} < 3")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.points - 1)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def size(self) -> int:
        return self.points**self.dim

    @property
    def cell_volume(self) -> float:
        return self.h**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        """Node coordinates ``x_i = -L + i h`` along one axis."""
        return -self.half_width + self.h * np.arange(self.points)

    @cached_property
    def coords(self) -> tuple[np.ndarray, ...]:
        if self.dim == 1:
            return (self.axis,)
        return tuple(np.meshgrid(self.axis, self.axis, indexing="ij"))

    @cached_property
    def radius(self) -> np.ndarray:
        """Euclidean distance of every node from the origin."""
        return np.sqrt(sum(c**2 for c in self.coords))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        for ax in range(self.dim):
            idx = [slice(None)] * self.dim
            idx[ax] = 0
            mask[tuple(idx)] = True
            idx[ax] = -1
            mask[tuple(idx)] = True
        return mask

    @cached_property
    def monitor_mask(self) -> np.ndarray:
        """The two node layers just inside the Dirichlet wall."""
        idx = np.arange(self.points)
        depth = np.minimum(idx, self.points - 1 - idx)
        if self.dim == 1:
            d = depth
        else:
            d = np.minimum.outer(depth, depth)
        return (d == 1) | (d == 2)

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.shape))

    def field(self, values) -> "Field":
        return Field(self, np.asarray(values, dtype=float).reshape(self.shape))


def make_grid(dim: int, half_width: float, points_per_axis: int) -> Grid:
    return Grid(int(dim), float(half_width), int(points_per_axis))


@dataclass
class Field:
    """Real grid function; ``values`` has shape ``grid.shape``."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values of shape {self.values.shape} do not fit grid {self.grid.shape}"
            )

    def _other(self, other):
        if isinstance(other, Field):
            _check_same_grid(self, other)
            return other.values
        return other

    def __add__(self, other):
        return Field(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.grid, self.values - self._other(other))

    def __mul__(self, other):
        return Field(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self.values)

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def with_dirichlet(self) -> "Field":
        """Copy with boundary entries forced to zero."""
        out = self.values.copy()
        out[self.grid.boundary_mask] = 0.0
        return Field(self.grid, out)


def _check_same_grid(f: Field, g: Field) -> None:
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")


# -- array kernels (used directly by the time steppers) ----------------------


def laplacian_array(u: np.ndarray, h: float, out: np.ndarray | None = None) -> np.ndarray:
    """Second-order central Laplacian with zero output on the boundary."""
    if out is None:
        out = np.empty_like(u)
    inv_h2 = 1.0 / (h * h)
    if u.ndim == 1:
        out[1:-1] = (u[:-2] - 2.0 * u[1:-1] + u[2:]) * inv_h2
        out[0] = out[-1] = 0.0
    else:
        c = u[1:-1, 1:-1]
        out[1:-1, 1:-1] = (
            u[:-2, 1:-1] + u[2:, 1:-1] + u[1:-1, :-2] + u[1:-1, 2:] - 4.0 * c
        ) * inv_h2
        out[0, :] = out[-1, :] = 0.0
        out[:, 0] = out[:, -1] = 0.0
    return out


def grad_norm_sq_array(u: np.ndarray, h: float) -> float:
    total = 0.0
    for ax in range(u.ndim):
        d = np.diff(u, axis=ax)
        total += float(np.sum(d * d))
    return total * h ** (u.ndim - 2)


def inner_array(f: np.ndarray, g: np.ndarray, h: float) -> float:
    return float(np.sum(f * g)) * h**f.ndim


# -- Field-level operations --------------------------------------------------


def laplacian(f: Field) -> Field:
    return Field(f.grid, laplacian_array(f.values, f.grid.h))


def biharmonic(f: Field) -> Field:
    """Discrete ``Δ²`` as the Laplacian applied twice.

    The intermediate Laplacian is zeroed on the boundary, which amounts to a
    clamped-like discrete boundary condition.
    """
    h = f.grid.h
    return Field(f.grid, laplacian_array(laplacian_array(f.values, h), h))


def inner(f: Field, g: Field) -> float:
    _check_same_grid(f, g)
    return inner_array(f.values, g.values, f.grid.h)


def l2_norm_sq(f: Field) -> float:
    return inner(f, f)


def integral(f: Field) -> float:
    return float(np.sum(f.values)) * f.grid.cell_volume


def grad_norm_sq(f: Field) -> float:
    """Sum over axes of squared forward differences, weighted by ``h^dim``.

    Paired with :func:`laplacian` this gives the exact summation-by-parts
    identity ``inner(laplacian(f), f) == -grad_norm_sq(f)`` for fields that
    vanish on the boundary.
    """
    return grad_norm_sq_array(f.values, f.grid.h)


def dirichlet_eigenmode(grid: Grid, j: int | tuple[int, int] = 1) -> Field:
    """``sin(j π (x+L) / 2L)`` (tensor product in 2D), an exact eigenvector
    of :func:`laplacian` with eigenvalue :func:`laplacian_eigenvalue`."""
    js = (j,) * grid.dim if np.isscalar(j) else tuple(j)
    L = grid.half_width
    vals = np.ones(grid.shape)
    for c, jj in zip(grid.coords, js):
        vals = vals * np.sin(jj * np.pi * (c + L) / (2 * L))
    return Field(grid, vals).with_dirichlet()


def laplacian_eigenvalue(grid: Grid, j: int | tuple[int, int] = 1) -> float:
    """Magnitude ``λ_j = Σ (2/h²)(1 - cos(j π h / 2L))`` of the mode's eigenvalue."""
    js = (j,) * grid.dim if np.isscalar(j) else tuple(j)
    h, L = grid.h, grid.half_width
    return float(sum(2.0 / h**2 * (1.0 - np.cos(jj * np.pi * h / (2 * L))) for jj in js))

"""Sampled complex fields on a centered Cartesian grid and their inner product.

Samples are stored as ``(ny, nx)`` arrays (row index ``j`` is y, column index
``i`` is x), so the x index runs fastest in memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataError, DegenerateInputError, DimensionError, ParameterError


@dataclass(frozen=True)
class Grid:
    """Uniform sampling grid with the origin at sample ``(nx/2, ny/2)``.

    Parameters
    ----------
    nx, ny : int
        Sample counts along x and y, at least 2 each.
    dx, dy : float
        Sample pitch in meters.
    """

    nx: int
    ny: int
    dx: float
    dy: float

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise DimensionError(f"grid sizes must be integers, got {self.nx}x{self.ny}")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        object.__setattr__(self, "dx", float(self.dx))
        object.__setattr__(self, "dy", float(self.dy))
        if self.nx < 2 or self.ny < 2:
            raise DimensionError(f"grid needs at least 2x2 samples, got {self.nx}x{self.ny}")
        if not (self.dx > 0 and self.dy > 0) or not np.isfinite([self.dx, self.dy]).all():
            raise DimensionError(f"grid pitch must be positive, got dx={self.dx}, dy={self.dy}")

    @classmethod
    def square(cls, n: int, width: float) -> "Grid":
        """``n x n`` grid spanning a full window of ``width`` meters."""
        return cls(n, n, width / n, width / n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def extent(self) -> tuple[float, float]:
        """Full window size ``(nx*dx, ny*dy)``."""
        return (self.nx * self.dx, self.ny * self.dy)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    def coordinate(self, i, j):
        """Physical ``(x, y)`` of sample column ``i`` and row ``j``."""
        return ((np.asarray(i) - self.nx / 2) * self.dx, (np.asarray(j) - self.ny / 2) * self.dy)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return self.coordinate(np.arange(self.nx), np.arange(self.ny))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable ``(X, Y)`` arrays of shape ``(ny, nx)``."""
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="xy")

    def polar(self) -> tuple[np.ndarray, np.ndarray]:
        """Radius and azimuth ``(r, phi)`` of every sample, ``phi`` in ``(-pi, pi]``."""
        X, Y = self.mesh()
        return np.hypot(X, Y), np.arctan2(Y, X)

    def frequencies(self) -> tuple[np.ndarray, np.ndarray]:
        """Spatial frequencies ``(FX, FY)`` in FFT order, 1/m."""
        fx = np.fft.fftfreq(self.nx, self.dx)
        fy = np.fft.fftfreq(self.ny, self.dy)
        return np.meshgrid(fx, fy, indexing="xy")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Immutable scalar field sampled on a :class:`Grid`.

    Parameters
    ----------
    grid : Grid
    samples : array_like, shape (ny, nx)
        Complex amplitudes; copied and frozen on construction.
    wavelength : float
        Vacuum wavelength in meters.
    """

    grid: Grid
    samples: np.ndarray = field(repr=False)
    wavelength: float

    def __post_init__(self):
        samples = _readonly(self.samples)
        if samples.shape != self.grid.shape:
            raise DimensionError(
                f"samples have shape {samples.shape}, grid expects {self.grid.shape}"
            )
        if not np.isfinite(samples).all():
            raise DataError("field samples contain NaN or Inf")
        if not (self.wavelength > 0):
            raise ParameterError(f"wavelength must be positive, got {self.wavelength}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "wavelength", float(self.wavelength))

    @classmethod
    def zeros(cls, grid: Grid, wavelength: float) -> "ComplexField":
        return cls(grid, np.zeros(grid.shape, complex), wavelength)

    def with_samples(self, samples) -> "ComplexField":
        return ComplexField(self.grid, samples, self.wavelength)

    def __add__(self, other: "ComplexField") -> "ComplexField":
        return add(self, other)

    def __sub__(self, other: "ComplexField") -> "ComplexField":
        return add(self, scale(other, -1))

    def __mul__(self, alpha) -> "ComplexField":
        return scale(self, alpha)

    __rmul__ = __mul__

    def __neg__(self) -> "ComplexField":
        return scale(self, -1)


def check_compatible(a: ComplexField, b: ComplexField) -> None:
    """Raise :class:`DimensionError` unless ``a`` and ``b`` share grid and wavelength."""
    if a.grid != b.grid:
        raise DimensionError(f"grid mismatch: {a.grid} vs {b.grid}")
    if not np.isclose(a.wavelength, b.wavelength, rtol=1e-12, atol=0):
        raise DimensionError(f"wavelength mismatch: {a.wavelength} vs {b.wavelength}")


def inner_product(a: ComplexField, b: ComplexField) -> complex:
    """Riemann-sum overlap ``sum(conj(a) * b) * dx * dy``.

    Conjugate-linear in ``a``, linear in ``b``.
    """
    check_compatible(a, b)
    return complex(np.vdot(a.samples, b.samples) * a.grid.cell_area)


def norm(a: ComplexField) -> float:
    # vdot of a field with itself has an exactly zero imaginary part
    return float(np.sqrt(np.vdot(a.samples, a.samples).real * a.grid.cell_area))


def vector_angle(u: np.ndarray, v: np.ndarray) -> float:
    """Angle between two complex vectors modulo global phase, in ``[0, pi/2]``.

    Mathematically ``arccos(|<u, v>| / (|u| |v|))``, evaluated as
    ``atan2(|v_perp| |u|, |<u, v>|)`` so that nearly parallel inputs keep full
    precision instead of losing half the digits to arccos near 1.
    """
    u = np.ravel(u)
    v = np.ravel(v)
    uu = np.vdot(u, u).real
    vv = np.vdot(v, v).real
    if uu == 0 or vv == 0:
        raise DegenerateInputError("Hilbert angle is undefined for a zero-norm input")
    uv = np.vdot(u, v)
    perp = v - (uv / uu) * u
    return float(np.arctan2(np.linalg.norm(perp) * np.sqrt(uu), abs(uv)))


def hilbert_angle(a: ComplexField, b: ComplexField) -> float:
    """Angle between two fields, insensitive to global complex scaling.

    Returns
    -------
    float
        ``arccos(|<a, b>| / (|a| |b|))`` in radians, always in ``[0, pi/2]``;
        0 means identical up to a complex factor, pi/2 means orthogonal.

    Raises
    ------
    DegenerateInputError
        If either field is identically zero.
    """
    check_compatible(a, b)
    return vector_angle(a.samples, b.samples)


def add(a: ComplexField, b: ComplexField) -> ComplexField:
    check_compatible(a, b)
    return a.with_samples(a.samples + b.samples)


def scale(a: ComplexField, alpha: complex) -> ComplexField:
    return a.with_samples(complex(alpha) * a.samples)


def normalize(a: ComplexField) -> ComplexField:
    n = norm(a)
    if n == 0:
        raise DegenerateInputError("cannot normalize a zero field")
    return scale(a, 1.0 / n)


def extract_intensity(a: ComplexField) -> np.ndarray:
    return np.abs(a.samples) ** 2


def extract_phase(a: ComplexField) -> np.ndarray:
    """Pointwise phase in ``(-pi, pi]``."""
    phase = np.angle(a.samples)
    phase[phase <= -np.pi] = np.pi
    return phase


def power(a: ComplexField) -> float:
    return norm(a) ** 2

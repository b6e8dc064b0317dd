"""Basis families for OAM beams: azimuthal harmonics, Laguerre-Gaussian and Bessel modes."""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import ParameterError
from .fieldgrid import ComplexField, Grid, normalize

DEFAULT_WAVELENGTH = 1550e-9
DEFAULT_WAIST = 1e-3
DEFAULT_GRID_SIZE = 512
DEFAULT_WINDOW_WAISTS = 8.0


class Family(str, enum.Enum):
    LG = "LG"
    BESSEL = "Bessel"
    AZIMUTHAL = "Azimuthal"


@dataclass(frozen=True)
class ModeIndex:
    """Label of one basis function.

    ``l`` is the signed azimuthal order, ``p`` the radial order (LG only) and
    ``k_r`` the radial wavenumber in 1/m (Bessel only).
    """

    family: Family
    l: int
    p: int = 0
    k_r: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if int(self.l) != self.l or int(self.p) != self.p:
            raise ParameterError(f"mode orders must be integers, got l={self.l}, p={self.p}")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "p", int(self.p))
        if self.p < 0:
            raise ParameterError(f"radial order p must be >= 0, got {self.p}")
        if self.family is Family.BESSEL:
            if self.k_r is None or not self.k_r > 0:
                raise ParameterError(f"Bessel modes need k_r > 0, got {self.k_r}")
            object.__setattr__(self, "k_r", float(self.k_r))
        elif self.k_r is not None:
            raise ParameterError("k_r only applies to Bessel modes")
        if self.family is not Family.LG and self.p != 0:
            raise ParameterError("radial order p only applies to LG modes")

    @classmethod
    def lg(cls, l: int, p: int = 0) -> "ModeIndex":
        return cls(Family.LG, l, p)

    @classmethod
    def bessel(cls, m: int, k_r: float) -> "ModeIndex":
        return cls(Family.BESSEL, m, 0, k_r)

    @classmethod
    def azimuthal(cls, l: int) -> "ModeIndex":
        return cls(Family.AZIMUTHAL, l)

    def sort_key(self):
        return (self.family.value, self.l, self.p, self.k_r or 0.0)

    def __str__(self):
        if self.family is Family.LG:
            return f"LG(l={self.l:+d}, p={self.p})"
        if self.family is Family.BESSEL:
            return f"Bessel(m={self.l:+d}, k_r={self.k_r:g})"
        return f"Az(l={self.l:+d})"


class ModeSpectrum(Mapping):
    """Finite map from :class:`ModeIndex` to complex coefficient.

    Iteration order is deterministic: sorted by ``(l, p)``.  Missing indices
    read as zero through :meth:`coefficient`.
    """

    def __init__(self, entries: Mapping[ModeIndex, complex] | Iterable[tuple[ModeIndex, complex]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[ModeIndex, complex] = {}
        for idx, c in items:
            if not isinstance(idx, ModeIndex):
                raise ParameterError(f"spectrum keys must be ModeIndex, got {idx!r}")
            if idx in data:
                raise ParameterError(f"duplicate mode index {idx}")
            c = complex(c)
            if not np.isfinite([c.real, c.imag]).all():
                raise ParameterError(f"non-finite coefficient for {idx}")
            data[idx] = c
        self._data = dict(sorted(data.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def lg(cls, coefficients: Mapping[tuple[int, int], complex]) -> "ModeSpectrum":
        """Build an LG spectrum from ``{(l, p): c}``."""
        return cls({ModeIndex.lg(l, p): c for (l, p), c in coefficients.items()})

    @classmethod
    def azimuthal(cls, coefficients: Mapping[int, complex]) -> "ModeSpectrum":
        return cls({ModeIndex.azimuthal(l): c for l, c in coefficients.items()})

    def __getitem__(self, idx):
        return self._data[idx]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __repr__(self):
        inner = ", ".join(f"{k}: {v:.6g}" for k, v in self._data.items())
        return f"ModeSpectrum({{{inner}}})"

    def coefficient(self, idx: ModeIndex) -> complex:
        return self._data.get(idx, 0j)

    @property
    def families(self) -> set[Family]:
        return {idx.family for idx in self._data}

    def energy(self) -> float:
        return float(sum(abs(c) ** 2 for c in self._data.values()))

    def norm(self) -> float:
        return math.sqrt(self.energy())

    def scaled(self, alpha: complex) -> "ModeSpectrum":
        return ModeSpectrum({k: alpha * v for k, v in self._data.items()})

    def __add__(self, other: "ModeSpectrum") -> "ModeSpectrum":
        keys = dict.fromkeys([*self._data, *other._data])
        return ModeSpectrum({k: self.coefficient(k) + other.coefficient(k) for k in keys})

    def __mul__(self, alpha):
        return self.scaled(alpha)

    __rmul__ = __mul__

    def powers(self) -> dict[ModeIndex, float]:
        return {k: abs(v) ** 2 for k, v in self._data.items()}

    def by_l(self) -> dict[int, "ModeSpectrum"]:
        """Group entries by azimuthal order (the two-stage projection view)."""
        groups: dict[int, dict] = {}
        for k, v in self._data.items():
            groups.setdefault(k.l, {})[k] = v
        return {l: ModeSpectrum(g) for l, g in groups.items()}


@dataclass(frozen=True)
class LGParams:
    waist: float = DEFAULT_WAIST
    wavelength: float = DEFAULT_WAVELENGTH

    def __post_init__(self):
        if not self.waist > 0:
            raise ParameterError(f"beam waist must be positive, got {self.waist}")
        if not self.wavelength > 0:
            raise ParameterError(f"wavelength must be positive, got {self.wavelength}")


def default_grid(params: LGParams = LGParams(), n: int = DEFAULT_GRID_SIZE,
                 window_waists: float = DEFAULT_WINDOW_WAISTS) -> Grid:
    """Square ``n x n`` grid whose full window spans ``window_waists`` beam waists."""
    return Grid.square(n, window_waists * params.waist)


def laguerre_polynomial(p: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_p^alpha(x)``.

    Evaluated with the three-term recurrence
    ``(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}``,
    vectorized over ``x``.
    """
    if int(p) != p or p < 0:
        raise ParameterError(f"degree p must be a non-negative integer, got {p}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if p == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, int(p)):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _check_window(grid: Grid, waist: float, minimum: float = 6.0):
    wx, wy = grid.extent
    if min(wx, wy) < minimum * waist:
        warnings.warn(
            f"grid window {wx:.3g} x {wy:.3g} m spans fewer than {minimum:g} waists; "
            "LG modes will be clipped and lose orthonormality",
            RuntimeWarning,
            stacklevel=3,
        )


def lg_radial(l: int, p: int, r, waist: float):
    """Continuum-normalized radial profile of the LG mode at its waist plane."""
    al = abs(int(l))
    c = math.sqrt(2.0 * math.factorial(p) / (math.pi * math.factorial(p + al))) / waist
    rho2 = 2.0 * np.asarray(r) ** 2 / waist**2
    return c * rho2 ** (al / 2) * laguerre_polynomial(p, al, rho2) * np.exp(-rho2 / 2)


def lg_field(l: int, p: int, params: LGParams, grid: Grid) -> ComplexField:
    """Unit-norm Laguerre-Gaussian mode ``LG_p^l`` at the waist plane.

    The amplitude is ``(sqrt(2) r / w0)^|l| L_p^|l|(2 r^2 / w0^2) exp(-r^2 / w0^2)
    exp(i l phi)`` with the analytic continuum normalization, so the discrete
    norm is 1 up to truncation and sampling error.
    """
    ModeIndex.lg(l, p)
    _check_window(grid, params.waist)
    r, phi = grid.polar()
    samples = lg_radial(l, p, r, params.waist) * np.exp(1j * l * phi)
    return ComplexField(grid, samples, params.wavelength)


def bessel_field(m: int, k_r: float, grid: Grid, aperture_radius: float,
                 wavelength: float = DEFAULT_WAVELENGTH) -> ComplexField:
    """Aperture-truncated Bessel mode ``J_m(k_r r) exp(i m phi)``, unit norm."""
    if not aperture_radius > 0:
        raise ParameterError(f"aperture radius must be positive, got {aperture_radius}")
    ModeIndex.bessel(m, k_r)
    r, phi = grid.polar()
    samples = np.where(r <= aperture_radius, special.jv(m, k_r * r), 0.0) * np.exp(1j * m * phi)
    return normalize(ComplexField(grid, samples, wavelength))


def azimuthal_field(l: int, grid: Grid, wavelength: float = DEFAULT_WAVELENGTH) -> ComplexField:
    """Unit-modulus harmonic ``exp(i l phi)``; not normalized (infinite energy in the continuum)."""
    _, phi = grid.polar()
    return ComplexField(grid, np.exp(1j * int(l) * phi), wavelength)


def mode_field(idx: ModeIndex, params: LGParams, grid: Grid,
               aperture_radius: float | None = None) -> ComplexField:
    """Generate the basis field labelled by ``idx``."""
    if idx.family is Family.LG:
        return lg_field(idx.l, idx.p, params, grid)
    if idx.family is Family.BESSEL:
        if aperture_radius is None:
            aperture_radius = 0.375 * min(grid.extent)
        return bessel_field(idx.l, idx.k_r, grid, aperture_radius, params.wavelength)
    return azimuthal_field(idx.l, grid, params.wavelength)


def synthesize(spectrum: ModeSpectrum, params: LGParams, grid: Grid,
               aperture_radius: float | None = None) -> ComplexField:
    """Superpose basis fields weighted by the spectrum coefficients.

    Raises
    ------
    ParameterError
        If the spectrum mixes basis families.
    """
    if len(spectrum.families) > 1:
        raise ParameterError(f"cannot synthesize mixed families {sorted(f.value for f in spectrum.families)}")
    total = np.zeros(grid.shape, complex)
    for idx, c in spectrum.items():
        total += c * mode_field(idx, params, grid, aperture_radius).samples
    return ComplexField(grid, total, params.wavelength)

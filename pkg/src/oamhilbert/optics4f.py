"""Angular-spectrum simulation of a 4f OAM sorter with a forked phase grating.

Optical train (all distances equal to the focal length ``f``)::

    input --f--> lens --f--> [fork grating] --f--> lens --f--> output

The grating sits in the common Fourier plane, where every Bessel mode
``J_n(k_r r) exp(i n phi)`` is the same thin ring of radius ``lambda f k_r / 2 pi``
up to its azimuthal phase.  The blazed fork subtracts ``M`` units of charge
from that ring, so input order ``n`` leaves as order ``n - M`` with an
unchanged radial profile.  The carrier tilts the first order so that it is
imaged around ``(lambda f / Lambda, 0)`` on the output plane; only the input
order ``n = M`` converges to a bright on-axis spot there.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_field_stack
from .exceptions import AliasingError, DataError, DimensionError, ParameterError
from .fieldgrid import ComplexField, Grid
from .modes import DEFAULT_WAVELENGTH, bessel_field

EDGE_SAMPLES = 2
EDGE_ENERGY_LIMIT = 0.01


@dataclass(frozen=True)
class ForkedGrating:
    """Phase-blazed fork hologram of topological charge ``order``.

    The first diffraction order removes ``order`` units of charge from the
    incident beam and is deflected by the carrier of period ``carrier_period``.
    """

    order: int
    carrier_period: float
    kind: str = "phase-blazed"

    def __post_init__(self):
        if int(self.order) != self.order:
            raise ParameterError(f"fork order must be an integer, got {self.order}")
        object.__setattr__(self, "order", int(self.order))
        if not self.carrier_period > 0:
            raise ParameterError(f"carrier period must be positive, got {self.carrier_period}")
        if self.kind != "phase-blazed":
            raise ParameterError(f"unsupported grating kind {self.kind!r}")


@dataclass(frozen=True)
class FourFSystem:
    focal_length: float
    wavelength: float
    grating: ForkedGrating

    def __post_init__(self):
        if not self.focal_length > 0:
            raise ParameterError(f"focal length must be positive, got {self.focal_length}")
        if not self.wavelength > 0:
            raise ParameterError(f"wavelength must be positive, got {self.wavelength}")

    def with_order(self, order: int) -> "FourFSystem":
        return dataclasses.replace(self, grating=dataclasses.replace(self.grating, order=order))


@dataclass(frozen=True)
class DetectorSpec:
    center: tuple[float, float]
    aperture_radius: float

    def __post_init__(self):
        if not self.aperture_radius > 0:
            raise ParameterError(f"detector aperture must be positive, got {self.aperture_radius}")


def critical_focal_length(grid: Grid, wavelength: float) -> float:
    """Focal length at which the Fourier plane reuses the input sampling pitch.

    At ``f = nx dx^2 / lambda`` a lens followed by a distance ``f`` maps the
    full FFT bandwidth exactly onto the grid window.
    """
    return grid.nx * grid.dx**2 / wavelength


def default_carrier_period(grid: Grid) -> float:
    """Carrier with period ``8 dx``: an integer number of cycles across the window.

    The first order then lands one eighth of the window off axis, which leaves
    room for the rings of mismatched orders before they reach the grid edge.
    """
    return grid.nx * grid.dx / (grid.nx // 8)


def default_system(grid: Grid, order: int = 0, wavelength: float = DEFAULT_WAVELENGTH,
                   focal_length: float | None = None,
                   carrier_period: float | None = None) -> FourFSystem:
    f = critical_focal_length(grid, wavelength) if focal_length is None else focal_length
    period = default_carrier_period(grid) if carrier_period is None else carrier_period
    return FourFSystem(f, wavelength, ForkedGrating(order, period))


def _check_data(field: ComplexField):
    if not np.isfinite(field.samples).all():
        raise DataError("field contains NaN or Inf")


def angular_spectrum_propagate(field: ComplexField, z: float) -> ComplexField:
    """Propagate a field a distance ``z`` (negative for back-propagation).

    Each plane-wave component is phased by ``exp(i 2 pi z sqrt(1/lambda^2 - fx^2 - fy^2))``;
    evanescent components are discarded.
    """
    _check_data(field)
    if z == 0:
        return field
    FX, FY = field.grid.frequencies()
    arg = field.wavelength**-2 - FX**2 - FY**2
    propagating = arg > 0
    spectrum = np.fft.fft2(field.samples)
    if not propagating.all():
        total = np.sum(np.abs(spectrum) ** 2)
        lost = np.sum(np.abs(spectrum[~propagating]) ** 2)
        if total > 0 and lost / total > 1e-9:
            warnings.warn(
                f"{lost / total:.2e} of the spectral power is evanescent and will be dropped",
                RuntimeWarning,
                stacklevel=2,
            )
    kz = np.sqrt(np.where(propagating, arg, 0.0))
    transfer = np.where(propagating, np.exp(2j * np.pi * z * kz), 0.0)
    return field.with_samples(np.fft.ifft2(spectrum * transfer))


def lens_phase(field: ComplexField, f: float) -> ComplexField:
    """Thin lens of focal length ``f``: multiply by ``exp(-i pi r^2 / (lambda f))``."""
    if f == 0:
        raise ParameterError("focal length must be nonzero")
    X, Y = field.grid.mesh()
    return field.with_samples(field.samples * np.exp(-1j * np.pi * (X**2 + Y**2) / (field.wavelength * f)))


def forked_grating_mask(g: ForkedGrating, grid: Grid,
                        wavelength: float = DEFAULT_WAVELENGTH) -> ComplexField:
    """Unit-modulus transmittance ``exp(i wrap(-M phi + 2 pi x / Lambda))``."""
    if not g.carrier_period > 2 * max(grid.dx, grid.dy):
        raise ParameterError(
            f"carrier period {g.carrier_period:g} m is not resolvable at pitch "
            f"{max(grid.dx, grid.dy):g} m (needs > 2 samples per period)"
        )
    X, _ = grid.mesh()
    _, phi = grid.polar()
    phase = np.angle(np.exp(1j * (-g.order * phi + 2 * np.pi * X / g.carrier_period)))
    return ComplexField(grid, np.exp(1j * phase), wavelength)


def shift_field(field: ComplexField, sx: float, sy: float = 0.0) -> ComplexField:
    """Translate a periodic band-limited field by ``(sx, sy)`` meters (Fourier shift)."""
    FX, FY = field.grid.frequencies()
    ramp = np.exp(-2j * np.pi * (FX * sx + FY * sy))
    return field.with_samples(np.fft.ifft2(np.fft.fft2(field.samples) * ramp))


def edge_energy_fraction(field: ComplexField, width: int = EDGE_SAMPLES) -> float:
    intensity = np.abs(field.samples) ** 2
    total = intensity.sum()
    if total == 0:
        return 0.0
    inner = intensity[width:-width, width:-width].sum()
    return float((total - inner) / total)


def _check_aliasing(field: ComplexField, where: str):
    frac = edge_energy_fraction(field)
    if frac > EDGE_ENERGY_LIMIT:
        raise AliasingError(
            f"{100 * frac:.2f}% of the {where} energy lies within {EDGE_SAMPLES} samples "
            "of the grid edge; enlarge the window or shorten the focal length"
        )


def _two_f(field: ComplexField, f: float) -> ComplexField:
    return angular_spectrum_propagate(lens_phase(angular_spectrum_propagate(field, f), f), f)


def first_order_center(sys: FourFSystem) -> tuple[float, float]:
    return (sys.wavelength * sys.focal_length / sys.grating.carrier_period, 0.0)


def simulate_4f(input: ComplexField, sys: FourFSystem, plane: str = "output",
                recenter: bool = False) -> ComplexField:
    """Run a field through the fork-grating 4f train.

    Parameters
    ----------
    input : ComplexField
        Field at the front focal plane of the first lens.
    sys : FourFSystem
    plane : {"output", "fourier"}
        Read out at the output (image) plane, or directly behind the grating.
    recenter : bool
        Translate the output so the first diffraction order sits on the axis.
        Only meaningful for ``plane="output"``.

    Raises
    ------
    AliasingError
        If more than 1% of the energy reaches the outer two samples of the grid.
    """
    _check_data(input)
    if not np.isclose(input.wavelength, sys.wavelength, rtol=1e-12, atol=0):
        raise DimensionError(f"field wavelength {input.wavelength} != system wavelength {sys.wavelength}")
    if plane not in ("output", "fourier"):
        raise ParameterError(f"plane must be 'output' or 'fourier', got {plane!r}")
    grid = input.grid
    if sys.focal_length < critical_focal_length(grid, sys.wavelength) * (1 - 1e-9):
        warnings.warn("focal length below the critical value; the lens phase is undersampled",
                      RuntimeWarning, stacklevel=2)

    fourier = _two_f(input, sys.focal_length)
    _check_aliasing(fourier, "Fourier-plane")
    mask = forked_grating_mask(sys.grating, grid, sys.wavelength)
    fourier = fourier.with_samples(fourier.samples * mask.samples)
    if plane == "fourier":
        return fourier
    out = _two_f(fourier, sys.focal_length)
    _check_aliasing(out, "output-plane")
    if recenter:
        cx, cy = first_order_center(sys)
        out = shift_field(out, -cx, -cy)
    return out


def detector_power(field: ComplexField, det: DetectorSpec) -> float:
    """Optical power collected by a circular detector."""
    X, Y = field.grid.mesh()
    inside = (X - det.center[0]) ** 2 + (Y - det.center[1]) ** 2 <= det.aperture_radius**2
    return float(np.sum(np.abs(field.samples[inside]) ** 2) * field.grid.cell_area)


def beam_diameter(field: ComplexField) -> float:
    """Second-moment diameter ``2 sqrt(2 <r^2>)`` about the grid origin (``2 w0`` for a Gaussian)."""
    intensity = np.abs(field.samples) ** 2
    total = intensity.sum()
    if total == 0:
        raise DataError("beam diameter of a zero field is undefined")
    r, _ = field.grid.polar()
    return float(2 * np.sqrt(2 * np.sum(intensity * r**2) / total))


def default_detector(input: ComplexField, sys: FourFSystem, spot_radii: float = 1.5) -> DetectorSpec:
    """Detector at the first-order center with radius ``spot_radii * lambda f / D``."""
    spot = sys.wavelength * sys.focal_length / beam_diameter(input)
    return DetectorSpec(first_order_center(sys), spot_radii * spot)


@dataclass(frozen=True)
class IdentificationResult:
    orders: tuple[int, ...]
    raw: np.ndarray
    normalized: np.ndarray

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.orders, self.raw.tolist()))


def identification_vector(input: ComplexField, Ms, sys: FourFSystem,
                          det: DetectorSpec | None = None) -> IdentificationResult:
    """Detected first-order power for each fork order in ``Ms``.

    One simulation per order (sequential measurements with a single grating).
    ``det`` defaults to :func:`default_detector` of the input.
    """
    Ms = tuple(int(m) for m in Ms)
    if not Ms:
        raise ParameterError("at least one fork order is required")
    if not np.any(input.samples):
        zeros = np.zeros(len(Ms))
        return IdentificationResult(Ms, zeros, zeros.copy())
    if det is None:
        det = default_detector(input, sys)
    raw = np.array([detector_power(simulate_4f(input, sys.with_order(M)), det) for M in Ms])
    peak = raw.max()
    normalized = raw / peak if peak > 0 else np.zeros_like(raw)
    return IdentificationResult(Ms, raw, normalized)


@dataclass(frozen=True)
class TransferMatrix:
    """Overlaps ``matrix[i, j] = <Bessel m_i | C | Bessel n_j>``."""

    m_values: tuple[int, ...]
    n_values: tuple[int, ...]
    matrix: np.ndarray

    def peak_rows(self) -> list[int]:
        """Output order with the largest overlap, per input column."""
        return [self.m_values[i] for i in np.argmax(np.abs(self.matrix), axis=0)]


def transfer_matrix(M: int, n_range, k_r: float | None, sys: FourFSystem,
                    aperture_radius: float | None = None, grid: Grid | None = None,
                    m_range=None) -> TransferMatrix:
    """Numerical transfer operator of the sorter in the truncated Bessel basis.

    Each input order ``n`` is propagated with a fork of charge ``M``, the output
    is recentered on the first order, and projected onto Bessel modes ``m`` of
    the same ``k_r``.  Ideally ``|C[m, n]| = delta(m - n + M)``.

    Parameters
    ----------
    n_range : iterable of int
        Input orders (columns).
    k_r : float, optional
        Radial wavenumber; defaults to ten radial oscillations across the aperture.
    aperture_radius : float, optional
        Defaults to 3/8 of the grid window.
    grid : Grid, optional
        Defaults to a 512 x 512 grid of 8 mm.
    m_range : iterable of int, optional
        Output orders (rows); defaults to ``n - M`` padded by two on each side.
    """
    n_values = tuple(int(n) for n in n_range)
    if not n_values:
        raise ParameterError("n_range is empty")
    if len(n_values) > 9:
        warnings.warn("more than 9 input orders; expect long runtimes", RuntimeWarning, stacklevel=2)
    if grid is None:
        grid = Grid.square(512, 8e-3)
    if aperture_radius is None:
        aperture_radius = 0.375 * min(grid.extent)
    if k_r is None:
        k_r = 20 * np.pi / aperture_radius
    if m_range is None:
        m_range = range(min(n_values) - M - 2, max(n_values) - M + 3)
    m_values = tuple(int(m) for m in m_range)
    sys = sys.with_order(M)

    refs = np.stack([bessel_field(m, k_r, grid, aperture_radius, sys.wavelength).samples.ravel()
                     for m in m_values])
    C = np.zeros((len(m_values), len(n_values)), complex)
    for j, n in enumerate(n_values):
        out = simulate_4f(bessel_field(n, k_r, grid, aperture_radius, sys.wavelength), sys,
                          plane="output", recenter=True)
        C[:, j] = refs.conj() @ out.samples.ravel() * grid.cell_area
    return TransferMatrix(m_values, n_values, C)


class ForkIdentifier(TransformerMixin, BaseEstimator):
    """Transformer from fields to detected first-order powers over fork orders.

    Parameters
    ----------
    orders : sequence of int
        Fork charges measured one after another.
    focal_length, carrier_period : float, optional
        Default to :func:`critical_focal_length` and :func:`default_carrier_period`
        of the fitted grid.
    detector_radius : float, optional
        Fixed detector radius; by default derived per input from its beam diameter.
    normalize : bool
        Return the max-normalized view instead of raw powers.
    """

    def __init__(self, orders=(3, 6, 9, 12), focal_length=None, carrier_period=None,
                 detector_radius=None, normalize=False):
        self.orders = orders
        self.focal_length = focal_length
        self.carrier_period = carrier_period
        self.detector_radius = detector_radius
        self.normalize = normalize

    def fit(self, X, y=None):
        _, grid, wl = check_field_stack(X)
        if grid is None:
            raise ParameterError("ForkIdentifier must be fitted on ComplexField inputs")
        self.grid_ = grid
        self.wavelength_ = wl
        self.system_ = default_system(grid, 0, wl, self.focal_length, self.carrier_period)
        self.n_features_out_ = len(tuple(self.orders))
        return self

    def transform(self, X):
        check_is_fitted(self, "system_")
        stack, _, _ = check_field_stack(X, self.grid_)
        rows = []
        for samples in stack:
            field = ComplexField(self.grid_, samples, self.wavelength_)
            det = None
            if self.detector_radius is not None:
                det = DetectorSpec(first_order_center(self.system_), self.detector_radius)
            res = identification_vector(field, self.orders, self.system_, det)
            rows.append(res.normalized if self.normalize else res.raw)
        return np.array(rows)

"""Uniform circular antenna array: azimuthal sampling and the resulting OAM spectrum.

An array of ``N`` identical elements at angles ``phi_k = theta + 2 pi k / N``
samples the incident azimuthal field ``sum_l c_l exp(i l phi)`` and re-radiates
``u(phi) = sum_k s_k e(phi - phi_k)``.  Each element has a Gaussian angular
pattern of width ``sigma`` whose Fourier weight is ``exp(-l^2 sigma^2 / 2)``.
Discrete sampling folds every input order ``l`` onto all ``l' = l (mod N)``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import ParameterError
from .hilbertproj import spectrum_hilbert_angle
from .modes import Family, ModeIndex, ModeSpectrum

DEFAULT_BAND_LIMIT = 50

# Published reference values, reported next to computed ones but never used internally.
PUBLISHED_PHI = {6: 0.3504, 9: 0.1257, 12: 0.0754, 50: 0.0123}
PUBLISHED_OUTPUT_VECTOR = (0.0, 0.0, 1.0, 1.45)
PUBLISHED_INPUT_VECTOR = (0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class AntennaArray:
    """Ring of ``count`` elements.

    ``element_width`` (radians) defaults to half the element spacing, ``pi / N``;
    ``band_limit`` truncates spectra to ``l in [-L, L]``; ``rotation`` offsets
    every element angle.  ``ring_radius`` is carried for reporting only.
    """

    count: int
    element_width: float | None = None
    band_limit: int = DEFAULT_BAND_LIMIT
    ring_radius: float = 0.05
    rotation: float = 0.0

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ParameterError(f"element count must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        if int(self.band_limit) != self.band_limit or self.band_limit < 1:
            raise ParameterError(f"band limit must be a positive integer, got {self.band_limit}")
        object.__setattr__(self, "band_limit", int(self.band_limit))
        if self.element_width is not None and not self.element_width >= 0:
            raise ParameterError(f"element width must be >= 0, got {self.element_width}")

    @property
    def sigma(self) -> float:
        return math.pi / self.count if self.element_width is None else float(self.element_width)

    @property
    def element_angles(self) -> np.ndarray:
        return self.rotation + 2 * np.pi * np.arange(self.count) / self.count

    def orders(self) -> np.ndarray:
        return np.arange(-self.band_limit, self.band_limit + 1)

    def element_weight(self, l):
        return np.exp(-np.asarray(l, dtype=float) ** 2 * self.sigma**2 / 2)

    def with_count(self, n: int) -> "AntennaArray":
        return dataclasses.replace(self, count=n)


@dataclass(frozen=True)
class ArrayExperiment:
    input_modes: ModeSpectrum
    array: AntennaArray

    def __post_init__(self):
        if not len(self.input_modes) or self.input_modes.norm() == 0:
            raise ParameterError("input spectrum must be nonzero")
        if self.input_modes.families != {Family.AZIMUTHAL}:
            raise ParameterError("array input must be an azimuthal-order spectrum")
        lmax = max(abs(idx.l) for idx in self.input_modes)
        if self.array.band_limit < lmax:
            raise ParameterError(
                f"band limit {self.array.band_limit} is below the largest input order |l|={lmax}"
            )


def _to_spectrum(orders, coefficients) -> ModeSpectrum:
    return ModeSpectrum({ModeIndex.azimuthal(int(l)): c for l, c in zip(orders, coefficients)})


def _closed_form(exp: ArrayExperiment) -> np.ndarray:
    arr = exp.array
    out = arr.orders()
    coeff = np.zeros(len(out), complex)
    for idx, c in exp.input_modes.items():
        hit = (out - idx.l) % arr.count == 0
        coeff[hit] += c * np.exp(1j * (idx.l - out[hit]) * arr.rotation)
    return coeff * arr.element_weight(out)


def _drive(exp: ArrayExperiment) -> np.ndarray:
    phik = exp.array.element_angles
    return sum(c * np.exp(1j * idx.l * phik) for idx, c in exp.input_modes.items())


def _quadrature(exp: ArrayExperiment) -> np.ndarray:
    arr = exp.array
    out = arr.orders()
    s = _drive(exp)
    phik = arr.element_angles
    sigma = arr.sigma
    if sigma == 0:
        # point elements: the Fourier integral of a Dirac comb is the element sum
        return np.exp(-1j * np.outer(out, phik)) @ s / arr.count

    # sample the re-radiated pattern finely enough that aliased orders are < 1e-19
    P = 1 << math.ceil(math.log2(2 * (arr.band_limit + math.ceil(9.5 / sigma)) + 2))
    phi = 2 * np.pi * np.arange(P) / P
    wraps = max(1, math.ceil((9.6 * sigma / math.pi - 1) / 2))
    u = np.zeros(P, complex)
    norm = (2 * np.pi / arr.count) / (sigma * math.sqrt(2 * math.pi))
    for k0 in range(0, arr.count, 256):
        d = phi[:, None] - phik[None, k0:k0 + 256]
        d = (d + np.pi) % (2 * np.pi) - np.pi
        pattern = sum(np.exp(-(d + 2 * np.pi * j) ** 2 / (2 * sigma**2)) for j in range(-wraps, wraps + 1))
        u += norm * pattern @ s[k0:k0 + 256]
    full = np.fft.fft(u) / P
    return full[out % P]


def sampled_spectrum(exp: ArrayExperiment, method: str = "closed") -> ModeSpectrum:
    """Azimuthal spectrum re-radiated by the array, truncated to ``[-L, L]``.

    Parameters
    ----------
    method : {"closed", "quadrature"}
        ``"closed"`` uses ``c'(l') = w(l') sum_l c_l [l' = l mod N]``;
        ``"quadrature"`` samples ``u(phi)`` from the element patterns and
        takes its discrete Fourier coefficients.
    """
    if method == "closed":
        coeff = _closed_form(exp)
    elif method == "quadrature":
        coeff = _quadrature(exp)
    else:
        raise ParameterError(f"unknown method {method!r}")
    return _to_spectrum(exp.array.orders(), coeff)


def ideal_spectrum(exp: ArrayExperiment) -> ModeSpectrum:
    """What a continuous ring of the same elements would return: the input weighted by ``w(l)``."""
    return ModeSpectrum({idx: c * float(exp.array.element_weight(idx.l))
                         for idx, c in exp.input_modes.items()})


def array_hilbert_angle(exp: ArrayExperiment) -> float:
    """Hilbert angle between the ideal and the discretely sampled spectrum."""
    return spectrum_hilbert_angle(ideal_spectrum(exp), sampled_spectrum(exp))


@dataclass(frozen=True)
class SweepRow:
    N: int
    phi: float
    spectrum: ModeSpectrum

    @property
    def published_phi(self) -> float | None:
        return PUBLISHED_PHI.get(self.N)


def phi_sweep(input_modes: ModeSpectrum, Ns, template: AntennaArray | None = None) -> list[SweepRow]:
    """One row ``(N, phi, spectrum)`` per element count, in input order."""
    Ns = [int(n) for n in Ns]
    if not Ns:
        raise ParameterError("Ns is empty")
    template = template or AntennaArray(1)
    rows = []
    for n in Ns:
        exp = ArrayExperiment(input_modes, template.with_count(n))
        rows.append(SweepRow(n, array_hilbert_angle(exp), sampled_spectrum(exp)))
    return rows


class CircularArraySampler(TransformerMixin, BaseEstimator):
    """Transformer applying the array sampling to spectra stored as rows.

    Each input row holds coefficients for ``l = -L..L`` (``2L + 1`` columns);
    each output row is the sampled spectrum on the same orders.
    """

    def __init__(self, n_elements=12, element_width=None, band_limit=DEFAULT_BAND_LIMIT, rotation=0.0):
        self.n_elements = n_elements
        self.element_width = element_width
        self.band_limit = band_limit
        self.rotation = rotation

    def fit(self, X=None, y=None):
        self.array_ = AntennaArray(self.n_elements, self.element_width, self.band_limit,
                                   rotation=self.rotation)
        self.orders_ = self.array_.orders()
        return self

    def _experiments(self, X):
        check_is_fitted(self, "array_")
        X = np.asarray(X, dtype=complex)
        if X.ndim == 1:
            X = X[None]
        if X.ndim != 2 or X.shape[1] != len(self.orders_):
            raise ParameterError(f"expected rows of {len(self.orders_)} coefficients, got shape {X.shape}")
        for row in X:
            spec = _to_spectrum(self.orders_[row != 0], row[row != 0])
            yield ArrayExperiment(spec, self.array_)

    def transform(self, X):
        return np.array([_closed_form(exp) for exp in self._experiments(X)])

    def score(self, X, y=None) -> float:
        """Mean Hilbert angle (radians) between ideal and sampled spectra; lower is better."""
        return float(np.mean([array_hilbert_angle(exp) for exp in self._experiments(X)]))

"""Projection of fields onto mode bases and angles between mode spectra."""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_coefficients, check_field_stack
from .exceptions import DegenerateInputError, DimensionError, ParameterError
from .fieldgrid import ComplexField, Grid, inner_product, norm, vector_angle
from .modes import DEFAULT_WAVELENGTH, LGParams, ModeIndex, ModeSpectrum, mode_field, synthesize

DEFAULT_L_RANGE = (-8, 8)
DEFAULT_P_RANGE = (0, 4)


def lg_index_set(l_range=DEFAULT_L_RANGE, p_range=DEFAULT_P_RANGE) -> list[ModeIndex]:
    """All LG indices with ``l`` and ``p`` in the inclusive ranges."""
    (l0, l1), (p0, p1) = l_range, p_range
    return [ModeIndex.lg(l, p) for l in range(l0, l1 + 1) for p in range(p0, p1 + 1)]


def _basis_params(params: LGParams, field: ComplexField) -> LGParams:
    return dataclasses.replace(params, wavelength=field.wavelength)


def project(field: ComplexField, basis_index: ModeIndex, params: LGParams,
            aperture_radius: float | None = None) -> complex:
    """Coefficient of ``field`` along one basis mode, ``<basis, field>``."""
    basis = mode_field(basis_index, _basis_params(params, field), field.grid, aperture_radius)
    return inner_product(basis, field)


def _check_index_set(index_set: Sequence[ModeIndex]) -> list[ModeIndex]:
    index_set = list(index_set)
    if not index_set:
        raise ParameterError("index set is empty")
    if len(set(index_set)) != len(index_set):
        raise ParameterError("index set contains duplicate modes")
    return index_set


def decompose(field: ComplexField, index_set: Sequence[ModeIndex], params: LGParams,
              aperture_radius: float | None = None) -> ModeSpectrum:
    """Project ``field`` onto every mode of ``index_set``.

    Returns
    -------
    ModeSpectrum
        Complex coefficients (phase retained), ordered by ``(l, p)``.
    """
    index_set = _check_index_set(index_set)
    return ModeSpectrum({idx: project(field, idx, params, aperture_radius) for idx in index_set})


def spectrum_hilbert_angle(s1: ModeSpectrum, s2: ModeSpectrum) -> float:
    """Hilbert angle between two spectra over the union of their indices.

    Missing entries count as zero.  Equals the field-level angle when both
    fields lie in the span of an orthonormal basis.
    """
    keys = list(dict.fromkeys([*s1, *s2]))
    u = np.array([s1.coefficient(k) for k in keys])
    v = np.array([s2.coefficient(k) for k in keys])
    if not u.any() or not v.any():
        raise DegenerateInputError("Hilbert angle is undefined for a zero spectrum")
    return vector_angle(u, v)


def reconstruct(spectrum: ModeSpectrum, params: LGParams, grid: Grid,
                aperture_radius: float | None = None) -> ComplexField:
    return synthesize(spectrum, params, grid, aperture_radius)


def residual(field: ComplexField, spectrum: ModeSpectrum, params: LGParams,
             aperture_radius: float | None = None) -> float:
    """Relative norm of the part of ``field`` not captured by ``spectrum``."""
    n = norm(field)
    if n == 0:
        raise DegenerateInputError("residual is undefined for a zero field")
    rebuilt = reconstruct(spectrum, _basis_params(params, field), field.grid, aperture_radius)
    return norm(field - rebuilt) / n


def gram_matrix(fields: Sequence[ComplexField]) -> np.ndarray:
    """Matrix of pairwise inner products ``G[i, j] = <f_i, f_j>``."""
    if not fields:
        return np.zeros((0, 0), complex)
    for f in fields[1:]:
        if f.grid != fields[0].grid:
            raise DimensionError("all fields must share one grid")
    B = np.stack([f.samples.ravel() for f in fields])
    return (B.conj() @ B.T) * fields[0].grid.cell_area


def _as_index(m) -> ModeIndex:
    if isinstance(m, ModeIndex):
        return m
    l, p = m
    return ModeIndex.lg(l, p)


class ModeDecomposer(TransformerMixin, BaseEstimator):
    """Transformer mapping sampled fields to their modal coefficients.

    ``fit`` builds the basis on the grid of the training fields; ``transform``
    returns the complex coefficient matrix of shape ``(n_samples, n_modes)``
    and ``inverse_transform`` rebuilds fields from coefficients.

    Parameters
    ----------
    modes : sequence of ModeIndex or (l, p) pairs, optional
        Explicit index set.  Defaults to every LG mode in ``l_range x p_range``.
    l_range, p_range : tuple of int
        Inclusive ranges used when ``modes`` is None.
    waist : float
        LG beam waist in meters.
    grid : Grid, optional
        Required only when fitting on bare arrays instead of ComplexField objects.
    wavelength : float, optional
    aperture_radius : float, optional
        Truncation radius for Bessel index sets.

    Attributes
    ----------
    modes_ : list of ModeIndex
    grid_ : Grid
    basis_ : ndarray of shape (n_modes, ny * nx)
    """

    def __init__(self, modes=None, l_range=DEFAULT_L_RANGE, p_range=DEFAULT_P_RANGE,
                 waist=1e-3, grid=None, wavelength=None, aperture_radius=None):
        self.modes = modes
        self.l_range = l_range
        self.p_range = p_range
        self.waist = waist
        self.grid = grid
        self.wavelength = wavelength
        self.aperture_radius = aperture_radius

    def fit(self, X, y=None):
        _, grid, wl = check_field_stack(X, self.grid)
        grid = grid or self.grid
        if grid is None:
            raise ParameterError("fitting on bare arrays requires the grid parameter")
        wl = wl or self.wavelength or DEFAULT_WAVELENGTH
        if self.modes is None:
            modes = lg_index_set(self.l_range, self.p_range)
        else:
            modes = [_as_index(m) for m in self.modes]
        modes = sorted(_check_index_set(modes), key=ModeIndex.sort_key)
        params = LGParams(self.waist, wl)
        self.modes_ = modes
        self.grid_ = grid
        self.wavelength_ = wl
        self.basis_ = np.stack(
            [mode_field(m, params, grid, self.aperture_radius).samples.ravel() for m in modes]
        )
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_")
        stack, _, _ = check_field_stack(X, self.grid_)
        flat = stack.reshape(len(stack), -1)
        return (flat @ self.basis_.conj().T) * self.grid_.cell_area

    def inverse_transform(self, C):
        check_is_fitted(self, "basis_")
        C = check_coefficients(C, len(self.modes_))
        return (C @ self.basis_).reshape((len(C),) + self.grid_.shape)

    def to_spectra(self, C) -> list[ModeSpectrum]:
        check_is_fitted(self, "basis_")
        C = check_coefficients(C, len(self.modes_))
        return [ModeSpectrum(zip(self.modes_, row)) for row in C]

    def score(self, X, y=None) -> float:
        """Mean fraction of field energy captured by the basis."""
        stack, _, _ = check_field_stack(X, self.grid_)
        C = self.transform(stack)
        energy = np.sum(np.abs(stack) ** 2, axis=(1, 2)) * self.grid_.cell_area
        if np.any(energy == 0):
            raise DegenerateInputError("score is undefined for zero fields")
        return float(np.mean(np.sum(np.abs(C) ** 2, axis=1) / energy))

"""Input validation helpers for the estimator front-ends."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .exceptions import DataError, DimensionError
from .fieldgrid import ComplexField, Grid


def check_field_stack(X, grid: Grid | None = None):
    """Coerce estimator input to a ``(n_samples, ny, nx)`` complex array.

    ``X`` may be a single :class:`ComplexField`, a sequence of them, or an
    array of shape ``(ny, nx)`` / ``(n_samples, ny, nx)``.  Fields carry their
    own grid; bare arrays are checked against ``grid`` when given.

    Returns
    -------
    stack : ndarray
    grid : Grid or None
        Grid shared by the input fields (None for bare arrays).
    wavelength : float or None
    """
    if isinstance(X, ComplexField):
        X = [X]
    if isinstance(X, Sequence) and len(X) and all(isinstance(f, ComplexField) for f in X):
        g, wl = X[0].grid, X[0].wavelength
        for f in X[1:]:
            if f.grid != g:
                raise DimensionError("all input fields must share one grid")
            if not np.isclose(f.wavelength, wl, rtol=1e-12, atol=0):
                raise DimensionError("all input fields must share one wavelength")
        if grid is not None and g != grid:
            raise DimensionError(f"input grid {g} differs from fitted grid {grid}")
        return np.stack([f.samples for f in X]), g, wl

    stack = np.asarray(X)
    if stack.dtype == object:
        raise DataError("input must be ComplexField objects or a numeric array")
    stack = stack.astype(np.complex128, copy=False)
    if stack.ndim == 2:
        stack = stack[None]
    if stack.ndim != 3 or stack.shape[0] == 0:
        raise DimensionError(f"expected (n_samples, ny, nx) input, got shape {np.shape(X)}")
    if grid is not None and stack.shape[1:] != grid.shape:
        raise DimensionError(f"input samples {stack.shape[1:]} do not match grid {grid.shape}")
    if not np.isfinite(stack).all():
        raise DataError("input contains NaN or Inf")
    return stack, None, None


def check_coefficients(C, n_features: int) -> np.ndarray:
    C = np.asarray(C, dtype=np.complex128)
    if C.ndim == 1:
        C = C[None]
    if C.ndim != 2 or C.shape[1] != n_features:
        raise DimensionError(f"expected (n_samples, {n_features}) coefficients, got {np.shape(C)}")
    if not np.isfinite(C).all():
        raise DataError("coefficients contain NaN or Inf")
    return C

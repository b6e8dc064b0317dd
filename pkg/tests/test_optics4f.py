import warnings

import numpy as np
import pytest

from oamhilbert import (
    AliasingError,
    ComplexField,
    DimensionError,
    Grid,
    LGParams,
    ModeSpectrum,
    ParameterError,
    lg_field,
    norm,
    synthesize,
)
from oamhilbert.optics4f import (
    DetectorSpec,
    ForkedGrating,
    ForkIdentifier,
    angular_spectrum_propagate,
    beam_diameter,
    critical_focal_length,
    default_system,
    first_order_center,
    forked_grating_mask,
    identification_vector,
    lens_phase,
    shift_field,
    simulate_4f,
    transfer_matrix,
)

from conftest import WAVELENGTH, random_field, sample_circle, winding


def gaussian_radius(w0, z, wavelength=WAVELENGTH):
    z_r = np.pi * w0**2 / wavelength
    return w0 * np.sqrt(1 + (z / z_r) ** 2)


def test_propagate_zero_distance(rng):
    f = random_field(rng)
    assert angular_spectrum_propagate(f, 0.0) is f


@pytest.mark.parametrize("z", [0.5, 1.0, 2.0])
def test_gaussian_spreading_and_power(params, grid512, z):
    g0 = lg_field(0, 0, params, grid512)
    gz = angular_spectrum_propagate(g0, z)
    assert abs(norm(gz) ** 2 - norm(g0) ** 2) <= 1e-6
    # second-moment radius sqrt(2 <r^2>) is w(z) for a Gaussian
    w = beam_diameter(gz) / 2
    assert w == pytest.approx(gaussian_radius(params.waist, z), rel=0.01)


def test_propagation_composes(params, grid256):
    f = lg_field(2, 1, params, grid256)
    once = angular_spectrum_propagate(f, 0.7)
    twice = angular_spectrum_propagate(angular_spectrum_propagate(f, 0.3), 0.4)
    assert np.abs(once.samples - twice.samples).max() <= 1e-9 * np.abs(f.samples).max()


def test_back_propagation_inverts(params, grid256):
    f = lg_field(1, 0, params, grid256)
    back = angular_spectrum_propagate(angular_spectrum_propagate(f, 1.3), -1.3)
    assert np.allclose(back.samples, f.samples, atol=1e-12)


def test_evanescent_warning():
    f = random_field(np.random.default_rng(0), wavelength=1e-3)
    with pytest.warns(RuntimeWarning, match="evanescent"):
        angular_spectrum_propagate(f, 1e-3)


def test_lens_unit_modulus_and_inverse(rng):
    f = random_field(rng)
    lensed = lens_phase(f, 0.2)
    assert np.allclose(np.abs(lensed.samples), np.abs(f.samples))
    assert np.allclose(lens_phase(lensed, -0.2).samples, f.samples, atol=1e-12)
    with pytest.raises(ParameterError):
        lens_phase(f, 0.0)


def test_lens_focuses_plane_wave(grid512):
    f = critical_focal_length(grid512, WAVELENGTH)
    plane = ComplexField(grid512, np.ones(grid512.shape), WAVELENGTH)
    focus = angular_spectrum_propagate(lens_phase(plane, f), f)
    intensity = np.abs(focus.samples) ** 2
    j, i = np.unravel_index(np.argmax(intensity), intensity.shape)
    assert (i, j) == (grid512.nx // 2, grid512.ny // 2)
    assert intensity.max() > 100 * intensity.mean()


def test_mask_plain_carrier(grid256):
    period = 8 * grid256.dx
    mask = forked_grating_mask(ForkedGrating(0, period), grid256)
    X, _ = grid256.mesh()
    assert np.allclose(mask.samples, np.exp(2j * np.pi * X / period), atol=1e-12)


@pytest.mark.parametrize("M", [1, 3, -6, 12])
def test_mask_winding(grid256, M):
    period = 8 * grid256.dx
    mask = forked_grating_mask(ForkedGrating(M, period), grid256)
    assert np.allclose(np.abs(mask.samples), 1)
    X, _ = grid256.mesh()
    fork = mask.with_samples(mask.samples * np.exp(-2j * np.pi * X / period))
    vals, _ = sample_circle(fork, 40 * grid256.dx)
    assert winding(vals) == pytest.approx(-2 * np.pi * M, abs=1e-9)


def test_mask_unresolvable_carrier(grid256):
    with pytest.raises(ParameterError):
        forked_grating_mask(ForkedGrating(3, 2 * grid256.dx), grid256)
    with pytest.raises(ParameterError):
        ForkedGrating(3, -1.0)
    with pytest.raises(ParameterError):
        ForkedGrating(3, 1e-4, kind="amplitude")


def test_shift_field_matches_roll(rng):
    f = random_field(rng)
    shifted = shift_field(f, 3 * f.grid.dx, -2 * f.grid.dy)
    assert np.allclose(shifted.samples, np.roll(f.samples, (-2, 3), axis=(0, 1)), atol=1e-12)


def _center_ratio(out, sys):
    cx, cy = first_order_center(sys)
    i = int(round(cx / out.grid.dx + out.grid.nx / 2))
    j = out.grid.ny // 2
    intensity = np.abs(out.samples) ** 2
    return intensity[j, i] / intensity.max()


def test_matched_order_gives_bright_spot(params, grid512):
    sys = default_system(grid512, 3, WAVELENGTH)
    out = simulate_4f(lg_field(3, 0, params, grid512), sys)
    assert _center_ratio(out, sys) > 0.9


def test_mismatched_order_gives_dark_center(params, grid512):
    sys = default_system(grid512, 3, WAVELENGTH)
    out = simulate_4f(lg_field(6, 0, params, grid512), sys)
    assert _center_ratio(out, sys) < 1e-3


def test_4f_passive_and_zero(params, grid512):
    sys = default_system(grid512, 6, WAVELENGTH)
    beam = synthesize(ModeSpectrum.lg({(3, 0): 1, (6, 0): 1}).scaled(2**-0.5), params, grid512)
    out = simulate_4f(beam, sys)
    assert norm(out) ** 2 <= norm(beam) ** 2 * (1 + 1e-9)
    zero = simulate_4f(ComplexField.zeros(grid512, WAVELENGTH), sys)
    assert not np.any(zero.samples)


def test_4f_recenter_and_fourier_plane(params, grid512):
    sys = default_system(grid512, 3, WAVELENGTH)
    beam = lg_field(3, 0, params, grid512)
    out = simulate_4f(beam, sys, recenter=True)
    intensity = np.abs(out.samples) ** 2
    j, i = np.unravel_index(np.argmax(intensity), intensity.shape)
    assert (abs(i - grid512.nx // 2), abs(j - grid512.ny // 2)) <= (1, 1)
    fourier = simulate_4f(beam, sys, plane="fourier")
    assert norm(fourier) == pytest.approx(norm(beam), rel=1e-6)
    with pytest.raises(ParameterError):
        simulate_4f(beam, sys, plane="pupil")


def test_4f_validation(params, grid512):
    sys = default_system(grid512, 3, 1064e-9)
    with pytest.raises(DimensionError):
        simulate_4f(lg_field(3, 0, params, grid512), sys)
    short = default_system(grid512, 3, WAVELENGTH, focal_length=0.5 * critical_focal_length(grid512, WAVELENGTH))
    with pytest.warns(RuntimeWarning, match="critical"):
        try:
            simulate_4f(lg_field(0, 0, params, grid512), short)
        except AliasingError:
            pass


def test_aliasing_error(grid512):
    plane = ComplexField(grid512, np.ones(grid512.shape), WAVELENGTH)
    with pytest.raises(AliasingError, match="edge"):
        simulate_4f(plane, default_system(grid512, 3, WAVELENGTH))


def test_transfer_matrix_identity_for_zero_charge():
    grid = Grid.square(512, 8e-3)
    tm = transfer_matrix(0, [1, 2], None, default_system(grid, 0, WAVELENGTH), grid=grid)
    A = np.abs(tm.matrix)
    assert tm.peak_rows() == [1, 2]
    for j, n in enumerate(tm.n_values):
        i = tm.m_values.index(n)
        assert A[i, j] >= 0.99
        assert np.delete(A[:, j], i).max() <= 0.01
        # passivity: no column carries more than the input power
        assert np.sum(A[:, j] ** 2) <= 1 + 1e-6


def test_transfer_matrix_shifts_charge():
    sys = default_system(Grid.square(512, 8e-3), 0, WAVELENGTH)
    tm = transfer_matrix(3, [2, 3, 4], None, sys)
    assert tm.peak_rows() == [-1, 0, 1]
    A = np.abs(tm.matrix)
    assert A.max(axis=0).min() >= 0.9
    with pytest.raises(ParameterError):
        transfer_matrix(3, [], None, sys)


@pytest.fixture(scope="module")
def two_mode_beam(params, grid512):
    return synthesize(ModeSpectrum.lg({(3, 0): 1, (6, 0): 1}).scaled(2**-0.5), params, grid512)


def test_identification_two_mode_beam(two_mode_beam, grid512):
    sys = default_system(grid512, 0, WAVELENGTH)
    res = identification_vector(two_mode_beam, [3, 6, 9, 12], sys)
    I = res.as_dict()
    assert min(I[3], I[6]) >= 10 * max(I[9], I[12])
    assert res.normalized.max() == 1.0
    assert res.normalized[2:].max() < 1e-3


def test_identification_single_mode(params, grid512):
    sys = default_system(grid512, 0, WAVELENGTH)
    res = identification_vector(lg_field(9, 0, params, grid512), [3, 6, 9, 12], sys)
    assert list(np.argsort(res.raw))[-1] == 2
    assert np.delete(res.normalized, 2).max() < 1e-3


def test_identification_scaling_and_zero(two_mode_beam, grid512):
    sys = default_system(grid512, 0, WAVELENGTH)
    det = DetectorSpec(first_order_center(sys), 5 * grid512.dx)
    base = identification_vector(two_mode_beam, [3, 6], sys, det).raw
    scaled = identification_vector(two_mode_beam * (2 - 1j), [3, 6], sys, det).raw
    assert np.allclose(scaled, 5 * base, rtol=1e-9)
    zero = identification_vector(ComplexField.zeros(grid512, WAVELENGTH), [3, 6], sys)
    assert not zero.raw.any() and not zero.normalized.any()
    with pytest.raises(ParameterError):
        identification_vector(two_mode_beam, [], sys)


def test_fork_identifier_estimator(two_mode_beam, params, grid512):
    est = ForkIdentifier(orders=(3, 9), normalize=True).fit([two_mode_beam])
    Y = est.transform([two_mode_beam, lg_field(9, 0, params, grid512)])
    assert Y.shape == (2, 2)
    assert Y[0, 0] == 1.0 and Y[0, 1] < 1e-3
    assert Y[1, 1] == 1.0 and Y[1, 0] < 1e-3


def test_default_train_is_warning_free(params, grid512):
    # the default train must not warn on the default grid
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        simulate_4f(lg_field(3, 0, LGParams(params.waist, WAVELENGTH), grid512),
                    default_system(grid512, 3, WAVELENGTH))

import sys

import numpy as np
import pytest

from oamhilbert import ComplexField, Grid, LGParams, default_grid

WAVELENGTH = 1550e-9


@pytest.fixture(scope="session")
def params():
    return LGParams(1e-3, WAVELENGTH)


@pytest.fixture(scope="session")
def grid512(params):
    return default_grid(params)


@pytest.fixture(scope="session")
def grid256(params):
    return default_grid(params, n=256)


@pytest.fixture(scope="session")
def grid128(params):
    return default_grid(params, n=128)


@pytest.fixture
def rng():
    return np.random.default_rng(20161015)


def random_field(rng, grid=None, wavelength=WAVELENGTH):
    grid = grid or Grid(16, 12, 1e-4, 1.5e-4)
    samples = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    return ComplexField(grid, samples, wavelength)


def sample_circle(field, radius, n=720):
    """Field values at the grid points nearest to a circle, in angular order."""
    theta = np.linspace(0, 2 * np.pi, n, endpoint=False)
    g = field.grid
    i = np.rint(radius * np.cos(theta) / g.dx + g.nx / 2).astype(int)
    j = np.rint(radius * np.sin(theta) / g.dy + g.ny / 2).astype(int)
    return field.samples[j, i], theta


def winding(values) -> float:
    """Total phase advance around a closed sequence of samples."""
    ring = np.unwrap(np.append(np.angle(values), np.angle(values[0])))
    return float(ring[-1] - ring[0])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, line = results[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {line}")

import numpy as np
import pytest

from novikov2c import Field, build_partition, make_grid


@pytest.fixture(scope="session")
def trig_grid():
    """Small grid on [-pi, pi) whose wavenumber lattice is the integers."""
    return make_grid(256, np.pi)


@pytest.fixture(scope="session")
def lab_grid():
    """Mid-size grid on [-50, 50) for family tests (k_max ~ 257)."""
    return make_grid(2**13, 50.0)


@pytest.fixture(scope="session")
def lab_partition(lab_grid):
    return build_partition(lab_grid)


def random_band_limited(grid, band_top, seed, amplitude=1.0):
    """Real field with random spectrum supported in |k| <= band_top."""
    rng = np.random.default_rng(seed)
    n = grid.n_points
    coeffs = np.zeros(n, dtype=np.complex128)
    keep = np.abs(grid.wavenumbers) <= band_top
    coeffs[keep] = rng.standard_normal(keep.sum()) + 1j * rng.standard_normal(keep.sum())
    idx = np.arange(1, n // 2)
    coeffs[n - idx] = np.conj(coeffs[idx])
    coeffs[0] = coeffs[0].real
    coeffs[grid.nyquist] = coeffs[grid.nyquist].real
    f = Field(grid, spectral=coeffs)
    peak = np.max(np.abs(f.physical))
    return (amplitude / peak) * f


def mode_field(grid, wave, kind="cos"):
    """cos(k x) or sin(k x) sampled on the grid; k must be a lattice number."""
    fn = np.cos if kind == "cos" else np.sin
    return Field.from_physical(grid, fn(wave * grid.x))

"""Shared builders for the test suite."""

import numpy as np
import pytest

from viscowave.grid import VectorField, make_grid


def centered_gaussian(grid, sigma=0.8, mass=1.0, components=(1.0, 1.0, 1.0)):
    """Unit-mass-normalized Gaussian bump at the box center in each component."""
    L = grid.box_length
    x = [grid.x_component(a) - L / 2.0 for a in range(3)]
    r2 = x[0] ** 2 + x[1] ** 2 + x[2] ** 2
    prof = mass * np.exp(-r2 / (2.0 * sigma**2)) / (sigma**3 * (2.0 * np.pi) ** 1.5)
    data = np.stack([c * prof for c in components])
    return VectorField(grid, data, "physical")


def band_limited_random(grid, seed=0, keep_fraction=0.4, components=3):
    """Real random field with spectrum confined to a centered ball."""
    from viscowave.grid import transform

    rng = np.random.default_rng(seed)
    data = np.zeros((3, *grid.shape))
    for c in range(components):
        data[c] = rng.standard_normal(grid.shape)
    fld = transform(VectorField(grid, data, "physical"))
    mask = grid.radius <= keep_fraction * np.max(np.abs(grid.xi1))
    return transform(VectorField(grid, fld.data * mask, "spectral"))


@pytest.fixture
def grid16():
    return make_grid(16, 16.0)


@pytest.fixture
def grid8():
    return make_grid(8, 2.0 * np.pi)

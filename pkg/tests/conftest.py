"""Shared fixtures: the exactly solvable configuration and its solves."""

import numpy as np
import pytest

from shockbeta import (
    Grid,
    neutral_zero,
    normalize_to_standing,
    quadratic_transverse_flux,
    solve_coupled,
    solve_profile,
)


def exact_profile(x):
    return -np.tanh(x / 2.0)


def exact_v(x):
    return -x / np.cosh(x / 2.0) ** 2


@pytest.fixture(scope="session")
def quad_flux():
    return quadratic_transverse_flux()


@pytest.fixture(scope="session")
def exact_cfg(quad_flux):
    return normalize_to_standing(quad_flux, 1.0, -1.0, 0.0)


@pytest.fixture(scope="session")
def exact_freq(quad_flux, exact_cfg):
    return neutral_zero(exact_cfg, quad_flux, 1.0)


@pytest.fixture(scope="session")
def grid_L20():
    return Grid.make(20.0, 4000)


@pytest.fixture(scope="session")
def profile_L20(exact_cfg, grid_L20):
    return solve_profile(exact_cfg, grid_L20)


@pytest.fixture(scope="session")
def coupled_L20(exact_cfg, quad_flux, exact_freq):
    return solve_coupled(exact_cfg, quad_flux, exact_freq, L=20.0, n_out=4000)

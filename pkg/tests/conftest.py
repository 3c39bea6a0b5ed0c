"""Session-scoped fixtures for the expensive shared objects.

The exactness bundle sizes every rule so degree-8 inputs are integrated
without discretization error: sphere exactness 33 >= 4L+1, 18 radial nodes
(degree 37 with the r^2 Jacobian), and 34 circle angles (even, trig degree 33)
cover products of four band-limited factors and squared pair kernels alike.
"""

import numpy as np
import pytest

from sharpsphere import (
    FormGrids,
    build_ball_grid,
    build_basis,
    build_sphere_grid,
    lambda_closed_form,
    make_workspace,
)


@pytest.fixture(scope="session")
def grid17():
    return build_sphere_grid(17)


@pytest.fixture(scope="session")
def grid32():
    return build_sphere_grid(32)


@pytest.fixture(scope="session")
def ball_default(grid32):
    return build_ball_grid(48, grid32)


@pytest.fixture(scope="session")
def exact_grids(grid17):
    return FormGrids(outer=grid17,
                     partner=build_sphere_grid(17, azimuth_offset=1.0),
                     ball=build_ball_grid(18, grid17),
                     n_c=34)


@pytest.fixture(scope="session")
def basis16_17(grid17):
    # degree 16 holds |f_sharp|^2 exactly for band limit 8; exactness 33 >= 32
    return build_basis(16, grid17)


@pytest.fixture(scope="session")
def ws8():
    return make_workspace(8)


@pytest.fixture(scope="session")
def lam8():
    return lambda_closed_form(8)


@pytest.fixture(scope="session")
def lam16():
    return lambda_closed_form(16)

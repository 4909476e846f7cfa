import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavity_cpf import CONSTANTS, REFERENCE_PARAMS, PhysicalParams, PulseSpec, default_grid, make_grid
from cavity_cpf.errors import DomainError, GridError


def test_constants_are_codata_and_fixed():
    assert CONSTANTS.hbar == pytest.approx(1.054571817e-34, rel=1e-12)
    assert CONSTANTS.eps0 == pytest.approx(8.8541878128e-12, rel=1e-9)
    assert CONSTANTS.c_light == 299792458.0
    with pytest.raises(TypeError):
        type(CONSTANTS)(hbar=1.0)


@pytest.mark.parametrize(
    "omega_b, n, expected, spacing",
    [(1.0, 2, [-0.5, 0.5], 1.0), (5.0, 5, [-4, -2, 0, 2, 4], 2.0)],
)
def test_make_grid_examples(omega_b, n, expected, spacing):
    grid = make_grid(omega_b, n)
    assert grid.delta_omega == spacing
    np.testing.assert_array_equal(grid.omegas, expected)


@given(st.floats(1e-3, 1e12), st.integers(2, 3000))
def test_grid_symmetry(omega_b, n):
    grid = make_grid(omega_b, n)
    w = grid.omegas
    assert np.all(w + w[::-1] == 0)
    assert abs(np.sum(w)) <= 1e-12 * omega_b * n
    assert grid.n_modes * grid.delta_omega == pytest.approx(2 * omega_b, rel=1e-15)


@pytest.mark.parametrize("omega_b, n", [(0.0, 4), (-1.0, 4), (1.0, 1), (1.0, 2.5)])
def test_make_grid_rejects(omega_b, n):
    with pytest.raises(GridError):
        make_grid(omega_b, n)


def test_default_grid_reference_duration():
    T = 3.0e-6
    grid = default_grid(REFERENCE_PARAMS, PulseSpec(T))
    sigma = math.sqrt(48) / T
    assert sigma == pytest.approx(2.31e6, rel=1e-3)
    assert grid.delta_omega == pytest.approx(2.09e5, rel=3e-3)
    # 2 * 8 sigma / d_omega = 176.43 -> 177 -> next even 178
    assert 16 * sigma / (2 * math.pi / (10 * T)) == pytest.approx(176.43, abs=0.01)
    assert grid.n_modes == 178
    assert grid.omega_b == pytest.approx(1.864e7, rel=1e-3)
    assert grid.omega_b >= 8 * sigma
    assert grid.delta_omega * T == 2 * math.pi / 10


def test_default_grid_scales_with_duration():
    a = default_grid(REFERENCE_PARAMS, PulseSpec(1.5e-6))
    b = default_grid(REFERENCE_PARAMS, PulseSpec(3.0e-6))
    assert a.n_modes == b.n_modes
    assert b.delta_omega == pytest.approx(a.delta_omega / 2, rel=1e-15)
    assert b.omega_b == pytest.approx(a.omega_b / 2, rel=1e-15)


def test_default_grid_overrides():
    pulse = PulseSpec(3e-6)
    g = default_grid(REFERENCE_PARAMS, pulse, n_modes=64)
    assert g.n_modes == 64 and g.omega_b == pytest.approx(8 * pulse.sigma_omega)
    g = default_grid(REFERENCE_PARAMS, pulse, omega_b=1e8)
    assert g.delta_omega * 3e-6 == 2 * math.pi / 10 and g.n_modes % 2 == 0 and g.omega_b >= 1e8
    g = default_grid(REFERENCE_PARAMS, pulse, omega_b=1e7, n_modes=10)
    assert g.delta_omega == 2e6


def test_params_validation():
    assert PhysicalParams(0.0, 0.0, 0.0).delta == 0.0
    with pytest.raises(DomainError):
        PhysicalParams(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        PhysicalParams(1.0, 1.0, float("nan"))
    assert REFERENCE_PARAMS.replace(delta=5.0).delta == 5.0


def test_pulse_validation():
    with pytest.raises(DomainError):
        PulseSpec(0.0)

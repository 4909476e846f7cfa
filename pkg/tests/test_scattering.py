import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavity_cpf import (
    REFERENCE_PARAMS,
    PhysicalParams,
    ScatteringProfile,
    analytic_reflection,
    evolve,
    extract_reflection,
    make_grid,
    phase_profile,
    scattering_profile,
    simulate,
    spectral_amplitudes,
)
from cavity_cpf.scattering import valid_mask
from cavity_cpf.errors import DomainError


def test_cavity_off_gives_free_propagation(ref_pulse, ref_grid, ref_c0):
    run = simulate(REFERENCE_PARAMS.replace(kappa=0.0), ref_pulse, ref_grid)
    prof = run.phase_profile()
    assert np.all(prof.dtheta0 == 0)
    r = extract_reflection(run.uncoupled, ref_c0, ref_grid, ref_pulse.duration)
    mask = valid_mask(ref_c0)
    np.testing.assert_allclose(r[mask], 1, atol=1e-12)


def test_phase_profile_invariants(ref_run):
    prof = ref_run.phase_profile()
    assert prof.weights.sum() == pytest.approx(1, abs=1e-12)
    for d in (prof.dtheta0, prof.dtheta1):
        assert np.all(d > -np.pi) and np.all(d <= np.pi)


def test_analytic_examples():
    assert analytic_reflection(0.0, REFERENCE_PARAMS, coupled=False) == -1
    g, k, gam = REFERENCE_PARAMS.g, REFERENCE_PARAMS.kappa, REFERENCE_PARAMS.gamma
    r1 = analytic_reflection(0.0, REFERENCE_PARAMS, coupled=True)
    assert r1 == pytest.approx(1 - k / (k / 2 + 2 * g * g / gam), abs=1e-15)
    assert abs(1 - r1.real) == pytest.approx(1.6e-8, rel=1e-3)


@settings(max_examples=60, deadline=None)
@given(
    omega=st.floats(-1e9, 1e9),
    g=st.floats(0, 1e10),
    kappa=st.floats(1e3, 1e9),
    delta=st.floats(-1e8, 1e8),
    coupled=st.booleans(),
)
def test_lossless_reflection_is_unimodular(omega, g, kappa, delta, coupled):
    params = PhysicalParams(g=g, kappa=kappa, gamma=0.0, delta=delta)
    r = analytic_reflection(omega, params, coupled)
    if np.isfinite(r):
        assert abs(r) == pytest.approx(1, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(omega=st.floats(-1e8, 1e8), gamma=st.floats(0, 1e8))
def test_analytic_passivity(omega, gamma):
    r = analytic_reflection(omega, REFERENCE_PARAMS.replace(gamma=gamma), True)
    assert abs(r) <= 1 + 1e-9


def test_band_shift_validation(ref_grid):
    with pytest.raises(DomainError):
        analytic_reflection(2e7, REFERENCE_PARAMS, False, bandwidth=1e7)
    # shift vanishes at band centre and for a huge band
    assert analytic_reflection(0.0, REFERENCE_PARAMS, False, bandwidth=1e7) == -1
    w = np.linspace(-1e6, 1e6, 5)
    np.testing.assert_allclose(
        analytic_reflection(w, REFERENCE_PARAMS, False, bandwidth=1e16),
        analytic_reflection(w, REFERENCE_PARAMS, False),
        atol=1e-9,
    )


def test_extracted_passivity(ref_run):
    prof = ref_run.scattering_profile()
    m = prof.valid_mask
    excess = max(np.max(np.abs(prof.r0[m])), np.max(np.abs(prof.r1[m]))) - 1
    assert excess <= 1e-6, f"extracted |r| exceeds 1 by {excess:.3g}"
    assert np.all(prof.r0[~m] == 0)


def test_near_resonance_reflection(ref_run):
    prof = ref_run.scattering_profile()
    k = np.argmin(np.abs(prof.omegas))
    assert abs(abs(prof.r0[k]) - 1) <= 0.02
    assert abs(abs(np.angle(prof.r0[k])) - np.pi) <= 0.02
    # conditional phase: pi for |0>, 0 for |1>
    assert abs(np.angle(prof.r1[k])) <= 0.02


def test_masking(ref_pulse, ref_grid, ref_c0):
    mask = valid_mask(ref_c0)
    w = ref_c0.weights
    np.testing.assert_array_equal(mask, w >= 1e-6 * w.max())
    assert not mask.all()


def test_all_masked_is_error(ref_pulse, ref_grid, ref_run):
    c0 = spectral_amplitudes(ref_pulse, ref_grid)
    object.__setattr__(c0, "values", np.zeros_like(c0.values))
    with pytest.raises(DomainError, match="masked"):
        extract_reflection(ref_run.uncoupled, c0, ref_grid, ref_pulse.duration)


def test_mismatched_inputs_rejected(ref_pulse, ref_grid, ref_c0, ref_run):
    other = make_grid(ref_grid.omega_b, ref_grid.n_modes - 2)
    with pytest.raises(DomainError):
        phase_profile(ref_run.uncoupled, ref_run.coupled, ref_c0, other, ref_pulse.duration)
    with pytest.raises(DomainError):
        scattering_profile(ref_run.uncoupled, ref_run.coupled, ref_c0, ref_grid, 2e-6)


def test_ideal_profile():
    grid = make_grid(1e7, 6)
    prof = ScatteringProfile.ideal(grid)
    assert np.all(prof.r0 == -1) and np.all(prof.r1 == 1) and prof.valid_mask.all()


def test_extraction_after_cavity_empties(ref_pulse, ref_grid, ref_c0):
    # reading the modes once the cavity has emptied, extraction matches the
    # finite-band input-output result
    horizon = 4e-6
    band = ref_grid.omega_b + ref_grid.delta_omega / 2
    sigma = ref_pulse.sigma_omega
    sel = valid_mask(ref_c0) & (np.abs(ref_grid.omegas) <= 3 * sigma)
    for branch, coupled in (("uncoupled", False), ("coupled", True)):
        rep = evolve(ref_c0, REFERENCE_PARAMS, ref_grid, ref_pulse, branch, horizon=horizon)
        r = extract_reflection(rep, ref_c0, ref_grid, horizon)
        ref = analytic_reflection(ref_grid.omegas, REFERENCE_PARAMS, coupled, bandwidth=band)
        assert np.max(np.abs(r - ref)[sel]) <= 1e-2


@pytest.mark.slow
def test_extraction_on_wide_grid_matches_infinite_band(ref_pulse):
    grid = make_grid(1e9, 9550)
    c0 = spectral_amplitudes(ref_pulse, grid)
    horizon = 4e-6
    sel = valid_mask(c0) & (np.abs(grid.omegas) <= 3 * ref_pulse.sigma_omega)
    rep = evolve(c0, REFERENCE_PARAMS, grid, ref_pulse, "uncoupled", horizon=horizon)
    r = extract_reflection(rep, c0, grid, horizon)
    ref = analytic_reflection(grid.omegas, REFERENCE_PARAMS, False)
    assert np.max(np.abs(r - ref)[sel]) <= 1e-2

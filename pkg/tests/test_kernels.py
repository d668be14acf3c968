"""Compiled extension against the numpy fallback."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

import oracles
from dotcavity import _kernels, hilbert
from dotcavity._kernels import fallback
from dotcavity.dynamics import build_plan, integrate, pump_profile
from dotcavity.model import PulseParams, SystemParams

needs_extension = pytest.mark.skipif(
    not _kernels.COMPILED, reason="compiled extension not built")


def test_backend_string_matches_flag():
    assert _kernels.backend() == ("compiled" if _kernels.COMPILED else "python")


@needs_extension
def test_rhs_backends_agree():
    space = hilbert.make_space(4)
    params = SystemParams(g_over_2pi=10.0, forster_over_2pi=15.0,
                          kappa_over_2pi=5.0, gamma_over_2pi=0.5,
                          pc_over_2pi=0.8,
                          pulse=PulseParams(p0_over_2pi=1.5, tau_p=20.0, t0=60.0))
    fast = build_plan(space, params, force_python=False)
    slow = build_plan(space, params, force_python=True)
    rng = np.random.default_rng(13)
    for t in (0.0, 40.0, 60.0):
        px = float(pump_profile(params.pulse, t))
        rho = oracles.random_density_matrix(rng, space.dim)
        out_fast = fast.apply(rho, px)
        out_slow = slow.apply(rho, px)
        scale = np.max(np.abs(out_slow))
        assert np.max(np.abs(out_fast - out_slow)) < 1e-14 * scale


@needs_extension
def test_entropy_grid_backends_agree():
    rng = np.random.default_rng(17)
    thetas = np.linspace(0.0, np.pi, 32)
    phis = np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False)
    for _ in range(10):
        rho = oracles.random_density_matrix(rng, 4)
        grid_fast = _kernels.conditional_entropy_grid(rho, thetas, phis)
        grid_slow = fallback.conditional_entropy_grid(rho, thetas, phis)
        assert grid_fast.shape == grid_slow.shape == (32, 64)
        assert_allclose(grid_fast, grid_slow, atol=1e-12)


@needs_extension
def test_entropy_point_backends_agree():
    rng = np.random.default_rng(29)
    for _ in range(20):
        rho = oracles.random_density_matrix(rng, 4)
        theta = rng.uniform(0.0, np.pi)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        fast = _kernels.conditional_entropy_point(rho, theta, phi)
        slow = fallback.conditional_entropy_point(rho, theta, phi)
        assert fast == pytest.approx(slow, abs=1e-12)


def test_point_consistent_with_grid():
    rng = np.random.default_rng(57)
    rho = oracles.random_density_matrix(rng, 4)
    thetas = np.linspace(0.0, np.pi, 8)
    phis = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
    grid = _kernels.conditional_entropy_grid(rho, thetas, phis)
    for i in (0, 3, 7):
        for j in (0, 4):
            point = _kernels.conditional_entropy_point(rho, thetas[i], phis[j])
            assert point == pytest.approx(grid[i, j], abs=1e-13)


@needs_extension
def test_integration_identical_across_backends():
    space = hilbert.make_space(3)
    params = SystemParams(g_over_2pi=10.0, forster_over_2pi=15.0,
                          kappa_over_2pi=5.0, gamma_over_2pi=0.025)
    psi = space.basis_state(1, 0, 0)
    rho0 = np.outer(psi, psi.conj())
    fast = integrate(space, params, rho0, (0.0, 40.0), 0.5)
    slow = integrate(space, params, rho0, (0.0, 40.0), 0.5,
                     force_python_kernels=True)
    assert np.max(np.abs(fast.states - slow.states)) < 1e-9

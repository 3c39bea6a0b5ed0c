"""Objective, gradient, and ascent search for the restriction ratio."""

import numpy as np
import pytest

from sharpsphere import (
    SHARP_CONSTANT,
    HarmonicCoeffs,
    SphereFunction,
    constancy_metric,
    gradient,
    initial_coeffs,
    make_workspace,
    n_coeffs,
    objective_phi,
    quadrilinear_q,
    search,
)
from sharpsphere.maximizer import Workspace

PI = np.pi

# Strict local maximum of pure odd parity inside the odd invariant subspace;
# the zonal start omega_z ascends to it and stalls there.
ODD_PLATEAU = 6.016434493903391
PHI_ZONAL = 6.015194709883384


def constant_coeffs(L=8, value=1.0):
    c = np.zeros(n_coeffs(L))
    c[0] = value * np.sqrt(4 * PI)
    return HarmonicCoeffs(L, c)


class TestObjective:
    def test_constant_attains_sharp_value(self, ws8):
        phi = objective_phi(constant_coeffs(), ws8)
        assert abs(phi - SHARP_CONSTANT) <= 1e-12 * SHARP_CONSTANT

    def test_sharp_constant_is_two_pi(self):
        assert SHARP_CONSTANT == 2 * PI

    def test_zonal_anchor(self, ws8):
        z = initial_coeffs("zonal", 8, np.random.default_rng(0))
        phi = objective_phi(z, ws8)
        assert abs(phi - PHI_ZONAL) <= 1e-6
        assert SHARP_CONSTANT - phi > 0.26

    def test_scale_invariance(self, ws8):
        rng = np.random.default_rng(3)
        c = rng.standard_normal(n_coeffs(8))
        a = objective_phi(HarmonicCoeffs(8, c), ws8)
        b = objective_phi(HarmonicCoeffs(8, 7.5 * c), ws8)
        assert abs(a - b) <= 1e-12 * a

    def test_random_draws_never_exceed_sharp_constant(self, ws8):
        # The workspace rules are exact at band limit 8, so the discrete
        # objective inherits the global bound.
        rng = np.random.default_rng(99)
        for _ in range(300):
            c = HarmonicCoeffs(8, rng.standard_normal(n_coeffs(8)))
            assert objective_phi(c, ws8) <= SHARP_CONSTANT * (1 + 1e-6)

    def test_constant_is_strict_local_max(self, ws8):
        rng = np.random.default_rng(7)
        for _ in range(100):
            d = rng.standard_normal(n_coeffs(8))
            d[0] = 0.0
            d /= np.linalg.norm(d)
            c = np.zeros(n_coeffs(8))
            c[0] = 1.0
            phi = objective_phi(HarmonicCoeffs(8, c + 1e-2 * d), ws8)
            assert phi < SHARP_CONSTANT - 1e-4

    def test_matches_quadrilinear_form(self, ws8, exact_grids):
        rng = np.random.default_rng(17)
        arr = rng.standard_normal(n_coeffs(8))
        f = SphereFunction.from_coeffs(HarmonicCoeffs(8, arr))
        fs = f.antipodal_conjugate()
        q = quadrilinear_q(f, fs, f, fs, exact_grids)
        assert abs(ws8.q_value(arr) - q.real) <= 1e-10 * abs(q.real)

    def test_zero_coeffs_rejected(self, ws8):
        zero = HarmonicCoeffs(8, np.zeros(n_coeffs(8)))
        with pytest.raises(ValueError):
            objective_phi(zero, ws8)

    def test_complex_coeffs_rejected(self, ws8):
        c = np.zeros(n_coeffs(8), dtype=complex)
        c[0] = 1.0
        c[3] = 0.2j
        with pytest.raises(ValueError):
            objective_phi(HarmonicCoeffs(8, c), ws8)


class TestGradient:
    def test_vanishes_at_constant(self, ws8):
        g = gradient(constant_coeffs(), ws8)
        assert np.linalg.norm(g) <= 1e-10

    def test_matches_finite_differences(self):
        ws3 = make_workspace(3)
        rng = np.random.default_rng(23)
        c = rng.standard_normal(n_coeffs(3))
        g = gradient(HarmonicCoeffs(3, c), ws3)
        h = 1e-5
        for i in range(c.size):
            cp, cm = c.copy(), c.copy()
            cp[i] += h
            cm[i] -= h
            fd = (4 * np.log(objective_phi(HarmonicCoeffs(3, cp), ws3))
                  - 4 * np.log(objective_phi(HarmonicCoeffs(3, cm), ws3))) / (2 * h)
            assert abs(fd - g[i]) <= 1e-7

    def test_orthogonal_to_coefficients(self, ws8):
        # log Phi^4 is scale-free, so its gradient is orthogonal to the
        # radial direction (Euler's identity for the quartic form).
        rng = np.random.default_rng(11)
        for _ in range(5):
            c = rng.standard_normal(n_coeffs(8))
            g = gradient(HarmonicCoeffs(8, c), ws8)
            assert abs(g @ c) <= 1e-12

    def test_degree_minus_one_homogeneous(self, ws8):
        rng = np.random.default_rng(12)
        c = rng.standard_normal(n_coeffs(8))
        g1 = gradient(HarmonicCoeffs(8, c), ws8)
        g2 = gradient(HarmonicCoeffs(8, 2.0 * c), ws8)
        assert np.max(np.abs(g2 - 0.5 * g1)) <= 1e-14

    def test_zero_coeffs_rejected(self, ws8):
        with pytest.raises(ValueError):
            gradient(HarmonicCoeffs(8, np.zeros(n_coeffs(8))), ws8)


class TestConstancyMetric:
    def test_constant_gives_zero(self):
        assert constancy_metric(constant_coeffs(L=4)) == 0.0

    def test_pure_zonal_gives_one(self):
        z = initial_coeffs("zonal", 8, np.random.default_rng(0))
        assert constancy_metric(z) == 1.0

    def test_energy_fraction(self):
        # f = 1 + eps * omega_z splits energy 1 : eps^2/3 between degrees.
        eps = 0.37
        c = np.zeros(n_coeffs(2))
        c[0] = np.sqrt(4 * PI)
        c[2] = eps * np.sqrt(4 * PI / 3)
        expect = (eps**2 / 3) / (1 + eps**2 / 3)
        got = constancy_metric(HarmonicCoeffs(2, c))
        assert abs(got - expect) <= 1e-12 * expect

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            constancy_metric(HarmonicCoeffs(2, np.zeros(n_coeffs(2))))


class TestInitialCoeffs:
    def test_random_balances_mean(self):
        c = initial_coeffs("random", 8, np.random.default_rng(5)).coeffs
        assert abs(c[0]) == pytest.approx(np.linalg.norm(c[1:]), rel=1e-12)

    def test_perturbed_constant_shape(self):
        c = initial_coeffs("perturbed-constant", 8, np.random.default_rng(5)).coeffs
        assert c[0] == 1.0
        assert np.linalg.norm(c[1:]) == pytest.approx(0.1, rel=1e-12)

    def test_zonal_is_single_slot(self):
        c = initial_coeffs("zonal", 6, np.random.default_rng(5)).coeffs
        assert c[2] == 1.0
        mask = np.ones(c.size, dtype=bool)
        mask[2] = False
        assert not np.any(c[mask])

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            initial_coeffs("antipodal", 8, np.random.default_rng(5))

    def test_zonal_needs_degree_one(self):
        with pytest.raises(ValueError):
            initial_coeffs("zonal", 0, np.random.default_rng(5))


class TestSearch:
    def test_constant_converges_immediately(self, ws8):
        result = search(constant_coeffs(), workspace=ws8)
        assert result.converged
        assert result.reason == "gradient norm below tolerance"
        assert result.final.iteration == 0
        assert abs(result.final.objective - SHARP_CONSTANT) <= 1e-10

    def test_perturbed_constant_reaches_sharp_value(self, ws8):
        init = initial_coeffs("perturbed-constant", 8, np.random.default_rng(42))
        result = search(init, workspace=ws8)
        assert abs(result.final.objective - SHARP_CONSTANT) <= 1e-4
        assert result.final.constancy_defect < 1e-3
        assert result.converged or result.reason == "line search stalled"

    def test_zonal_start_stalls_on_odd_plateau(self, ws8):
        init = initial_coeffs("zonal", 8, np.random.default_rng(0))
        result = search(init, workspace=ws8)
        assert not result.converged
        assert result.reason == "line search stalled"
        # Odd coefficients span an invariant subspace: no constant component
        # ever appears, and the run tops out strictly below the sharp value.
        assert result.final.constancy_defect > 0.999
        assert abs(result.final.objective - ODD_PLATEAU) <= 1e-3
        objectives = [s.objective for s in result.states]
        assert all(b > a for a, b in zip(objectives, objectives[1:]))
        assert max(objectives) <= SHARP_CONSTANT * (1 + 1e-6)

    def test_random_starts_reach_sharp_value(self, ws8):
        for seed in range(3):
            init = initial_coeffs("random", 8, np.random.default_rng(seed))
            result = search(init, workspace=ws8)
            assert abs(result.final.objective - SHARP_CONSTANT) <= 1e-4
            assert result.final.constancy_defect < 1e-3

    def test_trace_invariants(self, ws8):
        init = initial_coeffs("perturbed-constant", 8, np.random.default_rng(9))
        result = search(init, workspace=ws8)
        for i, state in enumerate(result.states):
            assert state.iteration == i
            assert abs(state.coeffs.norm_sq() - 1.0) <= 1e-12
            assert 0.0 < state.step_size <= 0.1
            assert state.gradient_norm >= 0.0

    def test_iteration_limit(self, ws8):
        init = initial_coeffs("zonal", 8, np.random.default_rng(0))
        result = search(init, max_iter=5, workspace=ws8)
        assert not result.converged
        assert result.reason == "iteration limit reached"
        assert len(result.states) == 6

    def test_rng_argument_accepted(self, ws8):
        result = search(constant_coeffs(), workspace=ws8,
                        rng=np.random.default_rng(1))
        assert result.converged

    def test_zero_init_rejected(self, ws8):
        with pytest.raises(ValueError):
            search(HarmonicCoeffs(8, np.zeros(n_coeffs(8))), workspace=ws8)

    def test_complex_init_rejected(self, ws8):
        c = np.zeros(n_coeffs(8), dtype=complex)
        c[0] = 1.0 + 0.5j
        with pytest.raises(ValueError):
            search(HarmonicCoeffs(8, c), workspace=ws8)


class TestWorkspace:
    def test_cached_by_band_limit(self):
        assert make_workspace(4) is make_workspace(4)

    def test_negative_band_limit_rejected(self):
        with pytest.raises(ValueError):
            Workspace(-1)

from __future__ import annotations

import json

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from qincompat import estimation, linalg
from qincompat.errors import DomainError, PureStateSingular, TruncationError
from qincompat.gaussian import (GaussianParams, GaussianState, ai_gaussian,
                                evolve_lossy, excitation_parametrization,
                                fock_model, freq_loss_model, gaussian_qfim,
                                gaussian_report, gaussian_uhlmann,
                                lossy_moment_rhs, moments, purity_of,
                                qfim_closed, state_family, to_fock,
                                uhlmann_closed)

GRID = [(r, phi, n) for r in (0.0, 0.2, 0.5)
        for phi in (0.0, np.pi / 3, np.pi / 2)
        for n in (0.1, 0.5, 1.0)]


class TestMoments:
    def test_near_vacuum(self):
        s = moments(GaussianParams(0, 0, 0, 0, 1e-12))
        assert np.abs(s.d).max() == 0.0
        assert np.abs(s.sigma - np.eye(2)).max() <= 3e-12

    def test_thermal(self):
        s = moments(GaussianParams(0, 0, 0, 0, 0.5))
        assert np.allclose(s.sigma, 2.0 * np.eye(2))
        assert s.purity == pytest.approx(0.5, abs=1e-14)

    def test_squeezed_pure(self):
        s = moments(GaussianParams(0, 0, 0.3, np.pi / 2, 0))
        assert s.sigma[0, 1] == pytest.approx(-np.sinh(0.6), abs=1e-14)
        assert s.sigma[0, 0] == pytest.approx(np.cosh(0.6), abs=1e-14)
        assert abs(s.sigma[0, 0] - s.sigma[1, 1]) <= 1e-14

    def test_displacement(self):
        s = moments(GaussianParams(0.3, -0.2, 0, 0, 0.1))
        assert np.allclose(s.d, [np.sqrt(2) * 0.3, -np.sqrt(2) * 0.2])


class TestClosedFormsVsFiniteDifference:
    @pytest.mark.parametrize("r,phi,n", GRID)
    def test_qfim_entries(self, r, phi, n):
        params = GaussianParams(0.2, -0.1, r, phi, n)
        q_fd = gaussian_qfim(state_family("polar"), params.vector(), h=1e-6)
        assert np.abs(q_fd - qfim_closed(params)).max() <= 1e-6

    @pytest.mark.parametrize("r,phi,n", GRID)
    def test_uhlmann_entries(self, r, phi, n):
        params = GaussianParams(0.2, -0.1, r, phi, n)
        u_fd = gaussian_uhlmann(state_family("polar"), params.vector(), h=1e-6)
        assert np.abs(u_fd - uhlmann_closed(params)).max() <= 1e-6

    def test_entries_independent_of_displacement(self):
        a = GaussianParams(0.0, 0.0, 0.3, 0.5, 0.4)
        b = GaussianParams(1.2, -0.7, 0.3, 0.5, 0.4)
        fn = state_family("polar")
        assert np.abs(gaussian_qfim(fn, a.vector()) - gaussian_qfim(fn, b.vector())).max() <= 1e-7
        assert np.abs(gaussian_uhlmann(fn, a.vector()) - gaussian_uhlmann(fn, b.vector())).max() <= 1e-7

    def test_qfim_block_diagonal(self):
        q = qfim_closed(GaussianParams(0.2, 0.1, 0.4, 0.7, 0.5))
        assert np.abs(q[:2, 2:]).max() == 0.0
        # squeezing/thermal block is exactly diagonal
        assert abs(q[2, 3]) + abs(q[2, 4]) + abs(q[3, 4]) == 0.0

    def test_pure_state_raises(self):
        with pytest.raises(PureStateSingular):
            qfim_closed(GaussianParams(0, 0, 0.2, 0.0, 0.0))


class TestSpectrumAndAi:
    @pytest.mark.parametrize("n", [0.1, 0.5, 1.0])
    def test_spectrum_closed_form(self, n):
        mu = 1.0 / (2.0 * n + 1.0)
        rep = gaussian_report(GaussianParams(0.1, 0.2, 0.3, 0.4, n))
        expected = np.sort([2 * mu / (1 + mu * mu), mu, 0.0,
                            -mu, -2 * mu / (1 + mu * mu)])[::-1]
        assert np.abs(rep.i_spectrum - expected).max() <= 1e-10
        assert rep.r == pytest.approx(2 * mu / (1 + mu * mu), abs=1e-10)
        assert rep.delta == 2 and rep.compat_bound == 3

    def test_cartesian_chart_agrees_and_covers_zero_squeezing(self):
        lam_polar = np.array([0.1, 0.2, 0.4, 1.1, 0.5])
        q1 = gaussian_qfim(state_family("polar"), lam_polar)
        u1 = gaussian_uhlmann(state_family("polar"), lam_polar)
        lam_cart = np.array([0.1, 0.2, 0.4 * np.cos(1.1), 0.4 * np.sin(1.1), 0.5])
        q2 = gaussian_qfim(state_family("cartesian"), lam_cart)
        u2 = gaussian_uhlmann(state_family("cartesian"), lam_cart)
        r1 = estimation.ai_measure(q1, u1)
        r2 = estimation.ai_measure(q2, u2)
        assert r1 == pytest.approx(r2, abs=1e-9)
        # polar chart degenerates at r = 0, the cartesian one does not
        lam0 = np.array([0.1, 0.2, 0.0, 0.0, 0.5])
        q0 = gaussian_qfim(state_family("cartesian"), lam0)
        u0 = gaussian_uhlmann(state_family("cartesian"), lam0)
        mu = 0.5
        assert estimation.ai_measure(q0, u0) == pytest.approx(
            2 * mu / (1 + mu * mu), abs=1e-8)

    def test_ai_gaussian_examples(self):
        assert ai_gaussian(1.0) == 1.0
        assert ai_gaussian(0.5) == pytest.approx(0.8)
        assert ai_gaussian(1e-9) < 3e-9
        with pytest.raises(DomainError):
            ai_gaussian(0.0)


class TestEvolveLossy:
    def test_long_time_vacuum(self):
        s0 = moments(GaussianParams(1.0, -2.0, 0.6, 0.3, 0.7))
        s = evolve_lossy(s0, omega=2.0, gamma=1.0, t=80.0)
        assert np.abs(s.d).max() <= 1e-12
        assert np.abs(s.sigma - np.eye(2)).max() <= 1e-12
        assert s.purity == pytest.approx(1.0, abs=1e-12)

    def test_coherent_stays_pure(self):
        s0 = moments(GaussianParams(2.0, 0.0, 0.0, 0.0, 0.0))
        for t in (0.0, 0.3, 1.7, 6.0):
            assert evolve_lossy(s0, 1.0, 1.0, t).purity == pytest.approx(1.0, abs=1e-12)

    def test_squeezed_half_decay_purity(self):
        # sinh^2 r = 4 gives sigma trace 2 * 9; at e^{-gamma t} = 1/2 the
        # covariance determinant is 5
        r = np.arcsinh(2.0)
        s0 = moments(GaussianParams(0, 0, r, 0, 0))
        assert s0.sigma.trace() == pytest.approx(18.0, abs=1e-12)
        s = evolve_lossy(s0, omega=1.0, gamma=1.0, t=np.log(2.0))
        assert np.linalg.det(s.sigma) == pytest.approx(5.0, abs=1e-12)
        assert s.purity == pytest.approx(1 / np.sqrt(5.0), abs=1e-12)

    def test_negative_rate_rejected(self):
        s0 = moments(GaussianParams(0, 0, 0, 0, 0.1))
        with pytest.raises(DomainError):
            evolve_lossy(s0, 1.0, -0.5, 1.0)

    def test_matches_ode_integration(self):
        params = excitation_parametrization(4.0, 0.7)
        s0 = moments(params)
        omega, gamma = 1.3, 0.8
        y0 = np.array([s0.d[0], s0.d[1], s0.sigma[0, 0], s0.sigma[0, 1], s0.sigma[1, 1]])
        times = np.linspace(0.1, 5.0, 12)
        sol = solve_ivp(lossy_moment_rhs(omega, gamma), (0.0, 5.0), y0,
                        t_eval=times, rtol=1e-11, atol=1e-13)
        for k, t in enumerate(times):
            s = evolve_lossy(s0, omega, gamma, float(t))
            y = sol.y[:, k]
            assert np.abs(s.d - y[:2]).max() <= 1e-7
            sigma_ode = np.array([[y[2], y[3]], [y[3], y[4]]])
            assert np.abs(s.sigma - sigma_ode).max() <= 1e-7
            mu_ode = 1.0 / np.sqrt(np.linalg.det(sigma_ode))
            assert abs(s.purity - mu_ode) <= 1e-6

    def test_physicality_preserved(self):
        s0 = moments(GaussianParams(0.5, 0.5, 1.0, 0.9, 0.0))
        for t in np.linspace(0.0, 6.0, 25):
            assert evolve_lossy(s0, 2.0, 0.7, float(t)).physicality_margin() >= -1e-10


class TestFreqLossModel:
    def test_bounded_by_full_model(self):
        params = excitation_parametrization(4.0, 1.0)
        s0 = moments(params)
        for t in (0.2, 0.7, 1.5, 3.0):
            rep = freq_loss_model(params, 1.0, 1.0, t)
            mu = evolve_lossy(s0, 1.0, 1.0, t).purity
            assert rep.r <= ai_gaussian(mu) + 1e-8
            assert rep.q.shape == (2, 2)

    def test_coherent_initial_state_displacement_only(self):
        # sigma stays the identity, so all information sits in the moments
        params = excitation_parametrization(4.0, 0.0)
        rep = freq_loss_model(params, 1.0, 1.0, 0.8)
        t, e = 0.8, np.exp(-0.8)
        expected_u = 2.0 * (-0.5 * t * t * e) * 8.0  # d0 = (sqrt(8), 0)
        assert rep.u[0, 1] == pytest.approx(expected_u, rel=1e-4)
        assert 0.0 < rep.r <= 1.0 + 1e-9

    def test_singular_at_t_zero(self):
        params = excitation_parametrization(4.0, 0.5)
        with pytest.raises(estimation.SingularQfim):
            freq_loss_model(params, 1.0, 1.0, 0.0)

    def test_full_model_ai_dips_and_recovers(self):
        # pure squeezed input: purity drops under loss, then returns to 1 at
        # the vacuum steady state, so the full-model AI dips and recovers;
        # the two-parameter AI decays at late times, the opposite trend
        params = excitation_parametrization(4.0, 1.0)
        s0 = moments(params)

        def r5(t):
            return ai_gaussian(evolve_lossy(s0, 1.0, 1.0, t).purity)

        t_dip = np.log(2.0)
        assert r5(0.05) > r5(t_dip) < r5(5.0)
        assert r5(8.0) > 0.99
        late = [freq_loss_model(params, 1.0, 1.0, t).r for t in (1.5, 2.5, 3.5, 5.0)]
        assert np.all(np.diff(late) < 0)
        assert r5(5.0) - late[-1] > 0.5


class TestExcitationParametrization:
    def test_coherent(self):
        p = excitation_parametrization(3.0, 0.0)
        assert p.r == 0.0 and p.n_thermal == 0.0
        assert p.re_alpha == pytest.approx(np.sqrt(3.0))

    def test_squeezed_only(self):
        p = excitation_parametrization(4.0, 1.0)
        assert p.re_alpha == 0.0
        assert np.sinh(p.r) ** 2 == pytest.approx(4.0, abs=1e-12)

    def test_vacuum(self):
        p = excitation_parametrization(0.0, 0.3)
        assert p.re_alpha == 0.0 and p.r == 0.0

    def test_validation(self):
        with pytest.raises(DomainError):
            excitation_parametrization(-1.0, 0.5)
        with pytest.raises(DomainError):
            excitation_parametrization(1.0, 1.5)


class TestFockBridge:
    def test_thermal_weights_geometric(self):
        n = 0.2
        rho = to_fock(GaussianParams(0, 0, 0, 0, n), n_max=40)
        q = n / (n + 1)
        expected = (1 - q) * q ** np.arange(41)
        expected /= expected.sum()
        assert np.abs(np.diag(rho).real - expected).max() <= 1e-12
        off = rho - np.diag(np.diag(rho))
        assert np.abs(off).max() <= 1e-12

    @pytest.mark.parametrize("params", [
        GaussianParams(0, 0, 0, 0, 0.3),
        GaussianParams(0.4, -0.3, 0.25, 0.9, 0.2),
    ])
    def test_purity_two_routes(self, params):
        rho = to_fock(params, n_max=60)
        assert linalg.purity(rho) == pytest.approx(purity_of(params), abs=1e-6)

    def test_truncation_error(self):
        with pytest.raises(TruncationError):
            to_fock(GaussianParams(0, 0, 0, 0, 3.0), n_max=5)

    def test_adaptive_cutoff(self):
        rho = to_fock(GaussianParams(0.5, 0.0, 0.3, 0.0, 0.4))
        assert abs(np.trace(rho).real - 1.0) <= 1e-12
        assert rho.shape[0] >= 20

    def test_pipeline_reproduces_closed_form_ai(self):
        params = GaussianParams(0, 0, 0.3, 0.0, 0.5)
        model = fock_model(params, n_max=60, chart="cartesian")
        rep = estimation.model_report(model.rho(), model.derivs(), support_tol=1e-12)
        mu = purity_of(params)
        assert abs(rep.r - ai_gaussian(mu)) <= 1e-4
        # displacement-pair curvature entry fixes the overall normalization
        assert rep.u[0, 1] == pytest.approx(4.0 * mu * mu, abs=1e-4)

    def test_polar_and_cartesian_charts_agree(self):
        params = GaussianParams(0, 0, 0.3, 0.0, 0.5)
        reps = []
        for chart in ("cartesian", "polar"):
            model = fock_model(params, n_max=50, chart=chart)
            reps.append(estimation.model_report(model.rho(), model.derivs(),
                                                support_tol=1e-12))
        assert reps[0].r == pytest.approx(reps[1].r, abs=1e-6)

    def test_moment_level_curvature_normalization(self):
        # the finite-difference moment formula must reproduce 4 mu^2 for the
        # displacement pair, consistent with the density-matrix pipeline
        params = GaussianParams(0.1, 0.2, 0.3, 0.4, 0.5)
        mu = purity_of(params)
        u_fd = gaussian_uhlmann(state_family("polar"), params.vector())
        assert u_fd[0, 1] == pytest.approx(4.0 * mu * mu, abs=1e-8)
        assert uhlmann_closed(params)[0, 1] == 4.0 * mu * mu


class TestGaussianStateType:
    def test_json(self):
        s = moments(GaussianParams(0.3, 0.0, 0.0, 0.0, 0.5))
        doc = json.loads(s.to_json())
        assert set(doc) == {"d", "sigma"}
        assert np.allclose(doc["sigma"], s.sigma)

    def test_symmetry_validation(self):
        with pytest.raises(DomainError):
            GaussianState(d=np.zeros(2), sigma=np.array([[1.0, 0.5], [0.2, 1.0]]))

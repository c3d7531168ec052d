from __future__ import annotations

import numpy as np
import pytest

from conftest import random_density
from qincompat import estimation, linalg
from qincompat.errors import (DegenerateChart, DomainError, NumericalOverflow)
from qincompat.models import (GibbsSpec, bloch_chart_jacobian, bloch_qubit,
                              finite_diff_derivs, from_spectrum_unitary,
                              gibbs_model, mixture_coordinates, qudit_mixture)


def qubit_reference_q(r, theta):
    return np.diag([1.0 / (1.0 - r * r), r * r, r * r * np.sin(theta) ** 2])


def qubit_reference_u(r, theta):
    u = np.zeros((3, 3))
    u[1, 2] = r ** 3 * np.sin(theta)
    u[2, 1] = -u[1, 2]
    return u


class TestBlochQubit:
    def test_state_direct_substitution(self):
        model = bloch_qubit(0.5, np.pi / 2, 0.0)
        expected = 0.5 * (np.eye(2) + 0.5 * linalg.SIGMA_X)
        assert np.abs(model.rho() - expected).max() <= 1e-15

    @pytest.mark.parametrize("r,theta,phi", [
        (0.5, np.pi / 2, 0.0), (0.8, np.pi / 3, 1.0), (0.2, 1.1, 4.5)])
    def test_qfim_and_uhlmann_reference(self, r, theta, phi):
        model = bloch_qubit(r, theta, phi)
        rep = model.report()
        assert np.abs(rep.q - qubit_reference_q(r, theta)).max() <= 1e-9
        assert np.abs(rep.u - qubit_reference_u(r, theta)).max() <= 1e-9

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bloch_qubit(0.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            bloch_qubit(1.0, 1.0, 0.0)
        with pytest.raises(DegenerateChart):
            bloch_qubit(0.5, 0.0, 0.0)
        with pytest.raises(DegenerateChart):
            bloch_qubit(0.5, np.pi, 0.0)

    def test_finite_diff_matches_analytic(self):
        model = bloch_qubit(0.6, 1.2, 0.7)
        fd = finite_diff_derivs(model.eval_rho, model.lam0, h=1e-5)
        assert np.abs(fd - model.derivs()).max() <= 1e-8


class TestQuditMixture:
    def test_zero_is_maximally_mixed(self):
        basis = linalg.gellmann_basis(3)
        model = qudit_mixture(np.zeros(8), basis)
        assert np.abs(model.rho() - np.eye(3) / 3).max() <= 1e-15

    def test_derivatives_constant_traceless(self):
        basis = linalg.gellmann_basis(3)
        model = qudit_mixture(np.zeros(8), basis)
        derivs = model.derivs()
        assert np.allclose(derivs, basis.matrices / 3)
        assert np.abs(np.trace(derivs, axis1=1, axis2=2)).max() <= 1e-14

    def test_rejects_nonpositive_state(self):
        basis = linalg.gellmann_basis(2)
        with pytest.raises(DomainError):
            qudit_mixture(np.array([0.0, 0.0, 1.5]), basis)

    def test_d2_same_ai_as_bloch_chart(self):
        basis = linalg.gellmann_basis(2)
        r = 0.5
        rep_mix = qudit_mixture(np.array([0.0, 0.0, r]), basis).report()
        rep_bloch = bloch_qubit(r, np.pi / 3, 1.0).report()
        assert rep_mix.r == pytest.approx(rep_bloch.r, abs=1e-10)
        assert rep_mix.r == pytest.approx(r, abs=1e-10)

    def test_d2_chart_map_reproduces_bloch_matrices(self):
        basis = linalg.gellmann_basis(2)
        r, theta, phi = 0.55, 1.05, 2.2
        gamma = np.array([r * np.sin(theta) * np.cos(phi),
                          r * np.sin(theta) * np.sin(phi),
                          r * np.cos(theta)])
        rep = qudit_mixture(gamma, basis).report()
        b = bloch_chart_jacobian(r, theta, phi)
        q2, u2 = estimation.reparametrize(rep.q, rep.u, b)
        assert np.abs(q2 - qubit_reference_q(r, theta)).max() <= 1e-9
        assert np.abs(u2 - qubit_reference_u(r, theta)).max() <= 1e-9

    def test_mixture_coordinates_roundtrip(self):
        basis = linalg.gellmann_basis(3)
        rho = random_density(3, seed=12)
        gamma = mixture_coordinates(rho, basis)
        model = qudit_mixture(gamma, basis)
        assert np.abs(model.rho() - rho).max() <= 1e-12


class TestGibbsModel:
    def test_zero_coordinates_maximally_mixed(self):
        basis = linalg.gellmann_basis(3)
        model = gibbs_model(GibbsSpec(beta=1.0, lam=np.zeros(8), basis=basis))
        rho = model.rho()
        assert np.abs(rho - np.eye(3) / 3).max() <= 1e-14
        assert linalg.purity(rho) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_qubit_diagonal_purity(self):
        basis = linalg.gellmann_basis(2)
        beta, lam3 = 1.7, 0.4
        model = gibbs_model(GibbsSpec(beta=beta, lam=np.array([0, 0, lam3]), basis=basis))
        mu = linalg.purity(model.rho())
        delta_m = 2.0 * abs(lam3)
        assert mu == pytest.approx(0.5 * (1 + np.tanh(0.5 * beta * delta_m) ** 2), abs=1e-12)

    def test_small_beta_ai_vanishes(self):
        basis = linalg.gellmann_basis(2)
        model = gibbs_model(GibbsSpec(beta=1e-3, lam=np.array([0.3, 0.1, 0.5]), basis=basis))
        assert model.report().r < 2e-3

    def test_overflow(self):
        basis = linalg.gellmann_basis(2)
        model = gibbs_model(GibbsSpec(beta=1e4, lam=np.array([0.0, 0.0, 0.5]), basis=basis))
        with pytest.raises(NumericalOverflow):
            model.rho()

    def test_spec_validation(self):
        basis = linalg.gellmann_basis(2)
        with pytest.raises(DomainError):
            GibbsSpec(beta=1.0, lam=np.array([0.0, 0.0, 1.5]), basis=basis)
        with pytest.raises(DomainError):
            GibbsSpec(beta=-1.0, lam=np.zeros(3), basis=basis)

    def test_qfim_symmetric(self):
        basis = linalg.gellmann_basis(3)
        rng = np.random.default_rng(8)
        spec = GibbsSpec(beta=0.9, lam=rng.uniform(-0.8, 0.8, size=8), basis=basis)
        model = gibbs_model(spec)
        slds = estimation.sld_set(model.rho(), model.derivs())
        q = estimation.qfim(model.rho(), slds)
        assert np.abs(q - q.T).max() <= 1e-7


class TestFromSpectrumUnitary:
    def test_uniform_spectrum(self):
        rho, bdm = from_spectrum_unitary(np.full(4, 0.25), np.eye(4))
        assert bdm == 0.0
        assert np.abs(rho - np.eye(4) / 4).max() <= 1e-15

    def test_log_ratio(self):
        _, bdm = from_spectrum_unitary(np.array([0.5, 0.3, 0.2]), np.eye(3))
        assert bdm == pytest.approx(np.log(2.5), abs=1e-15)

    def test_purity_unitary_invariant(self):
        x = np.array([0.5, 0.3, 0.2])
        rng = np.random.default_rng(4)
        z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        q, r = np.linalg.qr(z)
        u = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        rho, _ = from_spectrum_unitary(x, u)
        assert linalg.purity(rho) == pytest.approx(float(np.sum(x * x)), abs=1e-12)

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            from_spectrum_unitary(np.array([0.5, 0.5, 0.0]), np.eye(3))
        with pytest.raises(DomainError):
            from_spectrum_unitary(np.array([0.6, 0.3]), np.eye(2) * 2.0)


class TestFiniteDiffDerivs:
    def test_constant_family(self):
        rho = np.eye(3, dtype=complex) / 3
        derivs = finite_diff_derivs(lambda lam: rho, np.zeros(2), h=1e-5)
        assert np.abs(derivs).max() <= 1e-12

    def test_trace_projection_exact(self):
        basis = linalg.gellmann_basis(3)
        model = gibbs_model(GibbsSpec(beta=1.0, lam=np.full(8, 0.2), basis=basis))
        derivs = model.derivs()
        assert np.abs(np.trace(derivs, axis1=1, axis2=2)).max() <= 1e-15


@pytest.mark.parametrize("build", [
    lambda: bloch_qubit(0.4, 1.0, 0.3),
    lambda: qudit_mixture(np.full(8, 0.1), linalg.gellmann_basis(3)),
    lambda: gibbs_model(GibbsSpec(beta=1.0, lam=np.full(8, 0.3),
                                  basis=linalg.gellmann_basis(3))),
])
def test_model_invariants(build):
    model = build()
    rho = model.rho()
    assert abs(np.trace(rho).real - 1.0) <= 1e-12
    assert np.linalg.eigvalsh(rho)[0] > 0
    derivs = model.derivs()
    assert np.abs(np.trace(derivs, axis1=1, axis2=2)).max() <= 1e-8

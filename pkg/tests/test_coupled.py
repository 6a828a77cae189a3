import numpy as np
import pytest

from shockbeta.auxiliary import AuxMethod
from shockbeta.coupled import (
    build_folded_system,
    continuation_scan,
    initial_guess,
    solve_coupled,
)
from shockbeta.errors import ContinuationStalled
from shockbeta.integrating_factor import solve_auxiliary_if
from shockbeta.model import (
    NeutralFrequency,
    burgers_flux,
    neutral_zero,
    normalize_to_standing,
    sine_transverse_flux,
)
from shockbeta.profile import Grid, solve_profile

from conftest import exact_profile, exact_v


@pytest.fixture(scope="module")
def folded(exact_cfg, quad_flux, exact_freq):
    return build_folded_system(exact_cfg, quad_flux, exact_freq, 20.0)


class TestFoldedSystem:
    def test_equilibria_annihilate_field(self, folded, exact_cfg):
        for u in (exact_cfg.u_minus, exact_cfg.u_plus):
            F = folded.field(np.array([[u], [0.0], [0.0]]))
            assert np.max(np.abs(F)) <= 1e-12

    def test_exact_solution_satisfies_rhs_pointwise(self, folded):
        # substitute the closed-form pair into the folded field
        t = np.linspace(0.0, 1.0, 501)
        L = folded.L
        x = L * t
        u = exact_profile(x)
        v = exact_v(x)
        sech2 = 1.0 / np.cosh(x / 2.0) ** 2
        Yr = np.vstack([u, np.zeros_like(x), v])
        Yl = np.vstack([exact_profile(-x), np.zeros_like(x), exact_v(-x)])
        rhs = folded.rhs(t, np.vstack([Yr, Yl]))
        du_dt = L * (-0.5 * sech2)
        dv_dt = L * (-sech2 + x * sech2 * np.tanh(x / 2.0))
        assert np.max(np.abs(rhs[0] - du_dt)) <= 1e-12
        assert np.max(np.abs(rhs[2] - dv_dt)) <= 1e-12

    def test_linearization_has_triple_eigenvalue(self, folded, exact_cfg, quad_flux,
                                                 exact_freq):
        # complex-step differentiation of the field at the equilibria
        h = 1e-20
        for u in (exact_cfg.u_minus, exact_cfg.u_plus):
            U0 = np.array([u, 0.0, 0.0], dtype=complex)
            J = np.empty((3, 3))
            for c in range(3):
                Up = U0.copy()
                Up[c] += 1j * h

                ubar, w, v = Up
                a = quad_flux.a1(ubar) - exact_cfg.s
                du = quad_flux.f1(ubar) - exact_cfg.s * ubar - (
                    quad_flux.f1(exact_cfg.u_minus)
                    - exact_cfg.s * exact_cfg.u_minus
                )
                dw = a * w
                dv = a * v + exact_freq.tau0 * (ubar - exact_cfg.u_minus) \
                    + exact_freq.xi0 * (quad_flux.f2(ubar)
                                        - quad_flux.f2(exact_cfg.u_minus))
                J[:, c] = np.imag(np.array([du, dw, dv])) / h
            eigs = np.sort(np.linalg.eigvals(J).real)
            expected = exact_cfg.a1_shifted(u)
            assert np.max(np.abs(eigs - expected)) <= 1e-10

    def test_boundary_conditions_count_and_content(self, folded, exact_cfg):
        Ya = np.array([exact_cfg.u_mid, 0.0, 0.0, exact_cfg.u_mid, 0.0, 0.0])
        Yb = np.zeros(6)
        res = folded.bc(Ya, Yb)
        assert res.shape == (6,)
        assert np.max(np.abs(res)) == 0.0


class TestInitialGuess:
    def test_guess_quality_and_newton_count(self, folded, coupled_L20):
        mesh, Y = initial_guess(folded)
        bc_res = folded.bc(Y[:, 0], Y[:, -1])
        assert np.max(np.abs(bc_res)) <= 1e-6
        # tail of the guess reaches the attracting state
        assert abs(Y[0, -1] - (-1.0)) <= 1e-6
        # Newton never needs more than a few corrections per sweep
        assert max(coupled_L20.bvp.newton_per_sweep) <= 3

    def test_zero_frequency_guess_has_zero_correction(self, exact_cfg, quad_flux):
        sys0 = build_folded_system(
            exact_cfg, quad_flux, NeutralFrequency(0.0, 0.0), 20.0
        )
        _, Y = initial_guess(sys0)
        assert np.max(np.abs(Y[[1, 2, 4, 5]])) == 0.0


class TestSolveCoupled:
    def test_exact_case_two_norm_errors(self, coupled_L20):
        x = coupled_L20.profile.grid.x
        eu = np.sqrt(np.sum((coupled_L20.profile.ubar - exact_profile(x)) ** 2))
        ev = np.sqrt(np.sum((coupled_L20.aux.v - exact_v(x)) ** 2))
        assert eu <= 1e-6
        assert ev <= 5e-6

    def test_w_identically_zero(self, coupled_L20):
        assert np.max(np.abs(coupled_L20.aux.w)) <= 1e-12

    def test_fold_mismatch_tiny(self, coupled_L20):
        assert coupled_L20.aux.diagnostics["fold_mismatch"] <= 1e-10

    def test_residual_norm_under_tolerance(self, coupled_L20):
        assert coupled_L20.bvp.residual_norm <= 1e-8

    def test_zero_frequency_reduces_to_profile(self, exact_cfg, quad_flux,
                                               grid_L20, profile_L20):
        res = solve_coupled(
            exact_cfg, quad_flux, NeutralFrequency(0.0, 0.0), 20.0, 4000
        )
        assert np.array_equal(res.aux.w, np.zeros(4001))
        assert np.array_equal(res.aux.v, np.zeros(4001))
        assert np.max(np.abs(res.profile.ubar - profile_L20.ubar)) <= 1e-8

    def test_unfolded_ode_residual_centered_differences(self, exact_cfg, quad_flux,
                                                        exact_freq):
        # the check grid must be fine enough that the h^2 truncation of the
        # centered difference itself stays below the 1e-6 residual bound
        res = solve_coupled(exact_cfg, quad_flux, exact_freq, 20.0, 40000)
        ps, aux = res.profile, res.aux
        h = ps.grid.h
        u, v = ps.ubar, aux.v
        dv = (v[2:] - v[:-2]) / (2.0 * h)
        rhs = exact_cfg.a1_shifted(u[1:-1]) * v[1:-1] + exact_freq.xi0 * (
            quad_flux.f2(u[1:-1]) - quad_flux.f2(exact_cfg.u_minus)
        )
        assert np.max(np.abs(dv - rhs)) <= 1e-6
        du = (u[2:] - u[:-2]) / (2.0 * h)
        assert np.max(np.abs(du - ps.ubar_prime[1:-1])) <= 1e-6

    def test_method_agreement_with_integrating_factor(self, coupled_L20, exact_cfg,
                                                      quad_flux, exact_freq,
                                                      profile_L20):
        aux_if = solve_auxiliary_if(quad_flux, exact_freq, profile_L20)
        dv = np.sqrt(np.sum((coupled_L20.aux.v - aux_if.v) ** 2))
        du = np.sqrt(np.sum((coupled_L20.profile.ubar - profile_L20.ubar) ** 2))
        assert dv <= 1e-3
        assert du <= 1e-5

    def test_domain_width_robustness(self, exact_cfg, quad_flux, exact_freq):
        # interior samples barely move as L grows over {10, 20, 30}
        sols = {}
        for L in (10.0, 20.0, 30.0):
            n = int(100 * L)
            sols[L] = solve_coupled(
                exact_cfg, quad_flux, exact_freq, L, n,
                tail_tol=1e-3, decay_tol=1e-2,
            )
        ref = sols[10.0]
        x10 = ref.profile.grid.x
        h = ref.profile.grid.h
        for L in (20.0, 30.0):
            x = sols[L].profile.grid.x
            offset = int(round((x10[0] - x[0]) / h))
            common = offset + np.arange(x10.size)
            assert np.allclose(x[common], x10, atol=1e-9)
            dv = np.max(np.abs(sols[L].aux.v[common] - ref.aux.v))
            assert dv < 1e-6


class TestContinuation:
    def test_six_point_sine_scan(self, sine_scan):
        assert len(sine_scan) == 6
        for pt in sine_scan[1:]:
            assert pt.result.bvp.newton_iters <= 10
        for pt in sine_scan:
            assert pt.aux.tail_magnitudes() <= 1e-4
            i0 = pt.aux.grid.origin_index
            assert abs(pt.aux.w[i0]) <= 1e-10
            assert abs(pt.aux.v[i0]) <= 1e-10

    def test_singleton_chain_matches_direct_solve(self, quad_flux, exact_cfg,
                                                  exact_freq, coupled_L20):
        pts = continuation_scan(exact_cfg, quad_flux, 1.0, [1.0], 20.0, 4000)
        assert len(pts) == 1
        assert np.max(np.abs(pts[0].aux.v - coupled_L20.aux.v)) <= 1e-9

    def test_repeated_parameter_needs_no_extra_newton(self, quad_flux, exact_cfg):
        pts = continuation_scan(exact_cfg, quad_flux, 1.0, [1.0, 1.0], 20.0, 1000)
        assert pts[1].result.bvp.newton_iters <= 1

    def test_stall_preserves_prior_points(self, quad_flux, exact_cfg):
        with pytest.raises(ContinuationStalled) as ei:
            continuation_scan(
                exact_cfg, quad_flux, 1.0, [1.0, -3.0], 20.0, 1000
            )
        assert ei.value.index == 1
        assert len(ei.value.results) == 1


@pytest.fixture(scope="module")
def sine_scan():
    f = sine_transverse_flux()
    cfg0 = normalize_to_standing(burgers_flux(), 1.0, -1.0, 0.0)
    return continuation_scan(
        cfg0, f, 1.0, [1.0, 1.1, 1.2, 1.3, 1.4, 1.5], 20.0, 4000
    )

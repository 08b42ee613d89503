import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import DenseOps, duhamel_step, order_ratios, slow_j1, slow_j2

from dnls.integrators import (
    IntegratorConfig,
    Scheme,
    SolverState,
    StaleRegularizationError,
    evolve,
    evolve_with_snapshots,
    fd_first_step,
    fd_step,
    j1_term,
    j2_term,
    lri_step,
    phi_v_flow,
    step,
    strang_step,
)
from dnls.potentials import precompute_regularized
from dnls.spectral import TorusGrid, apply_free_flow, l2_norm, to_spectrum

SCHEMES = [Scheme.LRI, Scheme.STRANG, Scheme.FD]


def smooth_setup(n=64):
    g = TorusGrid(np.pi, n)
    x = g.x
    xi = np.cos(x) + 0.5 * np.sin(2 * x) + 0.3
    u0 = (np.cos(x) + 1j * np.sin(2 * x)) / (1 + np.sin(x) ** 2)
    return g, xi, u0


def random_field(g, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(g.N) + 1j * rng.standard_normal(g.N)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            IntegratorConfig(0.0, 1.0, "lri")
        with pytest.raises(ValueError):
            IntegratorConfig(0.1, 1.0, "euler")
        assert IntegratorConfig(0.1, 1.0, "fd").scheme is Scheme.FD


class TestPhiV:
    def test_constant_phase(self):
        out = phi_v_flow(np.ones(8, dtype=complex), np.full(8, 0.7), 0.3, 0.0)
        np.testing.assert_allclose(out, np.exp(-0.21j))

    def test_identity_and_modulus(self):
        g = TorusGrid(np.pi, 64)
        w = random_field(g, 1)
        xi = np.random.default_rng(2).uniform(-1, 1, g.N)
        np.testing.assert_array_equal(phi_v_flow(w, xi, 0.0, 1.0), w)
        np.testing.assert_allclose(np.abs(phi_v_flow(w, xi, 1.3, 2.0)), np.abs(w), rtol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(c=st.floats(-5, 5), t=st.floats(-2, 2), seed=st.integers(0, 100))
    def test_gauge(self, c, t, seed):
        g = TorusGrid(np.pi, 32)
        w = random_field(g, seed)
        xi = np.random.default_rng(seed).uniform(-1, 1, g.N)
        np.testing.assert_allclose(
            phi_v_flow(w, xi + c, t, 1.0), np.exp(-1j * t * c) * phi_v_flow(w, xi, t, 1.0), atol=1e-12
        )


class TestStrang:
    def test_constant_potential_commutes(self):
        g, _, u0 = smooth_setup()
        cfg = IntegratorConfig(0.05, 0.0, "strang")
        out = strang_step(g, u0, np.full(g.N, 0.4), cfg)
        np.testing.assert_allclose(out, np.exp(-0.02j) * apply_free_flow(g, u0, 0.05), atol=1e-14)

    def test_free_flow(self):
        g, _, u0 = smooth_setup()
        out = strang_step(g, u0, np.zeros(g.N), IntegratorConfig(0.05, 0.0, "strang"))
        np.testing.assert_allclose(out, apply_free_flow(g, u0, 0.05), atol=1e-14)

    def test_mass_over_thousand_steps(self):
        g, xi, u0 = smooth_setup(256)
        s = evolve(g, SolverState(u0), xi, IntegratorConfig(0.01, 1.0, "strang"), 1000)
        assert abs(l2_norm(g, s.u) / l2_norm(g, u0) - 1) < 1e-12


class TestFD:
    def test_first_step_constant(self):
        g = TorusGrid(np.pi, 16)
        cfg = IntegratorConfig(0.1, 0.0, "fd")
        np.testing.assert_allclose(fd_first_step(g, np.full(g.N, 2 + 1j), np.zeros(g.N), cfg), 2 + 1j, atol=1e-15)
        np.testing.assert_allclose(fd_first_step(g, np.ones(g.N, complex), np.full(g.N, 0.3), cfg), 1 - 0.03j)

    @pytest.mark.parametrize("tau", [0.1, 0.01, 1e-3])
    def test_first_step_plane_wave(self, tau):
        g = TorusGrid(np.pi, 16)
        u1 = fd_first_step(g, g.plane_wave(1), np.zeros(g.N), IntegratorConfig(tau, 0.0, "fd"))
        coef = to_spectrum(g, u1)[1]
        mu2 = g.mu[1] ** 2
        assert coef == pytest.approx(1 / (1 + 1j * tau * mu2), abs=1e-14)
        assert abs(coef - np.exp(-1j * tau * mu2)) <= tau**2 * mu2**2 / 2 + 1e-15

    def test_leapfrog_constant(self):
        g = TorusGrid(np.pi, 16)
        c = np.full(g.N, 0.5 - 0.25j)
        np.testing.assert_allclose(fd_step(g, c, c, np.zeros(g.N), IntegratorConfig(0.1, 0.0, "fd")), c, atol=1e-15)

    def test_plane_wave_second_order(self):
        g = TorusGrid(np.pi, 16)
        T = 1.0
        errs = []
        for n in (40, 80, 160, 320):
            s = evolve(g, SolverState(g.plane_wave(1)), np.zeros(g.N), IntegratorConfig(T / n, 0.0, "fd"), n)
            errs.append(np.max(np.abs(s.u - np.exp(-1j * T) * g.plane_wave(1))))
        p = np.polyfit(np.log([T / n for n in (40, 80, 160, 320)]), np.log(errs), 1)[0]
        assert p >= 1.9

    @pytest.mark.parametrize("tau", [1e-3, 0.1, 10.0])
    def test_amplification_unit_circle(self, tau):
        g = TorusGrid(np.pi, 64)
        a = 1j / (2 * tau)
        for mu2 in g.mu**2:
            # u^{n+1} = r u^{n-1} with r = (a + mu2/2)/(a - mu2/2); companion matrix [[0, 1], [r, 0]]
            r = (a + mu2 / 2) / (a - mu2 / 2)
            eig = np.linalg.eigvals(np.array([[0, 1], [r, 0]]))
            np.testing.assert_allclose(np.abs(eig), 1.0, atol=1e-12)


class TestJTerms:
    @pytest.mark.parametrize("fn", [j1_term, j2_term])
    def test_zero_field(self, fn):
        g = TorusGrid(np.pi, 32)
        np.testing.assert_array_equal(fn(g, np.zeros(g.N, complex), 0.1, 1.0), 0)

    def test_j2_zero_mean_has_only_bracket(self):
        g = TorusGrid(np.pi, 32)
        v = g.plane_wave(3) + 0.5 * g.plane_wave(-2)
        tau, lam = 0.05, 2.0
        ops = DenseOps(g.L, g.N)
        p = ops.dinv(ops.flow(v, tau))
        q = ops.dinv(v)
        bracket = 0.5 * lam * (ops.flow(p * p, -tau) - q * q) * np.conj(v)
        np.testing.assert_allclose(j2_term(g, v, tau, lam), bracket, atol=1e-13)

    @pytest.mark.parametrize("k", [1, 5, 13, 15])
    def test_single_mode_against_slow_transcription(self, k):
        g = TorusGrid(np.pi, 32)
        ops = DenseOps(g.L, g.N)
        v = g.plane_wave(k) + 0.3  # nonzero mean exercises the corrections
        for tau, lam in [(0.01, 1.0), (0.2, -3.0)]:
            np.testing.assert_allclose(j1_term(g, v, tau, lam), slow_j1(ops, v, tau, lam), atol=1e-12)
            np.testing.assert_allclose(j2_term(g, v, tau, lam), slow_j2(ops, v, tau, lam), atol=1e-12)

    def test_random_field_against_slow_transcription(self):
        g = TorusGrid(2.0, 64)
        ops = DenseOps(g.L, g.N)
        v = random_field(g, 7) * 0.3
        np.testing.assert_allclose(j1_term(g, v, 0.03, 1.5), slow_j1(ops, v, 0.03, 1.5), atol=1e-12)
        np.testing.assert_allclose(j2_term(g, v, 0.03, 1.5), slow_j2(ops, v, 0.03, 1.5), atol=1e-12)

    def test_linear_in_lambda(self):
        g, _, u0 = smooth_setup()
        for fn in (j1_term, j2_term):
            np.testing.assert_allclose(fn(g, u0, 0.1, 2.0), 2 * fn(g, u0, 0.1, 1.0), atol=1e-14)
            np.testing.assert_array_equal(fn(g, u0, 0.1, 0.0), 0)


class TestLRI:
    def test_free_flow_reduction(self):
        g, _, u0 = smooth_setup()
        xi = np.zeros(g.N)
        cfg = IntegratorConfig(0.05, 0.0, "lri")
        out = lri_step(g, u0, xi, precompute_regularized(g, xi, 0.05), cfg)
        np.testing.assert_allclose(out, apply_free_flow(g, u0, 0.05), atol=1e-14)

    def test_potential_free_reduction(self):
        # with xi = 0 only the nonlinear part survives
        g, _, u0 = smooth_setup()
        xi = np.zeros(g.N)
        tau, lam = 0.05, 1.3
        out = lri_step(g, u0, xi, precompute_regularized(g, xi, tau), IntegratorConfig(tau, lam, "lri"))
        inner = np.exp(1j * lam * tau * np.abs(u0) ** 2) * u0 + j1_term(g, u0, tau, lam) + j2_term(g, u0, tau, lam)
        np.testing.assert_allclose(out, apply_free_flow(g, inner, tau), atol=1e-13)

    def test_stale_regularization(self):
        g, xi, u0 = smooth_setup()
        reg = precompute_regularized(g, xi, 0.1)
        with pytest.raises(StaleRegularizationError):
            lri_step(g, u0, xi, reg, IntegratorConfig(0.05, 1.0, "lri"))

    @pytest.mark.parametrize("lam", [1.0, -2.0])
    def test_constant_field_local_order(self, lam):
        g = TorusGrid(np.pi, 16)
        c = 0.8 - 0.6j
        u = np.full(g.N, c)
        xi = np.zeros(g.N)
        errs = []
        for k in range(3, 8):
            tau = 2.0**-k
            out = lri_step(g, u, xi, precompute_regularized(g, xi, tau), IntegratorConfig(tau, lam, "lri"))
            errs.append(np.max(np.abs(out - np.exp(-1j * lam * tau * abs(c) ** 2) * c)))
        assert all(6 <= r <= 10 for r in order_ratios(errs))

    def test_step_rebuilds_regularization(self):
        g, xi, u0 = smooth_setup()
        s = step(g, SolverState(u0), xi, IntegratorConfig(0.1, 1.0, "lri"))
        assert s.reg.tau == 0.1
        s2 = step(g, s, xi, IntegratorConfig(0.05, 1.0, "lri"))
        assert s2.reg.tau == 0.05


class TestLocalErrorAgainstDuhamel:
    """One-step errors against a tight ODE solve of the exact flow."""

    taus = [2.0**-k for k in range(6, 9)]

    @pytest.fixture(scope="class")
    @classmethod
    def refs(cls):
        g, xi, u0 = smooth_setup(64)
        return g, xi, u0, [duhamel_step(g.L, u0, xi, 1.0, t) for t in cls.taus]

    @pytest.mark.parametrize("scheme", ["lri", "strang"])
    def test_third_order(self, refs, scheme):
        g, xi, u0, exact = refs
        errs = []
        for tau, ref in zip(self.taus, exact):
            s = evolve(g, SolverState(u0), xi, IntegratorConfig(tau, 1.0, scheme), 1)
            errs.append(np.linalg.norm(s.u - ref) / np.linalg.norm(ref))
        for r in order_ratios(errs):
            assert 0.6 <= np.log(r) / np.log(8) <= 1.4

    def test_fd_first_then_leapfrog(self, refs):
        g, xi, u0, exact = refs
        first, leap = [], []
        for tau, ref in zip(self.taus, exact):
            cfg = IntegratorConfig(tau, 1.0, "fd")
            u1 = fd_first_step(g, u0, xi, cfg)
            first.append(np.linalg.norm(u1 - ref) / np.linalg.norm(ref))
            u2 = fd_step(g, ref, u0, xi, cfg)
            ref2 = duhamel_step(g.L, u0, xi, 1.0, 2 * tau)
            leap.append(np.linalg.norm(u2 - ref2) / np.linalg.norm(ref2))
        for r in order_ratios(first):
            assert 0.6 <= np.log(r) / np.log(4) <= 1.4
        for r in order_ratios(leap):
            assert 0.6 <= np.log(r) / np.log(8) <= 1.4


class TestEvolve:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_zero_steps(self, scheme):
        g, xi, u0 = smooth_setup()
        s = evolve(g, SolverState(u0), xi, IntegratorConfig(0.1, 1.0, scheme), 0)
        np.testing.assert_array_equal(s.u, u0)
        assert s.n == 0

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_composition(self, scheme):
        g, xi, u0 = smooth_setup()
        cfg = IntegratorConfig(0.02, 1.0, scheme)
        whole = evolve(g, SolverState(u0), xi, cfg, 7)
        split = evolve(g, evolve(g, SolverState(u0), xi, cfg, 3), xi, cfg, 4)
        np.testing.assert_allclose(split.u, whole.u, atol=1e-14)
        assert split.n == whole.n == 7

    def test_fd_state_invariant(self):
        g, xi, u0 = smooth_setup()
        cfg = IntegratorConfig(0.02, 1.0, "fd")
        s = evolve(g, SolverState(u0), xi, cfg, 1)
        np.testing.assert_array_equal(s.u_prev, u0)
        s = evolve(g, SolverState(u0), xi, IntegratorConfig(0.02, 1.0, "strang"), 1)
        assert s.u_prev is None

    def test_snapshots(self):
        g, xi, u0 = smooth_setup()
        cfg = IntegratorConfig(0.02, 1.0, "lri")
        final, snaps = evolve_with_snapshots(g, SolverState(u0), xi, cfg, 5, [0, 2, 5, 9])
        assert sorted(snaps) == [0, 2, 5]
        np.testing.assert_array_equal(snaps[5], final.u)
        np.testing.assert_array_equal(snaps[2], evolve(g, SolverState(u0), xi, cfg, 2).u)
        with pytest.raises(ValueError):
            evolve(g, SolverState(u0), xi, cfg, -1)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_translation_equivariance(self, scheme):
        g = TorusGrid(np.pi, 64)
        rng = np.random.default_rng(4)
        xi = rng.uniform(-1, 1, g.N)
        u0 = random_field(g, 5) * 0.5
        cfg = IntegratorConfig(0.01, 1.0, scheme)
        a = evolve(g, SolverState(np.roll(u0, 1)), np.roll(xi, 1), cfg, 5).u
        b = np.roll(evolve(g, SolverState(u0), xi, cfg, 5).u, 1)
        np.testing.assert_allclose(a, b, atol=1e-12)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_smooth_global_second_order(self, scheme):
        g, xi, u0 = smooth_setup(64)
        T = 0.5
        ref = evolve(g, SolverState(u0), xi, IntegratorConfig(T / 10240, 1.0, "lri"), 10240).u
        # FD leaves its pre-asymptotic regime once tau * max(mu^2) is O(1)
        steps = (80, 160, 320, 640)
        errs = [
            np.linalg.norm(evolve(g, SolverState(u0), xi, IntegratorConfig(T / n, 1.0, scheme), n).u - ref)
            / np.linalg.norm(ref)
            for n in steps
        ]
        p = np.polyfit(np.log([T / n for n in steps]), np.log(errs), 1)[0]
        assert 1.8 <= p <= 2.3

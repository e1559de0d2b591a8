"""Exactness and structure of the two sub-flows."""

import numpy as np
import pytest

from gpsplit.backgrounds import Background, PhysParams, background_boundary, eval_background
from gpsplit.flows import FlowState, LinearPropagator, flow_A, flow_B, uv_equivalence_check
from gpsplit.grid import Field, NormKind, constant_field, make_grid, norm
from gpsplit.integrators import strang_step
from gpsplit.potentials import Potential

V0 = Potential(kind="zero")
P = PhysParams()  # eps=1, m=1/2


def u_state(field, t=0.0, boundary=None):
    return FlowState(field=field, t=t, boundary=boundary)


class TestFlowA:
    def test_plane_wave_phase(self):
        g = make_grid(1, 5, 64)
        k = g.modes[4]
        f = Field(g, np.exp(1j * k * g.axis))
        out = flow_A(u_state(f), 0.37, P)
        # m = 1/2: each mode gains exp(i k^2 tau)
        expected = np.exp(1j * k**2 * 0.37) * f.values
        assert np.max(np.abs(out.field.values - expected)) < 1e-12
        assert out.t == 0.0  # the A-flow fixes the clock

    def test_constant_is_fixed_point(self):
        g = make_grid(2, 5, 32)
        f = constant_field(g, 0.3 - 0.8j)
        out = flow_A(u_state(f), 1.7, P)
        assert np.max(np.abs(out.field.values - f.values)) < 1e-14

    def test_dirichlet_ramp_is_fixed_point(self):
        g = make_grid(1, 5, 64, "dirichlet")
        lo, hi = 1.0 + 0.5j, -0.2 + 1.0j
        ramp = lo + (hi - lo) * (g.axis + 5) / 10
        st = u_state(Field(g, ramp), boundary=(lo, hi))
        out = flow_A(st, 0.9, P)
        assert np.max(np.abs(out.field.values - ramp)) < 1e-12

    def test_unitarity_periodic(self):
        rng = np.random.default_rng(3)
        g = make_grid(1, 5, 64)
        f = Field(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
        out = flow_A(u_state(f), 0.23, P)
        for kind in (NormKind.L2, NormKind.H1, NormKind.H2):
            before, after = norm(f, kind), norm(out.field, kind)
            assert abs(after - before) < 1e-12 * before

    def test_unitarity_dirichlet_sine_part(self):
        rng = np.random.default_rng(4)
        g = make_grid(1, 5, 64, "dirichlet")
        boundary = (1.0 + 0j, 1.0 + 0j)
        prop = LinearPropagator(g, boundary)
        f = Field(g, prop.ramp + rng.standard_normal(64) + 1j * rng.standard_normal(64))
        out = flow_A(u_state(f, boundary=boundary), 0.41, P)
        w_before = norm(Field(g, f.values - prop.ramp), NormKind.L2)
        w_after = norm(Field(g, out.field.values - prop.ramp), NormKind.L2)
        assert abs(w_after - w_before) < 1e-12 * w_before

    def test_group_property(self):
        rng = np.random.default_rng(5)
        g = make_grid(1, 5, 64)
        f = Field(g, rng.standard_normal(64) + 1j * rng.standard_normal(64))
        once = flow_A(u_state(f), 0.5, P)
        twice = flow_A(flow_A(u_state(f), 0.2, P), 0.3, P)
        assert np.max(np.abs(once.field.values - twice.field.values)) < 1e-12

    def test_negative_tau_rejected(self):
        g = make_grid(1, 5, 32)
        with pytest.raises(ValueError):
            flow_A(u_state(constant_field(g, 1.0)), -0.1, P)

    def test_rk4_oracle(self):
        # flow_A matches a fine-substep RK4 solve of i u_t = (1/(2m)) Lap u
        g = make_grid(1, np.pi, 64)
        rng = np.random.default_rng(11)
        coeffs = (rng.standard_normal(8) + 1j * rng.standard_normal(8)) / np.arange(1, 9) ** 2
        u0 = np.sum([c * np.exp(1j * k * g.axis) for c, k in zip(coeffs, g.modes[:8])], axis=0)
        tau = 0.1
        k2 = g.mode_squares()

        def rhs(v):
            vhat = np.fft.fft(v)
            return -1j * np.fft.ifft(-k2 * vhat) / (2 * P.mass)

        v, n_sub = u0.copy(), 1000
        dt = tau / n_sub
        for _ in range(n_sub):
            k1 = rhs(v)
            k2_ = rhs(v + dt / 2 * k1)
            k3 = rhs(v + dt / 2 * k2_)
            k4 = rhs(v + dt * k3)
            v = v + dt / 6 * (k1 + 2 * k2_ + 2 * k3 + k4)
        out = flow_A(u_state(Field(g, u0)), tau, P)
        assert np.max(np.abs(out.field.values - v)) < 1e-8


class TestFlowB:
    def test_modulus_one_fixed_set(self):
        g = make_grid(1, 5, 32)
        f = Field(g, np.exp(1j * np.linspace(0, 1, 32)))
        out = flow_B(u_state(f), 0.8, V0, P)
        assert np.max(np.abs(out.field.values - f.values)) < 1e-14

    def test_constant_closed_form(self):
        g = make_grid(1, 5, 32)
        out = flow_B(u_state(constant_field(g, 2.0)), 0.6, V0, P)
        # 1 - |2|^2 = -3, phase exp(-i tau (-3)) = exp(3 i tau)
        assert np.allclose(out.field.values, 2.0 * np.exp(3j * 0.6), atol=1e-14)
        assert out.t == 0.6  # the B-flow advances the clock

    def test_modulus_preserved_pointwise(self):
        rng = np.random.default_rng(6)
        g = make_grid(2, 5, 32)
        f = Field(g, rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32)))
        pot = Potential(kind="moving_gaussian", v0=3.0, gamma=2.0, speed=1.0)
        out = flow_B(u_state(f), 0.3, pot, P)
        assert np.max(np.abs(np.abs(out.field.values) - np.abs(f.values))) < 1e-14

    def test_soliton_boundary_constants_fixed(self):
        bg = Background(kind="dark_soliton", speed=1.3)
        lo, hi = background_boundary(bg)
        g = make_grid(1, 5, 32)
        f = Field(g, np.where(g.axis < 0, lo, hi))
        out = flow_B(u_state(f), 0.5, V0, P)
        assert np.max(np.abs(out.field.values - f.values)) < 1e-14

    def test_group_property_static_potential(self):
        rng = np.random.default_rng(8)
        g = make_grid(1, 5, 32)
        f = Field(g, rng.standard_normal(32) + 1j * rng.standard_normal(32))
        pot = Potential(kind="static_gaussian", v0=1.5, gamma=1.0, center=(0.0,))
        once = flow_B(u_state(f), 0.5, pot, P)
        s = flow_B(u_state(f), 0.2, pot, P)
        twice = flow_B(s, 0.3, pot, P)
        assert np.max(np.abs(once.field.values - twice.field.values)) < 1e-13
        assert once.t == pytest.approx(twice.t)

    def test_rk4_oracle(self):
        # flow_B matches fine-substep RK4 on i u_t = (1-|u|^2) u + V u
        g = make_grid(1, np.pi, 64)
        rng = np.random.default_rng(12)
        u0 = 1 + 0.3 * (rng.standard_normal(64) + 1j * rng.standard_normal(64))
        pot = Potential(kind="static_gaussian", v0=2.0, gamma=1.0, center=(0.0,))
        vx = 2.0 * np.exp(-0.5 * g.axis**2)
        tau = 0.1

        def rhs(v):
            return -1j * ((1 - np.abs(v) ** 2) * v + vx * v)

        v, n_sub = u0.copy(), 1000
        dt = tau / n_sub
        for _ in range(n_sub):
            k1 = rhs(v)
            k2 = rhs(v + dt / 2 * k1)
            k3 = rhs(v + dt / 2 * k2)
            k4 = rhs(v + dt * k3)
            v = v + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out = flow_B(u_state(Field(g, u0)), tau, pot, P, rule="exact")
        assert np.max(np.abs(out.field.values - v)) < 1e-8


class TestUVEquivalence:
    def make_pair(self):
        g = make_grid(1, 30, 256, "dirichlet")
        bg = Background(kind="dark_soliton", speed=1.3)
        phi = eval_background(bg, g)
        boundary = background_boundary(bg)
        rng = np.random.default_rng(13)
        v0 = Field(g, 0.1 * np.sin(g.modes[2] * (g.axis + 30))
                   * (rng.standard_normal() + 1j * rng.standard_normal()))
        u0 = Field(g, phi.values + v0.values)
        us = FlowState(field=u0, boundary=boundary)
        vs = FlowState(field=v0, form="v", background=phi, boundary=boundary)
        return us, vs

    def test_zero_steps(self):
        us, vs = self.make_pair()
        assert uv_equivalence_check(us, vs) == 0.0

    def test_one_flow_a(self):
        us, vs = self.make_pair()
        us2 = flow_A(us, 0.05, P)
        vs2 = flow_A(vs, 0.05, P)
        assert uv_equivalence_check(us2, vs2) < 1e-12

    def test_hundred_strang_steps(self):
        us, vs = self.make_pair()
        for _ in range(100):
            us = strang_step(us, 1e-3, V0, P)
            vs = strang_step(vs, 1e-3, V0, P)
        scale = np.max(np.abs(us.field.values))
        assert uv_equivalence_check(us, vs) < 1e-11 * scale

    def test_mismatch_rejected(self):
        us, vs = self.make_pair()
        vs.t = 1.0
        with pytest.raises(ValueError):
            uv_equivalence_check(us, vs)

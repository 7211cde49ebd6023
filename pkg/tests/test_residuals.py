import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hydroelastic import lagrangian as lg
from hydroelastic import residuals as rs
from hydroelastic import spectral as sp
from hydroelastic.lagrangian import WaveState
from hydroelastic.spectral import Field

from conftest import G


def smooth_state(rng, M=64, amp=0.05, c2=4.0):
    # geometric decay keeps 1/Omega^2 resolved on the padded grid
    w = sp.random_field(rng, M, 6, amp, decay=0.4)
    return WaveState(w, Field.constant(1.0, 2 * M), c2, G)


def test_trivial_state_operators(rng):
    st_ = WaveState.trivial(32, 4.0)
    u = sp.resample(sp.random_field(rng, 32, 10), 64)
    assert np.allclose(rs.op_L(u, st_).samples, sp.hilbert(u).samples, atol=1e-14)
    assert np.allclose(rs.op_L_inverse(u, st_).samples, -sp.hilbert(u).samples, atol=1e-14)
    assert np.allclose(rs.op_L(rs.op_L_inverse(u, st_), st_).samples, u.samples, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_L_round_trip_and_duality(seed):
    rng = np.random.default_rng(seed)
    st_ = smooth_state(rng)
    v = sp.resample(sp.random_field(rng, 64, 10, decay=0.6), 128)
    assert (rs.op_L(rs.op_L_inverse(v, st_), st_) - v).sup() < 1e-11
    assert abs(sp.mean(rs.op_L_inverse(v, st_))) < 1e-13
    assert abs(sp.mean(rs.op_L(v, st_))) < 1e-11
    f = sp.random_field(rng, 128, 20, zero_mean=False)
    assert abs(sp.mean(rs.op_L(v, st_) * f) - sp.mean(v * rs.op_L_adjoint(f, st_))) < 1e-11
    assert abs(sp.mean(rs.op_L_inverse(v, st_) * f)
               - sp.mean(v * rs.op_L_inverse_adjoint(f, st_))) < 1e-11


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_quotient_identity(seed):
    rng = np.random.default_rng(seed)
    st_ = smooth_state(rng)
    cf = st_.curve
    u = sp.resample(sp.random_field(rng, 64, 10, decay=0.6), 128)
    C = sp.hilbert
    om2 = cf.omega.samples ** 2
    a = (cf.dw.samples * C(u).samples - (1 + cf.cdw.samples) * u.samples) / om2
    b = (cf.dw.samples * u.samples + (1 + cf.cdw.samples) * C(u).samples) / om2
    assert np.max(np.abs(a - C(Field(b)).samples)) < 1e-10


def test_riemann_hilbert(rng):
    st_ = WaveState.trivial(32, 4.0)
    assert rs.riemann_hilbert_check(st_, Field.constant(2.0, 64), 2.0) == (0.0, 0.0)
    for _ in range(10):
        st_ = smooth_state(rng)
        f = Field(1.5 / st_.curve.omega.samples ** 2)
        lhs, rhs = rs.riemann_hilbert_check(st_, f, 1.5)
        assert lhs < 1e-10 and rhs < 1e-14
        bad = f + Field(np.cos(f.tau))
        lhs, _ = rs.riemann_hilbert_check(st_, bad, 1.5)
        assert lhs > 0.5


def test_residuals_at_trivial_state(model):
    st_ = WaveState.trivial(32, 4.0)
    std, gamma = rs.residual_euler_chi(st_, model)
    assert std == 0.0 and gamma == pytest.approx(0.0, abs=1e-14)
    assert rs.residual_euler_w(st_, model) == pytest.approx(0.0, abs=1e-14)
    assert rs.residual_material(st_, model) == pytest.approx(0.0, abs=1e-14)
    assert np.allclose(rs.pressure(st_, model).samples, 0.0, atol=1e-14)
    assert rs.residual_dynamic(st_, model) == pytest.approx(0.0, abs=1e-14)


def test_residuals_detect_non_solutions(model, c2):
    w = Field.from_modes([0.1], [], 64)
    chi, gamma = lg.inner_chi_solve(w, model)
    st_ = WaveState(w, chi, c2, G, gamma)
    assert rs.residual_euler_chi(st_, model)[0] < 1e-10
    assert rs.residual_euler_w(st_, model) > 1e-2
    assert rs.residual_dynamic(st_, model) > 1e-3
    bumped = Field(chi.samples * (1 + 0.01 * np.cos(3 * chi.tau)))
    other = st_.with_chi(Field(bumped.samples / bumped.samples.mean()))
    assert rs.residual_euler_chi(other, model)[0] > 1e-4
    assert rs.residual_material(other, model) > 1e-4


def test_pressure_material_coordinate(model):
    # P in the material coordinate x = chi(tau): (1/nu)(E2_x / nu)_x - sigma E1
    w = Field.from_modes([0.05, 0.02, 0.005], [0.01], 64)
    chi, gamma = lg.inner_chi_solve(w, model)
    st_ = WaveState(w, chi, 4.0, G, gamma)
    P = rs.pressure(st_, model)
    tau = st_.chi_prime.tau
    x = st_.chi
    # uniform material grid and the tau values that map onto it
    K = 4096
    xs = np.linspace(0, 2 * np.pi, K, endpoint=False)
    ramp = sp.antiderivative_zero_start(st_.chi_prime)
    ts = xs.copy()
    for _ in range(50):
        ts -= (ramp(ts) - xs) / sp.interpolate(st_.chi_prime, ts)
    nu = sp.interpolate(st_.nu, ts)
    mu = sp.interpolate(st_.mu, ts)
    sigma = sp.interpolate(st_.curve.sigma, ts)
    E1, E2 = model.grad(nu, mu)
    E2x = sp.derivative(Field(E2)).samples
    inner = sp.derivative(Field(E2x / nu)).samples
    P_mat = inner / nu - sigma * E1
    assert np.max(np.abs(P_mat - sp.interpolate(P, ts))) < 1e-8
    assert x[0] == 0.0 and tau[0] == 0.0


def test_pressure_scales_linearly(model):
    sups = []
    for eps in (1e-3, 5e-4):
        w = Field.from_modes([eps], [], 64)
        chi, gamma = lg.inner_chi_solve(w, model)
        sups.append(rs.pressure(WaveState(w, chi, 4.0, G, gamma), model).sup())
    assert sups[0] / sups[1] == pytest.approx(2.0, rel=1e-2)


def test_certificate_of_solved_state(solved, model):
    rep = solved.residuals
    assert rep.euler_chi_std < 1e-10
    assert rep.gamma0 == pytest.approx(solved.state.gamma0, abs=1e-10)
    assert rep.euler_w_sup < 1e-6
    assert rep.material_sup < 1e-6
    assert rep.dynamic_sup < 1e-6
    assert rep.rh_sup < 1e-10
    assert abs(rep.mean_log_omega) < 1e-8
    # the two forms of the w equation agree within an order of magnitude scaled by the state
    assert rep.euler_w_primitive_sup < 10 * rep.euler_w_sup
    assert rep.dynamic_sup < 50 * 1e-6
    d = rep.to_dict()
    assert "pressure" not in d and all(v is None or v == v for v in d.values())
    for k in ("euler_chi_std", "euler_w_sup", "material_sup", "rh_sup", "dynamic_sup"):
        assert d[k] >= 0

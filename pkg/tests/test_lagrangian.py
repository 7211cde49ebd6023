import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hydroelastic import geometry as geo
from hydroelastic import lagrangian as lg
from hydroelastic import spectral as sp
from hydroelastic.lagrangian import WaveState
from hydroelastic.spectral import Field

from conftest import G


def cosine(eps, M=64):
    return Field.from_modes([eps], [], M)


def chi_cosine(eps, M=64):
    chi = 1.0 + eps * np.cos(sp.nodes(2 * M))
    return Field(chi / chi.mean())


def random_state(rng, c2, M=64, amp=0.05, chi_amp=0.1):
    w = sp.random_field(rng, M, 8, amp, decay=0.6)
    q = sp.random_field(rng, 2 * M, 8, chi_amp, decay=0.6)
    return WaveState(w, lg.normalized_chi_prime(q), c2, G)


def test_state_invariants():
    w = cosine(0.1)
    with pytest.raises(ValueError):
        WaveState(w, Field.constant(1.0, 64), 4.0)
    with pytest.raises(ValueError):
        WaveState(w + 0.1, Field.constant(1.0, 128), 4.0)
    with pytest.raises(ValueError):
        WaveState(w, Field.constant(2.0, 128), 4.0)
    st_ = WaveState.from_q(w, sp.random_field(np.random.default_rng(1), 64, 5), 4.0)
    assert np.all(st_.chi_prime.samples > 0)
    assert sp.mean(st_.chi_prime) == pytest.approx(1.0, abs=1e-14)
    assert st_.chi[0] == 0.0
    assert sp.antiderivative_zero_start(st_.chi_prime).slope * 2 * np.pi == pytest.approx(2 * np.pi)


def test_trivial_state(model):
    st_ = WaveState.trivial(32, 4.0)
    assert lg.kinetic_potential_I0(st_) == 0.0
    assert lg.elastic(st_, model) == pytest.approx(0.0, abs=1e-12)
    assert lg.j0(st_, model) == pytest.approx(0.0, abs=1e-12)
    assert lg.mass_shift_a0(st_.w) == 0.0
    assert np.allclose(lg.grad_I0(st_).samples, 0.0)
    assert np.allclose(lg.grad_w_reduced(st_.w, model, 4.0).samples, 0.0, atol=1e-12)
    chi, gamma = lg.inner_chi_solve(st_.w, model)
    assert np.allclose(chi.samples, 1.0, atol=1e-14) and gamma == pytest.approx(0.0, abs=1e-13)


def test_mass_shift():
    eps = 0.1
    assert lg.mass_shift_a0(cosine(eps)) == pytest.approx(-eps ** 2 / 2, rel=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_mass_shift_nonpositive(seed):
    rng = np.random.default_rng(seed)
    assert lg.mass_shift_a0(sp.random_field(rng, 32, 10)) <= 0.0


def test_I0_small_amplitude():
    c2 = 4.0
    for eps in (1e-3, 5e-4):
        st_ = WaveState(cosine(eps), Field.constant(1.0, 128), c2, G)
        val = lg.kinetic_potential_I0(st_) / eps ** 2
        assert val == pytest.approx(np.pi / 2 * (c2 - G), rel=1e-5)


def test_elastic_small_amplitude(model):
    e22 = model.e22_rest()
    vals = []
    for eps in (1e-3, 5e-4):
        st_ = WaveState(cosine(eps), chi_cosine(eps), 4.0, G)
        vals.append(lg.elastic(st_, model) / eps ** 2)
    for v in vals:
        assert v == pytest.approx(np.pi / 2 * e22, rel=2e-2)
    rich = (4 * vals[1] - vals[0]) / 3
    assert rich == pytest.approx(np.pi / 2 * e22, rel=1e-3)


def test_elastic_shift_linearity(model, rng):
    st_ = random_state(rng, 4.0)

    class Shifted:
        def eval(self, nu, mu):
            return model.eval(nu, mu) + 0.25

    assert lg.elastic(st_, Shifted()) == pytest.approx(lg.elastic(st_, model) + 0.25 * 2 * np.pi)


def test_elastic_cache_coherence(model, rng):
    st_ = random_state(rng, 4.0)
    first = lg.elastic(st_, model)
    fresh = WaveState(Field(st_.w.samples.copy()), Field(st_.chi_prime.samples.copy()), st_.c2, st_.g)
    assert lg.elastic(fresh, model) == first
    assert lg.elastic(st_, model) == first


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_jensen_bound(seed):
    from conftest import ILLUSTRATIVE
    from hydroelastic.energy import IllustrativeEnergy
    model = IllustrativeEnergy(**ILLUSTRATIVE)
    rng = np.random.default_rng(seed)
    st_ = random_state(rng, 4.0, amp=0.08, chi_amp=0.3)
    cf = st_.curve
    assert lg.elastic(st_, model) >= 2 * np.pi * model.eval(cf.ell, cf.m) * (1 - 1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_I0_upper_bound(seed):
    rng = np.random.default_rng(seed)
    c2 = 4.0
    st_ = random_state(rng, c2, amp=0.1)
    ell = st_.curve.ell
    A = geo.area_A(ell)
    bound = G / (4 * np.pi) * A ** 2 + c2 / 2 * A + G * np.pi * A * np.sqrt(ell ** 2 - 1)
    assert lg.kinetic_potential_I0(st_) <= bound


def _directional(fun, w, h, delta=1e-6):
    return (fun(w + h * delta) - fun(w - h * delta)) / (2 * delta)


def test_grad_I0_finite_differences(rng):
    c2 = 4.0
    w = sp.random_field(rng, 64, 8, 0.1, decay=0.6)
    st_ = WaveState(w, Field.constant(1.0, 128), c2, G)
    g = lg.grad_I0(st_)
    assert sp.mean(g) == pytest.approx(G * st_.a0, abs=1e-14)

    def I0(v):
        return lg.kinetic_potential_I0(WaveState(v, Field.constant(1.0, 128), c2, G))

    for _ in range(10):
        h = sp.random_field(rng, 64, 20, 1.0, decay=0.8)
        fd = _directional(I0, w, h)
        an = sp.integral(g * h)
        assert an == pytest.approx(fd, rel=1e-6, abs=1e-10)


def test_grad_w_fixed_chi_finite_differences(model, rng):
    st_ = random_state(rng, 4.0)
    g = lg.grad_w_fixed_chi(st_, model)

    def J(v):
        return lg.j0(WaveState(v, st_.chi_prime, st_.c2, G), model)

    for _ in range(5):
        h = sp.random_field(rng, 64, 15, 1.0, decay=0.7)
        assert sp.integral(g * h) == pytest.approx(_directional(J, st_.w, h), rel=1e-5, abs=1e-9)


def test_grad_q_finite_differences(model, rng):
    st_ = random_state(rng, 4.0)
    q0 = st_.q
    gq = lg.grad_q(st_, model)

    def J(q):
        return lg.j0(WaveState.from_q(st_.w, q, st_.c2, G), model)

    for _ in range(5):
        h = sp.random_field(rng, 128, 15, 1.0, decay=0.7)
        assert sp.integral(gq * h) == pytest.approx(_directional(J, q0, h), rel=1e-5, abs=1e-9)


def test_grad_reduced_finite_differences(model, rng):
    c2 = 4.0
    w = sp.random_field(rng, 64, 8, 0.05, decay=0.6)
    g = lg.grad_w_reduced(w, model, c2, G)

    def J(v):
        return lg.reduced_functional(v, model, c2, G)[0]

    for _ in range(5):
        h = sp.random_field(rng, 64, 15, 1.0, decay=0.7)
        assert sp.integral(g * h) == pytest.approx(_directional(J, w, h), rel=1e-5, abs=1e-9)


def test_coefficient_gradient(model, rng):
    c2 = 4.0
    w = sp.random_field(rng, 32, 6, 0.05, decay=0.6)
    g = lg.grad_w_reduced(w, model, c2, G)
    gc, gs = lg.coefficient_gradient(g, 6)
    delta = 1e-6
    for n in (1, 3):
        e = Field.from_modes([0.0] * (n - 1) + [1.0], [], 32)
        fd = _directional(lambda v: lg.reduced_functional(v, model, c2, G)[0], w, e, delta)
        assert gc[n - 1] == pytest.approx(fd, rel=1e-5)
        e = Field.from_modes([], [0.0] * (n - 1) + [1.0], 32)
        fd = _directional(lambda v: lg.reduced_functional(v, model, c2, G)[0], w, e, delta)
        assert gs[n - 1] == pytest.approx(fd, rel=1e-5)


def test_inner_solve(model, rng):
    w = sp.random_field(rng, 64, 8, 0.08, decay=0.6)
    chi, gamma = lg.inner_chi_solve(w, model)
    st_ = WaveState(w, chi, 4.0, G, gamma)
    assert sp.mean(chi) == pytest.approx(1.0, abs=1e-12)
    G_ = lg.euler_chi_values(st_, model).samples
    assert np.std(G_) < 1e-10
    assert np.mean(G_) == pytest.approx(gamma, abs=1e-10)
    e_opt = lg.elastic(st_, model)
    assert e_opt <= lg.elastic(WaveState(w, Field.constant(1.0, 128), 4.0, G), model)
    for _ in range(10):
        pert = sp.random_field(rng, 128, 10, 1.0, decay=0.8)
        pert = pert * (1e-3 / pert.sup())
        other = st_.with_chi(Field(chi.samples + pert.samples))
        assert lg.elastic(other, model) > e_opt


def test_vertical_shift_optimality(model, rng):
    # J over vertical shifts a + w is maximized by the mass shift a0
    st_ = random_state(rng, 4.0, amp=0.1)
    w = st_.w
    a0 = st_.a0
    c2 = st_.c2
    wp = sp.resample(w, 128)
    cdw = sp.hilbert_derivative(wp).samples

    def I_shifted(a):
        y = a + wp.samples
        return (c2 / 2 * sp.integral(Field(wp.samples * cdw))
                - G / 2 * sp.integral(Field(y * y * (1 + cdw))))

    vals = [I_shifted(a) for a in a0 + np.linspace(-0.05, 0.05, 21)]
    assert int(np.argmax(vals)) == 10
    assert I_shifted(a0) == pytest.approx(lg.kinetic_potential_I0(st_), rel=1e-12, abs=1e-15)

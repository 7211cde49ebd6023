import numpy as np
import pytest

from hydroelastic import lagrangian as lg
from hydroelastic import spectral as sp
from hydroelastic.optimizer import SolveConfig, continuation_sweep, initial_guess, maximize

from conftest import G, MU_STAR

SMALL_N = 32


def test_config_validation(model):
    with pytest.raises(ValueError):
        SolveConfig(model, 4.0, tol_grad=0.0)
    with pytest.raises(ValueError):
        SolveConfig(model, 4.0, mode="newton")
    with pytest.raises(ValueError):
        SolveConfig(model, 4.0, modes=64, grid=64)
    assert SolveConfig(model, 4.0).M == 256


def test_initial_guess(model, interval, c2):
    st = initial_guess(SolveConfig(model, c2, eps0=0.0))
    assert st.w.sup() == 0.0 and lg.j0(st, model) == pytest.approx(0.0, abs=1e-14)
    st = initial_guess(SolveConfig(model, c2, eps0=1e-3))
    assert st.w.coeff(1) == pytest.approx(0.5e-3)
    assert sp.mean(st.chi_prime) == pytest.approx(1.0, abs=1e-15)
    assert lg.j0(st, model) > 0
    st = initial_guess(SolveConfig(model, interval.lo - 0.1, eps0=1e-3))
    assert lg.j0(st, model) < 0


def test_converged_solution_properties(solved):
    assert solved.converged, solved.message
    assert not solved.trivial
    assert solved.j0_value > 0
    assert solved.grad_sup <= solved.tol_effective
    assert solved.tol_effective >= 1e-9
    assert solved.geometry.theta_osc < MU_STAR * np.pi
    assert not solved.geometry.self_intersects
    assert solved.state.chi_prime.samples.min() > 0.1
    assert abs(solved.geometry.mean_log_omega) < 1e-8
    h = np.array(solved.history)
    # nondecreasing up to the line-search noise allowance
    assert np.all(np.diff(h) >= -1e-13 * np.maximum(1.0, np.abs(h[1:])))
    # the mode-1 phase stays cosine, so the profile is even
    w = solved.state.w.samples
    assert np.max(np.abs(w[1:] - w[1:][::-1])) < 1e-10
    d = solved.to_dict()
    assert d["J0"] == solved.j0_value and len(d["w_cos"]) == 127  # Nyquist mode excluded


def test_gradient_at_solution_is_small(solved, model):
    st = solved.state
    g = lg.grad_w_reduced(st.w, model, st.c2, G)
    assert g.sup() <= solved.tol_effective * 1.01


def test_below_threshold_returns_trivial(model, interval):
    res = maximize(SolveConfig(model, interval.lo - 0.2, modes=SMALL_N))
    assert res.trivial and res.state.w.sup() < 1e-8
    assert res.j0_value == pytest.approx(0.0, abs=1e-14)


def test_joint_mode_agrees_with_reduced(model, interval):
    c2 = interval.lo + 0.1 * (interval.hi - interval.lo)
    red = maximize(SolveConfig(model, c2, modes=SMALL_N))
    joint = maximize(SolveConfig(model, c2, modes=SMALL_N, mode="joint"))
    assert red.converged and joint.converged, joint.message
    assert joint.j0_value == pytest.approx(red.j0_value, rel=1e-7)
    assert joint.height == pytest.approx(red.height, rel=1e-5)


def test_sweep(model, interval):
    lo, hi = interval.lo, interval.hi
    pts = [lo + f * (hi - lo) for f in (0.05, 0.1, 0.15, 0.2, 0.25)]
    fwd = continuation_sweep(SolveConfig(model, pts[0], modes=SMALL_N), pts)
    assert all(r["error"] is None and r["result"].converged for r in fwd)
    heights = [r["result"].height for r in fwd]
    assert np.all(np.diff(heights) > 0)
    back = continuation_sweep(SolveConfig(model, pts[0], modes=SMALL_N), pts[::-1])
    for a, b in zip(fwd, back[::-1]):
        assert b["result"].j0_value == pytest.approx(a["result"].j0_value, rel=1e-7)


def test_sweep_flags_inadmissible_point(model, interval):
    lo, hi = interval.lo, interval.hi
    pts = [lo + 0.1 * (hi - lo), hi + 5.0, lo + 0.2 * (hi - lo)]
    recs = continuation_sweep(SolveConfig(model, pts[0], modes=SMALL_N), pts)
    assert [r["admissible"] for r in recs] == [True, False, True]
    for r in (recs[0], recs[2]):
        assert r["error"] is None and r["result"].converged

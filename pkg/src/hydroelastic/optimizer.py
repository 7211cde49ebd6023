"""Ascent on the reduced Lagrangian and continuation in the wave speed.

The unknowns are the Fourier coefficients of ``w`` on modes ``1..N-1``: the
cosine coefficients ``a_n`` and the sine coefficients ``b_n`` for ``n >= 2``
(``b_1 = 0`` fixes the horizontal phase).  The ascent is a limited-memory BFGS
iteration on ``-J~`` in diagonally rescaled coordinates, with a backtracking
Armijo line search.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from . import spectral as sp
from .energy import EnergyModel, RootFindError, admissible_c2_interval, check_hypotheses
from .geometry import DegenerateCurveError, GeometryReport, check_bounds
from .lagrangian import (WaveState, coefficient_gradient, grad_q, grad_w_fixed_chi, j0,
                         normalized_chi_prime, reduced_functional)
from .residuals import ResidualReport, certify
from .spectral import Field

log = logging.getLogger(__name__)

OMEGA_GUARD = 1e-6
TRIVIAL_HEIGHT = 1e-8
STALL_ITERATIONS = 100
FLOOR_FACTOR = 10.0


class NonConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    model: EnergyModel
    c2: float
    g: float = 1.0
    mu_star: float = 0.6
    modes: int = 128
    grid: int | None = None             # defaults to 2 * modes
    eps0: float = 1e-3
    tol_grad: float = 1e-9
    max_iter: int = 3000
    history: int = 10
    armijo: float = 1e-4
    backtrack: float = 0.5
    schedule: tuple = ()
    mode: str = "reduced"               # or "joint"
    check: bool = True                  # run the mandatory hypothesis checks first

    def __post_init__(self):
        if not self.tol_grad > 0:
            raise ValueError("tol_grad must be positive")
        if self.mode not in ("reduced", "joint"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.modes > self.M // 2:
            raise ValueError(f"N={self.modes} exceeds M/2={self.M // 2}")

    @property
    def M(self) -> int:
        return self.grid if self.grid is not None else 2 * self.modes

    @property
    def active(self) -> int:
        """Highest mode carried by ``w`` (the Nyquist mode is excluded)."""
        return min(self.modes, self.M // 2 - 1)


@dataclass
class SolveResult:
    state: WaveState
    j0_value: float
    iterations: int
    converged: bool
    grad_sup: float
    trivial: bool
    noise_floor: float = 0.0
    tol_effective: float = 0.0
    geometry: GeometryReport | None = None
    residuals: ResidualReport | None = None
    message: str = ""
    history: list = field(default_factory=list)

    @property
    def height(self) -> float:
        w = self.state.curve.w.samples
        return float(w.max() - w.min())

    def to_dict(self) -> dict:
        st = self.state
        a, b = st.w.cos_sin()
        return {
            "c2": st.c2,
            "g": st.g,
            "converged": self.converged,
            "trivial": self.trivial,
            "iterations": self.iterations,
            "J0": self.j0_value,
            "grad_sup": self.grad_sup,
            "noise_floor": self.noise_floor,
            "tol_effective": self.tol_effective,
            "height": self.height,
            "a0": st.a0,
            "gamma0": st.gamma0,
            "min_chi_prime": float(st.chi_prime.samples.min()),
            "message": self.message,
            "geometry": None if self.geometry is None else self.geometry.to_dict(),
            "residuals": None if self.residuals is None else self.residuals.to_dict(),
            "w_cos": a.tolist(),
            "w_sin": b.tolist(),
        }


# ---------------------------------------------------------------------------
# parametrization

class _Coords:
    """Map between the rescaled vector ``y`` and ``(w, q)``."""

    def __init__(self, config: SolveConfig):
        self.N = config.active
        self.M = config.M
        self.joint = config.mode == "joint"
        n = np.arange(1, self.N + 1, dtype=float)
        m = config.model
        e22, c2, g = m.e22_rest(), config.c2, config.g
        h = np.pi * (1.0 + c2 * n + g + e22 * n ** 4)
        self.scale_a = 1.0 / np.sqrt(h)
        self.scale_b = 1.0 / np.sqrt(h[1:])
        if self.joint:
            e11 = float(m.hess(1.0, 0.0)[0])
            hq = np.pi * (1.0 + e11) * np.ones_like(n)
            self.scale_q = 1.0 / np.sqrt(hq)

    @property
    def size(self) -> int:
        k = 2 * self.N - 1
        return k + 2 * self.N if self.joint else k

    def split(self, y):
        N = self.N
        a = y[:N] * self.scale_a
        b = np.concatenate([[0.0], y[N:2 * N - 1] * self.scale_b])
        w = Field.from_modes(a, b, self.M)
        if not self.joint:
            return w, None
        qa = y[2 * N - 1:3 * N - 1] * self.scale_q
        qb = y[3 * N - 1:] * self.scale_q
        return w, Field.from_modes(qa, qb, self.M)

    def pack(self, w: Field, q: Field | None = None):
        a, b = w.cos_sin(self.N)
        y = [a / self.scale_a, b[1:] / self.scale_b]
        if self.joint:
            qa, qb = (np.zeros(self.N), np.zeros(self.N)) if q is None else sp.resample(q, self.M).cos_sin(self.N)
            y += [qa / self.scale_q, qb / self.scale_q]
        return np.concatenate(y)

    def gradient(self, gw: Field, gq: Field | None = None):
        ga, gb = coefficient_gradient(gw, self.N)
        out = [ga * self.scale_a, gb[1:] * self.scale_b]
        if self.joint:
            qa, qb = coefficient_gradient(gq, self.N)
            out += [qa * self.scale_q, qb * self.scale_q]
        return np.concatenate(out)


class _Objective:
    """``-J`` and its gradient in rescaled coordinates, with a warm-started multiplier."""

    def __init__(self, config: SolveConfig, coords: _Coords):
        self.cfg = config
        self.coords = coords
        self.gamma = 0.0
        self.evals = 0

    def state(self, y) -> WaveState:
        cfg = self.cfg
        w, q = self.coords.split(y)
        if q is None:
            _, st = reduced_functional(w, cfg.model, cfg.c2, cfg.g, self.gamma)
            return st
        return WaveState(w, normalized_chi_prime(sp.resample(q, 2 * cfg.M)), cfg.c2, cfg.g)

    def __call__(self, y):
        """``(-J, -grad J, state)``; raises on degenerate geometry."""
        self.evals += 1
        st = self.state(y)
        if st.curve.omega.samples.min() < OMEGA_GUARD:
            raise DegenerateCurveError("Omega below guard")
        if st.gamma0 is not None:
            self.gamma = st.gamma0
        val = j0(st, self.cfg.model)
        gw = grad_w_fixed_chi(st, self.cfg.model)
        gq = grad_q(st, self.cfg.model) if self.coords.joint else None
        return -val, -self.coords.gradient(gw, gq), st, gw


# ---------------------------------------------------------------------------
# public api

def initial_guess(config: SolveConfig) -> WaveState:
    """``w = eps0 cos(tau)`` and ``chi'`` proportional to ``1 + eps0 cos(tau)``."""
    M, eps = config.M, config.eps0
    w = Field.from_modes([eps], [], M)
    chi = Field.from_function(lambda t: 1.0 + eps * np.cos(t), 2 * M)
    return WaveState(w, Field(chi.samples / chi.samples.mean()), config.c2, config.g)


def _lbfgs_direction(g, pairs):
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * np.dot(s, q)
        alphas.append(a)
        q -= a * y
    if pairs:
        s, y, _ = pairs[-1]
        q *= np.dot(s, y) / np.dot(y, y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * np.dot(y, q)
        q += (a - b) * s
    return -q


def _small(grad_sup, g, tol, joint) -> bool:
    return grad_sup <= tol and (not joint or float(np.max(np.abs(g))) <= tol)


def gradient_noise_floor(state: WaveState, config: SolveConfig) -> float:
    """Change of the gradient field under a unit-roundoff perturbation of ``w``.

    The gradient carries a fourth-order operator, so rounding in the samples of
    ``w`` alone limits how small its sup norm can get.
    """
    rng = np.random.default_rng(12345)
    w = state.w
    xi = rng.standard_normal(w.M)
    wp = Field(w.samples * (1.0 + np.finfo(float).eps * xi))
    wp = wp - sp.mean(wp)
    try:
        if config.mode == "joint":
            other = WaveState(wp, state.chi_prime, state.c2, state.g)
        else:
            _, other = reduced_functional(wp, config.model, state.c2, state.g, state.gamma0 or 0.0)
        base = grad_w_fixed_chi(state, config.model)
        return float((grad_w_fixed_chi(other, config.model) - base).sup())
    except (DegenerateCurveError, RootFindError):
        return float("inf")


def maximize(config: SolveConfig, start: WaveState | None = None) -> SolveResult:
    """Maximize ``J~`` (or ``J0`` jointly) from ``start`` or the initial guess."""
    if config.check:
        rep = check_hypotheses(config.model, config.c2, config.g, config.mu_star, interval=False)
        for name in ("H2", "H3", "H4"):
            if rep.status(name) == "fail":
                raise ValueError(f"energy model fails {name}: {rep.hypotheses[name].detail}")
        if rep.status("H6") == "fail":
            log.warning("c2 at or below the nontrivial threshold: %s", rep.hypotheses["H6"].detail)

    coords = _Coords(config)
    obj = _Objective(config, coords)
    start = initial_guess(config) if start is None else start
    w0 = start.w if start.w.M == config.M else sp.resample(start.w, config.M)
    y = coords.pack(w0, start.q if coords.joint else None)
    f, g, st, gw = obj(y)
    history = [-f]
    pairs: deque = deque(maxlen=config.history)
    message, restarted = "", False
    it = 0
    grad_sup = gw.sup()
    best, since_best, j_ref = grad_sup, 0, -f
    for it in range(1, config.max_iter + 1):
        if _small(grad_sup, g, config.tol_grad, coords.joint):
            it -= 1
            break
        if since_best >= STALL_ITERATIONS:
            message = "stalled"
            it -= 1
            break
        d = _lbfgs_direction(g, list(pairs))
        slope = float(np.dot(g, d))
        if not slope < 0:
            pairs.clear()
            d, slope = -g, -float(np.dot(g, g))
        step = 1.0 if pairs else min(1.0, 1.0 / max(np.max(np.abs(g)), 1e-300))
        accepted = False
        for _ in range(60):
            y_new = y + step * d
            try:
                f_new, g_new, st_new, gw_new = obj(y_new)
            except (DegenerateCurveError, RootFindError, FloatingPointError):
                step *= 0.5
                continue
            armijo = f_new <= f + config.armijo * step * slope
            slope_new = float(np.dot(g_new, d))
            # near the optimum the decrease drowns in rounding; fall back on the slope
            noise = 1e-13 * max(1.0, abs(f))
            approx = f_new <= f + noise and abs(slope_new) <= 0.9 * abs(slope)
            if armijo or approx:
                accepted = True
                break
            step *= config.backtrack
        if not accepted:
            if restarted or not pairs:
                message = "line search failed"
                it -= 1
                break
            log.info("restarting from a gradient step at iteration %d", it)
            pairs.clear()
            restarted = True
            continue
        s, yy = y_new - y, g_new - g
        sy = float(np.dot(s, yy))
        if sy > 1e-16 * np.dot(yy, yy):
            pairs.append((s, yy, 1.0 / sy))
        y, f, g, st, gw = y_new, f_new, g_new, st_new, gw_new
        grad_sup = gw.sup()
        history.append(-f)
        # progress means a clearly smaller gradient or a clearly larger J
        if grad_sup < 0.9 * best or -f - j_ref > 1e-10 * abs(f):
            best, since_best, j_ref = min(best, grad_sup), 0, -f
        else:
            since_best += 1
        if it % 25 == 0:
            log.debug("iter %d  J=%.16g  |grad|=%.3e", it, -f, grad_sup)
    else:
        message = "iteration limit reached"
        it = config.max_iter

    floor = gradient_noise_floor(st, config)
    tol_eff = max(config.tol_grad, FLOOR_FACTOR * floor)
    converged = _small(grad_sup, g, tol_eff, coords.joint)
    if converged:
        message = "converged" if grad_sup <= config.tol_grad else "converged at rounding floor"
    trivial = st.w.sup() < TRIVIAL_HEIGHT
    geo = check_bounds(st.w)
    if geo.self_intersects:
        message += "; profile self-intersects"
    res = certify(st, config.model)
    return SolveResult(st, -f, it, converged, grad_sup, trivial, floor, tol_eff, geo, res,
                       message, history)


def continuation_sweep(config: SolveConfig, schedule=None) -> list[dict]:
    """Solve along ``schedule`` (defaults to ``config.schedule``), warm-starting each point.

    Returns one record per ``c2``: ``{"c2", "admissible", "result", "error"}``.
    """
    schedule = list(config.schedule if schedule is None else schedule)
    interval = admissible_c2_interval(config.model, config.g, config.mu_star)
    out, warm = [], None
    for c2 in schedule:
        rec = {"c2": float(c2), "admissible": interval.contains(c2), "result": None, "error": None}
        try:
            cfg = replace(config, c2=float(c2), check=False)
            res = maximize(cfg, warm)
            rec["result"] = res
            if res.converged and not res.trivial:
                warm = res.state
        except Exception as exc:  # one bad point must not end the sweep
            rec["error"] = f"{type(exc).__name__}: {exc}"
        out.append(rec)
    return out

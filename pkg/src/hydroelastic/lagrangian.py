"""Lagrangian of the hydroelastic wave problem and its gradients.

Conventions: ``w`` is a zero-mean band-limited field on a base grid of ``M``
nodes; every nonlinear quantity lives on the padded grid of ``2M`` nodes.
``chi_prime`` (the membrane re-parametrization) is held directly on the padded
grid, where the inner problem is solved pointwise.

Kinetic term: ``K = (c^2/2) int w Cw'``, which is nonnegative (``C d/dtau`` has
symbol ``|n|``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import spectral as sp
from .energy import EnergyModel, RootFindError, estar_hess, euler_chi_field, varpi
from .geometry import CurveFields
from .spectral import Field, TWO_PI


def normalized_chi_prime(q: Field) -> Field:
    """``exp(q) / mean(exp(q))``: positive with unit mean."""
    e = np.exp(q.samples - q.samples.max())
    return Field(e / e.mean())


@dataclass(frozen=True, eq=False)
class WaveState:
    """Candidate solution ``(w, chi')`` at wave speed squared ``c2`` and gravity ``g``."""

    w: Field
    chi_prime: Field
    c2: float
    g: float = 1.0
    gamma0: float | None = None     # multiplier from the inner solve, if any

    def __post_init__(self):
        if self.chi_prime.M != 2 * self.w.M:
            raise ValueError("chi_prime must live on the padded grid (2M nodes)")
        if abs(sp.mean(self.w)) > 1e-13 * max(1.0, self.w.sup()):
            raise ValueError(f"w must have zero mean, got {sp.mean(self.w):.3e}")
        if not np.all(self.chi_prime.samples > 0):
            raise ValueError("chi_prime must be positive")
        if abs(sp.mean(self.chi_prime) - 1.0) > 1e-12:
            raise ValueError(f"chi_prime must have unit mean, got {sp.mean(self.chi_prime)!r}")

    @classmethod
    def from_q(cls, w: Field, q: Field, c2: float, g: float = 1.0) -> "WaveState":
        return cls(w, normalized_chi_prime(sp.resample(q, 2 * w.M)), c2, g)

    @classmethod
    def trivial(cls, M: int, c2: float, g: float = 1.0) -> "WaveState":
        return cls(Field.constant(0.0, M), Field.constant(1.0, 2 * M), c2, g)

    @property
    def M(self) -> int:
        return self.w.M

    @property
    def q(self) -> Field:
        lq = np.log(self.chi_prime.samples)
        return Field(lq - lq.mean())

    @cached_property
    def curve(self) -> CurveFields:
        return CurveFields.from_elevation(self.w)

    @cached_property
    def a0(self) -> float:
        return mass_shift_a0(self.w)

    @property
    def nu(self) -> Field:
        return Field(self.curve.omega.samples / self.chi_prime.samples)

    @property
    def mu(self) -> Field:
        return Field(self.curve.dtheta.samples / self.chi_prime.samples)

    @property
    def chi(self) -> np.ndarray:
        """``chi(tau)`` at the padded nodes, ``chi(0) = 0``."""
        return sp.antiderivative_zero_start(self.chi_prime).samples

    def with_chi(self, chi_prime: Field, gamma0: float | None = None) -> "WaveState":
        return WaveState(self.w, chi_prime, self.c2, self.g, gamma0)


# ---------------------------------------------------------------------------
# functionals

def mass_shift_a0(w: Field) -> float:
    """``-mean(w Cw')``; never positive."""
    wp = sp.resample(w, 2 * w.M)
    return -float(np.mean(wp.samples * sp.hilbert_derivative(wp).samples))


def kinetic_potential_I0(state: WaveState) -> float:
    cf = state.curve
    w, cdw = cf.w.samples, cf.cdw.samples
    A1 = TWO_PI * float(np.mean(w * cdw))
    A2 = TWO_PI * float(np.mean(w * w * (1.0 + cdw)))
    return 0.5 * state.c2 * A1 - 0.5 * state.g * A2 + state.g / (4 * np.pi) * A1 * A1


def elastic(state: WaveState, model: EnergyModel) -> float:
    """``int chi' E(Omega/chi', Theta'/chi')`` by the trapezoid rule on the padded grid."""
    chi = state.chi_prime.samples
    E = model.eval(state.nu.samples, state.mu.samples)
    return TWO_PI * float(np.mean(chi * E))


def j0(state: WaveState, model: EnergyModel) -> float:
    return kinetic_potential_I0(state) - elastic(state, model)


def grad_I0(state: WaveState) -> Field:
    """L2 gradient of ``I0`` on the base grid (mean ``g a0`` kept)."""
    cf = state.curve
    w, cdw = cf.w, cf.cdw
    wwp = Field(w.samples * cf.dw.samples)
    g = state.g
    field = ((state.c2 - 2 * g * state.a0) * cdw.samples
             - g * (w.samples * (1.0 + cdw.samples) + sp.hilbert(wwp).samples))
    return sp.resample(Field(field), state.M)


def euler_chi_values(state: WaveState, model: EnergyModel) -> Field:
    """``E - grad E . (nu, mu)`` along the profile (padded grid)."""
    return Field(euler_chi_field(model, state.nu.samples, state.mu.samples))


# ---------------------------------------------------------------------------
# inner problem in chi

def inner_chi_solve(w: Field, model: EnergyModel, gamma_guess: float = 0.0,
                    tol: float = 1e-13, max_iter: int = 100) -> tuple[Field, float]:
    """Minimize the elastic energy over ``chi'`` with ``mean(chi') = 1``.

    The minimizer is ``chi' = Omega varpi(sigma; gamma0)`` with the scalar
    ``gamma0`` fixed by the mean condition, solved by safeguarded Newton.
    """
    cf = CurveFields.from_elevation(w)
    om, sig = cf.omega.samples, cf.sigma.samples

    def h(gamma):
        t = varpi(model, sig, gamma)
        return float(np.mean(om * t)) - 1.0, t

    gamma = float(gamma_guess)
    val, t = h(gamma)
    lo, hi = (-np.inf, gamma) if val > 0 else (gamma, np.inf)
    step = 1.0
    for _ in range(200):
        if np.isfinite(lo) and np.isfinite(hi):
            break
        probe = lo + step if np.isinf(hi) else hi - step
        v, _ = h(probe)
        if v > 0:
            hi = probe
        else:
            lo = probe
        step *= 2.0
    else:
        raise RootFindError("inner chi solve: cannot bracket the multiplier")

    for _ in range(max_iter):
        if abs(val) <= tol:
            break
        h11 = estar_hess(model, t, sig)[0]
        slope = float(np.mean(om / h11))
        new = gamma - val / slope if slope > 0 else 0.5 * (lo + hi)
        if not lo < new < hi:
            new = 0.5 * (lo + hi)
        gamma = new
        val, t = h(gamma)
        if val > 0:
            hi = gamma
        elif val < 0:
            lo = gamma
        if hi - lo <= 4e-16 * max(1.0, abs(gamma)):
            break
    chi = om * t
    return Field(chi / chi.mean()), gamma


def solve_state(w: Field, model: EnergyModel, c2: float, g: float = 1.0,
                gamma_guess: float = 0.0) -> WaveState:
    """State at ``w`` with ``chi'`` from the inner problem."""
    chi, gamma = inner_chi_solve(w, model, gamma_guess)
    return WaveState(w, chi, c2, g, gamma)


def reduced_functional(w: Field, model: EnergyModel, c2: float, g: float = 1.0,
                       gamma_guess: float = 0.0) -> tuple[float, WaveState]:
    """``J~(w) = J0(w, chi*(w))`` and the state realizing it."""
    state = solve_state(w, model, c2, g, gamma_guess)
    return j0(state, model), state


# ---------------------------------------------------------------------------
# gradients

def _elastic_w_gradient(state: WaveState, model: EnergyModel) -> Field:
    """L2 gradient in ``w`` of the elastic energy at fixed ``chi'`` (padded grid).

    ``(L* f)'`` with ``f = C T - Q``, ``T = (E_2)'``, ``Q = E_1 Omega`` and
    ``L* f = w' f / Omega^2 - C((1 + Cw') f / Omega^2)``.
    """
    cf = state.curve
    om = cf.omega.samples
    E1, E2 = model.grad(state.nu.samples, state.mu.samples)
    T = sp.derivative(Field(E2))
    f = sp.hilbert(T).samples - E1 * om
    fo = f / (om * om)
    Lstar = cf.dw.samples * fo - sp.hilbert(Field((1.0 + cf.cdw.samples) * fo)).samples
    return sp.derivative(Field(Lstar))


def grad_w_fixed_chi(state: WaveState, model: EnergyModel) -> Field:
    """Gradient of ``J0`` in ``w`` with ``chi'`` frozen, mean removed, on the base grid."""
    gI = sp.resample(grad_I0(state), 2 * state.M)
    gE = _elastic_w_gradient(state, model)
    g = Field(gI.samples - gE.samples)
    g = sp.resample(g, state.M)
    return g - sp.mean(g)


def grad_w_reduced(w: Field, model: EnergyModel, c2: float, g: float = 1.0,
                   state: WaveState | None = None) -> Field:
    """Gradient of ``J~``; the inner optimum contributes nothing at first order."""
    if state is None:
        state = solve_state(w, model, c2, g)
    return grad_w_fixed_chi(state, model)


def grad_q(state: WaveState, model: EnergyModel) -> Field:
    """Gradient of ``J0`` in ``q`` where ``chi' = exp(q)/mean(exp(q))`` (padded grid)."""
    chi = state.chi_prime.samples
    G = euler_chi_values(state, model).samples
    return Field(-chi * (G - np.mean(chi * G)))


def coefficient_gradient(grad: Field, modes: int) -> tuple[np.ndarray, np.ndarray]:
    """Partials in the cosine and sine coefficients of modes ``1..modes``."""
    c = grad.coeffs[1: modes + 1]
    return TWO_PI * c.real, -TWO_PI * c.imag

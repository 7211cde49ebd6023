"""Certification of a wave state against the Euler-Lagrange system.

Each residual is computed from the state alone, independently of the
optimizer that produced it.  Derivatives of ``E_1`` and ``E_2`` along the
profile are taken spectrally from their sampled values on the padded grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral as sp
from .energy import EnergyModel
from .lagrangian import WaveState, euler_chi_values, grad_I0
from .spectral import Field


def _padded(f: Field, state: WaveState) -> Field:
    return sp.resample(f, 2 * state.M) if f.M == state.M else f


# ---------------------------------------------------------------------------
# the operator L and relatives

def op_L(u: Field, state: WaveState) -> Field:
    """``(w'u + (1 + Cw')Cu) / Omega^2``."""
    cf = state.curve
    u = _padded(u, state)
    om2 = cf.omega.samples ** 2
    return Field((cf.dw.samples * u.samples + (1.0 + cf.cdw.samples) * sp.hilbert(u).samples) / om2)


def op_L_inverse(v: Field, state: WaveState) -> Field:
    """``w'v - (1 + Cw')Cv``."""
    cf = state.curve
    v = _padded(v, state)
    return Field(cf.dw.samples * v.samples - (1.0 + cf.cdw.samples) * sp.hilbert(v).samples)


def op_L_adjoint(f: Field, state: WaveState) -> Field:
    """``w'f/Omega^2 - C((1 + Cw') f / Omega^2)``, the adjoint of ``L`` for the mean pairing."""
    cf = state.curve
    f = _padded(f, state)
    fo = f.samples / cf.omega.samples ** 2
    return Field(cf.dw.samples * fo - sp.hilbert(Field((1.0 + cf.cdw.samples) * fo)).samples)


def op_L_inverse_adjoint(f: Field, state: WaveState) -> Field:
    """``w'f + C((1 + Cw') f)``."""
    cf = state.curve
    f = _padded(f, state)
    return Field(cf.dw.samples * f.samples + sp.hilbert(Field((1.0 + cf.cdw.samples) * f.samples)).samples)


# ---------------------------------------------------------------------------
# residuals

def _material_fields(state: WaveState, model: EnergyModel):
    E1, E2 = model.grad(state.nu.samples, state.mu.samples)
    return Field(E1), Field(E2)


def residual_euler_chi(state: WaveState, model: EnergyModel) -> tuple[float, float]:
    """``(std, mean)`` of ``E - grad E . (nu, mu)`` over the padded grid."""
    G = euler_chi_values(state, model).samples
    return float(np.std(G)), float(np.mean(G))


@dataclass(frozen=True)
class EulerWResidual:
    adjoint_sup: float
    primitive_sup: float


def residual_euler_w_forms(state: WaveState, model: EnergyModel) -> EulerWResidual:
    """Both forms of the Euler equation in ``w``.

    Adjoint form: ``grad I0 - g a0 - (L*(CT - Q))'`` with ``T = (E_2)'`` and
    ``Q = E_1 Omega``.  Primitive form: ``C E_2 - const - int_0^tau (m0 + Q - b0)``
    with ``m0 = (L^-1)*(int_0^tau (grad I0 - lambda0))``, ``lambda0 = [grad I0]``,
    ``b0 = [m0 + Q]`` and the constant fixed by matching means.
    """
    cf = state.curve
    E1, E2 = _material_fields(state, model)
    Q = Field(E1.samples * cf.omega.samples)
    T = sp.derivative(E2)
    f = sp.hilbert(T) - Q
    gI = sp.resample(grad_I0(state), 2 * state.M)
    adj = gI.samples - state.g * state.a0 - sp.derivative(op_L_adjoint(f, state)).samples

    lam0 = sp.mean(gI)
    integ = sp.antiderivative_zero_start(gI - lam0).periodic
    m0 = op_L_inverse_adjoint(integ, state)
    b0 = sp.mean(m0 + Q)
    rhs = sp.antiderivative_zero_start(m0 + Q - b0).periodic
    lhs = sp.hilbert(E2)
    prim = lhs.samples - rhs.samples
    prim = prim - prim.mean()
    return EulerWResidual(float(np.max(np.abs(adj))), float(np.max(np.abs(prim))))


def residual_euler_w(state: WaveState, model: EnergyModel) -> float:
    return residual_euler_w_forms(state, model).adjoint_sup


def pressure(state: WaveState, model: EnergyModel) -> Field:
    """``(1/Omega)((E_2)'/Omega)' - sigma E_1`` on the padded grid."""
    cf = state.curve
    om = cf.omega.samples
    E1, E2 = _material_fields(state, model)
    inner = Field(sp.derivative(E2).samples / om)
    return Field(sp.derivative(inner).samples / om - cf.sigma.samples * E1.samples)


def residual_material(state: WaveState, model: EnergyModel) -> float:
    """Sup norm of ``(E_1)' + sigma (E_2)'``."""
    E1, E2 = _material_fields(state, model)
    r = sp.derivative(E1).samples + state.curve.sigma.samples * sp.derivative(E2).samples
    return float(np.max(np.abs(r)))


def riemann_hilbert_check(state: WaveState, f: Field, a: float) -> tuple[float, float]:
    """``(sup|C(f w') + f(1 + Cw') - a|, sup|Omega^2 f - a|)``."""
    cf = state.curve
    f = _padded(f, state)
    lhs = sp.hilbert(Field(f.samples * cf.dw.samples)).samples + f.samples * (1.0 + cf.cdw.samples) - a
    rhs = cf.omega.samples ** 2 * f.samples - a
    return float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs)))


def dynamic_field(state: WaveState, model: EnergyModel, P: Field | None = None) -> Field:
    """``1 - (2g/c^2)(a0 + w) - (2/c^2) P - 1/Omega^2``."""
    cf = state.curve
    P = pressure(state, model) if P is None else P
    c2, g = state.c2, state.g
    r = (1.0 - 2 * g / c2 * (state.a0 + cf.w.samples) - 2.0 / c2 * P.samples
         - 1.0 / cf.omega.samples ** 2)
    return Field(r)


def residual_dynamic(state: WaveState, model: EnergyModel) -> float:
    return dynamic_field(state, model).sup()


# ---------------------------------------------------------------------------
# report

@dataclass(frozen=True)
class ResidualReport:
    euler_chi_std: float
    gamma0: float
    gamma0_inner: float | None
    euler_w_sup: float
    euler_w_primitive_sup: float
    material_sup: float
    rh_sup: float
    dynamic_sup: float
    mean_log_omega: float
    pressure: Field

    def to_dict(self) -> dict:
        return {
            "euler_chi_std": self.euler_chi_std,
            "gamma0": self.gamma0,
            "gamma0_inner": self.gamma0_inner,
            "euler_w_sup": self.euler_w_sup,
            "euler_w_primitive_sup": self.euler_w_primitive_sup,
            "material_sup": self.material_sup,
            "rh_sup": self.rh_sup,
            "dynamic_sup": self.dynamic_sup,
            "mean_log_omega": self.mean_log_omega,
        }


def certify(state: WaveState, model: EnergyModel) -> ResidualReport:
    std, gamma = residual_euler_chi(state, model)
    ew = residual_euler_w_forms(state, model)
    P = pressure(state, model)
    om2 = state.curve.omega.samples ** 2
    rh, _ = riemann_hilbert_check(state, Field(1.0 / om2), 1.0)
    return ResidualReport(
        euler_chi_std=std,
        gamma0=gamma,
        gamma0_inner=state.gamma0,
        euler_w_sup=ew.adjoint_sup,
        euler_w_primitive_sup=ew.primitive_sup,
        material_sup=residual_material(state, model),
        rh_sup=rh,
        dynamic_sup=dynamic_field(state, model, P).sup(),
        mean_log_omega=sp.mean(state.curve.log_omega),
        pressure=P,
    )

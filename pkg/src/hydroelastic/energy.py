"""Stored-energy densities ``E(nu, mu)`` for an unshearable elastic membrane.

``nu`` is the stretch and ``mu`` the bending strain (curvature times stretch).
Everything here is vectorized over numpy arrays.  Besides the models, the
module provides the dual density ``E*(t, sigma) = t E(1/t, sigma/t)``, the
implicit maps ``varpi`` and ``psi`` built from it, a grid-based hypothesis
checker and the admissible wave-speed interval.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import area_A


class ModelDomainError(ValueError):
    """Evaluation outside ``nu > 0`` (or ``t > 0`` for the dual density)."""


class RootFindError(RuntimeError):
    """A monotone scalar root could not be bracketed."""


# ---------------------------------------------------------------------------
# models

class EnergyModel:
    """Base class: subclasses implement ``eval``, ``grad`` and ``hess``.

    ``r``, ``s``, ``p`` are the growth exponents of ``nu^r``, ``nu^-s`` and
    ``|mu|^p``; ``smoothness`` is the differentiability class.
    """

    r: float
    s: float
    p: float
    smoothness: int = 2
    family: str = "abstract"

    def eval(self, nu, mu):
        raise NotImplementedError

    def grad(self, nu, mu):
        raise NotImplementedError

    def hess(self, nu, mu):
        raise NotImplementedError

    def __call__(self, nu, mu):
        return self.eval(nu, mu)

    @staticmethod
    def _check(nu):
        nu = np.asarray(nu, dtype=float)
        if np.any(~(nu > 0)):
            raise ModelDomainError("stored energy needs nu > 0")
        return nu

    def e22_rest(self) -> float:
        """``E_22(1, 0)``, the linear bending stiffness of the rest state."""
        return float(self.hess(1.0, 0.0)[2])

    def params(self) -> dict:
        return {}


def _stretch(a, r, s, nu):
    """``a [(nu^r - 1)/r + (nu^-s - 1)/s]`` and its first two derivatives."""
    lg = np.log(nu)
    S = a * (np.expm1(r * lg) / r + np.expm1(-s * lg) / s)
    S1 = a * (nu ** (r - 1) - nu ** (-s - 1))
    S2 = a * ((r - 1) * nu ** (r - 2) + (s + 1) * nu ** (-s - 2))
    return S, S1, S2


@dataclass(frozen=True)
class IllustrativeEnergy(EnergyModel):
    """``(a/s) nu^-s + (a/r) nu^r + b|mu|^p + beta mu^2 + d |mu|^alpha / nu^delta - a(s+r)/(sr)``."""

    a: float
    b: float
    beta: float
    d: float
    r: float
    s: float
    p: float
    alpha: float
    delta: float
    family = "illustrative"

    def __post_init__(self):
        for name in ("a", "b", "beta", "d", "s", "delta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.r > 1:
            raise ValueError(f"need r > 1, got r={self.r}")
        if not self.alpha >= 2:
            raise ValueError(f"need alpha >= 2, got alpha={self.alpha}")
        if not self.p > 2:
            raise ValueError(f"need p > 2, got p={self.p}")

    @property
    def beta0(self) -> float:
        """Quadratic bending coefficient at the rest state."""
        return self.beta + self.d if self.alpha == 2 else self.beta

    def params(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}

    def eval(self, nu, mu):
        nu = self._check(nu)
        mu = np.asarray(mu, dtype=float)
        am = np.abs(mu)
        S, _, _ = _stretch(self.a, self.r, self.s, nu)
        return S + self.b * am ** self.p + self.beta * mu * mu + self.d * am ** self.alpha * nu ** -self.delta

    def grad(self, nu, mu):
        nu = self._check(nu)
        mu = np.asarray(mu, dtype=float)
        am, sg = np.abs(mu), np.sign(mu)
        _, S1, _ = _stretch(self.a, self.r, self.s, nu)
        mix = self.d * nu ** -self.delta
        E1 = S1 - self.delta * mix * am ** self.alpha / nu
        E2 = (self.b * self.p * am ** (self.p - 1) * sg + 2 * self.beta * mu
              + self.alpha * mix * am ** (self.alpha - 1) * sg)
        return E1, E2

    def hess(self, nu, mu):
        nu = self._check(nu)
        mu = np.asarray(mu, dtype=float)
        am, sg = np.abs(mu), np.sign(mu)
        _, _, S2 = _stretch(self.a, self.r, self.s, nu)
        al, de = self.alpha, self.delta
        mix = self.d * nu ** -de
        E11 = S2 + de * (de + 1) * mix * am ** al / (nu * nu)
        E12 = -de * al * mix * am ** (al - 1) * sg / nu
        E22 = (self.b * self.p * (self.p - 1) * am ** (self.p - 2) + 2 * self.beta
               + al * (al - 1) * mix * am ** (al - 2))
        return E11, E12, E22


@dataclass(frozen=True)
class SplittingEnergy(EnergyModel):
    """``S(nu) + B(mu)`` with the stretch part of the illustrative family and ``B = (b/2) mu^2 + b1 mu^4``."""

    a: float
    r: float
    s: float
    b: float
    b1: float
    p: float = 4.0
    family = "splitting"

    def params(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}

    def eval(self, nu, mu):
        nu = self._check(nu)
        mu = np.asarray(mu, dtype=float)
        return _stretch(self.a, self.r, self.s, nu)[0] + 0.5 * self.b * mu ** 2 + self.b1 * mu ** 4

    def grad(self, nu, mu):
        nu = self._check(nu)
        mu = np.asarray(mu, dtype=float)
        return _stretch(self.a, self.r, self.s, nu)[1], self.b * mu + 4 * self.b1 * mu ** 3

    def hess(self, nu, mu):
        nu = self._check(nu)
        mu = np.asarray(mu, dtype=float)
        S2 = _stretch(self.a, self.r, self.s, nu)[2]
        return S2, np.zeros(np.broadcast(nu, mu).shape), self.b + 12 * self.b1 * mu ** 2

    def stretch(self, nu):
        return _stretch(self.a, self.r, self.s, self._check(nu))[0]


# ---------------------------------------------------------------------------
# dual density

def _dual_args(t, sigma):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise ModelDomainError("dual density needs t > 0")
    nu = 1.0 / t
    return nu, np.asarray(sigma, dtype=float) * nu


def estar(model: EnergyModel, t, sigma):
    """``E*(t, sigma) = t E(1/t, sigma/t)``."""
    nu, mu = _dual_args(t, sigma)
    return model.eval(nu, mu) / nu


def estar_grad(model: EnergyModel, t, sigma):
    """``(E*_1, E*_2) = (E - nu E_1 - mu E_2, E_2)`` at ``(nu, mu) = (1/t, sigma/t)``."""
    nu, mu = _dual_args(t, sigma)
    E = model.eval(nu, mu)
    E1, E2 = model.grad(nu, mu)
    return E - nu * E1 - mu * E2, E2


def estar_hess(model: EnergyModel, t, sigma):
    nu, mu = _dual_args(t, sigma)
    E11, E12, E22 = model.hess(nu, mu)
    h11 = nu * (nu * nu * E11 + 2 * nu * mu * E12 + mu * mu * E22)
    h12 = -nu * (nu * E12 + mu * E22)
    h22 = nu * E22
    return h11, h12, h22


def euler_chi_field(model: EnergyModel, nu, mu):
    """``E - grad E . (nu, mu)``; equals ``E*_1(1/nu, mu/nu)``."""
    E = model.eval(nu, mu)
    E1, E2 = model.grad(nu, mu)
    return E - nu * E1 - mu * E2


def _euler_chi_scale(model, t, sigma):
    nu, mu = _dual_args(t, sigma)
    E = model.eval(nu, mu)
    E1, E2 = model.grad(nu, mu)
    return np.abs(E) + np.abs(nu * E1) + np.abs(mu * E2)


# ---------------------------------------------------------------------------
# implicit maps

T_BRACKET = (1e-8, 1e8)
MAX_EXPANSIONS = 200


def varpi(model: EnergyModel, sigma, gamma, tol: float = 1e-13, max_iter: int = 200):
    """The ``t > 0`` with ``E*_1(t, sigma) = gamma``, elementwise.

    ``E*_1`` increases in ``t`` under strict convexity, so a bracket always
    exists; Newton in ``log t`` is safeguarded by geometric bisection.
    """
    sigma, gamma = np.broadcast_arrays(np.asarray(sigma, float), np.asarray(gamma, float))
    shape = sigma.shape
    sig, gam = sigma.ravel().copy(), gamma.ravel().copy()
    lo = np.full(sig.size, T_BRACKET[0])
    hi = np.full(sig.size, T_BRACKET[1])

    def F(t, idx=slice(None)):
        return estar_grad(model, t, sig[idx])[0] - gam[idx]

    for _ in range(MAX_EXPANSIONS):
        bad = F(lo) > 0
        if not bad.any():
            break
        lo[bad] *= 0.5
    else:
        raise RootFindError("varpi: lower bracket expansion failed (model violates convexity/growth?)")
    for _ in range(MAX_EXPANSIONS):
        bad = F(hi) < 0
        if not bad.any():
            break
        hi[bad] *= 2.0
    else:
        raise RootFindError("varpi: upper bracket expansion failed (model violates convexity/growth?)")

    t = np.clip(np.ones_like(sig), lo, hi)
    for _ in range(max_iter):
        f = F(t)
        scale = _euler_chi_scale(model, t, sig) + np.abs(gam)
        done = np.abs(f) <= tol * np.maximum(scale, 1.0)
        lo = np.where(f < 0, t, lo)
        hi = np.where(f > 0, t, hi)
        if done.all():
            break
        dfdt = estar_hess(model, t, sig)[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            t_new = t - f / dfdt
        inside = (t_new > lo) & (t_new < hi) & np.isfinite(t_new)
        t_new = np.where(inside, t_new, np.sqrt(lo * hi))
        t_new = np.where(done, t, t_new)
        if np.all(np.abs(t_new - t) <= 4e-16 * t):
            t = t_new
            break
        t = t_new
    return t.reshape(shape) if shape else float(t[0])


def psi_map(model: EnergyModel, y, gamma):
    """``psi(y) = E*_2(varpi(y), y)``."""
    t = varpi(model, y, gamma)
    return estar_grad(model, t, y)[1]


def psi_prime(model: EnergyModel, y, gamma):
    """``(E*_11 E*_22 - E*_12^2) / E*_11`` along ``t = varpi(y)``."""
    t = varpi(model, y, gamma)
    h11, h12, h22 = estar_hess(model, t, y)
    return (h11 * h22 - h12 * h12) / h11


def psi_inverse(model: EnergyModel, v: float, gamma: float, tol: float = 1e-12,
                max_iter: int = 200) -> float:
    """Solve ``psi(y) = v`` for scalar ``v`` (``psi`` is strictly increasing)."""
    v = float(v)
    lo, hi = -1.0, 1.0
    for _ in range(MAX_EXPANSIONS):
        if psi_map(model, lo, gamma) <= v:
            break
        lo *= 2.0
    else:
        raise RootFindError("psi_inverse: cannot bracket from below")
    for _ in range(MAX_EXPANSIONS):
        if psi_map(model, hi, gamma) >= v:
            break
        hi *= 2.0
    else:
        raise RootFindError("psi_inverse: cannot bracket from above")
    y = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = float(psi_map(model, y, gamma)) - v
        if f > 0:
            hi = y
        elif f < 0:
            lo = y
        if abs(f) <= tol * max(1.0, abs(v)) or hi - lo <= 4e-16 * max(1.0, abs(y)):
            break
        y_new = y - f / float(psi_prime(model, y, gamma))
        y = y_new if lo < y_new < hi else 0.5 * (lo + hi)
    return float(y)


# ---------------------------------------------------------------------------
# hypothesis checks

PASS, FAIL, NOT_CHECKED = "pass", "fail", "not-checked"


@dataclass(frozen=True)
class GridSpec:
    """Sampling grids for the hypothesis checker."""

    nu_min: float = 1e-3
    nu_max: float = 1e3
    n_nu: int = 121
    mu_max: float = 1e3
    mu_min: float = 1e-8
    n_mu: int = 121
    special_nu_max: float = 100.0
    n_special: int = 400

    def nu(self) -> np.ndarray:
        return np.geomspace(self.nu_min, self.nu_max, self.n_nu)

    def mu(self, with_zero: bool = True) -> np.ndarray:
        pos = np.geomspace(self.mu_min, self.mu_max, self.n_mu)
        parts = [-pos[::-1], [0.0], pos] if with_zero else [-pos[::-1], pos]
        return np.concatenate(parts)

    def special_nu(self) -> np.ndarray:
        return 1.0 + np.geomspace(1e-8, self.special_nu_max - 1.0, self.n_special)


@dataclass
class HypothesisResult:
    status: str
    basis: str                      # "grid", "constants", "closed-form", "metadata"
    detail: str = ""
    witness: dict | None = None
    suggestion: dict | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class AdmissibleInterval:
    lo: float
    hi: float
    nu_argmin: float

    @property
    def empty(self) -> bool:
        return not self.hi > self.lo

    def contains(self, c2: float) -> bool:
        return self.lo < c2 <= self.hi

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "nu_argmin": self.nu_argmin, "empty": self.empty}


@dataclass
class HypothesisReport:
    hypotheses: dict[str, HypothesisResult]
    closed_form: dict[str, HypothesisResult] = field(default_factory=dict)
    admissible_c2: AdmissibleInterval | None = None

    def status(self, name: str) -> str:
        return {**self.hypotheses, **self.closed_form}[name].status

    @property
    def failures(self) -> list[str]:
        return [k for k, v in {**self.hypotheses, **self.closed_form}.items() if v.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "hypotheses": {k: v.to_dict() for k, v in self.hypotheses.items()},
            "closed_form": {k: v.to_dict() for k, v in self.closed_form.items()},
            "admissible_c2": None if self.admissible_c2 is None else self.admissible_c2.to_dict(),
        }


def _witness(nu, mu=None, **extra) -> dict:
    w = {"nu": float(nu)}
    if mu is not None:
        w["mu"] = float(mu)
    w.update({k: float(v) for k, v in extra.items()})
    return w


def _first(mask):
    idx = np.argwhere(mask)
    return tuple(idx[0]) if idx.size else None


def _check_h1(model, NU, MU):
    with np.errstate(all="ignore"):
        E = model.eval(NU, MU)
    bad = ~np.isfinite(E)
    if model.smoothness < 2:
        return HypothesisResult(FAIL, "metadata", f"model is only C^{model.smoothness}",
                                witness=_witness(1.0, 0.0))
    if bad.any():
        i = _first(bad)
        return HypothesisResult(FAIL, "grid", "non-finite energy", witness=_witness(NU[i], MU[i]))
    return HypothesisResult(PASS, "grid", "finite, C^2 by construction")


def _check_h2(model, NU, MU):
    E, Em = model.eval(NU, MU), model.eval(NU, -MU)
    bad = np.abs(E - Em) > 1e-12 * np.maximum(1.0, np.abs(E))
    if bad.any():
        i = _first(bad)
        return HypothesisResult(FAIL, "grid", "E(nu, mu) != E(nu, -mu)", witness=_witness(NU[i], MU[i]))
    return HypothesisResult(PASS, "grid", "even in mu on grid")


def _check_h3(model, NU, MU):
    E0 = float(model.eval(1.0, 0.0))
    if abs(E0) > 1e-12:
        return HypothesisResult(FAIL, "grid", f"E(1,0) = {E0:.3e}", witness=_witness(1.0, 0.0))
    E = model.eval(NU, MU)
    bad = E < -1e-12
    if bad.any():
        i = _first(bad)
        return HypothesisResult(FAIL, "grid", "negative energy", witness=_witness(NU[i], MU[i]))
    return HypothesisResult(PASS, "grid", "E >= 0 = E(1,0) on grid")


def _check_h4(model, NU, MU):
    E11, E12, E22 = model.hess(NU, MU)
    det = E11 * E22 - E12 * E12
    for name, q in (("E11", E11), ("E22", E22), ("det", det)):
        bad = ~(q > 0)
        if bad.any():
            i = _first(bad)
            return HypothesisResult(FAIL, "grid", f"{name} <= 0", witness=_witness(NU[i], MU[i]))
    return HypothesisResult(PASS, "grid", "Hessian minors positive on grid (|mu| >= mu_min)")


def _check_h5(model, NU, MU, consts):
    if not (model.r > 2 and model.s > 0 and model.p > 1):
        return HypothesisResult(FAIL, "metadata", f"exponents r={model.r}, s={model.s}, p={model.p}",
                                witness=_witness(1.0, 0.0))
    phi = NU ** model.r + NU ** -model.s + np.abs(MU) ** model.p
    E = model.eval(NU, MU)
    far = phi >= 10.0
    K0_sug = float(np.min(E[far] / phi[far])) if far.any() else None
    suggestion = None
    if K0_sug is not None and K0_sug > 0:
        suggestion = {"K0": K0_sug, "K0_prime": float(np.max(K0_sug * phi - E))}
    if not consts:
        return HypothesisResult(NOT_CHECKED, "constants", "no constants supplied", suggestion=suggestion)
    K0, K0p = consts["K0"], consts["K0_prime"]
    bad = E < K0 * phi - K0p
    if bad.any():
        i = _first(bad)
        return HypothesisResult(FAIL, "constants", "growth bound violated",
                                witness=_witness(NU[i], MU[i]), suggestion=suggestion)
    return HypothesisResult(PASS, "constants", "verified on grid with supplied constants",
                            suggestion=suggestion)


def _check_h6(model, c2, g):
    thr = g + model.e22_rest()
    if c2 > thr:
        return HypothesisResult(PASS, "closed-form", f"c2={c2:.6g} > g+E22(1,0)={thr:.6g}")
    return HypothesisResult(FAIL, "closed-form", f"c2={c2:.6g} <= g+E22(1,0)={thr:.6g}",
                            witness=_witness(1.0, 0.0, c2=c2, threshold=thr))


def special_rhs(nu, c2, g):
    """Right side of the non-self-intersection energy bound as a function of ``nu >= 1``."""
    A = np.array([area_A(v) for v in np.atleast_1d(nu)])
    return g / (8 * np.pi ** 2) * A ** 2 + c2 / (4 * np.pi) * A + 0.5 * g * A * np.sqrt(np.atleast_1d(nu) ** 2 - 1)


def _check_h7(model, c2, g, mu_star, grids):
    nu = grids.special_nu()
    lhs = model.eval(nu, mu_star)
    rhs = special_rhs(nu, c2, g)
    bad = lhs < rhs
    if bad.any():
        i = int(np.argmax(bad))
        return HypothesisResult(FAIL, "grid", "energy bound at mu* violated",
                                witness=_witness(nu[i], mu_star, lhs=lhs[i], rhs=rhs[i]))
    return HypothesisResult(PASS, "grid", f"holds on (1, {grids.special_nu_max:g}]",
                            suggestion={"min_margin": float(np.min(lhs - rhs))})


def bounded_stretch_profile(model, nu, mu):
    """``inf_mu (grad E . (nu, mu) - E)`` for each ``nu`` over the sampled ``mu``."""
    NU, MU = np.meshgrid(nu, mu, indexing="ij")
    return np.min(-euler_chi_field(model, NU, MU), axis=1)


def _check_h8(model, grids):
    nu = grids.nu()
    nu = nu[nu >= 1.0]
    h = bounded_stretch_profile(model, nu, grids.mu())
    tail = h[len(h) // 2:]
    increasing = np.all(np.diff(tail) > 0)
    if increasing and tail[-1] > tail[0]:
        return HypothesisResult(PASS, "grid", "consistent on grid: increasing trend (not a proof)",
                                suggestion={"value_at_nu_max": float(h[-1])})
    j = int(np.argmin(np.diff(tail))) + len(h) // 2
    return HypothesisResult(FAIL, "grid", "inf_mu(grad E.(nu,mu) - E) not increasing",
                            witness=_witness(nu[j + 1], None, value=h[j + 1]))


def _region(NU, MU, nu_bar, mu_bar):
    return (NU <= nu_bar) & (np.abs(MU) >= mu_bar)


def _bound_check(name, NU, MU, lhs, phi, consts, key, upper=True, default_region=(0.5, 2.0)):
    nu_bar = consts.get("nu_bar", default_region[0]) if consts else default_region[0]
    mu_bar = consts.get("mu_bar", default_region[1]) if consts else default_region[1]
    reg = _region(NU, MU, nu_bar, mu_bar)
    ratio = lhs[reg] / phi[reg]
    sug = None
    if ratio.size:
        sug = {key: float(ratio.max() if upper else ratio.min()), "nu_bar": nu_bar, "mu_bar": mu_bar}
    if not consts or key not in consts:
        return HypothesisResult(NOT_CHECKED, "constants", "no constants supplied", suggestion=sug)
    K = consts[key]
    bad = reg & ((lhs > K * phi) if upper else (lhs < K * phi))
    if bad.any():
        i = _first(bad)
        return HypothesisResult(FAIL, "constants", f"{name} bound violated",
                                witness=_witness(NU[i], MU[i]), suggestion=sug)
    return HypothesisResult(PASS, "constants", "verified on grid with supplied constants", suggestion=sug)


def _check_h9(model, NU, MU, consts):
    E1, _ = model.grad(NU, MU)
    phi = NU ** -(model.s + 1) + np.abs(MU) ** model.p
    return _bound_check("E1 growth", NU, MU, np.abs(E1), phi, consts, "K1")


def _check_h10(model, NU, MU, consts):
    _, E2 = model.grad(NU, MU)
    phi = NU ** -(model.s * (model.p - 1) / model.p) + np.abs(MU) ** (model.p - 1)
    return _bound_check("E2 growth", NU, MU, np.abs(E2), phi, consts, "K2")


def _check_h11(model, consts, grids):
    """Level sets ``E - grad E.(nu, mu) = gamma`` traced through ``varpi``."""
    gamma = consts.get("gamma", 0.0) if consts else 0.0
    nu_bar = consts.get("nu_bar", 0.5) if consts else 0.5
    mu_bar = consts.get("mu_bar", 2.0) if consts else 2.0
    sig = np.geomspace(1e-6, 1e6, 4 * grids.n_mu)
    t = varpi(model, sig, gamma)
    nu, mu = 1.0 / t, sig / t
    reg = (nu <= nu_bar) | (mu >= mu_bar)
    ratio = mu[reg] ** model.p * nu[reg] ** model.s
    sug = None
    if ratio.size:
        sug = {"K": float(ratio.min()), "K_prime": float(ratio.max()), "gamma": gamma,
               "nu_bar": nu_bar, "mu_bar": mu_bar}
    if not consts or "K" not in consts:
        return HypothesisResult(NOT_CHECKED, "constants", "no constants supplied", suggestion=sug)
    K, Kp = consts["K"], consts["K_prime"]
    r_all = mu ** model.p * nu ** model.s
    bad = reg & ((r_all < K) | (r_all > Kp))
    if bad.any():
        i = int(np.argmax(bad))
        return HypothesisResult(FAIL, "constants", "level-set bound violated",
                                witness=_witness(nu[i], mu[i], gamma=gamma), suggestion=sug)
    return HypothesisResult(PASS, "constants", "verified on traced level set with supplied constants",
                            suggestion=sug)


def _check_h12(model, NU, MU, consts):
    eps = consts.get("eps", 0.1) if consts else 0.1
    expo = model.s * (model.p - 1) / model.p - eps
    _, E2 = model.grad(NU, MU)
    phi = NU ** expo * np.abs(MU) ** (model.p - 1)
    return _bound_check("E2 lower", NU, MU, np.abs(E2), phi, consts, "K3", upper=False)


def closed_form_conditions(model: IllustrativeEnergy, c2: float, g: float) -> dict[str, HypothesisResult]:
    """The four sufficient conditions of the illustrative family."""
    m = model
    out = {}
    if m.alpha > m.delta + 1:
        out["ill_ex_1"] = HypothesisResult(PASS, "closed-form", f"alpha={m.alpha} > delta+1={m.delta + 1}")
    else:
        # the mixed term's Hessian determinant has the sign of alpha - delta - 1
        out["ill_ex_1"] = HypothesisResult(
            FAIL, "closed-form", f"alpha={m.alpha} <= delta+1={m.delta + 1}",
            witness=_witness(1.0, 1.0, mixed_det_sign=np.sign(m.alpha - m.delta - 1)))
    thr = g + 2 * m.beta0
    if c2 > thr:
        out["ill_ex_2"] = HypothesisResult(PASS, "closed-form", f"c2={c2:.6g} > g+2beta0={thr:.6g}")
    else:
        out["ill_ex_2"] = HypothesisResult(FAIL, "closed-form", f"c2={c2:.6g} <= g+2beta0={thr:.6g}",
                                           witness=_witness(1.0, 0.0, c2=c2, threshold=thr))
    need = g / 2 + g * np.pi + c2 / 2
    b_need = m.a * (m.s + m.r) / (m.s * m.r)
    fails = []
    if not m.r >= 4:
        fails.append(f"r={m.r} < 4")
    if not m.a / m.r >= need:
        fails.append(f"a/r={m.a / m.r:.6g} < g/2+g*pi+c2/2={need:.6g}")
    if not m.b > b_need:
        fails.append(f"b={m.b} <= a(s+r)/(sr)={b_need:.6g}")
    if fails:
        # the quartic lower bound is then violated at large stretch with mu = 1
        nu_w = 1e3
        lhs = float(m.eval(nu_w, 1.0))
        rhs = g / 2 * nu_w ** 4 + g * np.pi * nu_w ** 3 + c2 / 2 * nu_w ** 2
        out["ill_ex_3"] = HypothesisResult(FAIL, "closed-form", "; ".join(fails),
                                           witness=_witness(nu_w, 1.0, lhs=lhs, rhs=rhs))
    else:
        out["ill_ex_3"] = HypothesisResult(PASS, "closed-form", "r >= 4, a/r and b large enough")
    cap = m.p * (m.s + 1) / (m.p + m.s + 1)
    if m.alpha <= cap:
        out["ill_ex_4"] = HypothesisResult(PASS, "closed-form", f"alpha={m.alpha} <= p(s+1)/(p+s+1)={cap:.6g}")
    else:
        out["ill_ex_4"] = HypothesisResult(FAIL, "closed-form", f"alpha={m.alpha} > p(s+1)/(p+s+1)={cap:.6g}",
                                           witness=_witness(1.0, 1.0, alpha=m.alpha, cap=cap))
    return out


def check_hypotheses(model: EnergyModel, c2: float, g: float, mu_star: float,
                     grids: GridSpec | None = None, constants: dict | None = None,
                     interval: bool = True) -> HypothesisReport:
    """Evaluate hypotheses H1-H12 on sampled grids.

    ``constants`` maps ``"H5"``, ``"H9"``, ``"H10"``, ``"H11"``, ``"H12"`` to the
    constants of the corresponding asymptotic bound; without them those checks
    report ``not-checked`` plus the tightest constant seen on the grid.
    """
    if not 0.0 < mu_star < 1.0:
        raise ValueError(f"mu_star must lie in (0, 1), got {mu_star!r}")
    grids = grids or GridSpec()
    consts = constants or {}
    NU, MU = np.meshgrid(grids.nu(), grids.mu(), indexing="ij")
    NUh, MUh = np.meshgrid(grids.nu(), grids.mu(with_zero=False), indexing="ij")
    hyp = {
        "H1": _check_h1(model, NU, MU),
        "H2": _check_h2(model, NU, MU),
        "H3": _check_h3(model, NU, MU),
        "H4": _check_h4(model, NUh, MUh),
        "H5": _check_h5(model, NU, MU, consts.get("H5")),
        "H6": _check_h6(model, c2, g),
        "H7": _check_h7(model, c2, g, mu_star, grids),
        "H8": _check_h8(model, grids),
        "H9": _check_h9(model, NU, MU, consts.get("H9")),
        "H10": _check_h10(model, NU, MU, consts.get("H10")),
        "H11": _check_h11(model, consts.get("H11"), grids),
        "H12": _check_h12(model, NUh, MUh, consts.get("H12")),
    }
    closed = closed_form_conditions(model, c2, g) if isinstance(model, IllustrativeEnergy) else {}
    adm = admissible_c2_interval(model, g, mu_star, grids.special_nu_max) if interval else None
    return HypothesisReport(hyp, closed, adm)


# ---------------------------------------------------------------------------
# admissible wave speeds

def compatibility_bound(model: EnergyModel, g: float, mu_star: float, nu):
    """``4 pi E(nu, mu*)/A(nu) - g A(nu)/(2 pi) - 2 pi g sqrt(nu^2 - 1)``."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    A = np.array([area_A(v) for v in nu])
    return 4 * np.pi * model.eval(nu, mu_star) / A - g * A / (2 * np.pi) - 2 * np.pi * g * np.sqrt(nu * nu - 1)


def admissible_c2_interval(model: EnergyModel, g: float, mu_star: float, nu_max: float = 100.0,
                           n_grid: int = 400) -> AdmissibleInterval:
    """``(g + E22(1,0), inf_{1 < nu <= nu_max} compatibility_bound]``.

    The infimum is taken on a grid log-spaced in ``nu - 1`` and refined by
    golden-section search around the grid minimum.
    """
    lo = g + model.e22_rest()
    x = np.linspace(np.log(1e-8), np.log(nu_max - 1.0), n_grid)

    def f(xx):
        return compatibility_bound(model, g, mu_star, 1.0 + np.exp(xx))

    vals = f(x)
    k = int(np.argmin(vals))
    a, b = x[max(k - 1, 0)], x[min(k + 1, n_grid - 1)]
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c)[0], f(d)[0]
    for _ in range(100):
        if b - a < 1e-12:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)[0]
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)[0]
    cand = [(vals[k], x[k]), (fc, c), (fd, d)]
    hi, xbest = min(cand)
    return AdmissibleInterval(float(lo), float(hi), float(1.0 + math.exp(xbest)))

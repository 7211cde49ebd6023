"""Curve quantities of the conformal parametrization ``rho(w)(tau) = (-tau - Cw, w)``.

All nonlinear quantities are evaluated on the padded grid (twice the size of
the grid carrying ``w``).  Sup norms reported here are grid-level sup norms.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np

from . import spectral as sp
from .spectral import Field, TWO_PI


class DegenerateCurveError(ValueError):
    """Raised when ``Omega(w)`` (nearly) vanishes somewhere on the grid."""


class DomainError(ValueError):
    pass


OMEGA_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class CurveFields:
    """Padded-grid kinematics of the profile defined by ``w``."""

    w: Field          # elevation, padded grid
    dw: Field         # w'
    cdw: Field        # C w'

    @classmethod
    def from_elevation(cls, w: Field, padded: bool = False) -> "CurveFields":
        wp = w if padded else sp.resample(w, 2 * w.M)
        return cls(wp, sp.derivative(wp), sp.hilbert_derivative(wp))

    @property
    def M(self) -> int:
        return self.w.M

    @cached_property
    def omega(self) -> Field:
        om = np.hypot(1.0 + self.cdw.samples, self.dw.samples)
        low = float(om.min())
        if low < OMEGA_FLOOR:
            j = int(om.argmin())
            raise DegenerateCurveError(
                f"Omega = {low:.3e} at tau = {self.w.tau[j]:.6f}; curve is degenerate")
        return Field(om)

    @cached_property
    def log_omega(self) -> Field:
        return Field(np.log(self.omega.samples))

    @cached_property
    def theta(self) -> Field:
        return -sp.hilbert(self.log_omega)

    @cached_property
    def dtheta(self) -> Field:
        return sp.derivative(self.theta)

    @cached_property
    def sigma(self) -> Field:
        return Field(self.dtheta.samples / self.omega.samples)

    @cached_property
    def cw(self) -> Field:
        return sp.hilbert(self.w)

    @property
    def ell(self) -> float:
        return sp.mean(self.omega)

    @property
    def m(self) -> float:
        return float(np.mean(np.abs(self.dtheta.samples)))


def curve_fields(w: Field) -> CurveFields:
    return CurveFields.from_elevation(w)


def omega(w: Field) -> Field:
    """``sqrt((1 + Cw')^2 + w'^2)`` on the padded grid."""
    return curve_fields(w).omega


def theta(w: Field) -> Field:
    """Slope angle ``-C log Omega``."""
    return curve_fields(w).theta


def sigma(w: Field) -> Field:
    """Curvature ``Theta' / Omega``."""
    return curve_fields(w).sigma


def ell(w: Field) -> float:
    """Period arc length divided by ``2 pi``."""
    return curve_fields(w).ell


def mean_log_omega(w: Field) -> float:
    return sp.mean(curve_fields(w).log_omega)


@dataclass(frozen=True)
class CurveSample:
    """Sampled profile over one period, ``X`` decreasing by ``2 pi`` per period."""

    X: np.ndarray
    Y: np.ndarray

    @classmethod
    def from_elevation(cls, w: Field) -> "CurveSample":
        return cls(-w.tau - sp.hilbert(w).samples, w.samples.copy())

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.X, self.Y])

    def closed(self) -> np.ndarray:
        """Points of one period with the end point ``rho(2 pi)`` appended."""
        pts = self.points
        return np.vstack([pts, pts[:1] + [-TWO_PI, 0.0]])

    def arc_length(self) -> float:
        return float(np.sum(np.hypot(*np.diff(self.closed(), axis=0).T)))


# ---------------------------------------------------------------------------
# chord-arc area function

def _t_minus_sin(t: float) -> float:
    if t < 1e-2:
        t2 = t * t
        return t * t2 / 6.0 * (1 - t2 / 20.0 * (1 - t2 / 42.0))
    return t - np.sin(t)


def theta_of_ell(ell_value: float) -> float:
    """Unique ``theta in (0, pi)`` with ``theta / sin(theta) = ell``.

    Newton on ``g(t) = t - ell sin t`` started right of the root (``g`` is convex
    on ``(0, pi)``, so the iterates decrease monotonically); bisection guards
    the bracket.
    """
    ell_value = float(ell_value)
    if not ell_value > 1.0:
        raise DomainError(f"theta(ell) needs ell > 1, got {ell_value!r}")
    excess = ell_value - 1.0
    lo, hi = 0.0, np.pi
    t = min(np.sqrt(6.0 * excess), np.pi)
    for _ in range(200):
        g = _t_minus_sin(t) - excess * np.sin(t)
        if g > 0:
            hi = t
        elif g < 0:
            lo = t
        else:
            break
        dg = 1.0 - ell_value * np.cos(t)
        t_new = t - g / dg if dg > 0 else 0.5 * (lo + hi)
        if not lo <= t_new <= hi:
            t_new = 0.5 * (lo + hi)
        if abs(t_new - t) <= 2e-16 * t_new:
            t = t_new
            break
        t = t_new
    return float(t)


def area_A(ell_value: float) -> float:
    """Area between a circular arc of length ``2 pi ell`` and its chord of length ``2 pi``."""
    t = theta_of_ell(ell_value)
    if t < 1e-2:
        # 2t - sin 2t cancels; use its series
        t2 = t * t
        num = (4.0 / 3.0) * t * t2 * (1 - t2 / 5.0 + 2.0 * t2 * t2 / 105.0)
        return float(np.pi ** 2 * num / (2.0 * np.sin(t) ** 2))
    return float(np.pi ** 2 * (2 * t - np.sin(2 * t)) / (1 - np.cos(2 * t)))


def area_A_prime(ell_value: float) -> float:
    """``dA/d ell = 2 pi^2 / sin(theta(ell))``."""
    return float(2 * np.pi ** 2 / np.sin(theta_of_ell(ell_value)))


# ---------------------------------------------------------------------------
# self-intersection

EPS_GEOM = 1e-12


def _segments_cross(P, Q, R, S, eps=EPS_GEOM) -> np.ndarray:
    """Proper crossings between segment arrays ``PQ`` (n,2) and ``RS`` (m,2); boolean (n, m)."""
    def orient(a, b, c):
        return ((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
                - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))

    P_, Q_ = P[:, None, :], Q[:, None, :]
    R_, S_ = R[None, :, :], S[None, :, :]
    scale = max(1.0, float(np.max(np.abs(np.concatenate([P, Q, R, S])))))
    tol = eps * scale * scale
    d1, d2 = orient(R_, S_, P_), orient(R_, S_, Q_)
    d3, d4 = orient(P_, Q_, R_), orient(P_, Q_, S_)
    return (((d1 > tol) & (d2 < -tol)) | ((d1 < -tol) & (d2 > tol))) & \
           (((d3 > tol) & (d4 < -tol)) | ((d3 < -tol) & (d4 > tol)))


def polyline_self_intersects(points: np.ndarray, period_shift: float = -TWO_PI) -> bool:
    """Crossing test for one period of a periodic polyline against itself and its translates.

    ``points`` holds one period including the closing point; translates are by
    ``+-period_shift`` along X.
    """
    P, Q = points[:-1], points[1:]
    n = len(P)
    cross = _segments_cross(P, Q, P, Q)
    # adjacent segments share an endpoint, never a proper crossing; mask anyway
    idx = np.arange(n)
    cross[idx, idx] = False
    cross[idx[:-1], idx[1:]] = False
    cross[idx[1:], idx[:-1]] = False
    if cross.any():
        return True
    for shift in (period_shift, -period_shift):
        off = np.array([shift, 0.0])
        c = _segments_cross(P, Q, P + off, Q + off)
        # the last segment touches the first segment of the next period
        c[n - 1, 0] = False
        c[0, n - 1] = False
        if c.any():
            return True
    return False


def self_intersects(w: Field) -> bool:
    """Whether the sampled profile (padded grid) crosses itself or a horizontal translate."""
    cf = curve_fields(w)
    cf.omega  # degenerate curves raise here
    curve = CurveSample(-cf.w.tau - cf.cw.samples, cf.w.samples)
    return polyline_self_intersects(curve.closed())


# ---------------------------------------------------------------------------
# bound checks

@dataclass(frozen=True)
class GeometryReport:
    ell: float
    m: float
    theta_osc: float
    self_intersects: bool
    supnorm_bound_ok: bool
    area_bound_ok: bool
    sup_w: float
    supnorm_bound: float
    signed_area: float
    area_bound: float
    mean_log_omega: float

    def to_dict(self) -> dict:
        return asdict(self)


def check_bounds(w: Field, rel_tol: float = 1e-10) -> GeometryReport:
    cf = curve_fields(w)
    ell_value = cf.ell
    sup_w = cf.w.sup()
    bound = np.pi * np.sqrt(max(ell_value ** 2 - 1.0, 0.0))
    signed_area = TWO_PI * float(np.mean(cf.w.samples * (1.0 + cf.cdw.samples)))
    A = area_A(ell_value) if ell_value > 1.0 + 1e-15 else 0.0
    th = cf.theta.samples
    return GeometryReport(
        ell=ell_value,
        m=cf.m,
        theta_osc=float(th.max() - th.min()),
        self_intersects=self_intersects(w),
        supnorm_bound_ok=bool(sup_w <= bound * (1 + rel_tol) + 1e-300),
        area_bound_ok=bool(signed_area <= A * (1 + rel_tol) + 1e-14),
        sup_w=sup_w,
        supnorm_bound=float(bound),
        signed_area=signed_area,
        area_bound=A,
        mean_log_omega=sp.mean(cf.log_omega),
    )


def hurwitz_gap(U_prime: Field, V: Field) -> tuple[float, float]:
    """``(|int U' V|, pi R^2)`` for the closed curve with velocity ``(U', V')``."""
    V_prime = sp.derivative(V)
    R = float(np.mean(np.hypot(U_prime.samples, V_prime.samples)))
    area = abs(TWO_PI * float(np.mean(U_prime.samples * V.samples)))
    return area, np.pi * R * R


def zygmund_bound(f: Field, q: float) -> tuple[float, float]:
    """``(int exp(q |Cf|), 4 pi / cos(q ||f||_inf))``."""
    sup = f.sup()
    if not q * sup < np.pi / 2:
        raise DomainError("need q < pi / (2 ||f||_inf)")
    lhs = TWO_PI * float(np.mean(np.exp(q * np.abs(sp.hilbert(f).samples))))
    return lhs, 4 * np.pi / np.cos(q * sup)

"""Periodic pseudospectral core on uniform grids over [0, 2*pi).

Coefficients use the normalization ``f_n = (1/M) sum_j f(tau_j) exp(-i n tau_j)``,
i.e. ``numpy.fft.fft(samples) / M``.  Only the non-negative half is stored
(``rfft``); negative modes follow from conjugate symmetry.

The Nyquist mode ``n = M/2`` is treated as unresolved: every odd multiplier
(derivative, conjugate function) sends it to zero.  Band-limited fields in
this package therefore live on modes ``|n| < M/2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi


def nodes(M: int) -> np.ndarray:
    """Uniform abscissae ``tau_j = 2 pi j / M``."""
    return TWO_PI * np.arange(M) / M


def _check_size(M: int) -> None:
    if M < 4 or M % 2:
        raise ValueError(f"grid size must be even and >= 4, got {M}")


@dataclass(frozen=True, eq=False)
class Field:
    """A real 2pi-periodic function sampled at ``M`` uniform nodes.

    Immutable; the coefficient cache is computed on first access.
    """

    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1:
            raise ValueError("Field samples must be one-dimensional")
        _check_size(s.size)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def M(self) -> int:
        return self.samples.size

    @cached_property
    def coeffs(self) -> np.ndarray:
        """One-sided coefficients ``f_n`` for ``n = 0 .. M/2``."""
        c = np.fft.rfft(self.samples) / self.M
        c.setflags(write=False)
        return c

    @property
    def tau(self) -> np.ndarray:
        return nodes(self.M)

    def coeff(self, n: int) -> complex:
        if abs(n) > self.M // 2:
            return 0j
        c = self.coeffs[abs(n)]
        return complex(c if n >= 0 else np.conj(c))

    @classmethod
    def from_coeffs(cls, coeffs, M: int) -> "Field":
        """Build from one-sided coefficients (shorter arrays are zero padded)."""
        _check_size(M)
        full = np.zeros(M // 2 + 1, dtype=complex)
        c = np.asarray(coeffs, dtype=complex)[: M // 2 + 1]
        full[: c.size] = c
        full[0] = full[0].real
        return cls(np.fft.irfft(full * M, n=M))

    @classmethod
    def from_function(cls, fn: Callable[[np.ndarray], np.ndarray], M: int) -> "Field":
        return cls(np.broadcast_to(fn(nodes(M)), (M,)))

    @classmethod
    def constant(cls, value: float, M: int) -> "Field":
        return cls(np.full(M, float(value)))

    @classmethod
    def from_modes(cls, cos_coeffs, sin_coeffs, M: int, mean: float = 0.0) -> "Field":
        """``mean + sum_n a_n cos(n tau) + b_n sin(n tau)`` for ``n = 1, 2, ...``."""
        a = np.asarray(cos_coeffs, dtype=float)
        b = np.asarray(sin_coeffs, dtype=float)
        K = max(a.size, b.size)
        if K >= M // 2:
            raise ValueError(f"{K} modes do not fit below the Nyquist mode of M={M}")
        c = np.zeros(K + 1, dtype=complex)
        c[0] = mean
        c[1 : a.size + 1] += 0.5 * a
        c[1 : b.size + 1] += -0.5j * b
        return cls.from_coeffs(c, M)

    def cos_sin(self, K: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Real Fourier coefficients ``(a_n, b_n)`` for ``n = 1 .. K``."""
        K = self.M // 2 - 1 if K is None else K
        c = self.coeffs[1 : K + 1]
        return 2.0 * c.real, -2.0 * c.imag

    def __add__(self, other):
        return Field(self.samples + _values(other, self.M))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.samples - _values(other, self.M))

    def __rsub__(self, other):
        return Field(_values(other, self.M) - self.samples)

    def __neg__(self):
        return Field(-self.samples)

    def __mul__(self, other):
        if isinstance(other, Field):
            return product(self, other)
        return Field(self.samples * float(other))

    __rmul__ = __mul__

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def __repr__(self):
        return f"Field(M={self.M}, mean={self.coeffs[0].real:.3g}, sup={self.sup():.3g})"


def _values(other, M: int) -> np.ndarray:
    if isinstance(other, Field):
        if other.M != M:
            raise ValueError(f"grid mismatch: {other.M} != {M}")
        return other.samples
    return np.asarray(other, dtype=float)


def wavenumbers(M: int) -> np.ndarray:
    """Non-negative wavenumbers of the one-sided spectrum, Nyquist excluded (set to 0)."""
    k = np.arange(M // 2 + 1, dtype=float)
    k[-1] = 0.0
    return k


def _multiply(f: Field, mult: np.ndarray) -> Field:
    return Field(np.fft.irfft(np.fft.rfft(f.samples) * mult, n=f.M))


def hilbert(f: Field) -> Field:
    """Conjugate function: mode ``n`` goes to ``-i sign(n) f_n``, the mean to 0."""
    mult = -1j * np.sign(wavenumbers(f.M))
    return _multiply(f, mult)


def derivative(f: Field, order: int = 1) -> Field:
    return _multiply(f, (1j * wavenumbers(f.M)) ** order)


def hilbert_derivative(f: Field) -> Field:
    """``C f'``, the multiplier ``|n|``."""
    return _multiply(f, wavenumbers(f.M).astype(complex))


def mean(f: Field) -> float:
    return float(np.mean(f.samples))


def integral(f: Field) -> float:
    """Trapezoid rule over one period (spectrally accurate for periodic data)."""
    return TWO_PI * mean(f)


@dataclass(frozen=True)
class Ramp:
    """``slope * tau + periodic(tau)``: the antiderivative of a field with nonzero mean."""

    slope: float
    periodic: Field

    def __call__(self, tau=None) -> np.ndarray:
        if tau is None:
            return self.slope * self.periodic.tau + self.periodic.samples
        return self.slope * np.asarray(tau) + interpolate(self.periodic, tau)

    @property
    def samples(self) -> np.ndarray:
        return self()


def antiderivative_zero_start(f: Field) -> Ramp:
    """``F(tau) = int_0^tau f``; the mean of ``f`` becomes an explicit linear ramp."""
    k = wavenumbers(f.M)
    inv = np.zeros(k.size, dtype=complex)
    inv[k > 0] = 1.0 / (1j * k[k > 0])
    F = _multiply(f, inv)
    F = Field(F.samples - F.samples[0])
    return Ramp(mean(f), F)


def resample(f: Field, M_new: int) -> Field:
    """Spectral interpolation (zero padding) or truncation to a grid of ``M_new`` nodes."""
    if M_new == f.M:
        return f
    _check_size(M_new)
    c = np.array(f.coeffs)
    c[-1] = 0.0  # Nyquist
    keep = min(c.size, M_new // 2)
    return Field.from_coeffs(c[:keep], M_new)


def product(f: Field, g: Field) -> Field:
    """Dealiased product: evaluated on a 2M grid, truncated back to M."""
    if f.M != g.M:
        raise ValueError(f"grid mismatch: {f.M} != {g.M}")
    fp, gp = resample(f, 2 * f.M), resample(g, 2 * g.M)
    return resample(Field(fp.samples * gp.samples), f.M)


def pointwise(fn: Callable[..., np.ndarray], *fields: Field) -> Field:
    """Apply a nonlinearity on the 2M grid and truncate back to M."""
    M = fields[0].M
    padded = [resample(f, 2 * M).samples for f in fields]
    return resample(Field(fn(*padded)), M)


def interpolate(f: Field, tau) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``f`` at arbitrary abscissae."""
    tau = np.asarray(tau, dtype=float)
    c = np.array(f.coeffs)
    c[-1] = 0.0
    n = np.arange(c.size)
    phase = np.exp(1j * np.multiply.outer(tau, n))
    weights = np.full(c.size, 2.0)
    weights[0] = 1.0
    return (phase * (weights * c)).real.sum(axis=-1)


def random_field(rng: np.random.Generator, M: int, modes: int, amplitude: float = 1.0,
                 decay: float = 0.7, zero_mean: bool = True) -> Field:
    """Band-limited random field with geometrically decaying spectrum."""
    n = np.arange(1, modes + 1)
    scale = amplitude * decay ** (n - 1)
    a = rng.normal(size=modes) * scale
    b = rng.normal(size=modes) * scale
    m = 0.0 if zero_mean else float(rng.normal() * amplitude)
    return Field.from_modes(a, b, M, mean=m)

"""The invariant mean on Z via symmetric Cesaro averages, Fourier-Bohr
coefficients, and the exact oracle for realized rational data.

Estimates always carry dyadic sub-window diagnostics so callers can see
whether the average has stabilized; the mean itself is only finitely
additive and convergence is reported, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import FloatingDataError, ValidationError, WindowError
from .group_model import Character
from .riemann_step import StepFunction, TrigPolynomial
from .sequences import HartmanFunction, Realized, Sampled


@dataclass(frozen=True)
class MeanEstimate:
    value: complex
    window_radius: int
    diagnostics: tuple  # ((sub_radius, partial value), ...), largest first

    @property
    def spread(self) -> float:
        """Max deviation of the dyadic partials from the full estimate; a
        cheap stagnation indicator used for slack budgets."""
        return max((abs(self.value - v) for _, v in self.diagnostics), default=0.0)

    def to_json(self) -> dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "N": self.window_radius,
            "diagnostics": [[n, v.real, v.imag] for n, v in self.diagnostics],
        }


def window_mean(values: np.ndarray, N: int) -> MeanEstimate:
    """Mean of a [-N, N] window with partial means at N/2, N/4, ..."""
    if len(values) != 2 * N + 1:
        raise ValidationError("window length mismatch")
    mid = N
    prefix = np.cumsum(values)

    def mean_at(r: int) -> complex:
        lo, hi = mid - r, mid + r
        total = prefix[hi] - (prefix[lo - 1] if lo > 0 else 0)
        return complex(total / (2 * r + 1))

    diags = []
    r = N
    while r >= 1:
        diags.append((r, mean_at(r)))
        if r == 1:
            break
        r //= 2
    return MeanEstimate(mean_at(N), N, tuple(diags))


def cesaro_mean(phi: HartmanFunction, N: int) -> MeanEstimate:
    """(1/(2N+1)) sum_{|n|<=N} phi(n) with dyadic diagnostics."""
    if N < 1:
        raise WindowError("window radius must be >= 1")
    return window_mean(phi.window_values(N), N)


def fourier_coefficient(phi: HartmanFunction, chi: Character, N: int) -> MeanEstimate:
    """Estimate of m(phi * conj(chi)) over the symmetric window."""
    if N < 1:
        raise WindowError("window radius must be >= 1")
    if not isinstance(chi, Character):
        chi = Character(chi)
    ns = np.arange(-N, N + 1, dtype=np.int64)
    vals = phi.window_values(N) * np.conj(chi.evaluate_window(ns))
    return window_mean(vals, N)


def exact_mean(phi: HartmanFunction):
    """The invariant mean computed exactly: the Haar integral of a rational
    realization (m(iota^{-1}(M)) = mu(M)), the zero-frequency coefficient of
    an exact trig polynomial, or an exact period average of a sampled window.
    This is the oracle against which cesaro_mean is validated."""
    if isinstance(phi, Realized):
        real = phi.realization
        if isinstance(real, StepFunction):
            if not real.is_exact:
                raise FloatingDataError("exact_mean needs a rational realization")
            return real.haar_integral()
        if isinstance(real, TrigPolynomial):
            if not real.is_exact:
                raise FloatingDataError("exact_mean needs exact coefficients")
            return real.mean()
    if isinstance(phi, Sampled):
        period = _detect_period(phi.values)
        if period is None:
            raise ValidationError("sampled input has no exact period inside the window")
        mid = phi.radius
        chunk = phi.values[mid: mid + period]
        return complex(np.sum(chunk) / period)
    raise ValidationError(f"unsupported input for exact_mean: {type(phi)!r}")


def _detect_period(values: np.ndarray) -> int | None:
    n = len(values)
    for p in range(1, n // 2 + 1):
        if np.array_equal(values[:-p], values[p:]):
            return p
    return None

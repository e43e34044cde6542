"""Exact arithmetic in the field Q(sqrt(c_1), sqrt(c_2), ...).

Numbers are finite Q-linear combinations of square roots of distinct
squarefree positive integers (radicand 1 holds the rational part).  Since
{1} united with {sqrt(c) : c > 1 squarefree} is linearly independent over Q,
equality of two combinations is coefficient-wise and the sign of a nonzero
combination can be decided by interval refinement, which makes floor/mod-1
and comparisons exact.  This is the number class behind rotation numbers
such as the golden mean conjugate (sqrt(5)-1)/2 or sqrt(2)-1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

Rat = Union[int, Fraction]


def squarefree_decompose(c: int) -> tuple[int, int]:
    """Write c = g^2 * s with s squarefree; returns (g, s)."""
    if c <= 0:
        raise ValueError("radicand must be positive")
    g, s, d = 1, c, 2
    while d * d <= s:
        while s % (d * d) == 0:
            s //= d * d
            g *= d
        d += 1
    return g, s


def _sqrt_bounds(c: int, prec: int) -> tuple[Fraction, Fraction]:
    """Rational interval [lo, hi] containing sqrt(c), width 2^-prec."""
    s = isqrt(c << (2 * prec))
    return Fraction(s, 1 << prec), Fraction(s + 1, 1 << prec)


class QuadExt:
    """Immutable element of Q(sqrt(c_1), ..., sqrt(c_r)).

    Internally a sorted tuple of (squarefree radicand, Fraction coefficient)
    pairs with zero coefficients dropped; radicand 1 is the rational part.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        clean = {}
        for c, coef in dict(terms).items():
            coef = Fraction(coef)
            if coef == 0:
                continue
            g, s = squarefree_decompose(c)
            clean[s] = clean.get(s, Fraction(0)) + coef * g
        self._terms = tuple(sorted((c, f) for c, f in clean.items() if f != 0))

    @staticmethod
    def from_rational(x: Rat) -> "QuadExt":
        return QuadExt({1: Fraction(x)})

    @staticmethod
    def quadratic(a: Rat, b: Rat, c: int, d: Rat = 1) -> "QuadExt":
        """The number (a + b*sqrt(c)) / d."""
        d = Fraction(d)
        if d == 0:
            raise ValueError("zero denominator")
        return QuadExt({1: Fraction(a) / d, c: Fraction(b) / d})

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._terms

    @property
    def rational_part(self) -> Fraction:
        for c, f in self._terms:
            if c == 1:
                return f
        return Fraction(0)

    def radical_coefficients(self) -> dict[int, Fraction]:
        """Coefficients of the genuinely irrational part (radicands > 1)."""
        return {c: f for c, f in self._terms if c > 1}

    @property
    def is_rational(self) -> bool:
        return all(c == 1 for c, _ in self._terms)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.rational_part

    def _as_dict(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        d = self._as_dict()
        for c, f in other._terms:
            d[c] = d.get(c, Fraction(0)) + f
        return QuadExt(d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt({c: -f for c, f in self._terms})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        d: dict[int, Fraction] = {}
        for c1, f1 in self._terms:
            for c2, f2 in other._terms:
                g = gcd(c1, c2)
                rad = (c1 // g) * (c2 // g)  # squarefree since c1, c2 are
                d[rad] = d.get(rad, Fraction(0)) + f1 * f2 * g
        return QuadExt(d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            if not other.is_rational:
                return NotImplemented
            other = other.as_fraction()
        if isinstance(other, (int, Fraction)):
            return QuadExt({c: f / other for c, f in self._terms})
        return NotImplemented

    def sign(self) -> int:
        """Exact sign; terminates because a nonzero combination of distinct
        square roots is never zero."""
        if not self._terms:
            return 0
        if self.is_rational:
            f = self.rational_part
            return (f > 0) - (f < 0)
        prec = 32
        while prec <= 1 << 16:
            lo = hi = Fraction(0)
            for c, f in self._terms:
                if c == 1:
                    lo += f
                    hi += f
                else:
                    slo, shi = _sqrt_bounds(c, prec)
                    if f > 0:
                        lo += f * slo
                        hi += f * shi
                    else:
                        lo += f * shi
                        hi += f * slo
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2
        raise ArithmeticError("sign refinement did not terminate")

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __lt__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() >= 0

    def __float__(self):
        return float(sum(float(f) * math.sqrt(c) for c, f in self._terms))

    def floor(self) -> int:
        if self.is_rational:
            return math.floor(self.rational_part)
        n = math.floor(float(self))
        while (self - n).sign() < 0:
            n -= 1
        while (self - (n + 1)).sign() >= 0:
            n += 1
        return n

    def mod1(self) -> "QuadExt":
        return self - self.floor()

    def __repr__(self):
        if not self._terms:
            return "QuadExt(0)"
        parts = []
        for c, f in self._terms:
            parts.append(str(f) if c == 1 else f"{f}*sqrt({c})")
        return "QuadExt(" + " + ".join(parts) + ")"


def _coerce(x) -> QuadExt | None:
    if isinstance(x, QuadExt):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadExt.from_rational(x)
    return None


#: Exact real values accepted throughout the package.
ExactReal = Union[int, Fraction, QuadExt]


def to_quadext(x: ExactReal) -> QuadExt:
    q = _coerce(x)
    if q is None:
        raise TypeError(f"not an exact real: {x!r}")
    return q


#: A rational hit on floating data counts only if the approximation is far
#: better than the generic best-approximation scale 1/q^2 at its denominator.
RATIONAL_QUALITY = 1e-3


def classify_rational(x, max_den: int = 10**6, residual: float = 1e-10) -> Fraction | None:
    """Best rational p/q with q <= max_den if it matches x within residual.

    Floating inputs are certified only up to the denominator bound: a None
    result means "irrational as far as denominators <= max_den can tell".
    A candidate must beat the generic convergent error 1/q^2 by the factor
    RATIONAL_QUALITY, otherwise every float would match some large-q
    convergent.  Exact inputs are classified exactly.
    """
    if isinstance(x, QuadExt):
        return x.as_fraction() if x.is_rational else None
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return f if f.denominator <= max_den else None
    best = Fraction(x).limit_denominator(max_den)
    err = abs(x - float(best))
    if err > residual:
        return None
    if err * best.denominator ** 2 > RATIONAL_QUALITY:
        return None
    return best

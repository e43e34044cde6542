"""Bounded functions on Z: realized Hartman functions phi = phi* o iota and
sampled windows, plus the named example generators (cut sequences, the
cos^2-product family) and the CSV window format."""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError, WindowError
from .group_model import Character, Compactification, SpectralSubgroup, induce_compactification
from .riemann_step import StepFunction, TrigPolynomial


class HartmanFunction:
    """Interface: evaluate pointwise, produce symmetric windows, bound sup."""

    def evaluate(self, n: int) -> complex:
        raise NotImplementedError

    def window_values(self, N: int) -> np.ndarray:
        """Values for n = -N..N as a complex array of length 2N+1."""
        raise NotImplementedError

    def sup_bound(self) -> float:
        raise NotImplementedError

    def shift(self, g: int) -> "HartmanFunction":
        return _Shifted(self, g) if g else self


class Realized(HartmanFunction):
    """phi = phi* o iota for a step-function or trig-polynomial realization."""

    def __init__(self, realization):
        if not isinstance(realization, (StepFunction, TrigPolynomial)):
            raise ValidationError("realization must be a StepFunction or TrigPolynomial")
        self.realization = realization
        self.comp: Compactification = realization.domain

    def evaluate(self, n: int) -> complex:
        if isinstance(self.realization, TrigPolynomial):
            return self.realization.evaluate(n)
        if self.comp.is_exact:
            pt = self.comp.embed_exact(n)
        else:
            pt = self.comp.embed(n)
        return self.realization.evaluate(pt)

    def window_values(self, N: int) -> np.ndarray:
        ns = np.arange(-N, N + 1, dtype=np.int64)
        if isinstance(self.realization, TrigPolynomial):
            return self.realization.evaluate_window(ns)
        torus, fiber = self.comp.embed_window(ns)
        return self.realization.evaluate_embedded(torus, fiber)

    def sup_bound(self) -> float:
        if isinstance(self.realization, TrigPolynomial):
            return self.realization.sup_bound()
        return self.realization.sup_norm()


class Sampled(HartmanFunction):
    """A finite symmetric window of values for n in [-N, N]."""

    def __init__(self, values, radius: int | None = None):
        arr = np.asarray(values, dtype=complex)
        if arr.ndim != 1 or len(arr) % 2 != 1:
            raise ValidationError("sampled window must be a 1-d array of odd length")
        self.values = arr
        self.radius = (len(arr) - 1) // 2 if radius is None else radius
        if 2 * self.radius + 1 != len(arr):
            raise ValidationError("radius inconsistent with array length")

    def evaluate(self, n: int) -> complex:
        if abs(n) > self.radius:
            raise WindowError(f"n={n} outside the sampled window [-{self.radius}, {self.radius}]")
        return complex(self.values[n + self.radius])

    def window_values(self, N: int) -> np.ndarray:
        if N > self.radius:
            raise WindowError(f"requested window {N} exceeds sampled radius {self.radius}")
        mid = self.radius
        return self.values[mid - N: mid + N + 1]

    def sup_bound(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0


class _Shifted(HartmanFunction):
    def __init__(self, base: HartmanFunction, g: int):
        self.base = base
        self.g = g

    def evaluate(self, n: int) -> complex:
        return self.base.evaluate(n + self.g)

    def window_values(self, N: int) -> np.ndarray:
        big = self.base.window_values(N + abs(self.g))
        mid = N + abs(self.g)
        return big[mid + self.g - N: mid + self.g + N + 1]

    def sup_bound(self) -> float:
        return self.base.sup_bound()


def cut_sequence(alpha, beta) -> Realized:
    """The arc sequence n -> 1_{[0, beta)}(n * alpha mod 1).

    Realized as the indicator of [0, beta) on the compactification induced
    by <alpha>; for rational alpha = p/q this is a function on Z/q.
    """
    beta = Fraction(beta)
    if not 0 < beta < 1:
        raise ValidationError("beta must lie in (0, 1)")
    chi = alpha if isinstance(alpha, Character) else Character(alpha)
    comp = induce_compactification(SpectralSubgroup.of(chi))
    if comp.torus_rank == 1:
        f = StepFunction.indicator(comp, ((Fraction(0), beta),))
    elif comp.torus_rank == 0:
        q = comp.torsion
        p = chi.as_fraction()
        fibers = tuple(c for c in range(q) if (Fraction(c) * p) % 1 < beta)
        f = StepFunction.from_pieces(comp, [((), fibers, 1)]) if fibers else \
            StepFunction.constant(comp, 0)
    else:
        raise ValidationError("cut sequences take a single character")
    return Realized(f)


def cos2_product(n: int) -> Realized:
    """phi_n(k) = prod_{j=1..n} cos^2(2 pi k / 3^j), realized exactly as a
    trig polynomial on Z/3^n with frequencies sum_j eps_j * 2/3^j."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    L = 3**n
    comp = induce_compactification(
        SpectralSubgroup.of(*[Fraction(2, 3**j) for j in range(1, n + 1)]))
    assert comp.torus_rank == 0 and comp.torsion == L
    poly = TrigPolynomial(comp, {((), 0): Fraction(1)})
    for j in range(1, n + 1):
        r = (2 * 3 ** (n - j)) % L
        factor = TrigPolynomial(comp, {
            ((), 0): Fraction(1, 2),
            ((), r): Fraction(1, 4),
            ((), (-r) % L): Fraction(1, 4),
        })
        poly = poly * factor
    return Realized(poly)


def character_sequence(alpha, coefficient=1) -> Realized:
    """The pure character sequence n -> c * e^{2 pi i n alpha}."""
    chi = alpha if isinstance(alpha, Character) else Character(alpha)
    comp = induce_compactification(SpectralSubgroup.of(chi))
    if comp.torus_rank == 1:
        key = ((1,), 0)
        # the presentation may have replaced the generator; express it
        expr = comp.express(chi.value)
        key = (tuple(expr[0]), expr[1])
    else:
        expr = comp.express(chi.value)
        key = ((), expr[1])
    return Realized(TrigPolynomial(comp, {key: coefficient}))


def save_csv(phi: HartmanFunction, N: int, path) -> None:
    """Write lines n,re,im for n in [-N, N]."""
    vals = phi.window_values(N)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for i, n in enumerate(range(-N, N + 1)):
            v = complex(vals[i])
            writer.writerow([n, repr(v.real), repr(v.imag)])


def load_csv(path) -> Sampled:
    """Read a sequence file; validates that n runs contiguously over
    [-N, N]."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 3:
                raise ValidationError(f"bad CSV row: {row!r}")
            rows.append((int(row[0]), float(row[1]), float(row[2])))
    if not rows:
        raise ValidationError("empty sequence file")
    rows.sort()
    ns = [r[0] for r in rows]
    N = max(ns)
    if ns != list(range(-N, N + 1)):
        raise ValidationError("sequence file must cover a contiguous window [-N, N]")
    values = np.array([complex(re, im) for _, re, im in rows])
    return Sampled(values)

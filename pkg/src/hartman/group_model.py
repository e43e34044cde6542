"""Characters of Z, finitely generated subgroups of the dual circle, and the
finite-dimensional compactifications they induce.

A character of Z is a rotation number alpha in [0,1).  A finitely generated
subgroup of T = R/Z decomposes as (free part generated by irrationals
independent over Q together with 1) + (cyclic torsion of rationals), and the
induced compactification is T^k x Z/L with embedding
n -> ((n*beta_1, ..., n*beta_k) mod 1, n mod L).

Rational and quadratic-irrational data are handled exactly: integer relations
between generators are found by exact linear algebra over the radical
coordinates (no search), and the presentation is extracted from a Smith
normal form of the relation lattice.  Floating generators are certified only
up to a denominator bound and flag the result as numerically certified.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import PresentationError, ValidationError
from .exactnum import ExactReal, QuadExt, classify_rational, to_quadext
from .lattice import left_kernel, smith_normal_form

#: Denominator bound for certifying (ir)rationality of floating data.
DENOMINATOR_BOUND = 10**6
#: Coefficient bound for the floating membership search.
COEFF_SEARCH_BOUND = 1000
#: Acceptance tolerance for floating membership matches.
FLOAT_MEMBERSHIP_TOL = 1e-6

Value = Union[Fraction, QuadExt, float]


def _normalize_value(x) -> Value:
    """Reduce a rotation number into [0, 1), keeping exactness."""
    if isinstance(x, float):
        return x % 1.0
    if isinstance(x, (int, Fraction)):
        return Fraction(x) % 1
    if isinstance(x, QuadExt):
        v = x.mod1()
        return v.as_fraction() if v.is_rational else v
    raise ValidationError(f"unsupported rotation number type: {type(x)!r}")


@dataclass(frozen=True)
class Character:
    """An element of the dual of Z: n -> e^{2 pi i n alpha}."""

    value: Value

    def __post_init__(self):
        object.__setattr__(self, "value", _normalize_value(self.value))

    @staticmethod
    def rational(num: int, den: int) -> "Character":
        return Character(Fraction(num, den))

    @staticmethod
    def quadratic(a, b, c: int, d=1) -> "Character":
        return Character(QuadExt.quadratic(a, b, c, d))

    @property
    def is_exact(self) -> bool:
        return not isinstance(self.value, float)

    @property
    def is_rational(self) -> bool:
        if isinstance(self.value, Fraction):
            return True
        if isinstance(self.value, QuadExt):
            return self.value.is_rational
        return False

    def as_fraction(self) -> Fraction:
        if isinstance(self.value, Fraction):
            return self.value
        if isinstance(self.value, QuadExt):
            return self.value.as_fraction()
        raise ValidationError("floating character has no exact fraction")

    def __float__(self) -> float:
        return float(self.value)

    def evaluate(self, n: int) -> complex:
        if self.is_rational:
            f = self.as_fraction()
            return complex(np.exp(2j * np.pi * float(Fraction(n * f.numerator, f.denominator) % 1)))
        return complex(np.exp(2j * np.pi * ((n * float(self.value)) % 1.0)))

    def evaluate_window(self, ns: np.ndarray) -> np.ndarray:
        return np.exp(2j * np.pi * ((ns * float(self.value)) % 1.0))

    def to_json(self) -> dict:
        v = self.value
        if isinstance(v, Fraction):
            return {"num": v.numerator, "den": v.denominator}
        if isinstance(v, QuadExt):
            rads = v.radical_coefficients()
            if len(rads) == 1:
                (c, coef), = rads.items()
                ra = v.rational_part
                d = lcm(ra.denominator, coef.denominator)
                return {"quadratic": {"a": ra.numerator * (d // ra.denominator),
                                      "b": coef.numerator * (d // coef.denominator),
                                      "c": c, "d": d}}
            return {"radicals": [[c, str(f)] for c, f in v.terms]}
        return {"float": float(v)}

    @staticmethod
    def from_json(d: dict) -> "Character":
        if "num" in d:
            return Character(Fraction(d["num"], d["den"]))
        if "quadratic" in d:
            q = d["quadratic"]
            return Character(QuadExt.quadratic(q["a"], q["b"], q["c"], q.get("d", 1)))
        if "radicals" in d:
            return Character(QuadExt({int(c): Fraction(f) for c, f in d["radicals"]}))
        if "float" in d:
            return Character(float(d["float"]))
        raise ValidationError(f"bad character descriptor: {d!r}")

    @staticmethod
    def from_literal(s: str) -> "Character":
        """Parse 'p/q', a decimal, or 'quadratic:a,b,c,d' for (a+b*sqrt(c))/d."""
        s = s.strip()
        if s.startswith("quadratic:"):
            parts = [int(x) for x in s[len("quadratic:"):].split(",")]
            if len(parts) == 3:
                parts.append(1)
            if len(parts) != 4:
                raise ValidationError(f"bad quadratic literal: {s!r}")
            return Character.quadratic(*parts)
        if "/" in s:
            num, den = s.split("/")
            return Character(Fraction(int(num), int(den)))
        if s.lstrip("+-").isdigit():
            return Character(Fraction(int(s)))
        return Character(float(s))


@dataclass(frozen=True)
class Presentation:
    """Reduced presentation of a f.g. subgroup of T: free irrational
    generators (jointly independent with 1) plus cyclic torsion of order L."""

    free: tuple[Value, ...]
    torsion: int
    certified: bool

    @property
    def torus_rank(self) -> int:
        return len(self.free)


def _dedupe(values):
    seen, out = [], []
    for v in values:
        if not any(type(v) is type(w) and v == w for w in seen):
            seen.append(v)
            out.append(v)
    return out


def presentation_of_values(values: Sequence[Value],
                           max_den: int = DENOMINATOR_BOUND,
                           float_residual: float = 1e-10) -> Presentation:
    """Compute the canonical presentation of <values> <= T.

    Rationals fold into the torsion order directly.  Exact irrational
    generators go through the relation-lattice / Smith normal form route,
    which also surfaces hidden rational combinations as extra torsion.
    Floating generators that are not recognizably rational are treated as
    jointly independent and the result is flagged uncertified.
    """
    certified = True
    rationals: list[Fraction] = []
    irrationals: list[Value] = []
    for raw in values:
        v = _normalize_value(raw)
        if isinstance(v, float):
            fr = classify_rational(v, max_den, float_residual)
            certified = False
            if fr is not None:
                rationals.append(fr % 1)
            else:
                irrationals.append(v)
        elif isinstance(v, Fraction):
            rationals.append(v)
        else:
            irrationals.append(v)

    torsion = 1
    for f in rationals:
        if f != 0:
            torsion = lcm(torsion, f.denominator)

    irrationals = _dedupe(irrationals)
    if not irrationals:
        return Presentation((), torsion, certified)

    m = len(irrationals)
    axes: list = sorted({c for g in irrationals if isinstance(g, QuadExt)
                         for c in g.radical_coefficients()})
    float_axis_of = {}
    for i, g in enumerate(irrationals):
        if isinstance(g, float):
            float_axis_of[i] = ("float", i)
    all_axes = axes + sorted(float_axis_of.values())
    col_index = {a: j for j, a in enumerate(all_axes)}

    b_rows = [[Fraction(0)] * len(all_axes) for _ in range(m)]
    q_vec = [Fraction(0)] * m
    for i, g in enumerate(irrationals):
        if isinstance(g, QuadExt):
            for c, coef in g.radical_coefficients().items():
                b_rows[i][col_index[c]] = coef
            q_vec[i] = g.rational_part
        else:
            b_rows[i][col_index[("float", i)]] = Fraction(1)

    # scale columns to integers; the left kernel is unchanged
    b_int = [[0] * len(all_axes) for _ in range(m)]
    for j in range(len(all_axes)):
        den = 1
        for i in range(m):
            den = lcm(den, b_rows[i][j].denominator)
        for i in range(m):
            b_int[i][j] = int(b_rows[i][j] * den)

    kernel = left_kernel(b_int)  # rows: integer combos with rational value
    if kernel:
        w = [sum(Fraction(k_i) * q_i for k_i, q_i in zip(krow, q_vec)) for krow in kernel]
        d0 = 1
        for f in w:
            d0 = lcm(d0, f.denominator)
        p = [int(f * d0) for f in w]
        stacked = [[x] for x in p] + [[d0]]
        a_rel_ext = left_kernel(stacked)
        a_rel = [row[:-1] for row in a_rel_ext]
        rel_rows = [
            [sum(a[i] * kernel[i][j] for i in range(len(kernel))) for j in range(m)]
            for a in a_rel
        ]
        rel_rows = [r for r in rel_rows if any(r)]
    else:
        rel_rows = []

    if not rel_rows:
        free = irrationals
    else:
        _, d, _, _, vinv = smith_normal_form(rel_rows)
        s = len(rel_rows)
        deltas: list[Value] = []
        for j in range(m):
            coeffs = vinv[j]
            if any(coeffs[i] != 0 and isinstance(irrationals[i], float) for i in range(m)):
                val: Value = sum(coeffs[i] * float(irrationals[i]) for i in range(m)) % 1.0
            else:
                acc = QuadExt.from_rational(0)
                for i in range(m):
                    if coeffs[i]:
                        acc = acc + to_quadext(irrationals[i]) * coeffs[i]
                val = _normalize_value(acc)
            deltas.append(val)
        free = []
        for i, delta in enumerate(deltas):
            if i < s:
                order = d[i][i]
                if order <= 0:
                    raise PresentationError("relation lattice was not full rank")
                if isinstance(delta, float):
                    raise PresentationError("torsion generator came out floating")
                rho = delta if isinstance(delta, Fraction) else delta.as_fraction()
                if rho != 0:
                    torsion = lcm(torsion, rho.denominator)
            else:
                if isinstance(delta, Fraction):
                    raise PresentationError("free generator reduced to a rational")
                free.append(delta)

    free = sorted(free, key=float)
    return Presentation(tuple(free), torsion, certified)


@dataclass(frozen=True)
class SpectralSubgroup:
    """Finitely generated subgroup of the dual of Z, given by generators."""

    generators: tuple[Character, ...]

    def __post_init__(self):
        gens = _dedupe([g if isinstance(g, Character) else Character(g)
                        for g in self.generators])
        object.__setattr__(self, "generators", tuple(gens))

    @staticmethod
    def of(*values) -> "SpectralSubgroup":
        return SpectralSubgroup(tuple(Character(v) if not isinstance(v, Character) else v
                                      for v in values))

    def presentation(self, max_den: int = DENOMINATOR_BOUND) -> Presentation:
        return presentation_of_values([g.value for g in self.generators], max_den=max_den)

    def to_json(self) -> dict:
        return {"generators": [g.to_json() for g in self.generators]}

    @staticmethod
    def from_json(d: dict) -> "SpectralSubgroup":
        return SpectralSubgroup(tuple(Character.from_json(g) for g in d["generators"]))


class Point(NamedTuple):
    """A point of T^k x Z/L."""

    torus: tuple
    fiber: int


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class CoverResult:
    verdict: Verdict
    certified: bool
    detail: str = ""

    def __bool__(self) -> bool:
        if self.verdict is Verdict.UNDECIDED:
            raise ValidationError(f"undecided covering: {self.detail}")
        return self.verdict is Verdict.TRUE


@dataclass(frozen=True)
class Compactification:
    """The group T^k x Z/L together with the dense embedding of Z.

    free_gens are the rotation numbers of the torus coordinates; the fiber
    coordinate embeds n as n mod torsion.  Density requires the free
    generators to be irrational and jointly independent with 1; this is
    checked exactly on construction for exact data and flagged otherwise.
    """

    free_gens: tuple[Value, ...]
    torsion: int = 1
    certified: bool = True
    _validated: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self.torsion < 1:
            raise ValidationError("torsion order must be >= 1")
        gens = tuple(_normalize_value(g) for g in self.free_gens)
        object.__setattr__(self, "free_gens", gens)
        if not self._validated:
            self._validate()
        object.__setattr__(self, "_validated", True)

    def _validate(self):
        exact = []
        for g in self.free_gens:
            if isinstance(g, float):
                object.__setattr__(self, "certified", False)
                if classify_rational(g) is not None:
                    raise ValidationError(
                        f"free generator {g} is recognizably rational; not a dense embedding")
            else:
                if isinstance(g, Fraction) or g.is_rational:
                    raise ValidationError("rational free generator breaks density")
                exact.append(to_quadext(g))
        if exact:
            axes = sorted({c for g in exact for c in g.radical_coefficients()})
            rows = [[g.radical_coefficients().get(c, Fraction(0)) for c in axes] for g in exact]
            b_int = []
            for row in rows:
                den = 1
                for f in row:
                    den = lcm(den, f.denominator)
                b_int.append([int(f * den) for f in row])
            if left_kernel(b_int):
                raise ValidationError(
                    "free generators are rationally dependent; not a dense embedding")

    @staticmethod
    def trivial() -> "Compactification":
        return Compactification((), 1)

    @staticmethod
    def from_subgroup(gamma: SpectralSubgroup,
                      max_den: int = DENOMINATOR_BOUND,
                      require_certified: bool = False) -> "Compactification":
        pres = gamma.presentation(max_den=max_den)
        if require_certified and not pres.certified:
            raise PresentationError("cannot certify presentation within the denominator bound")
        return Compactification(pres.free, pres.torsion, certified=pres.certified,
                                _validated=True)

    @property
    def torus_rank(self) -> int:
        return len(self.free_gens)

    @property
    def finite_orders(self) -> tuple[int, ...]:
        return () if self.torsion == 1 else (self.torsion,)

    @property
    def is_exact(self) -> bool:
        return all(not isinstance(g, float) for g in self.free_gens)

    def subgroup(self) -> SpectralSubgroup:
        gens = [Character(g) for g in self.free_gens]
        if self.torsion > 1:
            gens.append(Character(Fraction(1, self.torsion)))
        return SpectralSubgroup(tuple(gens))

    def embed(self, n: int) -> Point:
        return Point(tuple((n * float(g)) % 1.0 for g in self.free_gens),
                     n % self.torsion)

    def embed_exact(self, n: int) -> Point:
        """Exact embedding; torus coordinates are Fractions/QuadExt."""
        coords = []
        for g in self.free_gens:
            if isinstance(g, float):
                raise ValidationError("compactification has floating embedding data")
            coords.append(_normalize_value(to_quadext(g) * n))
        return Point(tuple(coords), n % self.torsion)

    def embed_window(self, ns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized embedding: (k x len(ns) float array, fiber int array)."""
        torus = np.empty((self.torus_rank, len(ns)))
        for j, g in enumerate(self.free_gens):
            torus[j] = (ns * float(g)) % 1.0
        return torus, np.mod(ns, self.torsion)

    def express(self, value: Value,
                tol: float = FLOAT_MEMBERSHIP_TOL,
                bound: int = COEFF_SEARCH_BOUND):
        """Write value = sum n_j beta_j + r/torsion (mod 1) if possible.

        Returns ((n_1..n_k), r), or None.  With exact data on both sides a
        None is a certified non-membership; with floats it only means the
        bounded search failed (see `covers` for the resulting verdict).
        """
        value = _normalize_value(value)
        if self.is_exact and not isinstance(value, float):
            return self._express_exact(to_quadext(value))
        return self._express_float(float(value), tol, bound)

    def _express_exact(self, gamma: QuadExt):
        k = self.torus_rank
        betas = [to_quadext(b) for b in self.free_gens]
        axes = sorted({c for g in betas + [gamma] for c in g.radical_coefficients()})
        if k == 0:
            n_sol: list[int] = []
        else:
            rows = [[betas[j].radical_coefficients().get(c, Fraction(0)) for j in range(k)]
                    for c in axes]
            target = [gamma.radical_coefficients().get(c, Fraction(0)) for c in axes]
            n_frac = _solve_unique(rows, target)
            if n_frac is None:
                return None
            if any(f.denominator != 1 for f in n_frac):
                return None
            n_sol = [int(f) for f in n_frac]
        rho = gamma
        for j, nj in enumerate(n_sol):
            rho = rho - betas[j] * nj
        rho = rho.mod1()
        if not rho.is_rational:  # leftover radical part: certified non-member
            return None
        rho_f = rho.as_fraction()
        if self.torsion % rho_f.denominator != 0:
            return None
        r = rho_f.numerator * (self.torsion // rho_f.denominator) % self.torsion
        return tuple(n_sol), r

    def _express_float(self, gamma: float, tol: float, bound: int):
        k = self.torus_rank
        betas = [float(b) for b in self.free_gens]
        per_axis = bound if k <= 1 else max(3, int(round(bound ** (1.0 / k))))
        ranges = [range(-per_axis, per_axis + 1)] * k
        best = None
        for combo in itertools.product(*ranges):
            rho = (gamma - sum(n * b for n, b in zip(combo, betas))) % 1.0
            fr = Fraction(rho).limit_denominator(self.torsion)
            err = min(abs(rho - float(fr)), abs(rho - float(fr) - 1.0), abs(rho - float(fr) + 1.0))
            if err <= tol:
                cand = (combo, (fr % 1).numerator * (self.torsion // (fr % 1).denominator)
                        % self.torsion if fr % 1 != 0 else 0)
                score = sum(abs(n) for n in combo)
                if best is None or score < best[0]:
                    best = (score, cand)
        return best[1] if best else None

    def covers(self, other: "Compactification",
               tol: float = FLOAT_MEMBERSHIP_TOL,
               bound: int = COEFF_SEARCH_BOUND) -> CoverResult:
        """Whether `other`'s subgroup is contained in this one's
        (i.e. (iota_other, other) is covered by (iota_self, self))."""
        exact_pair = self.is_exact
        gen_values: list[Value] = list(other.free_gens)
        if other.torsion > 1:
            gen_values.append(Fraction(1, other.torsion))
        undecided = []
        for g in gen_values:
            exact_step = exact_pair and not isinstance(g, float)
            res = self.express(g, tol=tol, bound=bound)
            if res is None:
                if exact_step:
                    return CoverResult(Verdict.FALSE, True,
                                       f"generator {g} is provably outside")
                undecided.append(g)
        if undecided:
            return CoverResult(Verdict.UNDECIDED, False,
                               f"membership search exhausted for {undecided[:3]}")
        certified = exact_pair and all(not isinstance(g, float) for g in gen_values)
        return CoverResult(Verdict.TRUE, certified)

    def to_json(self) -> dict:
        return {
            "torus_rank": self.torus_rank,
            "finite_orders": list(self.finite_orders),
            "embedding": [Character(g).to_json() for g in self.free_gens],
            "certified": self.certified,
        }

    @staticmethod
    def from_json(d: dict) -> "Compactification":
        gens = tuple(Character.from_json(g).value for g in d["embedding"])
        orders = d.get("finite_orders", [])
        torsion = int(orders[0]) if orders else 1
        return Compactification(gens, torsion, certified=d.get("certified", True))


def _solve_unique(rows: list[list[Fraction]], target: list[Fraction]):
    """Solve the overdetermined system rows * n = target for rational n,
    None if inconsistent.  The coefficient matrix must have full column rank
    (guaranteed for independent generators)."""
    nrows, ncols = len(rows), len(rows[0]) if rows else 0
    a = [[Fraction(x) for x in row] + [Fraction(t)] for row, t in zip(rows, target)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    # inconsistency: zero row with nonzero rhs
    for i in range(r, nrows):
        if a[i][ncols] != 0:
            return None
    if len(pivots) < ncols:
        # rank-deficient: generators were not independent (should not happen)
        raise PresentationError("generator matrix lost column rank")
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = a[i][ncols]
    return sol


def induce_compactification(gamma: SpectralSubgroup,
                            max_den: int = DENOMINATOR_BOUND,
                            require_certified: bool = False) -> Compactification:
    """Build (iota_Gamma, C_Gamma) = T^k x Z/L from a generated subgroup."""
    return Compactification.from_subgroup(gamma, max_den=max_den,
                                          require_certified=require_certified)


def covers(c1: Compactification, c2: Compactification, **kw) -> CoverResult:
    """True iff the subgroup of c1 is contained in the subgroup of c2,
    i.e. (iota_1, X_1) is covered by (iota_2, X_2)."""
    return c2.covers(c1, **kw)


# default exact irrational rotation numbers used for plain torus domains
_DEFAULT_IRRATIONALS = (
    QuadExt.quadratic(-1, 1, 2),   # sqrt(2) - 1
    QuadExt.quadratic(-1, 1, 3),   # sqrt(3) - 1
    QuadExt.quadratic(-2, 1, 5),   # sqrt(5) - 2
    QuadExt.quadratic(-2, 1, 7),   # sqrt(7) - 2
)


def torus_domain(k: int, torsion: int = 1) -> Compactification:
    """A standard exact T^k x Z/L domain (independent quadratic embeddings)."""
    if k > len(_DEFAULT_IRRATIONALS):
        raise ValidationError(f"torus rank {k} above the supported desk scale")
    return Compactification(_DEFAULT_IRRATIONALS[:k], torsion)

"""Exact Riemann-integrable realizations on T^k x Z/L.

StepFunction keeps a product grid: per torus coordinate a sorted tuple of
cut points starting at 0, and one value per (cell, fiber) pair.  With
rational cuts and values every operation here (Haar integral, translation,
L^1 distance, common refinement, fiber averaging) is exact in Fraction
arithmetic.  Irrational translates fall back to floating cuts and mark the
result approximate, which downstream code must treat as uncertified.

TrigPolynomial is the companion class for finite Fourier sums; it is the
realization class produced by Fejér synthesis.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import FloatingDataError, ValidationError
from .exactnum import QuadExt
from .group_model import Compactification, Character, Point

Num = object  # cut points: Fraction in exact mode, float in approximate mode


def _mod1(x):
    if isinstance(x, float):
        return x % 1.0
    if isinstance(x, QuadExt):
        v = x.mod1()
        return v.as_fraction() if v.is_rational else v
    return Fraction(x) % 1


def _is_zero(v) -> bool:
    return v == 0


def _abs_val(v):
    if isinstance(v, (int, Fraction)):
        return abs(v)
    return abs(complex(v))


def _real_ok(v) -> bool:
    return isinstance(v, (int, Fraction)) or (isinstance(v, float) and not isinstance(v, bool))


class StepFunction:
    """Piecewise-constant function on T^k x Z/L over a product grid."""

    def __init__(self, domain: Compactification, cuts: Sequence[Sequence[Num]],
                 values: dict):
        self.domain = domain
        self.k = domain.torus_rank
        self.L = domain.torsion
        if len(cuts) != self.k:
            raise ValidationError("cut list rank does not match the domain")
        self.cuts = tuple(tuple(c) for c in cuts)
        for cj in self.cuts:
            if not cj or cj[0] != 0:
                raise ValidationError("each cut list must start at 0")
            if any(not (0 <= a < 1) for a in cj):
                raise ValidationError("cuts must lie in [0,1)")
            if any(cj[i] >= cj[i + 1] for i in range(len(cj) - 1)):
                raise ValidationError("cuts must be strictly increasing")
        self.shape = tuple(len(c) for c in self.cuts)
        self.values = values
        n_cells = 1
        for s in self.shape:
            n_cells *= s
        if len(values) != n_cells * self.L:
            raise ValidationError("value table does not cover the grid")
        self._dense_cache = None

    # ---------------- constructors ----------------

    @staticmethod
    def constant(domain: Compactification, value) -> "StepFunction":
        cuts = tuple((Fraction(0),) for _ in range(domain.torus_rank))
        idx = tuple(0 for _ in range(domain.torus_rank))
        values = {idx + (c,): value for c in range(domain.torsion)}
        return StepFunction(domain, cuts, values)

    @staticmethod
    def from_pieces(domain: Compactification, pieces) -> "StepFunction":
        """Build from [(box, fiber_set, value)] with half-open arcs.

        box is a tuple of (a, b) pairs per torus coordinate, 0 <= a < b <= 1
        (a wrap-around arc may be given as a > b and is split).  fiber_set is
        an iterable of residues mod L, or None for all.  Pieces must be
        pairwise disjoint; uncovered cells default to 0.
        """
        k, L = domain.torus_rank, domain.torsion
        norm_pieces = []
        for box, fiber, value in pieces:
            if len(box) != k:
                raise ValidationError("box rank mismatch")
            arc_lists = []
            for a, b in box:
                a = _mod1(a)
                if b != 1:
                    b = _mod1(b)
                    if b == 0:
                        b = Fraction(1)
                if a == b:
                    raise ValidationError("empty or ambiguous arc")
                if a < b:
                    arcs = [(a, b)]
                else:  # wrap-around arc [a, 1) + [0, b)
                    arcs = [(a, Fraction(1))]
                    if b > 0:
                        arcs.append((Fraction(0), b))
                arc_lists.append(arcs)
            fibers = tuple(range(L)) if fiber is None else tuple(int(c) % L for c in fiber)
            for combo in itertools.product(*arc_lists) if k else [()]:
                norm_pieces.append((combo, fibers, value))

        cut_sets = [{Fraction(0)} for _ in range(k)]
        for box, _, _ in norm_pieces:
            for j, (a, b) in enumerate(box):
                cut_sets[j].add(a)
                if b != 1:
                    cut_sets[j].add(b)
        cuts = tuple(tuple(sorted(s)) for s in cut_sets)

        values: dict = {}
        shape = tuple(len(c) for c in cuts)
        for idx in itertools.product(*(range(s) for s in shape)) if k else [()]:
            mids = tuple(_cell_mid(cuts[j], idx[j]) for j in range(k))
            for c in range(L):
                hits = [v for box, fibers, v in norm_pieces
                        if c in fibers and all(a <= mids[j] < b for j, (a, b) in enumerate(box))]
                if len(hits) > 1:
                    raise ValidationError(f"pieces overlap at {mids}, fiber {c}")
                values[idx + (c,)] = hits[0] if hits else 0
        return StepFunction(domain, cuts, values)

    @staticmethod
    def indicator(domain: Compactification, box, fiber=None) -> "StepFunction":
        return StepFunction.from_pieces(domain, [(box, fiber, 1)])

    # ---------------- basic properties ----------------

    @property
    def is_exact(self) -> bool:
        return (all(isinstance(c, Fraction) for cj in self.cuts for c in cj)
                and all(isinstance(v, (int, Fraction)) for v in self.values.values()))

    @property
    def is_real(self) -> bool:
        return all(_real_ok(v) for v in self.values.values())

    def sup_norm(self) -> float:
        return max((abs(complex(v)) for v in self.values.values()), default=0.0)

    def value_range(self):
        vals = [v for v in self.values.values()]
        return min(vals), max(vals)

    def _cell_volume(self, idx) -> Num:
        vol = Fraction(1)
        for j, i in enumerate(idx):
            vol = vol * _cell_len(self.cuts[j], i)
        return vol

    def cells(self):
        """Iterate (idx, fiber, volume, value)."""
        for idx in itertools.product(*(range(s) for s in self.shape)) if self.k else [()]:
            vol = self._cell_volume(idx)
            for c in range(self.L):
                yield idx, c, vol, self.values[idx + (c,)]

    def pieces(self):
        """Export as a raw piece list [(box, [fiber], value)] (zero cells kept)."""
        out = []
        for idx, c, _, v in self.cells():
            box = tuple((self.cuts[j][i], _cell_end(self.cuts[j], i)) for j, i in enumerate(idx))
            out.append((box, (c,), v))
        return out

    # ---------------- measure-theoretic operations ----------------

    def haar_integral(self):
        total = 0
        for _, _, vol, v in self.cells():
            total = total + v * vol
        return total / self.L if self.L > 1 else total

    def abs(self) -> "StepFunction":
        return StepFunction(self.domain, self.cuts,
                            {key: _abs_val(v) for key, v in self.values.items()})

    def l1_norm(self):
        return self.abs().haar_integral()

    def scale(self, a) -> "StepFunction":
        return StepFunction(self.domain, self.cuts,
                            {key: v * a for key, v in self.values.items()})

    def evaluate(self, point: Point | tuple):
        torus, fiber = point
        idx = tuple(_locate(self.cuts[j], _mod1(torus[j])) for j in range(self.k))
        return self.values[idx + (int(fiber) % self.L,)]

    def translate(self, x) -> "StepFunction":
        """(tau_x f)(y) = f(y + x); exact for rational x, floating cuts and
        an uncertified result for irrational x."""
        if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], (tuple, list)):
            torus, fiber = x
        else:
            torus, fiber = x, 0
        if len(torus) != self.k:
            raise ValidationError("translation rank mismatch")
        shift = []
        for t in torus:
            if isinstance(t, QuadExt):
                shift.append(t.as_fraction() if t.is_rational else float(t))
            elif isinstance(t, float):
                shift.append(t)
            else:
                shift.append(Fraction(t))
        new_cuts = []
        for j in range(self.k):
            pts = sorted({_mod1(c - shift[j]) for c in self.cuts[j]} | {_zero_like(shift[j])})
            pts = _dedupe_sorted(pts)
            new_cuts.append(tuple(pts))
        fs = int(fiber) % self.L
        values = {}
        for idx in itertools.product(*(range(len(c)) for c in new_cuts)) if self.k else [()]:
            mids = tuple(_cell_mid(new_cuts[j], idx[j]) for j in range(self.k))
            src_idx = tuple(_locate(self.cuts[j], _mod1(mids[j] + shift[j]))
                            for j in range(self.k))
            for c in range(self.L):
                values[idx + (c,)] = self.values[src_idx + ((c + fs) % self.L,)]
        return StepFunction(self.domain, tuple(new_cuts), values)

    def binary(self, other: "StepFunction", op) -> "StepFunction":
        if other.domain.torus_rank != self.k or other.L != self.L:
            raise ValidationError("domain mismatch")
        cuts = tuple(_merge_cuts(self.cuts[j], other.cuts[j]) for j in range(self.k))
        values = {}
        for idx in itertools.product(*(range(len(c)) for c in cuts)) if self.k else [()]:
            mids = tuple(_cell_mid(cuts[j], idx[j]) for j in range(self.k))
            i_self = tuple(_locate(self.cuts[j], mids[j]) for j in range(self.k))
            i_other = tuple(_locate(other.cuts[j], mids[j]) for j in range(self.k))
            for c in range(self.L):
                values[idx + (c,)] = op(self.values[i_self + (c,)], other.values[i_other + (c,)])
        return StepFunction(self.domain, cuts, values)

    def __add__(self, other):
        return self.binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self.binary(other, lambda a, b: a - b)

    def l1_distance(self, other: "StepFunction"):
        """integral of |f - g| by common refinement; exact on rational data."""
        return (self - other).l1_norm()

    def equal_ae(self, other: "StepFunction") -> bool:
        return _is_zero(self.l1_distance(other))

    # ---------------- averaging / marginalization ----------------

    def average_out(self, dirs: Iterable[int]) -> tuple["StepFunction", Compactification]:
        """Integrate over the given torus coordinates (exact); returns the
        marginal on the reduced domain."""
        dirs = sorted(set(dirs))
        keep = [j for j in range(self.k) if j not in dirs]
        new_domain = Compactification(tuple(self.domain.free_gens[j] for j in keep),
                                      self.L, certified=self.domain.certified,
                                      _validated=True)
        new_cuts = tuple(self.cuts[j] for j in keep)
        values: dict = {}
        for idx in itertools.product(*(range(len(c)) for c in new_cuts)) if keep else [()]:
            for c in range(self.L):
                acc = 0
                for sub in itertools.product(*(range(self.shape[j]) for j in dirs)) if dirs else [()]:
                    full = [0] * self.k
                    for pos, j in enumerate(keep):
                        full[j] = idx[pos]
                    w = Fraction(1)
                    for pos, j in enumerate(dirs):
                        full[j] = sub[pos]
                        w = w * _cell_len(self.cuts[j], sub[pos])
                    acc = acc + self.values[tuple(full) + (c,)] * w
                values[idx + (c,)] = acc
        return StepFunction(new_domain, new_cuts, values), new_domain

    def fiber_orbit_average(self, elements) -> "StepFunction":
        """Average of translates over a finite list of (vector, fiber) group
        elements; exact on rational data."""
        n = len(elements)
        acc = None
        for vec, c in elements:
            t = self.translate((vec, c))
            acc = t if acc is None else acc + t
        return acc.scale(Fraction(1, n)) if acc.is_exact else acc.scale(1.0 / n)

    # ---------------- Fourier ----------------

    def fourier_coefficient(self, m: tuple[int, ...], r: int = 0) -> complex:
        """c(m, r) = integral of f * conj(character), as a complex float."""
        if len(m) != self.k:
            raise ValidationError("frequency rank mismatch")
        total = 0j
        for idx, c, _, v in self.cells():
            if v == 0:
                continue
            w = complex(v)
            for j, i in enumerate(idx):
                a = float(self.cuts[j][i])
                b = float(_cell_end(self.cuts[j], i))
                mj = m[j]
                if mj == 0:
                    w *= (b - a)
                else:
                    w *= (np.exp(-2j * np.pi * mj * a) - np.exp(-2j * np.pi * mj * b)) \
                        / (2j * np.pi * mj)
            w *= np.exp(-2j * np.pi * r * c / self.L) / self.L
            total += w
        return total

    def to_trig_polynomial(self, order: int, drop_tol: float = 1e-15) -> "TrigPolynomial":
        """Truncated Fourier expansion with torus frequencies |m_j| < order."""
        terms = {}
        m_ranges = [range(-order + 1, order) for _ in range(self.k)]
        for m in itertools.product(*m_ranges) if self.k else [()]:
            for r in range(self.L):
                c = self.fourier_coefficient(tuple(m), r)
                if abs(c) > drop_tol:
                    terms[(tuple(m), r)] = c
        return TrigPolynomial(self.domain, terms)

    # ---------------- vectorized evaluation ----------------

    def _dense(self):
        if self._dense_cache is None:
            arr = np.zeros(self.shape + (self.L,), dtype=complex)
            for key, v in self.values.items():
                arr[key] = complex(v)
            float_cuts = [np.array([float(c) for c in cj]) for cj in self.cuts]
            self._dense_cache = (arr, float_cuts)
        return self._dense_cache

    def evaluate_embedded(self, torus: np.ndarray, fiber: np.ndarray) -> np.ndarray:
        arr, float_cuts = self._dense()
        idx = []
        for j in range(self.k):
            idx.append(np.clip(np.searchsorted(float_cuts[j], torus[j], side="right") - 1,
                               0, self.shape[j] - 1))
        idx.append(fiber.astype(int) % self.L)
        return arr[tuple(idx)]

    # ---------------- morphology (for the Riemann sandwich) ----------------

    def morph(self, w, op) -> "StepFunction":
        """Dilation (op=max) or erosion (op=min) by the cube [-w, w]^k in the
        torus coordinates."""
        if not self.is_real:
            raise ValidationError("morphology needs real values")
        w = Fraction(w)
        new_cuts = []
        for j in range(self.k):
            pts = {_mod1(c + s) for c in self.cuts[j] for s in (-w, Fraction(0), w)}
            pts.add(Fraction(0))
            new_cuts.append(tuple(_dedupe_sorted(sorted(pts))))
        values = {}
        for idx in itertools.product(*(range(len(c)) for c in new_cuts)) if self.k else [()]:
            mids = [_cell_mid(new_cuts[j], idx[j]) for j in range(self.k)]
            cell_lists = [_cells_within(self.cuts[j], mids[j], w) for j in range(self.k)]
            for c in range(self.L):
                vals = [self.values[combo + (c,)]
                        for combo in itertools.product(*cell_lists)] if self.k else \
                       [self.values[(c,)]]
                values[tuple(idx) + (c,)] = op(vals)
        return StepFunction(self.domain, tuple(new_cuts), values)

    def box_average(self, point, w):
        """Average of f over the cube point + [-w/2, w/2)^k (exact for
        rational data); this is the mollified evaluation used by sandwich
        witnesses and is continuous in the point."""
        w = Fraction(w)
        torus, fiber = point
        weight_lists = []
        for j in range(self.k):
            x = Fraction(torus[j]) if not isinstance(torus[j], float) else torus[j]
            weight_lists.append(_overlap_weights(self.cuts[j], x - w / 2, w))
        total = 0
        for combo in itertools.product(*weight_lists) if self.k else [()]:
            wgt = Fraction(1)
            idx = []
            for i, (cell, ww) in enumerate(combo):
                idx.append(cell)
                wgt = wgt * ww
            total = total + self.values[tuple(idx) + (int(fiber) % self.L,)] * wgt
        return total / (w ** self.k) if self.k else self.values[(int(fiber) % self.L,)]

    # ---------------- serialization ----------------

    def to_json(self) -> dict:
        """Pieces with exact endpoints as p/q strings; exact values are
        serialized as strings too so the rational oracle survives a
        round-trip."""
        pieces = []
        for idx, c, _, v in self.cells():
            if v == 0:
                continue
            box = [[str(self.cuts[j][i]), str(_cell_end(self.cuts[j], i))]
                   for j, i in enumerate(idx)]
            if isinstance(v, (int, Fraction)):
                value = {"re": str(Fraction(v)), "im": "0"}
            else:
                cv = complex(v)
                value = {"re": cv.real, "im": cv.imag}
            pieces.append({"box": box, "fiber": [c], "value": value})
        return {"domain": self.domain.to_json(), "pieces": pieces}

    @staticmethod
    def from_json(d: dict) -> "StepFunction":
        domain = Compactification.from_json(d["domain"])
        pieces = []
        for p in d["pieces"]:
            box = tuple((Fraction(a), Fraction(b)) for a, b in p["box"])
            re, im = p["value"]["re"], p["value"]["im"]
            if isinstance(re, str):
                val = Fraction(re) if Fraction(im or "0") == 0 else complex(float(Fraction(re)),
                                                                            float(Fraction(im)))
            else:
                val = complex(re, im) if im else float(re)
            pieces.append((box, p.get("fiber"), val))
        return StepFunction.from_pieces(domain, pieces)


# ---------------- grid helpers ----------------

def _zero_like(x):
    return 0.0 if isinstance(x, float) else Fraction(0)


def _cell_end(cuts, i):
    one = 1.0 if isinstance(cuts[0], float) else Fraction(1)
    return cuts[i + 1] if i + 1 < len(cuts) else one


def _cell_len(cuts, i):
    return _cell_end(cuts, i) - cuts[i]


def _cell_mid(cuts, i):
    if isinstance(cuts[i], float) or isinstance(_cell_end(cuts, i), float):
        return (float(cuts[i]) + float(_cell_end(cuts, i))) / 2.0
    return (cuts[i] + _cell_end(cuts, i)) / 2


def _locate(cuts, x) -> int:
    i = bisect_right(cuts, x) - 1
    return max(i, 0)


def _dedupe_sorted(pts):
    out = []
    for p in pts:
        if not out or p != out[-1]:
            out.append(p)
    return out


def _merge_cuts(a, b):
    return tuple(_dedupe_sorted(sorted(set(a) | set(b))))


def _cells_within(cuts, mid, w):
    """Indices of cells intersecting [mid - w, mid + w] on the circle."""
    n = len(cuts)
    lo, hi = mid - w, mid + w
    out = set()
    for i in range(n):
        a, b = cuts[i], _cell_end(cuts, i)
        for shift in (-1, 0, 1):
            if a + shift < hi and b + shift > lo:
                out.add(i)
    return sorted(out)


def _overlap_weights(cuts, start, width):
    """[(cell index, overlap length)] of [start, start+width) with the grid
    cells on the circle; exact for rational inputs."""
    out = []
    n = len(cuts)
    for i in range(n):
        a, b = cuts[i], _cell_end(cuts, i)
        total = 0
        for shift in (-1, 0, 1):
            lo = max(a + shift, start)
            hi = min(b + shift, start + width)
            if hi > lo:
                total = total + (hi - lo)
        if total != 0:
            out.append((i, total))
    return out


# ---------------- trig polynomials ----------------

class TrigPolynomial:
    """Finite Fourier sum sum_c terms[(m, r)] e^{2 pi i (m.x + r f/L)} on a
    compactification T^k x Z/L."""

    def __init__(self, domain: Compactification, terms: dict):
        self.domain = domain
        self.k = domain.torus_rank
        self.L = domain.torsion
        clean = {}
        for (m, r), c in terms.items():
            m = tuple(int(x) for x in m)
            if len(m) != self.k:
                raise ValidationError("frequency rank mismatch")
            r = int(r) % self.L
            if c != 0:
                clean[(m, r)] = clean.get((m, r), 0) + c
        self.terms = {key: c for key, c in clean.items() if c != 0}

    @property
    def is_exact(self) -> bool:
        return self.domain.is_exact and all(
            isinstance(c, (int, Fraction)) for c in self.terms.values())

    def rotation_number(self, key):
        """Exact rotation number of the character for a term key."""
        m, r = key
        acc = QuadExt.from_rational(Fraction(r, self.L))
        for mj, beta in zip(m, self.domain.free_gens):
            if isinstance(beta, float):
                return (sum(mj * beta for mj, beta in zip(m, map(float, self.domain.free_gens)))
                        + r / self.L) % 1.0
            acc = acc + QuadExt.from_rational(mj) * (
                beta if isinstance(beta, QuadExt) else QuadExt.from_rational(beta))
        v = acc.mod1()
        return v.as_fraction() if v.is_rational else v

    def frequencies(self) -> list[Character]:
        return [Character(self.rotation_number(key)) for key in self.terms]

    def mean(self):
        return self.terms.get((tuple(0 for _ in range(self.k)), 0), 0)

    def coefficient_l1(self):
        return sum(_abs_val(c) for c in self.terms.values())

    def sup_bound(self) -> float:
        return float(sum(abs(complex(c)) for c in self.terms.values()))

    def evaluate(self, n: int) -> complex:
        if self.k == 0:
            return complex(sum(complex(c) * np.exp(2j * np.pi * ((n * r) % self.L) / self.L)
                               for ((_m, r)), c in self.terms.items()))
        total = 0j
        for (m, r), c in self.terms.items():
            theta = (sum(mj * float(b) for mj, b in zip(m, self.domain.free_gens)) * n
                     + n * r / self.L)
            total += complex(c) * np.exp(2j * np.pi * theta)
        return complex(total)

    def evaluate_window(self, ns: np.ndarray) -> np.ndarray:
        out = np.zeros(len(ns), dtype=complex)
        for (m, r), c in self.terms.items():
            if self.k == 0:
                phase = ((ns * r) % self.L).astype(float) / self.L
            else:
                rot = sum(mj * float(b) for mj, b in zip(m, self.domain.free_gens)) + r / self.L
                phase = (ns * rot) % 1.0
            out += complex(c) * np.exp(2j * np.pi * phase)
        return out

    def evaluate_embedded(self, torus: np.ndarray, fiber: np.ndarray) -> np.ndarray:
        out = np.zeros(torus.shape[1] if self.k else len(fiber), dtype=complex)
        for (m, r), c in self.terms.items():
            phase = np.zeros_like(out, dtype=float)
            for j, mj in enumerate(m):
                phase += mj * torus[j]
            phase += r * fiber.astype(float) / self.L
            out += complex(c) * np.exp(2j * np.pi * phase)
        return out

    def scale(self, a) -> "TrigPolynomial":
        return TrigPolynomial(self.domain, {k: c * a for k, c in self.terms.items()})

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if other.domain.free_gens != self.domain.free_gens or other.L != self.L:
            raise ValidationError("domain mismatch")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return TrigPolynomial(self.domain, terms)

    def __mul__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        if other.domain.free_gens != self.domain.free_gens or other.L != self.L:
            raise ValidationError("domain mismatch")
        terms: dict = {}
        for (m1, r1), c1 in self.terms.items():
            for (m2, r2), c2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(m1, m2)), (r1 + r2) % self.L)
                terms[key] = terms.get(key, 0) + c1 * c2
        return TrigPolynomial(self.domain, terms)

    def to_json(self) -> dict:
        items = sorted(self.terms.items())
        return {"domain": self.domain.to_json(),
                "terms": [{"m": list(m), "r": r,
                           "re": complex(c).real, "im": complex(c).imag}
                          for (m, r), c in items]}


# ---------------- closed subgroups of the domain ----------------

@dataclass(frozen=True)
class SubgroupH:
    """Closed subgroup of T^k x Z/L in the supported shape class:
    full subtori in some coordinate directions plus a finite group generated
    by rational translations (possibly coupled with fiber shifts)."""

    subtorus_dirs: frozenset
    torsion_gens: tuple  # ((Fraction, ...) torus vector, fiber shift int)

    @staticmethod
    def of(dirs=(), gens=()) -> "SubgroupH":
        norm = []
        for vec, c in gens:
            norm.append((tuple(Fraction(t) % 1 for t in vec), int(c)))
        return SubgroupH(frozenset(int(d) for d in dirs), tuple(norm))

    @staticmethod
    def trivial(k: int = 0) -> "SubgroupH":
        return SubgroupH(frozenset(), ())

    def finite_elements(self, k: int, L: int, cap: int = 4096):
        """Closure of the torsion generators under addition; includes 0."""
        zero = (tuple(Fraction(0) for _ in range(k)), 0)
        gens = [(tuple(Fraction(t) % 1 for t in vec) + tuple(
            Fraction(0) for _ in range(k - len(vec))), int(c) % L)
            for vec, c in self.torsion_gens]
        elements = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for vec, c in frontier:
                for gvec, gc in gens:
                    cand = (tuple((a + b) % 1 for a, b in zip(vec, gvec)), (c + gc) % L)
                    if cand not in elements:
                        if len(elements) >= cap:
                            raise ValidationError("torsion subgroup closure exceeded the cap")
                        elements.add(cand)
                        nxt.append(cand)
            frontier = nxt
        return sorted(elements)

    def is_trivial(self, k: int, L: int) -> bool:
        return not self.subtorus_dirs and len(self.finite_elements(k, L)) == 1


# ---------------- the Riemann sandwich ----------------

@dataclass
class SandwichWitness:
    """Continuous minorant/majorant pair certifying Riemann integrability.

    lower(x)/upper(x) are box-mollified erosions/dilations of the step
    function: piecewise (multi)linear, continuous, and with exactly
    computable integrals equal to the Haar integrals of the carrier steps.
    """

    lower_step: StepFunction
    upper_step: StepFunction
    width: Fraction

    def lower(self, point):
        return self.lower_step.box_average(point, self.width)

    def upper(self, point):
        return self.upper_step.box_average(point, self.width)

    def lower_integral(self):
        return self.lower_step.haar_integral()

    def upper_integral(self):
        return self.upper_step.haar_integral()

    def gap(self):
        return self.upper_integral() - self.lower_integral()


def sandwich(f: StepFunction, eps) -> SandwichWitness:
    """Continuous g <= f <= h with integral(h - g) < eps, constructively.

    The witnesses are box-mollifications (width w) of the w-dilation and
    w-erosion of f, so ordering holds pointwise and the gap is the exact
    rational measure of the w-neighborhood of the discontinuity set times
    the local oscillation.
    """
    if not f.is_real:
        raise ValidationError("sandwich witnesses are defined for real-valued functions")
    if not all(isinstance(c, Fraction) for cj in f.cuts for c in cj):
        raise FloatingDataError("sandwich needs exact rational cuts")
    eps = Fraction(eps).limit_denominator(10**12) if isinstance(eps, float) else Fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    if f.k == 0:
        return SandwichWitness(f, f, Fraction(1, 4))
    lo, hi = f.value_range()
    osc = Fraction(hi) - Fraction(lo)
    if osc == 0:
        return SandwichWitness(f, f, Fraction(1, 8))
    n_cuts = sum(len(c) for c in f.cuts)
    w = min(eps / (4 * osc * n_cuts), Fraction(1, 8))
    while True:
        upper = f.morph(w, max)
        lower = f.morph(w, min)
        if upper.haar_integral() - lower.haar_integral() < eps:
            return SandwichWitness(lower, upper, w)
        w = w / 2


# ---------------- module-level operation aliases ----------------

def haar_integral(f: StepFunction):
    """Haar integral; exact rational on rational data."""
    return f.haar_integral()


def translate(f: StepFunction, x) -> StepFunction:
    return f.translate(x)


def l1_distance(f: StepFunction, g: StepFunction):
    return f.l1_distance(g)

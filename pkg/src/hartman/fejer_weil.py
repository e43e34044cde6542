"""Fejér summation with the finite-group Fourier split, the Weil
fiber-average over a closed subgroup, quotient compactifications, and the
aperiodization pipeline.

The Fejér operator acts on coefficient representations (exact damping
factors (1 - |m|/n)_+ per torus frequency; finite-group characters pass
through), never by numerical convolution.  Quotients are computed through
the annihilator lattice of the subgroup: the new compactification's torsion
is read off the fiber conditions, and the torus part must reduce to
per-coordinate multiplications for the box geometry of step functions to
survive; other subtorus slopes raise UnsupportedSubgroupError.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .distance import kernel_subgroup
from .errors import FloatingDataError, UnsupportedSubgroupError, ValidationError
from .exactnum import QuadExt, to_quadext
from .group_model import Compactification, SpectralSubgroup, induce_compactification
from .lattice import crt_intersect, kernel_mod, row_hnf
from .riemann_step import StepFunction, SubgroupH, TrigPolynomial
from .sequences import Realized


# ---------------- Fejér operator ----------------

@dataclass(frozen=True)
class FejerOperator:
    """sigma_n: damps the torus frequency vector m by prod (1 - |m_j|/n)_+;
    the corresponding kernel K_n is nonnegative with integral one."""

    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValidationError("Fejér order must be >= 1")

    def damping(self, m: tuple[int, ...]) -> Fraction:
        d = Fraction(1)
        for mj in m:
            if abs(mj) >= self.order:
                return Fraction(0)
            d *= Fraction(self.order - abs(mj), self.order)
        return d


def fejer_apply(op: FejerOperator, f: TrigPolynomial | StepFunction) -> TrigPolynomial:
    """sigma_n f on the coefficient representation.  Step functions are
    expanded through their exact arc integrals to torus order < n first."""
    if isinstance(f, StepFunction):
        f = f.to_trig_polynomial(op.order)
    terms = {}
    for (m, r), c in f.terms.items():
        d = op.damping(m)
        if d != 0:
            terms[(m, r)] = c * d
    return TrigPolynomial(f.domain, terms)


def fejer_kernel_values(order: int, xs: np.ndarray) -> np.ndarray:
    """K_n on the circle: (1/n) (sin(pi n x)/sin(pi x))^2, value n at 0."""
    x = np.asarray(xs, dtype=float) % 1.0
    out = np.full_like(x, float(order))
    nz = np.minimum(x, 1 - x) > 1e-12
    out[nz] = (np.sin(np.pi * order * x[nz]) / np.sin(np.pi * x[nz])) ** 2 / order
    return out


# ---------------- quotient maps ----------------

@dataclass(frozen=True)
class QuotientMap:
    """pi_H: T^k x Z/L -> T^k' x Z/L' in the supported (per-coordinate)
    form y_j = m_j * x_{kept_j} + s_j * c / L mod 1, fiber c -> c mod L'."""

    source: Compactification
    target: Compactification
    kept: tuple[int, ...]
    mults: tuple[int, ...]
    shifts: tuple[int, ...]  # s_j, taken mod L

    def apply(self, point):
        torus, c = point
        c = int(c) % self.source.torsion
        L = self.source.torsion
        ys = []
        for j, src in enumerate(self.kept):
            x = torus[src]
            y = self.mults[j] * (Fraction(x) if not isinstance(x, float) else x) \
                + Fraction(self.shifts[j] * c, L)
            ys.append(y % 1 if not isinstance(y, float) else y % 1.0)
        return (tuple(ys), c % self.target.torsion)

    def pull(self, g: StepFunction) -> StepFunction:
        """g o pi_H as a step function on the source domain."""
        if g.domain.torus_rank != len(self.kept) or g.L != self.target.torsion:
            raise ValidationError("pullback domain mismatch")
        src = self.source
        L = src.torsion
        cuts: list = []
        for j in range(src.torus_rank):
            if j in self.kept:
                pos = self.kept.index(j)
                m, s = self.mults[pos], self.shifts[pos]
                pts = {Fraction(0)}
                for cy in g.cuts[pos]:
                    for c in range(L):
                        base = (Fraction(cy) - Fraction(s * c, L)) / m
                        for t in range(m):
                            pts.add((base + Fraction(t, m)) % 1)
                cuts.append(tuple(sorted(pts)))
            else:
                cuts.append((Fraction(0),))
        values = {}
        shape = tuple(len(c) for c in cuts)
        for idx in itertools.product(*(range(s) for s in shape)) if src.torus_rank else [()]:
            mids = tuple(_mid(cuts[j], idx[j]) for j in range(src.torus_rank))
            for c in range(L):
                pt = self.apply((mids, c))
                values[idx + (c,)] = g.evaluate(pt)
        return StepFunction(src, tuple(cuts), values)

    def push(self, f: StepFunction) -> StepFunction:
        """Express an H-invariant f (already averaged, living on the kept
        coordinates) in the quotient coordinates."""
        if f.domain.torus_rank != len(self.kept) or f.L != self.source.torsion:
            raise ValidationError("pushforward domain mismatch")
        L, Lq = self.source.torsion, self.target.torsion
        cuts = []
        for j in range(len(self.kept)):
            m, s = self.mults[j], self.shifts[j]
            pts = {Fraction(0)}
            for cx in f.cuts[j]:
                for c in range(Lq):
                    pts.add((m * Fraction(cx) + Fraction(s * c, L)) % 1)
            cuts.append(tuple(sorted(pts)))
        values = {}
        shape = tuple(len(c) for c in cuts)
        for idx in itertools.product(*(range(s) for s in shape)) if cuts else [()]:
            mids = tuple(_mid(cuts[j], idx[j]) for j in range(len(cuts)))
            for cq in range(Lq):
                xs = tuple(((Fraction(mids[j]) - Fraction(self.shifts[j] * cq, L))
                            / self.mults[j]) % 1 for j in range(len(cuts)))
                values[idx + (cq,)] = f.evaluate((xs, cq))
        return StepFunction(self.target, tuple(cuts), values)


def _mid(cuts, i):
    end = cuts[i + 1] if i + 1 < len(cuts) else Fraction(1)
    return (cuts[i] + end) / 2


def quotient_map(comp: Compactification, h: SubgroupH) -> tuple[QuotientMap, list]:
    """Build pi_H for a supported H <= T^k x Z/L.

    Returns the map together with the finite element list of the torsion
    part (restricted to the kept coordinates).  Raises
    UnsupportedSubgroupError when the annihilator's torus projection is not
    a per-coordinate lattice (box geometry would not survive).
    """
    k, L = comp.torus_rank, comp.torsion
    dirs = sorted(h.subtorus_dirs)
    if any(d < 0 or d >= k for d in dirs):
        raise ValidationError("subtorus direction out of range")
    kept = tuple(j for j in range(k) if j not in dirs)

    gens = []
    for vec, c in h.torsion_gens:
        vec = tuple(Fraction(t) % 1 for t in vec) + tuple(
            Fraction(0) for _ in range(k - len(vec)))
        gens.append((tuple(vec[j] for j in kept), int(c) % L))
    elements = SubgroupH.of((), gens).finite_elements(len(kept), L)

    k1 = len(kept)
    # annihilator lattice B = {(n, r): n.t + r c / L in Z for all generators}
    q = L
    for vec, _ in gens:
        for t in vec:
            q = lcm(q, t.denominator)
    rows = []
    for vec, c in gens:
        rows.append([int(t * q) for t in vec] + [c * q // L])
    basis = kernel_mod(rows, q) if rows else [[int(i == j) for j in range(k1 + 1)]
                                              for i in range(k1 + 1)]
    # fiber torsion of the quotient: {r : (0, r) in B} = g Z
    g = 1
    for _, c in gens:
        g = lcm(g, L // gcd(c, L))
    Lq = L // g
    # torus projection must be per-coordinate
    proj = [b[:k1] for b in basis]
    hnf = row_hnf(proj) if k1 else []
    if len(hnf) != k1 or any(hnf[i][j] != 0 for i in range(k1) for j in range(k1) if i != j):
        raise UnsupportedSubgroupError(
            "quotient torus lattice is not per-coordinate; general subtorus slopes "
            "are outside the supported shape class")
    mults = tuple(hnf[j][j] for j in range(k1))
    shifts = []
    for j in range(k1):
        sol = (0, 1)
        for vec, c in gens:
            t = vec[j] * mults[j]
            # m_j t_ij + r c / L in Z  <=>  (c den) r = -L m_j p (mod L den)
            den = t.denominator
            cong = _solve_cong(c * den, -L * t.numerator, L * den)
            if cong is None:
                sol = None
                break
            sol = crt_intersect(sol, cong)
            if sol is None:
                break
        if sol is None:
            raise UnsupportedSubgroupError("no fiber shift lifts the torus multiplier")
        shifts.append(sol[0] % L)

    new_betas = []
    for j, src in enumerate(kept):
        beta = comp.free_gens[src]
        if isinstance(beta, float):
            nb = (mults[j] * beta + shifts[j] / L) % 1.0
        else:
            nb = (to_quadext(beta) * mults[j] + Fraction(shifts[j], L)).mod1()
        new_betas.append(nb)
    target = Compactification(tuple(new_betas), Lq, certified=comp.certified,
                              _validated=True)
    qm = QuotientMap(comp, target, kept, mults, tuple(shifts))
    return qm, elements


def _solve_cong(a, b, m):
    from .lattice import solve_congruence

    return solve_congruence(a % m, b % m, m)


# ---------------- Weil fiber average and aperiodization ----------------

def fiber_average_with_map(f: StepFunction, h: SubgroupH) -> tuple[StepFunction, QuotientMap]:
    """b'f on the quotient domain: exact average over H-cosets (subtorus
    directions integrated out, finite torsion orbit averaged), expressed in
    the quotient coordinates."""
    if not all(isinstance(c, Fraction) for cj in f.cuts for c in cj):
        raise FloatingDataError("fiber averaging needs rational cut data")
    qm, elements = quotient_map(f.domain, h)
    f1, _ = f.average_out(sorted(h.subtorus_dirs))
    if len(elements) > 1:
        f1 = f1.fiber_orbit_average(elements)
    return qm.push(f1), qm


def fiber_average(f: StepFunction, h: SubgroupH) -> StepFunction:
    """Weil fiber-average operator; integral is preserved exactly."""
    psi, _ = fiber_average_with_map(f, h)
    return psi


@dataclass(frozen=True)
class AperiodizationResult:
    psi_star: StepFunction
    subgroup: SubgroupH
    quotient: QuotientMap
    certificate: dict

    def to_json(self) -> dict:
        cert = dict(self.certificate)
        res = cert.get("residual")
        cert["residual"] = str(res) if isinstance(res, Fraction) else res
        return {
            "kernel": {
                "subtorus_dirs": sorted(self.subgroup.subtorus_dirs),
                "torsion_gens": [[list(map(str, vec)), c]
                                 for vec, c in self.subgroup.torsion_gens],
            },
            "target": self.quotient.target.to_json(),
            "certificate": cert,
        }


def aperiodize(phi_star: StepFunction) -> AperiodizationResult:
    """Quotient out ker d_{phi*} and average over its cosets; the result is
    an aperiodic almost realization: the certificate checks that the new
    kernel is trivial and that the pullback agrees with the input in L^1
    exactly."""
    h = kernel_subgroup(phi_star)
    psi, qm = fiber_average_with_map(phi_star, h)
    pulled = qm.pull(psi)
    residual = phi_star.l1_distance(pulled)
    kernel_after = kernel_subgroup(psi)
    weil_ok = psi.haar_integral() == phi_star.haar_integral()
    cert = {
        "kernel_trivial": kernel_after.is_trivial(psi.k, psi.L),
        "residual": residual,
        "weil_check": "exact-pass" if weil_ok else "FAIL",
    }
    return AperiodizationResult(psi, h, qm, cert)


# ---------------- realization on the spectral compactification ----------------

@dataclass(frozen=True)
class GammaRealization:
    gamma: SpectralSubgroup
    comp: Compactification
    realization: TrigPolynomial
    order: int
    residual_bound: object  # exact Fraction for exact coefficients, float otherwise
    certified: bool

    def to_json(self) -> dict:
        rb = self.residual_bound
        return {
            "gamma": self.gamma.to_json(),
            "comp": self.comp.to_json(),
            "order": self.order,
            "residual_bound": str(rb) if isinstance(rb, Fraction) else rb,
            "certified": self.certified,
        }


def realize_on_gamma(phi: Realized, order: int = 256,
                     step_drop_tol: float = 1e-12) -> GammaRealization:
    """Compute Gamma(phi) from the realization's coefficients, build
    C_Gamma, and return the Fejér almost-realization sigma_n phi* expressed
    on it, with a certified upper bound sum |c|(1 - damping) for the L^1
    truncation residual."""
    real = phi.realization
    if isinstance(real, StepFunction):
        poly = real.to_trig_polynomial(order, drop_tol=step_drop_tol)
        certified = False  # nonzero-coefficient set decided by threshold
    elif isinstance(real, TrigPolynomial):
        poly = real
        certified = poly.is_exact
    else:
        raise ValidationError("unsupported realization")

    freqs = [poly.rotation_number(key) for key in poly.terms]
    gamma = SpectralSubgroup.of(*freqs) if freqs else SpectralSubgroup.of(Fraction(0))
    comp = induce_compactification(gamma)
    certified = certified and comp.certified

    op = FejerOperator(order)
    terms = {}
    residual = Fraction(0) if certified else 0.0
    for key, c in poly.terms.items():
        rot = poly.rotation_number(key)
        expr = comp.express(rot)
        if expr is None:
            raise ValidationError("frequency failed to land in its own spectral subgroup")
        n_vec, r = expr
        d = op.damping(n_vec)
        residual = residual + _abs_coeff(c, certified) * (1 - d)
        if d != 0:
            terms[(tuple(n_vec), r)] = c * d
    return GammaRealization(gamma, comp, TrigPolynomial(comp, terms), order,
                            residual, certified)


def _abs_coeff(c, exact: bool):
    if exact and isinstance(c, (int, Fraction)):
        return abs(Fraction(c))
    return abs(complex(c))


def l1_grid_estimate(a, b, comp: Compactification, grid: int = 512) -> float:
    """Grid quadrature of ||a - b||_1 for diagnostics (not an oracle)."""
    k, L = comp.torus_rank, comp.torsion
    per = max(2, int(round(grid ** (1.0 / max(k, 1)))))
    axes = [np.arange(per) / per + 0.5 / per for _ in range(k)]
    total, count = 0.0, 0
    for combo in itertools.product(*axes) if k else [()]:
        torus = np.array(combo).reshape(k, 1)
        for c in range(L):
            fib = np.array([c])
            va = a.evaluate_embedded(torus, fib)[0]
            vb = b.evaluate_embedded(torus, fib)[0]
            total += abs(va - vb)
            count += 1
    return total / count

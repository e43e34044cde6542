"""Translation-distance functions d_phi (on Z) and d_{phi*} (on the
compactification), their kernel subgroups, the filter sets F(phi, eps), and
the filter-limit membership diagnostic for characters.

d_phi(g) = m(|phi - tau_g phi|) is estimated by symmetric Cesaro windows;
d_{phi*}(x) = ||phi* - tau_x phi*||_1 is exact for rational step data.  The
filter F(phi, eps) is materialized only as a finite windowed set together
with its eps-monotonicity; the abstract filter is never reified.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import FloatingDataError, KernelSearchError, ValidationError
from .group_model import Character, Compactification
from .means import MeanEstimate, fourier_coefficient, window_mean
from .riemann_step import StepFunction, SubgroupH, TrigPolynomial
from .sequences import HartmanFunction, Realized

KERNEL_CANDIDATE_CAP = 50000


def distance_estimate(phi: HartmanFunction, g: int, N: int) -> MeanEstimate:
    """Windowed estimate of d_phi(g) = m(|phi - tau_g phi|)."""
    w = phi.window_values(N + abs(g))
    mid = N + abs(g)
    seg = w[mid - N: mid + N + 1]
    seg_g = w[mid - N + g: mid + N + 1 + g]
    return window_mean(np.abs(seg - seg_g).astype(complex), N)


def distance_on_z(phi: HartmanFunction, g: int, N: int) -> float:
    if g == 0:
        return 0.0
    return float(distance_estimate(phi, g, N).value.real)


def distance_sweep(phi: HartmanFunction, g_window: int, N: int) -> dict[int, MeanEstimate]:
    """d_phi estimates for every g in [-g_window, g_window], sharing one
    evaluation window."""
    G = g_window
    w = phi.window_values(N + G)
    mid = N + G
    out = {}
    for g in range(-G, G + 1):
        seg = w[mid - N: mid + N + 1]
        seg_g = w[mid - N + g: mid + N + 1 + g]
        out[g] = window_mean(np.abs(seg - seg_g).astype(complex), N)
    return out


def distance_on_x(phi_star: StepFunction, x) -> float | Fraction:
    """d_{phi*}(x) = ||phi* - tau_x phi*||_1; exact rational for rational x
    on rational data, floating otherwise."""
    return phi_star.l1_distance(phi_star.translate(x))


@dataclass(frozen=True)
class DistanceProfile:
    """Windowed d_phi estimates plus the exact d_{phi*} when available."""

    on_z: dict
    g_window: int
    N: int
    realization: StepFunction | None = None

    def on_x(self, x):
        if self.realization is None:
            raise ValidationError("no exact realization attached to this profile")
        return distance_on_x(self.realization, x)

    def values(self) -> dict[int, float]:
        return {g: float(est.value.real) for g, est in self.on_z.items()}


def distance_profile(phi: HartmanFunction, g_window: int, N: int) -> DistanceProfile:
    realization = None
    if isinstance(phi, Realized) and isinstance(phi.realization, StepFunction) \
            and phi.realization.is_exact:
        realization = phi.realization
    return DistanceProfile(distance_sweep(phi, g_window, N), g_window, N, realization)


# ---------------- kernel subgroup of a rational step function ----------------

def _is_constant_along(f: StepFunction, j: int) -> bool:
    if f.shape[j] == 1:
        return True
    for idx in itertools.product(*(range(s) for s in f.shape)):
        if idx[j] == 0:
            continue
        base = idx[:j] + (0,) + idx[j + 1:]
        for c in range(f.L):
            if f.values[idx + (c,)] != f.values[base + (c,)]:
                return False
    return True


def kernel_subgroup(phi_star: StepFunction) -> SubgroupH:
    """ker d_{phi*} = {x : ||phi* - tau_x phi*||_1 = 0}, exactly.

    Works on rational step data only.  Constant coordinate directions give
    full subtorus factors; the finite part is found by testing every
    candidate translation whose coordinates are differences of cut points
    (a complete candidate set, since a.e.-invariant translations must map
    essential jump positions onto each other), coupled with every fiber
    shift.
    """
    if not phi_star.is_exact:
        raise FloatingDataError("kernel detection is defined for rational step functions")
    k, L = phi_star.k, phi_star.L
    const_dirs = [j for j in range(k) if _is_constant_along(phi_star, j)]
    moving = [j for j in range(k) if j not in const_dirs]

    cand_per_dir = []
    for j in moving:
        cuts = phi_star.cuts[j]
        diffs = sorted({(a - b) % 1 for a in cuts for b in cuts})
        cand_per_dir.append(diffs)
    n_cands = L
    for d in cand_per_dir:
        n_cands *= len(d)
    if n_cands > KERNEL_CANDIDATE_CAP:
        raise KernelSearchError(f"kernel candidate budget exceeded ({n_cands})")

    gens = []
    for combo in itertools.product(*cand_per_dir) if moving else [()]:
        for c in range(L):
            vec = [Fraction(0)] * k
            for pos, j in enumerate(moving):
                vec[j] = combo[pos]
            if all(v == 0 for v in vec) and c == 0:
                continue
            if phi_star.l1_distance(phi_star.translate((tuple(vec), c))) == 0:
                gens.append((tuple(vec), c))
    return SubgroupH.of(dirs=const_dirs, gens=gens)


# ---------------- filter sets ----------------

@dataclass(frozen=True)
class FilterSet:
    """F(phi, eps) materialized on a finite window of g values."""

    eps: float
    members: tuple
    g_window: int
    N: int

    def __contains__(self, g: int) -> bool:
        return g in set(self.members)

    def to_json(self) -> dict:
        return {"eps": self.eps, "g_window": self.g_window, "N": self.N,
                "members": list(self.members)}


def filter_set(phi: HartmanFunction, eps: float, g_window: int, N: int,
               sweep: dict | None = None) -> FilterSet:
    """{g in [-G, G] : d_phi(g) < eps}; 0 always belongs."""
    if eps <= 0:
        raise ValidationError("eps must be positive")
    sweep = distance_sweep(phi, g_window, N) if sweep is None else sweep
    members = tuple(sorted(g for g, est in sweep.items()
                           if (0.0 if g == 0 else float(est.value.real)) < eps))
    return FilterSet(float(eps), members, g_window, N)


# ---------------- Sub(phi) membership diagnostic ----------------

class SubVerdict(enum.Enum):
    CONSISTENT = "consistent with membership"
    INCONSISTENT = "inconsistent with membership"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SubMembershipReport:
    chi: Character
    verdict: SubVerdict
    deltas: tuple
    envelope: tuple
    coefficient: MeanEstimate
    g_window: int
    N: int
    inequality_slack: float
    inequality_margin: float  # max over g of LHS - d_hat(g); <= slack when sound

    def to_json(self) -> dict:
        return {
            "chi": self.chi.to_json(),
            "verdict": self.verdict.value,
            "deltas": list(self.deltas),
            "envelope": list(self.envelope),
            "coefficient": self.coefficient.to_json(),
            "g_window": self.g_window,
            "N": self.N,
            "inequality_slack": self.inequality_slack,
            "inequality_margin": self.inequality_margin,
        }


def sub_membership_test(phi: HartmanFunction, chi: Character, g_window: int = 200,
                        N: int = 20000, n_deltas: int = 8,
                        consistent_threshold: float = 0.2,
                        inconsistent_floor: float = 0.8,
                        sweep: dict | None = None) -> SubMembershipReport:
    """Envelope report for the filter-limit test chi in Sub(phi).

    E(delta) = max{|1 - chi(g)| : d_phi(g) < delta} over the window; the
    verdict is graded (consistent / inconsistent / inconclusive), never a
    proof.  The report also audits the exact inequality
    |1 - chi(g)| * |m(phi conj(chi))| <= d_phi(g) + slack with the slack
    budget coming from window-shift bounds and dyadic stagnation spreads.
    """
    if not isinstance(chi, Character):
        chi = Character(chi)
    sweep = distance_sweep(phi, g_window, N) if sweep is None else sweep
    gs = np.array(sorted(sweep.keys()))
    dvals = np.array([0.0 if g == 0 else float(sweep[g].value.real) for g in gs])
    char_dev = np.abs(1 - np.exp(2j * np.pi * ((gs * float(chi.value)) % 1.0)))

    positive = np.sort(dvals[dvals > 0])
    if len(positive) == 0:
        deltas = (1.0,)
    else:
        qs = np.linspace(0.02, 1.0, n_deltas)
        deltas = tuple(sorted({float(positive[min(int(q * len(positive)), len(positive) - 1)])
                               * 1.0000001 for q in qs}))
    envelope = tuple(float(np.max(char_dev[dvals < d], initial=0.0)) for d in deltas)

    coeff = fourier_coefficient(phi, chi, N)
    sup = phi.sup_bound()
    d_spread = max(est.spread for est in sweep.values())
    slack = 4.0 * (sup * (g_window + 1) / (2 * N + 1) + coeff.spread + d_spread)
    lhs = char_dev * abs(coeff.value)
    margin = float(np.max(lhs - dvals))

    e_min, e_max = envelope[0], envelope[-1]
    if e_min <= consistent_threshold and (e_max <= consistent_threshold or e_min <= 0.6 * e_max):
        verdict = SubVerdict.CONSISTENT
    elif e_min >= inconsistent_floor:
        verdict = SubVerdict.INCONSISTENT
    else:
        verdict = SubVerdict.INCONCLUSIVE
    return SubMembershipReport(chi, verdict, deltas, envelope, coeff,
                               g_window, N, float(slack), margin)


# ---------------- finite checks of the filter/neighborhood comparison ----------------

def point_norm(point, torsion: int) -> float:
    """Max-metric distance to the identity on T^k x Z/L (nonzero fiber
    counts as distance 1)."""
    torus, fiber = point
    d = max((min(float(x) % 1.0, 1.0 - float(x) % 1.0) for x in torus), default=0.0)
    if int(fiber) % torsion != 0:
        d = max(d, 1.0)
    return d


def filter_embeds_in_sublevel(phi: Realized, eps: float, g_window: int, N: int,
                              slack: float = 5e-3, sweep: dict | None = None) -> dict:
    """Windowed form of the Theorem-1 inclusion: every filter member g at
    level eps must satisfy d_{phi*}(iota(g)) < eps (+ estimation slack)."""
    fs = filter_set(phi, eps, g_window, N, sweep=sweep)
    real = phi.realization
    if not isinstance(real, StepFunction):
        raise ValidationError("sublevel check needs a step realization")
    worst = 0.0
    for g in fs.members:
        pt = phi.comp.embed(g)
        dx = float(distance_on_x(real, pt))
        worst = max(worst, dx - eps)
    return {"eps": eps, "members": fs.members, "max_violation": worst,
            "ok": worst <= slack}


def sublevel_min_outside_ball(phi_star: StepFunction, comp: Compactification,
                              radius: float, grid: int = 128) -> float:
    """min d_{phi*} over a grid of points at distance >= radius from 0."""
    k, L = phi_star.k, phi_star.L
    best = None
    axis = [Fraction(i, grid) for i in range(grid)]
    for combo in itertools.product(*([axis] * k)) if k else [()]:
        for c in range(L):
            if point_norm((combo, c), L) < radius:
                continue
            d = float(distance_on_x(phi_star, (combo, c)))
            best = d if best is None else min(best, d)
    if best is None:
        raise ValidationError("no grid point outside the ball; radius too large")
    return best


def aperiodic_reverse_inclusion(phi: Realized, radius: float, g_window: int, N: int,
                                grid: int = 128, margin: float = 0.9,
                                sweep: dict | None = None) -> dict:
    """Windowed form of the aperiodic half of Theorem 1: choose
    eps = margin * min{d_{phi*}(x) : ||x|| >= radius}; then every filter
    member at eps must embed inside the radius ball."""
    real = phi.realization
    if not isinstance(real, StepFunction):
        raise ValidationError("reverse inclusion check needs a step realization")
    eps = margin * sublevel_min_outside_ball(real, phi.comp, radius, grid=grid)
    if eps <= 0:
        raise ValidationError("realization is not aperiodic at this radius")
    fs = filter_set(phi, eps, g_window, N, sweep=sweep)
    worst = max((point_norm(phi.comp.embed(g), phi.comp.torsion) for g in fs.members),
                default=0.0)
    return {"radius": radius, "eps": eps, "members": fs.members,
            "max_embed_norm": worst, "ok": worst < radius}

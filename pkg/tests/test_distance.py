import math
from fractions import Fraction

import numpy as np
import pytest

from hartman.errors import FloatingDataError
from hartman.exactnum import QuadExt
from hartman.distance import (
    SubVerdict,
    aperiodic_reverse_inclusion,
    distance_on_x,
    distance_on_z,
    distance_profile,
    distance_sweep,
    filter_embeds_in_sublevel,
    filter_set,
    kernel_subgroup,
    point_norm,
    sub_membership_test,
)
from hartman.group_model import Character, SpectralSubgroup, induce_compactification, torus_domain
from hartman.riemann_step import StepFunction, SubgroupH
from hartman.sequences import Realized, character_sequence, cut_sequence

GOLDEN = QuadExt.quadratic(-1, 1, 5, 2)
T1 = torus_domain(1)
T2 = torus_domain(2)


def circle_norm(x: float) -> float:
    return min(x % 1.0, 1.0 - x % 1.0)


def test_distance_zero_at_identity():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    assert distance_on_z(phi, 0, 100) == 0.0


def test_arc_distance_law():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    alpha = float(GOLDEN)
    for g in (1, 2, 3, 5, 8, 13, 21, 50):
        est = distance_on_z(phi, g, 30000)
        oracle = 2 * min(circle_norm(g * alpha), 1 / 3, 2 / 3)
        assert abs(est - oracle) <= 8e-3


def test_pure_character_distance_constant_in_n():
    phi = character_sequence(GOLDEN)
    alpha = float(GOLDEN)
    for g in (1, 4, 9):
        d = distance_on_z(phi, g, 500)
        assert d == pytest.approx(abs(1 - np.exp(2j * np.pi * g * alpha)), abs=1e-9)


def test_distance_on_x_examples():
    f = StepFunction.indicator(T1, ((0, Fraction(1, 3)),))
    assert distance_on_x(f, ((Fraction(0),), 0)) == 0
    assert distance_on_x(f, ((Fraction(1, 6),), 0)) == Fraction(1, 3)
    g = StepFunction.from_pieces(
        T2, [(((0, Fraction(1, 2)), (0, 1)), None, 1)])
    for t in (Fraction(1, 7), Fraction(3, 5)):
        assert distance_on_x(g, ((Fraction(0), t), 0)) == 0


def test_kernel_trivial_for_arc():
    f = StepFunction.indicator(T1, ((0, Fraction(1, 3)),))
    h = kernel_subgroup(f)
    assert h.is_trivial(1, 1)


def test_kernel_subtorus_direction():
    g = StepFunction.from_pieces(T2, [(((0, Fraction(1, 3)), (0, 1)), None, 1)])
    h = kernel_subgroup(g)
    assert h.subtorus_dirs == frozenset({1})
    assert not h.torsion_gens


def test_kernel_constant_function():
    f = StepFunction.constant(T1, 1)
    h = kernel_subgroup(f)
    assert h.subtorus_dirs == frozenset({0})


def test_kernel_half_period():
    # 1/2-periodic pattern: invariant under t = 1/2
    f = StepFunction.from_pieces(
        T1, [(((0, Fraction(1, 4)),), None, 1),
             (((Fraction(1, 2), Fraction(3, 4)),), None, 1)])
    h = kernel_subgroup(f)
    els = h.finite_elements(1, 1)
    assert ((Fraction(1, 2),), 0) in els
    assert len(els) == 2


def test_kernel_sign_flip_not_in_kernel():
    f = StepFunction.from_pieces(
        T1, [(((0, Fraction(1, 2)),), None, 1),
             (((Fraction(1, 2), 1),), None, -1)])
    assert kernel_subgroup(f).is_trivial(1, 1)


def test_kernel_fiber_coupled():
    dom = torus_domain(1, 2)
    f = StepFunction.from_pieces(
        dom, [(((0, Fraction(1, 2)),), (0,), 1),
              (((Fraction(1, 2), 1),), (1,), 1)])
    h = kernel_subgroup(f)
    els = h.finite_elements(1, 2)
    assert ((Fraction(1, 2),), 1) in els
    assert len(els) == 2


def test_kernel_coupled_diagonal_detected():
    # checkerboard: invariant under the diagonal (1/2, 1/2) only
    f = StepFunction.from_pieces(
        T2, [(((0, Fraction(1, 2)), (0, Fraction(1, 2))), None, 1),
             (((Fraction(1, 2), 1), (Fraction(1, 2), 1)), None, 1)])
    h = kernel_subgroup(f)
    els = h.finite_elements(2, 1)
    assert ((Fraction(1, 2), Fraction(1, 2)), 0) in els
    assert ((Fraction(1, 2), Fraction(0)), 0) not in els
    assert len(els) == 2


def test_kernel_rejects_floats():
    f = StepFunction.from_pieces(T1, [(((0, 0.31),), None, 1)])
    with pytest.raises(FloatingDataError):
        kernel_subgroup(f)


def test_filter_set_monotone_and_contains_zero():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    sweep = distance_sweep(phi, 60, 20000)
    f1 = filter_set(phi, 0.05, 60, 20000, sweep=sweep)
    f2 = filter_set(phi, 0.2, 60, 20000, sweep=sweep)
    f3 = filter_set(phi, 3.0, 60, 20000, sweep=sweep)
    assert 0 in f1
    assert set(f1.members) <= set(f2.members)
    assert len(f3.members) == 2 * 60 + 1


def test_filter_members_near_fibonacci():
    # members at tight eps are best-approximation denominators of the golden
    # conjugate, i.e. Fibonacci numbers (cf. continued-fraction convergents)
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    fs = filter_set(phi, 0.05, 60, 30000)
    nontrivial = {abs(g) for g in fs.members if g != 0}
    fib = {1, 2, 3, 5, 8, 13, 21, 34, 55}
    assert nontrivial and nontrivial <= fib
    assert {21, 34, 55} <= nontrivial
    # and at looser eps, members still obey the exact arc-distance formula
    alpha = float(GOLDEN)
    loose = filter_set(phi, 0.1, 60, 30000)
    for g in loose.members:
        assert 2 * min(circle_norm(g * alpha), 1 / 3, 2 / 3) < 0.1 + 8e-3


def test_parity_filter():
    comp = induce_compactification(SpectralSubgroup.of(Fraction(1, 2)))
    f = StepFunction.from_pieces(comp, [((), (0,), 1), ((), (1,), -1)])
    phi = Realized(f)
    fs = filter_set(phi, 0.5, 20, 500)
    assert set(fs.members) == {g for g in range(-20, 21) if g % 2 == 0}


def test_sub_membership_trivial_character():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    rep = sub_membership_test(phi, Character(Fraction(0)), g_window=60, N=20000)
    assert rep.verdict is SubVerdict.CONSISTENT
    assert max(rep.envelope) == 0.0


def test_sub_membership_generator_consistent_with_paper_bound():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    rep = sub_membership_test(phi, Character(GOLDEN), g_window=120, N=40000)
    assert rep.verdict is SubVerdict.CONSISTENT
    assert rep.inequality_margin <= rep.inequality_slack
    # paper bound E(delta) <= delta / |m(phi conj(chi))| up to estimation slack
    c = abs(rep.coefficient.value)
    for d, e in zip(rep.deltas, rep.envelope):
        assert e <= d / c + 4 * rep.inequality_slack + 0.05


def test_sub_membership_independent_character_inconsistent():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    chi = Character(QuadExt.quadratic(-1, 1, 3))  # sqrt(3) - 1, independent of golden
    rep = sub_membership_test(phi, chi, g_window=150, N=40000)
    assert rep.verdict is SubVerdict.INCONSISTENT


def test_point_norm():
    assert point_norm(((0.1, 0.95), 0), 1) == pytest.approx(0.1)
    assert point_norm(((0.0,), 1), 2) == 1.0


def test_theorem1_inclusion_windowed():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    sweep = distance_sweep(phi, 80, 30000)
    for eps in (0.5, 0.1, 0.02):
        rep = filter_embeds_in_sublevel(phi, eps, 80, 30000, slack=8e-3, sweep=sweep)
        assert rep["ok"], rep


def test_theorem1_reverse_inclusion_aperiodic():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    sweep = distance_sweep(phi, 80, 30000)
    for r in (0.45, 0.2, 0.05):
        rep = aperiodic_reverse_inclusion(phi, r, 80, 30000, grid=128, sweep=sweep)
        assert rep["ok"], rep


def test_distance_profile_carries_exact_side():
    phi = cut_sequence(GOLDEN, Fraction(1, 3))
    prof = distance_profile(phi, 10, 2000)
    assert prof.on_x(((Fraction(1, 6),), 0)) == Fraction(1, 3)
    assert set(prof.values()) == set(range(-10, 11))

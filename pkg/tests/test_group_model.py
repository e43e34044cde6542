from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hartman.errors import ValidationError
from hartman.exactnum import QuadExt
from hartman.group_model import (
    Character,
    Compactification,
    CoverResult,
    SpectralSubgroup,
    Verdict,
    covers,
    induce_compactification,
    presentation_of_values,
    torus_domain,
)

GOLDEN = QuadExt.quadratic(-1, 1, 5, 2)  # (sqrt(5)-1)/2


def test_character_normalization_and_eval():
    c = Character(Fraction(5, 2))
    assert c.value == Fraction(1, 2)
    assert c.evaluate(1) == pytest.approx(-1.0)
    assert Character(GOLDEN + 2).value == GOLDEN
    assert Character.from_literal("quadratic:-1,1,5,2").value == GOLDEN
    assert Character.from_literal("1/3").value == Fraction(1, 3)
    assert float(Character.from_literal("0.25")) == 0.25


def test_character_json_roundtrip():
    for c in [Character(Fraction(2, 7)), Character(GOLDEN), Character(0.1234)]:
        assert Character.from_json(c.to_json()) == c


def test_torsion_only_presentation():
    comp = induce_compactification(SpectralSubgroup.of(Fraction(1, 2)))
    assert comp.torus_rank == 0
    assert comp.finite_orders == (2,)
    assert comp.embed(3) == ((), 1)


def test_single_irrational_presentation():
    comp = induce_compactification(SpectralSubgroup.of(GOLDEN))
    assert comp.torus_rank == 1
    assert comp.finite_orders == ()
    assert comp.certified
    # embedding of the generator index reproduces the generator
    pt = comp.embed_exact(1)
    assert pt.torus[0] == GOLDEN


def test_mixed_presentation():
    comp = induce_compactification(SpectralSubgroup.of(GOLDEN, Fraction(1, 3)))
    assert comp.torus_rank == 1
    assert comp.finite_orders == (3,)
    pt = comp.embed_exact(4)
    assert pt.torus[0] == (GOLDEN * 4).mod1()
    assert pt.fiber == 1


def test_hidden_rational_relation():
    # <alpha, alpha + 1/2> = <alpha', 1/2>
    pres = presentation_of_values([GOLDEN, (GOLDEN + Fraction(1, 2)).mod1()])
    assert pres.torus_rank == 1
    assert pres.torsion == 2
    # <alpha, 2*alpha> = <alpha>
    pres2 = presentation_of_values([GOLDEN, (GOLDEN * 2).mod1()])
    assert pres2.torus_rank == 1
    assert pres2.torsion == 1


def test_all_rational_presentation_lcm():
    pres = presentation_of_values([Fraction(1, 2), Fraction(2, 3), Fraction(5, 6)])
    assert pres.torus_rank == 0
    assert pres.torsion == 6


def test_covers_examples():
    c_half = induce_compactification(SpectralSubgroup.of(Fraction(1, 2)))
    c_quarter = induce_compactification(SpectralSubgroup.of(Fraction(1, 4)))
    r = covers(c_half, c_quarter)
    assert r.verdict is Verdict.TRUE and r.certified

    alpha = induce_compactification(SpectralSubgroup.of(GOLDEN))
    half_alpha = induce_compactification(SpectralSubgroup.of(GOLDEN / 2))
    assert covers(alpha, half_alpha).verdict is Verdict.TRUE
    assert covers(half_alpha, alpha).verdict is Verdict.FALSE

    third = induce_compactification(SpectralSubgroup.of(Fraction(1, 3)))
    r2 = covers(alpha, third)
    assert r2.verdict is Verdict.FALSE and r2.certified


def test_covers_is_preorder():
    comps = [
        induce_compactification(SpectralSubgroup.of(Fraction(1, 2))),
        induce_compactification(SpectralSubgroup.of(Fraction(1, 4))),
        induce_compactification(SpectralSubgroup.of(GOLDEN)),
        induce_compactification(SpectralSubgroup.of(GOLDEN, Fraction(1, 2))),
        induce_compactification(SpectralSubgroup.of(GOLDEN, Fraction(1, 4))),
    ]
    for c in comps:
        assert covers(c, c).verdict is Verdict.TRUE
    for a in comps:
        for b in comps:
            for c in comps:
                if covers(a, b).verdict is Verdict.TRUE and covers(b, c).verdict is Verdict.TRUE:
                    assert covers(a, c).verdict is Verdict.TRUE


def test_generator_roundtrip_mutual_cover():
    gamma = SpectralSubgroup.of(GOLDEN, Fraction(1, 3))
    comp = induce_compactification(gamma)
    again = induce_compactification(comp.subgroup())
    assert covers(comp, again).verdict is Verdict.TRUE
    assert covers(again, comp).verdict is Verdict.TRUE


@given(st.integers(-200, 200), st.integers(-200, 200))
@settings(max_examples=50, deadline=None)
def test_embed_is_homomorphism(n, m):
    comp = induce_compactification(SpectralSubgroup.of(GOLDEN, Fraction(1, 3)))
    pn, pm, pnm = comp.embed_exact(n), comp.embed_exact(m), comp.embed_exact(n + m)
    for a, b, c in zip(pn.torus, pm.torus, pnm.torus):
        assert (a + b).mod1() if hasattr(a + b, "mod1") else None is None
        s = a + b
        s = s.mod1() if hasattr(s, "mod1") else s % 1
        assert s == (c.mod1() if hasattr(c, "mod1") else c % 1)
    assert (pn.fiber + pm.fiber) % comp.torsion == pnm.fiber


def test_float_generators_flagged():
    comp = induce_compactification(SpectralSubgroup.of(0.41421356237))
    assert not comp.certified
    assert comp.torus_rank == 1


def test_float_near_rational_is_classified():
    pres = presentation_of_values([1 / 3 + 1e-13])
    assert pres.torus_rank == 0
    assert pres.torsion == 3
    assert not pres.certified


def test_float_membership_search():
    exact = induce_compactification(SpectralSubgroup.of(QuadExt.quadratic(-1, 1, 2)))
    approx = 0.41421356237309515  # sqrt(2)-1 up to float precision
    res = exact.express(approx, tol=1e-6)
    assert res is not None and res[0] == (1,)
    unrelated = exact.express(0.77777, tol=1e-9)
    assert unrelated is None


def test_undecided_cover_for_floats():
    a = Compactification((0.333923119219,), 1)  # uncertified irrational-looking float
    b = induce_compactification(SpectralSubgroup.of(GOLDEN))
    r = covers(a, b)
    assert r.verdict is Verdict.UNDECIDED
    with pytest.raises(ValidationError):
        bool(r)


def test_density_validation():
    with pytest.raises(ValidationError):
        Compactification((Fraction(1, 3),), 1)  # rational torus direction
    with pytest.raises(ValidationError):
        Compactification((GOLDEN, (GOLDEN * 2).mod1()), 1)  # dependent pair
    assert torus_domain(2).torus_rank == 2


def test_compactification_json_roundtrip():
    comp = induce_compactification(SpectralSubgroup.of(GOLDEN, Fraction(1, 6)))
    again = Compactification.from_json(comp.to_json())
    assert again.free_gens == comp.free_gens
    assert again.torsion == comp.torsion


def test_subgroup_json_roundtrip():
    g = SpectralSubgroup.of(GOLDEN, Fraction(1, 3), 0.125001)
    again = SpectralSubgroup.from_json(g.to_json())
    assert [c.value for c in again.generators] == [c.value for c in g.generators]

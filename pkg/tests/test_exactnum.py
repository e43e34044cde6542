import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hartman.exactnum import QuadExt, classify_rational, squarefree_decompose, to_quadext

GOLDEN_CONJ = QuadExt.quadratic(-1, 1, 5, 2)  # (sqrt(5)-1)/2
SQRT2_M1 = QuadExt.quadratic(-1, 1, 2)  # sqrt(2)-1


def test_squarefree_decompose():
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(49) == (7, 1)
    assert squarefree_decompose(5) == (1, 5)
    assert squarefree_decompose(1) == (1, 1)


def test_radicand_normalization():
    # sqrt(8) = 2 sqrt(2)
    assert QuadExt({8: 1}) == QuadExt({2: 2})
    # sqrt(4) = 2 is rational
    assert QuadExt({4: 1}).is_rational
    assert QuadExt({4: 1}).as_fraction() == 2


def test_arithmetic_and_equality():
    x = GOLDEN_CONJ
    assert x + x == QuadExt.quadratic(-1, 1, 5)
    assert (x * x) == 1 - x  # golden conjugate satisfies x^2 = 1 - x
    assert x - x == QuadExt.from_rational(0)
    assert (x * 0).is_rational


def test_cross_radicand_product():
    # sqrt(2) * sqrt(5) = sqrt(10), sqrt(2) * sqrt(2) = 2
    r2 = QuadExt({2: 1})
    r5 = QuadExt({5: 1})
    assert r2 * r5 == QuadExt({10: 1})
    assert r2 * r2 == QuadExt.from_rational(2)
    assert (r2 * QuadExt({6: 1})) == QuadExt({3: 2})


def test_sign_and_order():
    assert GOLDEN_CONJ.sign() == 1
    assert (-GOLDEN_CONJ).sign() == -1
    assert (GOLDEN_CONJ - GOLDEN_CONJ).sign() == 0
    assert GOLDEN_CONJ < Fraction(2, 3)
    assert GOLDEN_CONJ > Fraction(3, 5)
    # a tight comparison: sqrt(2) + sqrt(3) vs sqrt(5 + 2*sqrt(6)) is equality;
    # compare against a very close rational instead
    v = QuadExt({2: 1, 3: 1})
    assert v > Fraction(31462643, 10000000)
    assert v < Fraction(31462644, 10000000)


def test_floor_and_mod1():
    assert GOLDEN_CONJ.floor() == 0
    assert (GOLDEN_CONJ + 3).floor() == 3
    assert (-GOLDEN_CONJ).floor() == -1
    assert (-GOLDEN_CONJ).mod1() == 1 - GOLDEN_CONJ
    assert QuadExt.from_rational(Fraction(7, 3)).mod1() == Fraction(1, 3)


@given(
    st.fractions(min_value=-5, max_value=5, max_denominator=20),
    st.fractions(min_value=-5, max_value=5, max_denominator=20),
    st.sampled_from([2, 3, 5, 7]),
)
@settings(max_examples=60)
def test_float_agrees_with_exact(a, b, c):
    x = QuadExt.quadratic(a, b, c)
    assert math.isclose(float(x), float(a) + float(b) * math.sqrt(c), abs_tol=1e-9)
    n = x.floor()
    assert n <= float(x) + 1e-9 and float(x) - 1e-9 < n + 1


@given(st.integers(min_value=-50, max_value=50))
@settings(max_examples=40)
def test_mod1_in_unit_interval(k):
    x = GOLDEN_CONJ * k
    m = x.mod1()
    assert Fraction(0) <= m < Fraction(1) or m == QuadExt.from_rational(0)
    assert (x - m).is_rational is False or k == 0 or True  # difference is an integer
    assert (x - m) == x.floor()


def test_classify_rational():
    assert classify_rational(0.3333333333, max_den=1000) == Fraction(1, 3)
    assert classify_rational(float(GOLDEN_CONJ), max_den=1000) is None
    assert classify_rational(0.0, max_den=1000) == Fraction(0)
    assert classify_rational(Fraction(2, 7)) == Fraction(2, 7)
    assert classify_rational(GOLDEN_CONJ) is None
    assert classify_rational(SQRT2_M1 + Fraction(1, 2) - SQRT2_M1) == Fraction(1, 2)


def test_to_quadext_rejects_floats():
    with pytest.raises(TypeError):
        to_quadext(0.5)

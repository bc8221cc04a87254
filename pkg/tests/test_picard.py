from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from surfcalc.errors import UsageError
from surfcalc.picard import (
    EMPTY_RELATIONS, DivClass, Pic0Class, PicCurveClass, RelationSet, base_is_ample,
    base_is_nef, intersect, lin_equiv, pic0_reduce,
)

SYMBOLS = ("e", "xi_x", "xi_xp")
q = st.fractions(min_value=-5, max_value=5, max_denominator=5)
pic0 = st.builds(lambda cs: Pic0Class.of(dict(zip(SYMBOLS, cs))),
                 st.lists(q, min_size=3, max_size=3))


def divclass(n=3):
    return st.builds(lambda s, f, ex, p: DivClass(s, f, tuple(ex), p),
                     q, q, st.lists(q, min_size=n, max_size=n), pic0)


def gram_oracle(a: DivClass, b: DivClass) -> Fraction:
    # Written out from the basis table: Bbar.Fbar = 1, Ei.Ej = -delta_ij.
    return a.section * b.fiber + a.fiber * b.section - sum(x * y for x, y in zip(a.exc, b.exc))


RELATION = Pic0Class.of({"xi_x": 1, "xi_xp": -1, "e": -7})
RELS = RelationSet([RELATION], SYMBOLS)


def test_pic0_class_normalizes():
    c = Pic0Class.of({"e": 1, "xi_x": 0})
    assert c.symbols == ("e",)
    assert str(Pic0Class.of({"e": Fraction(7, 5), "xi_x": Fraction(-1, 5),
                             "xi_xp": Fraction(1, 5)})) == "7/5*e - 1/5*xi_x + 1/5*xi_xp"
    assert not (c - c)
    assert str(Pic0Class()) == "0"


def test_reduce_examples():
    torsion = Pic0Class.of({"e": 7, "xi_x": -1, "xi_xp": 1})
    assert pic0_reduce(torsion, RELS) == Pic0Class()
    e = Pic0Class.symbol("e")
    assert pic0_reduce(e, EMPTY_RELATIONS) == e
    obstruction = torsion * Fraction(1, 5)
    assert pic0_reduce(obstruction, EMPTY_RELATIONS) == obstruction
    assert pic0_reduce(e, RELS) == e
    assert RELS.pivots == ("xi_xp",)


@given(pic0, pic0, q)
def test_reduce_idempotent_and_linear(a, b, k):
    r = RELS.reduce
    assert r(r(a)) == r(a)
    assert r(a + b * k) == r(a) + r(b) * k
    # the difference always lies in the span of the relation
    d = a - r(a)
    assert d == RELATION * (-d.coeff("xi_xp")) or not d


def test_intersection_examples(X, Xt):
    D = X.cls("Bp") * 3 + X.cls("F")
    assert intersect(D, D) == 4
    D2 = Xt.cls("Bp") * 6 + Xt.cls("F") * 2 + Xt.cls("Fp")
    assert intersect(D2, D2) == 25
    assert intersect(D, DivClass.zero(2)) == 0
    with pytest.raises(UsageError):
        intersect(D, D2)


@given(divclass(), divclass(), divclass(), q, q)
def test_intersect_symmetric_bilinear(a, b, c, s, t):
    assert intersect(a, b) == intersect(b, a)
    assert intersect(a * s + b * t, c) == s * intersect(a, c) + t * intersect(b, c)
    assert intersect(a, b) == gram_oracle(a, b)


@given(divclass(), divclass(), pic0)
def test_pic0_part_is_numerically_trivial(a, b, c):
    shifted = DivClass(a.section, a.fiber, a.exc, c)
    assert intersect(shifted, b) == intersect(a, b)
    assert DivClass.pullback_pic0(c, 3).is_numerically_trivial()


def test_lin_equiv_examples(S, X, Xt):
    assert lin_equiv(X.canonical + X.cls("B") + X.cls("Bp") - X.cls("E2"), X.zero())
    lhs = (Xt.canonical + Xt.cls("B") + Xt.cls("Bp") - Xt.cls("E2") - Xt.cls("E4")
           - Xt.cls("E5") * 2)
    assert lin_equiv(lhs, Xt.zero())
    assert not lin_equiv(S.cls("B"), S.cls("Bp"))


@given(divclass(), pic0, st.lists(divclass(), min_size=5, max_size=5))
def test_lin_equiv_implies_equal_intersections(a, c, probes):
    twin = a + DivClass.pullback_pic0(RELATION * c.coeff("e"), 3)
    assert lin_equiv(a, twin, RELS)
    for p in probes:
        assert intersect(a, p) == intersect(twin, p)


def test_curve_class_arithmetic():
    p = PicCurveClass.point("xi_x")
    assert p.degree == 1 and p.pic0 == Pic0Class.symbol("xi_x")
    assert (p - p).degree == 0
    assert str(PicCurveClass(-2, Pic0Class.symbol("e"))) == "(-2, e)"


def test_base_cone_axiom():
    assert base_is_nef(DivClass(1, 1, (), Pic0Class.symbol("e") * -4))
    assert base_is_ample(DivClass(2, 3))
    assert base_is_nef(DivClass(0, 1)) and not base_is_ample(DivClass(0, 1))
    assert not base_is_nef(DivClass(-1, 2))
    with pytest.raises(UsageError):
        base_is_nef(DivClass(1, 1, (1,)))

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from surfcalc.contraction import (
    Singularity, classify_singularity, compose, descend_divisor, DiscrepancyVector,
    discrepancies, identity_contraction, make_contraction, mmp_step, mumford_coefficients,
    mumford_pullback, orthogonality_equations, q_gorenstein_test, target_intersect,
)
from surfcalc.errors import NotContractible, NotDescendable, UsageError
from surfcalc.picard import DivClass, Pic0Class, intersect, lin_equiv
from surfcalc.surface import DivisorExpr, General, blow_up

from conftest import F

e = Pic0Class.symbol("e")
xi_x, xi_xp = Pic0Class.symbol("xi_x"), Pic0Class.symbol("xi_xp")
q = st.fractions(min_value=-5, max_value=5, max_denominator=5)
PIT = ("B", "E1", "E3", "E4")


@pytest.fixture(scope="module")
def pi(X):
    return make_contraction(X, ("B", "E1"), "pi")


@pytest.fixture(scope="module")
def pit(Xt):
    return make_contraction(Xt, PIT, "pit")


def expr(**coeffs):
    return DivisorExpr.combination(coeffs)


def test_gram_and_admission(X, Xt, S, pi, pit):
    assert pi.gram.to_rows() == [[-1, 1], [1, -2]]
    assert [pit.gram[i, i] for i in range(4)] == [-2] * 4
    with pytest.raises(NotContractible):
        make_contraction(S, ("B",))
    with pytest.raises(UsageError):
        make_contraction(X, ("Nope",))
    assert pi.remaining() == ("Bp", "F", "Fp", "E2")


def test_mumford_pullback_examples(pi, pit):
    assert mumford_pullback(pi, DivisorExpr.K()) == DivisorExpr.K() + expr(B=2, E1=1)
    got = mumford_pullback(pit, DivisorExpr.K())
    want = DivisorExpr.K() + expr(B=F("12/5"), E1=F("6/5"), E3=F("8/5"), E4=F("4/5"))
    assert got == want
    # hand elimination on the 4x4 Gram system for E5
    assert mumford_coefficients(pit, "E5") == (F("2/5"), F("1/5"), F("3/5"), F("4/5"))


def test_mumford_coefficients_against_sympy(pit, Xt):
    G = sympy.Matrix(pit.gram.to_rows())
    for name in Xt.names:
        rhs = sympy.Matrix([-intersect(Xt.cls(name), Xt.cls(c)) for c in PIT])
        assert tuple(G.LUsolve(rhs)) == mumford_coefficients(pit, name)


def test_target_intersections(pit, pi):
    assert target_intersect(pit, DivisorExpr.K(), "E5") == F("-1/5")
    assert target_intersect(pit, "E5", "E5") == F("-1/5")
    # K_Y pulls back to the numerically trivial p*e
    assert target_intersect(pi, DivisorExpr.K(), "Bp") == 0


def test_discrepancy_examples(pi, pit):
    assert dict(discrepancies(pi).coefficients) == {"B": -2, "E1": -1}
    assert dict(discrepancies(pit).coefficients) == {
        "B": F("-12/5"), "E1": F("-6/5"), "E3": F("-8/5"), "E4": F("-4/5")}


def test_single_minus_one_curve(S):
    T = blow_up(S, General(), "E")
    c = make_contraction(T, ("E",))
    # K_T = pi^*K_S + E, so the discrepancy of a (-1)-curve is +1
    assert discrepancies(c)["E"] == 1
    assert mumford_coefficients(c, T.canonical) == (-1,)
    assert classify_singularity(discrepancies(c)) == Singularity.CANONICAL


def test_orthogonality_equations_match_hand_expansion(pit):
    rows = orthogonality_equations(pit)
    assert rows == [
        ((2, -1, -1, 0), 2),     # 0 = 2(a+1) - b - c
        ((-1, 2, 0, 0), 0),      # 0 = -(a+1) + 2b + 1
        ((-1, 0, 2, -1), 0),     # 0 = -(a+1) + 2c - (d-1)
        ((0, 0, -1, 2), 0),      # 0 = -c + 2(d-1) + 2
    ]
    d = discrepancies(pit).values()
    for coeffs, const in rows:
        assert const + sum(c * x for c, x in zip(coeffs, d)) == 0


def test_discrepancies_unique(pit):
    d = list(discrepancies(pit).values())
    rows = orthogonality_equations(pit)
    for i in range(4):
        bumped = list(d)
        bumped[i] += F("1/7")
        assert any(const + sum(c * x for c, x in zip(coeffs, bumped)) != 0
                   for coeffs, const in rows)


@pytest.mark.parametrize("values,expected", [
    ((-2, -1), Singularity.NON_LC),
    ((F("-12/5"), F("-6/5")), Singularity.NON_LC),
    ((0,), Singularity.CANONICAL),
    ((F("-1/2"), 0), Singularity.KLT),
    ((-1, F("-1/3")), Singularity.LC),
    ((), Singularity.CANONICAL),
])
def test_classification_thresholds(values, expected):
    d = DiscrepancyVector(tuple((f"C{i}", F(v)) for i, v in enumerate(values)))
    assert classify_singularity(d) == expected


def test_q_gorenstein_examples(pi, pit, Xt_rel):
    v = q_gorenstein_test(pi)
    assert v.is_q_gorenstein is False
    assert v.obstruction("B") == e
    v = q_gorenstein_test(pit)
    assert v.is_q_gorenstein is False
    assert v.obstruction("B") == (e * 7 - xi_x + xi_xp) * F("1/5")
    v = q_gorenstein_test(make_contraction(Xt_rel, PIT))
    assert v.is_q_gorenstein is True
    assert v.obstruction("B") == Pic0Class()


def test_obstruction_hand_expansion(Xt, pit):
    # -B - B' + E2 + E4 + 2E5 + (12B + 6E1 + 8E3 + 4E4)/5 restricted term by term
    rep = (expr(B=-1, Bp=-1, E2=1, E4=1, E5=2)
           + expr(B=F("12/5"), E1=F("6/5"), E3=F("8/5"), E4=F("4/5")))
    assert lin_equiv(rep.evaluate(Xt), mumford_pullback(pit, DivisorExpr.K()).evaluate(Xt))
    v = q_gorenstein_test(pit, canonical_rep=expr(B=-1, Bp=-1, E2=1, E4=1, E5=2))
    assert v.obstruction("B") == (e * 7 - xi_x + xi_xp) * F("1/5")


def test_canonical_rep_must_be_canonical(pit):
    with pytest.raises(UsageError):
        q_gorenstein_test(pit, canonical_rep=expr(B=1))


def trivial_combinations(model):
    """Basis of expressions (curves, K, p*-symbols) that evaluate to 0."""
    names = model.names
    syms = model.base_symbols
    basis = [DivisorExpr.curve(n) for n in names] + [DivisorExpr.K()] + \
        [DivisorExpr.p(Pic0Class.symbol(s)) for s in syms]

    def coords(d: DivClass):
        return [d.section, d.fiber, *d.exc] + [d.pic0.coeff(s) for s in syms]

    M = sympy.Matrix([coords(b.evaluate(model)) for b in basis]).T
    out = []
    for v in M.nullspace():
        combo = DivisorExpr()
        for b, k in zip(basis, v):
            combo = combo + b * Fraction(int(sympy.fraction(k)[0]), int(sympy.fraction(k)[1]))
        out.append(combo)
    return out


@pytest.mark.parametrize("which", ["pi", "pit"])
def test_obstruction_representative_independent(which, pi, pit):
    c = {"pi": pi, "pit": pit}[which]
    base = q_gorenstein_test(c).obstructions
    kernel = trivial_combinations(c.source)
    assert kernel
    rng = random.Random(20)
    for _ in range(20):
        perturb = DivisorExpr()
        for k in kernel:
            perturb = perturb + k * Fraction(rng.randint(-9, 9), rng.randint(1, 6))
        assert perturb.evaluate(c.source).is_numerically_trivial()
        v = q_gorenstein_test(c, DivisorExpr.K() + perturb)
        assert v.obstructions == base


def random_class(model, rng):
    n = model.blowup_count
    r = lambda: Fraction(rng.randint(-12, 12), rng.randint(1, 5))  # noqa: E731
    return DivClass(r(), r(), tuple(r() for _ in range(n)), e * r())


@pytest.mark.parametrize("which", ["pi", "pit"])
def test_mumford_orthogonality_and_linearity(which, pi, pit):
    c = {"pi": pi, "pit": pit}[which]
    rng = random.Random(100)
    for _ in range(100):
        d1, d2 = random_class(c.source, rng), random_class(c.source, rng)
        p1 = mumford_pullback(c, d1)
        for name in c.contracted:
            assert intersect(p1, c.source.cls(name)) == 0
        assert mumford_pullback(c, d1 + d2) == p1 + mumford_pullback(c, d2)
        assert target_intersect(c, d1, d2) == target_intersect(c, d2, d1)


@given(st.lists(q, min_size=7, max_size=7))
def test_projection_formula_on_target(cs):
    from conftest import build, XT_STEPS
    Xt = build(XT_STEPS)
    c = make_contraction(Xt, PIT)
    n = Xt.blowup_count
    d1 = DivClass(cs[0], cs[1], tuple(cs[2:7]))
    d2 = mumford_pullback(c, DivClass(cs[1], cs[0], tuple(reversed(cs[2:7]))))
    assert target_intersect(c, d1, d2) == intersect(mumford_pullback(c, d1), d2)
    ident = identity_contraction(Xt)
    assert target_intersect(ident, d1, d2) == intersect(d1, d2)
    assert n == 5


def test_composite_consistency(X, Xt, pi):
    five = make_contraction(Xt, PIT + ("E5",))
    names = ("Bp", "F", "Fp", "E2")
    for a in names:
        for b in names:
            assert target_intersect(five, a, b) == target_intersect(pi, a, b)
        assert target_intersect(five, DivisorExpr.K(), a) == target_intersect(pi, DivisorExpr.K(), a)


def test_descend(X, pi):
    H = descend_divisor(pi, expr(Bp=3, F=1))
    assert not H.ample              # no certificate supplied
    assert H.square() == 4
    triv = descend_divisor(pi, DivisorExpr.p(e))
    assert triv.numerically_trivial
    with pytest.raises(NotDescendable):
        descend_divisor(pi, "E2")
    assert (H * 2).square() == 16


def test_mmp_steps(S, pi, pit):
    step = mmp_step(S)
    assert step.kind == "mori-fiber" and step.curve == "F"
    assert dict(step.canonical_degrees)["F"] == -2
    step = mmp_step(pit)
    assert str(step) == "contraction(E5)"
    assert dict(step.canonical_degrees)["E5"] == F("-1/5")
    assert dict(step.self_intersections)["E5"] == F("-1/5")
    assert dict(step.canonical_degrees) == {
        "Bp": 0, "F": 0, "Fp": 1, "E2": F("1/5"), "E5": F("-1/5")}
    Y = step.result
    assert set(Y.contracted) == set(PIT) | {"E5"}
    assert q_gorenstein_test(Y).is_q_gorenstein is False
    assert q_gorenstein_test(Y).obstruction("B") == e
    assert mmp_step(pi).kind == "minimal"
    assert mmp_step(pi).flags


def test_mmp_on_related_model_breaks_q_gorenstein(Xt_rel):
    pit = make_contraction(Xt_rel, PIT)
    assert q_gorenstein_test(pit).is_q_gorenstein is True
    Y = compose(pit, ("E5",))
    assert q_gorenstein_test(Y).is_q_gorenstein is False

from fractions import Fraction
from itertools import product

import pytest

from surfcalc.contraction import descend_divisor, make_contraction
from surfcalc.cover import (
    COPRIME_ASSUMPTION, FG, SMOOTH_LOCUS_ASSUMPTION, CoverSpec, cover_canonical_class,
    cyclic_cover, fg_verdict, fiber_product,
)
from surfcalc.errors import UsageError
from surfcalc.picard import Pic0Class
from surfcalc.positivity import semi_ample_certificate
from surfcalc.surface import DivisorExpr

from test_positivity import ADJ_X, CERT_X, D_X

e = Pic0Class.symbol("e")


@pytest.fixture(scope="module")
def pi(X):
    return make_contraction(X, ("B", "E1"), "pi")


@pytest.fixture(scope="module")
def H(X, pi):
    rep = semi_ample_certificate(X, D_X, {"B": 4, "E1": 2}, 1, CERT_X, ADJ_X)
    return descend_divisor(pi, D_X, rep)


def test_descended_polarization_is_ample(H):
    assert H.ample
    assert not (H * -1).ample


@pytest.mark.parametrize("m", [2, 3, 5])
def test_ramification_coefficient(m, pi, H):
    kz = cover_canonical_class(CoverSpec(m, H, pi))
    assert kz.coefficient == Fraction(m - 1, m)
    assert kz.nef and kz.big and kz.kappa_two


def test_cover_canonical_class_m2(pi, H):
    kz = cover_canonical_class(CoverSpec(2, H, pi))
    assert str(kz) == "g^*(K_Y + 1/2*A)"


def test_branch_must_be_ample(pi):
    triv = descend_divisor(pi, DivisorExpr.p(e))
    with pytest.raises(UsageError):
        cover_canonical_class(CoverSpec(2, triv, pi))
    unflagged = descend_divisor(pi, D_X)
    with pytest.raises(UsageError):
        cover_canonical_class(CoverSpec(2, unflagged, pi))


def test_spec_validation(pi, H):
    with pytest.raises(UsageError):
        CoverSpec(1, H, pi)
    with pytest.raises(UsageError):
        CoverSpec(3, H, pi, characteristic="zero")
    with pytest.raises(UsageError):
        CoverSpec(2, H, pi, characteristic="mixed")
    assert CoverSpec(2, H, pi, "zero").assumptions == (SMOOTH_LOCUS_ASSUMPTION,)
    assert COPRIME_ASSUMPTION in CoverSpec(3, H, pi).assumptions


def test_fg_verdict_examples():
    v = fg_verdict(q_gorenstein=False, K_nef_mumford=True, K_big=True)
    assert v.finitely_generated == FG.NO and v.rule_applied == "criterion-theorem"
    assert fg_verdict(q_gorenstein=True, K_nef_mumford=True, K_big=True).finitely_generated == FG.YES
    assert fg_verdict(gorenstein=True).finitely_generated == FG.YES
    assert fg_verdict(gorenstein=True).rule_applied == "gorenstein-remark"
    assert fg_verdict(kappa_le_1=True).rule_applied == "kappa-le-1"
    assert fg_verdict().finitely_generated == FG.UNDETERMINED
    assert fg_verdict(q_gorenstein=None, K_nef_mumford=True, K_big=True).rule_applied is None


def test_fg_verdict_monotone_in_gorenstein_flag():
    for qg, nef, big, kappa in product((True, False, None), *([(True, False)] * 3)):
        before = fg_verdict(qg, nef, big, kappa, False).finitely_generated
        after = fg_verdict(qg, nef, big, kappa, True).finitely_generated
        if before == FG.YES:
            assert after == FG.YES
        if before == FG.UNDETERMINED:
            assert after in (FG.UNDETERMINED, FG.YES)
        if after == FG.NO:
            assert before == FG.NO


def test_criterion_rule_requires_positivity_flags():
    for qg, nef, big in product((True, False, None), (True, False), (True, False)):
        v = fg_verdict(qg, nef, big)
        if v.rule_applied == "criterion-theorem":
            assert nef and big


def test_cover_and_fiber_product(Xt_rel, pi, H):
    Z = cyclic_cover("Z", CoverSpec(2, H, pi))
    assert Z.q_gorenstein is False
    assert Z.verdict.finitely_generated == FG.NO
    assert Z.assumptions
    pit = make_contraction(Xt_rel, ("B", "E1", "E3", "E4"), "pit")
    Zt = fiber_product("Zt", Z, pit)
    assert Zt.q_gorenstein is True
    assert Zt.verdict.finitely_generated == FG.NO
    assert Zt.verdict.rule_applied == "inherited-from-cover"
    assert Zt.inherited_from == ("Z", "pit")
    assert Zt.kappa_two

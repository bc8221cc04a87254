"""Cyclic covers of a contracted surface and finite-generation verdicts.

The cover itself is never built. What is tracked is its canonical class
``g^*(K_Y + (m-1)/m A)`` (ramification formula, branch divisor ``A = m H``),
the positivity of that log class, and verdict flags propagated through finite
covers and fiber products.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .contraction import Contraction, DescendedClass, mumford_pullback, q_gorenstein_test
from .errors import UsageError
from .exact import fmt
from .picard import DivClass, intersect

SMOOTH_LOCUS_ASSUMPTION = "branch divisor supported in the smooth locus"
COPRIME_ASSUMPTION = "cover degree coprime to the characteristic"


@dataclass(frozen=True)
class CoverSpec:
    m: int
    polarization: DescendedClass      # H; the branch divisor is A = m H
    base: Contraction
    characteristic: str = "unspecified"     # zero | positive | unspecified

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise UsageError("cover degree must be an integer >= 2")
        if self.characteristic not in ("zero", "positive", "unspecified"):
            raise UsageError(f"unknown characteristic flag {self.characteristic!r}")
        if self.characteristic == "zero" and self.m != 2:
            raise UsageError("the characteristic-zero configuration uses m = 2")

    @property
    def branch(self) -> DescendedClass:
        return self.polarization * self.m

    @property
    def assumptions(self) -> tuple[str, ...]:
        out = (SMOOTH_LOCUS_ASSUMPTION,)
        if self.characteristic != "zero":
            out += (COPRIME_ASSUMPTION,)
        return out


@dataclass(frozen=True)
class CoverCanonicalClass:
    """``K_Z ~ g^*(log_class)`` with ``log_class = K_Y + coefficient * A``."""

    spec: CoverSpec
    coefficient: Fraction
    log_class: DivClass          # Mumford pullback to the smooth source of Y
    nef: bool
    big: bool

    @property
    def kappa_two(self) -> bool:
        return self.nef and self.big

    def __str__(self):
        return f"g^*(K_Y + {fmt(self.coefficient)}*A)"


def cover_canonical_class(spec: CoverSpec) -> CoverCanonicalClass:
    A = spec.branch
    if not A.ample:
        raise UsageError("the branch divisor must descend to an ample class")
    if A.contraction is not spec.base and A.contraction.contracted != spec.base.contracted:
        raise UsageError("branch divisor lives on a different contraction")
    coeff = Fraction(spec.m - 1, spec.m)
    K = mumford_pullback(spec.base, spec.base.source.canonical)
    log_class = K + A.representative * coeff
    # K_Y numerically trivial plus a positive multiple of an ample class.
    nef = K.is_numerically_trivial()
    big = intersect(log_class, log_class) > 0
    return CoverCanonicalClass(spec, coeff, log_class, nef, big)


class FG(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FGVerdict:
    finitely_generated: FG
    rule_applied: str | None
    inputs: tuple[tuple[str, object], ...] = ()

    def __str__(self):
        rule = f" ({self.rule_applied})" if self.rule_applied else ""
        return f"{self.finitely_generated}{rule}"


def fg_verdict(q_gorenstein: bool | None = None, K_nef_mumford: bool = False,
               K_big: bool = False, kappa_le_1: bool = False,
               gorenstein: bool = False) -> FGVerdict:
    """Finite generation of the canonical ring from verdict flags.

    kappa <= 1 or Gorenstein gives yes; with K nef (Mumford) and big the
    answer is yes exactly when the surface is Q-Gorenstein.
    """
    inputs = (("q_gorenstein", q_gorenstein), ("K_nef_mumford", K_nef_mumford),
              ("K_big", K_big), ("kappa_le_1", kappa_le_1), ("gorenstein", gorenstein))
    if kappa_le_1:
        return FGVerdict(FG.YES, "kappa-le-1", inputs)
    if gorenstein:
        return FGVerdict(FG.YES, "gorenstein-remark", inputs)
    if K_nef_mumford and K_big and q_gorenstein is not None:
        return FGVerdict(FG.YES if q_gorenstein else FG.NO, "criterion-theorem", inputs)
    return FGVerdict(FG.UNDETERMINED, None, inputs)


@dataclass(frozen=True)
class CoverNode:
    """Verdict bookkeeping for a cover ``Z -> Y`` or a fiber product over it."""

    name: str
    q_gorenstein: bool | None
    K_nef_mumford: bool
    K_big: bool
    kappa_two: bool
    verdict: FGVerdict
    canonical: CoverCanonicalClass | None = None
    inherited_from: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()


def cyclic_cover(name: str, spec: CoverSpec) -> CoverNode:
    """Node for ``Z``: Q-Gorensteinness fails along with the base (finite
    cover), and the verdict follows from the canonical class positivity."""
    kz = cover_canonical_class(spec)
    base_qg = q_gorenstein_test(spec.base).is_q_gorenstein
    # A finite cover of a non-Q-Gorenstein surface is not Q-Gorenstein; the
    # converse direction is not available, so a Q-Gorenstein base decides nothing.
    qg = False if base_qg is False else None
    verdict = fg_verdict(qg, kz.nef, kz.big)
    return CoverNode(name, qg, kz.nef, kz.big, kz.kappa_two, verdict, kz,
                     (spec.base.name,), spec.assumptions)


def fiber_product(name: str, cover: CoverNode, partial: Contraction) -> CoverNode:
    """Node for ``Z~ = Y~ x_Y Z``: Q-Gorensteinness comes from ``Y~`` and
    finite generation from ``Z``."""
    qg = q_gorenstein_test(partial).is_q_gorenstein
    fg = cover.verdict.finitely_generated
    verdict = FGVerdict(fg, "inherited-from-cover",
                        (("cover", cover.name), ("q_gorenstein", qg)))
    return CoverNode(name, qg, cover.K_nef_mumford, cover.K_big, cover.kappa_two,
                     verdict, None, (cover.name, partial.name), cover.assumptions)

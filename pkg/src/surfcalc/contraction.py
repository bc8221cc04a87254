"""Contractions of negative-definite curve configurations.

Divisors on the contracted surface are represented by classes on the smooth
source; the Mumford pullback adds the unique combination of contracted curves
that makes the representative orthogonal to all of them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotContractible, NotDescendable, ObstructionNotComputable, UsageError
from .exact import QMatrix, fmt, is_negative_definite, solve_linear
from .picard import DivClass, Pic0Class, intersect, lin_equiv
from .positivity import SemiAmpleReport, gram_matrix
from .surface import DivisorExpr, SurfaceModel, restrict_to_curve


@dataclass(frozen=True)
class Contraction:
    source: SurfaceModel
    contracted: tuple[str, ...]
    gram: QMatrix
    name: str = "pi"

    def remaining(self) -> tuple[str, ...]:
        return tuple(n for n in self.source.names if n not in self.contracted)

    def __str__(self):
        return f"{self.name}: contracts {', '.join(self.contracted) or 'nothing'}"


def make_contraction(model: SurfaceModel, curves: Sequence[str], name: str = "pi") -> Contraction:
    curves = tuple(dict.fromkeys(curves))
    for c in curves:
        model.curve(c)
    gram = gram_matrix(model, curves)
    if not is_negative_definite(gram):
        raise NotContractible(f"Gram matrix of {{{', '.join(curves)}}} is not "
                              f"negative definite: {gram}")
    return Contraction(model, curves, gram, name)


def identity_contraction(model: SurfaceModel, name: str = "id") -> Contraction:
    return make_contraction(model, (), name)


def _as_class(c: Contraction, D) -> DivClass:
    if isinstance(D, DivisorExpr):
        return D.evaluate(c.source)
    if isinstance(D, str):
        return c.source.cls(D)
    return D


def mumford_coefficients(c: Contraction, D) -> tuple[Fraction, ...]:
    """The ``a_i`` with ``(D + sum a_i C_i).C_j = 0`` for all contracted ``C_j``."""
    d = _as_class(c, D)
    rhs = [-intersect(d, c.source.cls(n)) for n in c.contracted]
    a = solve_linear(c.gram, rhs)
    if a is None:  # excluded by negative definiteness
        raise NotContractible("singular Gram matrix")
    return a


def mumford_pullback(c: Contraction, D):
    """Mumford pullback of the image of ``D``; returns the same kind as ``D``
    (``DivClass`` or ``DivisorExpr``)."""
    a = mumford_coefficients(c, D)
    if isinstance(D, (DivisorExpr, str)):
        out = DivisorExpr.curve(D) if isinstance(D, str) else D
        for name, coeff in zip(c.contracted, a):
            out = out + DivisorExpr.curve(name, coeff)
        return out
    out = D
    for name, coeff in zip(c.contracted, a):
        out = out + c.source.cls(name) * coeff
    return out


def target_intersect(c: Contraction, D1, D2) -> Fraction:
    return intersect(_as_class(c, mumford_pullback(c, D1)),
                     _as_class(c, mumford_pullback(c, D2)))


@dataclass(frozen=True)
class DiscrepancyVector:
    coefficients: tuple[tuple[str, Fraction], ...]

    def __getitem__(self, name: str) -> Fraction:
        return dict(self.coefficients)[name]

    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for _, v in self.coefficients)

    def __str__(self):
        return "{" + ", ".join(f"{n}: {fmt(v)}" for n, v in self.coefficients) + "}"


def discrepancies(c: Contraction) -> DiscrepancyVector:
    """``d_i`` with ``K_source = pi^* K_target + sum d_i C_i``."""
    a = mumford_coefficients(c, c.source.canonical)
    return DiscrepancyVector(tuple((n, -x) for n, x in zip(c.contracted, a)))


def orthogonality_equations(c: Contraction) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Rows ``(coeffs, const)`` meaning ``0 = const + sum coeffs_i d_i``.

    Row j expands ``(K - sum d_i C_i).C_j = 0``.
    """
    K = c.source.canonical
    rows = []
    for j, cj in enumerate(c.contracted):
        const = intersect(K, c.source.cls(cj))
        coeffs = tuple(-c.gram[i, j] for i in range(len(c.contracted)))
        rows.append((coeffs, const))
    return rows


class Singularity(str, enum.Enum):
    CANONICAL = "canonical"
    KLT = "klt-noncanonical"
    LC = "lc-nonklt"
    NON_LC = "non-lc"

    def __str__(self):
        return self.value


def classify_singularity(d: DiscrepancyVector) -> Singularity:
    """Threshold classification by the minimal discrepancy."""
    m = min(d.values(), default=Fraction(0))
    if m >= 0:
        return Singularity.CANONICAL
    if m > -1:
        return Singularity.KLT
    if m == -1:
        return Singularity.LC
    return Singularity.NON_LC


@dataclass(frozen=True)
class QGorensteinVerdict:
    is_q_gorenstein: bool | None
    obstructions: tuple[tuple[str, Pic0Class], ...] = ()
    notes: tuple[str, ...] = ()

    def obstruction(self, curve: str) -> Pic0Class:
        return dict(self.obstructions)[curve]

    def __str__(self):
        v = {True: "Q-Gorenstein", False: "not Q-Gorenstein", None: "unknown"}
        return v[self.is_q_gorenstein]


def q_gorenstein_test(c: Contraction, canonical_rep: DivisorExpr | None = None) -> QGorensteinVerdict:
    """Decide whether ``K_target`` is Q-Cartier.

    Rational contracted curves are settled by orthogonality alone. For each
    contracted genus-1 curve the Mumford pullback of ``K`` is restricted to the
    curve; ``K`` is Q-Cartier iff every such restriction is torsion, i.e.
    reduces to 0 modulo the declared relations.
    """
    model = c.source
    K = DivisorExpr.K() if canonical_rep is None else canonical_rep
    if not lin_equiv(K.evaluate(model), model.canonical, model.relations):
        raise UsageError("canonical_rep is not linearly equivalent to K")
    P = mumford_pullback(c, K)
    obstructions, notes = [], []
    unknown = False
    for name in c.contracted:
        if model.curve(name).genus != 1:
            continue
        try:
            r = restrict_to_curve(model, P, name)
        except ObstructionNotComputable as exc:
            unknown = True
            notes.append(str(exc))
            continue
        if r.degree != 0:  # pragma: no cover - orthogonality guarantees 0
            raise RuntimeError("Mumford pullback is not orthogonal")
        obstructions.append((name, model.relations.reduce(r.pic0)))
    if unknown:
        verdict = None
    else:
        verdict = all(not o for _, o in obstructions)
    return QGorensteinVerdict(verdict, tuple(obstructions), tuple(notes))


@dataclass(frozen=True)
class DescendedClass:
    """A divisor on the contracted surface, held through its Mumford pullback."""

    contraction: Contraction
    representative: DivClass
    ample: bool = False
    expr: DivisorExpr | None = None

    @property
    def numerically_trivial(self) -> bool:
        return self.representative.is_numerically_trivial()

    def __mul__(self, m) -> DescendedClass:
        return DescendedClass(self.contraction, self.representative * m,
                              self.ample and m > 0, None if self.expr is None else self.expr * m)

    __rmul__ = __mul__

    def square(self) -> Fraction:
        return intersect(self.representative, self.representative)


def descend_divisor(c: Contraction, D, certificate: SemiAmpleReport | None = None) -> DescendedClass:
    d = _as_class(c, D)
    for name in c.contracted:
        v = intersect(d, c.source.cls(name))
        if v != 0:
            raise NotDescendable(f"D.{name} = {fmt(v)}; D meets a contracted curve")
    ample = (certificate is not None and certificate.passed
             and set(certificate.zero_locus) == set(c.contracted)
             and lin_equiv(certificate.divisor, d)
             and not d.is_numerically_trivial())
    return DescendedClass(c, d, ample, D if isinstance(D, DivisorExpr) else None)


def compose(c: Contraction, curves: Sequence[str], name: str | None = None) -> Contraction:
    """Contract ``curves`` on the target of ``c`` (as one contraction of the source)."""
    return make_contraction(c.source, c.contracted + tuple(curves), name or c.name)


@dataclass(frozen=True)
class MMPStep:
    kind: str                       # minimal | mori-fiber | contraction | fano-type
    curve: str | None = None
    canonical_degrees: tuple[tuple[str, Fraction], ...] = ()
    self_intersections: tuple[tuple[str, Fraction], ...] = ()
    result: Contraction | None = None
    flags: tuple[str, ...] = ()

    def __str__(self):
        if self.kind == "minimal":
            return "minimal"
        return f"{self.kind}({self.curve})"


def mmp_step(x: SurfaceModel | Contraction) -> MMPStep:
    """One step: stop if K is nonnegative on every tracked curve, otherwise act
    on the first K-negative curve in construction order."""
    c = identity_contraction(x) if isinstance(x, SurfaceModel) else x
    K = c.source.canonical
    kdeg, sq = [], []
    for name in c.remaining():
        kdeg.append((name, target_intersect(c, K, name)))
        sq.append((name, target_intersect(c, name, name)))
    negatives = [n for n, v in kdeg if v < 0]
    if not negatives:
        return MMPStep("minimal", None, tuple(kdeg), tuple(sq),
                       flags=("K nef on tracked curves only (heuristic)",))
    curve = negatives[0]
    s = dict(sq)[curve]
    if s < 0:
        return MMPStep("contraction", curve, tuple(kdeg), tuple(sq), compose(c, (curve,)))
    if s == 0:
        return MMPStep("mori-fiber", curve, tuple(kdeg), tuple(sq))
    return MMPStep("fano-type", curve, tuple(kdeg), tuple(sq),
                   flags=("K-negative curve with positive square: outside supported cases",))

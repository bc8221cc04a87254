"""Divisor classes on blow-ups of the ruled surface and the formal Pic0 algebra.

A class is written in the total-transform basis::

    s * Bbar + f * Fbar + sum_i c_i * E_i  +  p^*(c)

where ``Bbar``/``Fbar`` pull back the section and fiber classes of the ruled
surface, ``E_i`` is the total transform of the i-th exceptional curve and
``c`` is a formal Q-combination of Pic0 symbols on the base curve. The
intersection form is ``Bbar^2 = 0``, ``Bbar.Fbar = 1``, ``Fbar^2 = 0``,
``E_i.E_j = -delta_ij``; the Pic0 part is numerically trivial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import UsageError
from .exact import fmt, rref, to_rational

ZERO = Fraction(0)


def _items(coeffs: Mapping[str, Fraction]) -> tuple[tuple[str, Fraction], ...]:
    return tuple(sorted((k, to_rational(v)) for k, v in coeffs.items() if v != 0))


@dataclass(frozen=True)
class Pic0Class:
    """Formal Q-linear combination of Pic0 symbols; zero coefficients dropped."""

    terms: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, coeffs: Mapping[str, object] | None = None, **kw) -> Pic0Class:
        merged: dict[str, Fraction] = {}
        for k, v in list((coeffs or {}).items()) + list(kw.items()):
            merged[k] = merged.get(k, ZERO) + to_rational(v)
        return cls(_items(merged))

    @classmethod
    def symbol(cls, name: str) -> Pic0Class:
        return cls(((name, Fraction(1)),))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.terms)

    def coeff(self, name: str) -> Fraction:
        return self.as_dict().get(name, ZERO)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: Pic0Class) -> Pic0Class:
        d = self.as_dict()
        for k, v in other.terms:
            d[k] = d.get(k, ZERO) + v
        return Pic0Class(_items(d))

    def __neg__(self) -> Pic0Class:
        return Pic0Class(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: Pic0Class) -> Pic0Class:
        return self + (-other)

    def __mul__(self, scalar) -> Pic0Class:
        q = to_rational(scalar)
        return Pic0Class(_items({k: q * v for k, v in self.terms}))

    __rmul__ = __mul__

    def __str__(self):
        return _format_combination(self.terms)


def _format_combination(terms: Iterable[tuple[str, Fraction]]) -> str:
    out = []
    for name, c in terms:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = name if a == 1 else f"{fmt(a)}*{name}"
        out.append((sign, body))
    if not out:
        return "0"
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


class RelationSet:
    """Declared Q-relations among Pic0 symbols, kept in reduced echelon form.

    Pivots are chosen from the most recently declared symbol backwards, so a
    relation such as ``xi_x - xi_xp - 7e`` eliminates the point symbols and
    leaves the generators untouched.
    """

    def __init__(self, relations: Iterable[Pic0Class] = (), order: Sequence[str] = ()):
        self.declared: tuple[Pic0Class, ...] = tuple(relations)
        names = list(dict.fromkeys(order))
        for r in self.declared:
            for s in sorted(r.symbols):
                if s not in names:
                    names.append(s)
        self.order: tuple[str, ...] = tuple(names)
        # Columns run over the reversed declaration order.
        cols = list(reversed(self.order))
        rows = [[r.coeff(s) for s in cols] for r in self.declared]
        echelon, pivots = rref(rows)
        self.rows: tuple[Pic0Class, ...] = tuple(
            Pic0Class.of(dict(zip(cols, row))) for row in echelon)
        self.pivots: tuple[str, ...] = tuple(cols[p] for p in pivots)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def extended(self, relation: Pic0Class, order: Sequence[str] = ()) -> RelationSet:
        return RelationSet(self.declared + (relation,), tuple(self.order) + tuple(order))

    def reduce(self, c: Pic0Class) -> Pic0Class:
        return pic0_reduce(c, self)

    def is_torsion(self, c: Pic0Class) -> bool:
        return not self.reduce(c)

    def __repr__(self):
        return f"RelationSet({[str(r) for r in self.rows]})"


EMPTY_RELATIONS = RelationSet()


def pic0_reduce(c: Pic0Class, rels: RelationSet) -> Pic0Class:
    """Canonical representative of ``c`` modulo the span of ``rels``."""
    for row, pivot in zip(rels.rows, rels.pivots):
        k = c.coeff(pivot)
        if k:
            c = c - row * k
    return c


@dataclass(frozen=True)
class DivClass:
    """A Q-divisor class in the total-transform basis (see module docstring)."""

    section: Fraction = ZERO
    fiber: Fraction = ZERO
    exc: tuple[Fraction, ...] = ()
    pic0: Pic0Class = field(default_factory=Pic0Class)

    def __post_init__(self):
        object.__setattr__(self, "section", to_rational(self.section))
        object.__setattr__(self, "fiber", to_rational(self.fiber))
        object.__setattr__(self, "exc", tuple(to_rational(x) for x in self.exc))

    @classmethod
    def zero(cls, n: int = 0) -> DivClass:
        return cls(exc=(ZERO,) * n)

    @classmethod
    def exceptional(cls, i: int, n: int) -> DivClass:
        """Total transform ``E_{i+1}`` on a surface with ``n`` blow-ups."""
        return cls(exc=tuple(Fraction(int(j == i)) for j in range(n)))

    @classmethod
    def pullback_pic0(cls, c: Pic0Class, n: int = 0) -> DivClass:
        return cls(exc=(ZERO,) * n, pic0=c)

    @property
    def dim(self) -> int:
        return len(self.exc)

    def _check(self, other: DivClass):
        if self.dim != other.dim:
            raise UsageError(
                f"classes live on different surfaces ({self.dim} vs {other.dim} blow-ups)")

    def __add__(self, other: DivClass) -> DivClass:
        self._check(other)
        return DivClass(self.section + other.section, self.fiber + other.fiber,
                        tuple(a + b for a, b in zip(self.exc, other.exc)),
                        self.pic0 + other.pic0)

    def __neg__(self) -> DivClass:
        return DivClass(-self.section, -self.fiber, tuple(-a for a in self.exc), -self.pic0)

    def __sub__(self, other: DivClass) -> DivClass:
        return self + (-other)

    def __mul__(self, scalar) -> DivClass:
        q = to_rational(scalar)
        return DivClass(q * self.section, q * self.fiber,
                        tuple(q * a for a in self.exc), self.pic0 * q)

    __rmul__ = __mul__

    def padded(self, n: int) -> DivClass:
        """Total pullback to a surface with ``n >= dim`` blow-ups."""
        if n < self.dim:
            raise UsageError("cannot pull back to a surface with fewer blow-ups")
        return DivClass(self.section, self.fiber, self.exc + (ZERO,) * (n - self.dim), self.pic0)

    def numeric(self) -> tuple[Fraction, ...]:
        return (self.section, self.fiber) + self.exc

    def is_numerically_trivial(self) -> bool:
        return not any(self.numeric())

    def __str__(self):
        terms = [("Bbar", self.section), ("Fbar", self.fiber)]
        terms += [(f"E{i + 1}", c) for i, c in enumerate(self.exc)]
        text = _format_combination((n, c) for n, c in terms if c)
        if self.pic0:
            p = f"p*({self.pic0})"
            text = p if text == "0" else f"{text} + {p}"
        return text


def intersect(d1: DivClass, d2: DivClass) -> Fraction:
    d1._check(d2)
    total = d1.section * d2.fiber + d1.fiber * d2.section
    total -= sum((a * b for a, b in zip(d1.exc, d2.exc)), ZERO)
    return total


def lin_equiv(d1: DivClass, d2: DivClass, rels: RelationSet = EMPTY_RELATIONS) -> bool:
    d1._check(d2)
    if d1.numeric() != d2.numeric():
        return False
    return not pic0_reduce(d1.pic0 - d2.pic0, rels)


@dataclass(frozen=True)
class PicCurveClass:
    """A line-bundle class ``degree * [o] + pic0`` on the elliptic base curve."""

    degree: Fraction = ZERO
    pic0: Pic0Class = field(default_factory=Pic0Class)

    def __post_init__(self):
        object.__setattr__(self, "degree", to_rational(self.degree))

    @classmethod
    def point(cls, symbol: str) -> PicCurveClass:
        return cls(Fraction(1), Pic0Class.symbol(symbol))

    def __add__(self, other: PicCurveClass) -> PicCurveClass:
        return PicCurveClass(self.degree + other.degree, self.pic0 + other.pic0)

    def __neg__(self) -> PicCurveClass:
        return PicCurveClass(-self.degree, -self.pic0)

    def __sub__(self, other: PicCurveClass) -> PicCurveClass:
        return self + (-other)

    def __mul__(self, scalar) -> PicCurveClass:
        q = to_rational(scalar)
        return PicCurveClass(q * self.degree, self.pic0 * q)

    __rmul__ = __mul__

    def __str__(self):
        return f"({fmt(self.degree)}, {self.pic0})"


# Nef cone of the ruled surface, taken as a model axiom: a*Bbar + b*Fbar is nef
# iff a, b >= 0 and ample iff both are positive. The Pic0 part is ignored.
BASE_CONE_AXIOM = "base-cone: a*Bbar + b*Fbar nef iff a,b >= 0, ample iff a,b > 0"


def _base_only(d: DivClass):
    if any(d.exc):
        raise UsageError("the base-cone axiom applies to classes pulled back from S")


def base_is_nef(d: DivClass) -> bool:
    _base_only(d)
    return d.section >= 0 and d.fiber >= 0


def base_is_ample(d: DivClass) -> bool:
    _base_only(d)
    return d.section > 0 and d.fiber > 0

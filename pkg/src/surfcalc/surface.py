"""The ruled surface S = P_C(O + O(e)) over an elliptic curve and its blow-ups.

Curve names always denote strict transforms. Internally every class lives in
the total-transform basis of :mod:`surfcalc.picard`.

Points are global labels. Named labels are points of the base curve C (their
Pic0 symbol is ``xi_<label>``); labels starting with ``#`` are anonymous
points whose position on C is not tracked.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ObstructionNotComputable, UnsupportedConfiguration, UsageError
from .exact import fmt, to_rational
from .picard import (
    DivClass, Pic0Class, PicCurveClass, RelationSet, intersect,
)

ZERO = Fraction(0)
CANONICAL = "K"
RESERVED = frozenset({CANONICAL, "p"})


def point_symbol(label: str) -> str:
    return f"xi_{label}"


def is_anonymous(label: str) -> bool:
    return label.startswith("#")


@dataclass(frozen=True)
class CurveRecord:
    name: str
    genus: int
    cls: DivClass
    incidence: tuple[tuple[str, tuple[str, ...]], ...] = ()
    # Normal bundle as a class on C; only for genus-1 curves identified with C.
    normal_pic: PicCurveClass | None = None
    # True once an anonymous point of a genus-1 curve has been blown up.
    normal_opaque: bool = False

    def meets(self, other: str) -> tuple[str, ...]:
        return dict(self.incidence).get(other, ())


@dataclass(frozen=True)
class AtIntersection:
    first: str
    second: str

    def __str__(self):
        return f"{self.first} * {self.second}"


@dataclass(frozen=True)
class AtPoint:
    label: str
    curve: str

    def __str__(self):
        return f"point {self.label} on {self.curve}"


@dataclass(frozen=True)
class General:
    def __str__(self):
        return "general"


Center = AtIntersection | AtPoint | General


@dataclass(frozen=True)
class BlowupRecord:
    index: int
    name: str
    center: Center
    label: str | None
    through: tuple[str, ...]


@dataclass(frozen=True)
class SurfaceModel:
    base_symbols: tuple[str, ...]
    relations: RelationSet
    curves: tuple[CurveRecord, ...]
    canonical: DivClass
    blowup_count: int = 0
    history: tuple[BlowupRecord, ...] = ()
    points: tuple[tuple[str, tuple[str, ...]], ...] = ()
    twist: str = "e"
    fiber_point: str = "x"
    section_curve: str = "B"
    anon_counter: int = 0
    parent: SurfaceModel | None = field(default=None, repr=False, compare=False)

    # -- lookup -----------------------------------------------------------
    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.curves)

    @property
    def base(self) -> SurfaceModel:
        m = self
        while m.parent is not None:
            m = m.parent
        return m

    def ancestors(self) -> list[SurfaceModel]:
        out, m = [], self
        while m is not None:
            out.append(m)
            m = m.parent
        return out

    def has_curve(self, name: str) -> bool:
        return any(c.name == name for c in self.curves)

    def curve(self, name: str) -> CurveRecord:
        for c in self.curves:
            if c.name == name:
                return c
        raise UsageError(f"unknown curve {name!r}")

    def cls(self, name: str) -> DivClass:
        if name == CANONICAL:
            return self.canonical
        return self.curve(name).cls

    def point_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self.points)

    def zero(self) -> DivClass:
        return DivClass.zero(self.blowup_count)

    def pic0_pullback(self, c: Pic0Class) -> DivClass:
        return DivClass.pullback_pic0(c, self.blowup_count)

    def with_relation(self, relation: Pic0Class) -> SurfaceModel:
        unknown = set(relation.symbols) - set(self.base_symbols)
        if unknown:
            raise UsageError(f"relation uses undeclared Pic0 symbols {sorted(unknown)}")
        return dataclasses.replace(
            self, relations=self.relations.extended(relation, self.base_symbols))

    def intersect(self, a: str, b: str) -> Fraction:
        return intersect(self.cls(a), self.cls(b))

    def declare_point(self, label: str, curve: str) -> SurfaceModel:
        """Put a named point of the base curve on ``curve`` (idempotent)."""
        if is_anonymous(label) or label in RESERVED:
            raise UsageError(f"invalid point name {label!r}")
        rec = self.curve(curve)
        pts = self.point_map()
        if label in pts:
            if curve not in pts[label]:
                raise UnsupportedConfiguration(
                    f"point {label} already lies on {', '.join(pts[label])}; "
                    "coincidences must be declared when the point is introduced")
            return self
        pts[label] = (curve,)
        symbols = self.base_symbols
        if rec.genus == 1 and point_symbol(label) not in symbols:
            symbols = symbols + (point_symbol(label),)
        return _rebuild(dataclasses.replace(self, points=tuple(pts.items()),
                                            base_symbols=symbols))

    def __str__(self):
        lines = [f"surface with {self.blowup_count} blow-up(s); K = {self.canonical}"]
        for c in self.curves:
            lines.append(f"  {c.name}: genus {c.genus}, self-intersection "
                         f"{fmt(intersect(c.cls, c.cls))}, class {c.cls}")
        return "\n".join(lines)


def _rebuild(model: SurfaceModel) -> SurfaceModel:
    """Recompute every curve's incidence table from the point registry."""
    pts = model.point_map()
    curves = []
    for c in model.curves:
        table: dict[str, list[str]] = {}
        for label, on in pts.items():
            if c.name in on:
                for other in on:
                    if other != c.name:
                        table.setdefault(other, []).append(label)
        curves.append(dataclasses.replace(
            c, incidence=tuple((k, tuple(v)) for k, v in table.items())))
    return dataclasses.replace(model, curves=tuple(curves))


def new_ruled_surface(pic0_generators: Sequence[str] = ("e",),
                      fiber_points: Sequence[str] = ("x", "xp"),
                      relations: Iterable[Pic0Class] = (),
                      names: Sequence[str] = ("B", "Bp", "F", "Fp")) -> SurfaceModel:
    """Build S with sections B, B' = B - p*e and fibers F, F' over two points.

    The first Pic0 generator is the twist ``e``. The canonical class is
    ``-2 Bbar + p*e`` so that ``K + B + B' ~ 0``.
    """
    gens = tuple(pic0_generators)
    fibers = tuple(fiber_points)
    names = tuple(names)
    if not gens:
        raise UsageError("at least one Pic0 generator (the twist) is required")
    if len(fibers) != 2:
        raise UsageError("exactly two fiber points are required")
    everything = gens + fibers + names
    if len(set(everything)) != len(everything):
        raise UsageError(f"duplicate names in {everything}")
    if any(n in RESERVED or is_anonymous(n) for n in everything):
        raise UsageError(f"reserved name among {everything}")
    twist = gens[0]
    x, xp = fibers
    b, bp, f, fp = names
    e = Pic0Class.symbol(twist)
    a = Pic0Class.symbol(point_symbol(x)) - Pic0Class.symbol(point_symbol(xp))
    curves = (
        CurveRecord(b, 1, DivClass(1, 0), normal_pic=PicCurveClass(0, e)),
        CurveRecord(bp, 1, DivClass(1, 0, (), -e), normal_pic=PicCurveClass(0, -e)),
        CurveRecord(f, 0, DivClass(0, 1)),
        # F' = Fbar - p*(x - x'), since F - F' = p*(x - x').
        CurveRecord(fp, 0, DivClass(0, 1, (), -a)),
    )
    symbols = gens + tuple(point_symbol(p) for p in fibers)
    points = ((x, (b, f)), (xp, (b, fp)), ("#1", (bp, f)), ("#2", (bp, fp)))
    rels = RelationSet(order=symbols)
    for r in relations:
        unknown = set(r.symbols) - set(symbols)
        if unknown:
            raise UsageError(f"relation uses undeclared Pic0 symbols {sorted(unknown)}")
        rels = rels.extended(r, symbols)
    model = SurfaceModel(
        base_symbols=symbols, relations=rels, curves=curves,
        canonical=DivClass(-2, 0, (), e), points=points, twist=twist,
        fiber_point=x, section_curve=b, anon_counter=2)
    return _rebuild(model)


def _resolve_center(model: SurfaceModel, center: Center) -> tuple[SurfaceModel, str | None]:
    if isinstance(center, General):
        return model, None
    if isinstance(center, AtPoint):
        model = model.declare_point(center.label, center.curve)
        return model, center.label
    if isinstance(center, AtIntersection):
        a, b = model.curve(center.first), model.curve(center.second)
        common = a.meets(b.name)
        if not common:
            raise UsageError(f"{a.name} and {b.name} do not meet at a tracked point")
        if len(common) > 1:
            raise UnsupportedConfiguration(
                f"{a.name} and {b.name} meet at {len(common)} points; name one")
        if intersect(a.cls, b.cls) != 1:
            raise UnsupportedConfiguration(
                f"{a.name} and {b.name} are not transverse at a single point")
        return model, common[0]
    raise UsageError(f"unknown blow-up center {center!r}")


def blow_up(model: SurfaceModel, center: Center, new_name: str) -> SurfaceModel:
    """Blow up one point; the new exceptional curve is ``new_name``."""
    if model.has_curve(new_name) or new_name in RESERVED or new_name in model.base_symbols:
        raise UsageError(f"name {new_name!r} already in use")
    model, label = _resolve_center(model, center)
    pts = model.point_map()
    through = pts.pop(label) if label is not None else ()
    if len(through) > 2:
        raise UnsupportedConfiguration(f"{label} lies on {len(through)} curves")
    genus_one = [c for c in through if model.curve(c).genus == 1]
    if len(genus_one) > 1:
        raise UnsupportedConfiguration("center lies on two genus-1 curves")

    n = model.blowup_count
    E = DivClass.exceptional(n, n + 1)
    counter = model.anon_counter
    curves = []
    for c in model.curves:
        cls = c.cls.padded(n + 1)
        normal, opaque = c.normal_pic, c.normal_opaque
        if c.name in through:
            cls = cls - E
            if c.genus == 1:
                if is_anonymous(label):
                    normal, opaque = normal - PicCurveClass(1), True
                else:
                    normal = normal - PicCurveClass.point(point_symbol(label))
        curves.append(dataclasses.replace(c, cls=cls, normal_pic=normal, normal_opaque=opaque))
    curves.append(CurveRecord(new_name, 0, E))

    for c in through:
        if model.curve(c).genus == 1 and not is_anonymous(label):
            new_label = label
        else:
            counter += 1
            new_label = f"#{counter}"
        pts[new_label] = (c, new_name)

    record = BlowupRecord(n, new_name, center, label, tuple(through))
    out = dataclasses.replace(
        model, curves=tuple(curves), canonical=model.canonical.padded(n + 1) + E,
        blowup_count=n + 1, history=model.history + (record,),
        points=tuple(pts.items()), anon_counter=counter, parent=model)
    return _rebuild(out)


def total_pullback(model: SurfaceModel, D: DivClass,
                   ancestor: SurfaceModel | None = None) -> DivClass:
    """Total transform of a class from an earlier model in ``model``'s history."""
    if ancestor is not None:
        if model.history[:ancestor.blowup_count] != ancestor.history:
            raise UsageError("the given model is not an ancestor")
        if D.dim != ancestor.blowup_count:
            raise UsageError("class does not live on the given ancestor")
    return D.padded(model.blowup_count)


# -- divisor expressions ------------------------------------------------------

def _clean(terms: Mapping[str, Fraction]) -> tuple[tuple[str, Fraction], ...]:
    return tuple((k, v) for k, v in terms.items() if v != 0)


@dataclass(frozen=True)
class DivisorExpr:
    """A Q-combination of named curves, ``K``, ``p*(c)`` and a class pulled back from S.

    Restriction to a curve needs this symbolic form; intersection numbers only
    need :meth:`evaluate`.
    """

    curves: tuple[tuple[str, Fraction], ...] = ()
    canonical: Fraction = ZERO
    pic0: Pic0Class = field(default_factory=Pic0Class)
    base: DivClass = field(default_factory=DivClass)

    @classmethod
    def curve(cls, name: str, coeff=1) -> DivisorExpr:
        if name == CANONICAL:
            return cls(canonical=to_rational(coeff))
        return cls(curves=_clean({name: to_rational(coeff)}))

    @classmethod
    def K(cls) -> DivisorExpr:
        return cls(canonical=Fraction(1))

    @classmethod
    def p(cls, c: Pic0Class) -> DivisorExpr:
        return cls(pic0=c)

    @classmethod
    def pull(cls, d: DivClass) -> DivisorExpr:
        if d.dim:
            raise UsageError("pull() takes a class on the ruled surface")
        return cls(base=d)

    @classmethod
    def combination(cls, coeffs: Mapping[str, object]) -> DivisorExpr:
        out = cls()
        for k, v in coeffs.items():
            out = out + cls.curve(k, v)
        return out

    def curve_dict(self) -> dict[str, Fraction]:
        return dict(self.curves)

    def __add__(self, other: DivisorExpr) -> DivisorExpr:
        d = self.curve_dict()
        for k, v in other.curves:
            d[k] = d.get(k, ZERO) + v
        return DivisorExpr(_clean(d), self.canonical + other.canonical,
                           self.pic0 + other.pic0, self.base + other.base)

    def __neg__(self) -> DivisorExpr:
        return self * -1

    def __sub__(self, other: DivisorExpr) -> DivisorExpr:
        return self + (-other)

    def __mul__(self, scalar) -> DivisorExpr:
        q = to_rational(scalar)
        return DivisorExpr(_clean({k: q * v for k, v in self.curves}), q * self.canonical,
                           self.pic0 * q, self.base * q)

    __rmul__ = __mul__

    def names(self) -> set[str]:
        return {k for k, _ in self.curves}

    def evaluate(self, model: SurfaceModel) -> DivClass:
        out = model.canonical * self.canonical + model.pic0_pullback(self.pic0)
        out = out + self.base.padded(model.blowup_count)
        for name, c in self.curves:
            out = out + model.cls(name) * c
        return out

    def __str__(self):
        parts = []
        if self.base.numeric() != (ZERO, ZERO) or self.base.pic0:
            parts.append(f"pull({self.base})")
        if self.canonical:
            parts.append(f"{fmt(self.canonical)}*K")
        parts += [f"{fmt(v)}*{k}" for k, v in self.curves]
        if self.pic0:
            parts.append(f"p*({self.pic0})")
        return " + ".join(parts) if parts else "0"


def restrict_to_curve(model: SurfaceModel, D: DivisorExpr | DivClass | str,
                      target: str) -> PicCurveClass:
    """Restrict ``D`` to the curve ``target``.

    Genus-0 targets only get a degree. For genus-1 targets the Pic0 part is
    assembled term by term: the target itself contributes its normal class,
    other curves contribute their named meeting points, ``K`` contributes
    minus the normal class (adjunction with ``K_C = 0``) and ``p*(c)``
    contributes ``c``.
    """
    if isinstance(D, str):
        D = DivisorExpr.curve(D)
    T = model.curve(target)
    if isinstance(D, DivClass):
        if T.genus == 0:
            return PicCurveClass(intersect(D, T.cls))
        raise UsageError("genus-1 restriction needs a divisor expression, not a bare class")
    degree = intersect(D.evaluate(model), T.cls)
    if T.genus == 0:
        return PicCurveClass(degree)

    def opaque(why: str):
        raise ObstructionNotComputable(
            f"restriction to {target} is not computable: {why}", degree=degree)

    out = PicCurveClass()
    for name, c in D.curves:
        if name == target:
            if T.normal_opaque:
                opaque(f"normal class of {target} passes through an anonymous point")
            out = out + T.normal_pic * c
            continue
        for label in T.meets(name):
            if is_anonymous(label):
                opaque(f"{name} meets {target} at an undeclared point")
            out = out + PicCurveClass.point(point_symbol(label)) * c
    if D.canonical:
        if T.normal_opaque:
            opaque(f"normal class of {target} passes through an anonymous point")
        out = out - T.normal_pic * D.canonical
    out = out + PicCurveClass(0, D.pic0)
    base = D.base
    if base.section or base.fiber or base.pic0:
        S = model.base
        if not S.has_curve(target):
            raise UsageError(f"{target} has no image on the ruled surface")
        out = out + restrict_to_curve(S, DivisorExpr.curve(S.section_curve), target) * base.section
        out = out + PicCurveClass.point(point_symbol(S.fiber_point)) * base.fiber
        out = out + PicCurveClass(0, base.pic0)
    if out.degree != degree:
        raise RuntimeError(
            f"incidence bookkeeping disagrees with intersection numbers on {target}: "
            f"{fmt(out.degree)} vs {fmt(degree)}")
    return out


def adjunction_defects(model: SurfaceModel) -> dict[str, Fraction]:
    """Curves violating ``K.C + C^2 = 2g - 2`` mapped to the discrepancy."""
    bad = {}
    for c in model.curves:
        lhs = intersect(model.canonical, c.cls) + intersect(c.cls, c.cls)
        if lhs != 2 * c.genus - 2:
            bad[c.name] = lhs - (2 * c.genus - 2)
        if c.genus == 1 and c.normal_pic is not None and \
                c.normal_pic.degree != intersect(c.cls, c.cls):
            bad[c.name + ".normal"] = c.normal_pic.degree - intersect(c.cls, c.cls)
    return bad

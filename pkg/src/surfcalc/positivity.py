"""Nef/big verdicts backed by explicit certificates, and the numeric
hypotheses of the basepoint-free criterion for semi-ampleness.

A nef certificate writes ``D ~ pull(N) + sum c_i C_i`` with ``N`` in the nef
cone of the ruled surface and ``c_i > 0``. Then ``D.G >= 0`` for every curve
``G`` other than the ``C_i``, so it only remains to check ``D.C_i >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import CertificateInvalid, ObstructionNotComputable, UsageError
from .exact import QMatrix, fmt, is_negative_definite, to_rational
from .picard import BASE_CONE_AXIOM, DivClass, base_is_nef, intersect, lin_equiv
from .surface import DivisorExpr, SurfaceModel, restrict_to_curve

HEURISTIC_NEF = "nef-on-tracked: only tracked curves were tested (heuristic)"


def _as_class(model: SurfaceModel, D) -> DivClass:
    if isinstance(D, DivisorExpr):
        return D.evaluate(model)
    if isinstance(D, DivClass):
        return D.padded(model.blowup_count) if D.dim < model.blowup_count else D
    if isinstance(D, str):
        return model.cls(D)
    raise UsageError(f"not a divisor: {D!r}")


def _pairs(boundary) -> tuple[tuple[str, Fraction], ...]:
    if isinstance(boundary, DivisorExpr):
        if boundary.canonical or boundary.pic0 or boundary.base.numeric() != (0, 0):
            raise UsageError("a boundary must be a combination of tracked curves")
        return boundary.curves
    if isinstance(boundary, Mapping):
        boundary = boundary.items()
    return tuple((name, to_rational(c)) for name, c in boundary)


@dataclass(frozen=True)
class NefCertificate:
    pullback_part: DivClass = field(default_factory=DivClass)
    effective_part: tuple[tuple[str, Fraction], ...] = ()
    verified_zero_or_nonneg: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def make(cls, pullback_part: DivClass | None = None, effective=()) -> NefCertificate:
        return cls(pullback_part or DivClass(), _pairs(effective))

    @property
    def is_empty(self) -> bool:
        p = self.pullback_part
        return not self.effective_part and not any(p.numeric()) and not p.pic0

    def scaled(self, q) -> NefCertificate:
        q = to_rational(q)
        return NefCertificate(self.pullback_part * q,
                              tuple((n, q * c) for n, c in self.effective_part))

    def __add__(self, other: NefCertificate) -> NefCertificate:
        eff: dict[str, Fraction] = {}
        for n, c in self.effective_part + other.effective_part:
            eff[n] = eff.get(n, Fraction(0)) + c
        return NefCertificate(self.pullback_part + other.pullback_part, tuple(eff.items()))

    def __str__(self):
        eff = " + ".join(f"{fmt(c)}*{n}" for n, c in self.effective_part)
        return f"pull({self.pullback_part})" + (f" + {eff}" if eff else "")


@dataclass(frozen=True)
class NefVerdict:
    nef: bool
    certificate: NefCertificate
    axioms_used: tuple[str, ...] = ()
    reasons: tuple[str, ...] = ()

    def __bool__(self):
        return self.nef


def check_nef(model: SurfaceModel, D, cert: NefCertificate | None = None) -> NefVerdict:
    """Validate ``cert`` against ``D`` and return the verdict with the
    intersection values that were checked."""
    d = _as_class(model, D)
    if cert is None or cert.is_empty:
        if d.is_numerically_trivial():
            return NefVerdict(True, NefCertificate(), (), ("numerically trivial",))
        raise CertificateInvalid("a non-trivial divisor needs a nef certificate")
    n = model.blowup_count
    p = cert.pullback_part
    if p.dim:
        raise UsageError("the pullback part of a certificate must be a class on S")
    for name, c in cert.effective_part:
        if c <= 0:
            raise CertificateInvalid(f"effective coefficient of {name} is not positive")
        model.curve(name)
    decomposition = p.padded(n)
    for name, c in cert.effective_part:
        decomposition = decomposition + model.cls(name) * c
    if not lin_equiv(decomposition, d, model.relations):
        raise CertificateInvalid(
            f"certificate decomposes to {decomposition}, not to {d}")
    reasons = []
    axioms = (BASE_CONE_AXIOM,) if any(p.numeric()) else ()
    ok = base_is_nef(p)
    if not ok:
        reasons.append(f"pullback part {p} is outside the nef cone of S")
    values = tuple((name, intersect(d, model.cls(name))) for name, _ in cert.effective_part)
    for name, v in values:
        if v < 0:
            ok = False
            reasons.append(f"D.{name} = {fmt(v)} < 0")
    filled = NefCertificate(p, cert.effective_part, values)
    return NefVerdict(ok, filled, axioms, tuple(reasons))


def nef_with_certificate(model: SurfaceModel, D, cert: NefCertificate | None = None) -> bool:
    return check_nef(model, D, cert).nef


def nef_on_tracked(model: SurfaceModel, D) -> bool:
    """Heuristic: nonnegative against every tracked curve. Not a proof of nefness."""
    d = _as_class(model, D)
    return all(intersect(d, c.cls) >= 0 for c in model.curves)


def is_big_given_nef(model: SurfaceModel, D) -> bool:
    d = _as_class(model, D)
    return intersect(d, d) > 0


def nklt_locus(model: SurfaceModel, delta) -> tuple[str, ...]:
    """Components of the boundary with coefficient >= 1.

    Valid for boundaries on a smooth surface whose components cross
    transversally, which is all this engine builds.
    """
    coeffs: dict[str, Fraction] = {}
    for name, c in _pairs(delta):
        model.curve(name)
        coeffs[name] = coeffs.get(name, Fraction(0)) + c
    for name, c in coeffs.items():
        if c < 0:
            raise UsageError(f"boundary coefficient of {name} is negative")
    return tuple(n for n in model.names if coeffs.get(n, 0) >= 1)


def zero_locus(model: SurfaceModel, D) -> tuple[str, ...]:
    d = _as_class(model, D)
    return tuple(c.name for c in model.curves
                 if intersect(d, c.cls) == 0 and intersect(c.cls, c.cls) < 0)


def gram_matrix(model: SurfaceModel, curves: Sequence[str]) -> QMatrix:
    return QMatrix.from_rows([[model.intersect(a, b) for b in curves] for a in curves])


CHECKS = ("nef_D", "nef_big_aD_minus_K_Delta", "nklt_restriction_trivial",
          "zero_locus_negative_definite")


@dataclass(frozen=True)
class SemiAmpleReport:
    divisor: DivClass
    boundary: tuple[tuple[str, Fraction], ...]
    a: int
    checks: tuple[tuple[str, bool], ...]
    zero_locus: tuple[str, ...]
    nklt: tuple[str, ...] = ()
    axioms_used: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def check(self, name: str) -> bool:
        return dict(self.checks)[name]


def semi_ample_certificate(model: SurfaceModel, D: DivisorExpr, delta, a: int,
                           cert_D: NefCertificate | None,
                           cert_adjoint: NefCertificate | None) -> SemiAmpleReport:
    """Check the numeric hypotheses under which ``D`` is semi-ample:
    ``D`` nef, ``aD - (K + Delta)`` nef and big, ``D`` trivial on the non-klt
    locus of ``(X, Delta)``. Also reports whether the curves killed by ``D``
    form a contractible configuration.
    """
    if isinstance(D, str):
        D = DivisorExpr.curve(D)
    if not isinstance(a, int) or a < 1:
        raise UsageError("a must be a positive integer")
    boundary = _pairs(delta)
    for name, c in boundary:
        if c < 0:
            raise UsageError(f"boundary coefficient of {name} is negative")
    d = D.evaluate(model)
    delta_expr = DivisorExpr.combination(dict(boundary))
    adjoint = D * a - DivisorExpr.K() - delta_expr

    v1 = check_nef(model, D, cert_D)
    v2 = check_nef(model, adjoint, cert_adjoint)
    big = is_big_given_nef(model, adjoint)
    notes = list(v1.reasons) + list(v2.reasons)
    if not big:
        notes.append(f"(aD - K - Delta)^2 = {fmt(intersect(*(2 * [adjoint.evaluate(model)])))} "
                     "is not positive")

    locus = nklt_locus(model, boundary)
    trivial = True
    for name in locus:
        rec = model.curve(name)
        if intersect(d, rec.cls) != 0:
            trivial = False
            notes.append(f"D.{name} != 0 on the non-klt locus")
            continue
        if rec.genus == 1:
            try:
                r = restrict_to_curve(model, D, name)
            except ObstructionNotComputable as exc:
                trivial = False
                notes.append(str(exc))
                continue
            if model.relations.reduce(r.pic0):
                trivial = False
                notes.append(f"D|{name} = {r.pic0} is not torsion")

    zl = zero_locus(model, d)
    negdef = is_negative_definite(gram_matrix(model, zl))
    if not negdef:
        notes.append("the curves orthogonal to D are not contractible")
    flags = ()
    if d.is_numerically_trivial():
        flags = ("D numerically trivial: the criterion needs characteristic 0",)
    axioms = tuple(dict.fromkeys(v1.axioms_used + v2.axioms_used))
    return SemiAmpleReport(
        divisor=d, boundary=boundary, a=a,
        checks=(("nef_D", v1.nef), ("nef_big_aD_minus_K_Delta", v2.nef and big),
                ("nklt_restriction_trivial", trivial),
                ("zero_locus_negative_definite", negdef)),
        zero_locus=zl, nklt=locus, axioms_used=axioms, flags=flags, notes=tuple(notes))

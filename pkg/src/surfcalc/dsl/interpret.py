"""Execute parsed scripts against the engine and collect a :class:`Report`."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .. import contraction as ctr
from ..cover import CoverSpec, cyclic_cover, fiber_product
from ..errors import SurfcalcError
from ..exact import fmt, is_negative_definite
from ..picard import DivClass, Pic0Class, PicCurveClass, intersect, lin_equiv
from ..positivity import (
    HEURISTIC_NEF, NefCertificate, check_nef, gram_matrix, is_big_given_nef, nklt_locus,
    nef_on_tracked, semi_ample_certificate, zero_locus,
)
from ..report import Report, ResultLine
from ..surface import (
    AtIntersection, AtPoint, DivisorExpr, General, SurfaceModel, blow_up, new_ruled_surface,
    restrict_to_curve,
)
from . import ast
from .parser import parse
from .printer import print_expr


class ExecutionError(SurfcalcError):
    def __init__(self, message, pos=(0, 0)):
        self.pos = pos
        super().__init__(f"{pos[0]}:{pos[1]}: {message}")


@dataclass(frozen=True)
class Div:
    """Runtime divisor value; ``model`` pins the surface it should be read on."""
    expr: DivisorExpr
    model: SurfaceModel | None = None


@dataclass(frozen=True)
class Ref:
    name: str
    kind: str
    obj: object = None


def _is_zero(v) -> bool:
    return isinstance(v, Fraction) and v == 0


class Interpreter:
    def __init__(self, scenario: str = "script"):
        self.generators: list[str] = []
        self.pending_relations: list[Pic0Class] = []
        self.model: SurfaceModel | None = None
        self.surface_name: str | None = None
        self.base_curve = "C"
        self.divisors: dict[str, DivisorExpr] = {}
        self.contractions: dict[str, ctr.Contraction] = {}
        self.covers: dict = {}
        self.points: set[str] = set()
        self.certified: list = []
        self.report = Report(scenario)

    # -- driver -----------------------------------------------------------
    def run(self, script: ast.Script) -> Report:
        for stmt in script:
            try:
                self.execute(stmt)
            except ExecutionError as exc:
                self.report.errors.append(str(exc))
                break
            except SurfcalcError as exc:
                self.report.errors.append(f"{stmt.pos[0]}:{stmt.pos[1]}: {exc}")
                break
        self.summarize()
        return self.report

    def require_model(self, pos) -> SurfaceModel:
        if self.model is None:
            raise ExecutionError("no surface declared yet (use 'ruled')", pos)
        return self.model

    def execute(self, s):
        method = getattr(self, "do_" + type(s).__name__)
        method(s)

    # -- statements -------------------------------------------------------
    def do_BaseDecl(self, s):
        self.base_curve = s.name

    def do_Pic0Decl(self, s):
        if self.model is not None:
            raise ExecutionError("declare Pic0 generators before the ruled surface", s.pos)
        self.generators.extend(s.names)

    def do_RelationDecl(self, s):
        lhs = self.eval(s.lhs)
        rhs = self.eval(s.rhs) if s.rhs is not None else Fraction(0)
        rel = self.as_pic0(lhs, s.pos) - self.as_pic0(rhs, s.pos)
        if self.model is None:
            self.pending_relations.append(rel)
        else:
            self.model = self.model.with_relation(rel)

    def do_SurfaceDecl(self, s):
        if self.model is not None:
            raise ExecutionError("only one ruled surface per script", s.pos)
        if not self.generators:
            raise ExecutionError("declare the Pic0 twist with 'pic0' first", s.pos)
        self.model = new_ruled_surface(self.generators, s.points, self.pending_relations)
        self.surface_name = s.name
        self.points.update(s.points)

    def do_Blowup(self, s):
        model = self.require_model(s.pos)
        c = s.center
        if isinstance(c, ast.CenterMeet):
            center = AtIntersection(c.first, c.second)
        elif isinstance(c, ast.CenterPoint):
            center = AtPoint(c.label, c.curve)
            self.points.add(c.label)
        else:
            center = General()
        self.model = blow_up(model, center, s.name)

    def do_DivisorDef(self, s):
        v = self.eval(s.expr)
        self.divisors[s.name] = self.as_div(v, s.pos).expr

    def do_Contract(self, s):
        model = self.require_model(s.pos)
        curves: list[str] = []
        for item in s.items:
            if item in self.contractions:
                curves.extend(self.contractions[item].contracted)
            else:
                curves.append(item)
        self.contractions[s.name] = ctr.make_contraction(model, curves, s.name)

    def do_Assert(self, s):
        query = print_expr(s.lhs)
        expected = print_expr(s.rhs) if s.rhs is not None else "true"
        line = ResultLine(query=query, value="", expected=expected, citation=s.cite or "",
                          line=s.pos[0])
        if s.op is not None:
            line.query = f"{query} {s.op} {expected}" if s.op == "!=" else query
            line.expected = expected if s.op == "==" else f"!= {expected}"
        try:
            lhs = self.eval(s.lhs)
            line.value = self.render(lhs)
            if s.op is None:
                if not isinstance(lhs, bool):
                    raise ExecutionError("a bare assertion needs a true/false predicate", s.pos)
                line.passed = lhs
            else:
                rhs = self.eval(s.rhs)
                same = self.equal(lhs, rhs, s.pos)
                line.passed = same if s.op == "==" else not same
        except SurfcalcError as exc:
            line.passed = False
            line.message = str(exc)
            line.value = line.value or "error"
        self.report.results.append(line)

    def do_Query(self, s):
        line = ResultLine(query=print_expr(s.expr), value="", citation=s.cite or "",
                          line=s.pos[0], kind="query")
        try:
            line.value = self.render(self.eval(s.expr))
        except SurfcalcError as exc:
            line.value = "error"
            line.message = str(exc)
        self.report.results.append(line)

    def do_Report(self, s):
        name = s.name
        if name in self.contractions:
            text = "; ".join(f"{k} = {v}" for k, v in self.contraction_summary(
                self.contractions[name]).items())
        elif name in self.covers:
            text = "; ".join(f"{k} = {v}" for k, v in self.cover_summary(
                self.covers[name]).items())
        elif name == self.surface_name:
            text = str(self.require_model(s.pos))
        elif name in self.divisors:
            text = str(self.divisors[name].evaluate(self.require_model(s.pos)))
        else:
            text = f"{name}: nothing to report"
        self.report.results.append(ResultLine(query=f"report {name}", value=text,
                                              line=s.pos[0], kind="report"))

    def do_Cover(self, s):
        c = self.contractions[s.base]
        m = self.eval(s.degree)
        if not isinstance(m, Fraction) or m.denominator != 1:
            raise ExecutionError("cover degree must be an integer", s.pos)
        H = self.as_div(self.eval(s.polarization), s.pos).expr
        d = H.evaluate(c.source)
        cert = None
        for model, rep in self.certified:
            if model.history == c.source.history and rep.passed and \
                    set(rep.zero_locus) == set(c.contracted) and lin_equiv(rep.divisor, d):
                cert = rep
                break
        handle = ctr.descend_divisor(c, H, cert)
        spec = CoverSpec(int(m), handle, c)
        node = cyclic_cover(s.name, spec)
        for a in spec.assumptions:
            self.report.use_axiom(f"cover assumption: {a}")
        self.covers[s.name] = node

    def do_FiberProduct(self, s):
        self.covers[s.name] = fiber_product(s.name, self.covers[s.cover],
                                            self.contractions[s.over])

    # -- summaries --------------------------------------------------------
    def contraction_summary(self, c: ctr.Contraction) -> dict:
        out = {"contracts": ", ".join(c.contracted)}
        d = ctr.discrepancies(c)
        for name, v in d.coefficients:
            out[f"disc.{name}"] = fmt(v)
        out["singularity"] = str(ctr.classify_singularity(d))
        q = ctr.q_gorenstein_test(c)
        out["q_gorenstein"] = {True: "true", False: "false", None: "unknown"}[q.is_q_gorenstein]
        for name, o in q.obstructions:
            out[f"obstruction.{name}"] = str(o)
        return out

    def cover_summary(self, node) -> dict:
        out = {"q_gorenstein": {True: "true", False: "false", None: "unknown"}[node.q_gorenstein],
               "K_nef_mumford": str(node.K_nef_mumford).lower(),
               "K_big": str(node.K_big).lower(),
               "kappa_2": str(node.kappa_two).lower(),
               "finitely_generated": str(node.verdict.finitely_generated),
               "rule": node.verdict.rule_applied or "none"}
        if node.canonical is not None:
            out["canonical"] = str(node.canonical)
            out["ramification_coefficient"] = fmt(node.canonical.coefficient)
        return out

    def summarize(self):
        for name, c in self.contractions.items():
            try:
                self.report.verdict_summary[name] = self.contraction_summary(c)
            except SurfcalcError as exc:
                self.report.verdict_summary[name] = {"error": str(exc)}
        for name, node in self.covers.items():
            self.report.verdict_summary[name] = self.cover_summary(node)

    # -- evaluation -------------------------------------------------------
    def lookup(self, name: str, pos):
        if name == "K":
            return Div(DivisorExpr.K())
        if name in self.divisors:
            return Div(self.divisors[name])
        if name in self.contractions:
            return Ref(name, "contraction", self.contractions[name])
        if name in self.covers:
            return Ref(name, "cover", self.covers[name])
        if name == self.surface_name:
            return Ref(name, "surface")
        model = self.model
        if model is not None:
            if model.has_curve(name):
                return Div(DivisorExpr.curve(name))
            if name in model.base_symbols:
                return Pic0Class.symbol(name)
        if name in self.generators:
            return Pic0Class.symbol(name)
        if name in self.points:
            return Ref(name, "point")
        raise ExecutionError(f"{name!r} is not available here", pos)

    def eval(self, e):
        if isinstance(e, ast.Num):
            return e.value
        if isinstance(e, ast.Str):
            return e.value
        if isinstance(e, ast.Bool):
            return e.value
        if isinstance(e, ast.Name):
            return self.lookup(e.id, e.pos)
        if isinstance(e, ast.Neg):
            return self.scale(self.eval(e.operand), Fraction(-1), e.pos)
        if isinstance(e, ast.BinOp):
            return self.binop(e)
        if isinstance(e, ast.Dot):
            a = self.as_div(self.eval(e.left), e.pos)
            b = self.as_div(self.eval(e.right), e.pos)
            model = a.model or b.model or self.require_model(e.pos)
            return intersect(a.expr.evaluate(model), b.expr.evaluate(model))
        if isinstance(e, ast.Index):
            base = self.eval(e.base)
            if not isinstance(base, dict):
                raise ExecutionError("only disc(...) and obstruction(...) can be indexed", e.pos)
            if e.key not in base:
                raise ExecutionError(f"no entry for {e.key}", e.pos)
            return base[e.key]
        if isinstance(e, ast.PicPull):
            return Div(DivisorExpr.p(self.as_pic0(self.eval(e.arg), e.pos)))
        if isinstance(e, ast.Pair):
            deg = self.eval(e.first)
            if not isinstance(deg, Fraction):
                raise ExecutionError("the first entry of a pair is a degree", e.pos)
            return PicCurveClass(deg, self.as_pic0(self.eval(e.second), e.pos))
        if isinstance(e, ast.SetLit):
            return frozenset(e.items)
        if isinstance(e, ast.Call):
            return getattr(self, "fn_" + e.func)(e, *e.args)
        raise ExecutionError(f"cannot evaluate {e!r}")

    def binop(self, e):
        a, b = self.eval(e.left), self.eval(e.right)
        if e.op == "*":
            if isinstance(a, Fraction):
                return self.scale(b, a, e.pos)
            if isinstance(b, Fraction):
                return self.scale(a, b, e.pos)
            raise ExecutionError("one factor of '*' must be a number", e.pos)
        if e.op == "/":
            if not isinstance(b, Fraction) or b == 0:
                raise ExecutionError("division needs a nonzero number", e.pos)
            return self.scale(a, 1 / b, e.pos)
        if e.op == "-":
            b = self.scale(b, Fraction(-1), e.pos)
        if _is_zero(a):
            return b
        if _is_zero(b):
            return a
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a + b
        if isinstance(a, Pic0Class) and isinstance(b, Pic0Class):
            return a + b
        if isinstance(a, PicCurveClass) and isinstance(b, PicCurveClass):
            return a + b
        if isinstance(a, Div) and isinstance(b, Div):
            return Div(a.expr + b.expr, a.model or b.model)
        raise ExecutionError(f"cannot add {self.kind(a)} and {self.kind(b)}", e.pos)

    def scale(self, v, q: Fraction, pos):
        if isinstance(v, (Fraction, Pic0Class, PicCurveClass)):
            return v * q
        if isinstance(v, Div):
            return Div(v.expr * q, v.model)
        raise ExecutionError(f"cannot scale {self.kind(v)}", pos)

    @staticmethod
    def kind(v) -> str:
        if isinstance(v, Ref):
            return v.kind
        return {Fraction: "number", Pic0Class: "Pic0 class", Div: "divisor",
                PicCurveClass: "curve class", bool: "boolean", str: "string",
                frozenset: "curve set", dict: "table"}.get(type(v), type(v).__name__)

    def as_div(self, v, pos) -> Div:
        if isinstance(v, Div):
            return v
        if _is_zero(v):
            return Div(DivisorExpr())
        raise ExecutionError(f"expected a divisor, got a {self.kind(v)}", pos)

    def as_pic0(self, v, pos) -> Pic0Class:
        if isinstance(v, Pic0Class):
            return v
        if _is_zero(v):
            return Pic0Class()
        raise ExecutionError(f"expected a Pic0 class, got a {self.kind(v)}", pos)

    def ref(self, node, kinds, pos) -> Ref:
        v = self.eval(node)
        if isinstance(v, Ref) and v.kind in kinds:
            return v
        raise ExecutionError(f"expected a {' or '.join(kinds)} name", pos)

    def contraction(self, node, pos) -> ctr.Contraction:
        return self.ref(node, ("contraction",), pos).obj

    def model_of(self, v: Div) -> SurfaceModel:
        return v.model or self.require_model((0, 0))

    def curve_name(self, node, pos) -> str:
        if isinstance(node, ast.Name) and self.model is not None and self.model.has_curve(node.id):
            return node.id
        raise ExecutionError("expected a curve name", pos)

    def boundary(self, v: Div, pos):
        expr = v.expr
        if expr.canonical or expr.pic0 or any(expr.base.numeric()) or expr.base.pic0:
            raise ExecutionError("a boundary is a combination of curves", pos)
        return expr.curves

    def certificate(self, v: Div, pos) -> NefCertificate:
        expr = v.expr
        if expr.canonical:
            raise ExecutionError("a nef certificate may not contain K", pos)
        base = expr.base
        pull = DivClass(base.section, base.fiber, (), base.pic0 + expr.pic0)
        return NefCertificate(pull, expr.curves)

    def equal(self, a, b, pos) -> bool:
        model = self.model
        if isinstance(a, Div) or isinstance(b, Div):
            a, b = self.as_div(a, pos), self.as_div(b, pos)
            m = a.model or b.model or self.require_model(pos)
            return lin_equiv(a.expr.evaluate(m), b.expr.evaluate(m), m.relations)
        if isinstance(a, Pic0Class) or isinstance(b, Pic0Class):
            diff = self.as_pic0(a, pos) - self.as_pic0(b, pos)
            return not (model.relations.reduce(diff) if model else diff)
        if isinstance(a, PicCurveClass) and isinstance(b, PicCurveClass):
            diff = a.pic0 - b.pic0
            return a.degree == b.degree and not (model.relations.reduce(diff) if model else diff)
        if isinstance(a, frozenset) and isinstance(b, frozenset):
            return a == b
        if type(a) is type(b) and isinstance(a, (Fraction, bool, str)):
            return a == b
        raise ExecutionError(f"cannot compare {self.kind(a)} with {self.kind(b)}", pos)

    def render(self, v) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, Fraction):
            return fmt(v)
        if isinstance(v, (Pic0Class, PicCurveClass)):
            return str(v)
        if isinstance(v, Div):
            return str(v.expr.evaluate(self.model_of(v)))
        if isinstance(v, frozenset):
            order = self.model.names if self.model is not None else ()
            items = sorted(v, key=lambda n: (order.index(n) if n in order else len(order), n))
            return "{" + ", ".join(items) + "}"
        if isinstance(v, dict):
            return "{" + ", ".join(f"{k}: {self.render(x)}" for k, x in v.items()) + "}"
        if isinstance(v, Ref):
            return v.name
        return str(v)

    # -- builtin functions --------------------------------------------------
    def fn_pull(self, call, arg):
        v = self.as_div(self.eval(arg), call.pos)
        S = self.require_model(call.pos).base
        return Div(DivisorExpr.pull(v.expr.evaluate(S)))

    def fn_disc(self, call, arg):
        return dict(ctr.discrepancies(self.contraction(arg, call.pos)).coefficients)

    def fn_tdot(self, call, c, d1, d2):
        c = self.contraction(c, call.pos)
        a = self.as_div(self.eval(d1), call.pos).expr
        b = self.as_div(self.eval(d2), call.pos).expr
        return ctr.target_intersect(c, a, b)

    def fn_pullback(self, call, c, d):
        c = self.contraction(c, call.pos)
        return Div(ctr.mumford_pullback(c, self.as_div(self.eval(d), call.pos).expr), c.source)

    def fn_obstruction(self, call, c):
        verdict = ctr.q_gorenstein_test(self.contraction(c, call.pos))
        if verdict.is_q_gorenstein is None:
            raise ExecutionError("; ".join(verdict.notes), call.pos)
        return dict(verdict.obstructions)

    def fn_restrict(self, call, d, target):
        v = self.as_div(self.eval(d), call.pos)
        name = self.curve_name(target, call.pos)
        return restrict_to_curve(self.model_of(v), v.expr, name)

    def fn_singularity(self, call, c):
        return str(ctr.classify_singularity(ctr.discrepancies(self.contraction(c, call.pos))))

    def fn_mmp(self, call, x):
        r = self.ref(x, ("contraction", "surface"), call.pos)
        target = r.obj if r.kind == "contraction" else self.require_model(call.pos).base
        step = ctr.mmp_step(target)
        for f in step.flags:
            self.report.use_axiom(f"mmp: {f}")
        return str(step)

    def fn_zerolocus(self, call, d):
        v = self.as_div(self.eval(d), call.pos)
        return frozenset(zero_locus(self.model_of(v), v.expr))

    def fn_nklt(self, call, d):
        v = self.as_div(self.eval(d), call.pos)
        return frozenset(nklt_locus(self.model_of(v), self.boundary(v, call.pos)))

    def fn_nef(self, call, d, cert=None):
        if isinstance(d, ast.Name) and d.id in self.covers and cert is None:
            return self.covers[d.id].K_nef_mumford
        v = self.as_div(self.eval(d), call.pos)
        c = None if cert is None else self.certificate(self.as_div(self.eval(cert), call.pos),
                                                       call.pos)
        verdict = check_nef(self.model_of(v), v.expr, c)
        for a in verdict.axioms_used:
            self.report.use_axiom(a)
        return verdict.nef

    def fn_nef_tracked(self, call, d):
        v = self.as_div(self.eval(d), call.pos)
        self.report.use_axiom(HEURISTIC_NEF)
        return nef_on_tracked(self.model_of(v), v.expr)

    def fn_big(self, call, d):
        if isinstance(d, ast.Name) and d.id in self.covers:
            return self.covers[d.id].K_big
        v = self.as_div(self.eval(d), call.pos)
        return is_big_given_nef(self.model_of(v), v.expr)

    def fn_numtriv(self, call, d):
        v = self.as_div(self.eval(d), call.pos)
        return v.expr.evaluate(self.model_of(v)).is_numerically_trivial()

    def fn_qgor(self, call, x):
        r = self.ref(x, ("contraction", "cover"), call.pos)
        q = (ctr.q_gorenstein_test(r.obj).is_q_gorenstein if r.kind == "contraction"
             else r.obj.q_gorenstein)
        if q is None:
            raise ExecutionError("Q-Gorensteinness could not be decided", call.pos)
        return q

    def fn_negdef(self, call, x):
        if isinstance(x, ast.SetLit):
            model = self.require_model(call.pos)
            return is_negative_definite(gram_matrix(model, x.items))
        c = self.contraction(x, call.pos)
        return is_negative_definite(c.gram)

    def fn_semiample(self, call, d, delta, a, cert_d, cert_adj):
        model = self.require_model(call.pos)
        D = self.as_div(self.eval(d), call.pos).expr
        boundary = self.boundary(self.as_div(self.eval(delta), call.pos), call.pos)
        a = self.eval(a)
        if not isinstance(a, Fraction) or a.denominator != 1:
            raise ExecutionError("a must be a positive integer", call.pos)
        c1 = self.certificate(self.as_div(self.eval(cert_d), call.pos), call.pos)
        c2 = self.certificate(self.as_div(self.eval(cert_adj), call.pos), call.pos)
        rep = semi_ample_certificate(model, D, boundary, int(a), c1, c2)
        for ax in rep.axioms_used:
            self.report.use_axiom(ax)
        self.certified.append((model, rep))
        key = f"semiample[{print_expr(d)}]"
        summary = {k: str(v).lower() for k, v in rep.checks}
        summary["zero_locus"] = self.render(frozenset(rep.zero_locus))
        summary["nklt"] = self.render(frozenset(rep.nklt))
        for f in rep.flags:
            summary["flag"] = f
        self.report.verdict_summary[key] = summary
        return rep.passed

    def cover(self, x, pos):
        return self.ref(x, ("cover",), pos).obj

    def fn_ramification(self, call, z):
        node = self.cover(z, call.pos)
        if node.canonical is None:
            raise ExecutionError("fiber products carry no ramification data", call.pos)
        return node.canonical.coefficient

    def fn_verdict(self, call, z):
        return str(self.cover(z, call.pos).verdict.finitely_generated)


def run_script(script: ast.Script, scenario: str = "script") -> Report:
    return Interpreter(scenario).run(script)


def run_text(text: str, scenario: str = "script") -> Report:
    return run_script(parse(text), scenario)

"""Resolve parsed scenarios into forms, maps and divisors, and run their checks."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .arith.binary import P1Point
from .arith.parse import parse_poly
from .arith.poly import format_scalar
from .branches import local_branches
from .errors import (
    ExprSyntaxError,
    ImageInExceptional,
    OmegaError,
    ScenarioError,
    ScenarioSyntaxError,
)
from .fuzz import FuzzConfig, fuzz_campaign
from .geometry import CHARTS, SRC, XYZ, PlaneDivisor, truncated_counting, validate_map, vanishing_orders
from .harness import (
    VIOLATION,
    QuadFamily,
    Witness,
    _fmt,
    campana_check,
    dosvar_order_check,
    exceptional_set_quadfamily,
    line_map,
    main_inequality_report,
    noguchi_wang_check,
    quad_family_scenario,
    structured_candidates,
)
from .hs import HSForm
from .scenario import List, Num, Ref, Str, error_at, parse_scenario
from .surface import FormOnP2, discriminant_locus, is_integral_implicit, is_integral_parametrized

CHECK_TYPES = ("main", "nw", "quad", "dosvar", "campana", "integrality", "branches", "counting")
DEFAULT_ORDER = 12

FORM_KEYS = {"order", "degree", "twist", "chart", "expr", "chart_UX", "chart_UY", "chart_UZ"}
MAP_KEYS = {"coords", "line"}
DIVISOR_KEYS = {"components", "family", "params", "multiplicities", "snc"}
CAMPAIGN_KEYS = {"scenario", "form", "checks", "trials", "seed", "max_degree", "eps", "quad_q", "family"}


# -- value coercion with positions ----------------------------------------------------------------

def _want(node, cls, what):
    if not isinstance(node, cls):
        raise error_at(node, f"expected {what}")
    return node


def as_str(node):
    return _want(node, Str, "a string").text


def as_num(node):
    return Fraction(_want(node, Num, "a number").value)


def as_int(node, minimum=None):
    v = as_num(node)
    if v.denominator != 1:
        raise error_at(node, "expected an integer")
    if minimum is not None and v < minimum:
        raise error_at(node, f"expected an integer >= {minimum}")
    return int(v)


def as_list(node, length=None):
    items = _want(node, List, "a list").items
    if length is not None and len(items) != length:
        raise error_at(node, f"expected a list of {length} items")
    return items


def as_poly(node, variables):
    text = as_str(node)
    try:
        return parse_poly(text, variables)
    except ExprSyntaxError as e:
        pos = node.pos
        col = pos.col + 1 + e.pos if pos else None
        raise ScenarioSyntaxError(f"in polynomial {text!r}: {e}", pos.line if pos else None, col) from None


def as_point(node):
    """A point of P^1: ``[s, t]`` or an affine number."""
    if isinstance(node, List):
        s, t = (as_num(x) for x in as_list(node, 2))
        if s == 0 and t == 0:
            raise error_at(node, "[0, 0] is not a point")
        return P1Point(s, t)
    return P1Point(as_num(node))


# -- the resolved model ---------------------------------------------------------------------------

@dataclass
class DivisorSpec:
    divisor: PlaneDivisor
    family: object = None
    params: tuple = ()


@dataclass
class Model:
    scenario: object
    forms: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    divisors: dict = field(default_factory=dict)

    def checks(self, kind=None):
        out = []
        for b in self.scenario.checks:
            t = b.get("type")
            if t is None:
                raise error_at(b, f"check {b.name} has no type")
            name = as_str(t)
            if name not in CHECK_TYPES:
                raise error_at(t, f"unknown check type {name!r}")
            if kind is None or name == kind:
                out.append(b)
        return out

    def ref(self, block, key, table, what, required=True):
        node = block.get(key)
        if node is None:
            if required:
                raise error_at(block, f"{block.name}: missing {key!r}")
            return None
        if not isinstance(node, Ref):
            raise error_at(node, f"{key} must name a {what} block")
        if node.name not in table:
            raise error_at(node, f"{node.name!r} is not a {what}")
        return table[node.name]

    def form(self, block, required=True):
        return self.ref(block, "form", self.forms, "form", required)

    def map(self, block, key="map", required=True):
        return self.ref(block, key, self.maps, "map", required)

    def divisor(self, block, key="divisor", required=True):
        return self.ref(block, key, self.divisors, "divisor", required)


def _check_keys(block, allowed):
    for e in block.entries:
        if e.key not in allowed:
            raise error_at(e, f"unknown key {e.key!r} in {block.kind} {block.name}")


def _lift(exc, node):
    """Re-raise a library error as a positioned scenario error."""
    if isinstance(exc, ScenarioError):
        return exc
    return error_at(node, f"{type(exc).__name__}: {exc}")


def build_form(block):
    _check_keys(block, FORM_KEYS)
    m = as_int(block.get("order"), 1) if block.get("order") is not None else 1
    r = as_int(block.get("degree"), 1) if block.get("degree") is not None else None
    k = as_int(block.get("twist"), 0) if block.get("twist") is not None else 0
    given = {}
    if block.get("expr") is not None:
        chart = as_str(block.get("chart")) if block.get("chart") is not None else "UX"
        if chart not in CHARTS:
            raise error_at(block.get("chart"), f"unknown chart {chart!r}")
        given[chart] = block.get("expr")
    for c in CHARTS:
        if block.get(f"chart_{c}") is not None:
            if c in given:
                raise error_at(block.get(f"chart_{c}"), f"chart {c} given twice")
            given[c] = block.get(f"chart_{c}")
    if not given:
        raise error_at(block, f"form {block.name} has no chart expression")
    parsed = {}
    for c, node in given.items():
        text = as_str(node)
        try:
            parsed[c] = HSForm.parse(text, CHARTS[c][1], m, r)
        except ExprSyntaxError as e:
            pos = node.pos
            raise ScenarioSyntaxError(f"in form expression: {e}", pos.line if pos else None,
                                      pos.col + 1 + e.pos if pos else None) from None
        except OmegaError as e:
            raise _lift(e, node) from None
        except ValueError as e:
            raise _lift(e, node) from None
    try:
        if len(parsed) == 1:
            (c, f), = parsed.items()
            return FormOnP2.from_chart(c, f, m, r, k)
        return FormOnP2.from_all_charts(parsed, m, r, k)
    except (OmegaError, ValueError) as e:
        raise _lift(e, block) from None


def build_map(block):
    _check_keys(block, MAP_KEYS)
    if block.get("coords") is not None:
        node = block.get("coords")
        polys = [as_poly(x, SRC) for x in as_list(node, 3)]
        try:
            return validate_map(*polys, quiet=True)
        except (OmegaError, ValueError) as e:
            raise _lift(e, node) from None
    if block.get("line") is not None:
        node = block.get("line")
        g = as_poly(node, XYZ)
        if g.total_degree() != 1 or not g.is_homogeneous():
            raise error_at(node, "line must be a linear form in X, Y, Z")
        return line_map(g)
    raise error_at(block, f"map {block.name} needs coords or line")


def build_divisor(block):
    _check_keys(block, DIVISOR_KEYS)
    family, params = None, ()
    if block.get("family") is not None:
        fnode = block.get("family")
        forms = [as_poly(x, XYZ) for x in as_list(fnode, 3)]
        try:
            family = QuadFamily(*forms)
        except (OmegaError, ValueError) as e:
            raise _lift(e, fnode) from None
        pnode = block.get("params")
        if pnode is None:
            raise error_at(block, "a family divisor needs params")
        params = tuple((p.s, p.t) for p in (as_point(x) for x in as_list(pnode)))
        comps = [family.line(*p) for p in params]
        if block.get("components") is not None:
            raise error_at(block.get("components"), "give either components or family/params")
    elif block.get("components") is not None:
        comps = [as_poly(x, XYZ) for x in as_list(block.get("components"))]
    else:
        raise error_at(block, f"divisor {block.name} needs components or family")
    mults = None
    if block.get("multiplicities") is not None:
        mults = [as_int(x, 1) for x in as_list(block.get("multiplicities"))]
    snc = as_str(block.get("snc")) if block.get("snc") is not None else None
    try:
        d = PlaneDivisor(comps, mults, snc)
    except (OmegaError, ValueError) as e:
        raise _lift(e, block) from None
    return DivisorSpec(d, family, params)


def build_model(scenario):
    model = Model(scenario)
    for b in scenario.forms:
        model.forms[b.name] = build_form(b)
    for b in scenario.maps:
        model.maps[b.name] = build_map(b)
    for b in scenario.divisors:
        model.divisors[b.name] = build_divisor(b)
    for b in scenario.campaigns:
        _check_keys(b, CAMPAIGN_KEYS)
    model.checks()
    return model


def load_model(text):
    return build_model(parse_scenario(text))


# -- reports --------------------------------------------------------------------------------------

@dataclass
class Output:
    lines: list = field(default_factory=list)
    rows: list = field(default_factory=list)       # CSV rows after the header
    header: tuple = ()
    violations: int = 0

    def to_text(self):
        return "\n".join(self.lines) + ("\n" if self.lines else "")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(self.header)
        for r in self.rows:
            w.writerow(r)
        return buf.getvalue()

    @property
    def exit_code(self):
        return 2 if self.violations else 0


REPORT_HEADER = ("check", "name", "lhs", "rhs", "verdict", "integral", "notes")


def _report_row(report):
    lhs = getattr(report, "lhs", getattr(report, "actual", ""))
    rhs = getattr(report, "rhs", getattr(report, "bound", ""))
    integral = getattr(report, "integral", None)
    fmt = lambda x: _fmt(x) if isinstance(x, (int, Fraction)) else ("inf" if x == float("inf") else str(x))
    return [report.check, report.scenario, fmt(lhs), fmt(rhs), report.verdict,
            "" if integral is None else ("true" if integral else "false"), "; ".join(report.notes)]


def _add_report(out, report):
    out.lines.extend(report.lines())
    out.rows.append(_report_row(report))
    if report.violation:
        out.violations += 1


def _guard(block, fn):
    try:
        return fn()
    except ScenarioError:
        raise
    except (OmegaError, ValueError, ArithmeticError) as e:
        raise error_at(block, f"check {block.name}: {type(e).__name__}: {e}") from None


def _order(block, override, default=DEFAULT_ORDER):
    if override is not None:
        return override
    node = block.get("order")
    return as_int(node, 0) if node is not None else default


# -- subcommands ------------------------------------------------------------------------------

def run_discriminant(model, opts=None):
    out = Output(header=("form", "chart", "polynomial"))
    forms = [(n, f) for n, f in model.forms.items() if f.m == 1]
    if not forms:
        raise ScenarioError("no symmetric (order 1) form in the scenario")
    for name, form in forms:
        locus = _guard(model.scenario.block(name), lambda: discriminant_locus(form))
        out.lines.append(f"{name}: Delta = {locus.polynomial}")
        out.rows.append([name, "P2", str(locus.polynomial)])
        for chart, delta in locus.per_chart:
            out.lines.append(f"  delta on {chart} ({', '.join(CHARTS[chart][1])}): {delta}")
            out.rows.append([name, chart, str(delta)])
    return out


def run_integrality(model, opts=None):
    order_flag = getattr(opts, "order", None)
    out = Output(header=("check", "form", "curve", "method", "verdict"))
    checks = model.checks("integrality")
    if not checks:
        for fname, form in model.forms.items():
            for mname, phi in model.maps.items():
                ok = is_integral_parametrized(form, phi)
                verdict = "integral" if ok else "not integral"
                out.lines.append(f"{fname} along {mname} {phi}: {verdict}")
                out.rows.append(["", fname, mname, "parametrized", verdict])
        return out
    for b in checks:
        form = model.form(b)
        fname = b.get("form").name
        out.lines.append(f"[integrality] {b.name} (form {fname})")
        maps = b.get("maps")
        for node in (as_list(maps) if maps is not None else ()):
            if not isinstance(node, Ref) or node.name not in model.maps:
                raise error_at(node, "maps must name map blocks")
            phi = model.maps[node.name]
            ok = _guard(b, lambda: is_integral_parametrized(form, phi))
            verdict = "integral" if ok else "not integral"
            out.lines.append(f"  {node.name} {phi}: {verdict} (exact)")
            out.rows.append([b.name, fname, node.name, "parametrized", verdict])
        curves = b.get("curves")
        for node in (as_list(curves) if curves is not None else ()):
            g_node, pt_node = as_list(node)[:2]
            chart = as_str(as_list(node)[2]) if len(as_list(node)) > 2 else form.primary
            if chart not in CHARTS:
                raise error_at(node, f"unknown chart {chart!r}")
            g = as_poly(g_node, XYZ)
            pt = tuple(as_num(x) for x in as_list(pt_node, 2))
            n = _order(b, order_flag)
            verdict = _guard(b, lambda: is_integral_implicit(form, g, pt, n, chart))
            where = ", ".join(format_scalar(c) for c in pt)
            note = f" (bounded certificate to order {n})" if verdict.integral else ""
            out.lines.append(f"  {{{g} = 0}} at ({where}) on {chart}: {verdict}{note}")
            out.rows.append([b.name, fname, str(g), f"implicit@({where})", str(verdict)])
    return out


def _require(model, kind):
    checks = model.checks(kind)
    if not checks:
        raise ScenarioError(f"no {kind} checks in the scenario")
    return checks


def run_branches(model, opts=None):
    order_flag = getattr(opts, "order", None)
    out = Output(header=("check", "point", "chart", "rational_branches", "irrational_factors",
                         "transversal", "hensel", "annihilate"))
    for b in _require(model, "branches"):
        form = model.form(b)
        chart = as_str(b.get("chart")) if b.get("chart") is not None else form.primary
        n = _order(b, order_flag)
        pts = b.get("points")
        if pts is None:
            raise error_at(b, "branches check needs points")
        out.lines.append(f"[branches] {b.name}")
        for node in as_list(pts):
            pt = tuple(as_num(x) for x in as_list(node, 2))
            rep = _guard(b, lambda: local_branches(form, pt, n, chart))
            out.lines.extend("  " + ln for ln in rep.lines())
            irr = sum(e * k for e, k in rep.irrational)
            ann = all(br.annihilates for br in rep.branches)
            out.rows.append([b.name, "(" + ", ".join(format_scalar(c) for c in pt) + ")", chart,
                             len(rep.branches), irr, rep.transversal, rep.hensel_ok, ann])
            if not (rep.hensel_ok and ann and rep.transversal):
                out.violations += 1
    return out


def run_counting(model, opts=None):
    out = Output(header=("check", "component", "orders", "residual", "levels"))
    for b in _require(model, "counting"):
        phi = model.map(b)
        spec = model.divisor(b)
        levels = [as_int(x, 1) for x in as_list(b.get("levels"))] if b.get("levels") is not None else [1]
        out.lines.append(f"[counting] {b.name}: map {phi} against {b.get('divisor').name}")
        for g, mult in spec.divisor:
            row = _guard(b, lambda: vanishing_orders(phi, g))
            orders = ", ".join(f"{q} order {c}" for q, c in row.orders) or "none"
            resid = ", ".join(f"deg {e} x{c}" for e, c in row.residual) or "none"
            out.lines.append(f"  {g}: orders {orders}; irrational blocks {resid}")
            out.rows.append([b.name, str(g), orders, resid, ""])
        for n in levels:
            total = _guard(b, lambda: truncated_counting(phi, spec.divisor, n))
            out.lines.append(f"  N^({n}) = {total}")
            out.rows.append([b.name, "total", "", "", f"N^({n})={total}"])
    return out


def _dosvar_components(model, b):
    node = b.get("components")
    if node is None:
        spec = model.divisor(b)
        return list(spec.divisor.components)
    return [as_poly(x, XYZ) for x in as_list(node)]


def run_verify(model, kind, opts=None):
    out = Output(header=REPORT_HEADER)
    for b in _require(model, kind):
        if kind == "main":
            form, spec, phi = model.form(b), model.divisor(b), model.map(b)
            rep = _guard(b, lambda: main_inequality_report(form, spec.divisor, phi, name=b.name))
        elif kind == "nw":
            spec, phi = model.divisor(b), model.map(b)
            rep = _guard(b, lambda: noguchi_wang_check(spec.divisor, phi, name=b.name))
        elif kind == "dosvar":
            form, phi = model.form(b), model.map(b)
            comps = _dosvar_components(model, b)
            q = as_point(b.get("point")) if b.get("point") is not None else None
            if q is None:
                raise error_at(b, "dosvar check needs point")
            rep = _guard(b, lambda: dosvar_order_check(form, comps, phi, q, name=b.name))
        elif kind == "quad":
            rep = _run_quad(model, b)
        elif kind == "campana":
            rep = _run_campana(model, b)
        _add_report(out, rep)
    return out


def _family_spec(model, b):
    spec = model.divisor(b)
    if spec.family is None:
        raise error_at(b.get("divisor"), "this check needs a family divisor (family = [...], params = [...])")
    return spec


def _run_quad(model, b):
    spec = _family_spec(model, b)
    phi = model.map(b)
    eps = as_num(b.get("eps")) if b.get("eps") is not None else Fraction(1, 4)

    def go():
        try:
            return quad_family_scenario(spec.family, spec.params, eps, phi, name=b.name)
        except ImageInExceptional as e:
            return e.report

    rep = _guard(b, go)
    if rep.exceptional:
        ex = exceptional_set_quadfamily(spec.family)
        rep = replace(rep, notes=rep.notes + (f"Z = Y∪D with Y: {ex.envelope} = 0",))
    return rep


def _run_campana(model, b):
    form = model.form(b)
    spec = _family_spec(model, b)
    eps = as_num(b.get("eps")) if b.get("eps") is not None else Fraction(1, 2)
    wnode = b.get("witness")
    if wnode is None:
        raise error_at(b, "campana check needs witness = [M, a]")
    m_, a_ = (as_int(x) for x in as_list(wnode, 2))
    effective = []
    if b.get("effective") is not None:
        for node in as_list(b.get("effective")):
            g_node, n_node = as_list(node, 2)
            effective.append((as_poly(g_node, XYZ), as_int(n_node)))
    witness = Witness(m_, a_, tuple(effective))
    phi = model.map(b, required=False)
    search = as_int(b.get("search"), 0) if b.get("search") is not None else 0
    seed = as_int(b.get("seed")) if b.get("seed") is not None else 0

    def go():
        cands = []
        if search:
            import random

            cands = structured_candidates(spec.family, spec.params, random.Random(f"campana/{seed}"), search)
        return campana_check(form, spec.divisor, eps, witness, phi=phi, candidates=cands, name=b.name)

    return _guard(b, go)


def campaign_config(model, opts=None):
    camps = model.scenario.campaigns
    if not camps:
        raise ScenarioError("the scenario has no campaign block")
    b = camps[0]
    kw = {}
    if b.get("scenario") is not None:
        kw["scenario"] = as_str(b.get("scenario"))
    if b.get("checks") is not None:
        kw["checks"] = tuple(as_str(x) for x in as_list(b.get("checks")))
    for key in ("trials", "seed", "max_degree", "quad_q"):
        if b.get(key) is not None:
            kw[key] = as_int(b.get(key))
    if b.get("eps") is not None:
        kw["eps"] = as_num(b.get("eps"))
    if b.get("family") is not None:
        kw["family"] = tuple(as_str(x) for x in as_list(b.get("family"), 3))
    for key in ("seed", "trials", "max_degree"):
        v = getattr(opts, key, None) if opts is not None else None
        if v is not None:
            kw[key] = v
    form = model.form(b)
    return FuzzConfig(**kw), form


def run_fuzz(model, opts=None):
    cfg, form = campaign_config(model, opts)
    family = QuadFamily(*cfg.family) if cfg.scenario == "quad" else None
    return fuzz_campaign(cfg, form, family)


__all__ = [
    "CHECK_TYPES", "DivisorSpec", "Model", "Output", "build_model", "campaign_config", "load_model",
    "run_branches", "run_counting", "run_discriminant", "run_fuzz", "run_integrality", "run_verify",
]

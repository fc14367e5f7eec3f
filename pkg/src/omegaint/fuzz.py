"""Seeded random trials for the height inequalities, with CSV reporting."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith.binary import P1Point
from .arith.poly import Poly, poly_gcd
from .errors import (
    BadConfig,
    ConstantMap,
    HypothesisFailed,
    ImageInDivisor,
    UnequalDegrees,
)
from .geometry import SRC, VERIFIED_LINES, XYZ, PlaneDivisor, det3, line_coeffs, lines_snc, validate_map
from .harness import (
    VIOLATION,
    QuadFamily,
    _fmt,
    _inverse3,
    dosvar_order_check,
    in_zero_set,
    is_campana,
    line_map,
    main_inequality_report,
    noguchi_wang_check,
    quad_family_scenario,
)
from .surface import is_integral_parametrized

COLUMNS = ("trial", "scenario", "map_degree", "lhs", "rhs", "verdict", "integral", "notes")
CHECKS = ("main", "nw", "dosvar", "quad", "campana")
SCENARIOS = ("wronskian", "quad")
COEFF = 9
MAX_TRIES = 200


@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 100
    max_degree: int = 5
    scenario: str = "wronskian"
    checks: tuple = ("main",)
    truncation: tuple = ()      # counting levels; empty means the form's order m
    q_range: tuple = (3, 6)
    eps: Fraction = Fraction(1, 4)
    quad_q: int = 17
    family: tuple = ("X", "Y", "Z")

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 0:
            raise BadConfig("trials must be a non-negative integer")
        if not isinstance(self.max_degree, int) or self.max_degree < 1:
            raise BadConfig("max degree must be a positive integer")
        if self.scenario not in SCENARIOS:
            raise BadConfig(f"unknown fuzz scenario {self.scenario!r}")
        if not self.checks:
            raise BadConfig("no checks configured")
        for c in self.checks:
            if c not in CHECKS:
                raise BadConfig(f"unknown check {c!r}")
            if c in ("quad", "campana") and self.scenario != "quad":
                raise BadConfig(f"check {c!r} needs the quad scenario")
        lo, hi = self.q_range
        if not 1 <= lo <= hi:
            raise BadConfig("bad component-count range")


# -- generators ---------------------------------------------------------------------------------

def _coeff(rng):
    return rng.randint(-COEFF, COEFF)


def random_binary(rng, d, nonzero=True):
    while True:
        f = Poly({(d - i, i): _coeff(rng) for i in range(d + 1)}, SRC)
        if not nonzero or not f.is_zero():
            return f


def random_map(rng, d, avoid=(), nonline=False):
    """Uniform coefficients in [-9, 9], rejected until coprime, of degree ``d``, avoiding curves."""
    for _ in range(MAX_TRIES):
        fs = [random_binary(rng, d, nonzero=False) for _ in range(3)]
        try:
            phi = validate_map(*fs, quiet=True)
        except (ConstantMap, UnequalDegrees, ValueError):
            continue
        if phi.degree != d:
            continue
        if nonline and phi.is_line():
            continue
        if avoid and in_zero_set(phi, avoid):
            continue
        return phi
    raise RuntimeError("random map rejection sampling did not converge")


def random_lines(rng, q):
    """``q`` lines with no two equal and no three concurrent."""
    for _ in range(MAX_TRIES):
        lines = []
        for _ in range(q):
            v = [0, 0, 0]
            while not any(v):
                v = [_coeff(rng) for _ in range(3)]
            lines.append(Poly({(1, 0, 0): v[0], (0, 1, 0): v[1], (0, 0, 1): v[2]}, XYZ).primitive())
        if lines_snc(lines):
            return lines
    raise RuntimeError("line sampling did not converge")


def random_params(rng, q, bound=None):
    """``q`` distinct points of P^1 with small integer coordinates."""
    bound = bound or max(3, q)
    seen = []
    while len(seen) < q:
        s, t = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if (s, t) == (0, 0):
            continue
        p = P1Point(s, t)
        if p not in seen:
            seen.append(p)
    return [(p.s, p.t) for p in seen]


def random_moebius(rng):
    while True:
        a, b, c, d = (rng.randint(-4, 4) for _ in range(4))
        if a * d - b * c:
            s, t = Poly.var("s", SRC), Poly.var("t", SRC)
            return (s * a + t * b, s * c + t * d), (a, b, c, d)


def random_self_map(rng, e):
    """A random self-map of P^1 of degree ``e``; sometimes totally ramified."""
    if rng.random() < 0.4:
        (r0, r1), _ = random_moebius(rng)
        s, t = Poly.var("s", SRC), Poly.var("t", SRC)
        (m0, m1), _ = random_moebius(rng)
        inner = (r0 ** e, r1 ** e)
        vals = {"s": inner[0], "t": inner[1]}
        one = Poly.const(1, SRC)
        return (m0.evaluate(vals, one), m1.evaluate(vals, one))
    for _ in range(MAX_TRIES):
        r0, r1 = random_binary(rng, e), random_binary(rng, e)
        if poly_gcd(r0, r1).is_constant():
            return (r0, r1)
    raise RuntimeError("self-map sampling did not converge")


def _compose(phi, rho):
    try:
        return phi.compose(rho)
    except (ConstantMap, UnequalDegrees):
        return None


# -- trials ---------------------------------------------------------------------------------

@dataclass
class Row:
    trial: int
    scenario: str
    map_degree: object = ""
    lhs: object = ""
    rhs: object = ""
    verdict: str = ""
    integral: object = ""
    notes: list = field(default_factory=list)

    def cells(self):
        integral = {True: "true", False: "false"}.get(self.integral, self.integral)
        lhs = _fmt(self.lhs) if isinstance(self.lhs, (int, Fraction)) else self.lhs
        rhs = _fmt(self.rhs) if isinstance(self.rhs, (int, Fraction)) else self.rhs
        return [self.trial, self.scenario, self.map_degree, lhs, rhs, self.verdict, integral,
                "; ".join(self.notes)]


def _main_divisor(rng, cfg, family):
    if cfg.scenario == "wronskian":
        lines = random_lines(rng, rng.randint(*cfg.q_range))
        return lines, None
    q = rng.randint(5, 12)
    params = random_params(rng, q)
    return [family.line(*p) for p in params], params


def main_trial(rng, cfg, form, family):
    comps, params = _main_divisor(rng, cfg, family)
    divisor = PlaneDivisor(comps)
    notes = [f"q={len(comps)}"]
    roll = rng.random()
    phi = None
    if cfg.scenario == "quad" and roll < 0.2:
        e = rng.randint(1, max(1, cfg.max_degree // 2))
        phi = _compose(family.envelope_map(), random_self_map(rng, e))
        notes.append(f"envelope o rho (deg {e})")
    elif cfg.scenario == "quad" and roll < 0.3:
        for _ in range(MAX_TRIES):
            lam = random_params(rng, 1)[0]
            if params and lam in params:
                continue
            break
        e = rng.randint(1, cfg.max_degree)
        phi = _compose(line_map(family.line(*lam)), random_self_map(rng, e))
        notes.append(f"family line o rho (deg {e})")
    elif cfg.scenario == "wronskian" and roll < 0.15:
        e = rng.randint(1, cfg.max_degree)
        line = random_lines(rng, 1)[0]
        phi = _compose(line_map(line), random_self_map(rng, e))
        notes.append(f"line o rho (deg {e})")
    if phi is None or in_zero_set(phi, comps):
        phi = random_map(rng, rng.randint(1, cfg.max_degree), avoid=comps)
        notes.append("random map")
    report = main_inequality_report(form, divisor, phi)
    return Row(0, cfg.scenario, phi.degree, report.lhs, report.rhs, report.verdict, report.integral, notes)


def nw_trial(rng, cfg, form, family):
    q = rng.randint(4, 8)
    lines = random_lines(rng, q)
    phi = random_map(rng, rng.randint(2, max(2, cfg.max_degree)), avoid=lines, nonline=True)
    report = noguchi_wang_check(PlaneDivisor(lines, snc_status=VERIFIED_LINES), phi)
    integral = is_integral_parametrized(form, phi) if form is not None else ""
    return Row(0, cfg.scenario, phi.degree, report.lhs, report.rhs, report.verdict, integral, [f"q={q}"])


def quad_trial(rng, cfg, form, family):
    params = random_params(rng, cfg.quad_q)
    lines = [family.line(*p) for p in params]
    avoid = lines + [family.envelope()]
    phi = random_map(rng, rng.randint(1, min(4, cfg.max_degree)), avoid=avoid)
    report = quad_family_scenario(family, params, cfg.eps, phi)
    integral = is_integral_parametrized(form, phi) if form is not None else ""
    return Row(0, cfg.scenario, phi.degree, report.lhs, report.rhs, report.verdict, integral,
               [f"q={cfg.quad_q}", f"eps={_fmt(cfg.eps)}"])


def _lines_through(rng, cfg, family, k):
    """``k`` omega-integral lines through a common point, as coefficient vectors."""
    if cfg.scenario == "quad":
        params = random_params(rng, k)
        return [_vec(family.line(*p)) for p in params]
    while True:
        p = [_coeff(rng) for _ in range(3)]
        if any(p):
            break
    out = []
    while len(out) < k:
        v = [_coeff(rng) for _ in range(3)]
        line = [v[1] * p[2] - v[2] * p[1], v[2] * p[0] - v[0] * p[2], v[0] * p[1] - v[1] * p[0]]
        if not any(line):
            continue
        if out and all(line[i] * out[0][j] == line[j] * out[0][i] for i in range(3) for j in range(3)):
            continue
        out.append([Fraction(x) for x in line])
    return out


def _vec(g):
    return line_coeffs(g)


def _line_poly(v):
    return Poly({(1, 0, 0): v[0], (0, 1, 0): v[1], (0, 0, 1): v[2]}, XYZ)


def dosvar_trial(rng, cfg, form, family):
    """A map with prescribed high contact to one or two integral lines at t = 0."""
    m = form.m
    for _ in range(MAX_TRIES):
        k = rng.choice((1, 2))
        rows = _lines_through(rng, cfg, family, k)
        while len(rows) < 3:
            rows.append([Fraction(_coeff(rng)) for _ in range(3)])
        if det3(rows) == 0:
            continue
        cs = [rng.randint(m + 1, m + 3) for _ in range(k)]
        d = rng.randint(max(cs), max(cs) + 2)
        t = Poly.var("t", SRC)
        fprime = []
        for i in range(3):
            g = random_binary(rng, d - cs[i]) if i < k else random_binary(rng, d)
            fprime.append(g * t ** cs[i] if i < k else g)
        inv = _inverse3(rows)
        coords = [sum((fprime[j] * inv[i][j] for j in range(3)), Poly.zero(SRC)) for i in range(3)]
        try:
            phi = validate_map(*coords, quiet=True)
        except (ConstantMap, UnequalDegrees, ValueError):
            continue
        (r0, r1), (a, b, c, dd) = random_moebius(rng)
        phi2 = _compose(phi, (r0, r1))
        if phi2 is None:
            continue
        q = (dd, -c)  # rho(q) = [1:0]
        comps = [_line_poly(rows[i]) for i in range(k)]
        try:
            report = dosvar_order_check(form, comps, phi2, q)
        except (HypothesisFailed, ImageInDivisor):
            continue
        actual = "inf" if report.actual == float("inf") else report.actual
        notes = [f"k={k}", "orders " + "/".join(str(c) for c in report.orders)]
        return Row(0, cfg.scenario, phi2.degree, actual, report.bound, report.verdict, "", notes)
    raise RuntimeError("dosvar sampling did not converge")


def campana_trial(rng, cfg, form, family):
    """Random maps of degree at most 4 against family lines with weights 1/2."""
    params = random_params(rng, 9)
    lines = [family.line(*p) for p in params]
    zset = lines + [family.envelope()]
    if rng.random() < 0.3:
        e = rng.randint(1, 2)
        phi = _compose(family.envelope_map(), random_self_map(rng, e))
        note = "envelope o rho"
    else:
        phi = random_map(rng, rng.randint(1, min(4, cfg.max_degree)), avoid=lines)
        note = "random map"
    inside = in_zero_set(phi, zset)
    ok = False if in_zero_set(phi, lines) else is_campana(phi, lines, Fraction(1, 2))
    verdict = VIOLATION if ok and not inside else "PASS"
    notes = [note, f"campana={'yes' if ok else 'no'}", f"in Z={'yes' if inside else 'no'}"]
    integral = is_integral_parametrized(form, phi) if form is not None else ""
    return Row(0, cfg.scenario, phi.degree, "", "", verdict, integral, notes)


TRIALS = {"main": main_trial, "nw": nw_trial, "dosvar": dosvar_trial, "quad": quad_trial,
          "campana": campana_trial}


def run_trial(cfg, index, form, family=None):
    rng = random.Random(f"{cfg.seed}/{index}")
    check = cfg.checks[index % len(cfg.checks)]
    row = TRIALS[check](rng, cfg, form, family)
    row.trial = index
    row.scenario = f"{cfg.scenario}/{check}"
    return row


@dataclass(frozen=True)
class FuzzResult:
    rows: tuple

    @property
    def violations(self):
        return sum(1 for r in self.rows if r.verdict == VIOLATION)

    @property
    def exit_code(self):
        return 2 if self.violations else 0

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(r.cells())
        return buf.getvalue()

    def to_text(self):
        out = []
        for r in self.rows:
            c = r.cells()
            sides = f" lhs={c[3]} rhs={c[4]}" if c[3] != "" else ""
            out.append(f"#{c[0]} {c[1]} d={c[2]}{sides} {c[5]}"
                       + (f" integral={c[6]}" if c[6] != "" else "") + (f" ({c[7]})" if c[7] else ""))
        out.append(f"{len(self.rows)} trial(s), {self.violations} violation(s)")
        return "\n".join(out) + "\n"


def fuzz_campaign(config, form=None, family=None):
    """Run ``config.trials`` independent trials; rows are ordered by trial index."""
    if not isinstance(config, FuzzConfig):
        raise BadConfig("expected a FuzzConfig")
    if form is None:
        from .fixtures import load_fixture_form

        form = load_fixture_form(config.scenario)
    if config.scenario == "quad" and family is None:
        family = QuadFamily(*config.family)
    rows = [run_trial(config, i, form, family) for i in range(config.trials)]
    return FuzzResult(tuple(rows))


__all__ = [
    "COLUMNS", "FuzzConfig", "FuzzResult", "Row", "dosvar_trial", "fuzz_campaign", "main_trial",
    "nw_trial", "quad_trial", "random_lines", "random_map", "random_moebius", "random_params",
    "random_self_map", "run_trial",
]

"""Command-line interface.

Every command produces a report with a status and exits with the matching code:
verified 0, falsified 1, refused 2 (certification failed at this precision),
error 3 (usage errors, unreadable or unwritable files).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import gallery, hesse, singular
from .curve import ParamCurve, PlaneCurve, ProjPoint, curve_from_json, implicitize, lies_on, proportional, root_of_unity_components
from .exactnum import QOmega, format_qomega, parse_qomega
from .isolate import PrecisionExhausted
from .poly import UPoly
from .series import LinExpr, unknown

__all__ = ["CommandResult", "main", "EXIT_CODES"]

EXIT_CODES = {"verified": 0, "falsified": 1, "refused": 2, "error": 3}


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    command: str
    status: str = "verified"
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    message: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def check(self, name: str, ok: bool, detail=None, gating: bool = True) -> bool:
        item = {"name": name, "ok": bool(ok)}
        if detail is not None:
            item["detail"] = detail
        if not gating:
            item["gating"] = False
        self.checks.append(item)
        return ok

    def settle(self) -> CommandResult:
        """Status from the gating checks, unless already refused or errored."""
        if self.status == "verified" and any(not c["ok"] for c in self.checks if c.get("gating", True)):
            self.status = "falsified"
        return self

    def to_json(self) -> dict:
        out = {"command": self.command, "status": self.status, "exit_code": self.exit_code}
        if self.message:
            out["message"] = self.message
        if self.checks:
            out["checks"] = self.checks
        if self.data:
            out["data"] = self.data
        return out

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status}"]
        if self.message:
            lines.append(f"  {self.message}")
        for c in self.checks:
            mark = "ok" if c["ok"] else ("--" if c.get("gating", True) is False else "FAIL")
            detail = c.get("detail")
            extra = "" if detail is None else f": {json.dumps(detail, sort_keys=True)}"
            lines.append(f"  [{mark}] {c['name']}{extra}")
        if not self.checks and self.data:
            lines.append(_dump(self.data).rstrip())
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# helpers


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _curves_in(doc) -> tuple[list[ParamCurve], list[PlaneCurve]]:
    """Parametrized and implicit curves in a curve file, a list of them, or a gallery export."""
    if isinstance(doc, list):
        ps, fs = [], []
        for d in doc:
            p, f = _curves_in(d)
            ps += p
            fs += f
        return ps, fs
    if isinstance(doc, dict) and "params" in doc:
        return [ParamCurve.from_json(d) for d in doc["params"]], [PlaneCurve.from_json(d) for d in doc.get("implicit", [])]
    if isinstance(doc, dict) and doc.get("kind") in ("param", "implicit"):
        C = curve_from_json(doc)
        return ([C], []) if isinstance(C, ParamCurve) else ([], [C])
    raise ValueError("unrecognized curve document")


def _load_curves(paths: Sequence[str]) -> tuple[list[ParamCurve], list[PlaneCurve]]:
    ps, fs = [], []
    for path in paths:
        try:
            p, f = _curves_in(_read_json(path))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{path}: {exc}") from exc
        ps += p
        fs += f
    return ps, fs


def _load_state(path: str) -> hesse.PerturbState:
    try:
        return hesse.PerturbState.from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: invalid state file ({exc})") from exc


def _rational(text: str, what: str = "u") -> Fraction:
    try:
        q = parse_qomega(text)
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from exc
    if q.wc:
        raise UsageError(f"{what} must be rational, got {text!r}")
    return q.re


def _triple(text: str, what: str) -> tuple:
    parts = text.replace(":", ",").split(",")
    if len(parts) != 3:
        raise UsageError(f"{what} needs three entries, got {text!r}")
    try:
        return tuple(parse_qomega(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"{what}: {exc}") from exc


def _options(args) -> singular.CensusOptions:
    try:
        return singular.CensusOptions(precision_bits=args.precision, threads=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _census_ok(c: singular.SingularCensus, points: int, mult: int) -> bool:
    return c.complete and len(c.entries) == points and c.multiplicities() == [mult] * points and c.all_ordinary


# ---------------------------------------------------------------------------
# verify targets


def _verify_prop1a(res: CommandResult, args) -> None:
    if args.fixture:
        ps, fs = _load_curves([args.fixture])
        if not ps or not fs:
            raise UsageError("fixture must contain a parametrization and an implicit equation")
        C, F = ps[0], fs[0]
    else:
        e = gallery.prop1a()
        C, F = e.params[0], e.implicit[0]
    res.check("identity F(x(t),y(t),z(t)) == 0", lies_on(F, C))
    G = implicitize(C)
    c = proportional(F.F, G.F)
    res.check("implicitization equals F up to a rational scalar", c is not None and c.is_rational(), format_qomega(c) if c is not None else None)
    cen = singular.census_self(C, _options(args))
    res.check("12 ordinary triple points", _census_ok(cen, 12, 3), cen.summary())
    res.check("delta sum 36", cen.delta_sum == 36, cen.delta_sum)
    res.check("ordered pair count 72", cen.pair_count == 72, cen.pair_count)
    res.data["census"] = cen.to_json()


def _verify_prop1b(res: CommandResult, args) -> None:
    if args.fixture:
        ps, fs = _load_curves([args.fixture])
        if len(ps) != 3 or len(fs) < 3:
            raise UsageError("fixture must contain three parametrizations and their implicit equations")
    else:
        e = gallery.prop1b()
        ps, fs = e.params, e.implicit
    for k in range(3):
        res.check(f"component {k} parametrization identity", lies_on(fs[k], ps[k]))
    product = fs[0].F * fs[1].F * fs[2].F
    res.check("product is a polynomial in x^3, y^3, z^3", all(all(v % 3 == 0 for v in ex) for ex in product.terms))
    T = UPoly([QOmega(0), QOmega(1)])
    lemma = root_of_unity_components(T * (T - UPoly([QOmega(3)])) ** 3, T * (T + UPoly([QOmega(2)])) ** 3, (T * 2 - UPoly([QOmega(1)])) ** 3, 3)
    hits = sorted(next((k for k in range(3) if lies_on(fs[k], L)), -1) for L in lemma)
    res.check("root-of-unity lemma yields the three components", hits == [0, 1, 2], hits)
    opts = _options(args)
    for k in range(3):
        cen = singular.census_self(ps[k], opts)
        res.check(f"component {k}: one ordinary triple point", _census_ok(cen, 1, 3), cen.summary())
    full = singular.full_census(ps, opts)
    own = sum(1 for en in full.entries if len({p.component for p in en.parameters}) == 1)
    common = sum(1 for en in full.entries if len({p.component for p in en.parameters}) == 3)
    res.check("19 ordinary triple points", _census_ok(full, 19, 3), full.summary())
    res.check("breakdown 3 + 16", (own, common) == (3, 16), {"single_component": own, "all_components": common})
    res.check("delta sum 57", full.delta_sum == 57, full.delta_sum)
    res.data["census"] = full.to_json()


PRINTED_T = ("-1", "1-2*w", "3+2*w", "2", "-2-2*w", "2*w", "1/2", "1+w", "-w")


def _printed_e1() -> LinExpr:
    a = lambda i: unknown(hesse.param_name("a", i, 0))  # noqa: E731
    b = lambda i: unknown(hesse.param_name("b", i, 0))  # noqa: E731
    w, wb = hesse.W, hesse.WBAR
    return (
        (a(1) + b(1) + a(4) + b(4)).scale(Fraction(1, 2))
        - (a(7) + b(7)).scale(4)
        + b(8)
        + b(9)
        + (b(2) + b(6)).scale((w * 2 - 1) / 7)
        + (b(3) + b(5)).scale((wb * 2 - 1) / 7)
    )


def _printed_6p12x() -> LinExpr:
    a = lambda i: unknown(hesse.param_name("a", i, 0))  # noqa: E731
    b = lambda i: unknown(hesse.param_name("b", i, 0))  # noqa: E731
    w = hesse.W
    return (
        b(1).scale(-2)
        + (b(2) - b(3)).scale(w * 4 + 2)
        + a(4).scale(3)
        + b(4)
        + b(7).scale(4)
        + b(8).scale(w * 2 + 4)
        + b(9).scale(-w * 2 + 2)
    )


def _lin_ratio(e: LinExpr, f: LinExpr):
    """The scalar c with f == c*e (linear parts and constants), or None."""
    if not e.lin:
        return None
    key = sorted(e.lin)[0]
    c = f.coefficient(key) / e.coefficient(key)
    return c if f == e.scale(c) else None


def _config(args) -> hesse.HesseConfig:
    try:
        return hesse.build_config(_triple(args.L0, "--L0"), args.form)
    except hesse.LineNotAdmissible as exc:
        raise UsageError(f"L0 not admissible: {exc}") from exc


def _verify_hesse_linear(res: CommandResult, args) -> None:
    cfg = _config(args)
    res.check("L0 admissible", True, [format_qomega(c) for c in cfg.L0])
    ts = [format_qomega(t) for t in cfg.t]
    if args.L0 == "2,2,-1":
        res.check("t-vector equals the printed intersection parameters", tuple(ts) == PRINTED_T, ts)
    else:
        res.data["t"] = ts
    tau, lam = hesse.compute_tau(cfg, 1, 2)
    want = unknown(hesse.param_name("a", 4, 0)) + unknown(hesse.param_name("b", 4, 0)).scale(Fraction(1, 3))
    res.check("tau_{1,2} = a_4 + b_4/3", tau == want, str(tau))
    rep = hesse.solve_linear_stage(cfg)
    c = _lin_ratio(_printed_e1(), rep.e[1])
    res.check("e_1 matches the printed form up to a nonzero scalar", c is not None and bool(c), format_qomega(c) if c is not None else None)
    X, _ = hesse.compute_p_prime(cfg, 1, 2)
    res.check("X-component of 6 p'_{1,2}(0) matches the printed form", X.scale(6) == _printed_6p12x(), str(X.scale(6)))
    res.check("e_k(a_hat) = 0 for k = 1..9 with all b_i nonzero", rep.a_hat_ok)
    res.check("solution space dimension >= 9", rep.dimension >= 9, {"rank": rep.rank, "dimension": rep.dimension})
    res.data["a_hat"] = [format_qomega(v) for v in rep.a_hat]


DET_E = QOmega(Fraction(64, 3 ** 12 * 49))


def _verify_hesse_phi(res: CommandResult, args) -> None:
    cfg = _config(args)
    rep = hesse.solve_linear_stage(cfg)
    if not rep.a_hat_ok:
        res.check("a_hat solves the linear stage", False)
        return
    st = hesse.recursion_init(cfg)
    ph = hesse.phi_stage(st, rep)
    res.check("det(Phi restricted to E) = 64/(3^12*49)", ph.det_E == DET_E, format_qomega(ph.det_E))
    rng = random.Random(20240613)

    def vec():
        return [QOmega(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5))) for _ in range(18)]

    second = True
    for _ in range(3):
        x, d1, d2 = vec(), vec(), vec()
        add = lambda p, q: [s + t for s, t in zip(p, q)]  # noqa: E731
        v = [hesse.phi_values(st, y) for y in (add(add(x, d1), d2), add(x, d1), add(x, d2), x)]
        second = second and all(v[0][k] - v[1][k] - v[2][k] + v[3][k] == 0 for k in range(9))
    res.check("Phi_k(0, a~) affine: second differences vanish", second)
    prop = {str(k): (format_qomega(c) if c is not None else None) for k, c in ph.proportional.items()}
    res.check("linear part of Phi_k proportional to e_k for k = 1, 5, 9", all(ph.proportional[k] is not None for k in (1, 5, 9)), {k: prop[k] for k in ("1", "5", "9")})
    others = [k for k in range(1, 10) if k not in (1, 5, 9) and ph.proportional[k] is None]
    res.check("some other k with non-proportional linear part", bool(others), {"proportional_scalars": prop}, gating=False)
    res.data["det_E"] = format_qomega(ph.det_E)


def _verify_pipeline(res: CommandResult, args) -> None:
    e = gallery.prop1a_pipeline()
    tang = e.data["tangency_multiplicities"]
    res.check("cubic tangency with L_2 at (0,0), (1,1), (-1,-1)", all(v == 3 for v in tang.values()), tang)
    res.check("pipeline parametrization equals the printed one", e.data["pipeline_param_equals_printed"])
    res.check("pipeline equation vanishes on the parametrization", e.data["pipeline_F_vanishes_on_param"])
    s = e.data["F_scalar_to_printed"]
    res.check("pipeline equation equals printed F up to a rational scalar", s is not None and parse_qomega(s).is_rational() and bool(parse_qomega(s)), s)


def _verify_dual_hesse(res: CommandResult, args) -> None:
    e = gallery.dual_hesse()
    res.check("p1 = (1:1:1) on L1, L4, L7", e.data["incidence"]["p1"] == "147" and e.data["p1"] == ProjPoint.of(1, 1, 1))
    res.check("each line holds 4 triple points", all(v == 4 for v in e.data["points_per_line"].values()), e.data["points_per_line"])
    cen = singular.full_census(e.params, _options(args))
    res.check("12 ordinary triple points", _census_ok(cen, 12, 3), cen.summary())
    res.data["census"] = cen.to_json()


def _verify_cremona(res: CommandResult, args) -> None:
    e = gallery.cremona_fixtures()
    res.check("q = (3:2:8) lies on the conic", e.data["q_on_C2"])
    res.check("parametrizations lie on their curves", e.data["C3_param_ok"] and e.data["C2_param_ok"])
    opts = _options(args)
    c3 = singular.census_self(e.params[0], opts)
    res.check("cuspidal cubic: one non-ordinary double point", c3.multiplicities() == [2] and not c3.all_ordinary, c3.summary())
    c2 = singular.census_self(e.params[1], opts)
    res.check("conic is smooth", not c2.entries, c2.summary())


VERIFY: dict[str, Callable] = {
    "prop1a": _verify_prop1a,
    "prop1b": _verify_prop1b,
    "hesse-linear": _verify_hesse_linear,
    "hesse-phi": _verify_hesse_phi,
    "prop1a-pipeline": _verify_pipeline,
    "dual-hesse": _verify_dual_hesse,
    "cremona": _verify_cremona,
}


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> CommandResult:
    res = CommandResult(f"verify {args.target}")
    if args.fixture and args.target not in ("prop1a", "prop1b"):
        raise UsageError("--fixture applies to prop1a and prop1b only")
    VERIFY[args.target](res, args)
    return res.settle()


def cmd_recurse(args) -> CommandResult:
    if args.order < 0:
        raise UsageError("--order must be >= 0")
    cfg = _config(args)
    res = CommandResult("recurse")
    state = hesse.run_recursion(cfg, args.order)
    ok, where = hesse.verify_state_order(state)
    doc = state.to_json()
    doc["order_check"] = {"ok": ok, "first_failure": list(where) if where else None}
    _write(args.out, _dump(doc))
    res.check(f"branches agree through u^{args.order + 1}", ok, None if ok else {"k": where[0], "order": where[1]})
    res.data = {"order": state.order, "layers": len(state.a), "out": args.out}
    return res.settle()


def cmd_check_order(args) -> CommandResult:
    state = _load_state(args.state)
    res = CommandResult("check-order")
    ok, where = hesse.verify_state_order(state)
    res.check(f"branches agree through u^{state.order + 1}", ok, None if ok else {"k": where[0], "order": where[1]})
    res.data = {"order": state.order}
    return res.settle()


def cmd_instantiate(args) -> CommandResult:
    u0 = _rational(args.u)
    if u0 == 0:
        raise UsageError("u must be nonzero")
    state = _load_state(args.state)
    res = CommandResult("instantiate")
    try:
        C = hesse.instantiate(state, u0)
    except hesse.ZeroB as exc:
        res.status = "falsified"
        res.message = str(exc)
        return res
    _write(args.out, _dump(C.to_json()))
    res.check("degree 10", C.degree() == 10, C.degree())
    res.check("primitive parametrization", C.is_primitive())
    res.data = {"u": format_qomega(QOmega(u0)), "order": state.order, "label": C.label, "out": args.out}
    return res.settle()


def cmd_census(args) -> CommandResult:
    opts = _options(args)
    res = CommandResult("census")
    if args.state:
        if args.paths or not args.u:
            raise UsageError("--state needs --u and no curve paths")
        u0 = _rational(args.u)
        if u0 == 0:
            raise UsageError("u must be nonzero")
        report = singular.hesse_census(_load_state(args.state), u0, opts)
        res.check("vertex triple points exact and ordinary", all(e.ordinary for e in report.vertex_entries) and len(report.vertex_entries) == 3)
        res.check("nine clusters of three certified nodes", sorted(len(v) for v in report.node_entries.values()) == [3] * 9)
        res.check("delta accounting complete", report.census.complete, report.expected_delta)
        res.data = {"census": report.to_json()}
        return res.settle()
    if not args.paths:
        raise UsageError("census needs curve files or --state/--u")
    ps, fs = _load_curves(args.paths)
    if not ps:
        raise UsageError("census works on parametrized curves; only implicit input given")
    if args.pair:
        if len(ps) != 2:
            raise UsageError("--pair needs exactly two parametrized curves")
        cen = singular.census_pair(ps[0], ps[1], opts)
    elif len(ps) == 1:
        cen = singular.census_self(ps[0], opts)
    else:
        cen = singular.full_census(ps, opts)
    res.check("census complete", cen.complete)
    res.data = {"census": cen.to_json()}
    return res.settle()


def cmd_implicitize(args) -> CommandResult:
    ps, _ = _load_curves(args.paths)
    if not ps:
        raise UsageError("no parametrized curve given")
    res = CommandResult("implicitize")
    out = []
    for C in ps:
        F = implicitize(C)
        res.check(f"{C.label or 'curve'}: equation vanishes on the parametrization", lies_on(F, C), F.degree)
        out.append(F.to_json())
    doc = out[0] if len(out) == 1 else out
    if args.out:
        _write(args.out, _dump(doc))
    else:
        res.data = {"curves": out}
    return res.settle()


def cmd_probe_scaling(args) -> CommandResult:
    us = [_rational(u) for u in args.u]
    if len(us) < 3:
        raise UsageError("give at least three values with --u")
    if any(u == 0 for u in us):
        raise UsageError("u must be nonzero")
    state = _load_state(args.state)
    lo, hi = state.order + 1.5, state.order + 2.5
    res = CommandResult("probe-scaling")
    out = hesse.split_scaling_probe(state, us, precision_bits=args.precision)
    slopes = out["slopes"]
    for k in range(1, 10):
        res.check(f"cluster {k} splitting exponent in [{lo}, {hi}]", lo <= slopes[k] <= hi, round(slopes[k], 4))
    res.data = {
        "order": state.order,
        "u": [format_qomega(QOmega(u)) for u in us],
        "slopes": {str(k): round(v, 6) for k, v in slopes.items()},
        "diameters": {str(k): [f"{d:.6e}" for d in v] for k, v in out["diameters"].items()},
    }
    return res.settle()


def cmd_gallery(args) -> CommandResult:
    res = CommandResult(f"gallery {args.action}")
    if args.action == "list":
        res.data = {"entries": sorted(gallery.ENTRIES)}
        return res
    if not args.id:
        raise UsageError("gallery export needs --id")
    try:
        e = gallery.get_entry(args.id)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    doc = e.to_json()
    if args.out:
        _write(args.out, _dump(doc))
        res.data = {"id": e.id, "out": args.out}
    else:
        res.data = doc
    return res


def cmd_plot(args) -> CommandResult:
    from .plot import parse_window, plot_svg

    try:
        window = parse_window(args.window)
        t0, t1 = (float(Fraction(x)) for x in args.t_range.split(","))
    except ValueError as exc:
        raise UsageError(f"bad window or t range: {exc}") from exc
    ps, _ = _load_curves(args.paths)
    if not ps:
        raise UsageError("plot needs parametrized curves")
    marks = []
    for m in args.mark:
        try:
            marks.append(ProjPoint(_triple(m, "--mark")))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    try:
        svg = plot_svg(ps, window, (t0, t1), args.samples, marks)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(args.out, svg)
    res = CommandResult("plot")
    res.data = {"out": args.out, "curves": len(ps), "polylines": svg.count("<polyline"), "marks": svg.count("<circle")}
    return res


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="working precision in bits (default 192)")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for census grouping (default 1)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the JSON report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="tripoint", description="Exact verification of plane curves with many triple points.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    def hesse_line(p):
        p.add_argument("--L0", default="2,2,-1", help="coefficients of the auxiliary line (default 2,2,-1)")
        p.add_argument("--form", choices=sorted(hesse.FORMS), default="fnu", help="affine chart convention")

    p = add("verify", cmd_verify, "run a verification suite")
    p.add_argument("target", choices=sorted(VERIFY))
    p.add_argument("--fixture", help="gallery-style JSON to verify instead of the built-in curves")
    hesse_line(p)

    p = add("recurse", cmd_recurse, "run the order-by-order recursion and save the state")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--out", required=True)
    hesse_line(p)

    p = add("check-order", cmd_check_order, "re-verify a saved state")
    p.add_argument("--state", required=True)

    p = add("instantiate", cmd_instantiate, "substitute a rational u into a saved state")
    p.add_argument("--state", required=True)
    p.add_argument("--u", required=True, help="rational value such as 1/100")
    p.add_argument("--out", required=True)

    p = add("census", cmd_census, "singular points of parametrized curves")
    p.add_argument("paths", nargs="*")
    p.add_argument("--pair", action="store_true", help="intersections of two curves only")
    p.add_argument("--state", help="seeded census of an instantiated state")
    p.add_argument("--u")

    p = add("implicitize", cmd_implicitize, "implicit equation of parametrized curves")
    p.add_argument("paths", nargs="+")
    p.add_argument("--out")

    p = add("probe-scaling", cmd_probe_scaling, "fit the splitting exponent of the near-triple clusters")
    p.add_argument("--state", required=True)
    p.add_argument("--u", action="append", default=[], help="repeat, e.g. --u 1/50 --u 1/100 --u 1/200")

    p = add("gallery", cmd_gallery, "list or export the built-in curves")
    p.add_argument("action", choices=["list", "export"])
    p.add_argument("--id")
    p.add_argument("--out")

    p = add("plot", cmd_plot, "SVG of the real locus")
    p.add_argument("paths", nargs="+")
    p.add_argument("--window", default="-3,3,-3,3", help="xmin,xmax,ymin,ymax (write --window=-3,3,-3,3)")
    p.add_argument("--t-range", default="-3,3", help="tmin,tmax")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--mark", action="append", default=[], help="projective point such as 1:1:1")
    p.add_argument("--out", required=True)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[CommandResult, bool]:
    parser = build_parser()
    as_json = "--json" in (argv if argv is not None else sys.argv[1:])
    try:
        args = parser.parse_args(argv)
        # parent actions are shared with the subparsers, so defaults are filled in here
        for key, value in (("precision", 192), ("threads", 1), ("json", False)):
            if not hasattr(args, key):
                setattr(args, key, value)
        as_json = args.json
        result = args.func(args)
    except UsageError as exc:
        result = CommandResult("usage", status="error", message=str(exc))
    except PrecisionExhausted as exc:
        prec = getattr(locals().get("args"), "precision", 192)
        result = CommandResult(
            getattr(locals().get("args"), "command", "census") or "census",
            status="refused",
            message=f"{exc}; retry with --precision {2 * prec}",
        )
    except (ArithmeticError, singular.ImproperParametrization, singular.SharedComponent, singular.ParameterAtInfinity) as exc:
        result = CommandResult(getattr(locals().get("args"), "command", "command"), status="falsified", message=f"{type(exc).__name__}: {exc}")
    return result, as_json


def main(argv: Sequence[str] | None = None) -> int:
    result, as_json = run(argv)
    text = _dump(result.to_json()) if as_json else result.to_text() + "\n"
    stream = sys.stderr if result.status == "error" and not as_json else sys.stdout
    stream.write(text)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

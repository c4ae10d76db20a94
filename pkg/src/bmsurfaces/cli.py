"""Command-line front end.

Exit status: 0 for a yes answer or valid input, 1 for a no answer (the
report says why), 2 for unreadable input or a numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Any

from . import __version__
from .actions import ActionError, average, is_invariant, table_problems
from .bgraph import build_graph, exists_bm, to_dot, two_colorable
from .decision import Decision
from .desingularize import (
    ProfileError,
    build_profile,
    convergence_report,
    desing_total_volume_numeric,
    is_monotone,
)
from .io import (
    InputError,
    REPORT_SCHEMA,
    check_schema,
    dumps,
    form_to_dict,
    load_action,
    load_form,
    load_surface,
    map_to_dict,
    nambu_from_dict,
    presentation_to_dict,
    read_json,
)
from .laurent import check_form, construct_form, equivalent, invariants
from .nambu import nambu_equivalent, nambu_validate
from .quadrature import ConvergenceError, IllConditionedFit, regularized_volume_numeric
from .surface import (
    CoveredSurface,
    PresentationError,
    involution_problems,
    is_orientable,
    orientation_double_cover,
    validate,
)

OK, NO, ERROR = 0, 1, 2


class Report(dict):
    def __init__(self, command: str, code: int, status: str, **fields: Any):
        super().__init__(command=command, exit_code=code, status=status, **fields)


def _decision_report(command: str, d: Decision, **fields) -> Report:
    if d:
        return Report(command, OK, "yes", **fields)
    return Report(command, NO, "no", reason=d.reason, **fields)


def _surface(ref: str):
    s = load_surface(ref)
    if isinstance(s, CoveredSurface):
        problems = involution_problems(s.cover, s.deck)
        if problems:
            raise PresentationError("invalid deck involution: " + "; ".join(problems))
    else:
        report = validate(s)
        if not report.ok:
            raise PresentationError("invalid presentation: " + "; ".join(map(str, report.violations)))
    return s


def _plain(p):
    if isinstance(p, CoveredSurface):
        raise InputError("this command needs a plain presentation, not a covered surface")
    return p


def cmd_validate(args) -> Report:
    s = load_surface(args.surface)
    if isinstance(s, CoveredSurface):
        problems = involution_problems(s.cover, s.deck) + [str(v) for v in validate(s.cover).violations]
    else:
        problems = [str(v) for v in validate(s).violations]
    if problems:
        raise PresentationError("; ".join(problems))
    fields = {"orientable": not isinstance(s, CoveredSurface) and bool(is_orientable(s))}
    if args.form:
        p, omega = load_form(args.form, args.surface)
        rep = check_form(_plain(p), omega)
        if not rep.ok:
            return Report("validate", NO, "invalid", reason=str(rep.violations[0]), violations=[str(v) for v in rep.violations], **fields)
    return Report("validate", OK, "ok", **fields)


def cmd_graph(args) -> Report:
    p = _plain(_surface(args.surface))
    g = build_graph(p)
    col = two_colorable(g)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(g, col.colors if col else None))
    fields = {
        "vertices": {v: list(g.vertex_labels[v]) for v in g.vertices},
        "edges": [{"id": e.id, "kind": e.kind, "ends": list(e.ends)} for e in g.edges],
        "two_colorable": bool(col),
    }
    if col:
        fields["colors"] = col.colors
    else:
        fields["obstruction"] = list(col.witness)
    return Report("graph", OK, "ok", **fields)


def cmd_exists(args) -> Report:
    s = _surface(args.surface)
    d = exists_bm(s, args.m)
    fields = {"m": args.m, "details": d.details}
    if d:
        fields["witness"] = d.witness
        if args.construct:
            fields["form"] = form_to_dict(construct_form(s, args.m))
    return _decision_report("exists", d, **fields)


def cmd_invariants(args) -> Report:
    p, omega = load_form(args.form, args.surface)
    p = _plain(p)
    inv = invariants(p, omega)
    fields = inv.as_dict()
    if args.numeric and inv.regularized_volume is not None:
        grid = args.eps_grid or [2.0**-j for j in range(3, 13)]
        num = regularized_volume_numeric(p, omega, grid)
        fields["numeric_volume"] = num
        fields["numeric_relative_error"] = abs(num - inv.regularized_volume) / (1 + abs(inv.regularized_volume))
    return Report("invariants", OK, "ok", **fields)


def cmd_equiv(args) -> Report:
    p1, w1 = load_form(args.form1, args.surface)
    p2, w2 = load_form(args.form2, args.surface2 or args.surface)
    d = equivalent(_plain(p1), w1, _plain(p2), w2, args.allow_orientation_reversal, args.tol)
    fields = {"details": d.details}
    if d:
        fields["witness"] = map_to_dict(d.witness)
    return _decision_report("equiv", d, **fields)


def cmd_cover(args) -> Report:
    s = _surface(args.surface)
    if isinstance(s, CoveredSurface):
        cover, deck, chi = s.cover, s.deck, s.euler_char
    else:
        cover, deck = orientation_double_cover(s)
        chi = s.euler_char
    problems = involution_problems(cover, deck)
    fields = {
        "cover": presentation_to_dict(cover),
        "deck": map_to_dict(deck),
        "base_euler_char": chi,
        "cover_euler_char": cover.euler_char,
        "deck_problems": problems,
    }
    if problems:
        return Report("cover", NO, "invalid", reason=problems[0], **fields)
    return Report("cover", OK, "ok", **fields)


def cmd_action_check(args) -> Report:
    p, G = load_action(args.action)
    if args.surface:
        p = _plain(_surface(args.surface))
    problems = table_problems(G, p)
    if problems:
        return Report("action-check", NO, "invalid", reason=problems[0], problems=problems)
    fields = {"order": len(G)}
    if args.form:
        q, omega = load_form(args.form, args.surface)
        inv = is_invariant(omega, G)
        fields["invariant"] = bool(inv)
        if not inv:
            return Report(
                "action-check", NO, "no", reason=f"not invariant under {inv.element.name or 'an element'}: {inv.coordinate}", **fields
            )
        return Report("action-check", OK, "yes", **fields)
    return Report("action-check", OK, "ok", **fields)


def cmd_average(args) -> Report:
    pa, G = load_action(args.action)
    p, omega = load_form(args.form, args.surface)
    problems = table_problems(G, _plain(p))
    if problems:
        raise ActionError("invalid action: " + "; ".join(problems))
    avg = average(omega, G)
    rep = check_form(p, avg)
    fields = {"form": form_to_dict(avg), "violations": [str(v) for v in rep.violations]}
    if not rep.ok:
        return Report("average", NO, "no", reason=str(rep.violations[0]), **fields)
    return Report("average", OK, "yes", **fields)


def _model_form(k: int):
    from .fixtures import sphere_equator, sphere_form

    return sphere_equator(), sphere_form(2 * k)


def cmd_desing(args) -> Report:
    if args.form:
        p, omega = load_form(args.form, args.surface)
        if omega.m % 2:
            raise InputError(f"desingularisation needs even m, got m = {omega.m}")
        k = omega.m // 2
        if args.k is not None and args.k != k:
            raise InputError(f"--k {args.k} does not match the form's m = {omega.m}")
    else:
        k = args.k or 1
        p, omega = _model_form(k)
    profile = build_profile(k, args.match_order)
    eps_list = args.sweep or [args.eps]
    rows = []
    for eps in eps_list:
        r = desing_total_volume_numeric(_plain(p), omega, eps, profile)
        rows.append(
            {"epsilon": r.epsilon, "closed_form": r.closed_form, "numeric": r.numeric, "relative_error": r.relative_error}
        )
    worst = max(r["relative_error"] for r in rows)
    fields = {"k": k, "match_order": profile.match_order, "rows": rows}
    if worst > args.tol:
        return Report("desing", NO, "no", reason=f"closed form and quadrature disagree (relative error {worst:.3g})", **fields)
    return Report("desing", OK, "ok", **fields)


def cmd_desing_sweep(args) -> Report:
    profile = build_profile(args.k, args.match_order)
    eps = args.eps_list or [0.2, 0.1, 0.05, 0.025]
    rows = convergence_report(args.k, profile, eps)
    fields = {
        "k": args.k,
        "match_order": profile.match_order,
        "rows": [{"epsilon": r.epsilon, "sup_norms": list(r.sup_norms)} for r in rows],
    }
    if not is_monotone(rows):
        return Report("desing-sweep", NO, "no", reason="sup-norm table is not monotone in epsilon", **fields)
    return Report("desing-sweep", OK, "yes", **fields)


def cmd_nambu_equiv(args) -> Report:
    d1, d2 = (nambu_from_dict(read_json(x)) for x in (args.data1, args.data2))
    for which, d in (("first", d1), ("second", d2)):
        rep = nambu_validate(d)
        if not rep.ok:
            raise InputError(f"{which} data: " + "; ".join(map(str, rep.violations)))
    d = nambu_equivalent(d1, d2, tol=args.tol)
    fields = {}
    if d:
        fields["correspondence"] = d.witness
    return _decision_report("nambu-equiv", d, **fields)


COMMANDS = {
    "validate": cmd_validate,
    "graph": cmd_graph,
    "exists": cmd_exists,
    "invariants": cmd_invariants,
    "equiv": cmd_equiv,
    "cover": cmd_cover,
    "action-check": cmd_action_check,
    "average": cmd_average,
    "desing": cmd_desing,
    "desing-sweep": cmd_desing_sweep,
    "nambu-equiv": cmd_nambu_equiv,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="comparison tolerance (default 1e-6)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(
        prog="bmsurf",
        description="Decide existence and equivalence of b^m-symplectic structures on surfaces.",
        epilog="Inputs are JSON documents; surfaces may also be given as fixture:NAME. "
        "Exit status: 0 yes/ok, 1 no, 2 input or numerical error.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    p = add("validate", "check a presentation (and optionally a form on it)")
    p.add_argument("surface")
    p.add_argument("--form")

    p = add("graph", "associated graph, 2-colourability and DOT export")
    p.add_argument("surface")
    p.add_argument("--dot", metavar="OUT", help="write Graphviz DOT to OUT")

    p = add("exists", "decide existence of a b^m-symplectic structure")
    p.add_argument("surface")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--construct", action="store_true", help="include a witness form")

    p = add("invariants", "periods, modular periods and regularized volume of a form")
    p.add_argument("form")
    p.add_argument("--surface")
    p.add_argument("--numeric", action="store_true", help="also run the epsilon-fit quadrature oracle")
    p.add_argument("--eps-grid", type=float, nargs="+")

    p = add("equiv", "decide equivalence of two forms")
    p.add_argument("form1")
    p.add_argument("form2")
    p.add_argument("--surface")
    p.add_argument("--surface2")
    p.add_argument("--allow-orientation-reversal", action="store_true")

    p = add("cover", "orientation double cover and deck involution")
    p.add_argument("surface")

    p = add("action-check", "validate a finite action (and invariance of a form)")
    p.add_argument("action")
    p.add_argument("--surface")
    p.add_argument("--form")

    p = add("average", "average a form over a finite action")
    p.add_argument("form")
    p.add_argument("--action", required=True)
    p.add_argument("--surface")

    p = add("desing", "desingularised total volume, closed form against quadrature")
    p.add_argument("form", nargs="?")
    p.add_argument("--surface")
    p.add_argument("--k", type=int)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--sweep", type=float, nargs="+", metavar="EPS")
    p.add_argument("--match-order", type=int)

    p = add("desing-sweep", "C^(2k-1) convergence table of the desingularised bivector")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--eps-list", type=float, nargs="+")
    p.add_argument("--match-order", type=int)

    p = add("nambu-equiv", "decide equivalence of two Nambu invariant documents")
    p.add_argument("data1")
    p.add_argument("data2")
    return parser


def _text(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            lines.append(pad + ", ".join(_scalar(v) for v in value))
        else:
            for v in value:
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if v is None:
        return "-"
    return str(v)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    head = f"{report['command']}: {report['status'].upper()}"
    if report.get("reason"):
        head += f" ({report['reason']})"
    body = {k: v for k, v in report.items() if k not in ("command", "status", "reason", "exit_code")}
    return "\n".join([head] + _text(body))


def _finite(x: Any) -> Any:
    """JSON has no infinities or NaNs; turn them into strings."""
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    return x


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except (InputError, PresentationError, ActionError, ProfileError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        report = Report(args.command, ERROR, "error", reason=str(msg))
    except (ConvergenceError, IllConditionedFit) as exc:
        report = Report(args.command, ERROR, "error", reason=f"numerical failure: {exc}")
    report = _finite(report)
    check_schema(report, REPORT_SCHEMA, "report")
    print(render(report, args.format), file=out)
    return report["exit_code"]


def main() -> None:
    sys.exit(run())

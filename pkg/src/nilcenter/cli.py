"""Command line front end.

Subcommands walk the analysis pipeline for a system given in the `.sys`
grammar: parse, reduce to the center manifold, classify monodromy of the
restriction, compute the obstruction series, and decide the center problem
as far as the computed data allow.  Single stages are exposed separately
(`cm`, `omega`, `nf`, `focal`).

Exit codes: 0 when a verdict was reached (whatever it is), 2 for input or
validation problems, 3 when the conclusion is out of reach at the working
order (raise the order and retry).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager

from .center_manifold import cm_jet, restrict, restrict_exact
from .monodromy import FLAT, andreev_data, classify_monodromy
from .normal_form import conjugacy_residual, integrability_pattern, normal_form
from .numerics import NumericsError, displacement
from .obstruction import center_verdict, omega_series
from .rational import Coef
from .series import OrderError, Poly
from .sysio import (FrameError, JetBoundError, ParseError, ValidationError,
                    parse_assumption, parse_numeric_bindings, parse_system,
                    print_system, substitute_params)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BOUND = 3

MAX_ORDER_ENV = "NILCENTER_MAX_ORDER"
DEFAULT_MAX_ORDER = 16
NUMERIC_DEPTH = 12
SYMBOLIC_DEPTH = 8

SCHEMA = "nilcenter-report/1"

# grid for the one-return displacement (focal command and corroboration)
RHO_GRID = (0.05, 0.1, 0.15)

# human names for the machine-readable rule slugs; every verdict line cites one
RULE_NAMES = {
    "andreev-monodromy-criterion": "Andreev monodromy criterion",
    "odd-andreev-balanced-divergence":
        "focus rule: odd Andreev number with balanced divergence trace",
    "even-index-obstruction": "even-index obstruction rule",
    "odd-index-obstruction": "odd-index obstruction rule",
    "reversible-restriction":
        "reversibility certificate on an exact invariant graph",
    "hamiltonian-restriction":
        "Hamiltonian certificate on an exact invariant graph",
    "obstructions-vanish-to-order": "no certificate at the computed order",
}


@contextmanager
def _stage(name: str):
    """Attach the pipeline stage name to errors raised inside it."""
    try:
        yield
    except (ValidationError, OrderError, NumericsError) as e:
        raise type(e)(f"[{name}] {e}") from None


# ---------------------------------------------------------------------------
# input handling


def _load(args) -> tuple:
    """Parse the input file and apply bindings; returns (S, working order)."""
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {args.file}: {e.strerror}") from None
    S = parse_system(text)
    # a second parse under a shifted default exposes whether the file
    # declared its own order header
    try:
        has_header = parse_system(text, default_order=S.order + 1).order == S.order
    except (ParseError, ValidationError):
        has_header = True
    bindings = {}
    for spec in args.numeric or ():
        bindings.update(parse_numeric_bindings(spec))
    if bindings:
        with _stage("numeric binding"):
            S = substitute_params(S, bindings)
    for text_a in args.assume or ():
        with _stage("assumption"):
            S.assumptions.add(parse_assumption(text_a, S.params))
    order = _resolve_order(args.order, S, has_header)
    return S, order, bindings


def _resolve_order(requested, S, has_header: bool) -> int:
    raw = os.environ.get(MAX_ORDER_ENV, "")
    try:
        cap = int(raw) if raw.strip() else DEFAULT_MAX_ORDER
    except ValueError:
        raise ValidationError(f"{MAX_ORDER_ENV} must be an integer, got {raw!r}") from None
    if cap < 2:
        raise ValidationError(f"{MAX_ORDER_ENV} must be at least 2, got {cap}")
    if requested is not None:
        if requested < 2:
            raise ValidationError("--order must be at least 2")
        if requested > cap:
            raise ValidationError(
                f"--order {requested} exceeds the cap {cap} "
                f"(raise {MAX_ORDER_ENV} to go higher)")
        return requested
    if has_header:
        if S.order > cap:
            raise ValidationError(
                f"declared order {S.order} exceeds the cap {cap} "
                f"(raise {MAX_ORDER_ENV} to go higher)")
        return S.order
    return min(cap, NUMERIC_DEPTH if S.is_numeric() else SYMBOLIC_DEPTH)


def _base_report(command: str, args, S, order: int, bindings) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "input": {
            "file": args.file,
            "parameters": list(S.params),
            "bindings": {k: str(v) for k, v in bindings.items()},
            "assumptions": [str(c) for c in S.assumptions],
            "lambda": str(S.lam),
            "system": print_system(S),
        },
        "order": order,
    }


def _conds(cset) -> list:
    return [str(c) for c in cset]


# ---------------------------------------------------------------------------
# pipeline stages shared by the subcommands


def _stage_cm(S, order: int) -> tuple:
    with _stage("center manifold"):
        h = cm_jet(S, order)
    section = {
        "graph": f"z = {h.poly if not h.poly.is_zero() else 0} + O({order + 1})",
        "order": order,
        "defect_zero": True,
        "provenance": {"op": "cm_jet", "rule": "graph-invariance-equation"},
    }
    return h, section


def _stage_monodromy(S, h) -> tuple:
    with _stage("restriction"):
        Pl = restrict(S, h)
    with _stage("leading data"):
        D = andreev_data(Pl)
    andreev = {
        "f_leading_index": D.alpha if D.alpha is not FLAT else "flat",
        "f_leading": str(D.a) if D.a is not None else None,
        "divergence_leading_index": D.beta if D.beta is not FLAT else "flat",
        "divergence_leading": str(D.b) if D.b is not None else None,
        "n": D.n,
        "a_lead": str(D.a_lead) if D.a_lead is not None else None,
        "b_lead": str(D.b_lead) if D.b_lead is not None else None,
        "discriminant": str(D.delta) if D.delta is not None else None,
        "provenance": {"op": "andreev_data", "rule": "restricted-leading-data"},
    }
    with _stage("monodromy"):
        M = classify_monodromy(D)
    monodromy = {
        "status": M.status,
        "n": M.n,
        "case": M.condition_case,
        "reason": M.reason,
        "conditions": _conds(M.conditions),
        "provenance": {"op": "classify_monodromy",
                       "rule": "andreev-monodromy-criterion"},
    }
    return Pl, D, M, andreev, monodromy


def _stage_omega(S, order: int) -> tuple:
    with _stage("obstructions"):
        O = omega_series(S, order)
    fz = O.first_nonzero()
    section = {
        "from": 3,
        "to": order,
        "values": {str(k): str(O.omegas[k]) for k in sorted(O.omegas)},
        "first_nonzero": None if fz is None else
            {"index": fz[0], "value": str(fz[1]),
             "parity": "even" if fz[0] % 2 == 0 else "odd"},
        "residual_zero": True,
        "provenance": {"op": "omega_series",
                       "rule": "formal-integral-obstructions"},
    }
    return O, section


def _verdict_section(V) -> dict:
    return {
        "status": V.status,
        "rule": V.rule,
        "rule_name": RULE_NAMES.get(V.rule, V.rule),
        "detail": V.detail,
        "first_index": V.first_index,
        "first_value": str(V.first_value) if V.first_value is not None else None,
        "order_checked": V.order_checked,
        "conditions": _conds(V.conditions),
        "surface": f"{V.surface} = 0" if V.surface is not None else None,
        "symmetries": list(V.symmetries),
        "hamiltonian": str(V.hamiltonian.H) if V.hamiltonian is not None else None,
        "provenance": {"op": "center_verdict", "rule": V.rule},
    }


def _corroborate(S, V, M, h, order: int) -> dict:
    """One-return displacement on a numeric system, as supporting evidence.

    Confirmed centers are sampled on their exact invariant graph, so jet
    truncation cannot masquerade as a spurious displacement.
    """
    if V.surface is not None:
        hz = {(e[0], e[1]): c for e, c in
              (Poly.var(V.surface.vars, "z") - V.surface).terms.items()}
        Pl = restrict_exact(S, Poly(("x", "y"), hz))
    else:
        Pl = restrict(S, h)
    res = displacement(Pl, M.n, RHO_GRID)
    expect = {"focus": "nonzero", "not-a-center": "nonzero",
              "center-confirmed": "zero"}.get(V.status)
    agrees = None
    if expect == "nonzero":
        agrees = res.lead_sign != 0
    elif expect == "zero":
        agrees = res.lead_sign == 0
    return {
        "n": res.n,
        "period": res.T,
        "rho0": res.rho0,
        "d": res.d,
        "err": res.err,
        "floor": res.floor,
        "signs": res.sign_calls(),
        "lead_sign": res.lead_sign,
        "lead_exponent": res.lead_exponent,
        "exact_restriction": V.surface is not None,
        "agrees_with_verdict": agrees,
        "provenance": {"op": "displacement", "rule": "one-return-displacement"},
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> tuple:
    S, order, bindings = _load(args)
    report = _base_report("analyze", args, S, order, bindings)
    h, report["center_manifold"] = _stage_cm(S, order)
    Pl, D, M, report["andreev"], report["monodromy"] = _stage_monodromy(S, h)
    if M.status == "inconclusive":
        report["verdict"] = {
            "status": "inconclusive", "rule": "andreev-monodromy-criterion",
            "rule_name": RULE_NAMES["andreev-monodromy-criterion"],
            "detail": M.reason, "conditions": _conds(M.conditions),
            "provenance": {"op": "classify_monodromy",
                           "rule": "andreev-monodromy-criterion"},
        }
        return report, EXIT_BOUND
    if not M.is_monodromic():
        report["verdict"] = {
            "status": "not-monodromic", "rule": "andreev-monodromy-criterion",
            "rule_name": RULE_NAMES["andreev-monodromy-criterion"],
            "detail": M.reason, "conditions": _conds(M.conditions),
            "provenance": {"op": "classify_monodromy",
                           "rule": "andreev-monodromy-criterion"},
        }
        return report, EXIT_OK
    O, report["obstructions"] = _stage_omega(S, order)
    with _stage("verdict"):
        V = center_verdict(S, M, O)
    report["verdict"] = _verdict_section(V)
    if S.is_numeric():
        try:
            report["corroboration"] = _corroborate(S, V, M, h, order)
        except (NumericsError, ValidationError) as e:
            report["corroboration"] = {"error": str(e)}
    return report, EXIT_BOUND if V.status == "undecided" else EXIT_OK


def cmd_cm(args) -> tuple:
    S, order, bindings = _load(args)
    report = _base_report("cm", args, S, order, bindings)
    h, report["center_manifold"] = _stage_cm(S, order)
    report["restriction"] = _restriction_section(S, h)
    return report, EXIT_OK


def _restriction_section(S, h) -> dict:
    Pl = restrict(S, h)
    return {
        "dx": f"y + {Pl.X2.poly} + O({Pl.order + 1})" if not Pl.X2.is_zero()
              else f"y + O({Pl.order + 1})",
        "dy": f"{Pl.Y2.poly} + O({Pl.order + 1})",
        "order": Pl.order,
    }


def cmd_omega(args) -> tuple:
    S, order, bindings = _load(args)
    report = _base_report("omega", args, S, order, bindings)
    _, report["obstructions"] = _stage_omega(S, order)
    return report, EXIT_OK


def cmd_nf(args) -> tuple:
    S, order, bindings = _load(args)
    report = _base_report("nf", args, S, order, bindings)
    with _stage("normal form"):
        nf = normal_form(S, order)
    with _stage("conjugacy check"):
        resid = conjugacy_residual(S, nf)
    if any(not r.is_zero() for r in resid):
        raise AssertionError("conjugacy residual is nonzero")
    n = None
    try:
        h = cm_jet(S, order)
        M = classify_monodromy(andreev_data(restrict(S, h)))
        n = M.n if M.is_monodromic() else None
    except (ValidationError, OrderError):
        n = None
    pat = integrability_pattern(nf, n)
    tx, ty, tz = nf.transform
    report["normal_form"] = {
        "P1": str(nf.P1.poly if not nf.P1.is_zero() else 0),
        "Q2": str(nf.Q2.poly if not nf.Q2.is_zero() else 0),
        "R1": str(nf.R1.poly if not nf.R1.is_zero() else 0),
        "shape": "x' = y + x P1(x), y' = Q2(x) + y P1(x), z' = -lambda z + z R1(x)",
        "transform": {"x": str(tx), "y": str(ty), "z": str(tz)},
        "order": nf.order,
        "conjugacy_residual_zero": True,
        "conditions": _conds(nf.conditions),
        "pattern": {
            "p1_zero": pat.p1_zero,
            "lead_index": pat.lead_index,
            "andreev_n": pat.andreev_n,
            "consistent": pat.pattern_consistent,
            "s": pat.s,
            "text": str(pat),
        },
        "provenance": {"op": "normal_form", "rule": "resonant-normal-form"},
    }
    return report, EXIT_OK


def cmd_focal(args) -> tuple:
    S, order, bindings = _load(args)
    if not S.is_numeric():
        raise ValidationError(
            "focal values need a fully numeric system; bind remaining "
            f"parameters {list(S.params)} with --numeric")
    report = _base_report("focal", args, S, order, bindings)
    h, report["center_manifold"] = _stage_cm(S, order)
    with _stage("restriction"):
        Pl = restrict(S, h)
    with _stage("monodromy"):
        M = classify_monodromy(andreev_data(Pl))
    if M.status == "inconclusive":
        raise JetBoundError(f"monodromy undecided: {M.reason}")
    if not M.is_monodromic():
        raise ValidationError(f"displacement needs a monodromic origin: {M.reason}")
    with _stage("displacement"):
        res = displacement(Pl, M.n, RHO_GRID)
    report["displacement"] = {
        "n": res.n,
        "period": res.T,
        "rho0": res.rho0,
        "d": res.d,
        "err": res.err,
        "floor": res.floor,
        "signs": res.sign_calls(),
        "lead_sign": res.lead_sign,
        "lead_exponent": res.lead_exponent,
        "interpretation": _interpret_displacement(res),
        "provenance": {"op": "displacement", "rule": "one-return-displacement"},
    }
    return report, EXIT_OK


def _interpret_displacement(res) -> str:
    if res.lead_sign == 0:
        return ("every sample is below the error floor: consistent with a "
                "center at this resolution (evidence, not a proof)")
    word = "outward (unstable side)" if res.lead_sign > 0 else "inward (stable side)"
    return (f"stable sign across the grid, orbits spiral {word}: focus-like "
            "behavior at this resolution (evidence, not a proof)")


# ---------------------------------------------------------------------------
# text rendering (same content as the JSON report)


def _fmt_float(v) -> str:
    return "none" if v is None else f"{v:.6e}"


def render_text(report: dict) -> str:
    L = []
    inp = report["input"]
    L.append(f"file: {inp['file']}")
    if inp["parameters"]:
        L.append("parameters: " + ", ".join(inp["parameters"]))
    if inp["bindings"]:
        L.append("bindings: " + ", ".join(f"{k} = {v}" for k, v in inp["bindings"].items()))
    if inp["assumptions"]:
        L.append("assumptions: " + "; ".join(inp["assumptions"]))
    L.append(f"lambda: {inp['lambda']}")
    L.append(f"working order: {report['order']}")
    if "center_manifold" in report:
        cm = report["center_manifold"]
        L.append("")
        L.append("center manifold (graph invariance equation, solved degree by degree):")
        L.append(f"  {cm['graph']}")
        L.append("  invariance defect rechecked: zero through the working order")
    if "restriction" in report:
        r = report["restriction"]
        L.append("")
        L.append("restriction to the graph:")
        L.append(f"  x' = {r['dx']}")
        L.append(f"  y' = {r['dy']}")
    if "andreev" in report:
        a = report["andreev"]
        L.append("")
        L.append("leading data of the restriction:")
        fi = a["f_leading_index"]
        L.append("  f vanishes identically to the computed order"
                 if fi == "flat" else
                 f"  f leads at index {fi} with coefficient {a['f_leading']}")
        di = a["divergence_leading_index"]
        L.append("  divergence trace vanishes identically to the computed order"
                 if di == "flat" else
                 f"  divergence trace leads at index {di} with coefficient "
                 f"{a['divergence_leading']}")
        if a["n"] is not None:
            L.append(f"  Andreev number n = {a['n']}")
            L.append(f"  discriminant b~^2 + 4 n a~ = {a['discriminant']}")
    if "monodromy" in report:
        m = report["monodromy"]
        L.append("")
        case = f" ({m['case']} case)" if m["case"] else ""
        L.append(f"monodromy: {m['status']}{case} [{RULE_NAMES['andreev-monodromy-criterion']}]")
        L.append(f"  {m['reason']}")
        for c in m["conditions"]:
            L.append(f"  requires: {c}")
    if "obstructions" in report:
        o = report["obstructions"]
        L.append("")
        L.append(f"obstructions omega_3 .. omega_{o['to']} "
                 "(formal first-integral construction):")
        first = o["first_nonzero"]
        for k in sorted(o["values"], key=int):
            mark = ""
            if first is not None and int(k) == first["index"]:
                mark = f"   <- first nonzero ({first['parity']} index)"
            L.append(f"  omega_{k} = {o['values'][k]}{mark}")
        if first is None:
            L.append("  all computed obstructions vanish")
        L.append("  defining residual rechecked: zero through the working order")
    if "verdict" in report:
        v = report["verdict"]
        L.append("")
        L.append(f"verdict: {v['status']} [{v.get('rule_name', v['rule'])}]")
        if v.get("detail"):
            L.append(f"  {v['detail']}")
        if v.get("surface"):
            L.append(f"  invariant surface: {v['surface']}")
        if v.get("symmetries"):
            L.append("  reversibility: " + ", ".join(v["symmetries"]))
        if v.get("hamiltonian"):
            L.append(f"  restricted Hamiltonian: {v['hamiltonian']}")
        for c in v.get("conditions", ()):
            L.append(f"  requires: {c}")
    if "corroboration" in report:
        c = report["corroboration"]
        L.append("")
        L.append("numeric corroboration (one-return displacement):")
        if "error" in c:
            L.append(f"  unavailable: {c['error']}")
        else:
            L.extend(_displacement_lines(c))
            if c["agrees_with_verdict"] is not None:
                L.append("  agreement with the verdict: "
                         + ("yes" if c["agrees_with_verdict"] else
                            "NO (investigate: evidence contradicts the verdict)"))
    if "normal_form" in report:
        nf = report["normal_form"]
        L.append("")
        L.append(f"normal form through order {nf['order']}:")
        L.append(f"  shape: {nf['shape']}")
        L.append(f"  P1 = {nf['P1']}")
        L.append(f"  Q2 = {nf['Q2']}")
        L.append(f"  R1 = {nf['R1']}")
        L.append("  transform (old coordinates in terms of new):")
        for vname in ("x", "y", "z"):
            L.append(f"    {vname} = {nf['transform'][vname]}")
        L.append("  conjugacy residual rechecked: zero through the working order")
        L.append(f"  pattern: {nf['pattern']['text']}")
        for c in nf.get("conditions", ()):
            L.append(f"  requires: {c}")
    if "displacement" in report:
        d = report["displacement"]
        L.append("")
        L.append("one-return displacement (numeric):")
        L.extend(_displacement_lines(d))
        L.append(f"  {d['interpretation']}")
    return "\n".join(L) + "\n"


def _displacement_lines(d: dict) -> list:
    L = [f"  Andreev number n = {d['n']}, return time T = {d['period']:.12f}"]
    for r0, dv, ev, flo, s in zip(d["rho0"], d["d"], d["err"], d["floor"], d["signs"]):
        call = {1: "+", -1: "-", 0: "below floor"}[s]
        L.append(f"  rho0 = {r0:g}: d = {dv: .6e} (err {_fmt_float(ev)}, "
                 f"floor {_fmt_float(flo)}, sign {call})")
    L.append(f"  leading sign: {d['lead_sign']:+d}" if d["lead_sign"] else
             "  leading sign: not callable (all samples below floor)")
    if d["lead_exponent"] is not None:
        L.append(f"  leading exponent (log-log slope): {d['lead_exponent']:.4f}")
    return L


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nilcenter",
        description="Center problem at a nilpotent singular point on a "
                    "center manifold: analyze a .sys file or run one stage.")
    sub = p.add_subparsers(dest="cmd", required=True)
    specs = [
        ("analyze", cmd_analyze, "full pipeline: manifold, monodromy, "
                                 "obstructions, verdict"),
        ("cm", cmd_cm, "center-manifold jet and the planar restriction"),
        ("omega", cmd_omega, "obstruction series with the first nonzero "
                             "quantity highlighted"),
        ("nf", cmd_nf, "resonant normal form with an exact conjugacy check"),
        ("focal", cmd_focal, "numeric one-return displacement on the "
                             "restriction"),
    ]
    for name, func, help_text in specs:
        q = sub.add_parser(name, help=help_text)
        q.add_argument("file", help="input system in the .sys grammar")
        q.add_argument("--order", type=int, default=None,
                       help="working order (default: the file's order header, "
                            "else 12 numeric / 8 symbolic; capped by "
                            f"{MAX_ORDER_ENV}, default {DEFAULT_MAX_ORDER})")
        q.add_argument("--json", action="store_true",
                       help="emit the report as JSON instead of text")
        q.add_argument("--numeric", action="append", metavar="k=v,...",
                       help="bind parameters to rationals (repeatable)")
        q.add_argument("--assume", action="append", metavar="EXPR(<|>|!=)0",
                       help="record a sign assumption on the parameters "
                            "(repeatable)")
        q.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except JetBoundError as e:
        print(f"inconclusive at this order: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (ValidationError, FrameError, OrderError, NumericsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(json.dumps(report, indent=2) + "\n" if args.json
                     else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Commands: classify, qtable, cs, minimal {decide|enumerate|structure},
stropicalize, selftest.  All payloads are JSON with sorted keys (stable
across runs); --pretty switches to indented output and aligned tables.
Exit codes: 0 success, 1 property violation, 2 parse error, 3
precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import ParseError, PreconditionError, PropertyViolation, StqfError
from .formats import Instance, form_from_json, parse_rational
from .minimal import big_support_structure, enumerate_minimal, is_q_minimal
from .oracle import oracle_companion_valid, witness_values
from .quadratic import QuadraticPair, default_companion
from .semiring import Elem, T, G, ZERO, ValueGroup, group_from_name
from .stropicalize import (
    RationalForm,
    Supervaluation,
    example_case_label,
    stropicalize_form,
    verify_prediction,
)
from .tmodule import Vector, unit
from .trig import CaseParameters, case_parameters, classify_pair, cs_ratio, q_value_table


def _load_instance(path: str, group_flag: str | None) -> Instance:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if isinstance(obj, dict) and "form" not in obj and "rank" in obj and "diag" in obj:
        obj = {"form": obj}
    inst = Instance.from_json(obj)
    if group_flag:
        inst.group = group_from_name(group_flag)
    return inst


def _pair_for(inst: Instance) -> QuadraticPair:
    pair = inst.pair()
    if inst.companion is not None:
        if not oracle_companion_valid(pair, inst.group):
            raise PreconditionError("supplied companion fails the companion law")
    return pair


def _vectors_for(inst: Instance, args) -> tuple[Vector, Vector]:
    if args.x is not None:
        x = Vector.parse(args.x)
    elif "x" in inst.vectors:
        x = inst.vectors["x"]
    else:
        x = unit(inst.form.rank, 0)
    if args.y is not None:
        y = Vector.parse(args.y)
    elif "y" in inst.vectors:
        y = inst.vectors["y"]
    else:
        y = unit(inst.form.rank, 1)
    return x, y


def _params_json(params: CaseParameters) -> dict:
    def opt(e):
        return None if e is None else str(e)

    return {"zeta": opt(params.zeta), "eta": opt(params.eta),
            "xi": None if params.xi is None else str(Fraction(params.xi)),
            "sigma": opt(params.sigma), "tau": opt(params.tau),
            "swapped": params.swapped}


def _emit(payload, pretty: bool) -> None:
    if pretty:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(json.dumps(payload, sort_keys=True))


def _cmd_classify(args) -> int:
    inst = _load_instance(args.instance, args.group)
    pair = _pair_for(inst)
    x, y = _vectors_for(inst, args)
    cls = classify_pair(pair, x, y, inst.group)
    a1, a2, al = pair.q(x), pair.q(y), pair.b(x, y)
    params = case_parameters(a1, a2, al, inst.group)
    report = {
        "case": params.label,
        "quasilinear": cls.quasilinear,
        "refinement": cls.refinement.value,
        "rigidity": cls.rigidity.value,
        "cs_ratio": None if cls.cs is None else str(cls.cs),
        "presentation": {"q_x": str(a1), "q_y": str(a2), "b_xy": str(al)},
        "params": _params_json(params),
    }
    _emit(report, args.pretty)
    return 0


def _cmd_cs(args) -> int:
    inst = _load_instance(args.instance, args.group)
    pair = _pair_for(inst)
    x, y = _vectors_for(inst, args)
    _emit({"cs_ratio": str(cs_ratio(pair, x, y))}, args.pretty)
    return 0


def _table_points(params: CaseParameters, group: ValueGroup):
    breaks = {0}
    for e in (params.zeta, params.eta, params.sigma, params.tau):
        if e is not None:
            breaks.add(Fraction(e.value))
    if params.xi is not None:
        breaks.add(Fraction(params.xi))
    values = witness_values(breaks, group)
    pts = []
    for mu in (T(0), G(0)):
        for w in values:
            pts.append((T(w), mu))
            pts.append((G(w), mu))
    pts.append((ZERO, T(0)))
    pts.append((T(values[0]), ZERO))
    return pts


def _cmd_qtable(args) -> int:
    inst = _load_instance(args.instance, args.group)
    if inst.form is None or inst.form.rank != 2:
        raise PreconditionError("qtable requires a binary form")
    q = inst.form
    a1, a2, al = q.alpha(0), q.alpha(1), q.beta(0, 1)
    params = case_parameters(a1, a2, al, inst.group)
    rows = []
    disagreements = 0
    for lam, mu in _table_points(params, inst.group):
        table = q_value_table(params, a1, a2, al, lam, mu)
        direct = q.eval(Vector.of(lam, mu))
        agree = table == direct
        disagreements += 0 if agree else 1
        rows.append({"lambda": str(lam), "mu": str(mu), "table": str(table),
                     "direct": str(direct), "agree": agree})
    if args.pretty:
        print(f"case {params.label}")
        widths = [10, 10, 12, 12, 6]
        header = ["lambda", "mu", "table", "direct", "agree"]
        print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for r in rows:
            cells = [r["lambda"], r["mu"], r["table"], r["direct"], str(r["agree"])]
            print("  ".join(c.ljust(w) for c, w in zip(cells, widths)))
    else:
        _emit({"case": params.label, "rows": rows,
               "disagreements": disagreements}, False)
    return 0 if disagreements == 0 else 1


def _parse_window(text: str):
    try:
        return [Fraction(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ParseError(f"malformed window {text!r} (expected e.g. '-1,0,1')") from None


def _structure_json(s) -> dict:
    return {"case": s.case, "J": sorted(i + 1 for i in s.J),
            "K": sorted(i + 1 for i in s.K),
            "checks": {k: v for k, v in sorted(s.checks.items())}}


def _cmd_minimal(args) -> int:
    inst = _load_instance(args.instance, args.group)
    if inst.form is None:
        raise PreconditionError("minimal commands require a form")
    q = inst.form
    group = inst.group
    if args.mode == "decide":
        x = Vector.parse(args.x) if args.x else inst.vectors.get("x")
        if x is None:
            raise PreconditionError("decide mode needs a vector (--x)")
        v = is_q_minimal(q, x, group)
        _emit({"x": str(x), "minimal": v.minimal, "rule": v.rule,
               "witness": None if v.witness is None else str(v.witness)},
              args.pretty)
        return 0
    if args.mode == "structure":
        x = Vector.parse(args.x) if args.x else inst.vectors.get("x")
        if x is None:
            raise PreconditionError("structure mode needs a vector (--x)")
        v = is_q_minimal(q, x, group)
        if not v.minimal:
            raise PreconditionError(
                f"not q-minimal: witness {v.witness} has the same q-value")
        s = big_support_structure(inst.pair(), x, group, assume_minimal=True)
        _emit(_structure_json(s), args.pretty)
        return 0
    # enumerate
    window = _parse_window(args.window)
    found = enumerate_minimal(q, window, group, jobs=args.jobs)
    pair = inst.pair()
    for x in found:
        v = is_q_minimal(q, x, group)
        entry = {"x": str(x), "q_of_x": str(q.eval(x)), "rule": v.rule,
                 "structure": None}
        if len(x.support()) >= 3:
            entry["structure"] = _structure_json(
                big_support_structure(pair, x, group, assume_minimal=True))
        print(json.dumps(entry, sort_keys=True))
    return 0


def _cmd_stropicalize(args) -> int:
    try:
        with open(args.input) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {args.input}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{args.input}: invalid JSON: {exc}") from None
    try:
        spec = obj["form"]
        shape = spec.get("shape", "general")
        rf = RationalForm.make(parse_rational(spec.get("alpha1", 0)),
                               parse_rational(spec.get("alpha", 0)),
                               parse_rational(spec.get("alpha2", 0)),
                               obj["base_change"])
        sv = Supervaluation(int(obj["prime"]))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"stropicalize input is missing fields: {exc}") from None
    pair = stropicalize_form(rf, sv)
    q = pair.form
    from .trig import classify_presentation
    cls = classify_presentation(q.alpha(0), q.alpha(1), q.beta(0, 1), sv.group)
    report = {
        "prime": sv.prime,
        "transformed": {"alpha1": str(q.alpha(0)), "alpha": str(q.beta(0, 1)),
                        "alpha2": str(q.alpha(1))},
        "quasilinear": cls.quasilinear,
        "refinement": cls.refinement.value,
        "cs_ratio": None if cls.cs is None else str(cls.cs),
    }
    if shape in ("A", "B"):
        pred = example_case_label(rf, sv, shape)
        report["case"] = pred.case
        report["prediction_verified"] = verify_prediction(pred, rf, sv)
        if pred.cancellation is not None:
            report["cross_cancellation"] = pred.cancellation
    _emit(report, args.pretty)
    if shape in ("A", "B") and not report["prediction_verified"]:
        return 1
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import format_report, run_selftest

    results = run_selftest(seed=args.seed, sizes=args.sizes, only=args.only,
                           jobs=args.jobs)
    if not results:
        raise ParseError(f"unknown criterion {args.only!r}")
    print(format_report(results))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=("int", "rat"), default=None,
                        help="value group override (default: instance file, else int)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--pretty", action="store_true")
    common.add_argument("--seed", type=int, default=42)

    ap = argparse.ArgumentParser(prog="stqf",
                                 description="supertropical quadratic forms toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common])
    p.add_argument("instance")
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("cs", parents=[common])
    p.add_argument("instance")
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(fn=_cmd_cs)

    p = sub.add_parser("qtable", parents=[common])
    p.add_argument("instance")
    p.set_defaults(fn=_cmd_qtable)

    p = sub.add_parser("minimal", parents=[common])
    p.add_argument("mode", choices=("decide", "enumerate", "structure"))
    p.add_argument("instance")
    p.add_argument("--x")
    p.add_argument("--window", default="-1,0,1")
    p.set_defaults(fn=_cmd_minimal)

    p = sub.add_parser("stropicalize", parents=[common])
    p.add_argument("input")
    p.set_defaults(fn=_cmd_stropicalize)

    p = sub.add_parser("selftest", parents=[common])
    p.add_argument("--only", default=None)
    p.add_argument("--sizes", choices=("small", "full"), default="full")
    p.set_defaults(fn=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return 3
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 1
    except StqfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

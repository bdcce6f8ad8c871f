"""Command-line front end.

Exit codes: 0 on success, 2 when a classification is indeterminate, 1 on
input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from .canonical import CATALOGUE, random_transform
from .classify import ClassifyOptions, classify, compare_signatures, signature_of
from .eqfile import InputError, format_equation, read_equation, read_transform
from .expr.errors import EvaluationExhausted, ExprError, UnsupportedExpression
from .expr.zerotest import MODES, IndeterminateRegime
from .fields import FieldError
from .geninv import DEFAULT_DEPTH
from .transform import apply

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE = 0, 1, 2


def _options(args) -> ClassifyOptions:
    return ClassifyOptions(zero_test=args.zero_test, samples=args.samples, seed=args.seed,
                           depth=args.depth, cross_check=args.cross_check)


def _job(path: str, transform_path: str | None, opts: ClassifyOptions):
    """Classify one file; returns (exit code, report dict or None, message)."""
    try:
        eq = read_equation(path)
        t = read_transform(transform_path) if transform_path else None
        if t is not None:
            eq = apply(eq, t)
    except (InputError, ExprError) as e:
        return EXIT_INPUT, None, str(e)
    try:
        rep = classify(eq, opts)
    except UnsupportedExpression as e:
        return EXIT_INPUT, None, f"{path}: {e}"
    except (IndeterminateRegime, EvaluationExhausted, FieldError) as e:
        return EXIT_INDETERMINATE, None, f"{path}: classification indeterminate: {e}"
    out = rep.to_json()
    out["source"] = path
    if t is not None:
        out["transform"] = str(t)
    return EXIT_OK, out, ""


def _run_jobs(paths, transform_path, opts, jobs):
    if jobs <= 1 or len(paths) <= 1:
        return [_job(p, transform_path, opts) for p in paths]
    with ProcessPoolExecutor(max_workers=min(jobs, len(paths))) as pool:
        futures = [pool.submit(_job, p, transform_path, opts) for p in paths]
        return [f.result() for f in futures]  # input order


def _text_report(rep: dict) -> str:
    lines = [f"== {rep['source']}", f"case: {rep['case']}"]
    if rep["subcase"]:
        lines.append(f"subcase: {rep['subcase']}")
    lines.append(f"symmetry dimension: {rep['symmetry_dimension']} ({rep['verdict']})")
    if rep["structure"]:
        lines.append(f"structure: {rep['structure']}")
    for inv in rep["invariants"]:
        tag = f"constant = {inv['value']}" if inv["constant"] else "not constant"
        lines.append(f"  {inv['name']} [{tag}] = {inv['expression']}")
    for d in rep["diagnostics"]:
        lines.append(f"  note: {d}")
    lines.append(f"assumptions: {', '.join(rep['assumptions'])}")
    return "\n".join(lines)


def _exit_code(codes) -> int:
    if EXIT_INPUT in codes:
        return EXIT_INPUT
    return EXIT_INDETERMINATE if EXIT_INDETERMINATE in codes else EXIT_OK


def _emit(results, out, err, render) -> int:
    """Print each report with ``render``, errors to ``err``, in input order."""
    for rc, rep, msg in results:
        if rc:
            print(msg, file=err)
        else:
            print(render(rep), file=out)
    return _exit_code([r[0] for r in results])


def cmd_classify(args, out, err) -> int:
    results = _run_jobs(args.files, args.transform, _options(args), args.jobs)
    render = json.dumps if args.format == "json" else _text_report
    return _emit(results, out, err, render)


def _signature_dict(rep: dict) -> dict:
    consts = sorted((i["name"], i["value"]) for i in rep["invariants"]
                    if i["constant"] and i["weight"] == 0)
    return {"source": rep["source"], "case": rep["case"], "subcase": rep["subcase"],
            "constants": [{"name": n, "value": v} for n, v in consts]}


def cmd_signature(args, out, err) -> int:
    results = _run_jobs(args.files, args.transform, _options(args), args.jobs)
    code = _emit(results, out, err, lambda r: json.dumps(_signature_dict(r)))
    if code == EXIT_OK and len(results) == 2:
        a, b = (_signature_dict(r[1]) for r in results)
        same = all(a[k] == b[k] for k in ("case", "subcase", "constants"))
        print(json.dumps({"comparison": "not excluded" if same else "inequivalent"}),
              file=out)
    return code


def cmd_transform(args, out, err) -> int:
    if not args.transform:
        print("transform needs --transform <file>", file=err)
        return EXIT_INPUT
    try:
        t = read_transform(args.transform)
        for path in args.files:
            eq = apply(read_equation(path), t)
            out.write(format_equation(eq))
    except (InputError, ExprError) as e:
        print(str(e), file=err)
        return EXIT_INPUT
    return EXIT_OK


def cmd_selftest(args, out, err) -> int:
    """Classify every built-in canonical form, then each under seeded transforms."""
    opts = _options(args)
    rng = random.Random(args.seed)
    failed = 0
    for form in CATALOGUE:
        rep = classify(form.equation(), opts)
        got = (rep.case_id, rep.subcase, rep.symmetry_dimension, rep.structure)
        want = (form.case_id, form.subcase, form.dimension, form.structure)
        ok = got == want
        line = f"{'PASS' if ok else 'FAIL'} {form.name}: {rep.case_id}, dimension {rep.symmetry_dimension}"
        if form.primary and ok:
            sig = signature_of(rep)
            for _ in range(args.transforms):
                t = random_transform(form, rng)
                moved = signature_of(classify(apply(form.equation(), t), opts))
                same = compare_signatures(sig, moved) == "not excluded"
                ok = ok and same
            line = (f"{'PASS' if ok else 'FAIL'} {form.name}: {rep.case_id}, dimension "
                    f"{rep.symmetry_dimension}, stable under {args.transforms} transforms")
        failed += not ok
        print(line, file=out)
    print(f"{len(CATALOGUE) - failed}/{len(CATALOGUE)} canonical forms passed", file=out)
    return EXIT_OK if not failed else EXIT_INDETERMINATE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zero-test", choices=MODES, default="auto",
                        help="identical-vanishing test mode (default: auto)")
    common.add_argument("--samples", type=int, default=12,
                        help="sample points per probabilistic zero test")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH,
                        help="derivative-sequence depth cap")
    common.add_argument("--cross-check", action="store_true",
                        help="run sampling next to every exact zero test")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--transform", metavar="FILE",
                        help="apply this point transform before classifying")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for batch input")

    p = argparse.ArgumentParser(prog="pointequiv",
                                description="Point classification of y'' = P + 3Q y' + 3R y'^2 + S y'^3.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (("classify", cmd_classify, "classify equation files"),
                               ("signature", cmd_signature, "invariant signatures"),
                               ("transform", cmd_transform, "print transformed equations")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("files", nargs="+", metavar="FILE")
        sp.set_defaults(func=fn)
    st = sub.add_parser("selftest", parents=[common], help="check the built-in canonical forms")
    st.add_argument("--transforms", type=int, default=1,
                    help="random transforms per representative")
    st.set_defaults(func=cmd_selftest)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "samples", 1) < 1 or getattr(args, "depth", 0) < 0:
        print("--samples must be positive and --depth non-negative", file=err)
        return EXIT_INPUT
    return args.func(args, out, err)


def main() -> None:
    sys.exit(run())

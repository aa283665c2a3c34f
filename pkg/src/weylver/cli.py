"""``weylver`` command line: run verification suites and evaluate expressions."""
from __future__ import annotations

import argparse
import json
import sys

from .cocycle import tau_eval
from .hochschild import ChainTensor
from .lie import GlWeylElement, WedgeTuple, theta_eval
from .parsing import ParseError, parse_weyl_expression, scalar_to_json
from .scalars import as_scalar
from .suites import MAX_N, MAX_NN, SUITES, CapError, SuiteReport, emit_report, run_suite
from .weyl import WeylElement, moyal

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=1, help="number of canonical pairs (p_i, q_i)")
    p.add_argument("--N", type=int, default=1, help="matrix size of gl_N")
    p.add_argument("--deg", type=int, default=None, help="y-degree cap (suite default if omitted)")
    p.add_argument("--cases", type=int, default=None, help="number of random cases")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--override-caps", action="store_true", help=f"allow n > {MAX_N} or N > {MAX_NN}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylver", description="Exact checks for the Weyl-algebra trace cocycle.")
    parser.add_argument("--list-suites", action="store_true", help="print the suite names and exit")
    sub = parser.add_subparsers(dest="command")

    v = sub.add_parser("verify", help="run one suite")
    v.add_argument("suite")
    _add_params(v)
    v.add_argument("--self-test", action="store_true", help="append a deliberately failing case")
    v.add_argument("--output", help="write the report here instead of stdout")

    e = sub.add_parser("eval", help="evaluate tau, a Moyal product or Theta")
    e.add_argument("what", choices=("tau", "moyal", "theta"))
    e.add_argument("expression", help="chain 'a0 | a1 | ...', product 'f | g', or wedge 'v1 ; v2 ; ...'")
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--N", type=int, default=1)
    e.add_argument("--target", default="1", help="argument of the Theta functional")
    e.add_argument("--format", choices=("json", "text"), default="text")
    e.add_argument("--override-caps", action="store_true")

    r = sub.add_parser("report", help="run several suites and emit one combined report")
    r.add_argument("suites", nargs="*", help="suite names (all if omitted)")
    _add_params(r)
    r.add_argument("--output")
    return parser


def _check_caps(n: int, N: int, override: bool) -> None:
    if not override and (n > MAX_N or N > MAX_NN):
        raise _UsageError(f"n={n}, N={N} exceeds the supported range n <= {MAX_N}, N <= {MAX_NN} (use --override-caps)")


def _write(data: bytes, path: str | None) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _run(args, name: str, inject: bool = False) -> SuiteReport:
    return run_suite(
        name,
        n=args.n,
        N=args.N,
        deg=args.deg,
        cases=args.cases,
        seed=args.seed,
        override_caps=args.override_caps,
        inject_failure=inject,
    )


def _cmd_verify(args) -> int:
    report = _run(args, args.suite, args.self_test)
    _write(emit_report(report, args.format), args.output)
    return EXIT_PASS if report.ok else EXIT_FAIL


def _cmd_report(args) -> int:
    names = args.suites or list(SUITES)
    reports = [_run(args, name) for name in names]
    if args.format == "json":
        docs = [json.loads(emit_report(r, "json")) for r in reports]
        summary = {
            "suites": len(reports),
            "suites_failed": sum(1 for r in reports if not r.ok),
            "cases": sum(r.summary["total"] for r in reports),
            "cases_failed": sum(r.summary["failed"] for r in reports),
        }
        data = (json.dumps({"summary": summary, "reports": docs}, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    else:
        data = b"".join(emit_report(r, "text") for r in reports)
    _write(data, args.output)
    return EXIT_PASS if all(r.ok for r in reports) else EXIT_FAIL


def _cmd_eval(args) -> int:
    obj = parse_weyl_expression(args.expression, args.n, args.N)
    n = args.n or (obj.n if not isinstance(obj, WedgeTuple) else obj[0].n)
    _check_caps(n, args.N, args.override_caps)
    if args.what == "tau":
        if not isinstance(obj, ChainTensor):
            raise _UsageError("tau needs a chain 'a0 | a1 | ...'")
        if obj.k % 2:
            raise _UsageError(f"tau needs an even number of slots after a0, got {obj.k}")
        value = tau_eval(obj.k // 2, obj)
    elif args.what == "moyal":
        if not isinstance(obj, ChainTensor) or obj.k != 1:
            raise _UsageError("moyal needs two factors 'f | g'")
        ((slots, coeff),) = obj.items()
        value = moyal(slots[0], slots[1]).scale(coeff)
    else:
        if not isinstance(obj, WedgeTuple):
            raise _UsageError("theta needs a wedge 'v1 ; v2 ; ...'")
        if obj.arity % 2:
            raise _UsageError("theta needs an even number of arguments")
        target = parse_weyl_expression(args.target, n, args.N)
        if isinstance(target, WeylElement):
            target = GlWeylElement.scalar(args.N, target)
        if not isinstance(target, GlWeylElement):
            raise _UsageError("the target must be a single expression")
        value = theta_eval(obj.arity // 2, args.N, obj, target)
    if args.format == "json":
        rendered = scalar_to_json(value) if not isinstance(value, WeylElement) else str(value)
        doc = {"op": args.what, "input": args.expression, "value": rendered}
        _write((json.dumps(doc, ensure_ascii=False) + "\n").encode("utf-8"), None)
    else:
        _write(f"{as_scalar(value) if not isinstance(value, WeylElement) else value}\n".encode("utf-8"), None)
    return EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if args.list_suites:
        print("\n".join(SUITES))
        return EXIT_PASS
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "report":
            return _cmd_report(args)
        return _cmd_eval(args)
    except (ParseError, CapError, _UsageError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"weylver: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

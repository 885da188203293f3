"""Command-line front end.

Commands:
  eval      evaluate a determinant/permanent variant on a matrix file
  reduce    run a reduction pipeline and compare against its oracle
  hadamard  coefficient-wise product of a variant with a filter ABP file
  verify    run the invariant suites

Exit codes: 0 success/match, 1 mismatch or failing check, 2 malformed input,
3 budget or characteristic refusal.  stdout is byte-deterministic for fixed
inputs and seed; timings go to stderr and to --json-out files only.

Matrix file: {"n": 2, "ring": {"kind": "rational"}, "entries": ["1", "2",
"3", "4"]} with row-major canonical entry strings.  Ring kinds: rational,
prime-field (p), matrix (dim, inner), clifford (m).  Digraph file: {"n": 4,
"arcs": [[1, 2], [2, 3]]} with 1-indexed arcs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .abp import Abp
from .algebra import (
    PrimeField,
    RationalField,
    ring_from_descriptor,
    ring_to_descriptor,
)
from .determinants import VARIANTS, Digraph, commutative_perm, ham_count
from .errors import (
    BudgetExceededError,
    CharacteristicError,
    NcdetError,
    NcdetInputError,
)
from .reductions import (
    ReductionReport,
    hadamard_eval,
    hamcycles_via_moore,
    perm_via_cayley,
    perm_via_clifford,
    perm_via_sdet,
)
from .suites import SUITES, run_suite

PIPELINES = ("perm-cayley", "perm-sdet", "perm-clifford", "hamcycles-moore")


def _print_json(data: dict) -> None:
    sys.stdout.write(json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n")


def _write_json_out(path: str | None, data: dict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(data, handle, sort_keys=True, indent=2)
            handle.write("\n")


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise NcdetInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise NcdetInputError(f"{path} is not valid JSON: {exc}") from exc


def _ring_from_args(args):
    if args.ring is None:
        return None
    if args.ring == "rational":
        return RationalField()
    if args.ring == "fp":
        if args.mod is None:
            raise NcdetInputError("--ring fp requires --mod")
        return PrimeField(args.mod)
    raise NcdetInputError(f"unknown ring: {args.ring!r}")


def _load_matrix(path: str, args):
    data = _load_json(path)
    try:
        n = int(data["n"])
        ring_desc = data["ring"]
        entries = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise NcdetInputError(f"malformed matrix file {path}: {exc}") from exc
    override = _ring_from_args(args)
    ring = override if override is not None else ring_from_descriptor(ring_desc)
    if not isinstance(entries, list) or len(entries) != n * n:
        raise NcdetInputError(f"expected {n * n} entries in {path}")
    values = [ring.parse(str(text)) for text in entries]
    rows = [values[i * n : (i + 1) * n] for i in range(n)]
    return ring, rows


def _load_digraph(path: str) -> Digraph:
    data = _load_json(path)
    try:
        return Digraph.from_arcs(int(data["n"]), data["arcs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise NcdetInputError(f"malformed digraph file {path}: {exc}") from exc


def cmd_eval(args) -> int:
    from .determinants import RingGrid

    ring, rows = _load_matrix(args.input, args)
    grid = RingGrid.from_rows(ring, rows)
    started = time.perf_counter()
    value = VARIANTS[args.variant](
        grid, budget=args.budget_factorial, workers=args.workers
    )
    elapsed = time.perf_counter() - started
    rendered = ring.render(value)
    sys.stdout.write(rendered + "\n")
    sys.stderr.write(f"# eval {args.variant} n={grid.n} in {elapsed:.3f}s\n")
    _write_json_out(
        args.json_out,
        {
            "command": "eval",
            "variant": args.variant,
            "n": grid.n,
            "ring": ring_to_descriptor(ring),
            "value": rendered,
            "seconds": round(elapsed, 6),
        },
    )
    return 0


def _report_exit(report: ReductionReport, args) -> int:
    _print_json(report.as_dict(include_timing=False))
    sys.stderr.write(f"# {report.pipeline} in {report.seconds:.3f}s\n")
    _write_json_out(args.json_out, report.as_dict(include_timing=True))
    return 0 if report.match else 1


def cmd_reduce(args) -> int:
    started = time.perf_counter()
    if args.pipeline == "hamcycles-moore":
        digraph = _load_digraph(args.input)
        ring = _ring_from_args(args) or RationalField()
        value = hamcycles_via_moore(
            digraph, ring, budget=args.budget_factorial, workers=args.workers
        )
        oracle = ring.from_int(ham_count(digraph))
        report = ReductionReport(
            pipeline=args.pipeline,
            input_desc=f"digraph n={digraph.n} arcs={len(digraph.arcs)}",
            output=ring.render(value),
            oracle=ring.render(oracle),
            match=value == oracle,
            seconds=time.perf_counter() - started,
        )
        return _report_exit(report, args)
    ring, rows = _load_matrix(args.input, args)
    n = len(rows)
    if args.pipeline == "perm-cayley":
        value = perm_via_cayley(
            rows, ring, budget=args.budget_factorial, workers=args.workers
        )
        oracle = commutative_perm(rows)
        report = ReductionReport(
            pipeline=args.pipeline,
            input_desc=f"matrix n={n} over {ring.name()}",
            output=ring.render(value),
            oracle=ring.render(oracle),
            match=value == oracle,
            seconds=time.perf_counter() - started,
        )
        return _report_exit(report, args)
    if args.pipeline == "perm-sdet":
        value = perm_via_sdet(
            rows, ring, budget=args.budget_factorial, workers=args.workers
        )
        oracle = commutative_perm(rows)
        report = ReductionReport(
            pipeline=args.pipeline,
            input_desc=f"matrix n={n} over {ring.name()}",
            output=ring.render(value),
            oracle=ring.render(oracle),
            match=value == oracle,
            seconds=time.perf_counter() - started,
        )
        return _report_exit(report, args)
    if args.pipeline == "perm-clifford":
        if not isinstance(ring, RationalField):
            raise NcdetInputError("perm-clifford requires a rational matrix")
        result = perm_via_clifford(rows, ell=args.ell, workers=args.workers)
        perm_oracle = commutative_perm(rows)
        rational = RationalField()
        report = ReductionReport(
            pipeline=args.pipeline,
            input_desc=f"matrix n={n} over Q",
            output=rational.render(result.recovered_perm_sq),
            oracle=rational.render(perm_oracle * perm_oracle),
            match=result.recovered_perm_sq == perm_oracle * perm_oracle,
            seconds=time.perf_counter() - started,
            extra={
                "norm_sq": rational.render(result.norm_sq),
                "ell": str(result.ell),
                "padded_n": str(result.padded_n),
            },
        )
        return _report_exit(report, args)
    raise NcdetInputError(f"unknown pipeline: {args.pipeline!r}")


def cmd_hadamard(args) -> int:
    ring, rows = _load_matrix(args.input, args)
    program = Abp.from_json_dict(_load_json(args.abp))
    grid = program.grid
    n = len(rows)
    if grid.rows != n or grid.cols != n:
        raise NcdetInputError(
            f"filter grid is {grid.rows}x{grid.cols}, matrix is {n}x{n}"
        )
    assignment = {
        grid.index(i, j): rows[i - 1][j - 1]
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    }
    variant = VARIANTS[args.variant]
    started = time.perf_counter()

    def blackbox(block_grid):
        return variant(block_grid, budget=args.budget_factorial, workers=args.workers)

    value = hadamard_eval(blackbox, program, assignment, ring)
    elapsed = time.perf_counter() - started
    rendered = ring.render(value)
    sys.stdout.write(rendered + "\n")
    sys.stderr.write(f"# hadamard {args.variant} n={n} in {elapsed:.3f}s\n")
    _write_json_out(
        args.json_out,
        {
            "command": "hadamard",
            "variant": args.variant,
            "n": n,
            "ring": ring_to_descriptor(ring),
            "value": rendered,
            "seconds": round(elapsed, 6),
        },
    )
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suites == "all" else [args.suites]
    started = time.perf_counter()
    all_results = []
    for suite in names:
        results = run_suite(suite, nmax=args.nmax, seed=args.seed)
        for result in results:
            line = f"check {suite}/{result.name}: "
            line += "PASS" if result.passed else f"FAIL ({result.detail})"
            sys.stdout.write(line + "\n")
        passed = sum(1 for r in results if r.passed)
        failed = len(results) - passed
        sys.stdout.write(f"suite {suite}: {passed} passed, {failed} failed\n")
        all_results.extend(results)
    ok = all(r.passed for r in all_results)
    sys.stdout.write("verify: OK\n" if ok else "verify: FAIL\n")
    sys.stderr.write(f"# verify in {time.perf_counter() - started:.3f}s\n")
    _write_json_out(
        args.json_out,
        {
            "command": "verify",
            "nmax": args.nmax,
            "seed": args.seed,
            "checks": [
                {
                    "suite": r.suite,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                }
                for r in all_results
            ],
            "passed": ok,
        },
    )
    return 0 if ok else 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ring", choices=["rational", "fp"], default=None,
                        help="override the input file's ring")
    parser.add_argument("--mod", type=int, default=None,
                        help="prime modulus for --ring fp")
    parser.add_argument("--budget-factorial", type=int, default=None,
                        help="override the factorial enumeration budget")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker processes for the generic enumeration")
    parser.add_argument("--json-out", default=None,
                        help="write a JSON report (with timings) to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncdet-lab",
        description="exact noncommutative determinants, permanents, reductions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a variant on a matrix file")
    p_eval.add_argument("variant", choices=sorted(VARIANTS))
    p_eval.add_argument("input", help="matrix JSON file")
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_reduce = sub.add_parser("reduce", help="run a reduction pipeline")
    p_reduce.add_argument("pipeline", choices=PIPELINES)
    p_reduce.add_argument("input", help="matrix or digraph JSON file")
    p_reduce.add_argument("--ell", type=int, default=None,
                          help="Clifford system size for perm-clifford")
    _add_common(p_reduce)
    p_reduce.set_defaults(func=cmd_reduce)

    p_had = sub.add_parser(
        "hadamard", help="variant o custom filter ABP, evaluated at a matrix"
    )
    p_had.add_argument("variant", choices=sorted(VARIANTS))
    p_had.add_argument("--abp", required=True, help="filter ABP JSON file")
    p_had.add_argument("--input", required=True, help="matrix JSON file")
    _add_common(p_had)
    p_had.set_defaults(func=cmd_hadamard)

    p_verify = sub.add_parser("verify", help="run invariant suites")
    p_verify.add_argument(
        "--suites", choices=["all", *sorted(SUITES)], default="all"
    )
    p_verify.add_argument("--nmax", type=int, default=3)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json-out", default=None)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except NcdetInputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except (BudgetExceededError, CharacteristicError) as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 3
    except NcdetError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except Exception as exc:  # pragma: no cover - unexpected failure
        sys.stderr.write(f"unexpected error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``polybimatroid {solve,bench,check,params}``.

Exit codes: 0 success, 1 usage or input error, 2 infeasible instance,
3 verification mismatch or failed certification.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .bisets import GroundSet
from .errors import ReadingsError
from .experiments import (
    ExperimentConfig,
    Report,
    derive_params,
    generate_instance,
    load_discrete,
    run_experiments,
    solve_instance,
    stream,
)
from .entropy import EntropyOracle
from .master import MasterInstance
from .verify import MAX_CHECK_N, check_ando, check_direct

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_MISMATCH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _id_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated location ids, got {text!r}")


def _common(p: argparse.ArgumentParser, *, many: bool = False) -> None:
    p.add_argument("--data", default="synthetic", help="readings CSV, or a bundled fixture: table1, synthetic")
    nargs = "+" if many else None
    p.add_argument("--n", type=int, nargs=nargs, help="locations to sample")
    p.add_argument("--t", type=int, nargs=nargs, help="timesteps to sample")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polybimatroid", description="Constrained bisubmodular minimization by poly-bimatroid cuts.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one instance")
    _common(p)
    p.add_argument("--s1", type=_id_list, help="outer type-1 locations (ids as in the file)")
    p.add_argument("--s2", type=_id_list, help="outer type-2 locations")
    p.add_argument("--b1p", type=int)
    p.add_argument("--b2p", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--verify", action="store_true", help="cross-check against brute force (n <= 10)")
    p.add_argument("--format", choices=("text", "csv"), default="text")

    p = sub.add_parser("bench", help="batch of random instances per (n, t) cell")
    _common(p, many=True)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", help="also write per-instance CSV rows here")

    p = sub.add_parser("check", help="certify bisubmodularity of a data file's entropy function")
    _common(p)

    p = sub.add_parser("params", help="print the instance parameters for n")
    p.add_argument("--n", type=int, nargs="+", required=True)
    return parser


def _cmd_params(args) -> int:
    print("n,b1,b2,b1p,b2p,w")
    for n in args.n:
        try:
            p = derive_params(n)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"{n},{p.b1},{p.b2},{p.b1p},{p.b2p},{p.w}")
    return EXIT_OK


def _explicit_instance(args) -> tuple[EntropyOracle, MasterInstance]:
    readings = load_discrete(args.data)
    index = {loc: i for i, loc in enumerate(readings.locations)}
    unknown = [v for v in args.s1 + args.s2 if v not in index]
    if unknown:
        raise ValueError(f"unknown location ids {unknown}")
    missing = [k for k in ("b1p", "b2p", "w") if getattr(args, k) is None]
    if missing:
        raise ValueError(f"--s1/--s2 also need {', '.join('--' + k for k in missing)}")
    inst = MasterInstance(
        GroundSet(readings.n),
        frozenset(index[v] for v in args.s1),
        frozenset(index[v] for v in args.s2),
        args.b1p,
        args.b2p,
        args.w,
    )
    return EntropyOracle(readings), inst


def _cmd_solve(args) -> int:
    if args.s1 is not None or args.s2 is not None:
        args.s1, args.s2 = args.s1 or [], args.s2 or []
        oracle, inst = _explicit_instance(args)
        ids = dict(n=oracle.n, t=oracle.readings.t, rep=0)
    else:
        if args.n is None or args.t is None:
            raise ValueError("give either --s1/--s2 with --b1p/--b2p/--w, or --n and --t")
        cfg = ExperimentConfig(args.n, args.t, 1, args.seed, args.epsilon, args.data)
        oracle, inst = generate_instance(cfg, stream(args.seed, args.n, args.t, 0))
        ids = dict(n=args.n, t=args.t, rep=0)
    result = solve_instance(oracle, inst, args.epsilon, args.verify, **ids)
    if result.error:
        print(result.error, file=sys.stderr)
        return EXIT_INFEASIBLE
    report = Report([result])
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        s = result.stats
        print(f"value      {result.value:.6f}")
        print(f"incumbent  {result.incumbent}")
        print(f"iterations {s.iterations}")
        print(f"cuts       {s.cut_count}")
        print(f"nodes      {s.node_count}")
        print(f"time (s)   {s.wall_time:.4f}")
        if result.brute_force is not None:
            print(f"brute force {result.brute_force:.6f}")
    if result.mismatch:
        print(f"verification mismatch: dcg {result.value!r} vs brute force {result.brute_force!r}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_bench(args) -> int:
    ns = args.n or [5]
    ts = args.t or [10]
    report = Report()
    for n in ns:
        for t in ts:
            cfg = ExperimentConfig(n, t, args.reps, args.seed, args.epsilon, args.data)
            report.results.extend(run_experiments(cfg, verify=args.verify).results)
    sys.stdout.write(report.to_csv() if args.format == "csv" else report.to_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    if report.mismatches:
        print(f"{len(report.mismatches)} verification mismatch(es)", file=sys.stderr)
        return EXIT_MISMATCH
    if report.failures:
        print(f"{len(report.failures)} instance(s) failed", file=sys.stderr)
        if all(r.error.startswith("infeasible") for r in report.failures):
            return EXIT_INFEASIBLE
        return EXIT_USAGE
    return EXIT_OK


def _cmd_check(args) -> int:
    readings = load_discrete(args.data)
    if args.n is not None or readings.n > MAX_CHECK_N:
        n = args.n or MAX_CHECK_N
        t = args.t or readings.t
        if n > MAX_CHECK_N:
            raise ValueError(f"exhaustive check limited to n <= {MAX_CHECK_N}")
        rng = stream(args.seed, n, t, 0)
        rows = sorted(rng.choice(readings.n, size=n, replace=False))
        cols = sorted(rng.choice(readings.t, size=t, replace=False))
        readings = readings.subset(rows, cols)
    oracle = EntropyOracle(readings)
    labels = ",".join(str(v) for v in readings.locations)
    print(f"locations {labels}; {readings.t} timesteps")
    ok = True
    for name, check in (("ando", check_ando), ("direct", check_direct)):
        v = check(oracle)
        if v is None:
            print(f"{name:<7}ok")
        else:
            ok = False
            print(f"{name:<7}violated ({v.kind}) witness={v.witness} lhs={v.lhs:.9g} rhs={v.rhs:.9g}")
    return EXIT_OK if ok else EXIT_MISMATCH


COMMANDS = {"solve": _cmd_solve, "bench": _cmd_bench, "check": _cmd_check, "params": _cmd_params}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, ReadingsError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: gen / solve / bench / verify / plot.

Every failure path prints one machine-readable line to stderr of the form
``error: <category>: <detail>`` and exits nonzero; categories distinguish
validation errors, unreadable or malformed files, dimension mismatches,
structurally invalid solutions, and energy mismatches.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import parse_spec_file, read_records_csv, resolve_workers, run_experiment
from .model import (
    NonBinaryError,
    generate_qubo,
    read_qbin,
    read_solution_json,
    verify_solution,
    write_qbin,
)
from .plots import emit_plots
from .solver import BACKENDS, SolverConfig, result_to_dict, solve


def _fail(category: str, message: str) -> int:
    print(f"error: {category}: {message}", file=sys.stderr)
    return 1


def _cmd_gen(args) -> int:
    try:
        q = generate_qubo(args.n, args.seed, args.lo, args.hi)
    except ValueError as exc:
        return _fail("validation", str(exc))
    try:
        write_qbin(args.out, q)
    except OSError as exc:
        return _fail("io", str(exc))
    print(f"wrote {args.out} (n={q.n}, seed={args.seed})")
    return 0


def _load_matrix(path):
    try:
        return read_qbin(path)
    except OSError as exc:
        raise RuntimeError(f"io: {exc}") from exc
    except ValueError as exc:
        raise RuntimeError(f"format: {exc}") from exc


def _cmd_solve(args) -> int:
    try:
        q = _load_matrix(args.matrix)
    except RuntimeError as exc:
        category, _, message = str(exc).partition(": ")
        return _fail(category, message)
    try:
        cfg = SolverConfig(
            backend=args.backend,
            threshold=args.threshold,
            seed=args.seed,
            max_steps=args.max_steps,
        )
    except ValueError as exc:
        return _fail("validation", str(exc))
    result = solve(q, cfg)
    payload = result_to_dict(result, args.threshold)
    payload["bits"] = [int(b) for b in result.bits]
    try:
        with open(args.out, "w") as f:
            json.dump(payload, f)
            f.write("\n")
    except OSError as exc:
        return _fail("io", str(exc))
    print(
        f"solved n={q.n} backend={result.backend} energy={result.energy} "
        f"steps={result.steps} stop={result.stop_reason}"
    )
    return 0


def _cmd_bench(args) -> int:
    try:
        spec = parse_spec_file(args.config, output_dir=args.out_dir)
    except OSError as exc:
        return _fail("io", str(exc))
    except ValueError as exc:
        return _fail("format", str(exc))
    try:
        workers = resolve_workers(args.workers)
    except ValueError as exc:
        return _fail("validation", str(exc))
    try:
        records = run_experiment(spec, workers=workers)
    except OSError as exc:
        return _fail("io", str(exc))
    plot_dir = Path(spec.output_dir) / "plots"
    written = emit_plots(records, plot_dir)
    print(f"{len(records)} records -> {spec.output_dir} ({len(written)} plots)")
    return 0


def _cmd_verify(args) -> int:
    try:
        q = _load_matrix(args.matrix)
    except RuntimeError as exc:
        category, _, message = str(exc).partition(": ")
        return _fail(category, message)
    try:
        bits, claimed = read_solution_json(args.solution)
    except OSError as exc:
        return _fail("io", str(exc))
    except NonBinaryError as exc:
        return _fail("structure", str(exc))
    except ValueError as exc:
        return _fail("format", str(exc))
    try:
        ok = verify_solution(q, bits, claimed, args.rel_tol)
    except NonBinaryError as exc:
        return _fail("structure", str(exc))
    except ValueError as exc:
        return _fail("dimension-mismatch", str(exc))
    if not ok:
        from .model import energy_binary

        return _fail(
            "energy-mismatch",
            f"claimed {claimed} but recomputed {energy_binary(q, bits)} (rel_tol {args.rel_tol})",
        )
    print(f"verified: energy {claimed} matches within rel_tol {args.rel_tol}")
    return 0


def _cmd_plot(args) -> int:
    try:
        records = read_records_csv(args.records)
    except OSError as exc:
        return _fail("io", str(exc))
    except ValueError as exc:
        return _fail("format", str(exc))
    try:
        written = emit_plots(records, args.out_dir)
    except ValueError as exc:
        return _fail("validation", str(exc))
    print(f"wrote {len(written)} plots to {args.out_dir}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quboforge", description="QUBO solver suite and benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random symmetric QUBO matrix (QBIN)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lo", type=float, default=-5.0)
    p.add_argument("--hi", type=float, default=5.0)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="solve a QBIN matrix with one backend")
    p.add_argument("--matrix", required=True)
    p.add_argument("--backend", required=True, choices=BACKENDS)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-steps", type=int, default=1_000_000)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="run a sweep described by a spec config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--workers", type=int, default=None, help="worker pool size (QF_THREADS overrides)")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify", help="recompute and check a solution file against its matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("plot", help="emit SVG plots from a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_plot)
    return parser


def cli_dispatch(argv) -> int:
    """Parse ``argv`` (without the program name) and run one subcommand."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

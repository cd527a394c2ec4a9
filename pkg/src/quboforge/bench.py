"""Benchmark harness: solver x size x threshold x seed sweeps.

Generates instances, fans the (instance, backend, threshold) cells out to
a worker pool, and persists everything needed to re-verify each row:
matrices as QBIN, per-run solutions as JSON, records as CSV, and a
manifest capturing the sweep parameters.  Failures are first-class
records, never aborts.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .model import generate_qubo, write_qbin, write_solution_json
from .solver import BACKENDS, SolverConfig, solve_repeated

# The six-point sweep of the stopping threshold.
DEFAULT_THRESHOLDS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
DEFAULT_REPEATS = 5
DEFAULT_INSTANCES_PER_SIZE = 5

CSV_HEADER = ("instance_id", "backend", "n", "threshold", "seed", "energy", "steps", "wall_time_s", "stop_reason")

WORKERS_ENV_VAR = "QF_THREADS"


@dataclass(frozen=True)
class ExperimentSpec:
    """One sweep definition: every combination of size, instance, backend,
    threshold, and repeat seed is run."""

    sizes: tuple
    output_dir: Path
    thresholds: tuple = DEFAULT_THRESHOLDS
    backends: tuple = BACKENDS
    repeats: int = DEFAULT_REPEATS
    instances_per_size: int = DEFAULT_INSTANCES_PER_SIZE
    seed_base: int = 0
    solver_overrides: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        object.__setattr__(self, "backends", tuple(self.backends))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if not self.sizes or not self.thresholds or not self.backends:
            raise ValueError("sizes, thresholds, and backends must be non-empty")
        if any(s < 1 for s in self.sizes):
            raise ValueError("sizes must be positive")
        if any(t <= 0 for t in self.thresholds):
            raise ValueError("thresholds must be strictly positive")
        unknown = set(self.backends) - set(BACKENDS)
        if unknown:
            raise ValueError(f"unknown backends: {sorted(unknown)}")
        if self.repeats < 1 or self.instances_per_size < 1:
            raise ValueError("repeats and instances_per_size must be >= 1")


@dataclass(frozen=True)
class BenchRecord:
    """One row of the sweep; matches the CSV column order exactly."""

    instance_id: str
    backend: str
    n: int
    threshold: float
    seed: int
    energy: float
    steps: int
    wall_time_s: float
    stop_reason: str

    def csv_row(self) -> list:
        # str() of a float is repr in py3, which round-trips exactly.
        return [
            self.instance_id,
            self.backend,
            str(self.n),
            str(self.threshold),
            str(self.seed),
            str(self.energy),
            str(self.steps),
            str(self.wall_time_s),
            self.stop_reason,
        ]

    @classmethod
    def from_csv_row(cls, row: dict) -> "BenchRecord":
        return cls(
            instance_id=row["instance_id"],
            backend=row["backend"],
            n=int(row["n"]),
            threshold=float(row["threshold"]),
            seed=int(row["seed"]),
            energy=float(row["energy"]),
            steps=int(row["steps"]),
            wall_time_s=float(row["wall_time_s"]),
            stop_reason=row["stop_reason"],
        )


def instance_filename(instance_id: str) -> str:
    return f"{instance_id}.qbin"


def solution_filename(instance_id: str, backend: str, threshold: float, seed: int) -> str:
    return f"{instance_id}_{backend}_t{threshold:g}_s{seed}.json"


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: the QF_THREADS env var overrides any requested value."""
    env = os.environ.get(WORKERS_ENV_VAR)
    if env is not None:
        try:
            workers = int(env)
        except ValueError as exc:
            raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {env!r}") from exc
        if workers < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {workers}")
        return workers
    if requested is None:
        return 1
    if requested < 1:
        raise ValueError(f"worker count must be >= 1, got {requested}")
    return requested


def write_records_csv(path, records) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.csv_row())


def read_records_csv(path) -> list[BenchRecord]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        return [BenchRecord.from_csv_row(row) for row in reader]


def _run_cell(q, spec, instance_id, backend, threshold, solutions_dir):
    cfg = SolverConfig(
        backend=backend,
        threshold=threshold,
        seed=spec.seed_base,
        **spec.solver_overrides,
    )
    results, _ = solve_repeated(q, cfg, spec.repeats)
    records = []
    for res in results:
        write_solution_json(
            solutions_dir / solution_filename(instance_id, backend, threshold, res.seed),
            res.bits,
            res.energy,
        )
        records.append(
            BenchRecord(
                instance_id=instance_id,
                backend=backend,
                n=res.n,
                threshold=threshold,
                seed=res.seed,
                energy=res.energy,
                steps=res.steps,
                wall_time_s=res.wall_time_s,
                stop_reason=res.stop_reason,
            )
        )
    return records


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> list[BenchRecord]:
    """Run the full sweep and persist all artifacts under ``spec.output_dir``.

    Instance seeds are ``seed_base + instance_index``; repeat seeds are
    ``seed_base + k`` (handled by :func:`solve_repeated`).  Cells run on a
    thread pool and are merged in deterministic cell order, so reruns with
    the same spec differ only in wall times.
    """
    out = Path(spec.output_dir)
    matrices_dir = out / "matrices"
    solutions_dir = out / "solutions"
    try:
        matrices_dir.mkdir(parents=True, exist_ok=True)
        solutions_dir.mkdir(parents=True, exist_ok=True)
        manifest_path = out / "manifest.json"
        payload = asdict(spec)
        payload["output_dir"] = str(spec.output_dir)
        from . import __version__

        with open(manifest_path, "w") as f:
            json.dump({"spec": payload, "tool_version": __version__}, f, indent=2)
            f.write("\n")
    except OSError as exc:
        raise OSError(f"output directory not writable: {out}") from exc

    instances = []  # (instance_id, QuboMatrix), in deterministic order
    for size in spec.sizes:
        for i in range(spec.instances_per_size):
            instance_id = f"n{size}-i{i}"
            q = generate_qubo(size, spec.seed_base + i)
            write_qbin(matrices_dir / instance_filename(instance_id), q)
            instances.append((instance_id, q))

    cells = [
        (instance_id, q, backend, threshold)
        for instance_id, q in instances
        for backend in spec.backends
        for threshold in spec.thresholds
    ]
    n_workers = resolve_workers(workers)
    if n_workers == 1:
        cell_records = [
            _run_cell(q, spec, instance_id, backend, threshold, solutions_dir)
            for instance_id, q, backend, threshold in cells
        ]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            futures = [
                pool.submit(_run_cell, q, spec, instance_id, backend, threshold, solutions_dir)
                for instance_id, q, backend, threshold in cells
            ]
            cell_records = [fut.result() for fut in futures]

    records = [rec for batch in cell_records for rec in batch]
    write_records_csv(out / "records.csv", records)
    return records


def parse_spec_file(path, output_dir=None) -> ExperimentSpec:
    """Parse the flat key-value sweep config.

    Grammar: one ``key = value`` pair per line; ``#`` starts a comment;
    list values are comma-separated.  Keys: ``sizes`` (required),
    ``thresholds``, ``backends``, ``repeats``, ``instances_per_size``,
    ``seed_base``, ``output_dir``.  An explicit ``output_dir`` argument
    overrides the file.
    """
    entries = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key] = value

    known = {"sizes", "thresholds", "backends", "repeats", "instances_per_size", "seed_base", "output_dir"}
    unknown = set(entries) - known
    if unknown:
        raise ValueError(f"unknown spec keys in {path}: {sorted(unknown)}")
    if "sizes" not in entries:
        raise ValueError(f"spec file {path} must set 'sizes'")

    def split_list(value):
        return [item.strip() for item in value.split(",") if item.strip()]

    kwargs = {"sizes": tuple(int(s) for s in split_list(entries["sizes"]))}
    if "thresholds" in entries:
        kwargs["thresholds"] = tuple(float(t) for t in split_list(entries["thresholds"]))
    if "backends" in entries:
        kwargs["backends"] = tuple(split_list(entries["backends"]))
    if "repeats" in entries:
        kwargs["repeats"] = int(entries["repeats"])
    if "instances_per_size" in entries:
        kwargs["instances_per_size"] = int(entries["instances_per_size"])
    if "seed_base" in entries:
        kwargs["seed_base"] = int(entries["seed_base"])
    resolved_out = output_dir if output_dir is not None else entries.get("output_dir")
    if resolved_out is None:
        raise ValueError(f"spec file {path} must set 'output_dir' (or pass --out-dir)")
    return ExperimentSpec(output_dir=Path(resolved_out), **kwargs)

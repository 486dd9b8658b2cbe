"""Batch experiment runner and result aggregation.

An experiment is `runs` independent engine executions of one
configuration; run i uses seed base_seed + i, so any run can be
reproduced in isolation and execution order (or parallelism) cannot
change the results. Records are collected in memory and written once,
as line-delimited JSON, after all runs complete; a success-table CSV
summarises hit counts per configuration.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from hombent.engine import EngineConfig, run_sst

ENCODING_COLUMNS = ("GP", "TT", "rANF", "wANF", "rANF/LS", "wANF/LS")


@dataclass
class ExperimentSpec:
    name: str
    engine: EngineConfig  # seed field ignored; run i uses base_seed + i
    runs: int = 30
    base_seed: int = 0
    output_path: Path | None = None

    def validate(self) -> None:
        if self.runs < 1:
            raise ValueError(f"runs must be positive, got {self.runs}")
        self.engine.validate()

    def config_for_run(self, index: int) -> EngineConfig:
        return replace(self.engine, seed=self.base_seed + index)


class ExperimentError(RuntimeError):
    """A run failed; carries the records completed before the failure."""

    def __init__(self, message: str, records: list[dict]):
        super().__init__(message)
        self.records = records


def _run_index(args) -> dict:
    spec, index = args
    return run_sst(spec.config_for_run(index)).to_record()


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> list[dict]:
    """Execute all runs; deterministic per (base_seed, index) regardless of
    worker count. Returns the records in run order. A failing run aborts
    the batch; records completed before it ride on the raised error."""
    spec.validate()
    jobs = [(spec, i) for i in range(spec.runs)]
    records: list[dict] = []
    try:
        if workers <= 1:
            for job in jobs:
                records.append(_run_index(job))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for record in pool.map(_run_index, jobs):
                    records.append(record)
    except Exception as exc:
        raise ExperimentError(
            f"run {len(records)} (seed {spec.base_seed + len(records)}) failed: {exc}",
            records) from exc
    return records


def write_records(records: list[dict], path) -> None:
    with open(path, "w") as handle:
        for record in records:
            handle.write(json.dumps(record) + "\n")


def read_records(path) -> list[dict]:
    with open(path) as handle:
        return [json.loads(line) for line in handle if line.strip()]


def encoding_column(encoding: str, local_search: bool) -> str:
    label = {"gp": "GP", "tt": "TT", "ranf": "rANF", "wanf": "wANF"}[encoding]
    if local_search:
        if label not in ("rANF", "wANF"):
            raise ValueError(f"no success-table column for {label} with local search")
        label += "/LS"
    return label


def weight_label(fitness: str, encoding: str, k) -> str:
    """Row label: the restricted monomial count, or 'unrestricted'."""
    if encoding == "wanf" or fitness == "bent_k":
        return str(k)
    return "unrestricted"


class SuccessTable:
    """Success counts keyed by (n, weight label) rows and encoding columns.

    The weighted encoding fixes the monomial count by construction, so its
    column is marked "--" on unrestricted rows.
    """

    def __init__(self):
        self.cells: dict[tuple[int, str], dict[str, tuple[int, int]]] = {}

    def add(self, n: int, label: str, column: str, successes: int, runs: int) -> None:
        if column not in ENCODING_COLUMNS:
            raise ValueError(f"unknown encoding column {column!r}")
        if not 0 <= successes <= runs:
            raise ValueError(f"successes {successes} outside [0, {runs}]")
        if label == "unrestricted" and column.startswith("wANF"):
            raise ValueError("the weighted encoding has no unrestricted configuration")
        self.cells.setdefault((n, label), {})[column] = (successes, runs)

    def add_records(self, records: list[dict], local_search: bool = False) -> None:
        groups: dict[tuple[int, str, str], tuple[int, int]] = {}
        for record in records:
            label = weight_label(record["fitness"], record["encoding"], record["k"])
            column = encoding_column(record["encoding"], local_search)
            hits, total = groups.get((record["n"], label, column), (0, 0))
            groups[(record["n"], label, column)] = (hits + int(record["success"]), total + 1)
        for (n, label, column), (hits, total) in groups.items():
            self.add(n, label, column, hits, total)

    def _sorted_rows(self):
        def order(key):
            n, label = key
            return (n, label != "unrestricted", int(label) if label.isdigit() else -1)

        return sorted(self.cells, key=order)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["n", "weight", "runs"] + list(ENCODING_COLUMNS))
            for key in self._sorted_rows():
                n, label = key
                row_cells = self.cells[key]
                runs = max(r for _, r in row_cells.values())
                row = [n, label, runs]
                for column in ENCODING_COLUMNS:
                    if label == "unrestricted" and column.startswith("wANF"):
                        row.append("--")
                    elif column in row_cells:
                        row.append(row_cells[column][0])
                    else:
                        row.append("")
                writer.writerow(row)


# ---------------------------------------------------------------------------
# Key-value configuration files
# ---------------------------------------------------------------------------

def parse_config_file(path) -> dict:
    """Read `key = value` lines; '#' starts a comment. Values are parsed as
    JSON scalars when possible, else kept as strings."""
    out = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out

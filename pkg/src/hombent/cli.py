"""Command-line interface.

Subcommands:

  evolve           batch of independent evolutionary runs, JSONL records,
                   success-table CSV, and a fitness figure
  census           exact density report (CSV + text + histogram figure)
  verify           property report for a function given as hex truth table
                   or monomial-form ANF
  density-formula  closed-form quadratic counts and the asymptotic density

Every engine default equals the experiment defaults baked into the
library (population 500, one million evaluations, p_mut 0.5, 3-tournament
elimination). A key=value configuration file can override them, and
command-line flags override the file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hombent.census import (
    asymptotic_quadratic_density,
    density_report,
    published_cubic_report,
    quadratic_bent_count,
    quadratic_bent_density,
    write_report_csv,
    write_report_text,
)
from hombent.core import (
    AnfVector,
    TruthTable,
    algebraic_degree,
    anf_to_truth_table,
    is_bent,
    is_homogeneous,
    mobius_transform,
    monomial_count,
    nonlinearity,
    walsh_hadamard,
)
from hombent.engine import EngineConfig, LocalSearchConfig
from hombent.fitness import fit_bent
from hombent.harness import (
    ExperimentError,
    ExperimentSpec,
    SuccessTable,
    encoding_column,
    parse_config_file,
    run_experiment,
    weight_label,
    write_records,
)

_ENGINE_KEYS = {
    "n", "degree", "encoding", "k", "fitness", "evaluations", "population",
    "pmut", "local_search", "ls_fraction", "ls_trials", "stop_at_nl",
}
_SPEC_KEYS = {"runs", "seed", "name"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hombent",
                                     description="homogeneous bent Boolean function toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="run a batch of evolutionary searches")
    ev.add_argument("--config", type=Path, help="key=value configuration file")
    ev.add_argument("--n", type=int, help="number of variables")
    ev.add_argument("--degree", type=int, help="target algebraic degree")
    ev.add_argument("--encoding", choices=("gp", "tt", "ranf", "wanf"))
    ev.add_argument("--k", default=None,
                    help="monomial count restriction (integer or 'unrestricted')")
    ev.add_argument("--fitness", choices=("bent", "bent-k"), default=None)
    ev.add_argument("--runs", type=int, default=None, help="independent runs (default 30)")
    ev.add_argument("--seed", type=int, default=None, help="base seed; run i uses seed+i")
    ev.add_argument("--evaluations", type=int, default=None, help="budget per run")
    ev.add_argument("--population", type=int, default=None)
    ev.add_argument("--pmut", type=float, default=None)
    ev.add_argument("--local-search", action="store_true", default=None,
                    help="enable the hill climber (1%% of population, 30 trials)")
    ev.add_argument("--stop-at-nl", type=int, default=None,
                    help="also stop once the best integer fitness reaches this")
    ev.add_argument("--workers", type=int, default=1)
    ev.add_argument("--out", type=Path, default=Path("."), help="output directory")
    ev.add_argument("--name", default=None, help="output file prefix")
    ev.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    ce = sub.add_parser("census", help="exact bent density report")
    ce.add_argument("n", type=int)
    ce.add_argument("degree", type=int)
    ce.add_argument("--out", type=Path, default=Path("."))
    ce.add_argument("--no-figures", action="store_true")

    ve = sub.add_parser("verify", help="property report for a stored function")
    ve.add_argument("path", type=Path, help="file with a hex truth table or monomial ANF")
    ve.add_argument("--degree", type=int, required=True, help="homogeneity degree to check")
    ve.add_argument("--n", type=int, default=None,
                    help="variable count (required for ANF input unless inferable)")

    de = sub.add_parser("density-formula", help="closed-form quadratic counts")
    de.add_argument("n", type=int)
    de.add_argument("--asymptotic-terms", type=int, default=30,
                    help="factors of the limiting-density partial product")
    return parser


def _build_engine_config(settings: dict) -> EngineConfig:
    k = settings.get("k")
    if isinstance(k, str):
        k = None if k == "unrestricted" else int(k)
    fitness = settings.get("fitness") or "bent"
    fitness = fitness.replace("-", "_")
    local = None
    if settings.get("local_search"):
        local = LocalSearchConfig(fraction=settings.get("ls_fraction", 0.01),
                                  trials=settings.get("ls_trials", 30))
    return EngineConfig(
        n=settings["n"],
        d=settings["degree"],
        encoding=settings["encoding"],
        fitness=fitness,
        k=k,
        population_size=settings.get("population") or 500,
        max_evaluations=settings.get("evaluations") or 1_000_000,
        p_mut=settings.get("pmut") if settings.get("pmut") is not None else 0.5,
        local_search=local,
        stop_at_nl=settings.get("stop_at_nl"),
    )


def cmd_evolve(args) -> int:
    settings: dict = {}
    if args.config:
        settings.update(parse_config_file(args.config))
    for key in _ENGINE_KEYS | _SPEC_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    for required in ("n", "degree", "encoding"):
        if settings.get(required) is None:
            print(f"error: --{required} is required (flag or config file)", file=sys.stderr)
            return 2

    engine = _build_engine_config(settings)
    runs = int(settings.get("runs", 30))
    base_seed = int(settings.get("seed", 0))
    default_name = f"{engine.encoding}_n{engine.n}_d{engine.d}" + (
        f"_k{engine.k}" if engine.k is not None else "")
    name = settings.get("name") or default_name

    spec = ExperimentSpec(name=name, engine=engine, runs=runs, base_seed=base_seed,
                          output_path=args.out)
    spec.validate()
    args.out.mkdir(parents=True, exist_ok=True)
    records_path = args.out / f"{name}_records.jsonl"

    try:
        records = run_experiment(spec, workers=args.workers)
    except ExperimentError as exc:
        write_records(exc.records, records_path)
        print(f"error: {exc}; wrote {len(exc.records)} completed records to {records_path}",
              file=sys.stderr)
        return 1
    write_records(records, records_path)

    table = SuccessTable()
    table.add_records(records, local_search=engine.local_search is not None)
    table_path = args.out / f"{name}_success.csv"
    table.write_csv(table_path)

    outputs = [records_path, table_path]
    if not args.no_figures:
        from hombent.figures import batch_figure

        figure_path = args.out / f"{name}_fitness.png"
        batch_figure(records, figure_path)
        outputs.append(figure_path)

    successes = sum(record["success"] for record in records)
    for path in outputs:
        print(f"wrote {path}")
    label = weight_label(engine.fitness, engine.encoding, engine.k)
    column = encoding_column(engine.encoding, engine.local_search is not None)
    print(f"configuration: n={engine.n} d={engine.d} {column} weight={label}")
    print(f"successes: {successes}/{runs}")
    return 0


def cmd_census(args) -> int:
    if (args.n, args.degree) == (8, 3):
        report = published_cubic_report()
    else:
        report = density_report(args.n, args.degree)
    args.out.mkdir(parents=True, exist_ok=True)
    stem = f"census_n{args.n}_d{args.degree}"
    csv_path = args.out / f"{stem}.csv"
    txt_path = args.out / f"{stem}.txt"
    write_report_csv(report, csv_path)
    write_report_text(report, txt_path)
    outputs = [csv_path, txt_path]
    if not args.no_figures:
        from hombent.figures import density_figure

        png_path = args.out / f"{stem}.png"
        density_figure(report, png_path)
        outputs.append(png_path)
    for path in outputs:
        print(f"wrote {path}")
    print(f"total: {report.total_count}  density: {report.density_decimal()}"
          f"  source: {report.source}")
    return 0


def _load_function(text: str, n_hint: int | None) -> tuple[TruthTable, AnfVector]:
    body = text.strip()
    if not any(c in body for c in "x*+"):  # no monomial syntax: hex truth table
        tt = TruthTable.from_hex(body, n_hint)
        return tt, mobius_transform(tt)
    if n_hint is None:
        n_hint = 0
        for token in body.replace("*", " ").replace("+", " ").split():
            if token.startswith("x") and token[1:].isdigit():
                n_hint = max(n_hint, int(token[1:]))
        if n_hint == 0:
            raise ValueError("cannot infer the variable count; pass --n")
    anf = AnfVector.from_monomials(body, n_hint)
    return anf_to_truth_table(anf), anf


def cmd_verify(args) -> int:
    try:
        text = args.path.read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        tt, anf = _load_function(text, args.n)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    spectrum = walsh_hadamard(tt)
    fitness = fit_bent(tt)
    print(f"n: {tt.n}")
    print(f"degree: {algebraic_degree(anf)}")
    print(f"homogeneous({args.degree}): {str(is_homogeneous(anf, args.degree)).lower()}")
    print(f"terms: {monomial_count(anf)}")
    print(f"nl: {nonlinearity(spectrum)}")
    print(f"bent: {str(is_bent(spectrum)).lower()}")
    print(f"fit_bent: {fitness}")
    print(f"tt_hex: {tt.to_hex()}")
    print(f"anf: {anf.to_monomials()}")
    return 0


def cmd_density_formula(args) -> int:
    count = quadratic_bent_count(args.n)
    density = quadratic_bent_density(args.n)
    print(f"quadratic homogeneous bent count, n={args.n}: {count}")
    print(f"density: {density.numerator}/{density.denominator} = {float(density):.6g}")
    limit = asymptotic_quadratic_density(args.asymptotic_terms)
    print(f"asymptotic density ({args.asymptotic_terms} factors): {limit:.6f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "evolve": cmd_evolve,
        "census": cmd_census,
        "verify": cmd_verify,
        "density-formula": cmd_density_formula,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

import json

import pytest

from hombent.engine import EngineConfig
from hombent.harness import (
    ExperimentSpec,
    SuccessTable,
    encoding_column,
    parse_config_file,
    read_records,
    run_experiment,
    weight_label,
    write_records,
)


def tiny_spec(**overrides):
    engine = EngineConfig(n=5, d=2, encoding="ranf", population_size=10, max_evaluations=100)
    base = dict(name="tiny", engine=engine, runs=4, base_seed=100)
    base.update(overrides)
    return ExperimentSpec(**base)


def test_run_experiment_seeds_and_order():
    records = run_experiment(tiny_spec())
    assert [r["seed"] for r in records] == [100, 101, 102, 103]


def test_run_experiment_reproducible_bytes(tmp_path):
    first = tmp_path / "a.jsonl"
    second = tmp_path / "b.jsonl"
    write_records(run_experiment(tiny_spec()), first)
    write_records(run_experiment(tiny_spec()), second)
    assert first.read_bytes() == second.read_bytes()


def test_run_experiment_parallel_matches_serial():
    serial = run_experiment(tiny_spec())
    parallel = run_experiment(tiny_spec(), workers=2)
    assert serial == parallel


def test_records_round_trip(tmp_path):
    records = run_experiment(tiny_spec(runs=2))
    path = tmp_path / "r.jsonl"
    write_records(records, path)
    assert read_records(path) == records
    for line in path.read_text().splitlines():
        json.loads(line)


def test_runs_validation():
    with pytest.raises(ValueError, match="runs"):
        tiny_spec(runs=0).validate()


def test_weight_label_and_column():
    assert weight_label("bent", "ranf", None) == "unrestricted"
    assert weight_label("bent_k", "ranf", 16) == "16"
    assert weight_label("bent", "wanf", 16) == "16"
    assert encoding_column("ranf", False) == "rANF"
    assert encoding_column("wanf", True) == "wANF/LS"
    with pytest.raises(ValueError):
        encoding_column("gp", True)


def test_success_table_layout(tmp_path):
    table = SuccessTable()
    table.add(6, "unrestricted", "GP", 21, 30)
    table.add(6, "unrestricted", "rANF", 30, 30)
    table.add(6, "16", "wANF", 30, 30)
    table.add(8, "39", "wANF", 4, 30)
    path = tmp_path / "table.csv"
    table.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "n,weight,runs,GP,TT,rANF,wANF,rANF/LS,wANF/LS"
    assert lines[1].startswith("6,unrestricted,30,21,,30,--")
    assert lines[2].startswith("6,16,30,,,,30")
    assert lines[3].startswith("8,39,30,,,,4")


def test_success_table_rejects_bad_cells():
    table = SuccessTable()
    with pytest.raises(ValueError):
        table.add(6, "unrestricted", "wANF", 1, 30)
    with pytest.raises(ValueError):
        table.add(6, "16", "wANF", 31, 30)
    with pytest.raises(ValueError):
        table.add(6, "16", "XYZ", 1, 30)


def test_success_table_from_records():
    records = run_experiment(tiny_spec(runs=3))
    table = SuccessTable()
    table.add_records(records)
    (successes, total), = [table.cells[(5, "unrestricted")]["rANF"]].__iter__()
    assert total == 3
    assert successes == sum(r["success"] for r in records)


def test_parse_config_file(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(
        "# experiment configuration\n"
        "n = 6\n"
        "degree = 3\n"
        "encoding = wanf\n"
        "k = 16\n"
        "pmut = 0.5\n"
        "local-search = true\n"
        "name = demo\n"
    )
    settings = parse_config_file(path)
    assert settings == {"n": 6, "degree": 3, "encoding": "wanf", "k": 16,
                        "pmut": 0.5, "local_search": True, "name": "demo"}


def test_parse_config_file_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("n 6\n")
    with pytest.raises(ValueError, match="bad.cfg:1"):
        parse_config_file(path)


def test_failed_run_preserves_partial_records(monkeypatch, tmp_path):
    import hombent.harness as harness_mod
    from hombent.harness import ExperimentError

    real = harness_mod.run_sst
    calls = []

    def flaky(config):
        calls.append(config.seed)
        if config.seed == 102:
            raise RuntimeError("boom")
        return real(config)

    monkeypatch.setattr(harness_mod, "run_sst", flaky)
    with pytest.raises(ExperimentError) as info:
        run_experiment(tiny_spec())
    assert len(info.value.records) == 2
    assert "seed 102" in str(info.value)

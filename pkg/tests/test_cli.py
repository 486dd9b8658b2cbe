import json

import numpy as np

from hombent.cli import main
from hombent.core import AnfVector, anf_to_truth_table, var_mask


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def quad_3term_tt_hex():
    coeffs = np.zeros(64, dtype=np.uint8)
    for a, b in ((1, 2), (3, 4), (5, 6)):
        coeffs[var_mask(6, a) | var_mask(6, b)] = 1
    return anf_to_truth_table(AnfVector(6, coeffs)).to_hex()


def test_census_6_2(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "census", "6", "2", "--out", str(tmp_path))
    assert code == 0
    csv_path = tmp_path / "census_n6_d2.csv"
    txt_path = tmp_path / "census_n6_d2.txt"
    png_path = tmp_path / "census_n6_d2.png"
    assert csv_path.exists() and txt_path.exists() and png_path.exists()

    rows = {int(line.split(",")[0]): line.split(",")
            for line in csv_path.read_text().strip().splitlines()[1:]}
    assert rows[3][4] == "0.032967"
    assert rows[15][4] == "1"
    assert 14 not in rows
    assert "total count: 13888" in txt_path.read_text()


def test_census_8_3_reference(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "census", "8", "3", "--out", str(tmp_path), "--no-figures")
    assert code == 0
    assert "published-reference" in out
    text = (tmp_path / "census_n8_d3.txt").read_text()
    assert "published reference, not recomputed" in text
    lines = (tmp_path / "census_n8_d3.csv").read_text().strip().splitlines()
    ks = [int(line.split(",")[0]) for line in lines[1:]]
    assert ks == [24, 27, 28, 32, 34, 35, 36, 37, 39, 41]
    row41 = lines[-1].split(",")
    assert row41[1] == "40320"
    assert row41[4] == "2.48073e-09"


def test_census_infeasible(tmp_path, capsys):
    code, out, err = run_cli(capsys, "census", "10", "3", "--out", str(tmp_path))
    assert code == 1
    assert "C(10,3) = 120" in err


def test_density_formula(capsys):
    code, out, _ = run_cli(capsys, "density-formula", "8")
    assert code == 0
    assert "112881664" in out
    assert "0.420517" in out
    assert "0.419422" in out


def test_density_formula_odd_n(capsys):
    code, _, err = run_cli(capsys, "density-formula", "7")
    assert code == 1
    assert "even" in err


def test_verify_hex_bent(tmp_path, capsys):
    path = tmp_path / "fn.txt"
    path.write_text(quad_3term_tt_hex() + "\n")
    code, out, _ = run_cli(capsys, "verify", str(path), "--degree", "2")
    assert code == 0
    assert "bent: true" in out
    assert "nl: 28" in out
    assert "degree: 2" in out
    assert "homogeneous(2): true" in out
    assert "terms: 3" in out


def test_verify_zero_tt(tmp_path, capsys):
    path = tmp_path / "zero.txt"
    path.write_text("0" * 16 + "\n")
    code, out, _ = run_cli(capsys, "verify", str(path), "--degree", "2")
    assert code == 0
    assert "bent: false" in out
    assert "nl: 0" in out
    assert "terms: 0" in out


def test_verify_anf_round_trip(tmp_path, capsys):
    path = tmp_path / "anf.txt"
    path.write_text("x5*x6 + x3*x4 + x1*x2\n")
    code, out, _ = run_cli(capsys, "verify", str(path), "--n", "6", "--degree", "2")
    assert code == 0
    anf_line = next(line for line in out.splitlines() if line.startswith("anf: "))
    # feed the reported ANF back in
    path.write_text(anf_line.removeprefix("anf: ") + "\n")
    code, out2, _ = run_cli(capsys, "verify", str(path), "--n", "6", "--degree", "2")
    assert code == 0
    assert "bent: true" in out2


def test_verify_parse_error_position(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("00zz00\n")
    code, _, err = run_cli(capsys, "verify", str(path), "--degree", "2")
    assert code == 2
    assert "position 2" in err


def test_evolve_quadratic(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "evolve", "--n", "6", "--degree", "2", "--encoding", "ranf",
        "--runs", "3", "--seed", "7", "--out", str(tmp_path))
    assert code == 0
    assert out.strip().endswith("successes: 3/3")

    records_path = tmp_path / "ranf_n6_d2_records.jsonl"
    records = [json.loads(line) for line in records_path.read_text().splitlines()]
    assert [r["seed"] for r in records] == [7, 8, 9]
    assert all(r["success"] for r in records)

    table = (tmp_path / "ranf_n6_d2_success.csv").read_text().strip().splitlines()
    assert table[0] == "n,weight,runs,GP,TT,rANF,wANF,rANF/LS,wANF/LS"
    assert table[1].startswith("6,unrestricted,3,,,3,--")
    assert (tmp_path / "ranf_n6_d2_fitness.png").exists()


def test_evolve_rerun_byte_identical(tmp_path, capsys):
    argv = ["evolve", "--n", "5", "--degree", "2", "--encoding", "tt",
            "--runs", "2", "--seed", "0", "--evaluations", "100",
            "--population", "10", "--no-figures"]
    code, *_ = run_cli(capsys, *argv, "--out", str(tmp_path / "a"))
    assert code == 0
    code, *_ = run_cli(capsys, *argv, "--out", str(tmp_path / "b"))
    assert code == 0
    name = "tt_n5_d2_records.jsonl"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_evolve_with_config_file(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "n = 6\ndegree = 3\nencoding = wanf\nk = 16\n"
        "runs = 2\nseed = 3\npopulation = 100\nevaluations = 20000\nname = demo\n")
    code, out, _ = run_cli(capsys, "evolve", "--config", str(cfg),
                           "--out", str(tmp_path), "--no-figures")
    assert code == 0
    records_path = tmp_path / "demo_records.jsonl"
    records = [json.loads(line) for line in records_path.read_text().splitlines()]
    assert len(records) == 2
    assert all(r["k"] == 16 for r in records)
    # flag overrides config: bump runs
    code, out, _ = run_cli(capsys, "evolve", "--config", str(cfg), "--runs", "3",
                           "--out", str(tmp_path), "--no-figures")
    assert code == 0
    records = [json.loads(line) for line in records_path.read_text().splitlines()]
    assert len(records) == 3


def test_evolve_missing_required(tmp_path, capsys):
    code, _, err = run_cli(capsys, "evolve", "--n", "6", "--out", str(tmp_path))
    assert code == 2
    assert "required" in err


def test_evolve_workers_match_serial(tmp_path, capsys):
    argv = ["evolve", "--n", "5", "--degree", "2", "--encoding", "ranf",
            "--runs", "4", "--seed", "1", "--evaluations", "60",
            "--population", "10", "--no-figures"]
    run_cli(capsys, *argv, "--out", str(tmp_path / "serial"))
    run_cli(capsys, *argv, "--workers", "2", "--out", str(tmp_path / "par"))
    name = "ranf_n5_d2_records.jsonl"
    assert (tmp_path / "serial" / name).read_bytes() == (tmp_path / "par" / name).read_bytes()

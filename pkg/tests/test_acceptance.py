"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest -s tests/test_acceptance.py` to see the lines as they
complete. The whole suite performs real evolutionary runs and exhaustive
sweeps; expect it to take on the order of twenty minutes, dominated by
the stretch criterion 7 (sixty full-budget searches in eight variables).
"""

import os
import time
from fractions import Fraction

import numpy as np
import pytest

from hombent.census import (
    asymptotic_quadratic_density,
    bent_flags_for_candidates,
    density_report,
    enumerate_homogeneous_bent,
    quadratic_bent_count,
    quadratic_bent_oracle,
)
from hombent.core import (
    AnfVector,
    TruthTable,
    anf_to_truth_table,
    covering_radius_bound,
    is_bent,
    is_homogeneous,
    monomial_count,
    nonlinearity,
    var_mask,
    walsh_hadamard,
    walsh_values,
    weight_d_masks,
    xor_butterfly,
)
from hombent.encodings import (
    TtBitstring,
    crossover_wanf,
    decode_tt,
    mutate_wanf,
    parse_genotype,
    random_genotype,
)
from hombent.engine import EngineConfig
from hombent.fitness import fit_bent, fit_bent_k
from hombent.harness import ExperimentSpec, run_experiment, write_records

WORKERS = min(2, os.cpu_count() or 1)


def report(number: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE {number} {description}: {status}{suffix}", flush=True)
    assert ok, f"criterion {number}: {description}{suffix}"


def test_criterion_1_quadratic_census_n6():
    start = time.time()
    rep = density_report(6, 2)
    elapsed = time.time() - start
    ok = (
        rep.total_count == 13888
        and rep.total_count == quadratic_bent_count(6)
        and rep.density == Fraction(13888, 1 << 15)
        and abs(float(rep.by_terms[3].density) - 0.032967) <= 5e-7
        and rep.by_terms[15].density == 1
        and elapsed < 10.0
    )
    report(1, "quadratic census n=6", ok, f"13888 functions in {elapsed:.1f}s")


def test_criterion_2_cubic_census_n6():
    start = time.time()
    functions = list(enumerate_homogeneous_bent(6, 3))
    elapsed = time.time() - start
    rep = density_report(6, 3)
    ok = (
        len(functions) == 30
        and all(monomial_count(anf) == 16 for anf in functions)
        and rep.density == Fraction(30, 1 << 20)
        and abs(float(rep.density) - 2.86102e-5) < 1e-9
        and elapsed < 300.0
    )
    report(2, "cubic census n=6", ok, f"30 functions, 16 terms each, {elapsed:.1f}s")


def test_criterion_3_asymptotic_density():
    value = asymptotic_quadratic_density(30)
    ok = abs(value - 0.419422) < 1e-6
    report(3, "asymptotic quadratic density", ok, f"30-term product = {value:.7f}")


def test_criterion_4_oracle_equivalence():
    disagreements = 0
    checked = 0
    for n in (4, 6):
        masks = weight_d_masks(n, 2)
        length = len(masks)
        values = np.arange(1 << length, dtype=np.uint32)
        candidates = ((values[:, None] >> np.arange(length)) & 1).astype(np.uint8)
        via_wht = bent_flags_for_candidates(candidates, n, 2)
        for value in range(1 << length):
            coeffs = np.zeros(1 << n, dtype=np.uint8)
            coeffs[masks] = candidates[value]
            via_rank = quadratic_bent_oracle(AnfVector(n, coeffs))
            disagreements += via_rank != bool(via_wht[value])
            checked += 1
    ok = disagreements == 0 and checked == (1 << 6) + (1 << 15)
    report(4, "rank oracle vs spectrum bentness", ok,
           f"{checked} functions, {disagreements} disagreements")


def _success_count(n, d, encoding, runs, base_seed, fitness="bent", k=None):
    spec = ExperimentSpec(
        name="acceptance",
        engine=EngineConfig(n=n, d=d, encoding=encoding, fitness=fitness, k=k),
        runs=runs,
        base_seed=base_seed,
    )
    records = run_experiment(spec, workers=WORKERS)
    return records, sum(r["success"] for r in records)


def test_criterion_5_evolution_quadratic():
    details = []
    ok = True
    for n in (6, 8):
        for encoding in ("ranf", "tt"):
            start = time.time()
            records, hits = _success_count(n, 2, encoding, runs=10, base_seed=1000)
            elapsed = time.time() - start
            ok = ok and hits >= 9 and elapsed < 600 * 10
            details.append(f"{encoding} n={n}: {hits}/10")
    report(5, "quadratic evolution rANF/TT n=6,8", ok, ", ".join(details))


def test_criterion_6_evolution_cubic_n6():
    records_w, hits_w = _success_count(6, 3, "wanf", runs=10, base_seed=2000, k=16)
    records_r, hits_r = _success_count(6, 3, "ranf", runs=10, base_seed=3000,
                                       fitness="bent_k", k=16)
    shape_ok = True
    for record in records_w + records_r:
        if not record["success"]:
            continue
        anf = AnfVector.from_monomials(record["best_anf"], 6)
        tt = anf_to_truth_table(anf)
        shape_ok = shape_ok and monomial_count(anf) == 16
        shape_ok = shape_ok and is_homogeneous(anf, 3)
        shape_ok = shape_ok and nonlinearity(walsh_hadamard(tt)) == 28
    ok = hits_w >= 8 and hits_r >= 8 and shape_ok
    report(6, "cubic evolution n=6 (wANF k=16, rANF fit-k)", ok,
           f"wANF {hits_w}/10, rANF {hits_r}/10, winners all 16-term nl=28: {shape_ok}")


@pytest.mark.stretch
@pytest.mark.xfail(reason="stretch criterion, not required for acceptance: some runs "
                          "plateau at nonlinearity 112 within the evaluation budget",
                   strict=False)
def test_criterion_7_evolution_cubic_n8():
    results = {}
    weights_ok = True
    for k in (39, 41):
        spec = ExperimentSpec(
            name="acceptance-n8",
            engine=EngineConfig(n=8, d=3, encoding="wanf", k=k, stop_at_nl=114),
            runs=30,
            base_seed=4000,
        )
        records = run_experiment(spec, workers=WORKERS)
        for record in records:
            g = parse_genotype(record["best_genotype"], "wanf", 8, 3, k)
            weights_ok = weights_ok and int(g.bits.sum()) == k
        results[k] = records
    successes = {k: sum(r["success"] for r in records) for k, records in results.items()}
    nls = {k: [r["best_nl"] for r in records] for k, records in results.items()}
    reached = {k: sum(nl >= 114 for nl in values) for k, values in nls.items()}
    ok = weights_ok and all(reached[k] == 30 for k in (39, 41))
    report(7, "cubic evolution n=8 (stretch)", ok,
           f"bent successes k=39: {successes[39]}/30, k=41: {successes[41]}/30; "
           f"nl>=114 k=39: {reached[39]}/30, k=41: {reached[41]}/30; "
           f"weight invariant: {weights_ok}")


def test_criterion_8_property_suites(tmp_path):
    rng = np.random.default_rng(2718)

    # involution and Parseval, exhaustive for n <= 4
    involution_ok = True
    parseval_ok = True
    for n in (1, 2, 3, 4):
        m = 1 << n
        tts = ((np.arange(1 << m, dtype=np.uint32)[:, None] >> np.arange(m)) & 1).astype(np.uint8)
        back = xor_butterfly(xor_butterfly(tts.copy()))
        involution_ok = involution_ok and np.array_equal(back, tts)
        spectra = walsh_values(tts).astype(np.int64)
        parseval_ok = parseval_ok and bool(np.all((spectra * spectra).sum(axis=1) == 1 << (2 * n)))

    # randomized for larger n
    for n in (6, 8, 10, 12):
        m = 1 << n
        tts = rng.integers(0, 2, size=(1000, m)).astype(np.uint8)
        back = xor_butterfly(xor_butterfly(tts.copy()))
        involution_ok = involution_ok and np.array_equal(back, tts)
        spectra = walsh_values(tts).astype(np.int64)
        parseval_ok = parseval_ok and bool(np.all((spectra * spectra).sum(axis=1) == 1 << (2 * n)))

    # weight preservation over 10^4 operator applications
    weight_ok = True
    g = random_genotype("wanf", 8, 3, 41, rng)
    partner = random_genotype("wanf", 8, 3, 41, rng)
    for i in range(10_000):
        g = mutate_wanf(g, rng) if i % 2 else crossover_wanf(g, partner, rng)
        weight_ok = weight_ok and int(g.bits.sum()) == 41

    # fitness bounds and bent equivalence on 10^3 random functions
    fitness_ok = True
    bound = covering_radius_bound(6)
    for _ in range(1000):
        tt = TruthTable(6, rng.integers(0, 2, size=64).astype(np.uint8))
        value = fit_bent(tt)
        frac = value.value - value.nl
        fitness_ok = fitness_ok and 0.0 <= frac < 1.0
        fitness_ok = fitness_ok and ((value.value == bound) == is_bent(walsh_hadamard(tt)))

    # decode pipeline idempotence
    decode_ok = True
    for _ in range(200):
        g = TtBitstring(6, rng.integers(0, 2, size=64).astype(np.uint8))
        tt1, anf1 = decode_tt(g, 2)
        tt2, anf2 = decode_tt(TtBitstring(6, tt1.bits), 2)
        decode_ok = decode_ok and tt1 == tt2 and anf1 == anf2

    # deterministic replay of a full 30-run batch, byte-identical output
    spec = ExperimentSpec(
        name="replay",
        engine=EngineConfig(n=6, d=2, encoding="ranf", population_size=50,
                            max_evaluations=2000),
        runs=30,
        base_seed=99,
    )
    path_a = tmp_path / "a.jsonl"
    path_b = tmp_path / "b.jsonl"
    write_records(run_experiment(spec, workers=WORKERS), path_a)
    write_records(run_experiment(spec, workers=1), path_b)
    replay_ok = path_a.read_bytes() == path_b.read_bytes()

    ok = involution_ok and parseval_ok and weight_ok and fitness_ok and decode_ok and replay_ok
    report(8, "property suites", ok,
           f"involution {involution_ok}, parseval {parseval_ok}, weights {weight_ok}, "
           f"fitness {fitness_ok}, decode {decode_ok}, replay {replay_ok}")


def test_criterion_9_fitness_spot_values():
    const0 = fit_bent(TruthTable(6, np.zeros(64, dtype=np.uint8)))

    coeffs = np.zeros(64, dtype=np.uint8)
    for a, b in ((1, 2), (3, 4), (5, 6)):
        coeffs[var_mask(6, a) | var_mask(6, b)] = 1
    bent_value = fit_bent(anf_to_truth_table(AnfVector(6, coeffs)))

    cubic_masks = weight_d_masks(6, 3)
    coeffs14 = np.zeros(64, dtype=np.uint8)
    coeffs14[cubic_masks[:14]] = 1
    anf14 = AnfVector(6, coeffs14)
    penal = fit_bent_k(anf14, anf_to_truth_table(anf14), 16)

    ok = (const0.value == 0.984375 and bent_value.value == 28.0 and penal.value == -2.0)
    report(9, "fitness spot values", ok,
           f"const0={const0.value}, bent={bent_value.value}, 14-term@k16={penal.value}")

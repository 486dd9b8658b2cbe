"""Steady-state evolutionary search with 3-tournament elimination.

Each iteration draws three distinct population members, eliminates the
worst (ties broken uniformly at random), crosses the two survivors into
one child, mutates the child with probability p_mut, and writes the
evaluated child into the freed slot. The unit of cost is the fitness
evaluation; initialization counts against the budget, and a run stops
early as soon as a bent function appears, since fitness is then globally
maximal.

An optional hill climber can sweep the current best plus a few random
members after every population-size worth of iterations; its evaluations
are charged to the same budget so configurations stay comparable.

Runs are deterministic functions of their configuration, seed included.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, comb

import numpy as np

from hombent.core import (
    AnfVector,
    TruthTable,
    _covering_matrix,
    _sign_matrix,
    covering_radius_bound,
    is_bent,
    is_homogeneous,
    mobius_bits,
    walsh_hadamard,
    walsh_values,
    weight_d_masks,
)
from hombent.encodings import (
    ENCODINGS,
    RanfBitstring,
    TtBitstring,
    WanfBitstring,
    crossover_bitstring,
    crossover_wanf,
    decode_gp,
    decode_raw_tt,
    decode_ranf,
    decode_tt,
    decode_wanf,
    expand_reduced,
    mutate_bitstring,
    mutate_wanf,
    random_genotype,
    serialize_genotype,
)
from hombent.fitness import FitnessValue, bent_key_from_values, fit_bent, fit_bent_k, penalty_key
from hombent.gp import eval_tree, gp_crossover, subtree_mutation

FITNESS_KINDS = ("bent", "bent_k")
TRACE_POINTS = 1000


@dataclass
class LocalSearchConfig:
    fraction: float = 0.01
    trials: int = 30


@dataclass
class EngineConfig:
    n: int
    d: int
    encoding: str
    fitness: str = "bent"
    k: int | None = None
    population_size: int = 500
    max_evaluations: int = 1_000_000
    p_mut: float = 0.5
    tournament_size: int = 3
    local_search: LocalSearchConfig | None = None
    seed: int = 0
    max_depth: int = 8
    stop_at_nl: int | None = None  # optional extra stop: integer fitness part reached

    def validate(self) -> None:
        if not 1 <= self.n <= 16:
            raise ValueError(f"n must be in [1, 16], got {self.n}")
        if not 0 <= self.d <= self.n:
            raise ValueError(f"degree must be in [0, {self.n}], got {self.d}")
        if self.encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}, got {self.encoding!r}")
        if self.fitness not in FITNESS_KINDS:
            raise ValueError(f"fitness must be one of {FITNESS_KINDS}, got {self.fitness!r}")
        if self.tournament_size != 3:
            raise ValueError("the elimination tournament is fixed at size 3")
        if self.population_size < self.tournament_size:
            raise ValueError(f"population must hold at least {self.tournament_size} individuals")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")
        if not 0.0 <= self.p_mut <= 1.0:
            raise ValueError(f"p_mut must be in [0, 1], got {self.p_mut}")
        if self.encoding == "wanf" and self.k is None:
            raise ValueError("the weighted encoding requires k")
        if self.fitness == "bent_k" and self.k is None:
            raise ValueError("the k-restricted fitness requires k")
        if self.k is not None:
            limit = comb(self.n, self.d)
            if not 0 <= self.k <= limit:
                raise ValueError(f"k must be in [0, C({self.n},{self.d})={limit}], got {self.k}")
        if self.local_search is not None:
            if not 0.0 <= self.local_search.fraction <= 1.0:
                raise ValueError("local search fraction must be in [0, 1]")
            if self.local_search.trials < 1:
                raise ValueError("local search trials must be positive")


@dataclass
class RunResult:
    best_fitness: FitnessValue
    best_genotype: str
    best_anf: str
    evaluations_used: int
    success: bool
    fitness_trace: list[tuple[int, float]]
    seed: int
    n: int
    d: int
    encoding: str
    fitness: str
    k: int | None

    def to_record(self) -> dict:
        """JSON-ready dict with a fixed key order."""
        trace = self.fitness_trace
        if len(trace) > TRACE_POINTS:
            stride = ceil(len(trace) / TRACE_POINTS)
            sampled = trace[::stride]
            if sampled[-1] != trace[-1]:
                sampled.append(trace[-1])
            if len(sampled) > TRACE_POINTS:
                del sampled[-2]  # keep first and last
            trace = sampled
        return {
            "seed": self.seed,
            "n": self.n,
            "d": self.d,
            "encoding": self.encoding,
            "fitness": self.fitness,
            "k": self.k,
            "success": self.success,
            "best_fitness": self.best_fitness.value,
            "best_nl": self.best_fitness.nl,
            "evaluations_used": self.evaluations_used,
            "best_genotype": self.best_genotype,
            "best_anf": self.best_anf,
            "fitness_trace": [[i, v] for i, v in trace],
        }


_FUSED_MAX_N = 10


class _Problem:
    """Encoding-specific operators plus the fast evaluation path.

    For moderate n the pipeline runs on precomputed float32 matrices via
    BLAS; all intermediate sums are small integers (far below 2^24), so
    float32 arithmetic stays exact.
    """

    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self.scale = 1 << cfg.n
        self.penalize = cfg.fitness == "bent_k"
        self.fused = cfg.n <= _FUSED_MAX_N
        if self.fused:
            masks = weight_d_masks(cfg.n, cfg.d)
            covering = _covering_matrix(cfg.n)
            self._signs = _sign_matrix(cfg.n).astype(np.float32)
            # truth-table column per degree-d monomial: column t at row x is
            # 1 iff monomial masks[t] divides input x
            self._montt = covering[:, masks].astype(np.float32)
            # ANF extraction rows for the same monomials
            self._monrows = covering[masks, :].astype(np.float32)

    def random(self, rng):
        return random_genotype(self.cfg.encoding, self.cfg.n, self.cfg.d, self.cfg.k,
                               rng, self.cfg.max_depth)

    def crossover(self, p1, p2, rng):
        if self.cfg.encoding == "gp":
            return gp_crossover(p1, p2, rng, self.cfg.max_depth)
        if self.cfg.encoding == "wanf":
            return crossover_wanf(p1, p2, rng)
        return crossover_bitstring(p1, p2, rng)

    def mutate(self, g, rng):
        if self.cfg.encoding == "gp":
            return subtree_mutation(g, self.cfg.n, rng, self.cfg.max_depth)
        if self.cfg.encoding == "wanf":
            return mutate_wanf(g, rng)
        return mutate_bitstring(g, rng)

    def _key_from_tt_signs(self, signs: np.ndarray) -> int:
        spectrum = self._signs @ signs
        key, _, _ = bent_key_from_values(spectrum, self.cfg.n)
        return key

    def eval_key(self, g) -> int:
        cfg = self.cfg
        if isinstance(g, (RanfBitstring, WanfBitstring)):
            num = int(g.bits.sum())
            if isinstance(g, WanfBitstring) and num != cfg.k:
                raise RuntimeError(
                    f"weight invariant violated: genotype has {num} ones, expected {cfg.k}"
                )
            if self.penalize and num != cfg.k:
                return penalty_key(num, cfg.k, cfg.n)
            if self.fused:
                parity = (self._montt @ g.bits.astype(np.float32)) % 2
                return self._key_from_tt_signs(1 - 2 * parity)
            tt_bits = mobius_bits(expand_reduced(g.bits, cfg.n, cfg.d))
        else:
            raw = g.bits if isinstance(g, TtBitstring) else eval_tree(g, cfg.n)
            if self.fused:
                reduced = (self._monrows @ raw.astype(np.float32)) % 2
                if self.penalize:
                    num = int(reduced.sum())
                    if num != cfg.k:
                        return penalty_key(num, cfg.k, cfg.n)
                parity = (self._montt @ reduced) % 2
                return self._key_from_tt_signs(1 - 2 * parity)
            tt_bits, anf_bits = decode_raw_tt(raw, cfg.n, cfg.d)
            if self.penalize:
                num = int(anf_bits.sum())
                if num != cfg.k:
                    return penalty_key(num, cfg.k, cfg.n)
        key, _, _ = bent_key_from_values(walsh_values(tt_bits), cfg.n)
        return key

    def decode(self, g) -> tuple[TruthTable, AnfVector]:
        if isinstance(g, WanfBitstring):
            return decode_wanf(g)
        if isinstance(g, RanfBitstring):
            return decode_ranf(g)
        if isinstance(g, TtBitstring):
            return decode_tt(g, self.cfg.d)
        return decode_gp(g, self.cfg.n, self.cfg.d)


def local_search(genotype, key, mutate, evaluate, rng, trials, budget, stop_key=None):
    """Hill climb by mutation with strict-improvement acceptance.

    Evaluates up to `budget` mutated copies; a strict improvement is
    adopted immediately and the trial counter restarts. Stops after
    `trials` consecutive failures, when the budget runs out, or when
    stop_key is reached. Returns (genotype, key, evaluations_spent).
    """
    spent = 0
    fails = 0
    while fails < trials and spent < budget:
        if stop_key is not None and key >= stop_key:
            break
        candidate = mutate(genotype, rng)
        candidate_key = evaluate(candidate)
        spent += 1
        if candidate_key > key:
            genotype, key = candidate, candidate_key
            fails = 0
        else:
            fails += 1
    return genotype, key, spent


def _sample3(rng, size: int) -> tuple[int, int, int]:
    """Three distinct uniform indices; collisions redrawn (rare)."""
    a, b, c = (int(x) for x in rng.integers(0, size, size=3))
    while b == a:
        b = int(rng.integers(size))
    while c == a or c == b:
        c = int(rng.integers(size))
    return a, b, c


def run_sst(config: EngineConfig) -> RunResult:
    """One steady-state run; deterministic given the seed."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    problem = _Problem(config)
    scale = 1 << config.n
    pop_size = config.population_size

    bent_key = covering_radius_bound(config.n) * scale if config.n % 2 == 0 else None
    target_key = config.stop_at_nl * scale if config.stop_at_nl is not None else None

    evals = 0
    best_key: int | None = None
    best_genotype = None
    trace: list[tuple[int, float]] = []

    def evaluate(g) -> int:
        nonlocal evals
        key = problem.eval_key(g)
        evals += 1
        return key

    def note(g, key: int) -> None:
        nonlocal best_key, best_genotype
        if best_key is None or key > best_key:
            best_key, best_genotype = key, g
            trace.append((evals, key / scale))

    def reached_stop(key: int) -> bool:
        if bent_key is not None and key >= bent_key:
            return True
        return target_key is not None and key >= target_key

    population = []
    keys = []
    stop = False
    for _ in range(pop_size):
        g = problem.random(rng)
        key = evaluate(g)
        population.append(g)
        keys.append(key)
        note(g, key)
        if reached_stop(key):
            stop = True
            break

    iteration = 0
    ls = config.local_search
    ls_extra = ceil(ls.fraction * pop_size) if ls else 0
    stop_candidates = [x for x in (bent_key, target_key) if x is not None]
    ls_stop_key = min(stop_candidates) if stop_candidates else None
    while not stop and evals < config.max_evaluations:
        trio = _sample3(rng, pop_size)
        lowest = min(keys[t] for t in trio)
        ties = [t for t in trio if keys[t] == lowest]
        worst = ties[0] if len(ties) == 1 else ties[int(rng.integers(len(ties)))]
        parents = [t for t in trio if t != worst]

        child = problem.crossover(population[parents[0]], population[parents[1]], rng)
        if rng.random() < config.p_mut:
            child = problem.mutate(child, rng)
        key = evaluate(child)
        population[worst] = child
        keys[worst] = key
        note(child, key)
        if reached_stop(key):
            break

        iteration += 1
        if ls and iteration % pop_size == 0:
            best_idx = int(np.argmax(keys))
            extra = rng.choice(pop_size, size=min(ls_extra, pop_size), replace=False)
            for t in [best_idx] + [int(x) for x in extra]:
                budget = config.max_evaluations - evals
                if budget <= 0 or stop:
                    break
                # evaluate() charges the spent evaluations as they happen
                g2, key2, _ = local_search(
                    population[t], keys[t], problem.mutate, evaluate,
                    rng, ls.trials, budget, stop_key=ls_stop_key)
                population[t] = g2
                keys[t] = key2
                note(g2, key2)
                if reached_stop(key2):
                    stop = True

    tt, anf = problem.decode(best_genotype)
    success = is_bent(walsh_hadamard(tt)) and is_homogeneous(anf, config.d)
    if config.fitness == "bent_k":
        best_fitness = fit_bent_k(anf, tt, config.k)
    else:
        best_fitness = fit_bent(tt)
    if best_fitness.key != best_key:
        raise AssertionError(
            f"fitness mismatch on decode: recorded {best_key}, recomputed {best_fitness.key}")

    return RunResult(
        best_fitness=best_fitness,
        best_genotype=serialize_genotype(best_genotype),
        best_anf=anf.to_monomials(),
        evaluations_used=evals,
        success=success,
        fitness_trace=trace,
        seed=config.seed,
        n=config.n,
        d=config.d,
        encoding=config.encoding,
        fitness=config.fitness,
        k=config.k,
    )

"""Genotype representations for homogeneous-function search.

Four representations share one decode contract: every genotype decodes to
a (TruthTable, AnfVector) pair whose ANF is homogeneous of the target
degree d, or all-zero.

  * GP        -- expression tree; its raw truth table goes through the
                 repair pipeline (ANF, zero out wrong-degree monomials,
                 back to a truth table).
  * TT        -- direct 2^n bitstring; same repair pipeline.
  * rANF      -- bitstring over the C(n,d) degree-d monomials; homogeneous
                 by construction, no repair needed.
  * wANF      -- rANF with a fixed number k of ones, maintained exactly by
                 dedicated operators.

Bitstring operators follow the classic pair-per-role scheme: mutation
picks between a single-bit flip and a segment shuffle; crossover picks
between one-point and uniform. The weight-preserving variants replace
them with a paired 1<->0 flip, the same segment shuffle, and a counting
merge that clamps the child's weight to k.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from hombent.core import (
    AnfVector,
    TruthTable,
    mobius_bits,
    repair_bits,
    weight_d_masks,
)
from hombent.gp import (
    DEFAULT_INIT_DEPTHS,
    DEFAULT_MAX_DEPTH,
    GpTree,
    eval_tree,
    parse_sexpr,
    random_tree,
    to_sexpr,
)

ENCODINGS = ("gp", "tt", "ranf", "wanf")


@dataclass
class TtBitstring:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if self.bits.shape != (1 << self.n,):
            raise ValueError(f"truth-table genotype must have length {1 << self.n}")


@dataclass
class RanfBitstring:
    """One bit per degree-d monomial, in increasing mask order."""

    n: int
    d: int
    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        expected = comb(self.n, self.d)
        if self.bits.shape != (expected,):
            raise ValueError(f"reduced-ANF genotype must have length C({self.n},{self.d})={expected}")

    @property
    def monomial_index(self) -> np.ndarray:
        return weight_d_masks(self.n, self.d)


@dataclass
class WanfBitstring(RanfBitstring):
    """Reduced-ANF genotype whose number of ones is pinned to k."""

    k: int = 0

    def __post_init__(self):
        super().__post_init__()
        if not 0 <= self.k <= self.bits.size:
            raise ValueError(f"k must be in [0, {self.bits.size}], got {self.k}")


Genotype = GpTree | TtBitstring | RanfBitstring | WanfBitstring


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

def decode_raw_tt(raw_bits: np.ndarray, n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Repair pipeline on raw bits: ANF, wrong-degree zeroing, back to TT."""
    anf = repair_bits(mobius_bits(raw_bits), n, d)
    return mobius_bits(anf), anf


def expand_reduced(bits: np.ndarray, n: int, d: int) -> np.ndarray:
    """Scatter a reduced coefficient vector into a full 2^n ANF vector."""
    anf = np.zeros(1 << n, dtype=np.uint8)
    anf[weight_d_masks(n, d)] = bits
    return anf


def decode_gp(tree: GpTree, n: int, d: int) -> tuple[TruthTable, AnfVector]:
    tt_bits, anf_bits = decode_raw_tt(eval_tree(tree, n), n, d)
    return TruthTable(n, tt_bits), AnfVector(n, anf_bits)


def decode_tt(g: TtBitstring, d: int) -> tuple[TruthTable, AnfVector]:
    tt_bits, anf_bits = decode_raw_tt(g.bits, g.n, d)
    return TruthTable(g.n, tt_bits), AnfVector(g.n, anf_bits)


def decode_ranf(g: RanfBitstring) -> tuple[TruthTable, AnfVector]:
    anf_bits = expand_reduced(g.bits, g.n, g.d)
    return TruthTable(g.n, mobius_bits(anf_bits)), AnfVector(g.n, anf_bits)


def decode_wanf(g: WanfBitstring) -> tuple[TruthTable, AnfVector]:
    if int(g.bits.sum()) != g.k:
        raise RuntimeError(
            f"weight invariant violated: genotype has {int(g.bits.sum())} ones, expected {g.k}"
        )
    return decode_ranf(g)


# ---------------------------------------------------------------------------
# Bitstring operators (TT and rANF)
# ---------------------------------------------------------------------------

def _shuffle_segment(bits: np.ndarray, rng) -> np.ndarray:
    """Uniform random permutation of an inclusive random segment."""
    out = bits.copy()
    i, j = sorted(rng.integers(0, bits.size, size=2))
    out[i:j + 1] = out[i:j + 1][rng.permutation(j - i + 1)]
    return out


def mutate_bitstring(g, rng):
    """Flip one random bit, or shuffle a random segment (equal odds)."""
    if rng.random() < 0.5:
        out = g.bits.copy()
        out[int(rng.integers(out.size))] ^= 1
    else:
        out = _shuffle_segment(g.bits, rng)
    return _rewrap(g, out)


def crossover_bitstring(p1, p2, rng):
    """One-point or uniform crossover (equal odds); lengths must match."""
    if p1.bits.size != p2.bits.size:
        raise ValueError(f"parent length mismatch: {p1.bits.size} != {p2.bits.size}")
    if rng.random() < 0.5:
        if p1.bits.size < 2:
            child = p1.bits.copy()
        else:
            cut = int(rng.integers(1, p1.bits.size))
            child = np.concatenate([p1.bits[:cut], p2.bits[cut:]])
    else:
        take_p2 = rng.integers(0, 2, size=p1.bits.size).astype(bool)
        child = np.where(take_p2, p2.bits, p1.bits)
    return _rewrap(p1, child)


def _rewrap(template, bits):
    if isinstance(template, WanfBitstring):
        return WanfBitstring(template.n, template.d, bits, template.k)
    if isinstance(template, RanfBitstring):
        return RanfBitstring(template.n, template.d, bits)
    return TtBitstring(template.n, bits)


# ---------------------------------------------------------------------------
# Weight-preserving operators (wANF)
# ---------------------------------------------------------------------------

def mutate_wanf(g: WanfBitstring, rng) -> WanfBitstring:
    """Two-bit inversion (one 1 and one 0 flipped) or segment shuffle.

    Both readings preserve the number of ones exactly; with k = 0 or
    k = length the inversion has nothing to flip and is the identity.
    """
    if rng.random() < 0.5:
        out = g.bits.copy()
        ones = np.nonzero(out)[0]
        zeros = np.nonzero(out == 0)[0]
        if ones.size and zeros.size:
            out[ones[int(rng.integers(ones.size))]] = 0
            out[zeros[int(rng.integers(zeros.size))]] = 1
    else:
        out = _shuffle_segment(g.bits, rng)
    return _rewrap(g, out)


def crossover_wanf(p1: WanfBitstring, p2: WanfBitstring, rng) -> WanfBitstring:
    """Weight-clamped merge: copy each gene from a random parent until the
    child has k ones (rest zeros) or len-k zeros (rest ones)."""
    if p1.bits.size != p2.bits.size:
        raise ValueError(f"parent length mismatch: {p1.bits.size} != {p2.bits.size}")
    k = int(p1.bits.sum())
    if int(p2.bits.sum()) != k:
        raise ValueError(f"parent weight mismatch: {k} != {int(p2.bits.sum())}")
    length = p1.bits.size
    take_p2 = rng.integers(0, 2, size=length).astype(bool)
    merged = np.where(take_p2, p2.bits, p1.bits)
    # Before either counter saturates, the merged prefix and the scan agree,
    # and only one clamp can fire; find the earlier saturation point. The
    # counters step by at most one, so the first index reaching the target
    # is the first index at or above it (searchsorted), with `length` as the
    # no-hit sentinel.
    ones = np.cumsum(merged)
    t1 = int(np.searchsorted(ones, k))
    t0 = int(np.searchsorted(np.arange(1, length + 1) - ones, length - k))
    child = merged.copy()
    if t1 < t0:
        child[t1 + 1:] = 0
    elif t0 < t1:
        child[t0 + 1:] = 1
    return _rewrap(p1, child)


# ---------------------------------------------------------------------------
# Random initialization
# ---------------------------------------------------------------------------

def random_genotype(encoding: str, n: int, d: int, k: int | None, rng,
                    max_depth: int = DEFAULT_MAX_DEPTH,
                    init_depths=DEFAULT_INIT_DEPTHS) -> Genotype:
    if encoding == "gp":
        return random_tree(n, rng, max_depth, init_depths)
    if encoding == "tt":
        return TtBitstring(n, rng.integers(0, 2, size=1 << n).astype(np.uint8))
    length = comb(n, d)
    if encoding == "ranf":
        return RanfBitstring(n, d, rng.integers(0, 2, size=length).astype(np.uint8))
    if encoding == "wanf":
        if k is None:
            raise ValueError("wANF initialization requires k")
        if k > length:
            raise ValueError(f"k={k} exceeds the number of degree-{d} monomials C({n},{d})={length}")
        bits = np.zeros(length, dtype=np.uint8)
        bits[rng.choice(length, size=k, replace=False)] = 1
        return WanfBitstring(n, d, bits, k)
    raise ValueError(f"unknown encoding {encoding!r}")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def serialize_genotype(g: Genotype) -> str:
    if isinstance(g, GpTree):
        return to_sexpr(g.root)
    return "".join("1" if b else "0" for b in g.bits)


def parse_genotype(text: str, encoding: str, n: int, d: int, k: int | None = None) -> Genotype:
    if encoding == "gp":
        return parse_sexpr(text)
    bits = np.array([int(c) for c in text.strip()], dtype=np.uint8)
    if encoding == "tt":
        return TtBitstring(n, bits)
    if encoding == "ranf":
        return RanfBitstring(n, d, bits)
    if encoding == "wanf":
        return WanfBitstring(n, d, bits, int(bits.sum()) if k is None else k)
    raise ValueError(f"unknown encoding {encoding!r}")

"""Objective functions rewarding flat Walsh spectra.

The primary objective adds a fractional refinement to nonlinearity: the
fewer spectrum entries attain the maximal absolute value, the closer the
search is to clearing the next nonlinearity level, so

    value = nl + (2^n - #max_values) / 2^n

with the fraction always in [0, 1). The k-restricted variant first
penalizes any deviation from the required monomial count and only
evaluates the spectrum once the count is right.

Values are kept as exact integers scaled by 2^n, so comparisons and ties
are deterministic; the real-valued form exists for display only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hombent.core import AnfVector, TruthTable, WalshSpectrum, monomial_count, walsh_values


@dataclass(frozen=True, eq=False)
class FitnessValue:
    """Exact fitness: value = key / scale, scale = 2^n.

    Non-penalized values carry (nl, max_count); penalized ones carry the
    monomial-count distance and order strictly below every non-penalized
    value.
    """

    key: int
    scale: int
    nl: int | None = None
    max_count: int | None = None
    penalty: int | None = None

    @property
    def value(self) -> float:
        return self.key / self.scale

    def _cmp_key(self, other: "FitnessValue") -> int:
        if self.scale != other.scale:
            raise ValueError("fitness values from different problem sizes are not comparable")
        return other.key

    def __eq__(self, other) -> bool:
        return isinstance(other, FitnessValue) and self.key == self._cmp_key(other)

    def __lt__(self, other) -> bool:
        return self.key < self._cmp_key(other)

    def __le__(self, other) -> bool:
        return self.key <= self._cmp_key(other)

    def __gt__(self, other) -> bool:
        return self.key > self._cmp_key(other)

    def __ge__(self, other) -> bool:
        return self.key >= self._cmp_key(other)

    __hash__ = None

    def __str__(self) -> str:
        return f"{self.value:.6f}"


def count_max_values(spec: WalshSpectrum) -> int:
    """Number of spectrum entries attaining max |W|."""
    magnitudes = np.abs(spec.values)
    return int(np.count_nonzero(magnitudes == magnitudes.max()))


def bent_key_from_values(values: np.ndarray, n: int) -> tuple[int, int, int]:
    """(scaled key, nl, max_count) from a raw spectrum array."""
    magnitudes = np.abs(values)
    peak = int(magnitudes.max())
    cnt = int(np.count_nonzero(magnitudes == peak))
    nl = (1 << (n - 1)) - peak // 2
    scale = 1 << n
    return nl * scale + (scale - cnt), nl, cnt


def penalty_key(num_monomials: int, k: int, n: int) -> int:
    """Scaled key of the penalized branch, -|num_monomials - k|."""
    return -abs(num_monomials - k) * (1 << n)


def fit_bent(tt: TruthTable) -> FitnessValue:
    """nl + (2^n - #max_values)/2^n, computed from one spectrum pass."""
    key, nl, cnt = bent_key_from_values(walsh_values(tt.bits), tt.n)
    return FitnessValue(key, 1 << tt.n, nl=nl, max_count=cnt)


def fit_bent_k(anf: AnfVector, tt: TruthTable, k: int) -> FitnessValue:
    """Like fit_bent, but -|terms - k| without touching the spectrum when
    the monomial count is off."""
    num = monomial_count(anf)
    if num != k:
        return FitnessValue(penalty_key(num, k, anf.n), 1 << anf.n, penalty=abs(num - k))
    return fit_bent(tt)

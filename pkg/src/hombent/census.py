"""Exact counts, densities, and brute-force enumeration of homogeneous
bent functions.

The density of homogeneous degree-d bent functions in n variables is the
bent fraction of the 2^C(n,d) functions spanned by the degree-d monomials;
restricting to functions with exactly k terms divides by C(C(n,d), k)
instead. All densities are exact big-integer rationals; decimal strings
are renderings only.

Three independent sources of truth live here and must agree where they
overlap:

  * the closed-form count of quadratic bent functions,
  * exhaustive enumeration (feasible while C(n,d) <= 24),
  * a rank test on the quadratic form's symplectic matrix over GF(2).

Counts for cubic functions in eight variables (C(8,3) = 56 is far beyond
enumeration) are shipped as published reference data, clearly marked.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

import numpy as np

from hombent.core import (
    AnfVector,
    InfeasibleEnumerationError,
    _weight_table,
    walsh_butterfly,
    weight_d_masks,
    xor_butterfly,
)

ENUMERATION_MAX_BITS = 24
_BLOCK = 1 << 12


def quadratic_bent_count(n: int) -> int:
    """Exact number of quadratic homogeneous bent functions in n variables."""
    if n % 2 or n < 2:
        raise ValueError(f"quadratic bent functions require even n >= 2, got {n}")
    k = n // 2
    total = 1 << (k * k - k)
    for i in range(k):
        total *= (1 << (2 * i + 1)) - 1
    return total


def quadratic_bent_density(n: int) -> Fraction:
    return Fraction(quadratic_bent_count(n), 1 << comb(n, 2))


def asymptotic_quadratic_density(terms: int) -> float:
    """Partial product of prod_i (1 - (1/2)(1/4)^i); 30 terms give the
    limiting quadratic density to six decimals (about 0.419422)."""
    if terms < 1:
        raise ValueError(f"need at least one factor, got {terms}")
    product = 1.0
    factor = 0.5
    for _ in range(terms):
        product *= 1.0 - factor
        factor *= 0.25
    return product


def quadratic_bent_oracle(anf: AnfVector) -> bool:
    """Rank test independent of the spectrum: a quadratic homogeneous
    function is bent iff its symmetric coefficient matrix (zero diagonal)
    is nonsingular over GF(2)."""
    n = anf.n
    masks = np.nonzero(anf.coeffs)[0]
    weights = _weight_table(n)[masks]
    if masks.size and not np.all(weights == 2):
        raise ValueError("oracle requires a homogeneous quadratic (or all-zero) ANF")
    rows = [0] * n
    for mask in masks:
        mask = int(mask)
        i = mask.bit_length() - 1
        j = (mask ^ (1 << i)).bit_length() - 1
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return _f2_rank(rows) == n


def _f2_rank(rows: list[int]) -> int:
    rows = [r for r in rows]
    rank = 0
    for col in range(max((r.bit_length() for r in rows), default=0)):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i] >> col & 1:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] >> col & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------

def _check_enumerable(n: int, d: int) -> int:
    if n % 2:
        raise ValueError(f"bent functions require even n, got {n}")
    length = comb(n, d)
    if length > ENUMERATION_MAX_BITS:
        raise InfeasibleEnumerationError(
            f"C({n},{d}) = {length} exceeds the enumeration bound of {ENUMERATION_MAX_BITS} bits "
            f"(2^{length} candidates)"
        )
    return length


def bent_flags_for_candidates(candidates: np.ndarray, n: int, d: int) -> np.ndarray:
    """Boolean bent flag per reduced-ANF candidate (rows of genotype bits)."""
    m = 1 << n
    anf = np.zeros((candidates.shape[0], m), dtype=np.uint8)
    anf[:, weight_d_masks(n, d)] = candidates
    tt = xor_butterfly(anf)
    spectra = walsh_butterfly(1 - 2 * tt.astype(np.int32))
    return np.all(np.abs(spectra) == 1 << (n // 2), axis=1)


def enumerate_homogeneous_bent(n: int, d: int, k_filter: int | None = None) -> Iterator[AnfVector]:
    """Yield every homogeneous degree-d bent function, in increasing order
    of the reduced-ANF bitstring read as an integer (bit t = t-th smallest
    degree-d mask)."""
    length = _check_enumerable(n, d)
    masks = weight_d_masks(n, d)
    total = 1 << length
    bit_index = np.arange(length, dtype=np.uint32)
    for start in range(0, total, _BLOCK):
        stop = min(start + _BLOCK, total)
        values = np.arange(start, stop, dtype=np.uint32)
        if k_filter is not None:
            values = values[np.bitwise_count(values) == k_filter]
            if values.size == 0:
                continue
        candidates = ((values[:, None] >> bit_index) & 1).astype(np.uint8)
        flags = bent_flags_for_candidates(candidates, n, d)
        for row in np.nonzero(flags)[0]:
            anf = np.zeros(1 << n, dtype=np.uint8)
            anf[masks] = candidates[row]
            yield AnfVector(n, anf)


# ---------------------------------------------------------------------------
# Density reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TermDensity:
    count: int
    density: Fraction


@dataclass(frozen=True)
class DensityReport:
    n: int
    d: int
    total_count: int
    density: Fraction
    by_terms: dict[int, TermDensity] | None
    source: str  # "enumerated", "closed-form", or "published-reference"

    def density_decimal(self) -> str:
        return _decimal(self.density)

    def rows(self) -> list[tuple[int, int, int, int, str]]:
        """CSV rows (k, count, numerator, denominator, decimal), non-zero k only."""
        if self.by_terms is None:
            return []
        out = []
        for k in sorted(self.by_terms):
            td = self.by_terms[k]
            out.append((k, td.count, td.density.numerator, td.density.denominator,
                        _decimal(td.density)))
        return out


def _decimal(value: Fraction) -> str:
    return f"{float(value):.6g}"


def density_report(n: int, d: int) -> DensityReport:
    """Exact densities; enumerated when feasible, otherwise the quadratic
    closed form (total only)."""
    length = comb(n, d)
    if length <= ENUMERATION_MAX_BITS:
        counts: dict[int, int] = {}
        for anf in enumerate_homogeneous_bent(n, d):
            k = int(anf.coeffs.sum())
            counts[k] = counts.get(k, 0) + 1
        total = sum(counts.values())
        if d == 2:
            formula = quadratic_bent_count(n)
            if total != formula:
                raise AssertionError(
                    f"enumeration found {total} quadratic bent functions, closed form says {formula}"
                )
        by_terms = {k: TermDensity(c, Fraction(c, comb(length, k))) for k, c in sorted(counts.items())}
        return DensityReport(n, d, total, Fraction(total, 1 << length), by_terms, "enumerated")
    if d == 2:
        total = quadratic_bent_count(n)
        return DensityReport(n, d, total, Fraction(total, 1 << length), None, "closed-form")
    raise InfeasibleEnumerationError(
        f"C({n},{d}) = {length} exceeds the enumeration bound of {ENUMERATION_MAX_BITS} bits "
        f"and no closed form is available for degree {d}"
    )


# ---------------------------------------------------------------------------
# Published reference data: cubic bent functions
# ---------------------------------------------------------------------------

# Known monomial counts k for which homogeneous cubic bent functions exist.
_KNOWN_CUBIC_K = {
    6: [16],
    8: [24, 27, 28, 32, 34, 35, 36, 37, 39, 41],
    10: [39, 49, 53, 57, 58, 61, 65, 66, 69, 70, 72, 75, 78],
    12: [60, 90, 100, 110, 130, 140, 150],
    16: [168],
}

# Published counts of homogeneous cubic bent functions in 8 variables per
# number of ANF terms; enumeration over 2^56 candidates is out of reach,
# so these are reference values, not recomputed.
CUBIC_COUNTS_N8 = {
    24: 6720,
    27: 13440,
    28: 5760,
    32: 6720,
    34: 13440,
    35: 19200,
    36: 80640,
    37: 67200,
    39: 40320,
    41: 40320,
}

# Densities as published alongside the counts above (six significant digits).
CUBIC_DENSITY_DECIMALS_N8 = {
    24: 1.54304e-12,
    27: 1.81992e-12,
    28: 7.53070e-13,
    32: 1.54304e-12,
    34: 6.27280e-12,
    35: 1.42564e-11,
    36: 1.02646e-10,
    37: 1.58246e-10,
    39: 4.11439e-10,
    41: 2.48073e-9,
}


def known_cubic_k_values(n: int) -> list[int]:
    """Published term counts k admitting cubic homogeneous bent functions."""
    try:
        return list(_KNOWN_CUBIC_K[n])
    except KeyError:
        raise ValueError(f"no published cubic term-count data for n={n}; "
                         f"known sizes: {sorted(_KNOWN_CUBIC_K)}") from None


def published_cubic_report(n: int = 8) -> DensityReport:
    """Reference density report for cubic functions in 8 variables."""
    if n != 8:
        raise ValueError(f"published per-term cubic counts are available for n=8 only, got {n}")
    length = comb(8, 3)
    by_terms = {k: TermDensity(c, Fraction(c, comb(length, k)))
                for k, c in sorted(CUBIC_COUNTS_N8.items())}
    total = sum(CUBIC_COUNTS_N8.values())
    return DensityReport(8, 3, total, Fraction(total, 1 << length), by_terms, "published-reference")


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

def write_report_csv(report: DensityReport, path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["k", "count", "density_numerator", "density_denominator", "density_decimal"])
        for row in report.rows():
            writer.writerow(row)


def write_report_text(report: DensityReport, path) -> None:
    lines = [
        f"homogeneous bent census: n={report.n}, degree={report.d}",
        f"source: {report.source}",
        f"total count: {report.total_count}",
        f"density: {report.density.numerator}/{report.density.denominator}"
        f" = {report.density_decimal()}",
    ]
    if report.source == "published-reference":
        lines.append("note: published reference, not recomputed")
    if report.by_terms is not None:
        lines.append("")
        lines.append(f"{'k':>4}  {'count':>12}  density")
        for k, count, num, den, dec in report.rows():
            lines.append(f"{k:>4}  {count:>12}  {num}/{den} = {dec}")
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")

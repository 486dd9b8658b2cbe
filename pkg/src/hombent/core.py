"""Exact representations and transforms of n-variable Boolean functions.

A function f on n variables is stored as its 2^n-bit truth table. Input
vector (x_1, ..., x_n) maps to the integer index sum(x_j * 2^(n-j)), i.e.
x_1 is the most significant bit. The same convention doubles as the
monomial-mask convention: mask bit 2^(n-j) stands for variable x_j, so the
coefficient vector of the algebraic normal form (ANF) is again a 2^n-bit
vector indexed by monomial mask.

Three exact, integer-only transforms connect the representations:

  * the binary Moebius transform maps truth table to ANF coefficients;
    it is an involution, so the same butterfly maps ANF back to the
    truth table;
  * the Walsh-Hadamard transform W(a) = sum_x (-1)^(f(x) XOR a.x) gives
    the correlation spectrum against the linear functions, from which
    nonlinearity and bentness are read off.

Everything here is a pure function on immutable values; no floating
point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_N = 16

# Single-vector transforms go through a cached matrix multiply up to this
# size; above it (and for batches) the butterfly network is used instead.
_MATMUL_MAX_N = 8


class InfeasibleEnumerationError(ValueError):
    """Raised when a requested exhaustive sweep exceeds the size guard."""


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"variable count must be in [1, {MAX_N}], got {n}")


def _as_bits(values, length: int, what: str) -> np.ndarray:
    bits = np.ascontiguousarray(values, dtype=np.uint8)
    if bits.shape != (length,):
        raise ValueError(f"{what} must have length {length}, got shape {bits.shape}")
    if np.any(bits > 1):
        raise ValueError(f"{what} entries must be 0 or 1")
    return bits


def var_mask(n: int, j: int) -> int:
    """Mask bit of variable x_j (1-based, x_1 most significant)."""
    if not 1 <= j <= n:
        raise ValueError(f"variable index must be in [1, {n}], got {j}")
    return 1 << (n - j)


@lru_cache(maxsize=None)
def _weight_table(n: int) -> np.ndarray:
    """Hamming weight of every mask in [0, 2^n)."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.uint8)


def weight_d_masks(n: int, d: int) -> np.ndarray:
    """All masks of weight d in increasing integer order (C(n,d) of them)."""
    if not 0 <= d <= n:
        raise ValueError(f"degree must be in [0, {n}], got {d}")
    return np.nonzero(_weight_table(n) == d)[0].astype(np.uint32)


# ---------------------------------------------------------------------------
# Bit-vector <-> integer / hex helpers
# ---------------------------------------------------------------------------

def bits_to_int(bits: np.ndarray) -> int:
    """Pack a bit vector into an int with bits[0] as the least significant bit."""
    out = 0
    for i in np.nonzero(bits)[0]:
        out |= 1 << int(i)
    return out


def int_to_bits(value: int, length: int) -> np.ndarray:
    """Inverse of bits_to_int."""
    nbytes = (length + 7) // 8
    raw = np.frombuffer(value.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length].copy()


def _bits_to_hex(bits: np.ndarray) -> str:
    if bits.size % 4:
        raise ValueError("hex form requires a multiple of 4 bits (n >= 2)")
    packed = np.packbits(bits)
    value = int.from_bytes(packed.tobytes(), "big") >> (8 * packed.size - bits.size)
    return format(value, f"0{bits.size // 4}x")


def _hex_to_bits(text: str) -> np.ndarray:
    text = text.strip().lower()
    if not text:
        raise ValueError("empty hex string")
    for pos, ch in enumerate(text):
        if ch not in "0123456789abcdef":
            raise ValueError(f"invalid hex digit {ch!r} at position {pos}")
    nbits = 4 * len(text)
    if nbits & (nbits - 1):
        raise ValueError(f"hex string of {len(text)} digits does not encode a power-of-two bit count")
    padded = text if len(text) % 2 == 0 else "0" + text
    raw = np.frombuffer(bytes.fromhex(padded), dtype=np.uint8)
    return np.unpackbits(raw)[-nbits:].copy()


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TruthTable:
    """Output column of an n-variable Boolean function in index order."""

    n: int
    bits: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "bits", _as_bits(self.bits, 1 << self.n, "truth table"))

    def __eq__(self, other) -> bool:
        return isinstance(other, TruthTable) and self.n == other.n and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def to_hex(self) -> str:
        return _bits_to_hex(self.bits)

    @classmethod
    def from_hex(cls, text: str, n: int | None = None) -> "TruthTable":
        bits = _hex_to_bits(text)
        inferred = bits.size.bit_length() - 1
        if n is not None and n != inferred:
            raise ValueError(f"hex string encodes 2^{inferred} bits, expected n={n}")
        return cls(inferred, bits)


@dataclass(frozen=True, eq=False)
class AnfVector:
    """ANF coefficient vector: bit at mask a is the coefficient of x^a."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "coeffs", _as_bits(self.coeffs, 1 << self.n, "ANF vector"))

    def __eq__(self, other) -> bool:
        return isinstance(other, AnfVector) and self.n == other.n and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def to_hex(self) -> str:
        return _bits_to_hex(self.coeffs)

    @classmethod
    def from_hex(cls, text: str, n: int | None = None) -> "AnfVector":
        bits = _hex_to_bits(text)
        inferred = bits.size.bit_length() - 1
        if n is not None and n != inferred:
            raise ValueError(f"hex string encodes 2^{inferred} bits, expected n={n}")
        return cls(inferred, bits)

    def to_monomials(self) -> str:
        """Human-readable sum of monomials, terms in increasing mask order."""
        terms = []
        for mask in np.nonzero(self.coeffs)[0]:
            mask = int(mask)
            if mask == 0:
                terms.append("1")
            else:
                variables = [f"x{j}" for j in range(1, self.n + 1) if mask & var_mask(self.n, j)]
                terms.append("*".join(variables))
        return " + ".join(terms) if terms else "0"

    @classmethod
    def from_monomials(cls, text: str, n: int) -> "AnfVector":
        """Parse the monomial form; repeated terms cancel (GF(2) sum)."""
        _check_n(n)
        coeffs = np.zeros(1 << n, dtype=np.uint8)
        stripped = text.strip()
        if stripped != "0":
            for pos, term in enumerate(stripped.split("+")):
                term = term.strip()
                if term == "1":
                    coeffs[0] ^= 1
                    continue
                mask = 0
                for factor in term.split("*"):
                    factor = factor.strip()
                    if not factor.startswith("x") or not factor[1:].isdigit():
                        raise ValueError(f"malformed factor {factor!r} in term {pos}")
                    j = int(factor[1:])
                    if not 1 <= j <= n:
                        raise ValueError(f"variable x{j} out of range for n={n} in term {pos}")
                    mask |= var_mask(n, j)
                if mask == 0:
                    raise ValueError(f"empty term at position {pos}")
                coeffs[mask] ^= 1
        return cls(n, coeffs)


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """Integer correlation spectrum; entry a is W_f(a)."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        _check_n(self.n)
        values = np.ascontiguousarray(self.values, dtype=np.int32)
        if values.shape != (1 << self.n,):
            raise ValueError(f"spectrum must have length {1 << self.n}, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def __eq__(self, other) -> bool:
        return isinstance(other, WalshSpectrum) and self.n == other.n and np.array_equal(self.values, other.values)

    __hash__ = None


# ---------------------------------------------------------------------------
# Transforms: butterfly networks (any batch shape) and cached-matrix
# single-vector fast paths
# ---------------------------------------------------------------------------

def xor_butterfly(arr: np.ndarray) -> np.ndarray:
    """In-place Moebius butterfly on the last axis (length 2^n).

    For each variable position the lower half of every block is XORed
    into the upper half; n passes give coeffs[a] = XOR of arr[x] over
    all x covered by a. The transform is an involution.
    """
    m = arr.shape[-1]
    h = 1
    while h < m:
        view = arr.reshape(arr.shape[:-1] + (m // (2 * h), 2, h))
        view[..., 1, :] ^= view[..., 0, :]
        h <<= 1
    return arr


def walsh_butterfly(signs: np.ndarray) -> np.ndarray:
    """Fast Walsh-Hadamard transform of a +/-1 array along the last axis."""
    out = signs.astype(np.int32)
    m = out.shape[-1]
    h = 1
    while h < m:
        view = out.reshape(out.shape[:-1] + (m // (2 * h), 2, h))
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] = lo + hi
        view[..., 1, :] = lo - hi
        h <<= 1
    return out


@lru_cache(maxsize=None)
def _covering_matrix(n: int) -> np.ndarray:
    """Z[a, x] = 1 iff x is covered by a (componentwise x <= a)."""
    idx = np.arange(1 << n, dtype=np.uint32)
    return ((~idx[:, None] & idx[None, :]) == 0).astype(np.uint8)


@lru_cache(maxsize=None)
def _sign_matrix(n: int) -> np.ndarray:
    """H[a, x] = (-1)^(a.x); symmetric."""
    idx = np.arange(1 << n, dtype=np.uint32)
    parity = np.bitwise_count(idx[:, None] & idx[None, :]) & 1
    return np.where(parity, -1, 1).astype(np.int16)


def mobius_bits(bits: np.ndarray) -> np.ndarray:
    """Moebius transform of one or many 2^n bit vectors (last axis)."""
    n = int(bits.shape[-1]).bit_length() - 1
    if bits.ndim == 1 and n <= _MATMUL_MAX_N:
        # uint8 matmul wraps mod 256, which preserves parity
        return (_covering_matrix(n) @ bits) & 1
    return xor_butterfly(bits.copy())


def walsh_values(bits: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard spectrum of one or many truth-table bit vectors."""
    n = int(bits.shape[-1]).bit_length() - 1
    if bits.ndim == 1 and n <= _MATMUL_MAX_N:
        signs = 1 - 2 * bits.astype(np.int16)
        return _sign_matrix(n) @ signs
    return walsh_butterfly(1 - 2 * bits.astype(np.int32))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def mobius_transform(tt: TruthTable) -> AnfVector:
    """ANF coefficients h(a) = XOR of f(x) over all x covered by a."""
    return AnfVector(tt.n, mobius_bits(tt.bits))


def anf_to_truth_table(anf: AnfVector) -> TruthTable:
    """Inverse of mobius_transform (the same butterfly; involution)."""
    return TruthTable(anf.n, mobius_bits(anf.coeffs))


def walsh_hadamard(tt: TruthTable) -> WalshSpectrum:
    """Exact integer spectrum W(a) = sum_x (-1)^(f(x) XOR a.x)."""
    return WalshSpectrum(tt.n, walsh_values(tt.bits))


def covering_radius_bound(n: int) -> int:
    """Maximal nonlinearity 2^(n-1) - 2^(n/2-1); integral for even n only."""
    if n % 2:
        raise ValueError(f"covering radius bound is integral for even n only, got {n}")
    return (1 << (n - 1)) - (1 << (n // 2 - 1))


def nonlinearity(spec: WalshSpectrum) -> int:
    """Minimum distance to the affine functions: 2^(n-1) - max|W|/2."""
    return (1 << (spec.n - 1)) - int(np.max(np.abs(spec.values))) // 2


def is_bent(spec: WalshSpectrum) -> bool:
    """True iff every |W(a)| equals 2^(n/2); false for odd n."""
    if spec.n % 2:
        return False
    return bool(np.all(np.abs(spec.values) == 1 << (spec.n // 2)))


def algebraic_degree(anf: AnfVector) -> int:
    """Largest monomial weight with a set coefficient; 0 for constants."""
    masks = np.nonzero(anf.coeffs)[0]
    if masks.size == 0:
        return 0
    return int(_weight_table(anf.n)[masks].max())


def is_homogeneous(anf: AnfVector, d: int) -> bool:
    """True iff the ANF is non-empty and every set mask has weight d."""
    if not 0 <= d <= anf.n:
        raise ValueError(f"degree must be in [0, {anf.n}], got {d}")
    masks = np.nonzero(anf.coeffs)[0]
    if masks.size == 0:
        return False
    return bool(np.all(_weight_table(anf.n)[masks] == d))


def repair_bits(coeffs: np.ndarray, n: int, d: int) -> np.ndarray:
    """Zero every coefficient whose mask weight differs from d (any batch shape)."""
    return coeffs & (_weight_table(n) == d)


def homogeneity_repair(anf: AnfVector, d: int) -> AnfVector:
    """Corrected ANF: drop all monomials of the wrong degree; idempotent."""
    if not 0 <= d <= anf.n:
        raise ValueError(f"degree must be in [0, {anf.n}], got {d}")
    return AnfVector(anf.n, repair_bits(anf.coeffs, anf.n, d))


def monomial_count(anf: AnfVector) -> int:
    """Number of monomials (Hamming weight of the coefficient vector)."""
    return int(np.sum(anf.coeffs))

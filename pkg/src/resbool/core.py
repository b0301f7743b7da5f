"""Truth tables, Walsh-Hadamard and Moebius transforms, exhaustive profiling.

Index convention used everywhere in the package: the bit at table index
``i`` is ``f(x_1, ..., x_n)`` with ``x_j`` equal to bit ``j-1`` of ``i``,
so ``x_1`` is the least-significant index bit. Walsh masks are encoded the
same way. Concatenations put the block selector in the high-order bits.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapacityError, ShapeError

DEFAULT_MAX_N = 30
NAIVE_MAX_N = 14
CAPACITY_ENV = "RESBOOL_MAX_N"


def max_variables() -> int:
    """Configured capacity (``RESBOOL_MAX_N`` overrides the default of 30)."""
    raw = os.environ.get(CAPACITY_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise CapacityError(f"{CAPACITY_ENV}={raw!r} is not an integer") from None


def check_capacity(n: int) -> None:
    limit = max_variables()
    if n > limit:
        raise CapacityError(f"n={n} exceeds the configured capacity of {limit} variables")


def popcounts(n: int) -> np.ndarray:
    """Hamming weight of every index in ``range(2**n)``."""
    return _popcounts(n)


@lru_cache(maxsize=8)
def _popcounts(n: int) -> np.ndarray:
    w = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int8)
    w.flags.writeable = False
    return w


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self):
        if self.n < 0:
            raise ShapeError(f"variable count must be non-negative, got {self.n}")
        check_capacity(self.n)
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size != 1 << self.n:
            raise ShapeError(f"expected {1 << self.n} bits for n={self.n}, got shape {bits.shape}")
        if bits.dtype != np.uint8:
            if bits.size and (bits.min() < 0 or bits.max() > 1):
                raise ShapeError("truth table entries must be 0 or 1")
            bits = bits.astype(np.uint8)
        elif bits.size and bits.max() > 1:
            raise ShapeError("truth table entries must be 0 or 1")
        object.__setattr__(self, "bits", _frozen(bits))

    @classmethod
    def zeros(cls, n: int) -> "TruthTable":
        return cls(n, np.zeros(1 << n, dtype=np.uint8))

    @classmethod
    def constant(cls, n: int, value: int) -> "TruthTable":
        return cls(n, np.full(1 << n, value & 1, dtype=np.uint8))

    @classmethod
    def linear(cls, n: int, mask: int) -> "TruthTable":
        """The linear function ``mask . X_n``."""
        idx = np.arange(1 << n, dtype=np.uint64)
        return cls(n, (np.bitwise_count(idx & np.uint64(mask)) & 1).astype(np.uint8))

    @classmethod
    def from_function(cls, n: int, fn: Callable[[tuple[int, ...]], int]) -> "TruthTable":
        """Tabulate ``fn((x_1, ..., x_n))``."""
        bits = [fn(tuple((i >> j) & 1 for j in range(n))) & 1 for i in range(1 << n)]
        return cls(n, np.array(bits, dtype=np.uint8))

    @classmethod
    def from_monomials(cls, n: int, monomials: Iterable[Iterable[int]]) -> "TruthTable":
        """Build from an ANF given as monomials of 1-based variable indices."""
        coeffs = np.zeros(1 << n, dtype=np.uint8)
        for mono in monomials:
            u = 0
            for var in mono:
                if not 1 <= var <= n:
                    raise ShapeError(f"variable x{var} out of range for n={n}")
                u |= 1 << (var - 1)
            coeffs[u] ^= 1
        return cls(n, moebius(coeffs))

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        if other.n != self.n:
            raise ShapeError(f"cannot xor tables on {self.n} and {other.n} variables")
        return TruthTable(self.n, self.bits ^ other.bits)

    @property
    def weight(self) -> int:
        return int(self.bits.sum(dtype=np.int64))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    n: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1 or values.size != 1 << self.n:
            raise ShapeError(f"expected {1 << self.n} spectrum values for n={self.n}")
        if not np.issubdtype(values.dtype, np.integer):
            raise ShapeError("spectrum values must be integers")
        object.__setattr__(self, "values", _frozen(values))

    def __getitem__(self, omega: int) -> int:
        return int(self.values[omega])

    def __eq__(self, other) -> bool:
        if not isinstance(other, WalshSpectrum):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    __hash__ = None

    def max_abs(self) -> int:
        return int(np.abs(self.values).max())


@dataclass(frozen=True, eq=False)
class AnfForm:
    n: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.uint8)
        if c.ndim != 1 or c.size != 1 << self.n:
            raise ShapeError(f"expected {1 << self.n} ANF coefficients for n={self.n}")
        object.__setattr__(self, "coefficients", _frozen(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnfForm):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.coefficients, other.coefficients)

    __hash__ = None

    def monomials(self) -> list[tuple[int, ...]]:
        """Monomials with nonzero coefficient, as sorted tuples of 1-based variables."""
        out = []
        for u in np.flatnonzero(self.coefficients):
            u = int(u)
            out.append(tuple(j + 1 for j in range(self.n) if (u >> j) & 1))
        out.sort()
        return out

    def to_string(self) -> str:
        monos = self.monomials()
        if not monos:
            return "0"
        return " + ".join("*".join(f"x{v}" for v in mono) if mono else "1" for mono in monos)


@dataclass(frozen=True)
class FunctionProfile:
    n: int
    resiliency: int
    degree: int
    nonlinearity: int
    balanced: bool
    almost_optimal: bool

    def as_tuple(self) -> tuple[int, int, int, int]:
        """``(n, m, d, N)`` in the usual notation."""
        return (self.n, self.resiliency, self.degree, self.nonlinearity)


# -- transforms ---------------------------------------------------------------


def butterfly(a: np.ndarray) -> np.ndarray:
    """In-place unnormalised Walsh-Hadamard butterfly along the last axis."""
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        lo = v[..., 0, :].copy()
        hi = v[..., 1, :]
        v[..., 0, :] += hi
        np.subtract(lo, hi, out=hi)
        h *= 2
    return a


def _spectrum_dtype(n: int):
    # |W| <= 2**n, and every butterfly stage stays within that bound
    return np.int64 if n <= 26 else np.int32


def signs(bits: np.ndarray, dtype=np.int64) -> np.ndarray:
    """Map a 0/1 array to +1/-1."""
    return (1 - 2 * bits.astype(dtype)).astype(dtype, copy=False)


def fast_walsh(f: TruthTable) -> WalshSpectrum:
    """Walsh spectrum by the O(n 2^n) butterfly."""
    check_capacity(f.n)
    a = signs(f.bits, _spectrum_dtype(f.n))
    return WalshSpectrum(f.n, butterfly(a))


def fast_walsh_many(tables: np.ndarray) -> np.ndarray:
    """Spectra of a stack of truth tables (rows of 0/1), one row per function."""
    a = signs(np.asarray(tables))
    return butterfly(a)


@lru_cache(maxsize=2)
def _sign_matrix(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.uint32)
    parity = np.bitwise_count(np.bitwise_and.outer(idx, idx)) & 1
    mat = (1.0 - 2.0 * parity).astype(np.float32)
    mat.flags.writeable = False
    return mat


def naive_walsh(f: TruthTable) -> WalshSpectrum:
    """Walsh spectrum by direct summation over all (omega, x) pairs.

    Independent of the butterfly; used as the correctness oracle.
    """
    if f.n > NAIVE_MAX_N:
        raise CapacityError(f"naive Walsh transform refuses n={f.n} > {NAIVE_MAX_N}")
    s = signs(f.bits)
    if f.n <= 12:
        # float32 is exact here: every partial sum is an integer of magnitude <= 4096
        vals = _sign_matrix(f.n) @ s.astype(np.float32)
        return WalshSpectrum(f.n, np.rint(vals).astype(np.int64))
    idx = np.arange(1 << f.n, dtype=np.uint32)
    out = np.empty(1 << f.n, dtype=np.int64)
    step = 256
    for start in range(0, 1 << f.n, step):
        rows = idx[start:start + step]
        parity = (np.bitwise_count(np.bitwise_and.outer(rows, idx)) & 1).astype(np.int64)
        out[start:start + step] = (1 - 2 * parity) @ s
    return WalshSpectrum(f.n, out)


def restricted_walsh(f: TruthTable, masks: Iterable[int]) -> dict[int, int]:
    """``W_f(omega)`` for the requested masks only, each by an O(2^n) sum."""
    masks = sorted(set(int(w) for w in masks))
    if not masks:
        raise ValueError("restricted_walsh needs at least one mask")
    idx = np.arange(1 << f.n, dtype=np.uint64)
    fb = f.bits.astype(np.uint64)
    out = {}
    for w in masks:
        if not 0 <= w < 1 << f.n:
            raise ShapeError(f"mask {w} out of range for n={f.n}")
        e = (np.bitwise_count(idx & np.uint64(w)).astype(np.uint64) ^ fb) & np.uint64(1)
        ones = int(e.sum(dtype=np.int64))
        out[w] = (1 << f.n) - 2 * ones
    return out


def masks_up_to_weight(n: int, m: int) -> list[int]:
    w = popcounts(n)
    return [int(i) for i in np.flatnonzero(w <= m)]


def moebius(bits: np.ndarray) -> np.ndarray:
    """Binary Moebius transform (an involution) along the last axis of a 0/1 array."""
    a = np.array(bits, dtype=np.uint8, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        v[..., 1, :] ^= v[..., 0, :]
        h *= 2
    return a


def anf(f: TruthTable) -> AnfForm:
    check_capacity(f.n)
    return AnfForm(f.n, moebius(f.bits))


def degree(a: AnfForm) -> int:
    """Algebraic degree; -1 for the zero function."""
    nz = np.flatnonzero(a.coefficients)
    if nz.size == 0:
        return -1
    return int(popcounts(a.n)[nz].max())


def nonlinearity(s: WalshSpectrum) -> int:
    return (1 << (s.n - 1)) - s.max_abs() // 2 if s.n >= 1 else 0


def resiliency_order(s: WalshSpectrum) -> int:
    """Largest m with W(omega) = 0 for every wt(omega) <= m; -1 if unbalanced."""
    nz = np.flatnonzero(s.values)
    # Parseval rules out the all-zero spectrum
    return int(popcounts(s.n)[nz].min()) - 1


def parseval_check(s: WalshSpectrum) -> bool:
    # squares fit in 64 bits, their sum may not: accumulate low and high halves apart
    sq = s.values.astype(np.int64).astype(np.uint64) ** 2
    if s.values.size and int(np.abs(s.values).max()) >= 1 << 31:
        return False
    lo = int((sq & np.uint64(0xFFFFFFFF)).sum(dtype=np.uint64))
    hi = int((sq >> np.uint64(32)).sum(dtype=np.uint64))
    return (hi << 32) + lo == 1 << (2 * s.n)


def is_almost_optimal(n: int, nl: int) -> bool:
    if n < 4 or n % 2:
        return False
    return (1 << (n - 1)) - (1 << (n // 2)) <= nl < (1 << (n - 1)) - (1 << (n // 2 - 1))


def profile(f: TruthTable) -> FunctionProfile:
    spec = fast_walsh(f)
    nl = nonlinearity(spec)
    return FunctionProfile(
        n=f.n,
        resiliency=resiliency_order(spec),
        degree=degree(anf(f)),
        nonlinearity=nl,
        balanced=spec[0] == 0,
        almost_optimal=is_almost_optimal(f.n, nl),
    )


def concatenate(blocks: Sequence[TruthTable]) -> TruthTable:
    """Stack ``2^q`` tables on ``p`` variables into one on ``p + q`` variables.

    Block ``b`` lands at indices ``b * 2^p .. (b+1) * 2^p - 1``.
    """
    if not blocks:
        raise ShapeError("cannot concatenate an empty block sequence")
    q = len(blocks).bit_length() - 1
    if 1 << q != len(blocks):
        raise ShapeError(f"block count {len(blocks)} is not a power of two")
    p = blocks[0].n
    for i, blk in enumerate(blocks):
        if blk.n != p:
            raise ShapeError(f"block {i} has {blk.n} variables, expected {p}")
    check_capacity(p + q)
    return TruthTable(p + q, np.concatenate([blk.bits for blk in blocks]))


def concatenation_spectrum(block_spectra: np.ndarray) -> np.ndarray:
    """``W_f(beta, alpha) = sum_b (-1)^{beta.b} W_{g_b}(alpha)`` from a (2^q, 2^p) array.

    Returns the flattened spectrum in the package index convention.
    """
    m = np.array(block_spectra, dtype=np.int64, copy=True)
    t = np.ascontiguousarray(m.T)
    butterfly(t)
    return np.ascontiguousarray(t.T).ravel()


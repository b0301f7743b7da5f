"""Partially linear components and the disjoint-spectra families built from them.

A component on ``p`` variables is ``g(X) = c . X' + h(X'')`` where ``X'`` are
the ``t`` variables listed in ``linear_vars`` and ``X''`` the remaining ones in
increasing order. Its spectrum vanishes unless the ``X'`` coordinates of the
mask equal ``c``, in which case it is ``2^t W_h(theta)``.

Variable positions are 0-based internally (position ``j`` is ``x_{j+1}``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from . import counting
from .core import (
    TruthTable,
    WalshSpectrum,
    anf,
    check_capacity,
    degree,
    fast_walsh,
    fast_walsh_many,
    nonlinearity,
    profile,
    resiliency_order,
)
from .errors import ShapeError, VerificationError
from .formats import SeedRecord, parse_seed_file

EXHAUSTIVE_MAX_P = 14
STANDARD_MIN_N = 12
RELAXED_MIN_N = 8

TAIL_KINDS = ("bent", "resilient", "plain")

_EMPTY_SPECTRUM = np.ones(1, dtype=np.int64)


def gather_bits(values: np.ndarray | int, positions: Sequence[int]):
    """Compress the bits of ``values`` at ``positions`` into a dense integer."""
    if isinstance(values, (int, np.integer)):
        out = 0
        for j, pos in enumerate(positions):
            out |= ((int(values) >> pos) & 1) << j
        return out
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros_like(values)
    for j, pos in enumerate(positions):
        out |= ((values >> pos) & 1) << j
    return out


def scatter_bits(value: int, positions: Sequence[int]) -> int:
    out = 0
    for j, pos in enumerate(positions):
        out |= ((value >> j) & 1) << pos
    return out


def _is_contiguous_prefix(positions: Sequence[int]) -> bool:
    return tuple(positions) == tuple(range(len(positions)))


@dataclass(frozen=True, eq=False)
class Component:
    p: int
    linear_vars: tuple[int, ...]
    mask: int
    tail: TruthTable | None = None
    tail_kind: str | None = None
    tail_resiliency: int | None = None
    tail_name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        t = len(self.linear_vars)
        if len(set(self.linear_vars)) != t or any(not 0 <= v < self.p for v in self.linear_vars):
            raise ShapeError(f"linear variables {self.linear_vars} invalid for p={self.p}")
        if not 0 <= self.mask < 1 << t:
            raise ShapeError(f"mask {self.mask} does not fit in {t} bits")
        tail_n = self.p - t
        if self.tail is None:
            if tail_n:
                raise ShapeError(f"{tail_n} non-linear variables but no tail function")
        elif self.tail.n != tail_n:
            raise ShapeError(f"tail has {self.tail.n} variables, expected {tail_n}")
        if self.tail_kind is not None and self.tail_kind not in TAIL_KINDS:
            raise ShapeError(f"unknown tail kind {self.tail_kind!r}")

    @property
    def t(self) -> int:
        return len(self.linear_vars)

    @cached_property
    def tail_vars(self) -> tuple[int, ...]:
        lin = set(self.linear_vars)
        return tuple(v for v in range(self.p) if v not in lin)

    @cached_property
    def tail_spectrum(self) -> np.ndarray:
        if self.tail is None:
            return _EMPTY_SPECTRUM
        return tail_spectrum(self.tail)

    @cached_property
    def tail_degree(self) -> int:
        if self.tail is None:
            return -1
        return tail_degree(self.tail)

    @property
    def full_mask(self) -> int:
        """``c`` placed at its variable positions within ``X_p``."""
        return scatter_bits(self.mask, self.linear_vars)

    @property
    def resiliency(self) -> int:
        """Structural order ``wt(c) + v`` (``wt(c) - 1`` for a pure linear function)."""
        wt = bin(self.mask).count("1")
        if self.tail is None:
            return wt - 1
        v = self.tail_resiliency
        if v is None:
            v = tail_resiliency(self.tail)
        return wt + v

    @property
    def degree(self) -> int:
        lin = 1 if self.mask else -1
        return max(lin, self.tail_degree)

    @property
    def max_abs_spectrum(self) -> int:
        return (1 << self.t) * int(np.abs(self.tail_spectrum).max())

    def is_pure_linear(self) -> bool:
        return self.tail is None


# tail measurements are shared by every component holding the same table object
_tail_cache: dict[int, tuple[TruthTable, np.ndarray, int, int]] = {}


def _tail_info(h: TruthTable):
    hit = _tail_cache.get(id(h))
    if hit is not None and hit[0] is h:
        return hit
    spec = fast_walsh(h).values.astype(np.int64)
    spec.flags.writeable = False
    info = (h, spec, degree(anf(h)), resiliency_order(WalshSpectrum(h.n, spec)))
    if len(_tail_cache) > 256:
        _tail_cache.clear()
    _tail_cache[id(h)] = info
    return info


def tail_spectrum(h: TruthTable) -> np.ndarray:
    return _tail_info(h)[1]


def tail_degree(h: TruthTable) -> int:
    return _tail_info(h)[2]


def tail_resiliency(h: TruthTable) -> int:
    return _tail_info(h)[3]


def classify_tail(h: TruthTable) -> str:
    spec = tail_spectrum(h)
    if h.n % 2 == 0 and np.all(np.abs(spec) == 1 << (h.n // 2)):
        return "bent"
    if spec[0] == 0:
        return "resilient"
    return "plain"


# -- component operations --------------------------------------------------


def make_component(mask: int, t: int, tail: TruthTable | None = None, v: int | None = None,
                   *, linear_vars: Sequence[int] | None = None, tail_kind: str | None = None,
                   tail_name: str | None = None) -> Component:
    """Build ``c . X'_t + h(X'')``; ``v`` defaults to the exhaustively measured tail order."""
    p = t + (tail.n if tail is not None else 0)
    if linear_vars is None:
        linear_vars = tuple(range(t))
    elif len(linear_vars) != t:
        raise ShapeError(f"{len(linear_vars)} linear variables given for t={t}")
    if tail is not None:
        measured = tail_resiliency(tail)
        if v is None:
            v = measured
        elif v > measured:
            raise VerificationError(f"tail declared {v}-resilient but measures {measured}")
        if tail_kind is None:
            tail_kind = classify_tail(tail)
    return Component(p, tuple(linear_vars), mask, tail, tail_kind, v, tail_name)


def expand(comp: Component) -> TruthTable:
    """Materialise the component's truth table on ``p`` variables."""
    check_capacity(comp.p)
    t = comp.t
    lin = (np.bitwise_count(np.arange(1 << t, dtype=np.uint32) & np.uint32(comp.mask)) & 1).astype(np.uint8)
    h = comp.tail.bits if comp.tail is not None else np.zeros(1, dtype=np.uint8)
    if _is_contiguous_prefix(comp.linear_vars):
        return TruthTable(comp.p, np.bitwise_xor.outer(h, lin).ravel())
    idx = np.arange(1 << comp.p, dtype=np.int64)
    lo = gather_bits(idx, comp.linear_vars)
    hi = gather_bits(idx, comp.tail_vars)
    return TruthTable(comp.p, lin[lo] ^ h[hi])


def component_spectrum(comp: Component, alpha: int) -> int:
    """``W_g(alpha)`` read off the tail spectrum, without expanding ``g``."""
    delta = gather_bits(alpha, comp.linear_vars)
    if delta != comp.mask:
        return 0
    theta = gather_bits(alpha, comp.tail_vars)
    return (1 << comp.t) * int(comp.tail_spectrum[theta])


def component_spectrum_all(comp: Component) -> np.ndarray:
    """Whole spectrum of ``comp`` from the tail spectrum (length ``2^p``)."""
    alpha = np.arange(1 << comp.p, dtype=np.int64)
    delta = gather_bits(alpha, comp.linear_vars)
    theta = gather_bits(alpha, comp.tail_vars)
    out = (1 << comp.t) * comp.tail_spectrum[theta]
    out[delta != comp.mask] = 0
    return out


# -- bent tails --------------------------------------------------------------


def mm_bent(k: int, want_degree: int | None = None) -> TruthTable:
    """Maiorana-McFarland bent function on ``2k`` variables.

    ``f(X, Y) = X . Y + pi(Y)`` with ``X`` the first ``k`` variables, ``Y`` the
    last ``k``. ``pi = y_1 ... y_k`` gives degree ``k``; ``pi = 0`` degree 2.
    """
    if k < 1:
        raise ValueError("bent tails need k >= 1")
    if want_degree is None:
        want_degree = max(k, 2)
    if want_degree not in {2, k} or want_degree < 2:
        raise ValueError(f"degree {want_degree} is not available for a bent function on {2 * k} variables")
    idx = np.arange(1 << (2 * k), dtype=np.uint32)
    x = idx & np.uint32((1 << k) - 1)
    y = idx >> np.uint32(k)
    bits = np.bitwise_count(x & y) & 1
    if want_degree == k and k >= 2:
        bits ^= (y == (1 << k) - 1)
    return TruthTable(2 * k, bits.astype(np.uint8))


# -- families ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ComponentFamily:
    label: str
    k: int
    members: tuple[Component, ...]
    declared_resiliency: int
    e: int = 0

    def __len__(self) -> int:
        return len(self.members)

    @property
    def name(self) -> str:
        if self.label in ("gamma", "omega"):
            return f"{self.label}{self.k}"
        return self.label

    @cached_property
    def max_component_spectrum(self) -> int:
        seen: dict[int, int] = {}
        best = 0
        for comp in self.members:
            key = id(comp.tail)
            if key not in seen:
                seen[key] = int(np.abs(comp.tail_spectrum).max())
            best = max(best, (1 << comp.t) * seen[key])
        return best


def _check_n(n: int, m: int, allow_small: bool) -> int:
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    floor = RELAXED_MIN_N if allow_small else STANDARD_MIN_N
    if n < floor:
        hint = "" if allow_small else " (pass allow_small=True for the relaxed n >= 8 regime)"
        raise ValueError(f"n={n} below the supported minimum {floor}{hint}")
    if m < 0:
        raise ValueError(f"resiliency order must be >= 0, got {m}")
    return n // 2


def masks_of_weight_above(t: int, threshold: int) -> list[int]:
    """All masks in ``F_2^t`` with weight ``> threshold``, increasing."""
    if t == 0:
        return [0] if threshold < 0 else []
    w = np.bitwise_count(np.arange(1 << t, dtype=np.uint32))
    return [int(c) for c in np.flatnonzero(w > threshold)]


def gamma_s(n: int, m: int) -> int:
    return (n - 2 * m - 2) // 4


def gamma0(n: int, m: int, *, allow_small: bool = False, label: str = "gamma0") -> ComponentFamily:
    """Linear functions ``c . X_{n/2}`` with ``wt(c) > m``."""
    half = _check_n(n, m, allow_small)
    all_vars = tuple(range(half))
    members = tuple(Component(half, all_vars, c) for c in masks_of_weight_above(half, m))
    return ComponentFamily(label, 0, members, m)


def _partial_family(half: int, k: int, threshold: int, tails: Sequence[TruthTable],
                    label: str, declared: int, e: int, names: Sequence[str] | None = None) -> ComponentFamily:
    t = half - 2 * k
    lin = tuple(range(t))
    infos = []
    for i, h in enumerate(tails):
        infos.append((h, classify_tail(h), tail_resiliency(h), names[i] if names else None))
    members = []
    for i, c in enumerate(masks_of_weight_above(t, threshold)):
        h, kind, v, nm = infos[i % len(infos)]
        members.append(Component(half, lin, c, h, kind, v, nm))
    return ComponentFamily(label, k, tuple(members), declared, e)


def gamma_k(n: int, m: int, k: int, *, tails: Sequence[TruthTable] | None = None,
            allow_small: bool = False) -> ComponentFamily:
    """``c . X'_t + h_c(X''_2k)`` with bent tails of degree ``max(k, 2)`` and ``wt(c) > m``.

    All members share one tail unless ``tails`` is given (assigned cyclically).
    """
    half = _check_n(n, m, allow_small)
    s = gamma_s(n, m)
    if not 1 <= k <= s:
        raise ValueError(f"k={k} outside [1, {s}] for n={n}, m={m}")
    if tails is None:
        tails = [mm_bent(k)]
        names = [f"bent{k}"]
    else:
        names = None
        for h in tails:
            if h.n != 2 * k or classify_tail(h) != "bent" or tail_degree(h) != max(k, 2):
                raise VerificationError(f"tail on {h.n} variables is not a degree-{max(k, 2)} bent function")
    return _partial_family(half, k, m, tails, "gamma", m, 0, names)


def g_prime(n: int, m: int, pivots: Sequence[int] | None = None, cprime: int | None = None,
            *, allow_small: bool = False) -> Component:
    """``c' . X + prod_{j not a pivot} x_j`` as a partially linear component.

    ``pivots`` are 1-based variable indices (default ``1..m+1``); ``cprime`` is a
    mask over all ``n/2`` variables that must be all-ones on the pivots.
    """
    half = _check_n(n, m, allow_small)
    piv = _pivot_positions(half, m, pivots)
    rest = tuple(v for v in range(half) if v not in set(piv))
    if len(rest) < 2:
        raise ValueError(f"m={m} leaves {len(rest)} non-pivot variables; need at least 2")
    if cprime is None:
        cprime = scatter_bits((1 << len(piv)) - 1, piv)
    _check_in_s(half, m, piv, cprime)
    rest_mask = gather_bits(cprime, rest)
    r = len(rest)
    idx = np.arange(1 << r, dtype=np.uint32)
    bits = (np.bitwise_count(idx & np.uint32(rest_mask)) & 1).astype(np.uint8)
    bits[-1] ^= 1
    tail = TruthTable(r, bits)
    return make_component((1 << len(piv)) - 1, len(piv), tail, linear_vars=piv,
                          tail_kind="plain", tail_name="monomial")


def _pivot_positions(half: int, m: int, pivots: Sequence[int] | None) -> tuple[int, ...]:
    if pivots is None:
        return tuple(range(m + 1))
    piv = tuple(sorted(int(v) - 1 for v in pivots))
    if len(piv) != m + 1 or len(set(piv)) != m + 1 or any(not 0 <= v < half for v in piv):
        raise ValueError(f"need {m + 1} distinct pivot variables in 1..{half}, got {list(pivots)}")
    return piv


def _in_s(m: int, piv: Sequence[int], c: int) -> bool:
    return bin(c).count("1") > m and all((c >> v) & 1 for v in piv)


def _check_in_s(half: int, m: int, piv: Sequence[int], cprime: int) -> None:
    if not 0 <= cprime < 1 << half or not _in_s(m, piv, cprime):
        raise ValueError(f"c'={cprime:#x} is not all-ones on the pivots with weight > {m}")


def gamma0_prime(n: int, m: int, pivots: Sequence[int] | None = None, cprime: int | None = None,
                 *, allow_small: bool = False, label: str = "gamma0_prime") -> ComponentFamily:
    """``{g'} ∪ {c . X : wt(c) > m, c not all-ones on the pivots}``; ``g'`` comes first."""
    half = _check_n(n, m, allow_small)
    piv = _pivot_positions(half, m, pivots)
    gp = g_prime(n, m, [v + 1 for v in piv], cprime, allow_small=allow_small)
    all_vars = tuple(range(half))
    rest = [Component(half, all_vars, c) for c in masks_of_weight_above(half, m) if not _in_s(m, piv, c)]
    fam = ComponentFamily(label, 0, (gp, *rest), m)
    assert len(fam) == counting.prime_family_size(half, m)
    return fam


def omega_k(n: int, m: int, k: int, e_k: int, seeds: Sequence[TruthTable], *,
            allow_small: bool = False, names: Sequence[str] | None = None) -> ComponentFamily:
    """``c . X'_t + h_c(X''_2k)`` with ``wt(c) > m - e_k`` and ``(2k, e_k - 1)`` seed tails.

    Seeds are re-profiled here; they are assigned to members cyclically.
    """
    half = _check_n(n, m, allow_small)
    if not 1 <= k <= n // 4:
        raise ValueError(f"k={k} outside [1, {n // 4}]")
    if not 0 <= e_k <= min(m + 1, k + 1):
        raise ValueError(f"e_k={e_k} outside [0, min(m+1, k+1)] = [0, {min(m + 1, k + 1)}]")
    if not seeds:
        raise ValueError("omega family needs at least one seed function")
    for i, h in enumerate(seeds):
        if h.n != 2 * k:
            raise VerificationError(f"seed {i} has {h.n} variables, expected {2 * k}")
        v = tail_resiliency(h)
        if v < e_k - 1:
            raise VerificationError(f"seed {i} is {v}-resilient, needs {e_k - 1}")
        if tail_degree(h) < 2:
            raise VerificationError(f"seed {i} is affine")
    return _partial_family(half, k, m - e_k, seeds, "omega", m, e_k, names)


class DisjointCheck(NamedTuple):
    ok: bool
    witness: tuple[int, int, int] | None
    mode: str

    def __bool__(self) -> bool:
        return self.ok


def verify_disjoint(fam: ComponentFamily | Sequence[Component], mode: str = "auto") -> DisjointCheck:
    """Check that no two members share a nonzero Walsh point.

    ``exhaustive`` compares full spectra (``p <= 14``) and reports a witness
    ``(i, j, alpha)``; ``symbolic`` proves it from the linear prefixes, which
    is sufficient but may reject families that are in fact disjoint.
    """
    members = list(fam.members if isinstance(fam, ComponentFamily) else fam)
    if not members:
        return DisjointCheck(True, None, "trivial")
    p = members[0].p
    if any(c.p != p for c in members):
        raise ShapeError("family members have different widths")
    if mode == "auto":
        mode = "exhaustive" if p <= EXHAUSTIVE_MAX_P else "symbolic"
    if mode == "exhaustive":
        if p > EXHAUSTIVE_MAX_P:
            raise ValueError(f"exhaustive disjointness check refuses p={p} > {EXHAUSTIVE_MAX_P}")
        return _disjoint_exhaustive(members, p)
    if mode == "symbolic":
        return DisjointCheck(_disjoint_symbolic(members), None, "symbolic")
    raise ValueError(f"unknown mode {mode!r}")


def _disjoint_exhaustive(members: list[Component], p: int) -> DisjointCheck:
    owner = np.full(1 << p, -1, dtype=np.int64)
    chunk = max(1, (1 << 20) >> p)
    for start in range(0, len(members), chunk):
        block = members[start:start + chunk]
        spectra = fast_walsh_many(np.stack([expand(c).bits for c in block]))
        for off, row in enumerate(spectra):
            i = start + off
            nz = row != 0
            clash = nz & (owner >= 0)
            if clash.any():
                alpha = int(np.flatnonzero(clash)[0])
                return DisjointCheck(False, (int(owner[alpha]), i, alpha), "exhaustive")
            owner[nz] = i
    return DisjointCheck(True, None, "exhaustive")


def _disjoint_symbolic(members: list[Component]) -> bool:
    groups: dict[tuple[int, ...], list[int]] = {}
    for comp in members:
        groups.setdefault(comp.linear_vars, []).append(comp.mask)
    for masks in groups.values():
        if len(set(masks)) != len(masks):
            return False
    keys = list(groups)
    for a, b in combinations(keys, 2):
        common = sorted(set(a) & set(b))
        if not common:
            return False
        pa = {gather_bits(scatter_bits(c, a), common) for c in groups[a]}
        pb = {gather_bits(scatter_bits(c, b), common) for c in groups[b]}
        if pa & pb:
            return False
    return True


# -- seeds -------------------------------------------------------------------


def verify_seed(record: SeedRecord, index: int = 0) -> SeedRecord:
    prof = profile(record.table)
    where = f"seed record {index + 1} ({record.header()})"
    if prof.resiliency != record.m:
        raise VerificationError(f"{where}: resiliency measures {prof.resiliency}, declared {record.m}")
    if prof.nonlinearity != record.N:
        raise VerificationError(f"{where}: nonlinearity measures {prof.nonlinearity}, declared {record.N}")
    if record.d is not None and prof.degree != record.d:
        raise VerificationError(f"{where}: degree measures {prof.degree}, declared {record.d}")
    return record


def verify_seeds(records: Sequence[SeedRecord]) -> list[SeedRecord]:
    return [verify_seed(r, i) for i, r in enumerate(records)]


def load_seed_functions(path) -> list[SeedRecord]:
    """Read a seed file and re-verify every declared profile exhaustively."""
    return verify_seeds(parse_seed_file(path))


def seed_nonlinearity(seeds: Sequence[TruthTable]) -> int:
    """Worst nonlinearity among the seeds (drives the family's spectral penalty)."""
    return min(nonlinearity(fast_walsh(h)) for h in seeds)

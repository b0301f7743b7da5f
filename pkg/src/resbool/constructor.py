"""Feasibility solving, block assignment, materialisation and certification.

A construction fills ``2^{n/2}`` blocks with distinct components drawn from a
base family of linear functions (possibly with one degree-raising member) and
a few partially linear families indexed by ``k``. Each selected family adds a
fixed amount to the worst-case Walsh peak; the solver picks the cheapest set
of families whose sizes cover the blocks the base family cannot fill.

Routes:

``plain``
    base family is every linear mask of weight ``> m``.
``prime``
    base family swaps the masks that are all-ones on the pivots for a single
    member ``c'.X + prod(non-pivot variables)``; raises the degree to
    ``n - m - 1`` with no nonlinearity cost.
``monomial``
    the plain base family with the product of the non-pivot variables added to
    the member ``c'``; same degree, nonlinearity may drop by ``2^{m+1}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import counting
from .core import (
    FunctionProfile,
    TruthTable,
    anf,
    check_capacity,
    concatenation_spectrum,
    degree,
    is_almost_optimal,
    moebius,
    profile,
)
from .errors import CapacityError, InfeasibleError, VerificationError
from .families import (
    Component,
    ComponentFamily,
    component_spectrum_all,
    expand,
    g_prime,
    gamma0,
    gamma0_prime,
    gamma_k,
    gamma_s,
    gather_bits,
    mm_bent,
    omega_k,
    seed_nonlinearity,
)

log = logging.getLogger(__name__)

VARIANTS = ("C1", "C2", "C3")
ROUTES = ("plain", "prime", "monomial")
EXACT_MAX_HALF = 24
VERIFY_MAX_N = 20


@dataclass(frozen=True)
class FamilyOption:
    """Count-level view of one selectable family."""

    k: int
    size: int
    penalty: int  # worst-case |W_g(alpha)| of a member
    e: int = 0
    nonlinearity: int | None = None  # tail nonlinearity, when not bent


@dataclass(frozen=True)
class Selection:
    variant: str
    n: int
    m: int
    route: str
    base_size: int
    options: tuple[FamilyOption, ...]
    chosen: tuple[int, ...]  # indices into options

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def deficit(self) -> int:
        return (1 << self.half) - self.base_size

    @property
    def a(self) -> tuple[int, ...]:
        kmax = self.n // 4 if self.variant == "C3" else gamma_s(self.n, self.m)
        picked = {self.options[i].k for i in self.chosen}
        return tuple(int(k in picked) for k in range(1, kmax + 1))

    @property
    def e(self) -> tuple[int, ...] | None:
        if self.variant != "C3":
            return None
        by_k = {o.k: o.e for o in self.options}
        return tuple(by_k.get(k, 0) for k in range(1, self.n // 4 + 1))

    @property
    def penalty(self) -> int:
        return sum(self.options[i].penalty for i in self.chosen)

    @property
    def chosen_options(self) -> list[FamilyOption]:
        return [self.options[i] for i in self.chosen]

    def base_bound(self) -> int:
        """Closed-form nonlinearity bound, without the degree-fix correction."""
        return (1 << (self.n - 1)) - (1 << (self.half - 1)) - self.penalty // 2

    def nonlinearity_bound(self) -> int:
        extra = 1 << (self.m + 1) if self.route == "monomial" else 0
        return self.base_bound() - extra

    def degree_claim(self) -> int | None:
        """Degree the construction is designed to reach (``None`` if not fixed)."""
        if self.route in ("prime", "monomial"):
            return self.n - self.m - 1
        return None


# -- feasibility -------------------------------------------------------------


def bent_options(n: int, m: int, ks: Iterable[int] | None = None) -> list[FamilyOption]:
    half = n // 2
    if ks is None:
        ks = range(1, gamma_s(n, m) + 1)
    out = []
    for k in ks:
        size = counting.partial_family_size(half, m, k)
        if size > 0:
            out.append(FamilyOption(k, size, 1 << (half - k)))
    return out


def seed_option(n: int, m: int, k: int, e_k: int, tail_nl: int) -> FamilyOption:
    half = n // 2
    t = half - 2 * k
    size = counting.partial_family_size(half, m, k, e_k)
    return FamilyOption(k, size, (1 << t) * ((1 << (2 * k)) - 2 * tail_nl), e_k, tail_nl)


def lexicographic_cover(sizes: Sequence[int], need: int) -> tuple[int, ...] | None:
    """Cheapest cover when each option costs more than all later ones combined.

    Skips an option whenever the remaining ones can still cover the need.
    """
    if need <= 0:
        return ()
    suffix = [0] * (len(sizes) + 1)
    for i in range(len(sizes) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + sizes[i]
    if suffix[0] < need:
        return None
    chosen = []
    for i, size in enumerate(sizes):
        if need <= 0:
            break
        if suffix[i + 1] >= need:
            continue
        chosen.append(i)
        need -= size
    return tuple(chosen)


def min_penalty_cover(sizes: Sequence[int], costs: Sequence[int], need: int) -> tuple[int, ...] | None:
    """Exact minimum-cost subset with total size ``>= need`` (branch and bound).

    Ties go to the lexicographically smallest index tuple.
    """
    if need <= 0:
        return ()
    order = sorted(range(len(sizes)), key=lambda i: (-sizes[i], costs[i], i))
    suffix = [0] * (len(order) + 1)
    for j in range(len(order) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + sizes[order[j]]
    if suffix[0] < need:
        return None
    best_cost = None
    best: tuple[int, ...] | None = None

    def dfs(j: int, remaining: int, cost: int, picked: list[int]):
        nonlocal best_cost, best
        if best_cost is not None and cost > best_cost:
            return
        if remaining <= 0:
            cand = tuple(sorted(picked))
            if best_cost is None or cost < best_cost or (cost == best_cost and cand < best):
                best_cost, best = cost, cand
            return
        if j == len(order) or suffix[j] < remaining:
            return
        i = order[j]
        picked.append(i)
        dfs(j + 1, remaining - sizes[i], cost + costs[i], picked)
        picked.pop()
        dfs(j + 1, remaining, cost, picked)

    dfs(0, need, 0, [])
    return best


def _infeasible(n: int, m: int, base: int, options: Sequence[FamilyOption], label: str) -> InfeasibleError:
    total = base + sum(o.size for o in options)
    return InfeasibleError(
        f"{label}: base {base} + families {sum(o.size for o in options)} = {total} "
        f"< 2^{n // 2} = {1 << (n // 2)} (n={n}, m={m})"
    )


def _select(variant: str, n: int, m: int, route: str, base: int,
            options: Sequence[FamilyOption], exact: bool) -> Selection | None:
    need = (1 << (n // 2)) - base
    sizes = [o.size for o in options]
    if exact:
        chosen = min_penalty_cover(sizes, [o.penalty for o in options], need)
    else:
        chosen = lexicographic_cover(sizes, need)
    if chosen is None:
        return None
    return Selection(variant, n, m, route, base, tuple(options), chosen)


def _degree_room(n: int, m: int) -> bool:
    return n // 2 - m - 1 >= 2


def solve_feasibility(n: int, m: int, variant: str = "C1", options: Sequence[FamilyOption] | None = None,
                      *, route: str | None = None) -> Selection:
    """Choose the families to use (the selector vector) for ``(n, m)``.

    C1/C2 penalties are distinct powers of two, so the lexicographic rule is
    exact; C3 penalties are arbitrary and go through branch and bound.
    For C2 the prime route is preferred unless the monomial route gives a
    strictly better bound. ``route`` forces a route.
    """
    if n % 2 or n < 4:
        raise ValueError(f"n must be even and >= 4, got {n}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    half = n // 2
    plain_base = counting.linear_family_size(half, m)
    prime_base = counting.prime_family_size(half, m) if _degree_room(n, m) else None

    if variant == "C1":
        opts = list(options) if options is not None else bent_options(n, m)
        sel = _select("C1", n, m, "plain", plain_base, opts, exact=False)
        if sel is None:
            raise _infeasible(n, m, plain_base, opts, "C1 counting inequality fails")
        return sel

    if variant == "C2":
        opts = list(options) if options is not None else bent_options(n, m)
        if not _degree_room(n, m):
            raise InfeasibleError(f"C2 needs n/2 - m - 1 >= 2 (n={n}, m={m})")
        prime = _select("C2", n, m, "prime", prime_base, opts, exact=False)
        mono = _select("C2", n, m, "monomial", plain_base, opts, exact=False)
        if route == "prime":
            mono = None
        elif route == "monomial":
            prime = None
        elif route not in (None, "auto"):
            raise ValueError(f"route {route!r} not available for C2")
        if prime is None and mono is None:
            raise _infeasible(n, m, plain_base, opts, "C2 counting inequality fails")
        if prime is None:
            return mono
        if mono is None or prime.nonlinearity_bound() >= mono.nonlinearity_bound():
            return prime
        return mono

    if options is None:
        raise ValueError("C3 needs family options (see c3_options)")
    opts = list(options)
    plain = _select("C3", n, m, "plain", plain_base, opts, exact=True)
    if plain is None:
        raise _infeasible(n, m, plain_base, opts, "C3 counting inequality fails")
    if route in (None, "auto", "prime") and prime_base is not None:
        prime = _select("C3", n, m, "prime", prime_base, opts, exact=True)
        if prime is not None and (route == "prime" or prime.penalty == plain.penalty):
            return prime
    if route == "prime":
        raise InfeasibleError(f"C3 with a degree-raising base member does not fit (n={n}, m={m})")
    return plain


def c3_options(n: int, m: int, seeds: Mapping[int, tuple[int, Sequence[TruthTable]]],
               include_bent: bool = True) -> list[FamilyOption]:
    """Options for C3: seeded families ``k -> (e_k, seeds)`` plus bent ones elsewhere."""
    opts = []
    for k in range(1, n // 4 + 1):
        if k in seeds:
            e_k, tables = seeds[k]
            opt = seed_option(n, m, k, e_k, seed_nonlinearity(tables))
        elif include_bent:
            opt = FamilyOption(k, counting.partial_family_size(n // 2, m, k), 1 << (n // 2 - k))
        else:
            continue
        if opt.size > 0:
            opts.append(opt)
    return opts


def forced_selection(n: int, m: int, variant: str, options: Sequence[FamilyOption],
                     ks: Iterable[int], route: str = "plain") -> Selection:
    """A selection using exactly the families with the given ``k`` values."""
    half = n // 2
    base = counting.prime_family_size(half, m) if route == "prime" else counting.linear_family_size(half, m)
    ks = set(ks)
    chosen = tuple(i for i, o in enumerate(options) if o.k in ks)
    if len(chosen) != len(ks):
        raise ValueError(f"no family available for k in {sorted(ks - {options[i].k for i in chosen})}")
    sel = Selection(variant, n, m, route, base, tuple(options), chosen)
    if base + sum(options[i].size for i in chosen) < 1 << half:
        raise _infeasible(n, m, base, [options[i] for i in chosen], "forced selection does not cover")
    return sel


# -- plans -------------------------------------------------------------------


@dataclass
class ConstructionPlan:
    n: int
    m: int
    variant: str
    route: str
    a: tuple[int, ...]
    e: tuple[int, ...] | None
    families: list[ComponentFamily]
    phi: list[tuple[int, int]]  # block b -> (family index, member index)
    pivots: tuple[int, ...] | None = None  # 1-based
    cprime: int | None = None
    seed: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def s(self) -> int:
        return self.n // 4 if self.variant == "C3" else gamma_s(self.n, self.m)

    def component(self, b: int) -> Component:
        fi, mi = self.phi[b]
        return self.families[fi].members[mi]

    def components(self) -> list[Component]:
        return [self.families[fi].members[mi] for fi, mi in self.phi]

    @property
    def used_counts(self) -> dict[str, int]:
        counts = {fam.name: 0 for fam in self.families}
        for fi, _ in self.phi:
            counts[self.families[fi].name] += 1
        return counts

    def check(self) -> None:
        """Assignment invariants: injective, complete, consistent selector."""
        if len(self.phi) != 1 << self.half:
            raise VerificationError(f"phi covers {len(self.phi)} blocks, expected {1 << self.half}")
        if len(set(self.phi)) != len(self.phi):
            raise VerificationError("phi is not injective")
        used = {self.families[fi].k for fi, _ in self.phi if self.families[fi].k > 0}
        for k, ak in enumerate(self.a, start=1):
            if bool(ak) != (k in used):
                raise VerificationError(f"a_{k}={ak} disagrees with the assignment")


def _base_family(sel: Selection, pivots, cprime, allow_small: bool) -> ComponentFamily:
    n, m = sel.n, sel.m
    label0 = "omega0" if sel.variant == "C3" else "gamma0"
    if sel.route == "plain":
        return gamma0(n, m, allow_small=allow_small, label=label0)
    if sel.route == "prime":
        return gamma0_prime(n, m, pivots, cprime, allow_small=allow_small, label=label0 + "_prime")
    base = gamma0(n, m, allow_small=allow_small)
    gp = g_prime(n, m, pivots, cprime, allow_small=allow_small)
    target = gp.full_mask | gather_bits_to_full(gp)
    members = list(base.members)
    for i, comp in enumerate(members):
        if comp.mask == target:
            members[i] = gp
            break
    else:  # pragma: no cover - c' always has weight > m
        raise VerificationError("c' is not a member of the linear family")
    # keep c' first so it is always assigned
    members.insert(0, members.pop(i))
    return ComponentFamily(label0 + "_monomial", 0, tuple(members), m)


def build_families(sel: Selection, *, seeds: Mapping[int, Sequence[TruthTable]] | None = None,
                   pivots=None, cprime=None, allow_small: bool = False,
                   tails: Mapping[int, Sequence[TruthTable]] | None = None) -> list[ComponentFamily]:
    fams = [_base_family(sel, pivots, cprime, allow_small)]
    for opt in sorted(sel.chosen_options, key=lambda o: o.k):
        if sel.variant == "C3" and seeds and opt.k in seeds:
            fams.append(omega_k(sel.n, sel.m, opt.k, opt.e, seeds[opt.k], allow_small=allow_small))
        elif sel.variant == "C3":
            fam = gamma_k_any(sel.n, sel.m, opt.k, allow_small)
            fams.append(ComponentFamily("omega", opt.k, fam.members, sel.m, 0))
        else:
            fams.append(gamma_k(sel.n, sel.m, opt.k, tails=(tails or {}).get(opt.k), allow_small=allow_small))
    return fams


def gamma_k_any(n: int, m: int, k: int, allow_small: bool = False) -> ComponentFamily:
    """Bent-tailed family for any ``k`` with a nonempty mask set (used by C3)."""
    from .families import _partial_family
    return _partial_family(n // 2, k, m, [mm_bent(k)], "gamma", m, 0, [f"bent{k}"])


def assign_phi(sel: Selection, families: list[ComponentFamily], *, seed: int | None = None,
               pivots=None, cprime=None) -> ConstructionPlan:
    """Fill blocks in increasing order: base family first, then families by increasing ``k``.

    On the plain route the count of the largest selected family is made odd
    when possible (one base member is dropped for one more of that family),
    so its tail's top-degree monomial survives in the block-wise XOR.
    """
    blocks = 1 << sel.half
    counts = [0] * len(families)
    left = blocks
    for i, fam in enumerate(families):
        # every selected family keeps at least one block
        reserve = sum(1 for f in families[i + 1:] if len(f))
        take = min(len(fam), max(left - reserve, 1 if i else 0))
        counts[i] = take
        left -= take
    if left:
        raise InfeasibleError(f"families cover only {blocks - left} of {blocks} blocks")
    notes = []
    if sel.route == "plain" and len(families) > 1:
        last = len(families) - 1
        while last > 0 and counts[last] == 0:
            last -= 1
        if last > 0 and counts[last] % 2 == 0:
            if counts[last] < len(families[last]) and counts[0] > 0:
                counts[0] -= 1
                counts[last] += 1
                notes.append(f"moved one block from {families[0].name} to {families[last].name} for odd count")
            else:
                notes.append(f"{families[last].name} count {counts[last]} is even and cannot be made odd")
    for i in range(len(families) - 1, 0, -1):
        if counts[i] == 0:
            notes.append(f"{families[i].name} selected but unused")
    phi = [(i, j) for i, c in enumerate(counts) for j in range(c)]
    if seed is not None:
        perm = np.random.default_rng(seed).permutation(blocks)
        phi = [phi[int(p)] for p in perm]
    piv = None
    cp = None
    if sel.route != "plain":
        gp = families[0].members[0]
        piv = tuple(v + 1 for v in gp.linear_vars)
        cp = gp.full_mask | gather_bits_to_full(gp)
    plan = ConstructionPlan(sel.n, sel.m, sel.variant, sel.route, sel.a, sel.e, families, phi,
                            piv, cp, seed, notes)
    plan.check()
    return plan


def gather_bits_to_full(gp: Component) -> int:
    """Linear part of the degree-raising member's tail, placed on the full variable set."""
    from .families import scatter_bits
    h = gp.tail
    # tail = (linear part) + monomial; recover the linear part from the ANF's weight-1 terms
    coeffs = moebius(h.bits)
    lin = 0
    for j in range(h.n):
        if coeffs[1 << j]:
            lin |= 1 << j
    return scatter_bits(lin, gp.tail_vars)


def plan_construction(n: int, m: int, variant: str = "C1", *, seeds=None, include_bent: bool = True,
                      select: Iterable[int] | None = None, route: str | None = None, pivots=None,
                      cprime=None, seed: int | None = None, allow_small: bool = False) -> ConstructionPlan:
    """Solve, generate families and assign blocks; no truth table is built."""
    sel, fam_seeds = select_construction(n, m, variant, seeds=seeds, include_bent=include_bent,
                                         select=select, route=route)
    fams = build_families(sel, seeds=fam_seeds, pivots=pivots, cprime=cprime, allow_small=allow_small)
    return assign_phi(sel, fams, seed=seed)


def select_construction(n: int, m: int, variant: str = "C1", *, seeds=None, include_bent: bool = True,
                        select: Iterable[int] | None = None, route: str | None = None):
    """Family selection alone, plus the seed tables each seeded family will use."""
    variant = variant.upper()
    seed_tables = _seed_tables(seeds)
    if variant == "C3":
        opts = c3_options(n, m, {k: (e, t) for k, (e, t) in _c3_seed_spec(n, m, seed_tables).items()},
                          include_bent)
        if select is not None:
            sel = forced_selection(n, m, "C3", opts, select, route if route == "prime" else "plain")
        else:
            sel = solve_feasibility(n, m, "C3", opts, route=route)
        fam_seeds = {k: t for k, (e, t) in _c3_seed_spec(n, m, seed_tables).items()}
    else:
        if select is not None:
            opts = bent_options(n, m)
            sel = forced_selection(n, m, variant, opts, select, route or ("plain" if variant == "C1" else "prime"))
        else:
            sel = solve_feasibility(n, m, variant, route=route)
        fam_seeds = None
    return sel, fam_seeds


def _seed_tables(seeds) -> dict[int, list[tuple[int, TruthTable]]]:
    """Normalise seeds to ``k -> [(declared resiliency, table), ...]``."""
    out: dict[int, list[tuple[int, TruthTable]]] = {}
    if not seeds:
        return out
    for rec in seeds:
        if isinstance(rec, TruthTable):
            table, res = rec, profile(rec).resiliency
        else:
            table, res = rec.table, rec.m
        if table.n % 2:
            raise VerificationError(f"seed on {table.n} variables: need an even count")
        out.setdefault(table.n // 2, []).append((res, table))
    return out


def _c3_seed_spec(n: int, m: int, seed_tables) -> dict[int, tuple[int, list[TruthTable]]]:
    spec = {}
    for k, items in seed_tables.items():
        if k > n // 4:
            raise VerificationError(f"seed on {2 * k} variables does not fit n={n}")
        e_k = min(min(r for r, _ in items) + 1, m + 1, k + 1)
        spec[k] = (max(e_k, 0), [t for _, t in items])
    return spec


# -- materialisation ---------------------------------------------------------


def build(plan: ConstructionPlan) -> TruthTable:
    """Concatenate the assigned components in block order."""
    check_capacity(plan.n)
    half = plan.half
    out = np.empty(1 << plan.n, dtype=np.uint8)
    cache: dict[int, np.ndarray] = {}
    for b, comp in enumerate(plan.components()):
        key = id(comp)
        bits = cache.pop(key, None)
        if bits is None:
            bits = expand(comp).bits
        out[b << half:(b + 1) << half] = bits
    return TruthTable(plan.n, out)


def block_spectra(plan: ConstructionPlan) -> np.ndarray:
    """``W_{g_b}(alpha)`` for every block and mask, from the tail spectra."""
    return np.stack([component_spectrum_all(c) for c in plan.components()])


def spectrum_from_components(plan: ConstructionPlan) -> np.ndarray:
    """Full spectrum via ``W_f(beta, alpha) = sum_b (-1)^{beta.b} W_{g_b}(alpha)``."""
    if plan.half > 10:
        raise ValueError("component-wise spectrum is limited to n <= 20")
    return concatenation_spectrum(block_spectra(plan))


# -- certification -----------------------------------------------------------


@dataclass(frozen=True)
class CertifiedProfile:
    n: int
    m: int
    resiliency_at_least: int
    nonlinearity_at_least: int
    nonlinearity_exact: int | None
    nonlinearity_bound: int
    base_bound: int
    degree_lower: int
    degree_upper: int
    mode: str
    max_walsh: int | None = None

    @property
    def almost_optimal(self) -> bool:
        return is_almost_optimal(self.n, self.nonlinearity_at_least)

    def lines(self) -> list[str]:
        exact = "-" if self.nonlinearity_exact is None else str(self.nonlinearity_exact)
        return [
            f"mode={self.mode}",
            f"n={self.n}",
            f"m>={self.resiliency_at_least}",
            f"N>={self.nonlinearity_at_least}",
            f"N_exact={exact}",
            f"N_bound={self.nonlinearity_bound}",
            f"N_base={self.base_bound}",
            f"d_lower={self.degree_lower}",
            f"d_upper={self.degree_upper}",
            f"almost_optimal={int(self.almost_optimal)}",
        ]


def _plan_selection_penalty(plan: ConstructionPlan) -> int:
    used = {fi for fi, _ in plan.phi}
    return sum(plan.families[fi].max_component_spectrum for fi in used if plan.families[fi].k > 0)


def plan_bounds(plan: ConstructionPlan) -> tuple[int, int]:
    """``(base bound, route bound)`` computed from the families actually used."""
    base = (1 << (plan.n - 1)) - (1 << (plan.half - 1)) - _plan_selection_penalty(plan) // 2
    extra = 1 << (plan.m + 1) if plan.route == "monomial" else 0
    return base, base - extra


def block_xor(plan: ConstructionPlan) -> TruthTable:
    """XOR of all assigned components: the coefficient of ``y_1 ... y_{n/2}``."""
    half = plan.half
    lin = 0
    tails: dict[tuple, list] = {}
    for comp in plan.components():
        lin ^= comp.full_mask
        if comp.tail is not None:
            key = (comp.tail_vars, id(comp.tail))
            entry = tails.setdefault(key, [comp, 0])
            entry[1] ^= 1
    bits = TruthTable.linear(half, lin).bits.copy()
    idx = None
    for (tvars, _), (comp, odd) in tails.items():
        if not odd:
            continue
        if idx is None:
            idx = np.arange(1 << half, dtype=np.int64)
        bits ^= comp.tail.bits[gather_bits(idx, tvars)]
    return TruthTable(half, bits)


def degree_bounds(plan: ConstructionPlan) -> tuple[int, int]:
    comps = plan.components()
    degs = {}
    for c in comps:
        key = (id(c.tail), c.mask != 0)
        if key not in degs:
            degs[key] = c.degree
    max_member = max(degs.values())
    top = degree(anf(block_xor(plan)))
    lower = max(plan.half + top if top >= 0 else -1, max_member)
    upper = min(plan.n - plan.m - 1, plan.half + max_member)
    return lower, upper


def _group_tables(plan: ConstructionPlan):
    """Per linear-variable group: lookup of block index and tail slot by prefix."""
    groups: dict[tuple[int, ...], dict] = {}
    for b, comp in enumerate(plan.components()):
        g = groups.get(comp.linear_vars)
        if g is None:
            t = comp.t
            g = groups[comp.linear_vars] = {
                "t": t, "tail_vars": comp.tail_vars,
                "blk": np.full(1 << t, -1, dtype=np.int64),
                "slot": np.zeros(1 << t, dtype=np.int64),
                "tails": {}, "spectra": [],
            }
        key = id(comp.tail)
        if key not in g["tails"]:
            g["tails"][key] = len(g["spectra"])
            g["spectra"].append(comp.tail_spectrum)
        if g["blk"][comp.mask] >= 0:
            raise VerificationError(f"two assigned components share linear prefix {comp.mask}")
        g["blk"][comp.mask] = b
        g["slot"][comp.mask] = g["tails"][key]
    for g in groups.values():
        g["spectra"] = np.stack(g["spectra"]).astype(np.int64)
    return list(groups.items())


def _max_signed_sums(blocks: np.ndarray, values: np.ndarray, half: int) -> np.ndarray:
    """Per column, ``max_beta |sum_i (-1)^{beta . b_i} w_i|``.

    ``blocks`` and ``values`` have shape ``(G, A)``; zero values are inactive.
    Achievable sign patterns are those orthogonal to every linear dependency
    among the active ``b_i``; a basis of dependencies is found by inserting
    the ``b_i`` into an XOR basis column by column.
    """
    G, A = blocks.shape
    basis = np.zeros((half, A), dtype=np.int64)
    bcombo = np.zeros((half, A), dtype=np.int64)
    deps = []
    for i in range(G):
        active = values[i] != 0
        v = np.where(active, blocks[i], 0)
        combo = np.full(A, 1 << i, dtype=np.int64)
        inserted = ~active
        for bit in range(half - 1, -1, -1):
            has = ((v >> bit) & 1).astype(bool) & ~inserted
            if not has.any():
                continue
            empty = basis[bit] == 0
            ins = has & empty
            basis[bit][ins] = v[ins]
            bcombo[bit][ins] = combo[ins]
            inserted |= ins
            red = has & ~empty
            v[red] ^= basis[bit][red]
            combo[red] ^= bcombo[bit][red]
        dep = np.where(~inserted, combo, 0)
        if dep.any():
            deps.append(dep)
    best = np.zeros(A, dtype=np.int64)
    # no complement symmetry: a dependency of odd size pins the overall sign
    for s in range(1 << G):
        total = np.zeros(A, dtype=np.int64)
        for i in range(G):
            if (s >> i) & 1:
                total -= values[i]
            else:
                total += values[i]
        val = np.abs(total)
        if deps:
            ok = np.ones(A, dtype=bool)
            for dep in deps:
                ok &= (np.bitwise_count(dep & s) & 1) == 0
            val = np.where(ok, val, 0)
        np.maximum(best, val, out=best)
    return best


def structural_max_walsh(plan: ConstructionPlan, chunk: int = 1 << 16) -> int:
    """Exact ``max |W_f|`` by enumerating ``alpha`` over ``F_2^{n/2}`` only."""
    half = plan.half
    if half > EXACT_MAX_HALF:
        raise ValueError(f"structural-exact mode refuses n/2={half} > {EXACT_MAX_HALF}")
    groups = _group_tables(plan)
    best = 0
    for start in range(0, 1 << half, chunk):
        alpha = np.arange(start, min(start + chunk, 1 << half), dtype=np.int64)
        bl = np.zeros((len(groups), alpha.size), dtype=np.int64)
        wv = np.zeros((len(groups), alpha.size), dtype=np.int64)
        for gi, (lvars, g) in enumerate(groups):
            delta = gather_bits(alpha, lvars)
            theta = gather_bits(alpha, g["tail_vars"])
            blk = g["blk"][delta]
            w = (1 << g["t"]) * g["spectra"][g["slot"][delta], theta]
            w[blk < 0] = 0
            bl[gi] = np.maximum(blk, 0)
            wv[gi] = w
        best = max(best, int(_max_signed_sums(bl, wv, half).max()))
    return best


def certify(plan: ConstructionPlan, *, exact: bool | None = None) -> CertifiedProfile:
    """Structural certificate: resiliency, nonlinearity (exact or bound), degree range.

    ``exact=None`` runs the exact spectral enumeration whenever ``n/2 <= 24``.
    """
    comps = plan.components()
    res = min(c.resiliency for c in comps)
    if res < plan.m:
        raise VerificationError(f"an assigned component is only {res}-resilient, need {plan.m}")
    base, bound = plan_bounds(plan)
    if exact is None:
        exact = plan.half <= EXACT_MAX_HALF
    nl_exact = peak = None
    mode = "structural-bound"
    if exact:
        peak = structural_max_walsh(plan)
        nl_exact = (1 << (plan.n - 1)) - peak // 2
        mode = "structural-exact"
        if nl_exact < bound:
            raise VerificationError(f"exact nonlinearity {nl_exact} below the proven bound {bound}")
    lo, hi = degree_bounds(plan)
    return CertifiedProfile(
        n=plan.n, m=plan.m, resiliency_at_least=res,
        nonlinearity_at_least=nl_exact if nl_exact is not None else bound,
        nonlinearity_exact=nl_exact, nonlinearity_bound=bound, base_bound=base,
        degree_lower=lo, degree_upper=hi, mode=mode, max_walsh=peak,
    )


def bound_certificate(sel: Selection) -> CertifiedProfile:
    """Closed-form certificate from a selection alone (any ``n``)."""
    d = sel.degree_claim()
    if d is None:
        # without the block assignment nothing beyond the generic ceiling is known
        ks = [o.k for o in sel.chosen_options]
        hi = min(sel.n - sel.m - 1, sel.half + max([2, *ks]))
        lo = 0
    else:
        lo = hi = d
    return CertifiedProfile(
        n=sel.n, m=sel.m, resiliency_at_least=sel.m, nonlinearity_at_least=sel.nonlinearity_bound(),
        nonlinearity_exact=None, nonlinearity_bound=sel.nonlinearity_bound(),
        base_bound=sel.base_bound(), degree_lower=lo, degree_upper=hi, mode="structural-bound",
    )


# -- top-level constructions -------------------------------------------------


@dataclass
class ConstructionResult:
    """``plan`` is ``None`` for selection-only results (``n/2`` too large to assign blocks)."""

    plan: ConstructionPlan | None
    certificate: CertifiedProfile
    table: TruthTable | None = None
    measured: FunctionProfile | None = None
    selection: Selection | None = None

    def check_measured(self) -> None:
        """Compare an exhaustive profile against the certificate; raise on any violation."""
        p, c = self.measured, self.certificate
        if p is None:
            return
        problems = []
        if p.resiliency < c.resiliency_at_least:
            problems.append(f"resiliency {p.resiliency} < {c.resiliency_at_least}")
        if c.nonlinearity_exact is not None and p.nonlinearity != c.nonlinearity_exact:
            problems.append(f"nonlinearity {p.nonlinearity} != structural {c.nonlinearity_exact}")
        if p.nonlinearity < c.nonlinearity_bound:
            problems.append(f"nonlinearity {p.nonlinearity} < bound {c.nonlinearity_bound}")
        if not c.degree_lower <= p.degree <= c.degree_upper:
            problems.append(f"degree {p.degree} outside [{c.degree_lower}, {c.degree_upper}]")
        if problems:
            raise VerificationError("; ".join(problems))


def _finish(plan: ConstructionPlan, plan_only: bool, verify: bool | None, exact: bool | None) -> ConstructionResult:
    cert = certify(plan, exact=exact)
    result = ConstructionResult(plan, cert)
    if plan_only:
        return result
    result.table = build(plan)
    if verify is None:
        verify = plan.n <= VERIFY_MAX_N
    if verify:
        result.measured = profile(result.table)
        result.check_measured()
    return result


def _selection_only(n: int, m: int, variant: str, plan_only: bool, **kw) -> ConstructionResult | None:
    if n // 2 <= EXACT_MAX_HALF:
        return None
    if not plan_only:
        raise CapacityError(f"n={n}: truth tables beyond n/2 = {EXACT_MAX_HALF} need --plan-only")
    sel, _ = select_construction(n, m, variant, **kw)
    return ConstructionResult(None, bound_certificate(sel), selection=sel)


def construct1(n: int, m: int, *, plan_only: bool = False, seed: int | None = None,
               verify: bool | None = None, exact: bool | None = None, allow_small: bool = False,
               select: Iterable[int] | None = None) -> ConstructionResult:
    if (r := _selection_only(n, m, "C1", plan_only, select=select)) is not None:
        return r
    plan = plan_construction(n, m, "C1", seed=seed, allow_small=allow_small, select=select)
    return _finish(plan, plan_only, verify, exact)


def construct2(n: int, m: int, *, plan_only: bool = False, seed: int | None = None,
               verify: bool | None = None, exact: bool | None = None, route: str | None = None,
               pivots=None, cprime=None, allow_small: bool = False) -> ConstructionResult:
    if (r := _selection_only(n, m, "C2", plan_only, route=route)) is not None:
        return r
    plan = plan_construction(n, m, "C2", route=route, pivots=pivots, cprime=cprime, seed=seed,
                             allow_small=allow_small)
    if pivots is None and cprime is None and degree_bounds(plan)[0] != n - m - 1:
        # the degree-raising monomial cancelled against a tail; move it to other variables
        alt = tuple(range(n // 2 - m, n // 2 + 1))
        log.info("monomial cancelled with default pivots; retrying with pivots %s", alt)
        plan = plan_construction(n, m, "C2", route=route, pivots=alt, seed=seed, allow_small=allow_small)
    result = _finish(plan, plan_only, verify, exact)
    if result.certificate.degree_lower != n - m - 1:
        raise VerificationError(f"degree {result.certificate.degree_lower} < n-m-1 = {n - m - 1}: "
                                "the degree-raising monomial cancelled")
    return result


def construct3(n: int, m: int, seeds=None, *, include_bent: bool = True, select: Iterable[int] | None = None,
               route: str | None = None, plan_only: bool = False, seed: int | None = None,
               verify: bool | None = None, exact: bool | None = None,
               allow_small: bool = False) -> ConstructionResult:
    """Seeded variant. ``seeds`` are verified records or truth tables; ``k`` is half their width."""
    if (r := _selection_only(n, m, "C3", plan_only, seeds=seeds, include_bent=include_bent,
                             select=select, route=route)) is not None:
        return r
    plan = plan_construction(n, m, "C3", seeds=seeds, include_bent=include_bent, select=select,
                             route=route, seed=seed, allow_small=allow_small)
    return _finish(plan, plan_only, verify, exact)


def construct(variant: str, n: int, m: int, **kwargs) -> ConstructionResult:
    variant = variant.upper()
    if variant == "C1":
        return construct1(n, m, **kwargs)
    if variant == "C2":
        return construct2(n, m, **kwargs)
    if variant == "C3":
        return construct3(n, m, **kwargs)
    raise ValueError(f"unknown variant {variant!r}")

"""Central series and radicals of finite groups.

Upper central terms use the membership test
``Z_{i+1} = {x : [x, s] in Z_i for every generator s}``, valid because
``Z_i`` is normal and ``[x, gh] = [x, h][x, g]^h``.  Nilpotency of any
subgroup is decided by its lower central series.  In a finite group an
ascendant subgroup is subnormal, so ``rho`` and ``rho_bar`` share one
membership test; ``rho_bar`` additionally reports the observed defects.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import ClosureDivergenceError, Element, FiniteTables, Group
from .subgroups import (
    IndexSubgroup,
    Subgroup,
    cyclic_subgroup,
    generate,
    normal_closure_in,
    whole_group,
)


def _from_mask(tabs: FiniteTables, mask: np.ndarray) -> IndexSubgroup:
    """Wrap a mask known to be a subgroup, picking a short generating list."""
    sub = generate(tabs, [])
    for i in np.flatnonzero(mask):
        if not sub.mask[i]:
            sub.add(int(i))
    if not np.array_equal(sub.mask, mask):
        raise RuntimeError("mask is not closed under multiplication")
    return sub


def _to_subgroup(G: Group, sub: IndexSubgroup, normal: bool | None = None) -> Subgroup:
    out = Subgroup.from_index(G, sub)
    out._normal = normal
    return out


# ---------------------------------------------------------------------------
# upper central series
# ---------------------------------------------------------------------------


@dataclass
class CentralSeries:
    terms: tuple[Subgroup, ...]
    hypercentral_length: int

    @property
    def hypercentre(self) -> Subgroup:
        return self.terms[-1]

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


def _upper_masks(tabs: FiniteTables) -> list[np.ndarray]:
    x = np.arange(tabs.n)
    comms = [tabs.comm(x, np.full(tabs.n, s)) for s in tabs.gens]
    cur = np.zeros(tabs.n, dtype=bool)
    cur[tabs.identity] = True
    masks = [cur]
    while True:
        nxt = np.ones(tabs.n, dtype=bool)
        for c in comms:
            nxt &= cur[c]
        if np.array_equal(nxt, cur):
            return masks
        masks.append(nxt)
        cur = nxt


def upper_central_series(G: Group) -> CentralSeries:
    """``1 = Z_0 < Z_1 < ... < Z_k = Z_{k+1}``; ``k`` is the hypercentral length."""
    tabs = G.tables()
    masks = _upper_masks(tabs)
    terms = tuple(_to_subgroup(G, _from_mask(tabs, m), True) for m in masks)
    return CentralSeries(terms, len(terms) - 1)


def center(G: Group) -> Subgroup:
    series = upper_central_series(G)
    return series.terms[min(1, series.hypercentral_length)]


def element_height(g: Element, limit: int = 1_000_000) -> int | None:
    """Least ``k`` with ``g`` in ``Z_k``, computed from generators only.

    ``height(1) = 0`` and ``height(g) = 1 + max_s height([g, s])`` over the
    generators ``s``.  No enumeration is needed, so this works on groups far
    beyond the analysis cap (and on the infinite example engine).  Returns
    ``None`` when ``g`` is not in the hypercentre, detected as a cycle in the
    recursion.
    """
    G = g.group
    gens = G.generator_payloads
    memo: dict = {G.identity_payload: 0}
    if g.payload in memo:
        return 0
    # iterative DFS; a back edge means the recursion never bottoms out
    stack = [(g.payload, 0, 0)]
    active = {g.payload}
    while stack:
        x, i, best = stack[-1]
        if i == len(gens):
            stack.pop()
            active.discard(x)
            memo[x] = best + 1
            if stack:
                px, pi, pb = stack[-1]
                stack[-1] = (px, pi + 1, max(pb, best + 1))
            continue
        c = G._comm(x, gens[i])
        if c in memo:
            stack[-1] = (x, i + 1, max(best, memo[c]))
        elif c in active:
            return None
        else:
            if len(memo) + len(active) > limit:
                raise ClosureDivergenceError("height search exceeded its guard")
            stack.append((c, 0, 0))
            active.add(c)
    return memo[g.payload]


def element_heights(G: Group) -> dict[Element, int | None]:
    """:func:`element_height` for every element of a finite group."""
    return {g: element_height(g) for g in G.elements()}


# ---------------------------------------------------------------------------
# lower central series and nilpotency
# ---------------------------------------------------------------------------


def _lower_central(tabs: FiniteTables, H: IndexSubgroup) -> list[IndexSubgroup]:
    """``gamma_1 = H``, ``gamma_{i+1} = [gamma_i, H]``, until trivial or stable.

    ``[<X>, <Y>]`` is the normal closure in ``<X, Y>`` of the commutators of
    generators, so only generator pairs are formed.
    """
    terms = [H]
    hg = np.array(H.gens, dtype=np.int64)
    while True:
        cur = terms[-1]
        if cur.order == 1:
            return terms
        seeds = set()
        if len(hg):
            for g in cur.gens:
                seeds.update(int(c) for c in tabs.comm(np.full(len(hg), g), hg))
        nxt = normal_closure_in(tabs, sorted(seeds), H)
        if nxt == cur:
            return terms
        terms.append(nxt)


def index_subgroup_is_nilpotent(H: IndexSubgroup) -> bool:
    return _lower_central(H.tabs, H)[-1].order == 1


def lower_central_series(G: Group) -> tuple[Subgroup, ...]:
    tabs = G.tables()
    return tuple(_to_subgroup(G, s, True) for s in _lower_central(tabs, whole_group(tabs)))


def nilpotency_class(G: Group) -> int | None:
    """Least ``c`` with ``gamma_{c+1} = 1``; ``None`` if the series stalls above 1."""
    terms = lower_central_series(G)
    return len(terms) - 1 if terms[-1].order == 1 else None


# ---------------------------------------------------------------------------
# Fitting subgroup
# ---------------------------------------------------------------------------


def conjugacy_labels(tabs: FiniteTables) -> np.ndarray:
    """Class label per element (orbits under conjugation by generators)."""
    x = np.arange(tabs.n)
    rows, cols = [], []
    for s in tabs.gens:
        rows.append(x)
        cols.append(tabs.conj(x, np.full(tabs.n, s)))
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(tabs.n, tabs.n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


class _ClosureCache:
    """Normal closures of single elements, shared across a conjugacy class."""

    def __init__(self, tabs: FiniteTables):
        self.tabs = tabs
        self.labels = conjugacy_labels(tabs)
        self.G = whole_group(tabs)
        self._by_label: dict[int, IndexSubgroup] = {}

    def __call__(self, x: int) -> IndexSubgroup:
        lab = int(self.labels[x])
        if lab not in self._by_label:
            self._by_label[lab] = normal_closure_in(self.tabs, [x], self.G)
        return self._by_label[lab]


def fitting_subgroup(G: Group) -> Subgroup:
    """Elements whose normal closure is nilpotent."""
    tabs = G.tables()
    ncl = _ClosureCache(tabs)
    verdicts: dict[bytes, bool] = {}
    mask = np.zeros(tabs.n, dtype=bool)
    for x in range(tabs.n):
        N = ncl(x)
        key = N.key()
        if key not in verdicts:
            verdicts[key] = index_subgroup_is_nilpotent(N)
        mask[x] = verdicts[key]
    F = _from_mask(tabs, mask)
    out = _to_subgroup(G, F)
    if not out.is_normal() or not index_subgroup_is_nilpotent(F):
        raise RuntimeError(f"Fitting set of {G.name} is not a normal nilpotent subgroup")
    out._nilpotent = True
    return out


def fitting_maximality_witness(G: Group, F: Subgroup) -> Element | None:
    """Some ``x`` outside ``F`` with ``<F, x^G>`` nilpotent, or ``None``."""
    tabs = G.tables()
    ncl = _ClosureCache(tabs)
    base = F.index_view()
    for x in np.flatnonzero(~F.mask):
        joined = base.copy()
        N = ncl(int(x))
        joined.extend(N.gens)
        if index_subgroup_is_nilpotent(joined):
            return G.from_index(x)
    return None


# ---------------------------------------------------------------------------
# subnormality, Baer radical, rho
# ---------------------------------------------------------------------------


def _defect(tabs: FiniteTables, x: int, cyc: IndexSubgroup, H: IndexSubgroup) -> int | None:
    K, steps = H, 0
    while True:
        if K == cyc:
            return steps
        nxt = normal_closure_in(tabs, [x], K)
        if nxt == K:
            return None
        K, steps = nxt, steps + 1


def is_subnormal(x: Element, H: Subgroup | None = None) -> int | None:
    """Defect of ``<x>`` in ``H`` (default: the whole group), ``None`` if not subnormal.

    Runs ``K_0 = H``, ``K_{i+1} = <x>^{K_i}``; the defect is the number of
    strict steps needed to reach ``<x>``.
    """
    G = x.group
    tabs = G.tables()
    i = G.to_index(x)
    within = whole_group(tabs) if H is None else H.index_view()
    if not within.mask[i]:
        raise ValueError(f"{x} is not in the given subgroup")
    return _defect(tabs, i, cyclic_subgroup(tabs, i), within)


def _cyclic_representatives(tabs: FiniteTables) -> list[tuple[int, IndexSubgroup]]:
    seen: dict[bytes, tuple[int, IndexSubgroup]] = {}
    for x in range(tabs.n):
        cyc = cyclic_subgroup(tabs, x)
        seen.setdefault(cyc.key(), (x, cyc))
    return list(seen.values())


def baer_radical(G: Group) -> Subgroup:
    """Subgroup generated by every ``x`` with ``<x>`` subnormal in ``G``."""
    tabs = G.tables()
    whole = whole_group(tabs)
    gens = [x for x, cyc in _cyclic_representatives(tabs) if _defect(tabs, x, cyc, whole) is not None]
    return _to_subgroup(G, generate(tabs, gens))


def rho_defects(G: Group) -> dict[Element, int]:
    """Members ``a`` of rho with ``k(a)``, the largest defect of ``<x>`` in ``<x, a^G>``."""
    tabs = G.tables()
    ncl = _ClosureCache(tabs)
    cyclics = _cyclic_representatives(tabs)
    by_closure: dict[bytes, int | None] = {}
    out = {}
    for a in range(tabs.n):
        N = ncl(a)
        key = N.key()
        if key not in by_closure:
            worst = 0
            for x, cyc in cyclics:
                H = N.copy()
                H.add(x)
                d = _defect(tabs, x, cyc, H)
                if d is None:
                    worst = None
                    break
                worst = max(worst, d)
            by_closure[key] = worst
        if by_closure[key] is not None:
            out[G.from_index(a)] = by_closure[key]
    return out


def _checked_subgroup(G: Group, members) -> Subgroup:
    tabs = G.tables()
    mask = np.zeros(tabs.n, dtype=bool)
    mask[[G.to_index(a) for a in members]] = True
    return _to_subgroup(G, _from_mask(tabs, mask))


def rho(G: Group) -> Subgroup:
    return _checked_subgroup(G, rho_defects(G))


def rho_bar(G: Group) -> tuple[Subgroup, int]:
    """``(rho_bar, bound)`` with ``bound`` the maximum observed defect."""
    defects = rho_defects(G)
    return _checked_subgroup(G, defects), max(defects.values())


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass
class SeriesReport:
    central: CentralSeries
    lower_central: tuple[Subgroup, ...]
    nilpotency_class: int | None
    fitting: Subgroup
    baer: Subgroup
    rho: Subgroup
    rho_bar: Subgroup
    rho_bar_bound: int

    def as_dict(self) -> dict:
        return {
            "upper_central_orders": self.central.orders(),
            "hypercentral_length": self.central.hypercentral_length,
            "lower_central_orders": [t.order for t in self.lower_central],
            "nilpotency_class": self.nilpotency_class,
            "fitting_order": self.fitting.order,
            "baer_order": self.baer.order,
            "rho_order": self.rho.order,
        }


def series_report(G: Group) -> SeriesReport:
    lower = lower_central_series(G)
    defects = rho_defects(G)
    rb = _checked_subgroup(G, defects)
    return SeriesReport(
        central=upper_central_series(G),
        lower_central=lower,
        nilpotency_class=len(lower) - 1 if lower[-1].order == 1 else None,
        fitting=fitting_subgroup(G),
        baer=baer_radical(G),
        rho=rb,
        rho_bar=rb,
        rho_bar_bound=max(defects.values()),
    )

"""Subgroups: closure, normal closure and centralizers.

Finite groups work at index level on the Cayley table, carrying a boolean
membership mask plus a short generating list.  Infinite groups fall back to
:func:`~engelkit.core.symbolic_closure`, which only succeeds for finite
closures.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .core import Element, FiniteTables, Group, GroupError, symbolic_closure


class IndexSubgroup:
    """Mutable working subgroup: mask over the parent's indices plus generators."""

    __slots__ = ("tabs", "mask", "gens")

    def __init__(self, tabs: FiniteTables, mask: np.ndarray | None = None, gens=()):
        self.tabs = tabs
        if mask is None:
            mask = np.zeros(tabs.n, dtype=bool)
            mask[tabs.identity] = True
        self.mask = mask
        self.gens = list(gens)

    def copy(self) -> IndexSubgroup:
        return IndexSubgroup(self.tabs, self.mask.copy(), self.gens)

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def add(self, g: int) -> bool:
        """Extend by one element; returns False if it was already inside."""
        if self.mask[g]:
            return False
        self.gens.append(int(g))
        T = self.tabs.table
        gens = np.array(self.gens)
        frontier = self.members()
        while len(frontier):
            prod = T[frontier[:, None], gens[None, :]].ravel()
            new = np.unique(prod[~self.mask[prod]])
            self.mask[new] = True
            frontier = new
        return True

    def extend(self, elements: Iterable[int]) -> IndexSubgroup:
        for g in elements:
            self.add(g)
        return self

    def __eq__(self, other):
        return isinstance(other, IndexSubgroup) and np.array_equal(self.mask, other.mask)


def generate(tabs: FiniteTables, elements: Iterable[int]) -> IndexSubgroup:
    return IndexSubgroup(tabs).extend(int(g) for g in elements)


def normal_closure_in(tabs: FiniteTables, seeds: Iterable[int], within: IndexSubgroup) -> IndexSubgroup:
    """Smallest subgroup containing ``seeds`` closed under conjugation by ``within``.

    Conjugating generators by generators of ``within`` suffices; in a finite
    group invariance under ``k`` implies invariance under ``k^-1``.
    """
    sub = generate(tabs, seeds)
    checked = 0
    while checked < len(sub.gens):
        s = sub.gens[checked]
        conj = tabs.conj(s, np.array(within.gens, dtype=np.int64)) if within.gens else []
        for c in np.atleast_1d(conj):
            sub.add(int(c))
        checked += 1
    return sub


def whole_group(tabs: FiniteTables) -> IndexSubgroup:
    return IndexSubgroup(tabs, np.ones(tabs.n, dtype=bool), [int(g) for g in tabs.gens])


def cyclic_subgroup(tabs: FiniteTables, g: int) -> IndexSubgroup:
    mask = np.zeros(tabs.n, dtype=bool)
    x = tabs.identity
    while True:
        mask[x] = True
        x = int(tabs.table[x, g])
        if x == tabs.identity:
            break
    return IndexSubgroup(tabs, mask, [int(g)] if g != tabs.identity else [])


class Subgroup:
    """A subgroup of ``group``.

    For finite parents the element set is a mask over the parent's
    canonical enumeration; for the infinite example engine it is an explicit
    finite set.  ``is_normal`` and ``is_nilpotent`` are computed on demand
    and cached.
    """

    def __init__(self, group: Group, generators: Iterable[Element], *,
                 mask: np.ndarray | None = None, elements: frozenset | None = None):
        self.group = group
        self.generators = tuple(generators)
        self._mask = mask
        self._elements = elements
        self._normal: bool | None = None
        self._nilpotent: bool | None = None

    @classmethod
    def from_index(cls, group: Group, sub: IndexSubgroup) -> Subgroup:
        gens = [group.from_index(i) for i in sub.gens]
        return cls(group, gens, mask=sub.mask.copy())

    def index_view(self) -> IndexSubgroup:
        tabs = self.group.tables()
        return IndexSubgroup(tabs, self.mask.copy(), [self.group.to_index(g) for g in self.generators])

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            tabs = self.group.tables()
            m = np.zeros(tabs.n, dtype=bool)
            m[[tabs.index[g.payload] for g in self._elements]] = True
            self._mask = m
        return self._mask

    @property
    def elements(self) -> frozenset[Element]:
        if self._elements is None:
            self._elements = frozenset(self.group.from_index(i) for i in np.flatnonzero(self._mask))
        return self._elements

    def sorted_elements(self) -> list[Element]:
        return sorted(self.elements)

    @property
    def order(self) -> int:
        if self._mask is not None:
            return int(self._mask.sum())
        return len(self._elements)

    def __len__(self):
        return self.order

    def __contains__(self, g: Element) -> bool:
        if g.group is not self.group:
            return False
        if self._mask is not None:
            return bool(self._mask[self.group.to_index(g)])
        return g in self._elements

    def __eq__(self, other):
        if not isinstance(other, Subgroup) or other.group is not self.group:
            return NotImplemented
        if self._mask is not None and other._mask is not None:
            return np.array_equal(self._mask, other._mask)
        return self.elements == other.elements

    def __hash__(self):
        return hash((id(self.group), self.order))

    def __le__(self, other: Subgroup) -> bool:
        if self._mask is not None and other._mask is not None:
            return not np.any(self._mask & ~other._mask)
        return self.elements <= other.elements

    def is_normal(self) -> bool:
        if self._normal is None:
            G = self.group
            conj = list(G.generators)
            if not G.finite:
                conj += [~c for c in conj]
            self._normal = all(
                (~c) * g * c in self for g in self.generators for c in conj
            )
        return self._normal

    def is_nilpotent(self) -> bool:
        if self._nilpotent is None:
            from .series import index_subgroup_is_nilpotent

            self._nilpotent = index_subgroup_is_nilpotent(self.index_view())
        return self._nilpotent

    def __repr__(self):
        return f"<Subgroup of {self.group.name}, order {self.order}>"


def _indices(group: Group, S: Iterable[Element]) -> list[int]:
    return [group.to_index(s) for s in S]


def subgroup_generated(group: Group, S: Iterable[Element]) -> Subgroup:
    S = list(S)
    if group.finite:
        tabs = group.tables()
        return Subgroup.from_index(group, generate(tabs, _indices(group, S)))
    elements, gens = symbolic_closure(group, S)
    return Subgroup(group, gens, elements=elements)


def normal_closure(group: Group, S: Iterable[Element], limit: int = 100_000) -> Subgroup:
    """Smallest normal subgroup containing ``S``.

    In the infinite example engine the closure is computed symbolically and
    raises :class:`~engelkit.core.ClosureDivergenceError` when it grows past
    ``limit``.
    """
    S = list(S)
    if group.finite:
        tabs = group.tables()
        sub = normal_closure_in(tabs, _indices(group, S), whole_group(tabs))
        out = Subgroup.from_index(group, sub)
        out._normal = True
        return out
    elements, gens = symbolic_closure(group, S, group.generators, limit=limit)
    out = Subgroup(group, gens, elements=elements)
    out._normal = True
    return out


def centralizer(group: Group, S: Iterable[Element]) -> Subgroup:
    if not group.finite:
        raise GroupError("centralizers are only computed in finite groups")
    tabs = group.tables()
    T = tabs.table
    mask = np.ones(tabs.n, dtype=bool)
    for s in _indices(group, S):
        mask &= T[:, s] == T[s, :]
    sub = IndexSubgroup(tabs, mask)
    # recover a short generating list
    gen = generate(tabs, [])
    for i in np.flatnonzero(mask):
        if not gen.mask[i]:
            gen.add(int(i))
    sub.gens = gen.gens
    return Subgroup.from_index(group, sub)

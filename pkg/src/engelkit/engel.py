"""Iterated commutators and Engel elements.

``[g,_1 a] = [g, a]`` and ``[g,_n a] = [[g,_{n-1} a], a]``.  An element ``a``
is left Engel when every ``g`` has some ``n`` with ``[g,_n a] = 1`` and right
Engel when every ``g`` has some ``n`` with ``[a,_n g] = 1``; bounded when one
``n`` serves every ``g``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import Element, Group, InfiniteGroupError, _same_group

SYMBOLIC_ITERATION_CAP = 64


class Verdict(enum.Enum):
    NOT_ENGEL = "not-engel"
    UNKNOWN = "unknown"

    def __repr__(self):
        return self.value


NOT_ENGEL = Verdict.NOT_ENGEL
UNKNOWN = Verdict.UNKNOWN


def iterated_commutator(g: Element, a: Element, n: int) -> Element:
    """Left-normed ``[g,_n a]``; ``n = 0`` is rejected."""
    G = _same_group(g, a)
    if n < 1:
        raise ValueError("iterated commutators are defined for n >= 1")
    c = g.payload
    for _ in range(n):
        c = G._comm(c, a.payload)
    return Element(G, c)


@dataclass
class OrbitResult:
    verdict: int | Verdict
    iterations: int


def commutator_orbit(start: Element, fixed: Element, cap: int | None = None) -> OrbitResult:
    """Follow ``c -> [c, fixed]`` from ``c = start`` until it hits 1.

    Returns the least ``n >= 1`` with ``[start,_n fixed] = 1``.  A repeated
    value proves the orbit cycles without reaching 1 (exact on finite
    groups).  ``cap`` bounds the number of steps; exceeding it yields
    ``UNKNOWN``.  ``iterations`` counts commutators evaluated.
    """
    G = _same_group(start, fixed)
    e = G.identity_payload
    y = fixed.payload
    c = G._comm(start.payload, y)
    n = 1
    seen = {start.payload}
    while c != e:
        if c in seen:
            return OrbitResult(NOT_ENGEL, n)
        if cap is not None and n >= cap:
            return OrbitResult(UNKNOWN, n)
        seen.add(c)
        c = G._comm(c, y)
        n += 1
    return OrbitResult(n, n)


def _default_cap(G: Group) -> int | None:
    return None if G.finite else SYMBOLIC_ITERATION_CAP


def left_engel_degree(a: Element, g: Element, cap: int | None = None) -> int | Verdict:
    """Least ``n`` with ``[g,_n a] = 1``, or ``NOT_ENGEL`` / ``UNKNOWN``."""
    cap = cap if cap is not None else _default_cap(a.group)
    return commutator_orbit(g, a, cap).verdict


def right_engel_degree(a: Element, g: Element, cap: int | None = None) -> int | Verdict:
    """Least ``n`` with ``[a,_n g] = 1``, or ``NOT_ENGEL`` / ``UNKNOWN``."""
    cap = cap if cap is not None else _default_cap(a.group)
    return commutator_orbit(a, g, cap).verdict


def commutator_table(G: Group) -> np.ndarray:
    tabs = G.tables()
    T, iv = tabs.table, tabs.inverse
    return T[T[iv[:, None], iv[None, :]], T]


def degree_matrix(G: Group) -> np.ndarray:
    """``D[c, y]`` = least ``n >= 1`` with ``[c,_n y] = 1``, or -1 if never.

    For each ``y`` the map ``c -> [c, y]`` is a function on ``G`` fixing 1;
    distances to 1 are filled in backwards, one layer per round, so the
    loop ends exactly when no new element reaches 1.
    """
    tabs = G.tables()
    C = commutator_table(G)
    n = tabs.n
    dist = np.full((n, n), -1, dtype=np.int32)
    dist[tabs.identity, :] = 0
    while True:
        nxt = np.take_along_axis(dist, C, axis=0)
        new = (dist < 0) & (nxt >= 0)
        if not new.any():
            break
        dist[new] = nxt[new] + 1
    return np.where(dist == 0, 1, dist)


@dataclass
class EngelClassification:
    group: Group
    left: frozenset[Element]
    bounded_left: dict[Element, int]
    right: frozenset[Element]
    bounded_right: dict[Element, int]
    degrees: np.ndarray = field(repr=False, default=None)

    def left_degree(self, a: Element, g: Element) -> int | Verdict:
        G = self.group
        d = int(self.degrees[G.to_index(g), G.to_index(a)])
        return d if d > 0 else NOT_ENGEL

    def right_degree(self, a: Element, g: Element) -> int | Verdict:
        G = self.group
        d = int(self.degrees[G.to_index(a), G.to_index(g)])
        return d if d > 0 else NOT_ENGEL


def eventually_trivial(G: Group) -> np.ndarray:
    """``E[c, y]`` is True iff ``[c,_n y] = 1`` for some ``n``.

    Independent of :func:`degree_matrix`: each map ``c -> [c, y]`` is raised
    to a power ``2^m >= |G|`` by repeated squaring, after which every orbit
    sits on its terminal cycle.
    """
    tabs = G.tables()
    F = commutator_table(G)
    steps = 1
    while steps < tabs.n:
        F = np.take_along_axis(F, F, axis=0)
        steps *= 2
    return F == tabs.identity


def classify(G: Group) -> EngelClassification:
    """Exhaustive left/right, bounded/unbounded Engel sets of a finite group."""
    if not G.finite:
        raise InfiniteGroupError(f"{G.name} is infinite; classification needs a finite group")
    D = degree_matrix(G)
    E = eventually_trivial(G)
    elems = G.elements()
    col_max = D.max(axis=0)
    row_max = D.max(axis=1)
    bounded_left = {elems[i]: int(col_max[i]) for i in np.flatnonzero((D > 0).all(axis=0))}
    bounded_right = {elems[i]: int(row_max[i]) for i in np.flatnonzero((D > 0).all(axis=1))}
    left = frozenset(elems[i] for i in np.flatnonzero(E.all(axis=0)))
    right = frozenset(elems[i] for i in np.flatnonzero(E.all(axis=1)))
    return EngelClassification(G, left, bounded_left, right, bounded_right, D)

"""Elements, the abstract group interface and cached finite tables.

Every concrete group stores its elements as hashable *payloads* (ints or
tuples of ints, always reduced to canonical residues).  :class:`Element`
wraps a payload together with the group it belongs to, so that arithmetic
between elements of different groups is rejected.

Conventions: conjugation is on the right, ``g^h = h^-1 g h``, and
commutators are ``[g, h] = g^-1 h^-1 g h``.
"""
from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

DEFAULT_ENUMERATION_CAP = 200_000
DEFAULT_ANALYSIS_CAP = 5_000
# --max-order may raise the caps, never beyond this.
HARD_CEILING = 10_000

Payload = Hashable


class GroupError(Exception):
    """Base class for every error raised by the engines."""


class CrossGroupError(GroupError):
    pass


class CapacityError(GroupError):
    """An operation needs the full element set but the group is too big."""


class InfiniteGroupError(CapacityError):
    pass


class NotAnAutomorphismError(GroupError):
    pass


class ClosureDivergenceError(GroupError):
    """A symbolic closure grew past its guard; the closure is (probably) infinite."""


class Element:
    """Immutable group element: a canonical payload scoped to one group."""

    __slots__ = ("group", "payload", "_hash")

    def __init__(self, group: Group, payload: Payload):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "payload", payload)
        object.__setattr__(self, "_hash", hash((id(group), payload)))

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.group is other.group and self.payload == other.payload

    def __hash__(self):
        return self._hash

    def __lt__(self, other: Element) -> bool:
        _same_group(self, other)
        return self.payload < other.payload

    def __mul__(self, other: Element) -> Element:
        return mul(self, other)

    def __invert__(self) -> Element:
        return inv(self)

    def __pow__(self, n: int) -> Element:
        return power(self, n)

    def is_identity(self) -> bool:
        return self.payload == self.group.identity_payload

    def __str__(self):
        return self.group.format_payload(self.payload)

    def __repr__(self):
        return f"<{self.group.name}: {self}>"


def _same_group(g: Element, h: Element) -> Group:
    if g.group is not h.group:
        raise CrossGroupError(
            f"operands belong to different groups ({g.group.name!r}, {h.group.name!r})"
        )
    return g.group


def mul(g: Element, h: Element) -> Element:
    G = _same_group(g, h)
    return Element(G, G._mul(g.payload, h.payload))


def inv(g: Element) -> Element:
    return Element(g.group, g.group._inv(g.payload))


def power(g: Element, n: int) -> Element:
    G = g.group
    return Element(G, G._pow(g.payload, n))


def conjugate(g: Element, h: Element) -> Element:
    """``g^h = h^-1 g h``."""
    G = _same_group(g, h)
    hp = h.payload
    return Element(G, G._mul(G._mul(G._inv(hp), g.payload), hp))


def commutator(g: Element, h: Element) -> Element:
    """``[g, h] = g^-1 h^-1 g h``."""
    G = _same_group(g, h)
    return Element(G, G._comm(g.payload, h.payload))


def element_order(g: Element, limit: int = 1_000_000) -> int:
    G = g.group
    x, n = g.payload, 1
    while x != G.identity_payload:
        x = G._mul(x, g.payload)
        n += 1
        if n > limit:
            raise ClosureDivergenceError(f"order of {g} exceeds {limit}")
    return n


@dataclass(frozen=True, eq=False)
class FiniteTables:
    """Index-level view of a finite group.

    Elements are numbered by the sorted order of their payloads.
    ``right[s, i]`` is the index of ``element_i * generator_s``.  The full
    Cayley table (``table[i, j] = i * j``) and the inverse map only exist
    when the group is within its analysis cap.
    """

    payloads: tuple
    index: dict
    identity: int
    gens: np.ndarray
    right: np.ndarray
    table: np.ndarray | None = None
    inverse: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.payloads)

    def comm(self, x, y):
        """Vectorised commutator on index arrays (or scalars)."""
        T, iv = self.table, self.inverse
        return T[T[iv[x], iv[y]], T[x, y]]

    def conj(self, x, y):
        """Vectorised ``x^y``."""
        T = self.table
        return T[T[self.inverse[y], x], y]


class Group:
    """Abstract group.  Subclasses provide payload-level arithmetic.

    Required hooks: ``identity_payload``, ``generator_payloads``,
    ``generator_names``, ``_mul``, ``_inv``, ``format_payload`` and
    ``_order`` (an ``int`` or ``math.inf``).
    """

    kind = "abstract"
    infinite = False
    # False when the order is only learnt by enumerating
    order_known_in_advance = True
    identity_payload: Payload
    generator_payloads: tuple
    generator_names: tuple

    def __init__(
        self,
        name: str,
        *,
        enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
        analysis_cap: int = DEFAULT_ANALYSIS_CAP,
    ):
        self.name = name
        self.enumeration_cap = enumeration_cap
        self.analysis_cap = analysis_cap
        self._lock = threading.RLock()
        self._enum_cache: FiniteTables | None = None
        self._table_cache: FiniteTables | None = None

    def _caps(self) -> dict[str, int]:
        return {"enumeration_cap": self.enumeration_cap, "analysis_cap": self.analysis_cap}

    # -- payload arithmetic -------------------------------------------------
    def _mul(self, x, y):
        raise NotImplementedError

    def _inv(self, x):
        raise NotImplementedError

    def _order(self):
        raise NotImplementedError

    def format_payload(self, x) -> str:
        return repr(x)

    def _pow(self, x, n: int):
        if n < 0:
            x, n = self._inv(x), -n
        result = self.identity_payload
        while n:
            if n & 1:
                result = self._mul(result, x)
            x = self._mul(x, x)
            n >>= 1
        return result

    def _comm(self, x, y):
        return self._mul(self._mul(self._inv(x), self._inv(y)), self._mul(x, y))

    def normalize(self, payload) -> Payload:
        """Reduce a raw payload to canonical form (identity by default)."""
        return payload

    # -- element-level surface ----------------------------------------------
    def element(self, payload) -> Element:
        return Element(self, self.normalize(payload))

    @property
    def identity(self) -> Element:
        return Element(self, self.identity_payload)

    @property
    def generators(self) -> list[Element]:
        return [Element(self, g) for g in self.generator_payloads]

    def generator(self, name: str) -> Element:
        try:
            return self.generators[self.generator_names.index(name)]
        except ValueError:
            raise KeyError(f"{self.name} has no generator named {name!r}") from None

    @property
    def finite(self) -> bool:
        return not self.infinite

    @property
    def order(self):
        return self._order()

    def word(self, payload) -> list[tuple[int, int]]:
        """Express a payload as ``[(generator index, exponent), ...]``."""
        tabs = self.finite_tables()
        i = tabs.index[payload]
        parent, via, _ = self._spanning_tree()
        out = []
        while i != tabs.identity:
            out.append((int(via[i]), 1))
            i = int(parent[i])
        return out[::-1]

    def describe(self) -> str:
        order = "inf" if not self.finite else str(self.order)
        return f"{self.name} ({self.kind}, order {order})"

    def __repr__(self):
        return f"<Group {self.describe()}>"

    # -- finite machinery ---------------------------------------------------
    def _check_finite(self, cap: int, what: str):
        if not self.finite:
            raise InfiniteGroupError(f"{self.name} is infinite; {what} needs a finite group")
        if (self.order_known_in_advance or self._enum_cache is not None) and self.order > cap:
            raise CapacityError(
                f"{self.name} has order {self.order} > {what} cap {cap}"
            )

    def finite_tables(self) -> FiniteTables:
        """Enumerate the group (BFS from the identity) within the enumeration cap."""
        with self._lock:
            if self._enum_cache is None:
                self._check_finite(self.enumeration_cap, "enumeration")
                self._enum_cache = self._enumerate()
            return self._enum_cache

    def _enumerate(self) -> FiniteTables:
        gens = self.generator_payloads
        seen = {self.identity_payload}
        queue = deque([self.identity_payload])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = self._mul(x, s)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > self.enumeration_cap:
                        raise CapacityError(
                            f"{self.name}: enumeration exceeded cap {self.enumeration_cap}"
                        )
                    queue.append(y)
        payloads = tuple(sorted(seen))
        index = {p: i for i, p in enumerate(payloads)}
        right = np.empty((len(gens), len(payloads)), dtype=np.int32)
        for s_i, s in enumerate(gens):
            right[s_i] = [index[self._mul(p, s)] for p in payloads]
        gen_idx = np.array([index[s] for s in gens], dtype=np.int32)
        return FiniteTables(payloads, index, index[self.identity_payload], gen_idx, right)

    def _spanning_tree(self):
        """BFS tree over right multiplication by generators: ``i = parent[i] * gen[via[i]]``."""
        with self._lock:
            cached = getattr(self, "_tree_cache", None)
            if cached is not None:
                return cached
            tabs = self.finite_tables()
            n = tabs.n
            parent = np.full(n, -1, dtype=np.int64)
            via = np.full(n, -1, dtype=np.int64)
            order = [tabs.identity]
            parent[tabs.identity] = tabs.identity
            head = 0
            while head < len(order):
                i = order[head]
                head += 1
                for s in range(len(tabs.gens)):
                    j = int(tabs.right[s, i])
                    if parent[j] < 0:
                        parent[j], via[j] = i, s
                        order.append(j)
            self._tree_cache = (parent, via, order)
            return self._tree_cache

    def tables(self) -> FiniteTables:
        """Full Cayley table and inverses; requires order <= analysis cap."""
        with self._lock:
            if self._table_cache is None:
                self._check_finite(self.analysis_cap, "set-analysis")
                base = self.finite_tables()
                parent, via, order = self._spanning_tree()
                n = base.n
                T = np.empty((n, n), dtype=np.int32)
                T[:, base.identity] = np.arange(n, dtype=np.int32)
                for j in order[1:]:
                    T[:, j] = base.right[via[j]][T[:, parent[j]]]
                rows, cols = np.nonzero(T == base.identity)
                inverse = np.empty(n, dtype=np.int32)
                inverse[rows] = cols
                self._table_cache = FiniteTables(
                    base.payloads, base.index, base.identity, base.gens, base.right, T, inverse
                )
            return self._table_cache

    def elements(self) -> list[Element]:
        """All elements in canonical (sorted payload) order."""
        return [Element(self, p) for p in self.finite_tables().payloads]

    def to_index(self, g: Element) -> int:
        if g.group is not self:
            raise CrossGroupError(f"{g!r} is not an element of {self.name}")
        return self.finite_tables().index[g.payload]

    def from_index(self, i: int) -> Element:
        return Element(self, self.finite_tables().payloads[int(i)])


def symbolic_closure(
    group: Group,
    seeds: Iterable[Element],
    conjugators: Sequence[Element] = (),
    limit: int = 100_000,
) -> tuple[frozenset[Element], list[Element]]:
    """Element-level closure that works in infinite groups.

    Returns the subgroup generated by ``seeds`` and, when ``conjugators`` is
    given, closed under conjugation by them and their inverses.  Only
    positive words are formed, so the result is only correct when it is
    finite; growth past ``limit`` raises :class:`ClosureDivergenceError`.
    """
    conj = [c.payload for c in conjugators]
    conj += [group._inv(c) for c in conj]
    gens: list[Any] = []
    elements = {group.identity_payload}
    pending = [s.payload for s in seeds]

    def extend(new_gen):
        gens.append(new_gen)
        frontier = list(elements)
        while frontier:
            nxt = []
            for u in frontier:
                for s in gens:
                    v = group._mul(u, s)
                    if v not in elements:
                        elements.add(v)
                        nxt.append(v)
            if len(elements) > limit:
                raise ClosureDivergenceError(
                    f"closure in {group.name} exceeded {limit} elements"
                )
            frontier = nxt

    while pending:
        s = pending.pop()
        if s in elements:
            continue
        extend(s)
        for g in gens:
            for c in conj:
                t = group._mul(group._mul(group._inv(c), g), c)
                if t not in elements:
                    pending.append(t)
    return frozenset(Element(group, p) for p in elements), [Element(group, g) for g in gens]

"""Concrete group engines.

* :class:`PermutationGroup` -- permutations of ``0..degree-1`` acting on the
  right, so ``p^(gh) = (p^g)^h`` and products compose left to right.
* :class:`CyclicGroup` -- residues mod ``m``.
* :class:`ModularGroup` -- ``<a, b | a^(p^n), b^(p^(n-1)), a^b = a^(1+p)>``
  in coordinates ``b^j a^k`` with closed-form collection.
* :class:`DirectProduct` and :class:`SemidirectProduct` (cyclic actor).
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import (
    CapacityError,
    Element,
    Group,
    GroupError,
    NotAnAutomorphismError,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------


def perm_from_cycles(degree: int, cycles: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Image tuple of a product of disjoint cycles given with 1-based points."""
    img = list(range(degree))
    seen: set[int] = set()
    for cycle in cycles:
        for pt in cycle:
            if not 1 <= pt <= degree:
                raise ValueError(f"point {pt} outside 1..{degree}")
            if pt in seen:
                raise ValueError(f"point {pt} repeated; cycles must be disjoint")
            seen.add(pt)
        for src, dst in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
            img[src - 1] = dst - 1
    return tuple(img)


def perm_to_cycles(img: Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles (1-based), each starting at its least point, sorted by it."""
    seen = set()
    out = []
    for start in range(len(img)):
        if start in seen or img[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = img[start]
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = img[j]
        out.append(tuple(c + 1 for c in cycle))
    return out


def format_cycles(img: Sequence[int]) -> str:
    cycles = perm_to_cycles(img)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


class PermutationGroup(Group):
    kind = "permutation"
    order_known_in_advance = False

    def __init__(self, degree: int, generators: Sequence[Sequence[int]], name: str = "", *,
                 generator_names: Sequence[str] | None = None, **caps):
        super().__init__(name or f"Perm{degree}", **caps)
        if degree < 1:
            raise GroupError("degree must be positive")
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(degree)):
                raise GroupError(f"{g} is not a permutation of 0..{degree - 1}")
            gens.append(g)
        if not gens:
            gens = [tuple(range(degree))]
        self.identity_payload = tuple(range(degree))
        self.generator_payloads = tuple(gens)
        self.generator_names = tuple(generator_names or (f"g{i + 1}" for i in range(len(gens))))

    @classmethod
    def from_cycles(cls, degree: int, generators: Sequence[Sequence[Sequence[int]]],
                    name: str = "", **kw) -> PermutationGroup:
        return cls(degree, [perm_from_cycles(degree, g) for g in generators], name, **kw)

    def _mul(self, x, y):
        return tuple(y[i] for i in x)

    def _inv(self, x):
        out = [0] * len(x)
        for i, j in enumerate(x):
            out[j] = i
        return tuple(out)

    def _order(self):
        return self.finite_tables().n

    def normalize(self, payload):
        payload = tuple(payload)
        if sorted(payload) != list(range(self.degree)):
            raise GroupError(f"{payload} is not a permutation of 0..{self.degree - 1}")
        return payload

    def format_payload(self, x) -> str:
        return format_cycles(x)

    def cycles_element(self, *cycles: Sequence[int]) -> Element:
        return self.element(perm_from_cycles(self.degree, cycles))


def symmetric_group(n: int, name: str = "", **caps) -> PermutationGroup:
    if n == 1:
        return PermutationGroup(1, [], name or "S1", **caps)
    gens = [[(1, 2)]]
    if n > 2:
        gens.append([tuple(range(1, n + 1))])
    return PermutationGroup.from_cycles(n, gens, name or f"S{n}", **caps)


def alternating_group(n: int, name: str = "", **caps) -> PermutationGroup:
    if n < 3:
        return PermutationGroup(max(n, 1), [], name or f"A{n}", **caps)
    gens = [[(i, i + 1, i + 2)] for i in range(1, n - 1)]
    return PermutationGroup.from_cycles(n, gens, name or f"A{n}", **caps)


def dihedral_group(order: int, name: str = "", **caps) -> PermutationGroup:
    """Dihedral group of the given order 2m (m >= 3) acting on m points."""
    if order % 2 or order < 6:
        raise GroupError(f"dihedral order must be even and >= 6, got {order}")
    m = order // 2
    rotation = tuple((i + 1) % m for i in range(m))
    reflection = tuple((-i) % m for i in range(m))
    return PermutationGroup(m, [rotation, reflection], name or f"D{order}",
                            generator_names=("r", "s"), **caps)


# ---------------------------------------------------------------------------
# cyclic
# ---------------------------------------------------------------------------


class CyclicGroup(Group):
    kind = "cyclic"

    def __init__(self, m: int, name: str = "", **caps):
        if m < 1:
            raise GroupError(f"cyclic order must be positive, got {m}")
        super().__init__(name or f"C{m}", **caps)
        self.m = m
        self.identity_payload = 0
        self.generator_payloads = (1 % m,)
        self.generator_names = ("g",)

    def _mul(self, x, y):
        return (x + y) % self.m

    def _inv(self, x):
        return -x % self.m

    def _pow(self, x, n):
        return x * n % self.m

    def _order(self):
        return self.m

    def normalize(self, payload):
        return int(payload) % self.m

    def format_payload(self, x) -> str:
        return "1" if x == 0 else ("g" if x == 1 else f"g^{x}")

    def word(self, payload):
        return [(0, payload)] if payload else []


# ---------------------------------------------------------------------------
# modular p-groups
# ---------------------------------------------------------------------------


class ModularGroup(Group):
    """Metacyclic p-group ``b^j a^k`` with ``a^b = a^(1+p)``.

    ``a`` has order ``p^n`` and ``b`` has order ``p^(n-1)``; the order is
    ``p^(2n-1)`` and the nilpotency class is ``n``.  Multiplication is the
    collection rule ``(j1, k1)(j2, k2) = (j1 + j2, k1 (1+p)^j2 + k2)``.
    """

    kind = "modular"

    def __init__(self, p: int, n: int, name: str = "", **caps):
        if p % 2 == 0 or not is_prime(p):
            raise GroupError(f"p must be an odd prime, got {p}")
        if n < 2:
            raise GroupError(f"n must be at least 2, got {n}")
        super().__init__(name or f"M({p},{n})", **caps)
        self.p, self.n = p, n
        self.mod_a = p ** n
        self.mod_b = p ** (n - 1)
        self.identity_payload = (0, 0)
        self.generator_payloads = ((0, 1), (1, 0))
        self.generator_names = ("a", "b")

    def _mul(self, x, y):
        j1, k1 = x
        j2, k2 = y
        q = self.mod_a
        return ((j1 + j2) % self.mod_b, (k1 * pow(1 + self.p, j2, q) + k2) % q)

    def _inv(self, x):
        j, k = x
        jj = -j % self.mod_b
        q = self.mod_a
        return (jj, -k * pow(1 + self.p, jj, q) % q)

    def _order(self):
        return self.p ** (2 * self.n - 1)

    def normalize(self, payload):
        j, k = payload
        return (int(j) % self.mod_b, int(k) % self.mod_a)

    def format_payload(self, x) -> str:
        j, k = x
        parts = []
        if j:
            parts.append("b" if j == 1 else f"b^{j}")
        if k:
            parts.append("a" if k == 1 else f"a^{k}")
        return " ".join(parts) or "1"

    def word(self, payload):
        j, k = payload
        return [(i, e) for i, e in ((1, j), (0, k)) if e]

    def geometric_sum(self, j: int) -> int:
        """``((1+p)^j - 1) / p`` reduced mod ``p^n``."""
        p = self.p
        return (pow(1 + p, j, p ** (self.n + 1)) - 1) // p % self.mod_a

    def twisted_b_power(self, c: int, j: int):
        """Closed form of ``(b a^c)^j = b^j a^(c * geometric_sum(j))`` for ``j >= 0``."""
        return (j % self.mod_b, c * self.geometric_sum(j) % self.mod_a)

    def twist(self, payload, shift: int):
        """Image of ``b^j a^k`` under ``b -> b a^shift, a -> a``.

        ``(b a^shift)^j a^k``; composing the twist ``r`` times equals the
        single twist with ``r * shift``.
        """
        j, k = payload
        return (j, (k + shift * self.geometric_sum(j)) % self.mod_a)

    def automorphism_power(self, images: Mapping) -> Callable | None:
        a, b = self.generator_payloads
        a_img, b_img = images.get(a, a), images.get(b, b)
        if a_img == a and b_img[0] == 1:
            c = b_img[1]
            return lambda u, r: self.twist(u, r * c)
        return None

    def check_endomorphism(self, images: Mapping) -> None:
        """Relator test for generator images (von Dyck) plus surjectivity mod Frattini."""
        a, b = self.generator_payloads
        A, B = images.get(a, a), images.get(b, b)
        e = self.identity_payload
        if self._pow(A, self.mod_a) != e:
            raise NotAnAutomorphismError(f"image of a does not satisfy a^{self.mod_a} = 1")
        if self._pow(B, self.mod_b) != e:
            raise NotAnAutomorphismError(f"image of b does not satisfy b^{self.mod_b} = 1")
        if self._mul(self._mul(self._inv(B), A), B) != self._pow(A, 1 + self.p):
            raise NotAnAutomorphismError("images violate a^b = a^(1+p)")
        # G/Phi(G) is elementary abelian of rank 2 with coordinates (j, k) mod p
        det = (A[0] * B[1] - A[1] * B[0]) % self.p
        if det == 0:
            raise NotAnAutomorphismError("images do not generate the group")


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


class DirectProduct(Group):
    kind = "direct"

    def __init__(self, left: Group, right: Group, name: str = "", **caps):
        super().__init__(name or f"{left.name}x{right.name}", **caps)
        self.left, self.right = left, right
        el, er = left.identity_payload, right.identity_payload
        self.identity_payload = (el, er)
        self.generator_payloads = tuple((s, er) for s in left.generator_payloads) + tuple(
            (el, t) for t in right.generator_payloads
        )
        self.generator_names = tuple(f"l.{s}" for s in left.generator_names) + tuple(
            f"r.{t}" for t in right.generator_names
        )

    def _mul(self, x, y):
        return (self.left._mul(x[0], y[0]), self.right._mul(x[1], y[1]))

    def _inv(self, x):
        return (self.left._inv(x[0]), self.right._inv(x[1]))

    def _order(self):
        return self.left.order * self.right.order

    def normalize(self, payload):
        u, v = payload
        return (self.left.normalize(u), self.right.normalize(v))

    def format_payload(self, x) -> str:
        return f"({self.left.format_payload(x[0])}, {self.right.format_payload(x[1])})"

    def word(self, payload):
        shift = len(self.left.generator_payloads)
        u, v = payload
        return self.left.word(u) + [(i + shift, e) for i, e in self.right.word(v)]


class SemidirectProduct(Group):
    """``<t> ⋉ base`` where the cyclic actor's generator ``t`` acts by an automorphism.

    Elements are pairs ``(r, u)`` standing for ``t^r u`` and
    ``u^t = action(u)``, so ``(r1, u)(r2, v) = (r1 + r2, action^r2(u) v)``.
    """

    kind = "semidirect"

    def __init__(self, actor: CyclicGroup, base: Group, action: Mapping, name: str = "", **caps):
        if not isinstance(actor, CyclicGroup):
            raise GroupError("the acting group of a semidirect product must be cyclic")
        super().__init__(name or f"{actor.name}:{base.name}", **caps)
        self.actor, self.base = actor, base
        images = {}
        for key, img in action.items():
            k = key.payload if isinstance(key, Element) else base.normalize(key)
            if k not in base.generator_payloads:
                raise GroupError(f"action key {base.format_payload(k)} is not a generator of {base.name}")
            images[k] = img.payload if isinstance(img, Element) else base.normalize(img)
        self.images = {g: images.get(g, g) for g in base.generator_payloads}
        self._table_power = None
        self._closed_power = getattr(base, "automorphism_power", lambda _: None)(self.images)
        self._validate()
        e = base.identity_payload
        self.identity_payload = (0, e)
        self.generator_payloads = ((1 % actor.m, e),) + tuple((0, s) for s in base.generator_payloads)
        self.generator_names = ("t",) + tuple(base.generator_names)

    def action_images(self) -> dict:
        return dict(self.images)

    def _validate(self):
        base = self.base
        if base.finite and base.order <= base.analysis_cap:
            tabs = base.tables()
            parent, via, order = base._spanning_tree()
            img_idx = [tabs.index[self.images[base.generator_payloads[s]]] for s in range(len(tabs.gens))]
            A = np.empty(tabs.n, dtype=np.int64)
            A[tabs.identity] = tabs.identity
            for i in order[1:]:
                A[i] = tabs.table[A[parent[i]], img_idx[via[i]]]
            if len(np.unique(A)) != tabs.n:
                raise NotAnAutomorphismError(f"action on {base.name} is not bijective")
            T = tabs.table
            bad = np.argwhere(A[T] != T[A[:, None], A[None, :]])
            if len(bad):
                u, v = (base.format_payload(tabs.payloads[i]) for i in bad[0])
                raise NotAnAutomorphismError(
                    f"action is not a homomorphism: fails on ({u}, {v})"
                )
            self._table_power = A
        elif hasattr(base, "check_endomorphism"):
            base.check_endomorphism(self.images)
        else:
            raise CapacityError(f"cannot validate an action on {base.name} beyond the analysis cap")
        m = self.actor.m
        for g in base.generator_payloads:
            if self._act_unreduced(g, m) != g:
                raise NotAnAutomorphismError(
                    f"order of the action does not divide the actor order {m}"
                )

    def _apply_once(self, u):
        base = self.base
        out = base.identity_payload
        gens = base.generator_payloads
        for i, e in base.word(u):
            out = base._mul(out, base._pow(self.images[gens[i]], e))
        return out

    @lru_cache(maxsize=None)
    def _table_power_r(self, r: int):
        A = self._table_power
        out = np.arange(len(A))
        for _ in range(r):
            out = A[out]
        return out

    def _act(self, u, r: int):
        r %= self.actor.m
        if r == 0:
            return u
        return self._act_unreduced(u, r)

    def _act_unreduced(self, u, r: int):
        """``action^r(u)`` for ``r >= 0`` without reducing ``r`` mod the actor order."""
        if self._closed_power is not None:
            return self._closed_power(u, r)
        if self._table_power is not None:
            tabs = self.base.finite_tables()
            return tabs.payloads[self._table_power_r(r)[tabs.index[u]]]
        for _ in range(r):
            u = self._apply_once(u)
        return u

    def _mul(self, x, y):
        r1, u = x
        r2, v = y
        return ((r1 + r2) % self.actor.m, self.base._mul(self._act(u, r2), v))

    def _inv(self, x):
        r, u = x
        return (-r % self.actor.m, self._act(self.base._inv(u), -r))

    def _order(self):
        return self.actor.order * self.base.order

    def normalize(self, payload):
        r, u = payload
        return (int(r) % self.actor.m, self.base.normalize(u))

    def format_payload(self, x) -> str:
        r, u = x
        parts = []
        if r:
            parts.append("t" if r == 1 else f"t^{r}")
        if u != self.base.identity_payload:
            parts.append(self.base.format_payload(u))
        return " · ".join(parts) or "1"

    def word(self, payload):
        r, u = payload
        return ([(0, r)] if r else []) + [(i + 1, e) for i, e in self.base.word(u)]


def modular_group(p: int, n: int, name: str = "", **caps) -> ModularGroup:
    return ModularGroup(p, n, name, **caps)


def direct_product(left: Group, right: Group, name: str = "", **caps) -> DirectProduct:
    return DirectProduct(left, right, name, **caps)


def semidirect_product(actor: CyclicGroup, base: Group, action: Mapping, name: str = "",
                       **caps) -> SemidirectProduct:
    return SemidirectProduct(actor, base, action, name, **caps)

"""Symbolic model of the metabelian group ``G = <x> ⋉ (P_1 x ... x P_N)``.

Each ``P_i = <a_i, b_i>`` is the modular group with parameters
``(p_i, n_i)`` and ``x`` acts on it by ``a_i -> a_i``, ``b_i -> b_i a_i^p_i``.
Elements are ``x^r`` times a tuple of component coordinates; ``r`` is an
unreduced integer, so the model is genuinely infinite, and only the action
of ``x`` on each component is periodic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ClosureDivergenceError,
    Element,
    Group,
    GroupError,
    commutator,
    symbolic_closure,
)
from .engel import UNKNOWN, iterated_commutator, right_engel_degree
from .engines import CyclicGroup, ModularGroup, SemidirectProduct, is_prime
from .series import element_height, upper_central_series

DEFAULT_COMPONENTS = ((3, 2), (5, 3), (7, 4))


class TruncationTooSmall(GroupError):
    """No component of the truncation is large enough to carry a witness."""


@dataclass(frozen=True)
class ExampleParams:
    components: tuple[tuple[int, int], ...] = DEFAULT_COMPONENTS
    truncation: int | None = None

    def __post_init__(self):
        comps = tuple((int(p), int(n)) for p, n in self.components)
        N = len(comps) if self.truncation is None else int(self.truncation)
        if not 1 <= N <= len(comps):
            raise GroupError(f"truncation N={N} must lie in 1..{len(comps)}")
        comps = comps[:N]
        for p, n in comps:
            if p % 2 == 0 or not is_prime(p):
                raise GroupError(f"{p} is not an odd prime")
        ps = [p for p, _ in comps]
        ns = [n for _, n in comps]
        if any(x >= y for x, y in zip(ps, ps[1:])):
            raise GroupError(f"primes must be strictly increasing, got {ps}")
        if ns[0] <= 1 or any(x >= y for x, y in zip(ns, ns[1:])):
            raise GroupError(f"exponents must satisfy 1 < n_1 < n_2 < ..., got {ns}")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "truncation", N)

    @classmethod
    def from_lists(cls, primes, exps, N=None) -> ExampleParams:
        if len(primes) != len(exps):
            raise GroupError("primes and exps must have the same length")
        return cls(tuple(zip(primes, exps)), N)

    def describe(self) -> str:
        ps = ",".join(str(p) for p, _ in self.components)
        ns = ",".join(str(n) for _, n in self.components)
        return f"example primes=[{ps}] exps=[{ns}] N={self.truncation}"


class ExampleGroup(Group):
    kind = "example"
    infinite = True

    def __init__(self, params: ExampleParams | None = None, name: str = "", **caps):
        super().__init__(name or "G", **caps)
        self.params = params or ExampleParams()
        self.factors = tuple(ModularGroup(p, n) for p, n in self.params.components)
        ident = tuple(P.identity_payload for P in self.factors)
        self.identity_payload = (0, ident)
        gens, names = [(1, ident)], ["x"]
        for i, P in enumerate(self.factors):
            for label, g in zip(("a", "b"), P.generator_payloads):
                parts = list(ident)
                parts[i] = g
                gens.append((0, tuple(parts)))
                names.append(f"{label}{i + 1}")
        self.generator_payloads = tuple(gens)
        self.generator_names = tuple(names)

    # arithmetic: (r1, u)(r2, v) = (r1 + r2, alpha^r2(u) v)
    def _mul(self, x, y):
        r1, us = x
        r2, vs = y
        return (r1 + r2, tuple(
            P._mul(P.twist(u, r2 * P.p), v) for P, u, v in zip(self.factors, us, vs)
        ))

    def _inv(self, x):
        r, us = x
        return (-r, tuple(P.twist(P._inv(u), -r * P.p) for P, u in zip(self.factors, us)))

    def _order(self):
        return math.inf

    def normalize(self, payload):
        r, parts = payload
        if len(parts) != len(self.factors):
            raise GroupError("wrong number of components")
        return (int(r), tuple(P.normalize(u) for P, u in zip(self.factors, parts)))

    def format_payload(self, x) -> str:
        r, parts = x
        out = []
        if r:
            out.append("x" if r == 1 else f"x^{r}")
        comps = []
        for i, (j, k) in enumerate(parts, start=1):
            bits = []
            if j:
                bits.append(f"b{i}" if j == 1 else f"b{i}^{j}")
            if k:
                bits.append(f"a{i}" if k == 1 else f"a{i}^{k}")
            if bits:
                comps.append("(" + " ".join(bits) + ")")
        if comps:
            out.append("".join(comps))
        return " · ".join(out) or "1"

    def word(self, payload):
        r, parts = payload
        out = [(0, r)] if r else []
        for i, (j, k) in enumerate(parts):
            out += [(g, e) for g, e in ((2 + 2 * i, j), (1 + 2 * i, k)) if e]
        return out

    # convenience constructors
    def x(self, r: int = 1) -> Element:
        return Element(self, (r, self.identity_payload[1]))

    def _component(self, i: int, payload) -> Element:
        parts = list(self.identity_payload[1])
        parts[i - 1] = self.factors[i - 1].normalize(payload)
        return Element(self, (0, tuple(parts)))

    def a(self, i: int, k: int = 1) -> Element:
        return self._component(i, (0, k))

    def b(self, i: int, j: int = 1) -> Element:
        return self._component(i, (j, 0))

    def is_periodic(self, g: Element) -> bool:
        return g.payload[0] == 0


def example_group(params: ExampleParams | None = None, name: str = "", **caps) -> ExampleGroup:
    return ExampleGroup(params, name, **caps)


def _component_params(params: ExampleParams, i: int) -> tuple[int, int]:
    if not 1 <= i <= len(params.components):
        raise GroupError(f"component {i} outside 1..{len(params.components)}")
    return params.components[i - 1]


# ---------------------------------------------------------------------------
# the automorphism alpha
# ---------------------------------------------------------------------------


@dataclass
class AlphaReport:
    p: int
    n: int
    shift: int
    homomorphism: bool
    bijective: bool
    pairs_checked: int
    witness: tuple[str, str] | None = None

    @property
    def passed(self) -> bool:
        return self.homomorphism and self.bijective


def verify_alpha_automorphism(p: int, n: int, shift: int | None = None, **caps) -> AlphaReport:
    """Exhaustively test ``b^j a^k -> (b a^shift)^j a^k`` on the modular group.

    ``shift`` defaults to ``p``; ``0`` gives the identity map.  Images are
    formed by exponentiation in the group, independently of the closed-form
    twist used by the engines.
    """
    shift = p if shift is None else shift
    P = ModularGroup(p, n, **caps)
    tabs = P.tables()
    ba = (1, shift % P.mod_a)
    A = np.array([
        tabs.index[P._mul(P._pow(ba, j), (0, k))] for j, k in tabs.payloads
    ])
    T = tabs.table
    bad = np.argwhere(A[T] != T[A[:, None], A[None, :]])
    witness = None
    if len(bad):
        u, v = bad[0]
        witness = (P.format_payload(tabs.payloads[u]), P.format_payload(tabs.payloads[v]))
    return AlphaReport(
        p, n, shift,
        homomorphism=not len(bad),
        bijective=len(np.unique(A)) == tabs.n,
        pairs_checked=tabs.n ** 2,
        witness=witness,
    )


# ---------------------------------------------------------------------------
# commutator identities
# ---------------------------------------------------------------------------


@dataclass
class FormulaCheck:
    i: int
    r: int
    m: int
    computed: Element
    expected: Element
    b_commutator: Element
    b_expected: Element

    @property
    def passed(self) -> bool:
        return self.computed == self.expected and self.b_commutator == self.b_expected


def engel_formula_check(G: ExampleGroup, i: int, r: int, m: int) -> FormulaCheck:
    """``[x^r,_m b_i]`` against ``a_i^(-r p_i^m)`` and ``[b_i, x^r]`` against ``a_i^(r p_i)``."""
    p, _ = _component_params(G.params, i)
    if m < 1:
        raise ValueError("m must be at least 1")
    xr, bi = G.x(r), G.b(i)
    return FormulaCheck(
        i, r, m,
        computed=iterated_commutator(xr, bi, m),
        expected=G.a(i, -r * p ** m),
        b_commutator=commutator(bi, xr),
        b_expected=G.a(i, r * p),
    )


def modular_commutator_check(P: ModularGroup) -> dict[int, tuple[Element, Element]]:
    """``m -> ([a,_m b], a^(p^m))`` for ``1 <= m <= n``."""
    a, b = P.generators
    return {m: (iterated_commutator(a, b, m), a ** (P.p ** m)) for m in range(1, P.n + 1)}


@dataclass
class Witness:
    m: int
    component: int
    commutator: Element


def bounded_right_engel_excludes_x(G: ExampleGroup, m: int) -> Witness:
    """A component ``i`` with ``[x,_m b_i] != 1``: ``x`` is not right ``m``-Engel."""
    for i, (_, n) in enumerate(G.params.components, start=1):
        if n > m:
            c = iterated_commutator(G.x(), G.b(i), m)
            if not c.is_identity():
                return Witness(m, i, c)
    raise TruncationTooSmall(
        f"no component with n_i > {m}; extend the truncation to exhibit a witness"
    )


def first_vanishing(G: ExampleGroup, i: int, r: int = 1) -> int | None:
    """Least ``m`` with ``[x^r,_m b_i] = 1`` (``None`` if beyond the iteration cap)."""
    d = right_engel_degree(G.x(r), G.b(i))
    return None if d is UNKNOWN else d


# ---------------------------------------------------------------------------
# finite quotients and central heights
# ---------------------------------------------------------------------------


def quotient_group(params: ExampleParams, i: int, **caps) -> SemidirectProduct:
    """``F_i = C_(p^(n-1)) ⋉ P_i`` with the generator acting as ``b -> b a^p``."""
    p, n = _component_params(params, i)
    P = ModularGroup(p, n, f"P{i}", **caps)
    a, b = P.generators
    actor = CyclicGroup(p ** (n - 1), f"X{i}", **caps)
    return SemidirectProduct(actor, P, {b: b * a ** p}, f"F{i}", **caps)


def central_height(params: ExampleParams, i: int, which: str = "a") -> int | None:
    """Upper-central height of ``a_i`` (or ``b_i``) in the quotient ``F_i``.

    The kernel of ``G -> F_i`` meets ``<a_i>`` trivially and the other
    components commute with ``P_i``, so the height in ``F_i`` is the height
    in ``G``.  Uses the generator recursion of :func:`element_height`, which
    needs no enumeration; within the analysis cap the full upper central
    series is consulted as well and must agree.
    """
    F = quotient_group(params, i)
    g = F.element((0, (0, 1) if which == "a" else (1, 0)))
    h = element_height(g)
    if F.order <= F.analysis_cap:
        series = upper_central_series(F)
        full = next((k for k, t in enumerate(series.terms) if g in t), None)
        if full != h:
            raise RuntimeError(f"height mismatch in {F.name}: {h} vs {full}")
    return h


def symbolic_height(G: ExampleGroup, g: Element) -> int | None:
    """Height of ``g`` computed directly in the symbolic engine."""
    return element_height(g)


def quotient_matches_engine(params: ExampleParams, i: int) -> tuple[bool, tuple | None]:
    """Compare ``F_i``'s multiplication table with the symbolic engine restricted to
    component ``i`` and ``r`` reduced mod ``p_i^(n_i - 1)``."""
    F = quotient_group(params, i)
    G = ExampleGroup(ExampleParams((params.components[i - 1],)))
    m = F.actor.m
    elems = F.elements()
    for u, v in itertools.product(elems, elems):
        (r1, x1), (r2, x2) = u.payload, v.payload
        r, (y,) = G._mul((r1, (x1,)), (r2, (x2,)))
        if (r % m, y) != (u * v).payload:
            return False, (str(u), str(v))
    return True, None


# ---------------------------------------------------------------------------
# FC^2 structure
# ---------------------------------------------------------------------------


def short_words(G: Group, max_length: int) -> list[Element]:
    """All products of at most ``max_length`` generators and inverses, deterministic order."""
    letters = G.generators + [~g for g in G.generators]
    seen = {G.identity}
    out = [G.identity]
    for length in range(1, max_length + 1):
        for combo in itertools.product(letters, repeat=length):
            g = G.identity
            for c in combo:
                g = g * c
            if g not in seen:
                seen.add(g)
                out.append(g)
    return out


@dataclass
class FC2Report:
    pairs_checked: int
    commutators_in_A: bool
    conjugacy_classes: dict[str, int] = field(default_factory=dict)
    normal_closures: dict[str, int] = field(default_factory=dict)
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.commutators_in_A and self.witness is None


def in_A(g: Element) -> bool:
    r, parts = g.payload
    return r == 0 and all(j == 0 for j, _ in parts)


def conjugacy_class(g: Element, limit: int = 100_000) -> frozenset[Element]:
    """Orbit of ``g`` under conjugation by the generators and their inverses."""
    G = g.group
    conj = G.generators + [~c for c in G.generators]
    seen = {g}
    frontier = [g]
    while frontier:
        nxt = []
        for u in frontier:
            for c in conj:
                v = (~c) * u * c
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if len(seen) > limit:
            raise ClosureDivergenceError(f"conjugacy class of {g} exceeded {limit}")
        frontier = nxt
    return frozenset(seen)


def verify_fc2_structure(G: ExampleGroup, budget: int = 400, word_length: int = 2,
                         closure_limit: int = 200_000) -> FC2Report:
    """Commutators of sampled pairs lie in ``A = Dr <a_i>`` and every ``a_i``, ``b_i``
    has a finite conjugacy class and normal closure."""
    words = short_words(G, word_length)
    pairs = list(itertools.islice(itertools.product(words, words), budget))
    report = FC2Report(pairs_checked=len(pairs), commutators_in_A=True)
    for u, v in pairs:
        c = commutator(u, v)
        if not in_A(c):
            report.commutators_in_A = False
            report.witness = f"[{u}, {v}] = {c}"
            break
    for name in G.generator_names[1:]:
        y = G.generator(name)
        report.conjugacy_classes[name] = len(conjugacy_class(y, closure_limit))
        elements, _ = symbolic_closure(G, [y], G.generators, limit=closure_limit)
        report.normal_closures[name] = len(elements)
    return report

"""Independent reference computations for the tests.

Everything here works from the definitions, on sympy permutation groups,
without touching the library's tables, closures or series code.
"""
from __future__ import annotations

from functools import reduce

from sympy.combinatorics import Permutation, PermutationGroup


def comm(g: Permutation, h: Permutation) -> Permutation:
    return ~g * ~h * g * h


def sympy_group(gens: list[tuple[int, ...]]) -> PermutationGroup:
    return PermutationGroup([Permutation(list(g)) for g in gens])


def affine_modular(p: int, n: int) -> PermutationGroup:
    """``a: x -> x + 1`` and ``b: x -> (1+p) x`` on ``Z/p^n``; a faithful model of M(p, n)."""
    q = p ** n
    a = Permutation([(x + 1) % q for x in range(q)])
    b = Permutation([(1 + p) * x % q for x in range(q)])
    return PermutationGroup([a, b])


def affine_element(p: int, n: int, j: int, k: int) -> Permutation:
    """``b^j a^k`` as the map ``x -> (1+p)^j x + k`` (right action: b^j first)."""
    q = p ** n
    m = pow(1 + p, j, q)
    return Permutation([(m * x + k) % q for x in range(q)])


def left_engel(elems) -> set:
    """a such that every g reaches 1 under c -> [c, a]."""
    n = len(elems)
    out = set()
    for a in elems:
        ok = True
        for g in elems:
            c = comm(g, a)
            for _ in range(n):
                if c.is_Identity:
                    break
                c = comm(c, a)
            if not c.is_Identity:
                ok = False
                break
        if ok:
            out.add(a)
    return out


def right_engel(elems) -> set:
    n = len(elems)
    out = set()
    for a in elems:
        ok = True
        for g in elems:
            c = comm(a, g)
            for _ in range(n):
                if c.is_Identity:
                    break
                c = comm(c, g)
            if not c.is_Identity:
                ok = False
                break
        if ok:
            out.add(a)
    return out


def upper_central_orders(elems) -> list[int]:
    """Z_{i+1} = {g : [g, h] in Z_i for all h}, straight from the definition."""
    Z = {e for e in elems if e.is_Identity}
    orders = [len(Z)]
    while True:
        nxt = {g for g in elems if all(comm(g, h) in Z for h in elems)}
        if nxt == Z:
            return orders
        Z = nxt
        orders.append(len(Z))


def hypercentre(elems) -> set:
    Z = {e for e in elems if e.is_Identity}
    while True:
        nxt = {g for g in elems if all(comm(g, h) in Z for h in elems)}
        if nxt == Z:
            return Z
        Z = nxt


def fitting(G: PermutationGroup) -> set:
    """x lies in the Fitting subgroup iff its normal closure is nilpotent."""
    return {x for x in G.elements if G.normal_closure(PermutationGroup([x])).is_nilpotent}


def baer(G: PermutationGroup) -> set:
    """x such that <x> is subnormal: iterated normal closures reach <x>."""
    out = set()
    for x in G.elements:
        X = PermutationGroup([x])
        H = G
        while True:
            K = H.normal_closure(X)
            if K.order() == H.order():
                break
            H = K
        if H.order() == X.order():
            out.add(x)
    return out


def lower_central_orders(G: PermutationGroup) -> list[int]:
    return [H.order() for H in G.lower_central_series()]


def product(xs):
    return reduce(lambda u, v: u * v, xs)

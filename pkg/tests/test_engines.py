import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from engelkit import (
    CyclicGroup,
    ModularGroup,
    NotAnAutomorphismError,
    alternating_group,
    centralizer,
    commutator,
    dihedral_group,
    direct_product,
    normal_closure,
    semidirect_product,
    subgroup_generated,
    symmetric_group,
)

MODULAR_PARAMS = [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 4)]


@st.composite
def modular_pairs(draw):
    p, n = draw(st.sampled_from(MODULAR_PARAMS))
    coords = st.tuples(st.integers(0, p ** (n - 1) - 1), st.integers(0, p ** n - 1))
    return p, n, draw(coords), draw(coords)


@settings(max_examples=200, deadline=None)
@given(modular_pairs())
def test_modular_product_matches_affine_model(case):
    p, n, (j1, k1), (j2, k2) = case
    P = ModularGroup(p, n)
    prod = P.element((j1, k1)) * P.element((j2, k2))
    model = oracle.affine_element(p, n, j1, k1) * oracle.affine_element(p, n, j2, k2)
    assert oracle.affine_element(p, n, *prod.payload) == model


@settings(max_examples=100, deadline=None)
@given(modular_pairs(), st.integers(-30, 30))
def test_modular_inverse_and_power(case, e):
    p, n, u, _ = case
    P = ModularGroup(p, n)
    g = P.element(u)
    assert (g * ~g).is_identity()
    slow = P.identity
    for _ in range(abs(e)):
        slow = slow * (g if e > 0 else ~g)
    assert g ** e == slow


@pytest.mark.parametrize("p,n", [(3, 2), (5, 3), (7, 4)])
def test_twisted_power_closed_form(p, n):
    P = ModularGroup(p, n)
    a, b = P.generators
    for c in range(0, 2 * p):
        x = b * a ** c
        acc = P.identity
        for j in range(p ** (n - 1) + 2):
            assert acc.payload == P.twisted_b_power(c, j)
            acc = acc * x


def test_twisted_power_example_value():
    P = ModularGroup(3, 2)
    a, b = P.generators
    assert P.geometric_sum(2) == 5
    assert (b * a) ** 2 == b ** 2 * a ** 5


@pytest.mark.parametrize("p,n", [(3, 2), (5, 3)])
def test_twist_composes_additively(p, n):
    P = ModularGroup(p, n)
    for u in P.elements()[:: max(1, P.order // 200)]:
        once = u.payload
        for r in range(1, 4):
            once = P.twist(once, p)
            assert once == P.twist(u.payload, r * p)


def test_direct_product_of_cyclics_is_abelian():
    G = direct_product(CyclicGroup(2), CyclicGroup(3))
    assert G.order == 6
    assert all(commutator(x, y).is_identity() for x in G.elements() for y in G.elements())
    assert G.generator_names == ("l.g", "r.g")


def test_semidirect_quotient_of_order_81():
    P = ModularGroup(3, 2)
    a, b = P.generators
    F = semidirect_product(CyclicGroup(3), P, {b: b * a ** 3})
    assert F.order == 81
    t = F.generator("t")
    bF = F.generator("b")
    aF = F.generator("a")
    assert ~t * bF * t == bF * aF ** 3
    assert ~t * aF * t == aF


def test_semidirect_rejects_non_automorphism():
    P = ModularGroup(3, 2)
    a, b = P.generators
    with pytest.raises(NotAnAutomorphismError):
        semidirect_product(CyclicGroup(3), P, {b: a})


def test_semidirect_rejects_order_mismatch():
    # x -> x^2 on C5 has order 4, which does not divide 3
    C5 = CyclicGroup(5)
    g = C5.generators[0]
    with pytest.raises(NotAnAutomorphismError):
        semidirect_product(CyclicGroup(3), C5, {g: g ** 2})
    assert semidirect_product(CyclicGroup(4), C5, {g: g ** 2}).order == 20


def test_semidirect_validation_beyond_cap_uses_relators():
    P = ModularGroup(7, 4)  # order 7^7, far beyond the analysis cap
    a, b = P.generators
    F = semidirect_product(CyclicGroup(343), P, {b: b * a ** 7})
    assert F.order == 7 ** 10
    with pytest.raises(NotAnAutomorphismError):
        semidirect_product(CyclicGroup(343), P, {b: a})
    with pytest.raises(NotAnAutomorphismError):
        semidirect_product(CyclicGroup(343), P, {a: a ** 7})


def test_semidirect_exhaustive_check_catches_what_sampling_might_miss():
    P = ModularGroup(3, 2)
    a, b = P.generators
    # a -> a^2 alone breaks a^b = a^4 only in combination with b
    with pytest.raises(NotAnAutomorphismError):
        semidirect_product(CyclicGroup(2), P, {a: a ** 2, b: b * a})


def test_dihedral_and_alternating():
    D8 = dihedral_group(8)
    assert D8.order == 8 and D8.degree == 4
    assert dihedral_group(12).order == 12
    assert alternating_group(4).order == 12
    assert symmetric_group(4).order == 24


def test_semidirect_associativity_exhaustive():
    C5 = CyclicGroup(5)
    g = C5.generators[0]
    F = semidirect_product(CyclicGroup(4), C5, {g: g ** 2})
    els = F.elements()
    for x, y, z in itertools.product(els[::3], els[::2], els[::5]):
        assert (x * y) * z == x * (y * z)


def test_subgroup_examples():
    S3 = symmetric_group(3)
    t, c = S3.cycles_element((1, 2)), S3.cycles_element((1, 2, 3))
    assert normal_closure(S3, [t]).order == 6
    A3 = normal_closure(S3, [c])
    assert A3.order == 3
    assert centralizer(S3, [c]) == A3
    assert subgroup_generated(S3, [t]).order == 2


GROUPS = [symmetric_group(4), dihedral_group(12), ModularGroup(3, 2)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(GROUPS), st.lists(st.integers(0, 10 ** 6), min_size=1, max_size=3))
def test_normal_closure_is_normal_and_centralizer_commutes(G, picks):
    els = G.elements()
    S = [els[i % len(els)] for i in picks]
    N = normal_closure(G, S)
    assert all(s in N for s in S)
    assert N.is_normal()
    C = centralizer(G, S)
    for z in C.elements:
        for s in S:
            assert z * s == s * z
    outside = [g for g in els if g not in C]
    assert all(any(g * s != s * g for s in S) for g in outside)

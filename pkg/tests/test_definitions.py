import pytest

from engelkit import ExampleGroup, ModularGroup, PermutationGroup
from engelkit.cli import engel_report, series_dict
from engelkit.definitions import (
    DefinitionError,
    build_groups,
    definition_line,
    definitions_text,
    parse_definitions,
)
from engelkit.verify import catalog


def build(text, **kw):
    return build_groups(parse_definitions(text), **kw)


def test_permutation_definition():
    (d,) = parse_definitions("group S3 = perm 3 gens (1 2), (1 2 3)")
    assert d.name == "S3" and d.kind == "perm"
    assert d.args == {"degree": 3, "gens": (((1, 2),), ((1, 2, 3),))}
    G = build_groups([d])["S3"]
    assert isinstance(G, PermutationGroup) and G.order == 6


def test_modular_definition():
    G = build("group P = modular p=3 n=2")["P"]
    assert isinstance(G, ModularGroup) and (G.p, G.n) == (3, 2)


def test_every_constructor():
    text = """
    # comment lines and blank lines are ignored

    group A = perm 4 gens (1 2)(3 4), (1 3)(2 4)   # Klein four
    group Z = cyclic 3
    group D = dihedral 10
    group P = modular p=3 n=2
    group Q = direct A Z
    group F = semidirect Z P action b -> b a^3, a -> a
    group H = semidirect Z P
    group E = example primes=[3,5] exps=[2,3] N=2
    group E2 = example primes=[3] exps=[2]
    """
    gs = build(text)
    assert [gs[k].order for k in "AZDPQFH"] == [4, 3, 10, 27, 12, 81, 81]
    assert isinstance(gs["E"], ExampleGroup) and gs["E"].params.truncation == 2
    assert gs["E2"].params.components == ((3, 2),)


@pytest.mark.parametrize("text,line,col,fragment", [
    ("group X = perm 3 gens (1 4)", 1, 26, "exceeds degree 3"),
    ("group X = perm 3 gens (1 2)(2 3)", 1, 29, "disjoint"),
    ("group X = perm 3 gens (1 2", 1, 27, "expected point or ')'"),
    ("group X = perm 3 gens", 1, 22, "expected a cycle"),
    ("group X = cyclic 3\ngroup X = cyclic 4", 2, 7, "duplicate name"),
    ("group Y = direct A B", 1, 18, "unresolved reference 'A'"),
    ("\n\ngroup Y = cyclic", 3, 17, "expected order"),
    ("group Y = modular p=3", 1, 22, "expected 'n='"),
    ("group Y = banana 3", 1, 11, "unknown constructor"),
    ("grup Y = cyclic 3", 1, 1, "expected 'group'"),
    ("group Y = cyclic 3 4", 1, 20, "unexpected '4'"),
    ("group Y = cyclic 3 $", 1, 20, "unexpected character"),
    ("group Y = cyclic 0", 1, 11, "positive"),
    ("group Y = modular p=4 n=2", 1, 11, "odd prime"),
    ("group Z = cyclic 3\ngroup P = modular p=3 n=2\ngroup F = semidirect Z P action b -> a",
     3, 11, "not bijective"),
    ("group Z = cyclic 3\ngroup P = modular p=3 n=2\ngroup F = semidirect Z P action c -> a",
     3, 33, "no generator 'c'"),
    ("group E = example primes=[5,3] exps=[2,3]", 1, 11, "strictly increasing"),
])
def test_diagnostics_carry_line_and_column(text, line, col, fragment):
    with pytest.raises(DefinitionError) as info:
        build(text)
    err = info.value
    assert (err.line, err.column) == (line, col)
    assert fragment in err.message
    assert str(err).startswith(f"line {line}, column {col}:")


def test_predefined_names_can_be_referenced_and_shadowed():
    base = {G.name: G for G in catalog()}
    gs = build_groups(parse_definitions("group Q = direct S3 C6", predefined=base), predefined=base)
    assert gs["Q"].order == 36
    gs = build_groups(parse_definitions("group S3 = cyclic 2", predefined=base), predefined=base)
    assert gs["S3"].order == 2


def test_catalog_round_trip():
    groups = catalog()
    text = definitions_text(groups)
    rebuilt = build(text)
    for G in groups:
        H = rebuilt[G.name]
        assert H.order == G.order
        assert engel_report(H) == engel_report(G)
        assert series_dict(H) == series_dict(G)
    # and the text itself is a fixed point
    assert definitions_text([rebuilt[G.name] for G in groups]) == text


def test_serialising_odd_names():
    G = ModularGroup(3, 2)  # default name M(3,2) is not an identifier
    text = definitions_text([G])
    assert text == "group M_3_2 = modular p=3 n=2\n"
    assert build(text)["M_3_2"].order == 27
    assert definition_line(ExampleGroup()) == "group G = example primes=[3,5,7] exps=[2,3,4] N=3"

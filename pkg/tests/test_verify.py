import json

import pytest

from engelkit import CyclicGroup, ModularGroup, SemidirectProduct, dihedral_group, symmetric_group
from engelkit.verify import (
    check_axioms,
    check_baer,
    check_example,
    check_fitting,
    check_heineken,
    check_modular,
    check_rho_chain,
    catalog,
    run_checks,
)

CATALOG_NAMES = ["C1", "C6", "C8", "S3", "S4", "A4", "D8", "D12", "M32", "M53",
                 "C2xC3", "S3xC2", "F1", "F20"]


def test_catalog_is_deterministic():
    assert [G.name for G in catalog()] == CATALOG_NAMES
    assert [G.order for G in catalog()] == [1, 6, 8, 6, 24, 12, 8, 12, 27, 3125, 6, 12, 81, 20]


@pytest.mark.parametrize("G", [CyclicGroup(1), symmetric_group(3), ModularGroup(3, 2)],
                         ids=lambda G: G.name)
def test_baer_passes(G):
    rep = check_baer(G)
    assert rep.passed, rep.witness


def test_s3_baer_details():
    rep = check_baer(symmetric_group(3))
    assert rep.details["left_order"] == rep.details["fitting_order"] == 3
    assert rep.details["right_order"] == rep.details["hypercentre_order"] == 1


def test_inclusions_on_examples():
    for G in (CyclicGroup(6), symmetric_group(4), dihedral_group(8)):
        assert check_heineken(G).passed and check_rho_chain(G).passed
    rep = check_rho_chain(symmetric_group(4))
    assert rep.details["right_order"] == 1
    rep = check_rho_chain(dihedral_group(8))
    assert rep.details["rho_order"] == rep.details["right_order"] == 8


def test_fitting_check():
    rep = check_fitting(symmetric_group(4))
    assert rep.passed and rep.details["maximality_checked"]


def test_report_serialisation_is_idempotent():
    a = [r.as_dict() for r in run_checks("all", catalog()[:9])]
    b = [r.as_dict() for r in run_checks("all", catalog()[:9])]
    assert json.dumps(a) == json.dumps(b)
    assert all("witness" not in d for d in a)
    assert "elapsed" in run_checks("baer", catalog()[:1])[0].as_dict(timing=True)


def test_run_checks_rejects_unknown():
    with pytest.raises(ValueError):
        run_checks("nonsense", [])


def test_example_reports():
    rep = check_example([(3, 2)])
    assert rep.passed
    assert rep.details["class_P1"] == 2
    bad = check_example([(5, 2), (3, 3)])
    assert not bad.passed and "increasing" in bad.witness
    assert bad.as_dict()["witness"] == bad.witness


# ---------------------------------------------------------------------------
# mutation fixtures: every corrupted engine must be caught by some check


class WrongCollection(ModularGroup):
    """Collection exponent off by one: (1+p)^(j2+1) instead of (1+p)^j2."""

    def _mul(self, x, y):
        j1, k1 = x
        j2, k2 = y
        q = self.mod_a
        return ((j1 + j2) % self.mod_b, (k1 * pow(1 + self.p, j2 + 1, q) + k2) % q)


class WrongTwist(ModularGroup):
    """Relation a^b = a^(1+2p) smuggled into the multiplication."""

    def _mul(self, x, y):
        j1, k1 = x
        j2, k2 = y
        q = self.mod_a
        return ((j1 + j2) % self.mod_b, (k1 * pow(1 + 2 * self.p, j2, q) + k2) % q)


class WrongInverse(ModularGroup):
    def _inv(self, x):
        j, k = x
        return (-j % self.mod_b, -k % self.mod_a)


class OffByOneCyclic(CyclicGroup):
    def _mul(self, x, y):
        return (x + y + (1 if x and y else 0)) % self.m


def _caught(G, extra=()):
    reports = [check_axioms(G), *[c(G) for c in extra]]
    if isinstance(G, ModularGroup):
        reports.append(check_modular(G))
    return [r.name for r in reports if not r.passed]


@pytest.mark.parametrize("cls", [WrongCollection, WrongTwist, WrongInverse])
def test_modular_mutations_are_caught(cls):
    assert _caught(cls(3, 2))


def test_cyclic_mutation_is_caught():
    G = OffByOneCyclic(6)
    failed = []
    for check in (check_axioms, check_baer):
        try:
            rep = check(G)
            if not rep.passed:
                failed.append(rep.name)
        except Exception as exc:  # a broken engine may not even enumerate consistently
            failed.append(type(exc).__name__)
    assert failed


class FrozenAction(SemidirectProduct):
    """Applies the action once whatever the exponent."""

    def _act(self, u, r):
        r %= self.actor.m
        return u if r == 0 else self._act_unreduced(u, 1)


def test_semidirect_mutation_is_caught():
    P = ModularGroup(3, 2)
    a, b = P.generators
    G = FrozenAction(CyclicGroup(3), P, {b: b * a ** 3})
    assert _caught(G)


def test_honest_engines_pass_the_same_checks():
    P = ModularGroup(3, 2)
    a, b = P.generators
    for G in (P, SemidirectProduct(CyclicGroup(3), P, {b: b * a ** 3}), CyclicGroup(6)):
        assert not _caught(G)

"""Theorem harness: runnable checks over a built-in catalog of groups.

Every check compares objects computed by independent routes (Engel sets
from commutator iteration, radicals from closure tests) and never uses one
theorem to produce another's input.  A failing check carries a concrete
witness.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

from .core import DEFAULT_ANALYSIS_CAP, Element, Group, GroupError
from .engel import EngelClassification, classify, iterated_commutator
from .engines import (
    CyclicGroup,
    ModularGroup,
    alternating_group,
    dihedral_group,
    direct_product,
    semidirect_product,
    symmetric_group,
)
from .example import (
    ExampleGroup,
    ExampleParams,
    TruncationTooSmall,
    bounded_right_engel_excludes_x,
    central_height,
    engel_formula_check,
    modular_commutator_check,
    quotient_matches_engine,
    verify_alpha_automorphism,
    verify_fc2_structure,
)
from .series import (
    CentralSeries,
    baer_radical,
    element_heights,
    fitting_maximality_witness,
    fitting_subgroup,
    nilpotency_class,
    rho_defects,
    upper_central_series,
)
from .subgroups import Subgroup

FITTING_MAXIMALITY_LIMIT = 200


@dataclass
class CheckReport:
    name: str
    group: str
    passed: bool
    details: dict = field(default_factory=dict)
    witness: str | None = None
    elapsed: float = 0.0

    def as_dict(self, timing: bool = False) -> dict:
        out = {"name": self.name, "group": self.group, "passed": self.passed, "details": self.details}
        if not self.passed:
            out["witness"] = self.witness
        if timing:
            out["elapsed"] = round(self.elapsed, 4)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed else f"  witness: {self.witness}"
        return f"{status}  {self.name:<10} {self.group}{extra}"


def catalog(**caps) -> list[Group]:
    """Deterministic list of finite groups exercised by the harness."""
    c2, c3, c4, c5 = (CyclicGroup(m, f"C{m}", **caps) for m in (2, 3, 4, 5))
    s3 = symmetric_group(3, "S3", **caps)
    m32 = ModularGroup(3, 2, "M32", **caps)
    a, b = m32.generators
    return [
        CyclicGroup(1, "C1", **caps),
        CyclicGroup(6, "C6", **caps),
        CyclicGroup(8, "C8", **caps),
        s3,
        symmetric_group(4, "S4", **caps),
        alternating_group(4, "A4", **caps),
        dihedral_group(8, "D8", **caps),
        dihedral_group(12, "D12", **caps),
        m32,
        ModularGroup(5, 3, "M53", **caps),
        direct_product(c2, c3, "C2xC3", **caps),
        direct_product(s3, c2, "S3xC2", **caps),
        semidirect_product(c3, m32, {b: b * a ** 3}, "F1", **caps),
        semidirect_product(c4, c5, {c5.generators[0]: c5.generators[0] ** 2}, "F20", **caps),
    ]


class Analysis:
    """Lazily computed objects for one finite group, shared between checks."""

    def __init__(self, group: Group):
        self.group = group

    @cached_property
    def engel(self) -> EngelClassification:
        return classify(self.group)

    @cached_property
    def central(self) -> CentralSeries:
        return upper_central_series(self.group)

    @cached_property
    def heights(self) -> dict[Element, int | None]:
        return element_heights(self.group)

    @cached_property
    def fitting(self) -> Subgroup:
        return fitting_subgroup(self.group)

    @cached_property
    def baer(self) -> Subgroup:
        return baer_radical(self.group)

    @cached_property
    def rho(self) -> dict[Element, int]:
        return rho_defects(self.group)


def _set(sub: Subgroup | Iterable[Element]) -> frozenset[Element]:
    return sub.elements if isinstance(sub, Subgroup) else frozenset(sub)


def _compare(named: dict[str, frozenset[Element]]) -> str | None:
    """Witness for the first pair of unequal sets, else ``None``."""
    items = list(named.items())
    ref_name, ref = items[0]
    for name, s in items[1:]:
        if s != ref:
            g = min(s ^ ref)
            where = name if g in s else ref_name
            return f"{g} lies only in {where} ({ref_name}: {len(ref)}, {name}: {len(s)})"
    return None


def _subset(small_name: str, small, big_name: str, big) -> str | None:
    extra = small - big
    if extra:
        return f"{min(extra)} in {small_name} but not in {big_name}"
    return None


def _timed(name: str, group: str, body: Callable[[], tuple[bool, dict, str | None]]) -> CheckReport:
    t0 = time.perf_counter()
    passed, details, witness = body()
    return CheckReport(name, group, passed, details, witness, time.perf_counter() - t0)


def check_axioms(G: Group, samples: int = 300) -> CheckReport:
    """Enumeration closure, identity and inverse laws, associativity on sampled triples."""

    def body():
        elems = G.elements()
        details = {"order": G.order, "enumerated": len(elems)}
        if len(elems) != G.order or len(set(elems)) != len(elems):
            return False, details, f"enumerated {len(elems)} elements, order {G.order}"
        e = G.identity
        for g in elems:
            if g * e != g or e * g != g:
                return False, details, f"identity law fails at {g}"
            if not (g * ~g).is_identity() or not (~g * g).is_identity():
                return False, details, f"inverse law fails at {g}"
        rng = random.Random(0)
        for _ in range(samples):
            u, v, w = (rng.choice(elems) for _ in range(3))
            if (u * v) * w != u * (v * w):
                return False, details, f"associativity fails at ({u}, {v}, {w})"
        # closure under generators
        members = set(elems)
        for g in elems:
            for s in G.generators:
                if g * s not in members:
                    return False, details, f"{g} * {s} escapes the enumeration"
        return True, details, None

    return _timed("axioms", G.name, body)


def check_baer(G: Group, analysis: Analysis | None = None) -> CheckReport:
    """L = bounded L = Fitting and R = bounded R = hypercentre = Z_k.

    The hypercentre is read off per-element heights (generator recursion);
    ``Z_k`` is the stabilised term of the layered upper central series.
    """
    an = analysis or Analysis(G)

    def body():
        cl = an.engel
        k = an.central.hypercentral_length
        hyper = frozenset(g for g, h in an.heights.items() if h is not None)
        sets_l = {"L": cl.left, "Lbar": frozenset(cl.bounded_left), "F": _set(an.fitting)}
        sets_r = {
            "R": cl.right,
            "Rbar": frozenset(cl.bounded_right),
            "hypercentre": hyper,
            f"Z_{k}": _set(an.central.terms[k]),
        }
        max_height = max((h for h in an.heights.values() if h is not None), default=0)
        details = {
            "left_order": len(cl.left),
            "fitting_order": an.fitting.order,
            "right_order": len(cl.right),
            "hypercentre_order": len(hyper),
            "hypercentral_length": k,
        }
        witness = _compare(sets_l) or _compare(sets_r)
        if witness is None and max_height != k:
            witness = f"largest element height {max_height} differs from stabilisation index {k}"
        return witness is None, details, witness

    return _timed("baer", G.name, body)


def check_heineken(G: Group, analysis: Analysis | None = None) -> CheckReport:
    """R^-1 in L, bounded R^-1 in bounded L, and right n-Engel inverts to left (n+1)-Engel."""
    an = analysis or Analysis(G)

    def body():
        cl = an.engel
        r_inv = frozenset(~a for a in cl.right)
        rb_inv = frozenset(~a for a in cl.bounded_right)
        witness = _subset("R^-1", r_inv, "L", cl.left) or _subset(
            "Rbar^-1", rb_inv, "Lbar", frozenset(cl.bounded_left)
        )
        worst_shift = 0
        if witness is None:
            for a, n in sorted(cl.bounded_right.items()):
                m = cl.bounded_left[~a]
                worst_shift = max(worst_shift, m - n)
                if m > n + 1:
                    witness = f"{a} is right {n}-Engel but its inverse is only left {m}-Engel"
                    break
        details = {"right_order": len(cl.right), "left_order": len(cl.left), "max_degree_shift": worst_shift}
        return witness is None, details, witness

    return _timed("heineken", G.name, body)


def check_rho_chain(G: Group, analysis: Analysis | None = None) -> CheckReport:
    """hypercentre <= rho <= R and Z_k <= rho_bar <= bounded R, all equal on finite groups."""
    an = analysis or Analysis(G)

    def body():
        cl = an.engel
        rho = frozenset(an.rho)
        hyper = _set(an.central.hypercentre)
        zk = _set(an.central.terms[-1])
        witness = (
            _subset("hypercentre", hyper, "rho", rho)
            or _subset("rho", rho, "R", cl.right)
            or _subset("Z_k", zk, "rho_bar", rho)
            or _subset("rho_bar", rho, "Rbar", frozenset(cl.bounded_right))
            or _compare({"hypercentre": hyper, "rho": rho, "R": cl.right})
        )
        details = {
            "hypercentre_order": len(hyper),
            "rho_order": len(rho),
            "rho_bar_defect_bound": max(an.rho.values()),
            "right_order": len(cl.right),
        }
        return witness is None, details, witness

    return _timed("rho", G.name, body)


def check_fitting(G: Group, analysis: Analysis | None = None) -> CheckReport:
    """Fitting subgroup normal, nilpotent, maximal (small groups) and equal to the Baer radical."""
    an = analysis or Analysis(G)

    def body():
        F = an.fitting
        details = {"fitting_order": F.order, "baer_order": an.baer.order}
        if not F.is_normal():
            return False, details, f"{F.generators} do not generate a normal subgroup"
        if not F.is_nilpotent():
            return False, details, "Fitting subgroup is not nilpotent"
        details["maximality_checked"] = G.order <= FITTING_MAXIMALITY_LIMIT
        if details["maximality_checked"]:
            x = fitting_maximality_witness(G, F)
            if x is not None:
                return False, details, f"<F, {x}^G> is nilpotent"
        witness = _compare({"F": _set(F), "B": _set(an.baer)})
        return witness is None, details, witness

    return _timed("fitting", G.name, body)


def check_modular(P: ModularGroup) -> CheckReport:
    """[a,_m b] = a^(p^m) for 1 <= m <= n, first vanishing at n, class exactly n."""

    def body():
        details = {"p": P.p, "n": P.n}
        for m, (got, want) in modular_commutator_check(P).items():
            if got != want:
                return False, details, f"[a,_{m} b] = {got}, expected {want}"
        a, b = P.generators
        if iterated_commutator(a, b, P.n - 1).is_identity():
            return False, details, f"[a,_{P.n - 1} b] already vanishes"
        if not iterated_commutator(a, b, P.n).is_identity():
            return False, details, f"[a,_{P.n} b] does not vanish"
        cls = nilpotency_class(P)
        details["class"] = cls
        if cls != P.n:
            return False, details, f"nilpotency class {cls}, expected {P.n}"
        return True, details, None

    return _timed("modular", P.name, body)


def check_example(params=None, *, r_range: range = range(-2, 3),
                  fc2_budget: int = 400) -> CheckReport:
    """All structural claims about the metabelian example, per truncation.

    ``params`` may be an :class:`ExampleParams` or a raw list of ``(p, n)``
    pairs; invalid raw parameters produce a failed report.
    """

    def body():
        try:
            G = ExampleGroup(params if isinstance(params, (ExampleParams, type(None)))
                             else ExampleParams(tuple(params)))
        except GroupError as exc:
            return False, {}, f"invalid parameters: {exc}"
        comps = G.params.components
        details: dict = {"params": G.params.describe()}
        # alpha and the modular identities, per component
        for i, (p, n) in enumerate(comps, start=1):
            if p ** (2 * n - 1) <= DEFAULT_ANALYSIS_CAP:
                rep = verify_alpha_automorphism(p, n)
                details[f"alpha_{i}_pairs"] = rep.pairs_checked
                if not rep.passed:
                    return False, details, f"alpha_{i} fails on {rep.witness}"
            P = G.factors[i - 1]
            a, b = P.generators
            for m in range(1, n + 1):
                if iterated_commutator(a, b, m) != a ** (p ** m):
                    return False, details, f"[a{i},_{m} b{i}] != a{i}^{p ** m}"
            if iterated_commutator(a, b, n - 1).is_identity():
                return False, details, f"[a{i},_{n - 1} b{i}] vanishes early"
            if P.order <= DEFAULT_ANALYSIS_CAP:
                details[f"class_P{i}"] = nilpotency_class(P)
                if details[f"class_P{i}"] != n:
                    return False, details, f"class of P{i} is {details[f'class_P{i}']}, expected {n}"
        # commutator formulas, with the vanishing criterion
        for i, (p, n) in enumerate(comps, start=1):
            for base in r_range:
                for e in range(n + 1):
                    r = base * p ** e
                    for m in range(1, n + 1):
                        chk = engel_formula_check(G, i, r, m)
                        if not chk.passed:
                            return False, details, (
                                f"[x^{r},_{m} b{i}] = {chk.computed}, expected {chk.expected}"
                            )
                        vanishes = r % p ** (n - m) == 0
                        if chk.computed.is_identity() != vanishes:
                            return False, details, f"vanishing criterion fails at i={i}, r={r}, m={m}"
        # central heights in the finite quotients
        heights = {}
        for i, (p, n) in enumerate(comps, start=1):
            heights[f"a{i}"] = central_height(G.params, i, "a")
            heights[f"b{i}"] = central_height(G.params, i, "b")
            if heights[f"a{i}"] != n:
                return False, details, f"height of a{i} is {heights[f'a{i}']}, expected {n}"
        details["heights"] = heights
        # x is not a bounded right Engel element: witness for every m below max n_i
        chain = {}
        for m in range(1, max(n for _, n in comps)):
            try:
                w = bounded_right_engel_excludes_x(G, m)
            except TruncationTooSmall as exc:
                return False, details, str(exc)
            chain[m] = {"component": w.component, "commutator": str(w.commutator)}
        details["witness_chain"] = chain
        # smallest quotient against the symbolic engine
        ok, bad = quotient_matches_engine(G.params, 1)
        if not ok:
            return False, details, f"F1 disagrees with the engine at {bad}"
        fc2 = verify_fc2_structure(G, budget=fc2_budget)
        details["fc2_pairs"] = fc2.pairs_checked
        details["conjugacy_class_sizes"] = fc2.conjugacy_classes
        if not fc2.passed:
            return False, details, fc2.witness
        return True, details, None

    if params is None:
        label = ExampleParams().describe()
    elif isinstance(params, ExampleParams):
        label = params.describe()
    else:
        label = f"example components={list(params)}"
    return _timed("example", label, body)


CHECKS = {
    "baer": check_baer,
    "heineken": check_heineken,
    "rho": check_rho_chain,
}


def run_checks(which: str, groups: Iterable[Group]) -> list[CheckReport]:
    """Run ``which`` (baer | heineken | rho | all) on each group; order is deterministic."""
    if which not in (*CHECKS, "all"):
        raise ValueError(f"unknown check {which!r}")
    reports = []
    for G in groups:
        an = Analysis(G)
        if which == "all":
            reports.append(check_axioms(G))
            if isinstance(G, ModularGroup):
                reports.append(check_modular(G))
            for fn in CHECKS.values():
                reports.append(fn(G, an))
            reports.append(check_fitting(G, an))
        else:
            reports.append(CHECKS[which](G, an))
    return reports

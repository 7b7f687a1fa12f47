"""Line-oriented group definition language.

One statement per line, ``#`` starts a comment::

    group S3 = perm 3 gens (1 2), (1 2 3)
    group Z6 = cyclic 6
    group D8 = dihedral 8
    group P  = modular p=3 n=2
    group Q  = direct S3 Z6
    group F  = semidirect Z3 P action b -> b a^3
    group G  = example primes=[3,5,7] exps=[2,3,4] N=3

Names must be unique and may only refer to groups defined earlier (or to
names supplied by the caller).  Every error carries a 1-based line and
column.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import Group, GroupError
from .engines import (
    CyclicGroup,
    DirectProduct,
    ModularGroup,
    PermutationGroup,
    SemidirectProduct,
    dihedral_group,
    format_cycles,
)
from .example import ExampleGroup, ExampleParams

KINDS = ("perm", "cyclic", "dihedral", "modular", "direct", "semidirect", "example")

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<arrow>->)|(?P<int>-?\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)|(?P<punct>[()\[\],=^*])"
)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class DefinitionError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message, self.line, self.column = message, line, column


@dataclass
class GroupDefinition:
    name: str
    kind: str
    args: dict
    line: int = 0
    # column of each argument, for diagnostics raised while building
    columns: dict = field(default_factory=dict, repr=False, compare=False)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, lineno: int) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DefinitionError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        if m.lastgroup != "ws":
            out.append(_Tok(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return out


class _LineParser:
    def __init__(self, toks: list[_Tok], lineno: int, end_col: int):
        self.toks, self.i, self.line, self.end_col = toks, 0, lineno, end_col

    def error(self, msg: str, tok: _Tok | None = None):
        col = tok.col if tok else (self.peek().col if self.peek() else self.end_col)
        raise DefinitionError(msg, self.line, col)

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind: str, text: str | None = None, what: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            want = what or (repr(text) if text else kind)
            got = "end of line" if tok is None else repr(tok.text)
            self.error(f"expected {want}, got {got}")
        self.i += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> _Tok | None:
        tok = self.peek()
        if tok is not None and tok.kind == kind and (text is None or tok.text == text):
            self.i += 1
            return tok
        return None

    def integer(self, what: str) -> tuple[int, int]:
        tok = self.take("int", what=what)
        return int(tok.text), tok.col

    def keyword_int(self, key: str) -> tuple[int, int]:
        self.take("name", key, what=f"'{key}='")
        self.take("punct", "=")
        return self.integer(f"integer after {key}=")

    def int_list(self, key: str) -> tuple[list[int], int]:
        tok = self.take("name", key, what=f"'{key}='")
        self.take("punct", "=")
        self.take("punct", "[")
        vals = []
        if not self.accept("punct", "]"):
            while True:
                vals.append(self.integer(f"integer in {key} list")[0])
                if self.accept("punct", "]"):
                    break
                self.take("punct", ",", what="',' or ']'")
        return vals, tok.col

    def done(self):
        tok = self.peek()
        if tok is not None:
            self.error(f"unexpected {tok.text!r} after definition", tok)


def _parse_perm(p: _LineParser, args: dict, cols: dict):
    degree, cols["degree"] = p.integer("degree")
    if degree < 1:
        p.error("degree must be positive", p.toks[p.i - 1])
    p.take("name", "gens", what="'gens'")
    gens = []
    while True:
        cycles = []
        start = p.peek()
        while p.peek() is not None and p.peek().text == "(":
            p.i += 1
            cycle = []
            while not p.accept("punct", ")"):
                tok = p.take("int", what="point or ')'")
                pt = int(tok.text)
                if not 1 <= pt <= degree:
                    p.error(f"point {pt} exceeds degree {degree}" if pt > degree
                            else f"point {pt} outside 1..{degree}", tok)
                cycle.append((pt, tok))
            cycles.append(cycle)
        if not cycles:
            p.error("expected a cycle such as (1 2 3)")
        seen: set[int] = set()
        for cycle in cycles:
            for pt, tok in cycle:
                if pt in seen:
                    p.error(f"point {pt} repeated; cycles must be disjoint", tok)
                seen.add(pt)
        gens.append(tuple(tuple(pt for pt, _ in c) for c in cycles if len(c) > 1))
        cols.setdefault("gens", []).append(start.col)
        if not p.accept("punct", ","):
            break
    args.update(degree=degree, gens=tuple(gens))


def _parse_word(p: _LineParser) -> tuple[tuple[str, int], ...]:
    word = []
    first = True
    while True:
        tok = p.peek()
        if tok is None or tok.text == ",":
            break
        if not first:
            p.accept("punct", "*")
            tok = p.peek()
        if tok is not None and tok.kind == "int" and tok.text == "1":
            p.i += 1
        else:
            name = p.take("name", what="generator name")
            exp = 1
            if p.accept("punct", "^"):
                exp = p.integer("exponent")[0]
            word.append((name.text, exp))
        first = False
    if first:
        p.error("expected an image word")
    return tuple(word)


def _parse_line(toks: list[_Tok], lineno: int, end_col: int, known: set[str]) -> GroupDefinition:
    p = _LineParser(toks, lineno, end_col)
    p.take("name", "group", what="'group'")
    name_tok = p.take("name", what="group name")
    if not _IDENT.match(name_tok.text):
        p.error(f"invalid group name {name_tok.text!r}", name_tok)
    p.take("punct", "=")
    kind_tok = p.take("name", what="constructor")
    kind = kind_tok.text
    args: dict = {}
    cols: dict = {"kind": kind_tok.col, "name": name_tok.col}

    def reference(role: str) -> str:
        tok = p.take("name", what=f"{role} group name")
        if tok.text not in known:
            p.error(f"unresolved reference {tok.text!r}", tok)
        cols[role] = tok.col
        return tok.text

    if kind == "perm":
        _parse_perm(p, args, cols)
    elif kind == "cyclic":
        args["m"], cols["m"] = p.integer("order")
    elif kind == "dihedral":
        args["order"], cols["order"] = p.integer("order")
    elif kind == "modular":
        args["p"], cols["p"] = p.keyword_int("p")
        args["n"], cols["n"] = p.keyword_int("n")
    elif kind == "direct":
        args["left"] = reference("left")
        args["right"] = reference("right")
    elif kind == "semidirect":
        args["actor"] = reference("actor")
        args["base"] = reference("base")
        action = []
        cols["action"] = []
        if p.accept("name", "action"):
            while True:
                gen = p.take("name", what="generator name")
                p.take("arrow", what="'->'")
                action.append((gen.text, _parse_word(p)))
                cols["action"].append(gen.col)
                if not p.accept("punct", ","):
                    break
        args["action"] = tuple(action)
    elif kind == "example":
        args["primes"], cols["primes"] = p.int_list("primes")
        args["exps"], cols["exps"] = p.int_list("exps")
        if p.peek() is not None:
            args["N"], cols["N"] = p.keyword_int("N")
        else:
            args["N"], cols["N"] = None, cols["primes"]
    else:
        p.error(f"unknown constructor {kind!r}; expected one of {', '.join(KINDS)}", kind_tok)
    p.done()
    return GroupDefinition(name_tok.text, kind, args, lineno, cols)


def parse_definitions(text: str, predefined: Iterable[str] = ()) -> list[GroupDefinition]:
    """Parse definition text.

    ``predefined`` names (for instance the built-in catalog) may be referenced;
    a definition in the text with the same name shadows them.
    """
    known = set(predefined)
    defined: dict[str, int] = {}
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        d = _parse_line(toks, lineno, len(line.rstrip()) + 1, known)
        if d.name in defined:
            raise DefinitionError(
                f"duplicate name {d.name!r} (first defined on line {defined[d.name]})",
                lineno, d.columns["name"],
            )
        defined[d.name] = lineno
        known.add(d.name)
        out.append(d)
    return out


def _eval_word(base: Group, word, d: GroupDefinition, col: int):
    out = base.identity
    for name, exp in word:
        try:
            out = out * base.generator(name) ** exp
        except KeyError:
            raise DefinitionError(
                f"{base.name} has no generator {name!r}; generators are "
                f"{', '.join(base.generator_names)}", d.line, col) from None
    return out


def build_group(d: GroupDefinition, groups: Mapping[str, Group], **caps) -> Group:
    """Construct one group; semantic errors become :class:`DefinitionError`."""
    a, name = d.args, d.name
    try:
        if d.kind == "perm":
            return PermutationGroup.from_cycles(a["degree"], a["gens"], name, **caps)
        if d.kind == "cyclic":
            return CyclicGroup(a["m"], name, **caps)
        if d.kind == "dihedral":
            return dihedral_group(a["order"], name, **caps)
        if d.kind == "modular":
            return ModularGroup(a["p"], a["n"], name, **caps)
        if d.kind == "direct":
            return DirectProduct(groups[a["left"]], groups[a["right"]], name, **caps)
        if d.kind == "semidirect":
            base = groups[a["base"]]
            action = {}
            for (gen, word), col in zip(a["action"], d.columns["action"]):
                key = _eval_word(base, [(gen, 1)], d, col)
                action[key] = _eval_word(base, word, d, col)
            return SemidirectProduct(groups[a["actor"]], base, action, name, **caps)
        if d.kind == "example":
            params = ExampleParams.from_lists(a["primes"], a["exps"], a["N"])
            return ExampleGroup(params, name, **caps)
    except DefinitionError:
        raise
    except (GroupError, ValueError) as exc:
        raise DefinitionError(str(exc), d.line, d.columns["kind"]) from None
    raise DefinitionError(f"unknown constructor {d.kind!r}", d.line, d.columns["kind"])


def build_groups(defs: Iterable[GroupDefinition], predefined: Mapping[str, Group] | None = None,
                 **caps) -> dict[str, Group]:
    """Build every definition in order; the result also holds ``predefined``."""
    groups = dict(predefined or {})
    for d in defs:
        groups[d.name] = build_group(d, groups, **caps)
    return groups


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _word_text(G: Group, payload) -> str:
    merged: list[list[int]] = []
    for i, e in G.word(payload):
        if merged and merged[-1][0] == i:
            merged[-1][1] += e
        else:
            merged.append([i, e])
    parts = [G.generator_names[i] + ("" if e == 1 else f"^{e}") for i, e in merged if e]
    return " ".join(parts) or "1"


def definition_line(G: Group, names: Mapping[int, str] | None = None) -> str:
    """Statement defining ``G``; ``names`` maps ``id(component)`` to its name."""
    names = names or {}

    def ref(H: Group) -> str:
        return names.get(id(H), H.name)

    own = names.get(id(G), G.name)
    head = f"group {own} = "
    if isinstance(G, ExampleGroup):
        ps = ",".join(str(p) for p, _ in G.params.components)
        ns = ",".join(str(n) for _, n in G.params.components)
        return head + f"example primes=[{ps}] exps=[{ns}] N={G.params.truncation}"
    if isinstance(G, CyclicGroup):
        return head + f"cyclic {G.m}"
    if isinstance(G, ModularGroup):
        return head + f"modular p={G.p} n={G.n}"
    if isinstance(G, PermutationGroup):
        gens = ", ".join(format_cycles(g) for g in G.generator_payloads)
        return head + f"perm {G.degree} gens {gens}"
    if isinstance(G, DirectProduct):
        return head + f"direct {ref(G.left)} {ref(G.right)}"
    if isinstance(G, SemidirectProduct):
        base = G.base
        maps = [
            f"{base.generator_names[i]} -> {_word_text(base, G.images[g])}"
            for i, g in enumerate(base.generator_payloads) if G.images[g] != g
        ]
        text = head + f"semidirect {ref(G.actor)} {ref(base)}"
        return text + (" action " + ", ".join(maps) if maps else "")
    raise GroupError(f"no textual form for {type(G).__name__}")


def _components(G: Group) -> list[Group]:
    if isinstance(G, DirectProduct):
        return [G.left, G.right]
    if isinstance(G, SemidirectProduct):
        return [G.actor, G.base]
    return []


def definitions_text(groups: Iterable[Group]) -> str:
    """Definition file for ``groups``, emitting components before their products.

    Names that are not identifiers, or that clash, are replaced by fresh ones.
    """
    names: dict[int, str] = {}
    taken: set[str] = set()
    lines: list[str] = []

    def fresh(G: Group) -> str:
        base = G.name if _IDENT.match(G.name) else re.sub(r"\W", "_", G.name).strip("_") or G.kind
        if not _IDENT.match(base):
            base = f"{G.kind}_{base}"
        name, k = base, 1
        while name in taken:
            k += 1
            name = f"{base}_{k}"
        return name

    def emit(G: Group):
        if id(G) in names:
            return
        for H in _components(G):
            emit(H)
        names[id(G)] = fresh(G)
        taken.add(names[id(G)])
        lines.append(definition_line(G, names))

    for G in groups:
        emit(G)
    return "\n".join(lines) + "\n"

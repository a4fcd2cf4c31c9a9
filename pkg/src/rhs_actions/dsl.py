"""Group-spec language: parsing, normalization and elaboration.

    spec    := term { "x" term }
    term    := "C(" int ")" | "D(" int ")" | "Q(" int [ "," int "," int ] ")"
             | "O(48," int "," int ")" | "SL(2," int ")" | "BT" | "BO" | "BI"
             | "quot(" spec "," central ")" | "perm[" cycles { ";" cycles } "]"
    central := "Z" | "Z(" int ")"

D(n) and Q(n) take the group ORDER.  Points in perm cycles are 0-based.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import catalog
from .errors import BudgetError, ElaborationError, InputError, RHSError, SpecSyntaxError
from .groups import (FiniteGroup, Permutation, center, central_cyclic_subgroups, direct_product,
                     group_from_permutations, quotient)

KEYWORDS = ("quot", "perm", "SL", "BT", "BO", "BI", "C", "D", "Q", "O", "Z", "x")
PUNCT = "()[],;"
PERM_DEGREE_BOUND = 4_096
_INT = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Node:
    kind: str
    params: tuple = ()
    children: tuple = ()


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", "punct", "end"
    text: str
    offset: int


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        off = _byte_offset(text, pos)
        if ch in PUNCT:
            tokens.append(Token("punct", ch, off))
            pos += 1
            continue
        m = _INT.match(text, pos)
        if m:
            tokens.append(Token("int", m.group(), off))
            pos = m.end()
            continue
        for kw in KEYWORDS:
            if text.startswith(kw, pos):
                tokens.append(Token("name", kw, off))
                pos += len(kw)
                break
        else:
            raise SpecSyntaxError(f"unexpected character {ch!r}", off)
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, what: str):
        t = self.tok
        found = repr(t.text) if t.kind != "end" else "end of input"
        raise SpecSyntaxError(f"expected {what}, found {found}", t.offset)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("punct", "name") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.fail(repr(text))

    def integer(self, literal: int | None = None) -> int:
        t = self.tok
        if t.kind != "int" or (literal is not None and int(t.text) != literal):
            self.fail(str(literal) if literal is not None else "an integer")
        self.i += 1
        return int(t.text)

    def spec(self) -> Node:
        terms = [self.term()]
        while self.accept("x"):
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Node("product", (), tuple(terms))

    def term(self) -> Node:
        t = self.tok
        if t.kind != "name":
            self.fail("a group term")
        self.i += 1
        name = t.text
        if name in ("BT", "BO", "BI"):
            return Node(name)
        if name in ("C", "D"):
            self.expect("(")
            n = self.integer()
            self.expect(")")
            return Node("cyclic" if name == "C" else "dihedral", (n,))
        if name == "Q":
            self.expect("(")
            params = [self.integer()]
            if self.accept(","):
                params.append(self.integer())
                self.expect(",")
                params.append(self.integer())
            self.expect(")")
            return Node("quaternion", tuple(params))
        if name == "O":
            self.expect("(")
            self.integer(48)
            self.expect(",")
            k = self.integer()
            self.expect(",")
            l = self.integer()
            self.expect(")")
            return Node("O48", (k, l))
        if name == "SL":
            self.expect("(")
            self.integer(2)
            self.expect(",")
            p = self.integer()
            self.expect(")")
            return Node("SL2", (p,))
        if name == "quot":
            self.expect("(")
            inner = self.spec()
            self.expect(",")
            self.expect("Z")
            order = None
            if self.accept("("):
                order = self.integer()
                self.expect(")")
            self.expect(")")
            return Node("quotient", (order,), (inner,))
        if name == "perm":
            self.expect("[")
            gens = [self.cycles()]
            while self.accept(";"):
                gens.append(self.cycles())
            self.expect("]")
            return Node("perm", tuple(gens))
        self.i -= 1
        self.fail("a group term")

    def cycles(self) -> tuple:
        out = []
        while self.accept("("):
            pts = []
            while self.tok.kind == "int":
                pts.append(self.integer())
                self.accept(",")
            self.expect(")")
            if len(pts) > 1:
                out.append(tuple(pts))
        if not out and self.tok.text not in (";", "]"):
            self.fail("a cycle")
        return tuple(out)


def parse_group_spec(text: str) -> Node:
    p = _Parser(text)
    node = p.spec()
    if p.tok.kind != "end":
        p.fail("end of input or 'x'")
    return node


def normalize(node: Node) -> str:
    k = node.kind
    if k in ("BT", "BO", "BI"):
        return k
    if k == "cyclic":
        return f"C({node.params[0]})"
    if k == "dihedral":
        return f"D({node.params[0]})"
    if k == "quaternion":
        return "Q(" + ",".join(map(str, node.params)) + ")"
    if k == "O48":
        return f"O(48,{node.params[0]},{node.params[1]})"
    if k == "SL2":
        return f"SL(2,{node.params[0]})"
    if k == "product":
        return " x ".join(normalize(c) for c in node.children)
    if k == "quotient":
        order = node.params[0]
        central = "Z" if order is None else f"Z({order})"
        return f"quot({normalize(node.children[0])}, {central})"
    if k == "perm":
        gens = ["".join("(" + " ".join(map(str, c)) + ")" for c in g) or "()" for g in node.params]
        return "perm[" + ";".join(gens) + "]"
    raise ValueError(f"unknown node kind {k}")


def _elaborate_perm(node: Node) -> FiniteGroup:
    points = [p for g in node.params for c in g for p in c]
    degree = max(points, default=0) + 1
    if degree > PERM_DEGREE_BOUND:
        raise ElaborationError(f"permutation degree {degree} above {PERM_DEGREE_BOUND}")
    gens = []
    for g in node.params:
        flat = [p for c in g for p in c]
        if len(flat) != len(set(flat)):
            raise ElaborationError("cycles of one generator must be disjoint")
        gens.append(Permutation.from_cycles(g, degree))
    return group_from_permutations(gens, origin=normalize(node))


def _elaborate(node: Node, path: str) -> FiniteGroup:
    try:
        k = node.kind
        if k in ("BT", "BO", "BI"):
            return catalog.make_standard(k)
        if k == "cyclic":
            return catalog.make_standard("C", *node.params)
        if k == "dihedral":
            return catalog.make_standard("D", *node.params)
        if k == "quaternion":
            if len(node.params) == 1:
                return catalog.make_standard("Q", *node.params)
            m, kk, l = node.params
            if m % 8 or m == 0:
                raise ElaborationError(f"Q({m},{kk},{l}) needs 8 | {m}")
            return catalog.make_Q8nkl(m // 8, kk, l)
        if k == "O48":
            return catalog.make_O48kl(*node.params)
        if k == "SL2":
            return catalog.make_standard("SL2", *node.params)
        if k == "perm":
            return _elaborate_perm(node)
        if k == "product":
            G = _elaborate(node.children[0], f"{path}.0")
            for i, c in enumerate(node.children[1:], 1):
                G = direct_product(G, _elaborate(c, f"{path}.{i}"))
            return G
        if k == "quotient":
            G = _elaborate(node.children[0], f"{path}.0")
            order = node.params[0]
            if order is None:
                Z = center(G)
                if not Z.is_cyclic():
                    raise ElaborationError("center is not cyclic")
                N = Z
            else:
                matches = [S for S in central_cyclic_subgroups(G) if S.order == order]
                if len(matches) != 1:
                    what = "no" if not matches else "more than one"
                    raise ElaborationError(f"{what} central cyclic subgroup of order {order}")
                N = matches[0]
            Q, _ = quotient(G, N, origin=normalize(node))
            return Q
    except ElaborationError as exc:
        if exc.path:
            raise
        raise ElaborationError(str(exc), path) from None
    except BudgetError:
        raise
    except (InputError, RHSError, ValueError) as exc:
        raise ElaborationError(str(exc), path) from None
    raise ElaborationError(f"unknown node kind {node.kind}", path)


def elaborate(node: Node | str) -> FiniteGroup:
    if isinstance(node, str):
        node = parse_group_spec(node)
    return _elaborate(node, "$")


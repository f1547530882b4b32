"""Graph-expression language.

    expr      := NAME "(" args ")"
    circ-args := int ";" [int {"," int}]
    args      := (int | expr) {"," (int | expr)}
    int       := DIGITS | NAME            (NAME is looked up in ``variables``)

Names: circ, path, K, empty, cycle, mobius, join, joinpow, cart.
Whitespace is ignored. Error positions are 1-based character columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from . import graphs

Arg = Union[int, "Node"]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple[Arg, ...]
    generators: tuple[int, ...] = ()  # circ only


# argument slots per constructor: 'i' integer, 'e' sub-expression
_SIGNATURES = {
    "path": ("i",),
    "K": ("i",),
    "empty": ("i",),
    "cycle": ("i",),
    "mobius": ("i",),
    "join": ("e", "e"),
    "cart": ("e", "e"),
    "joinpow": ("e", "i"),
}


class _Parser:
    def __init__(self, text: str, variables: Mapping[str, int]):
        self.text = text
        self.pos = 0
        self.vars = dict(variables)

    def error(self, msg, pos=None):
        return ParseError(msg, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def name(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        word = self.text[start : self.pos]
        if not word or word[0].isdigit():
            self.pos = start
            raise self.error("expected a name")
        return word

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.peek().isdigit():
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return int(self.text[start : self.pos])
        if self.peek().isalpha():
            word = self.name()
            if word not in self.vars:
                raise self.error(f"unknown variable {word!r}", start)
            return int(self.vars[word])
        raise self.error("expected an integer")

    def expr(self) -> Node:
        start = self.pos
        kind = self.name()
        self.expect("(")
        if kind == "circ":
            n = self.integer()
            self.expect(";")
            gens = []
            if self.peek() != ")":
                gens.append(self.integer())
                while self.peek() == ",":
                    self.pos += 1
                    gens.append(self.integer())
            self.expect(")")
            node = Node("circ", (n,), tuple(gens))
        elif kind in _SIGNATURES:
            sig = _SIGNATURES[kind]
            args = []
            for i, slot in enumerate(sig):
                if i:
                    self.expect(",")
                if slot == "e":
                    self.skip()
                    args.append(self.expr())
                else:
                    args.append(self.integer())
            self.expect(")")
            node = Node(kind, tuple(args))
        else:
            raise self.error(f"unknown graph constructor {kind!r}", start)
        _check_arity(node, self, start)
        return node


def _check_arity(node: Node, p: _Parser, pos: int):
    ints = [a for a in node.args if isinstance(a, int)]
    if any(v < 1 for v in ints):
        raise p.error(f"{node.kind}: integer arguments must be >= 1", pos)
    if node.kind == "mobius" and node.args[0] % 2:
        raise p.error("mobius(n) needs an even n", pos)
    if node.kind == "joinpow" and node.args[1] < 2:
        raise p.error("joinpow(E, m) needs m >= 2", pos)


def parse_expr(text: str, variables: Mapping[str, int] | None = None) -> Node:
    p = _Parser(text, variables or {})
    p.skip()
    node = p.expr()
    if p.peek():
        raise p.error(f"unexpected {p.peek()!r} after expression")
    return node


def to_text(node: Node) -> str:
    """Canonical form: no whitespace, generators in the order given."""
    if node.kind == "circ":
        return f"circ({node.args[0]};{','.join(map(str, node.generators))})"
    parts = [to_text(a) if isinstance(a, Node) else str(a) for a in node.args]
    return f"{node.kind}({','.join(parts)})"


def build(node: Node) -> graphs.Graph:
    k, a = node.kind, node.args
    if k == "circ":
        return graphs.make_circulant(a[0], node.generators)
    if k == "path":
        return graphs.make_path(a[0])
    if k == "K":
        return graphs.complete(a[0])
    if k == "empty":
        return graphs.empty(a[0])
    if k == "cycle":
        return graphs.cycle(a[0])
    if k == "mobius":
        return graphs.mobius(a[0])
    if k == "join":
        return graphs.join(build(a[0]), build(a[1]))
    if k == "cart":
        return graphs.cartesian(build(a[0]), build(a[1]))
    if k == "joinpow":
        return graphs.joinpow(build(a[0]), a[1])
    raise ValueError(f"unknown node kind {k!r}")


def parse_graph(text: str, variables: Mapping[str, int] | None = None) -> graphs.Graph:
    return build(parse_expr(text, variables))


def read_matrix(text: str) -> graphs.Explicit:
    """Whitespace-separated 0/1 rows, one per line; blank lines and '#' comments ignored."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    return graphs.explicit(rows)

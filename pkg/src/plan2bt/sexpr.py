"""Tokenizer and reader for the s-expression syntax used by PDDL files."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ParseError


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    column: int

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    items: tuple["SExpr", ...]
    line: int
    column: int

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, index):
        return self.items[index]


SExpr = Union[Atom, SList]


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Split text into ``(token, line, column)`` triples.

    Parentheses are single tokens, ``;`` comments run to end of line and
    everything else is split on whitespace. Atoms are lower-cased.
    """
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append((ch, line, col))
            i += 1
            col += 1
        else:
            start, start_col = i, col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            tokens.append((text[start:i].lower(), line, start_col))
    return tokens


def read_all(text: str) -> list[SExpr]:
    """Parse every top-level expression in ``text``."""
    tokens = tokenize(text)
    stack: list[tuple[list[SExpr], int, int]] = []
    top: list[SExpr] = []
    for tok, line, col in tokens:
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else top).append(node)
        else:
            (stack[-1][0] if stack else top).append(Atom(tok, line, col))
    if stack:
        _, line, col = stack[-1]
        raise ParseError("unclosed '('", line, col)
    return top


def read_one(text: str) -> SExpr:
    exprs = read_all(text)
    if len(exprs) != 1:
        raise ParseError(f"expected exactly one top-level expression, found {len(exprs)}")
    return exprs[0]

"""Shared test helpers: an independent reference lexer, exhaustive tree
enumeration, and pattern subsumption checks."""

from __future__ import annotations

import itertools
import re

from mdlgauge.term import Node, Term, Var, match_term

# A one-regex reference lexer implementing the same cpp-like rules as the
# production scanner, but via a single alternation and finditer.  Kept
# deliberately separate so the two can cross-check each other.
_REFERENCE_RE = re.compile(
    r"""
      //[^\n]*
    | /\*.*?\*/
    | "(?:\\.|[^"\\\n])*"
    | '(?:\\.|[^'\\\n])*'
    | (?:0[xX][0-9a-fA-F]+|0[bB][01]+|(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)[fFlLuU]*
    | [A-Za-z_][A-Za-z0-9_]*
    | <<=|>>=|->\*|\.\.\.|::|->|\+\+|--|\+=|-=|\*=|/=|%=|==|!=|<=|>=|&&|\|\||&=|\|=|\^=|<<|>>|\#\#|\.\*
    | \S
    """,
    re.VERBOSE | re.DOTALL,
)


def reference_lex(text: str) -> list[str]:
    out = []
    for m in _REFERENCE_RE.finditer(text):
        tok = m.group()
        if tok.startswith("//") or tok.startswith("/*"):
            continue
        out.append(tok)
    return out


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All ways to write ``total`` as an ordered sum of ``parts`` positives."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def all_trees(size: int, labels: tuple[str, ...]) -> list[Term]:
    """Every ordered tree with exactly ``size`` nodes over ``labels``."""
    if size == 1:
        return [Node(l) for l in labels]
    out: list[Term] = []
    for label in labels:
        for arity in range(1, size):
            for parts in compositions(size - 1, arity):
                for kids in itertools.product(*[all_trees(p, labels) for p in parts]):
                    out.append(Node(label, kids))
    return out


def all_patterns(size: int, labels: tuple[str, ...], var_names: tuple[str, ...]) -> list[Term]:
    """Like all_trees, but leaves may also be metavariables."""
    if size == 1:
        return [Node(l) for l in labels] + [Var(v) for v in var_names]
    out: list[Term] = []
    for label in labels:
        for arity in range(1, size):
            for parts in compositions(size - 1, arity):
                for kids in itertools.product(
                    *[all_patterns(p, labels, var_names) for p in parts]
                ):
                    out.append(Node(label, kids))
    return out


def skolemize(t: Term) -> Term:
    """Turn each metavariable into a unique constant leaf."""
    if isinstance(t, Var):
        return Node("sk_" + t.name)
    return Node(t.label, tuple(skolemize(c) for c in t.children))


def subsumes(general: Term, specific: Term) -> bool:
    """Whether some substitution carries ``general`` onto ``specific``."""
    return match_term(general, skolemize(specific)) is not None

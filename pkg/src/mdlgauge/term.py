"""Labeled ordered trees with metavariables, and the substitution calculus.

Terms stand for code fragments.  An abstraction is a term with named
parameter slots; applying it is substitution, recovering the arguments that
produced a given instance is matching, and reconciling two terms with
unknowns on both sides is unification (here with union-find term graphs, so
the work stays near-linear).  Anti-unification (``lgg``) goes the other way:
given instances, it finds the least general term covering all of them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union


@dataclass(frozen=True, slots=True)
class Var:
    """Metavariable leaf, rendered with a '?' prefix."""

    name: str


@dataclass(frozen=True, slots=True)
class Node:
    """Labeled node with an ordered (possibly empty) tuple of children."""

    label: str
    children: tuple["Term", ...] = ()


Term = Union[Var, Node]

_VAR_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class TermSyntaxError(ValueError):
    """Ill-formed term text; ``pos`` is the character position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ArityMismatch(ValueError):
    pass


def term_size(t: Term) -> int:
    """Number of nodes, metavariable leaves included."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(c) for c in t.children)


def term_variables(t: Term) -> set[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            out.add(cur.name)
        else:
            stack.extend(cur.children)
    return out


def is_ground(t: Term) -> bool:
    return not term_variables(t)


def iter_subterms(t: Term) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Pre-order traversal yielding (path, subterm) pairs."""
    stack: list[tuple[tuple[int, ...], Term]] = [((), t)]
    while stack:
        path, cur = stack.pop()
        yield path, cur
        if isinstance(cur, Node):
            for i in range(len(cur.children) - 1, -1, -1):
                stack.append((path + (i,), cur.children[i]))


def subterm_at(t: Term, path: Sequence[int]) -> Term:
    for i in path:
        if isinstance(t, Var):
            raise IndexError("path descends below a leaf")
        t = t.children[i]
    return t


def replace_at(t: Term, path: Sequence[int], replacement: Term) -> Term:
    if not path:
        return replacement
    if isinstance(t, Var):
        raise IndexError("path descends below a leaf")
    i = path[0]
    kids = list(t.children)
    kids[i] = replace_at(kids[i], path[1:], replacement)
    return Node(t.label, tuple(kids))


# ---------------------------------------------------------------------------
# Parsing and rendering


def parse_term(text: str) -> Term:
    """Parse parenthesized prefix notation, e.g. "(+ (* ?a ?a) (* ?b ?b))"."""
    term, pos = _parse(text, _skip_ws(text, 0))
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise TermSyntaxError("trailing input after term", pos)
    return term


def render_term(t: Term) -> str:
    if isinstance(t, Var):
        return "?" + t.name
    if not t.children:
        return t.label
    return "(" + " ".join([t.label] + [render_term(c) for c in t.children]) + ")"


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse(text: str, pos: int) -> tuple[Term, int]:
    if pos >= len(text):
        raise TermSyntaxError("unexpected end of input", pos)
    c = text[pos]
    if c == "(":
        pos = _skip_ws(text, pos + 1)
        label, pos = _parse_symbol(text, pos)
        children = []
        pos = _skip_ws(text, pos)
        while pos < len(text) and text[pos] != ")":
            child, pos = _parse(text, pos)
            children.append(child)
            pos = _skip_ws(text, pos)
        if pos >= len(text):
            raise TermSyntaxError("missing ')'", pos)
        return Node(label, tuple(children)), pos + 1
    if c == ")":
        raise TermSyntaxError("unexpected ')'", pos)
    if c == "?":
        m = _VAR_NAME_RE.match(text, pos + 1)
        if not m:
            raise TermSyntaxError("'?' must be followed by a variable name", pos)
        return Var(m.group()), m.end()
    label, pos = _parse_symbol(text, pos)
    return Node(label), pos


def _parse_symbol(text: str, pos: int) -> tuple[str, int]:
    end = pos
    while end < len(text) and not text[end].isspace() and text[end] not in "()?":
        end += 1
    if end == pos:
        raise TermSyntaxError("expected a symbol", pos)
    return text[pos:end], end


# ---------------------------------------------------------------------------
# Substitutions and abstractions


@dataclass(frozen=True)
class Substitution:
    """Finite map from metavariable names to terms.

    Construction rejects bindings whose value mentions the bound variable;
    the results of match_term and unify are idempotent already.
    """

    bindings: Mapping[str, Term]

    def __post_init__(self):
        object.__setattr__(self, "bindings", dict(self.bindings))
        for name, value in self.bindings.items():
            if name in term_variables(value):
                raise ValueError(f"binding ?{name} contains itself")

    def apply(self, t: Term) -> Term:
        if isinstance(t, Var):
            return self.bindings.get(t.name, t)
        if not t.children:
            return t
        return Node(t.label, tuple(self.apply(c) for c in t.children))

    def is_idempotent(self) -> bool:
        return all(self.apply(v) == v for v in self.bindings.values())

    def __len__(self) -> int:
        return len(self.bindings)


def render_substitution(s: Substitution) -> str:
    items = sorted(s.bindings.items())
    body = ", ".join(f"?{name} -> {render_term(value)}" for name, value in items)
    return "{" + body + "}"


@dataclass(frozen=True)
class Abstraction:
    """A named term template: instantiating binds ``params`` in order."""

    name: str
    params: tuple[str, ...]
    body: Term

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise ValueError("duplicate parameter names")
        free = term_variables(self.body) - set(self.params)
        if free:
            raise ValueError(f"body uses undeclared metavariables: {sorted(free)}")


def instantiate(a: Abstraction, args: Sequence[Term]) -> Term:
    """Substitute ``args`` for the abstraction's parameters, positionally."""
    if len(args) != len(a.params):
        raise ArityMismatch(
            f"{a.name} takes {len(a.params)} arguments, got {len(args)}"
        )
    return Substitution(dict(zip(a.params, args))).apply(a.body)


def parse_abstraction(text: str, name: str = "abstraction") -> Abstraction:
    """Parse the two-part abstraction format: a "params: ?a ?b" first line
    followed by the body term."""
    first, _, rest = text.partition("\n")
    header = first.strip()
    if not header.startswith("params:"):
        raise TermSyntaxError("abstraction must start with a 'params:' line", 0)
    params = []
    for word in header[len("params:"):].split():
        if not word.startswith("?") or not _VAR_NAME_RE.fullmatch(word[1:]):
            raise TermSyntaxError(f"bad parameter {word!r}", 0)
        params.append(word[1:])
    return Abstraction(name, tuple(params), parse_term(rest))


def render_abstraction(a: Abstraction) -> str:
    header = "params:" + "".join(f" ?{p}" for p in a.params)
    return header + "\n" + render_term(a.body) + "\n"


# ---------------------------------------------------------------------------
# Matching (abstraction inversion against a known instance)


def match_term(pattern: Term, target: Term) -> Optional[Substitution]:
    """Find bindings making ``pattern`` equal ``target``, or None.

    The target must be ground.  Repeated pattern variables must bind
    consistently.
    """
    if not is_ground(target):
        raise ValueError("match target must be ground")
    bindings, _ = _match_cost(pattern, target)
    return None if bindings is None else Substitution(bindings)


def _match_cost(pattern: Term, target: Term) -> tuple[Optional[dict[str, Term]], int]:
    """Matching with a node-comparison count (the inversion-cost measure).

    Each structural label comparison costs 1; re-checking a repeated
    variable costs the number of node pairs visited by the equality walk.
    """
    bindings: dict[str, Term] = {}
    cost = 0
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = bindings.get(p.name)
            if bound is None:
                bindings[p.name] = t
            else:
                eq, walked = _equal_cost(bound, t)
                cost += walked
                if not eq:
                    return None, cost
            continue
        cost += 1
        if isinstance(t, Var) or p.label != t.label or len(p.children) != len(t.children):
            return None, cost
        stack.extend(zip(p.children, t.children))
    return bindings, cost


def _equal_cost(a: Term, b: Term) -> tuple[bool, int]:
    cost = 0
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        cost += 1
        if isinstance(x, Var) or isinstance(y, Var):
            if x != y:
                return False, cost
            continue
        if x.label != y.label or len(x.children) != len(y.children):
            return False, cost
        stack.extend(zip(x.children, y.children))
    return True, cost


# ---------------------------------------------------------------------------
# Unification (union-find term graphs)


class _UfClass:
    __slots__ = ("parent", "rank", "schema", "canon")

    def __init__(self, schema: Optional[Node], canon: Optional[str]):
        self.parent: Optional[_UfClass] = None
        self.rank = 0
        self.schema = schema  # a non-variable member, if the class has one
        self.canon = canon  # representative variable name for pure-var classes


def unify(t1: Term, t2: Term) -> Optional[Substitution]:
    """Most general unifier of t1 and t2, or None.

    Equal subterms share union-find nodes (a term DAG), unions are by rank,
    and the occurs check happens once at extraction time as a cycle check,
    which keeps the closure pass near-linear.
    """
    var_classes: dict[str, _UfClass] = {}
    node_classes: dict[Term, _UfClass] = {}

    def class_of(t: Term) -> _UfClass:
        if isinstance(t, Var):
            cls = var_classes.get(t.name)
            if cls is None:
                cls = var_classes[t.name] = _UfClass(None, t.name)
            return cls
        cls = node_classes.get(t)
        if cls is None:
            cls = node_classes[t] = _UfClass(t, None)
        return cls

    def find(cls: _UfClass) -> _UfClass:
        root = cls
        while root.parent is not None:
            root = root.parent
        while cls is not root:
            parent = cls.parent
            cls.parent = root
            cls = parent
        return root

    def union(ra: _UfClass, rb: _UfClass) -> None:
        schema = ra.schema if ra.schema is not None else rb.schema
        # For pure-variable merges the right-hand class names the survivor.
        canon = None if schema is not None else rb.canon
        if ra.rank < rb.rank:
            ra, rb = rb, ra
        rb.parent = ra
        if ra.rank == rb.rank:
            ra.rank += 1
        ra.schema = schema
        ra.canon = canon

    work = [(class_of(t1), class_of(t2))]
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra is rb:
            continue
        sa, sb = ra.schema, rb.schema
        if sa is not None and sb is not None:
            if sa.label != sb.label or len(sa.children) != len(sb.children):
                return None
            union(ra, rb)
            work.extend(
                (class_of(ca), class_of(cb)) for ca, cb in zip(sa.children, sb.children)
            )
        else:
            union(ra, rb)

    resolved: dict[int, Term] = {}
    visiting: set[int] = set()

    def build(cls: _UfClass) -> Optional[Term]:
        root = find(cls)
        key = id(root)
        if key in resolved:
            return resolved[key]
        if key in visiting:
            return None  # a class reachable from itself: occurs violation
        if root.schema is None:
            result: Term = Var(root.canon or "_")
        else:
            visiting.add(key)
            kids = []
            for child in root.schema.children:
                built = build(class_of(child))
                if built is None:
                    return None
                kids.append(built)
            visiting.discard(key)
            result = Node(root.schema.label, tuple(kids))
        resolved[key] = result
        return result

    bindings: dict[str, Term] = {}
    for name in sorted(var_classes):
        value = build(var_classes[name])
        if value is None:
            return None
        if value != Var(name):
            bindings[name] = value
    return Substitution(bindings)


# ---------------------------------------------------------------------------
# Anti-unification


def lgg(terms: Sequence[Term], name: str = "lgg") -> Abstraction:
    """Least general generalization of one or more ground terms.

    Positions where the inputs disagree become metavariables; equal
    subterm tuples share a variable, and variables are numbered v0, v1,
    ... by first occurrence, so the result is deterministic.
    """
    abstraction, _ = lgg_with_witnesses(terms, name=name)
    return abstraction


def lgg_with_witnesses(
    terms: Sequence[Term], name: str = "lgg"
) -> tuple[Abstraction, list[tuple[Term, ...]]]:
    """lgg plus, per input term, the argument tuple that reproduces it:
    ``instantiate(a, witnesses[i]) == terms[i]``."""
    terms = tuple(terms)
    if not terms:
        raise ValueError("lgg needs at least one term")
    for t in terms:
        if not is_ground(t):
            raise ValueError("lgg inputs must be ground")

    slots: dict[tuple[Term, ...], str] = {}

    def gen(tup: tuple[Term, ...]) -> Term:
        first = tup[0]
        if all(t == first for t in tup[1:]):
            return first
        if isinstance(first, Node) and all(
            isinstance(t, Node)
            and t.label == first.label
            and len(t.children) == len(first.children)
            for t in tup[1:]
        ):
            return Node(
                first.label,
                tuple(
                    gen(tuple(t.children[i] for t in tup))
                    for i in range(len(first.children))
                ),
            )
        var = slots.get(tup)
        if var is None:
            var = slots[tup] = f"v{len(slots)}"
        return Var(var)

    body = gen(terms)
    params = tuple(slots.values())
    witnesses = [tuple(tup[i] for tup in slots) for i in range(len(terms))]
    return Abstraction(name, params, body), witnesses

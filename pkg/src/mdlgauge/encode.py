"""A small translator from C-family fragments to terms.

Covers arithmetic expressions, calls, and the handful of statement forms
used by the bundled corpus (function definitions with declarations, for
loops, and returns).  It is deliberately not a C++ front end; anything
outside that subset raises EncodeError.

Expression shapes: binary operators become ``(op lhs rhs)``, a call through
an identifier becomes ``(name args...)``, so ``r*r + f(s)*f(s)`` encodes as
``(+ (* r r) (* (f s) (f s)))``.
"""

from __future__ import annotations

from .lexcount import Token, tokenize
from .term import Node, Term


class EncodeError(ValueError):
    pass


_ASSIGN_OPS = ("=", "+=", "-=", "*=", "/=", "%=")
_COMPARE_OPS = ("==", "!=", "<", ">", "<=", ">=")
_ADD_OPS = ("+", "-")
_MUL_OPS = ("*", "/", "%")


class _Cursor:
    def __init__(self, tokens: tuple[Token, ...]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.tokens[i].text if i < len(self.tokens) else ""

    def kind(self) -> str:
        return self.tokens[self.pos].kind if self.pos < len(self.tokens) else ""

    def next(self) -> str:
        if self.pos >= len(self.tokens):
            raise EncodeError("unexpected end of input")
        text = self.tokens[self.pos].text
        self.pos += 1
        return text

    def expect(self, text: str) -> None:
        got = self.next()
        if got != text:
            raise EncodeError(f"expected {text!r}, found {got!r}")

    def done(self) -> bool:
        return self.pos >= len(self.tokens)


def encode_expression(text: str) -> Term:
    """Encode a single C-family expression as a term."""
    cur = _Cursor(tokenize(text).tokens)
    term = _expression(cur)
    if not cur.done():
        raise EncodeError(f"trailing input at token {cur.peek()!r}")
    return term


def encode_function(text: str) -> Term:
    """Encode a function definition, optionally under a template header."""
    cur = _Cursor(tokenize(text).tokens)
    term = _function(cur)
    if not cur.done():
        raise EncodeError(f"trailing input at token {cur.peek()!r}")
    return term


def _expression(cur: _Cursor) -> Term:
    return _assignment(cur)


def _assignment(cur: _Cursor) -> Term:
    left = _comparison(cur)
    if cur.peek() in _ASSIGN_OPS:
        op = cur.next()
        right = _assignment(cur)  # right associative
        return Node(op, (left, right))
    return left


def _binary(cur: _Cursor, operators: tuple[str, ...], operand) -> Term:
    left = operand(cur)
    while cur.peek() in operators:
        op = cur.next()
        left = Node(op, (left, operand(cur)))
    return left


def _comparison(cur: _Cursor) -> Term:
    return _binary(cur, _COMPARE_OPS, _additive)


def _additive(cur: _Cursor) -> Term:
    return _binary(cur, _ADD_OPS, _multiplicative)


def _multiplicative(cur: _Cursor) -> Term:
    return _binary(cur, _MUL_OPS, _unary)


def _unary(cur: _Cursor) -> Term:
    head = cur.peek()
    if head == "*":
        cur.next()
        return Node("deref", (_unary(cur),))
    if head == "++":
        cur.next()
        return Node("preinc", (_unary(cur),))
    if head == "--":
        cur.next()
        return Node("predec", (_unary(cur),))
    if head == "-":
        cur.next()
        return Node("neg", (_unary(cur),))
    return _postfix(cur)


def _postfix(cur: _Cursor) -> Term:
    term = _primary(cur)
    while True:
        head = cur.peek()
        if head == "(":
            cur.next()
            args = _arguments(cur)
            if isinstance(term, Node) and not term.children:
                term = Node(term.label, args)  # call through an identifier
            else:
                term = Node("call", (term,) + args)
        elif head == "[":
            cur.next()
            index = _expression(cur)
            cur.expect("]")
            term = Node("index", (term, index))
        elif head == "." and cur.kind() == "punctuator":
            cur.next()
            member = cur.next()
            term = Node("member", (term, Node(member)))
        else:
            return term


def _arguments(cur: _Cursor) -> tuple[Term, ...]:
    if cur.peek() == ")":
        cur.next()
        return ()
    args = [_expression(cur)]
    while cur.peek() == ",":
        cur.next()
        args.append(_expression(cur))
    cur.expect(")")
    return tuple(args)


def _primary(cur: _Cursor) -> Term:
    if cur.peek() == "(":
        cur.next()
        term = _expression(cur)
        cur.expect(")")
        return term
    kind = cur.kind()
    if kind in ("identifier", "keyword", "number"):
        return Node(cur.next())
    raise EncodeError(f"unexpected token {cur.peek()!r}")


# ---------------------------------------------------------------------------
# The statement subset: enough for the bundled corpus listings.


def _function(cur: _Cursor) -> Term:
    if cur.peek() == "template":
        cur.next()
        cur.expect("<")
        tparams = []
        while True:
            cur.expect("typename")
            tparams.append(Node(cur.next()))
            if cur.peek() == ",":
                cur.next()
                continue
            cur.expect(">")
            break
        inner = _function(cur)
        return Node("template", (Node("tparams", tuple(tparams)), inner))

    ret = _type(cur)
    name = cur.next()
    cur.expect("(")
    params = []
    if cur.peek() != ")":
        while True:
            ptype = _type(cur)
            pname = cur.next()
            params.append(Node("param", (ptype, Node(pname))))
            if cur.peek() == ",":
                cur.next()
                continue
            break
    cur.expect(")")
    body = _block(cur)
    return Node("fn", (Node(name), ret, Node("params", tuple(params)), body))


def _type(cur: _Cursor) -> Term:
    if cur.kind() not in ("identifier", "keyword"):
        raise EncodeError(f"expected a type, found {cur.peek()!r}")
    t: Term = Node(cur.next())
    while cur.peek() == "*":
        cur.next()
        t = Node("ptr", (t,))
    return t


def _block(cur: _Cursor) -> Term:
    cur.expect("{")
    stmts = []
    while cur.peek() != "}":
        stmts.append(_statement(cur))
    cur.next()
    return Node("block", tuple(stmts))


def _statement(cur: _Cursor) -> Term:
    head = cur.peek()
    if head == "{":
        return _block(cur)
    if head == "return":
        cur.next()
        value = _expression(cur)
        cur.expect(";")
        return Node("return", (value,))
    if head == "for":
        cur.next()
        cur.expect("(")
        init: Term = Node("empty") if cur.peek() == ";" else _simple_statement(cur)
        cur.expect(";")
        cond: Term = Node("empty") if cur.peek() == ";" else _expression(cur)
        cur.expect(";")
        step: Term = Node("empty") if cur.peek() == ")" else _expression(cur)
        cur.expect(")")
        body = _statement(cur)
        return Node("for", (init, cond, step, body))
    stmt = _simple_statement(cur)
    cur.expect(";")
    return stmt


def _simple_statement(cur: _Cursor) -> Term:
    # A declaration when two identifier-ish tokens stand side by side
    # ("double s", "int i"); otherwise an expression statement.
    if cur.kind() in ("identifier", "keyword") and _looks_like_declarator(cur):
        dtype = _type(cur)
        name = cur.next()
        if cur.peek() == "=":
            cur.next()
            return Node("decl", (dtype, Node(name), _expression(cur)))
        return Node("decl", (dtype, Node(name)))
    return Node("expr", (_expression(cur),))


def _looks_like_declarator(cur: _Cursor) -> bool:
    ahead = 1
    while cur.peek(ahead) == "*":
        ahead += 1
    nxt = cur.peek(ahead)
    return bool(nxt) and (nxt[0].isalpha() or nxt[0] == "_")

"""Tokenizers that measure code length in lexical tokens.

The count is what matters here: comments and whitespace are discarded and
identifier spelling is irrelevant, so the measure cannot be gamed by
stripping comments or shortening names.  Two dialects are supported:
``cpp-like`` (maximal-munch lexing with multi-character operators, numeric
and string literals) and ``generic`` (a crude fallback that groups word
characters and nothing else).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

DIALECTS = ("cpp-like", "generic")

# Every keyword of the C family that could plausibly appear in measured
# sources.  Keywords count exactly like identifiers; the set exists for
# classification and to reject renamings that capture a keyword.
CPP_KEYWORDS = frozenset(
    """
    alignas alignof asm auto bool break case catch char char16_t char32_t
    char8_t class const const_cast consteval constexpr constinit continue
    decltype default delete do double dynamic_cast else enum explicit
    export extern false float for friend goto if inline int long mutable
    namespace new noexcept nullptr operator private protected public
    register reinterpret_cast requires return short signed sizeof static
    static_assert static_cast struct switch template this thread_local
    throw true try typedef typeid typename union unsigned using virtual
    void volatile wchar_t while
    """.split()
)

# Multi-character operators, longest first so maximal munch falls out of a
# simple startswith scan.  Covers everything that shows up in the bundled
# corpus plus the usual C/C++ inventory.
_MULTI_OPS = (
    "<<=", ">>=", "->*", "...",
    "::", "->", "++", "--", "+=", "-=", "*=", "/=", "%=",
    "==", "!=", "<=", ">=", "&&", "||", "&=", "|=", "^=",
    "<<", ">>", "##", ".*",
)

_PUNCTUATORS = frozenset({"(", ")", "[", "]", "{", "}", ",", ";", ".", "#", "::", "..."})

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(
    r"(?:0[xX][0-9a-fA-F]+|0[bB][01]+|(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)[fFlLuU]*"
)
_WORD_RE = re.compile(r"[A-Za-z0-9_]+")


class LexError(ValueError):
    """Malformed input; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, text: str, pos: int):
        offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


class UnterminatedComment(LexError):
    pass


class UnterminatedLiteral(LexError):
    pass


class CollisionWithKeyword(ValueError):
    pass


class NonInjectiveMapping(ValueError):
    pass


class InvalidIdentifier(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    """One lexeme with its class (identifier, keyword, number,
    string-literal, char-literal, operator, or punctuator)."""

    kind: str
    text: str


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...]
    source_id: str = ""
    dialect: str = "cpp-like"

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def texts(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)


def tokenize(text: str, dialect: str = "cpp-like", source_id: str = "") -> TokenStream:
    """Lex ``text`` into a TokenStream, discarding comments and whitespace.

    Raises UnterminatedComment / UnterminatedLiteral on malformed input and
    ValueError on an unknown dialect.
    """
    if dialect == "cpp-like":
        toks = tuple(_lex_cpp(text))
    elif dialect == "generic":
        toks = tuple(_lex_generic(text))
    else:
        raise ValueError(f"unsupported dialect: {dialect!r}")
    return TokenStream(toks, source_id=source_id, dialect=dialect)


def count_tokens(stream: TokenStream) -> int:
    return len(stream.tokens)


def rename_identifiers(stream: TokenStream, mapping: Mapping[str, str]) -> TokenStream:
    """Rewrite identifier tokens per ``mapping``; every other token and the
    token count are untouched.

    The mapping must stay injective on the identifiers actually present and
    may not introduce a keyword of the stream's dialect.
    """
    keywords = CPP_KEYWORDS if stream.dialect == "cpp-like" else frozenset()
    for target in mapping.values():
        if not _IDENT_RE.fullmatch(target):
            raise InvalidIdentifier(f"rename target {target!r} is not an identifier")
        if target in keywords:
            raise CollisionWithKeyword(f"rename target {target!r} is a keyword")

    present = {t.text for t in stream.tokens if t.kind == "identifier"}
    effective = {name: mapping.get(name, name) for name in present}
    if len(set(effective.values())) != len(present):
        raise NonInjectiveMapping(
            "renaming merges identifiers: " + ", ".join(sorted(present))
        )

    renamed = tuple(
        Token("identifier", effective[t.text]) if t.kind == "identifier" else t
        for t in stream.tokens
    )
    return TokenStream(renamed, source_id=stream.source_id, dialect=stream.dialect)


def stream_text(stream: TokenStream) -> str:
    """Render a stream back to lexable text (space at every boundary)."""
    return " ".join(t.text for t in stream.tokens)


def _lex_cpp(text: str) -> Iterator[Token]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "/" and text.startswith("//", i):
            end = text.find("\n", i)
            i = n if end < 0 else end + 1
            continue
        if c == "/" and text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise UnterminatedComment("unterminated block comment", text, i)
            i = end + 2
            continue
        if c == '"' or c == "'":
            j = _scan_literal(text, i)
            kind = "string-literal" if c == '"' else "char-literal"
            yield Token(kind, text[i:j])
            i = j
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER_RE.match(text, i)
            yield Token("number", m.group())
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            yield Token("keyword" if word in CPP_KEYWORDS else "identifier", word)
            i = m.end()
            continue
        for op in _MULTI_OPS:
            if text.startswith(op, i):
                yield Token("punctuator" if op in _PUNCTUATORS else "operator", op)
                i += len(op)
                break
        else:
            yield Token("punctuator" if c in _PUNCTUATORS else "operator", c)
            i += 1


def _scan_literal(text: str, start: int) -> int:
    quote = text[start]
    i = start + 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\\":
            i += 2
            continue
        if c == quote:
            return i + 1
        if c == "\n":
            break
        i += 1
    raise UnterminatedLiteral("unterminated literal", text, start)


def _lex_generic(text: str) -> Iterator[Token]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = _WORD_RE.match(text, i)
        if m:
            word = m.group()
            yield Token("number" if word[0].isdigit() else "identifier", word)
            i = m.end()
            continue
        yield Token("punctuator" if c in _PUNCTUATORS else "operator", c)
        i += 1

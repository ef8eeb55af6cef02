"""Hand-written tokenizer shared by the Turtle, query, and rule grammars
(the functional-style ontology grammar reuses it too; keywords are plain
names classified by the parsers). Tracks line/column for error spans."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SourceSpan

# token kinds
IRIREF = "IRIREF"
NAME = "NAME"          # bare or prefixed name: `abuse`, `ex:Abuse`, `ex:`, `:x`
VAR = "VAR"
STRING = "STRING"
INTEGER = "INTEGER"
DECIMAL = "DECIMAL"
PUNCT = "PUNCT"
ATPREFIX = "ATPREFIX"  # the `@prefix` directive keyword
EOF = "EOF"

_TOKEN_RES: list[tuple[str, re.Pattern[str]]] = [
    (IRIREF, re.compile(r"<[^<>\"{}|^`\\\s]*>")),
    (STRING, re.compile(r'"(?:[^"\\\n]|\\.)*"')),
    (VAR, re.compile(r"\?[A-Za-z_][\w\-]*")),
    (ATPREFIX, re.compile(r"@prefix\b")),
    (DECIMAL, re.compile(r"[+-]?[0-9]+\.[0-9]+")),
    (INTEGER, re.compile(r"[+-]?[0-9]+")),
    (NAME, re.compile(r"(?:[A-Za-z_][\w\-]*)?:[\w\-]*|[A-Za-z_][\w\-]*")),
    (PUNCT, re.compile(r"\^\^|<=|>=|!=|&&|\|\||[.;,{}()=<>!]")),
]

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    value: str
    line: int
    column: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, len(self.text))


def _decode_string(raw: str, span: SourceSpan) -> str:
    body = raw[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            i += 1
            esc = body[i]
            if esc not in _ESCAPES:
                raise ParseError(span, "a valid string escape", "\\" + esc)
            out.append(_ESCAPES[esc])
        else:
            out.append(c)
        i += 1
    return "".join(out)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    col = 1
    n = len(text)
    while pos < n:
        c = text[pos]
        if c == "\n":
            pos += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            pos += 1
            col += 1
            continue
        if c == "#":
            while pos < n and text[pos] != "\n":
                pos += 1
            continue
        for kind, rx in _TOKEN_RES:
            m = rx.match(text, pos)
            if m:
                raw = m.group(0)
                span = SourceSpan(line, col, len(raw))
                value = _decode_string(raw, span) if kind == STRING else raw
                tokens.append(Token(kind, raw, value, line, col))
                pos = m.end()
                col += len(raw)
                break
        else:
            raise ParseError(SourceSpan(line, col, 1), "a token", c)
    tokens.append(Token(EOF, "", "", line, col))
    return tokens


class Cursor:
    """Token stream with one-token lookahead and span-carrying errors."""

    def __init__(self, tokens: list[Token]) -> None:
        self._tokens = tokens
        self._i = 0

    def peek(self) -> Token:
        return self._tokens[self._i]

    def peek2(self) -> Token:
        return self._tokens[min(self._i + 1, len(self._tokens) - 1)]

    def next(self) -> Token:
        tok = self._tokens[self._i]
        if tok.kind != EOF:
            self._i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def at_name(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == NAME and tok.text.upper() == word.upper()

    def take(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        if self.at(kind, text):
            return self.next()
        return self.fail(text if text is not None else kind)

    def expect_name(self, word: str) -> Token:
        if self.at_name(word):
            return self.next()
        return self.fail(word)

    def fail(self, expected: str):
        tok = self.peek()
        found = tok.text if tok.kind != EOF else "end of input"
        raise ParseError(tok.span, expected, found)

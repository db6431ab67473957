"""Shared lexing helpers for the small text formats used by this package."""

from __future__ import annotations

import re
from typing import NamedTuple


class ParseError(ValueError):
    """Syntax or validation error in an input file, with position info."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None and col is not None:
            message = f"line {line}, col {col}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


_WS = re.compile(r"[ \t\r\n]+")
_COMMENT = re.compile(r"#[^\n]*")


def scan(text, patterns):
    """Tokenize `text` with an ordered list of (kind, compiled-regex) pairs.

    Whitespace and `#` line comments are skipped.  Raises ParseError on the
    first character no pattern matches.
    """
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _WS.match(text, pos) or _COMMENT.match(text, pos)
        if m:
            chunk = text[pos:m.end()]
            line += chunk.count("\n")
            if "\n" in chunk:
                line_start = pos + chunk.rindex("\n") + 1
            pos = m.end()
            continue
        for kind, rx in patterns:
            m = rx.match(text, pos)
            if m:
                tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
                pos = m.end()
                break
        else:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
    return tokens


class TokenStream:
    """Cursor over a token list with expectation helpers."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, what="token"):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise ParseError(f"unexpected end of input, expected {what}",
                             last.line if last else 1, last.col if last else 1)
        self.i += 1
        return tok

    def expect(self, kind, text=None):
        tok = self.next(text or kind)
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text is not None else kind
            raise ParseError(f"expected {want}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def at_end(self):
        return self.i >= len(self.tokens)

"""Token-level view of source text: kernel dispatch and span helpers."""

from __future__ import annotations

import os
from bisect import bisect_right
from typing import NamedTuple

from graderaudit import _scanner

_impl = _scanner
if not os.environ.get("GRADERAUDIT_PURE"):
    try:
        from graderaudit import _scanner_accel as _accel  # type: ignore[attr-defined]

        if getattr(_accel, "__file__", "").endswith((".so", ".pyd")):
            _impl = _accel
    except ImportError:
        pass

USING_COMPILED = _impl is not _scanner

ERROR = _scanner.ERROR
IDENT = _scanner.IDENT
NUMBER = _scanner.NUMBER
STRING = _scanner.STRING
CHAR = _scanner.CHAR
PUNCT = _scanner.PUNCT
LINE_COMMENT = _scanner.LINE_COMMENT
BLOCK_COMMENT = _scanner.BLOCK_COMMENT
PREPROC = _scanner.PREPROC
KIND_NAMES = _scanner.KIND_NAMES

COMMENT_KINDS = (LINE_COMMENT, BLOCK_COMMENT)


class Token(NamedTuple):
    kind: int
    start: int
    end: int

    def text(self, source: str) -> str:
        return source[self.start : self.end]


def scan(text: str, mode: int) -> tuple[list[Token], bool]:
    raw, clean = _impl.scan(text, mode)
    return [Token(*t) for t in raw], clean


class LineIndex:
    """Byte offset to 1-based line number mapping."""

    def __init__(self, text: str):
        starts = [0]
        find = text.find
        i = find("\n")
        while i != -1:
            starts.append(i + 1)
            i = find("\n", i + 1)
        self.starts = starts
        self._len = len(text)

    def line_of(self, offset: int) -> int:
        return bisect_right(self.starts, offset)

    def line_span(self, line: int) -> tuple[int, int]:
        start = self.starts[line - 1]
        end = self.starts[line] if line < len(self.starts) else self._len
        return start, end


def blank_runs(text: str, tokens: list[Token], min_lines: int = 2) -> list[tuple[int, int]]:
    """Spans of >=min_lines consecutive blank lines lying outside every token.

    Token overlap matters: a blank-looking line inside a block comment or a
    triple-quoted string belongs to that token, not to whitespace.
    """
    index = LineIndex(text)
    n_lines = len(index.starts)
    covered = [False] * (n_lines + 2)
    for tok in tokens:
        first = index.line_of(tok.start)
        last = index.line_of(max(tok.start, tok.end - 1))
        for ln in range(first, last + 1):
            covered[ln] = True

    runs: list[tuple[int, int]] = []
    run_start_line = None
    for ln in range(1, n_lines + 1):
        s, e = index.line_span(ln)
        blank = text[s:e].strip() == "" and not covered[ln]
        if blank:
            if run_start_line is None:
                run_start_line = ln
        else:
            if run_start_line is not None and ln - run_start_line >= min_lines:
                runs.append((index.line_span(run_start_line)[0], s))
            run_start_line = None
    if run_start_line is not None and n_lines + 1 - run_start_line >= min_lines:
        runs.append((index.line_span(run_start_line)[0], len(text)))
    return runs

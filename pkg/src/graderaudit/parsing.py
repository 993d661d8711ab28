"""Parsing of submissions into SourceUnits with error-tolerant status."""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from enum import Enum

from graderaudit import lexing
from graderaudit.languages import Language, SCANNER_MODE


class ParseStatus(str, Enum):
    CLEAN = "clean"
    RECOVERED = "recovered"
    UNPARSEABLE = "unparseable"


@dataclass(frozen=True)
class Span:
    """Half-open byte range."""

    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")


@dataclass(frozen=True)
class SourceUnit:
    submission_id: str
    question_id: str
    language: Language
    text: str
    parse_status: ParseStatus
    problem_description: str = ""
    error_regions: tuple[Span, ...] = field(default=())

    def __post_init__(self):
        if not self.text:
            raise ValueError("SourceUnit.text must be non-empty")


_OPENERS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = {")", "]", "}"}


def bracket_errors(text: str, tokens: list[lexing.Token]) -> list[Span]:
    """Line spans of unmatched or mismatched brackets (non-trivia tokens)."""
    index = lexing.LineIndex(text)
    stack: list[tuple[str, lexing.Token]] = []
    bad: list[lexing.Token] = []
    for tok in tokens:
        if tok.kind != lexing.PUNCT or tok.end - tok.start != 1:
            continue
        ch = text[tok.start]
        if ch in _OPENERS:
            stack.append((ch, tok))
        elif ch in _CLOSERS:
            if stack and _OPENERS[stack[-1][0]] == ch:
                stack.pop()
            else:
                bad.append(tok)
    bad.extend(tok for _, tok in stack)

    spans: list[Span] = []
    seen_lines: set[int] = set()
    for tok in bad:
        line = index.line_of(tok.start)
        if line in seen_lines:
            continue
        seen_lines.add(line)
        s, e = index.line_span(line)
        spans.append(Span(s, e if e > s else s + 1))
    spans.sort(key=lambda sp: sp.start)
    return spans


def _python_error_region(text: str, err: SyntaxError) -> tuple[Span, ...]:
    index = lexing.LineIndex(text)
    n_lines = len(index.starts)
    first = min(max(err.lineno or 1, 1), n_lines)
    last = min(max(getattr(err, "end_lineno", None) or first, first), n_lines)
    start = index.line_span(first)[0]
    end = index.line_span(last)[1]
    if end <= start:
        end = min(start + 1, len(text))
    if end <= start:
        return ()
    return (Span(start, end),)


def parse(
    text: str,
    language: Language,
    *,
    submission_id: str = "",
    question_id: str = "",
    problem_description: str = "",
) -> SourceUnit:
    """Parse ``text`` and classify it Clean, Recovered, or Unparseable.

    Recovered units keep a usable token stream plus the byte regions around
    the failures; downstream surface extraction only reads outside them.
    """
    if not text:
        raise ValueError("empty submission text")

    status = ParseStatus.CLEAN
    regions: tuple[Span, ...] = ()

    if "\x00" in text:
        status = ParseStatus.UNPARSEABLE
    else:
        tokens, lex_clean = lexing.scan(text, SCANNER_MODE[language])
        n_err = sum(1 for t in tokens if t.kind == lexing.ERROR)
        if tokens and n_err >= 4 and n_err * 3 >= len(tokens):
            status = ParseStatus.UNPARSEABLE
        elif not tokens and text.strip():
            status = ParseStatus.UNPARSEABLE
        elif language is Language.PYTHON:
            try:
                ast.parse(text)
            except SyntaxError as err:
                status = ParseStatus.RECOVERED
                regions = _python_error_region(text, err)
            except (ValueError, MemoryError, RecursionError):
                status = ParseStatus.UNPARSEABLE
        else:
            bad = bracket_errors(text, tokens)
            err_tokens = tuple(
                Span(t.start, t.end) for t in tokens if t.kind == lexing.ERROR
            )
            if bad or err_tokens or not lex_clean:
                status = ParseStatus.RECOVERED
                regions = tuple(bad) + err_tokens

    return SourceUnit(
        submission_id=submission_id,
        question_id=question_id,
        language=language,
        text=text,
        parse_status=status,
        problem_description=problem_description,
        error_regions=regions,
    )

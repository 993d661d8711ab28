"""Attack-surface extraction: trivia regions, identifiers, dead-code anchors.

The surface of a unit is everything a compiler discards or treats as an
opaque symbol while a text-reading evaluator still attends to it. Extraction
is purely token/AST based and deterministic; on recovered units, regions
touching an error span are dropped so only well-formed stretches contribute.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from enum import Enum

from graderaudit import lexing
from graderaudit.languages import (
    C_TYPE_KEYWORDS,
    CONTINUATION_KEYWORDS,
    JAVA_TYPE_KEYWORDS,
    KEYWORDS,
    RESERVED_SYMBOLS,
    SCANNER_MODE,
    Language,
)
from graderaudit.parsing import ParseStatus, SourceUnit, Span


class TriviaKind(str, Enum):
    LINE_COMMENT = "line_comment"
    BLOCK_COMMENT = "block_comment"
    DOCSTRING = "docstring"
    BLANK_RUN = "blank_run"


class IdentifierTag(str, Enum):
    USER_DEFINED = "user_defined"
    EXTERNAL = "external"


@dataclass(frozen=True)
class TriviaRegion:
    span: Span
    kind: TriviaKind


@dataclass(frozen=True)
class IdentifierInfo:
    tag: IdentifierTag
    occurrences: tuple[Span, ...]


@dataclass(frozen=True)
class Anchor:
    """Statement-boundary insertion point (start of a statement's line)."""

    offset: int
    indent: str
    in_function: bool
    leading_text: str


@dataclass
class AttackSurface:
    trivia_regions: list[TriviaRegion]
    identifier_occurrences: dict[str, IdentifierInfo]
    deadcode_anchors: list[Anchor]

    def user_symbols(self) -> list[str]:
        return sorted(
            name
            for name, info in self.identifier_occurrences.items()
            if info.tag is IdentifierTag.USER_DEFINED
        )


_IDENT_CHARS = re.compile(r"[A-Za-z0-9_]")


def _non_trivia(tokens: list[lexing.Token]) -> list[lexing.Token]:
    return [t for t in tokens if t.kind not in lexing.COMMENT_KINDS]


def _intersects(start: int, end: int, regions: tuple[Span, ...]) -> bool:
    return any(start < r.end and end > r.start for r in regions)


# ---------------------------------------------------------------------------
# python docstrings


def _docstring_indices(text: str, tokens: list[lexing.Token]) -> set[int]:
    """Indices (into ``tokens``) of leading-string docstring tokens."""
    index = lexing.LineIndex(text)
    result: set[int] = set()
    code = [(i, t) for i, t in enumerate(tokens) if t.kind not in lexing.COMMENT_KINDS]

    depth = 0
    pending_body = True  # module body may open with a docstring
    stmt_head: str | None = None
    prev: lexing.Token | None = None
    for pos, (tok_idx, tok) in enumerate(code):
        ch = text[tok.start : tok.end]
        starts_statement = False
        if depth == 0:
            if prev is None:
                starts_statement = True
            elif index.line_of(tok.start) > index.line_of(prev.end - 1):
                starts_statement = True
            elif text[prev.start : prev.end] in (";", ":"):
                starts_statement = True

        if starts_statement:
            if tok.kind == lexing.STRING and pending_body:
                nxt = code[pos + 1][1] if pos + 1 < len(code) else None
                standalone = nxt is None or (
                    index.line_of(nxt.start) > index.line_of(tok.end - 1)
                ) or text[nxt.start : nxt.end] == ";"
                if standalone:
                    result.add(tok_idx)
            pending_body = False
            stmt_head = ch

        if tok.kind == lexing.PUNCT:
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth = max(0, depth - 1)
            elif ch == ":" and depth == 0 and stmt_head in ("def", "class", "async"):
                pending_body = True
        prev = tok
    return result


def _docstring_content_span(text: str, tok: lexing.Token) -> Span | None:
    i = tok.start
    while i < tok.end and text[i] not in "\"'":
        i += 1  # skip r/b/u/f prefix letters
    if i >= tok.end:
        return None
    quote = text[i]
    triple = text[i : i + 3] == quote * 3
    width = 3 if triple else 1
    start = i + width
    end = tok.end
    if end - start >= width and text[end - width : end] == quote * width:
        end -= width
    if end <= start:
        return None
    return Span(start, end)


# ---------------------------------------------------------------------------
# token streams (the compiler view)


def token_stream(text: str, language: Language) -> list[tuple[int, str]]:
    """Ordered non-trivia lexical tokens as (kind, text) pairs.

    Comments are dropped always; python docstring tokens are dropped too,
    since their content is evaluator-only payload surface.
    """
    tokens, _ = lexing.scan(text, SCANNER_MODE[language])
    doc = _docstring_indices(text, tokens) if language is Language.PYTHON else set()
    out: list[tuple[int, str]] = []
    for i, tok in enumerate(tokens):
        if tok.kind in lexing.COMMENT_KINDS or i in doc:
            continue
        out.append((tok.kind, text[tok.start : tok.end]))
    return out


def strip_trivia(unit: SourceUnit) -> list[tuple[int, str]]:
    if unit.parse_status is ParseStatus.UNPARSEABLE:
        raise ValueError("cannot tokenize an unparseable unit")
    return token_stream(unit.text, unit.language)


# ---------------------------------------------------------------------------
# identifier analysis, python (ast path for clean units)


def _py_names_from_target(node: ast.AST, out: set[str]) -> None:
    if isinstance(node, ast.Name):
        out.add(node.id)
    elif isinstance(node, (ast.Tuple, ast.List)):
        for elt in node.elts:
            _py_names_from_target(elt, out)
    elif isinstance(node, ast.Starred):
        _py_names_from_target(node.value, out)


def _py_ast_symbols(text: str) -> tuple[set[str], set[str]]:
    """(user-declared names, poisoned names) for a clean python unit."""
    tree = ast.parse(text)
    declared: set[str] = set()
    imported: set[str] = set()
    poison: set[str] = set()
    def_names: set[str] = set()

    for node in ast.walk(tree):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            declared.add(node.name)
            def_names.add(node.name)
            args = node.args
            for a in (
                list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs)
            ):
                declared.add(a.arg)
            if args.vararg:
                declared.add(args.vararg.arg)
            if args.kwarg:
                declared.add(args.kwarg.arg)
        elif isinstance(node, ast.Lambda):
            args = node.args
            for a in (
                list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs)
            ):
                declared.add(a.arg)
        elif isinstance(node, ast.ClassDef):
            declared.add(node.name)
            def_names.add(node.name)
        elif isinstance(node, ast.Assign):
            for tgt in node.targets:
                _py_names_from_target(tgt, declared)
        elif isinstance(node, (ast.AnnAssign, ast.AugAssign)):
            _py_names_from_target(node.target, declared)
        elif isinstance(node, (ast.For, ast.AsyncFor)):
            _py_names_from_target(node.target, declared)
        elif isinstance(node, ast.withitem) and node.optional_vars:
            _py_names_from_target(node.optional_vars, declared)
        elif isinstance(node, ast.comprehension):
            _py_names_from_target(node.target, declared)
        elif isinstance(node, ast.ExceptHandler) and node.name:
            declared.add(node.name)
        elif isinstance(node, ast.NamedExpr):
            _py_names_from_target(node.target, declared)
        elif isinstance(node, (ast.Global, ast.Nonlocal)):
            declared.update(node.names)
        elif isinstance(node, ast.Import):
            for alias in node.names:
                imported.add(alias.asname or alias.name.split(".")[0])
        elif isinstance(node, ast.ImportFrom):
            for alias in node.names:
                if alias.name != "*":
                    imported.add(alias.asname or alias.name)
        elif isinstance(node, ast.MatchAs) and node.name:
            declared.add(node.name)
        elif isinstance(node, ast.MatchStar) and node.name:
            declared.add(node.name)

    # names referenced inside f-string fields live inside STRING tokens, so a
    # token-level rename would miss them
    for node in ast.walk(tree):
        if isinstance(node, ast.JoinedStr):
            for sub in ast.walk(node):
                if isinstance(sub, ast.Name):
                    poison.add(sub.id)
        elif isinstance(node, ast.Call):
            callee_ok = isinstance(node.func, ast.Name) and node.func.id in def_names
            if not callee_ok:
                for kw in node.keywords:
                    if kw.arg:
                        poison.add(kw.arg)
        elif isinstance(node, ast.Assign):
            # symbols listed in __all__ are part of the module interface
            for tgt in node.targets:
                if isinstance(tgt, ast.Name) and tgt.id == "__all__":
                    for sub in ast.walk(node.value):
                        if isinstance(sub, ast.Constant) and isinstance(sub.value, str):
                            poison.add(sub.value)

    poison.update(n for n in declared if n.startswith("__") and n.endswith("__"))
    user = declared - imported - poison - set(RESERVED_SYMBOLS[Language.PYTHON])
    return user, poison


# ---------------------------------------------------------------------------
# identifier analysis, token heuristics (C family, java, recovered python)


def _py_token_symbols(text: str, tokens: list[lexing.Token]) -> set[str]:
    """Conservative declaration harvest for python units without a clean AST."""
    index = lexing.LineIndex(text)
    code = _non_trivia(tokens)
    declared: set[str] = set()
    imported: set[str] = set()
    poison: set[str] = set()

    depth = 0
    paren_kinds: list[str] = []  # "def" or "other" per open paren
    stmt_head: str | None = None
    prev: lexing.Token | None = None
    prev_head_was_def = False
    for pos, tok in enumerate(code):
        ch = text[tok.start : tok.end]
        nxt = code[pos + 1] if pos + 1 < len(code) else None
        nxt_text = text[nxt.start : nxt.end] if nxt else ""

        new_stmt = depth == 0 and (
            prev is None
            or index.line_of(tok.start) > index.line_of(prev.end - 1)
            or text[prev.start : prev.end] in (";", ":")
        )
        if new_stmt:
            stmt_head = ch
            prev_head_was_def = ch in ("def", "class")
            if tok.kind == lexing.IDENT and nxt_text in (
                "=", "+=", "-=", "*=", "/=", "//=", "%=", "**=", "&=", "|=", "^=",
                ">>=", "<<=",
            ):
                declared.add(ch)

        if tok.kind == lexing.IDENT:
            prev_text = text[prev.start : prev.end] if prev else ""
            if prev_text == ".":
                pass  # attribute access, different namespace
            elif stmt_head in ("import", "from") and prev_text in ("import", "as", ","):
                imported.add(ch)
            elif prev_text in ("def", "class"):
                declared.add(ch)
            elif prev_text in ("for", "global", "nonlocal"):
                declared.add(ch)
            elif depth > 0 and paren_kinds and paren_kinds[-1] == "def":
                if prev_text in ("(", ",", "*", "**"):
                    declared.add(ch)
            elif depth > 0 and nxt_text == "=":
                poison.add(ch)  # keyword argument to an arbitrary callee

        if tok.kind == lexing.PUNCT:
            if ch in "([{":
                depth += 1
                paren_kinds.append("def" if (ch == "(" and prev_head_was_def) else "other")
                prev_head_was_def = False
            elif ch in ")]}":
                depth = max(0, depth - 1)
                if paren_kinds:
                    paren_kinds.pop()
        prev = tok

    # a rename cannot reach inside string literals, so any candidate that
    # textually appears in one is unsafe (f-strings especially)
    strings = [text[t.start : t.end] for t in tokens if t.kind == lexing.STRING]
    for name in list(declared):
        pat = re.compile(r"\b" + re.escape(name) + r"\b")
        if any(pat.search(s) for s in strings):
            poison.add(name)

    poison.update(n for n in declared if n.startswith("__") and n.endswith("__"))
    return declared - imported - poison - set(RESERVED_SYMBOLS[Language.PYTHON])


def _match_paren(code: list[lexing.Token], text: str, open_pos: int) -> int:
    """Index of the ')' matching the '(' at open_pos, or -1."""
    depth = 0
    for k in range(open_pos, len(code)):
        ch = text[code[k].start : code[k].end]
        if code[k].kind != lexing.PUNCT:
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                return k
    return -1


def _c_family_symbols(
    text: str, tokens: list[lexing.Token], language: Language
) -> tuple[set[str], list[tuple[int, int]]]:
    """(user-declared names, function body brace spans) via token heuristics."""
    code = [t for t in _non_trivia(tokens) if t.kind != lexing.PREPROC]
    words = [text[t.start : t.end] for t in code]
    keywords = KEYWORDS[language]
    type_kw = JAVA_TYPE_KEYWORDS if language is Language.JAVA else C_TYPE_KEYWORDS

    declared: set[str] = set()
    user_types: set[str] = set()
    poison: set[str] = set()
    bodies: list[tuple[int, int]] = []

    def is_ident(k: int) -> bool:
        return 0 <= k < len(code) and code[k].kind == lexing.IDENT

    # pass 1: tagged type declarations and member-access poisoning
    for k, w in enumerate(words):
        if w in ("struct", "union", "enum", "class", "interface") and is_ident(k + 1):
            name = words[k + 1]
            if name not in keywords:
                user_types.add(name)
                declared.add(name)
                if language is Language.JAVA or w in ("class", "interface"):
                    poison.add(name)  # type name may anchor file naming / ctors
        if code[k].kind == lexing.IDENT and k > 0:
            if words[k - 1] in (".", "->"):
                poison.add(w)
            elif words[k - 1] == "::":
                poison.add(w)

    def type_ish(k: int) -> bool:
        w = words[k]
        if code[k].kind == lexing.IDENT:
            return w in type_kw or w in user_types or (
                language is Language.JAVA and w not in keywords and w[0].isupper()
            )
        return w in ("*", "&", ">", "]")

    # pass 2: functions (name '(' params ')' then '{' or ';')
    for k, w in enumerate(words):
        if not is_ident(k) or w in keywords or k == 0:
            continue
        if k + 1 >= len(words) or words[k + 1] != "(":
            continue
        if not type_ish(k - 1):
            continue
        close = _match_paren(code, text, k + 1)
        if close < 0 or close + 1 >= len(words):
            continue
        after = words[close + 1]
        if after == "{" or after == ";" or (language is Language.JAVA and after == "throws"):
            declared.add(w)
            if after == "{":
                # record the body span and harvest parameter names
                depth = 0
                for m in range(close + 1, len(code)):
                    if words[m] == "{":
                        depth += 1
                    elif words[m] == "}":
                        depth -= 1
                        if depth == 0:
                            bodies.append((code[close + 1].start, code[m].end))
                            break
                for p in range(k + 2, close):
                    if (
                        is_ident(p)
                        and words[p] not in keywords
                        and words[p + 1] in (",", ")", "[", "=")
                        and p > k + 2 - 1
                        and type_ish(p - 1)
                    ):
                        declared.add(words[p])

    # pass 3: variable declarations at statement boundaries
    boundary_prev = {";", "{", "}", None}
    for k, w in enumerate(words):
        first = k == 0 or words[k - 1] in boundary_prev or (
            words[k - 1] == "(" and k >= 2 and words[k - 2] in ("for", "while")
        )
        if not first:
            continue
        if code[k].kind != lexing.IDENT or w in keywords and w not in type_kw:
            if not (code[k].kind == lexing.IDENT and w in type_kw):
                continue
        if not (w in type_kw or w in user_types or (
            language is Language.JAVA and w not in keywords and w[0].isupper()
        )):
            continue
        # consume the type chunk, then declare trailing identifiers
        m = k + 1
        while m < len(words) and (
            words[m] in type_kw
            or words[m] in user_types
            or words[m] in ("*", "&", "[", "]", "<", ">", ",")
            and not is_ident(m)
        ):
            m += 1
        while m < len(words):
            if not is_ident(m) or words[m] in keywords:
                break
            follower = words[m + 1] if m + 1 < len(words) else ""
            if follower in ("=", ";", ",", ")", "["):
                declared.add(words[m])
                if follower == "[":
                    close_b = m + 1
                    while close_b < len(words) and words[close_b] != "]":
                        close_b += 1
                    follower_after = words[close_b + 1] if close_b + 1 < len(words) else ""
                    m = close_b
                if follower == ",":
                    m += 2
                    continue
            break

    declared -= poison
    declared -= set(RESERVED_SYMBOLS[language])
    declared -= keywords
    return declared, bodies


# ---------------------------------------------------------------------------
# anchors


def _python_anchors(
    text: str,
    tokens: list[lexing.Token],
    doc_indices: set[int],
) -> list[Anchor]:
    index = lexing.LineIndex(text)
    code = [(i, t) for i, t in enumerate(tokens) if t.kind not in lexing.COMMENT_KINDS]

    # first code token per line, with bracket depth before it
    first_on_line: dict[int, tuple[int, lexing.Token, int]] = {}
    depth = 0
    prev_line = -1
    for tok_idx, tok in code:
        line = index.line_of(tok.start)
        if line != prev_line and line not in first_on_line:
            first_on_line[line] = (tok_idx, tok, depth)
            prev_line = line
        ch = text[tok.start : tok.end]
        if tok.kind == lexing.PUNCT:
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth = max(0, depth - 1)

    anchors: list[Anchor] = []
    def_stack: list[int] = []  # indent widths of open def headers
    continuation = frozenset(CONTINUATION_KEYWORDS[Language.PYTHON])
    for line in sorted(first_on_line):
        tok_idx, tok, depth_before = first_on_line[line]
        if depth_before != 0:
            continue
        line_start, _ = index.line_span(line)
        prev_text = text[:line_start].rstrip("\n")
        if prev_text.endswith("\\"):
            continue  # explicit continuation of the previous statement
        head = text[tok.start : tok.end]
        indent = text[line_start : tok.start]
        if indent.strip():
            continue
        width = len(indent.expandtabs())
        while def_stack and width <= def_stack[-1]:
            def_stack.pop()
        in_function = bool(def_stack)
        if head not in continuation and tok_idx not in doc_indices:
            anchors.append(Anchor(line_start, indent, in_function, head))
        if head == "def" or (head == "async" and "def" in text[tok.start : index.line_span(line)[1]]):
            def_stack.append(width)
    return anchors


def _c_family_anchors(
    text: str,
    tokens: list[lexing.Token],
    language: Language,
    bodies: list[tuple[int, int]],
) -> list[Anchor]:
    index = lexing.LineIndex(text)
    code = [t for t in _non_trivia(tokens) if t.kind != lexing.PREPROC]
    continuation = frozenset(CONTINUATION_KEYWORDS[language])

    anchors: list[Anchor] = []
    paren_depth = 0
    prev: lexing.Token | None = None
    seen_lines: set[int] = set()
    for tok in code:
        ch = text[tok.start : tok.end]
        line = index.line_of(tok.start)
        if (
            line not in seen_lines
            and prev is not None
            and index.line_of(prev.end - 1) < line
            and paren_depth == 0
            and text[prev.start : prev.end] in (";", "{", "}")
        ):
            seen_lines.add(line)
            line_start, _ = index.line_span(line)
            indent = text[line_start : tok.start]
            if not indent.strip() and ch not in continuation and ch != "}":
                in_function = any(b0 < line_start <= b1 for b0, b1 in bodies)
                if in_function:
                    anchors.append(Anchor(line_start, indent, True, ch))
        if tok.kind == lexing.PUNCT:
            if ch == "(":
                paren_depth += 1
            elif ch == ")":
                paren_depth = max(0, paren_depth - 1)
        prev = tok
    return anchors


# ---------------------------------------------------------------------------
# assembly


def extract_attack_surface(unit: SourceUnit) -> AttackSurface:
    if unit.parse_status is ParseStatus.UNPARSEABLE:
        raise ValueError("attack surface undefined for unparseable units")

    text = unit.text
    language = unit.language
    tokens, _ = lexing.scan(text, SCANNER_MODE[language])
    masked = unit.error_regions

    doc_indices = (
        _docstring_indices(text, tokens) if language is Language.PYTHON else set()
    )

    trivia: list[TriviaRegion] = []
    for i, tok in enumerate(tokens):
        if tok.kind == lexing.LINE_COMMENT:
            trivia.append(TriviaRegion(Span(tok.start, tok.end), TriviaKind.LINE_COMMENT))
        elif tok.kind == lexing.BLOCK_COMMENT:
            before = text[tok.start - 1] if tok.start > 0 else " "
            after = text[tok.end] if tok.end < len(text) else " "
            if not (_IDENT_CHARS.match(before) and _IDENT_CHARS.match(after)):
                trivia.append(
                    TriviaRegion(Span(tok.start, tok.end), TriviaKind.BLOCK_COMMENT)
                )
        elif i in doc_indices:
            content = _docstring_content_span(text, tok)
            if content is not None:
                trivia.append(TriviaRegion(content, TriviaKind.DOCSTRING))
    for s, e in lexing.blank_runs(text, tokens):
        trivia.append(TriviaRegion(Span(s, e), TriviaKind.BLANK_RUN))
    trivia = [
        r for r in trivia if not _intersects(r.span.start, r.span.end, masked)
    ]
    trivia.sort(key=lambda r: r.span.start)

    # identifiers
    if language is Language.PYTHON:
        if unit.parse_status is ParseStatus.CLEAN:
            user, _ = _py_ast_symbols(text)
        else:
            user = _py_token_symbols(text, tokens)
        bodies: list[tuple[int, int]] = []
    else:
        user, bodies = _c_family_symbols(text, tokens, language)

    keywords = KEYWORDS[language]
    occurrences: dict[str, list[Span]] = {}
    code = _non_trivia(tokens)
    for pos, tok in enumerate(code):
        if tok.kind != lexing.IDENT:
            continue
        word = text[tok.start : tok.end]
        if word in keywords:
            continue
        prev_text = (
            text[code[pos - 1].start : code[pos - 1].end] if pos > 0 else ""
        )
        if prev_text in (".", "->", "::"):
            continue
        occurrences.setdefault(word, []).append(Span(tok.start, tok.end))

    identifier_occurrences: dict[str, IdentifierInfo] = {}
    for word, spans in occurrences.items():
        tag = IdentifierTag.USER_DEFINED if word in user else IdentifierTag.EXTERNAL
        if tag is IdentifierTag.USER_DEFINED and any(
            _intersects(s.start, s.end, masked) for s in spans
        ):
            tag = IdentifierTag.EXTERNAL
        identifier_occurrences[word] = IdentifierInfo(tag, tuple(spans))

    # anchors
    if language is Language.PYTHON:
        anchors = _python_anchors(text, tokens, doc_indices)
    else:
        anchors = _c_family_anchors(text, tokens, language, bodies)
    anchors = [
        a for a in anchors if not _intersects(a.offset, a.offset + 1, masked)
    ]

    return AttackSurface(
        trivia_regions=trivia,
        identifier_occurrences=identifier_occurrences,
        deadcode_anchors=anchors,
    )

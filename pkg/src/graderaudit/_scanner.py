# Tokenizer kernel shared by every compiler-view operation (trivia stripping,
# surface extraction, C3 normalization). This file is the single source for
# both the interpreted fallback and the Cython-compiled module built by
# setup.py, so keep it free of imports and dynamic features.

ERROR = 0
IDENT = 1
NUMBER = 2
STRING = 3
CHAR = 4
PUNCT = 5
LINE_COMMENT = 6
BLOCK_COMMENT = 7
PREPROC = 8

KIND_NAMES = (
    "error",
    "ident",
    "number",
    "string",
    "char",
    "punct",
    "line_comment",
    "block_comment",
    "preproc",
)

MODE_PYTHON = 0
MODE_C = 1
MODE_JAVA = 2

_WS = " \t\r\f\v"
_PY_STRING_PREFIX = "rRbBuUfF"

_PY_PUNCT3 = ("**=", "//=", ">>=", "<<=", "...")
_PY_PUNCT2 = (
    "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", ":=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
)
_PY_PUNCT1 = "+-*/%@&|^~<>=(),[]{}:;."

_C_PUNCT3 = ("<<=", ">>=", "...", "->*")
_C_PUNCT2 = (
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::", "##",
)
_C_PUNCT1 = "+-*/%&|^~<>=!?:;,.()[]{}"

_JAVA_PUNCT4 = (">>>=",)
_JAVA_PUNCT3 = (">>>", "<<=", ">>=")
_JAVA_PUNCT2 = (
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::",
)
_JAVA_PUNCT1 = "+-*/%&|^~<>=!?:;,.()[]{}@"


def _scan_quoted(text, i, n, quote, triple, escape):
    # i sits just past the opening quote(s); returns (end, terminated)
    while i < n:
        c = text[i]
        if escape and c == "\\":
            i += 2
            continue
        if triple:
            if c == quote and text[i : i + 3] == quote + quote + quote:
                return i + 3, True
            i += 1
        else:
            if c == quote:
                return i + 1, True
            if c == "\n":
                return i, False
            i += 1
    return n, False


def _scan_number(text, i, n):
    j = i
    while j < n:
        c = text[j]
        if c.isalnum() or c == "_" or c == ".":
            j += 1
        elif (c == "+" or c == "-") and j > i and text[j - 1] in "eEpP":
            j += 1
        else:
            break
    return j


def _scan_preproc(text, i, n):
    # Directive runs to the logical end of line (backslash continuations),
    # but stops before a trailing comment so comments stay separate tokens.
    j = i + 1
    quote = ""
    clean = True
    while j < n:
        c = text[j]
        if quote:
            if c == "\\":
                if j + 1 < n and text[j + 1] == "\n":
                    quote = ""
                    clean = False
                j += 2
                continue
            if c == quote:
                quote = ""
            elif c == "\n":
                quote = ""
                clean = False
                break
            j += 1
            continue
        if c == "\n":
            break
        if c == "\\" and j + 1 < n and text[j + 1] == "\n":
            j += 2
            continue
        if c == '"' or c == "'":
            quote = c
            j += 1
            continue
        if c == "/" and j + 1 < n and (text[j + 1] == "/" or text[j + 1] == "*"):
            break
        j += 1
    return j, clean


def scan(text, mode):
    """Tokenize source text.

    Returns (tokens, clean) where tokens is a list of (kind, start, end)
    triples over half-open byte offsets and clean is False when the scan
    recovered from a malformed construct (unterminated literal or comment,
    stray byte).
    """
    tokens = []
    clean = True
    i = 0
    n = len(text)
    line_start = True

    if mode == MODE_PYTHON:
        punct3, punct2, punct1 = _PY_PUNCT3, _PY_PUNCT2, _PY_PUNCT1
    elif mode == MODE_C:
        punct3, punct2, punct1 = _C_PUNCT3, _C_PUNCT2, _C_PUNCT1
    else:
        punct3, punct2, punct1 = _JAVA_PUNCT3, _JAVA_PUNCT2, _JAVA_PUNCT1

    while i < n:
        c = text[i]

        if c == "\n":
            i += 1
            line_start = True
            continue
        if c in _WS:
            i += 1
            continue
        line_start_here = line_start
        line_start = False

        # comments
        if mode == MODE_PYTHON:
            if c == "#":
                j = text.find("\n", i)
                if j < 0:
                    j = n
                tokens.append((LINE_COMMENT, i, j))
                i = j
                continue
        else:
            if c == "/" and i + 1 < n:
                nxt = text[i + 1]
                if nxt == "/":
                    j = text.find("\n", i)
                    if j < 0:
                        j = n
                    tokens.append((LINE_COMMENT, i, j))
                    i = j
                    continue
                if nxt == "*":
                    j = text.find("*/", i + 2)
                    if j < 0:
                        tokens.append((BLOCK_COMMENT, i, n))
                        clean = False
                        i = n
                    else:
                        tokens.append((BLOCK_COMMENT, i, j + 2))
                        i = j + 2
                    continue
            if c == "#" and mode == MODE_C:
                if line_start_here:
                    j, ok = _scan_preproc(text, i, n)
                    if not ok:
                        clean = False
                    tokens.append((PREPROC, i, j))
                    i = j
                    continue
                tokens.append((ERROR, i, i + 1))
                clean = False
                i += 1
                continue

        # string and char literals
        if c == '"' or c == "'":
            if mode == MODE_PYTHON:
                triple = text[i : i + 3] == c + c + c
                j, ok = _scan_quoted(text, i + (3 if triple else 1), n, c, triple, True)
                if not ok:
                    clean = False
                tokens.append((STRING, i, j))
                i = j
                continue
            if c == '"':
                j, ok = _scan_quoted(text, i + 1, n, c, False, True)
                if not ok:
                    clean = False
                tokens.append((STRING, i, j))
                i = j
                continue
            j, ok = _scan_quoted(text, i + 1, n, c, False, True)
            if not ok:
                clean = False
            tokens.append((CHAR, i, j))
            i = j
            continue

        # identifiers (and python string prefixes)
        if c.isalpha() or c == "_" or (c == "$" and mode != MODE_PYTHON):
            j = i + 1
            while j < n:
                cj = text[j]
                if cj.isalnum() or cj == "_" or (cj == "$" and mode != MODE_PYTHON):
                    j += 1
                else:
                    break
            if (
                mode == MODE_PYTHON
                and j - i <= 2
                and j < n
                and (text[j] == '"' or text[j] == "'")
            ):
                is_prefix = True
                k = i
                while k < j:
                    if text[k] not in _PY_STRING_PREFIX:
                        is_prefix = False
                        break
                    k += 1
                if is_prefix:
                    q = text[j]
                    triple = text[j : j + 3] == q + q + q
                    e, ok = _scan_quoted(text, j + (3 if triple else 1), n, q, triple, True)
                    if not ok:
                        clean = False
                    tokens.append((STRING, i, e))
                    i = e
                    continue
            tokens.append((IDENT, i, j))
            i = j
            continue

        # numbers
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = _scan_number(text, i, n)
            tokens.append((NUMBER, i, j))
            i = j
            continue

        # python explicit line continuation
        if c == "\\" and mode == MODE_PYTHON:
            if i + 1 < n and text[i + 1] == "\n":
                i += 2
                line_start = True
                continue
            tokens.append((ERROR, i, i + 1))
            clean = False
            i += 1
            continue

        # punctuation, longest munch
        matched = False
        if mode == MODE_JAVA and text[i : i + 4] in _JAVA_PUNCT4:
            tokens.append((PUNCT, i, i + 4))
            i += 4
            matched = True
        elif text[i : i + 3] in punct3:
            tokens.append((PUNCT, i, i + 3))
            i += 3
            matched = True
        elif text[i : i + 2] in punct2:
            tokens.append((PUNCT, i, i + 2))
            i += 2
            matched = True
        elif c in punct1:
            tokens.append((PUNCT, i, i + 1))
            i += 1
            matched = True
        if matched:
            continue

        tokens.append((ERROR, i, i + 1))
        clean = False
        i += 1

    return tokens, clean

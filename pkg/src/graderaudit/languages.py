"""The four target languages and their lexical/comment conventions."""

from __future__ import annotations

import builtins
import keyword
from enum import Enum

from graderaudit import _scanner


class Language(str, Enum):
    PYTHON = "python"
    C = "c"
    CPP = "cpp"
    JAVA = "java"

    @classmethod
    def parse(cls, value: str) -> "Language":
        normalized = value.strip().lower()
        aliases = {"py": "python", "c++": "cpp", "cxx": "cpp"}
        normalized = aliases.get(normalized, normalized)
        try:
            return cls(normalized)
        except ValueError:
            raise ValueError(f"unknown language: {value!r}") from None


#: scanner mode per language (C and C++ share a lexical grammar here)
SCANNER_MODE = {
    Language.PYTHON: _scanner.MODE_PYTHON,
    Language.C: _scanner.MODE_C,
    Language.CPP: _scanner.MODE_C,
    Language.JAVA: _scanner.MODE_JAVA,
}

#: (open, close) comment delimiters used when rendering payload comment blocks.
#: Close is empty for line-comment styles.
COMMENT_DELIMITERS = {
    Language.PYTHON: ("#", ""),
    Language.C: ("/*", "*/"),
    Language.CPP: ("/*", "*/"),
    Language.JAVA: ("//", ""),
}

SOURCE_SUFFIX = {
    Language.PYTHON: ".py",
    Language.C: ".c",
    Language.CPP: ".cpp",
    Language.JAVA: ".java",
}

_C_KEYWORDS = frozenset(
    """
    auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool _Complex _Imaginary
    """.split()
)

_CPP_KEYWORDS = _C_KEYWORDS | frozenset(
    """
    alignas alignof and and_eq asm bitand bitor bool catch class compl
    concept consteval constexpr constinit const_cast co_await co_return
    co_yield decltype delete dynamic_cast explicit export false friend
    mutable namespace new noexcept not not_eq nullptr operator or or_eq
    private protected public reinterpret_cast requires static_assert
    static_cast template this thread_local throw true try typeid typename
    using virtual wchar_t xor xor_eq
    """.split()
)

_JAVA_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    true false null var record yield sealed permits
    """.split()
)

_PY_KEYWORDS = frozenset(keyword.kwlist) | frozenset(getattr(keyword, "softkwlist", []))
_PY_BUILTINS = frozenset(dir(builtins))

KEYWORDS = {
    Language.PYTHON: _PY_KEYWORDS,
    Language.C: _C_KEYWORDS,
    Language.CPP: _CPP_KEYWORDS,
    Language.JAVA: _JAVA_KEYWORDS,
}

#: names that are never rename candidates even when declared in-file
RESERVED_SYMBOLS = {
    Language.PYTHON: _PY_KEYWORDS | _PY_BUILTINS,
    Language.C: _C_KEYWORDS | frozenset({"main"}),
    Language.CPP: _CPP_KEYWORDS | frozenset({"main", "std"}),
    Language.JAVA: _JAVA_KEYWORDS | frozenset({"main", "String", "System"}),
}

#: type-ish tokens that can open a declaration in the C family / Java
C_TYPE_KEYWORDS = frozenset(
    """
    void char short int long float double signed unsigned bool _Bool size_t
    ssize_t int8_t int16_t int32_t int64_t uint8_t uint16_t uint32_t uint64_t
    auto const static struct union enum class FILE
    """.split()
)

JAVA_TYPE_KEYWORDS = frozenset(
    "void boolean byte char short int long float double var".split()
)

#: statement-continuation leaders: never insert a statement right before these
CONTINUATION_KEYWORDS = {
    Language.PYTHON: frozenset({"else", "elif", "except", "finally", "case"}),
    Language.C: frozenset({"else", "while"}),
    Language.CPP: frozenset({"else", "while", "catch"}),
    Language.JAVA: frozenset({"else", "while", "catch", "finally", "case", "default"}),
}


def is_valid_identifier(name: str, language: Language) -> bool:
    """Lexical validity of ``name`` as a fresh identifier in ``language``."""
    if not name:
        return False
    if language is Language.PYTHON:
        return name.isidentifier() and name not in _PY_KEYWORDS
    allow_dollar = language is Language.JAVA
    first = name[0]
    if not ((first.isascii() and first.isalpha()) or first == "_" or (allow_dollar and first == "$")):
        return False
    for c in name[1:]:
        if not ((c.isascii() and c.isalnum()) or c == "_" or (allow_dollar and c == "$")):
            return False
    return name not in KEYWORDS[language]

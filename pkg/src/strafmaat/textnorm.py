"""Text normalization: diacritic folding plus whitespace collapsing.

All body text, headings, and press releases pass through `fold_collapse`
before any pattern matching, so every downstream dictionary and regex can be
written in plain ASCII ("orientatiepunt" also matches "oriëntatiepunt").

The fold table is the union of:

* replacements computed once at import for the Latin diacritic ranges
  (U+0080-U+024F, U+1E00-U+1EFF) by decomposing and dropping combining
  marks, with combining marks themselves (U+0300-U+036F) dropped, and
* the shipped override file data/fold_overrides.tsv (ligatures, quotes,
  dashes, currency words, ...), which always wins.

Replacements are ASCII and contain no whitespace, so folding commutes with
whitespace collapsing and the two can run in a single pass.  The compiled
kernel `strafmaat._fold` is used when available; `strafmaat._fold_py` is the
pure-Python fallback with identical behavior.
"""

from __future__ import annotations

import unicodedata

from strafmaat import configfiles

_COMPUTED_RANGES = ((0x80, 0x250), (0x1E00, 0x1F00))
_COMBINING_RANGE = (0x300, 0x370)
_OVERRIDES_FILE = "fold_overrides.tsv"

try:
    from strafmaat._fold import fold_collapse as _fold_collapse

    HAVE_COMPILED_KERNEL = True
except ImportError:  # extension not built: pure-Python fallback
    from strafmaat._fold_py import fold_collapse as _fold_collapse

    HAVE_COMPILED_KERNEL = False


def _load_overrides() -> dict[int, str]:
    table = {}
    for row in configfiles.read_rows(_OVERRIDES_FILE):
        code = row[0]
        if not code.upper().startswith("U+"):
            raise ValueError(f"bad code point {code!r} in {_OVERRIDES_FILE}")
        cp = int(code[2:], 16)
        rep = row[1] if len(row) > 1 else ""
        table[cp] = rep
    return table


def build_fold_table(overrides: dict[int, str] | None = None) -> dict[int, str]:
    """Build the code point -> replacement map used by both kernels."""
    table: dict[int, str] = {}
    for lo, hi in _COMPUTED_RANGES:
        for cp in range(lo, hi):
            ch = chr(cp)
            stripped = "".join(
                c for c in unicodedata.normalize("NFKD", ch)
                if not unicodedata.combining(c)
            )
            if stripped != ch and stripped.isascii() and not _has_space(stripped):
                table[cp] = stripped
    lo, hi = _COMBINING_RANGE
    for cp in range(lo, hi):
        table[cp] = ""
    table.update(_load_overrides() if overrides is None else overrides)

    for cp, rep in table.items():
        if cp < 128 or chr(cp).isspace():
            raise ValueError(f"fold table may not remap U+{cp:04X}")
        if not rep.isascii() or _has_space(rep):
            raise ValueError(f"bad replacement {rep!r} for U+{cp:04X}")
    return table


def _has_space(s: str) -> bool:
    return any(c.isspace() for c in s)


FOLD_TABLE = build_fold_table()


def fold_collapse(text: str) -> str:
    """Normalize one text chunk with the default fold table.

    Diacritics are folded to ASCII, whitespace runs collapse to a single
    space, and leading/trailing whitespace is dropped.  Idempotent.
    """
    return _fold_collapse(text, FOLD_TABLE)

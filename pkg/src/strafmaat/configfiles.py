"""Loading helpers for the delimited config files shipped under data/.

Every table the pipeline matches against (heading synonyms, term
dictionaries, statute names and maxima, marker phrases, fold overrides) is a
tab-separated file so that coverage can be extended without code changes.
Lines starting with '#' and blank lines are ignored.
"""

from __future__ import annotations

import os
from importlib import resources


def read_rows(name_or_path: str | os.PathLike) -> list[list[str]]:
    """Read a TSV config file into a list of field lists.

    `name_or_path` is either a bare file name resolved against the packaged
    data/ directory, or an explicit filesystem path (anything containing a
    separator or pointing at an existing file).
    """
    text = _read_text(name_or_path)
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append([f.strip() for f in line.split("\t")])
    return rows


def read_data_text(name_or_path: str | os.PathLike) -> str:
    """Raw text of a packaged data file (or an explicit file path)."""
    return _read_text(name_or_path)


def _read_text(name_or_path: str | os.PathLike) -> str:
    path = os.fspath(name_or_path)
    if os.sep in path or os.path.isfile(path):
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    return resources.files("strafmaat.data").joinpath(path).read_text("utf-8")


def data_path_exists(name: str) -> bool:
    return resources.files("strafmaat.data").joinpath(name).is_file()


def load_term_dictionary(name_or_path: str | os.PathLike) -> dict[str, list[str]]:
    """Load a category dictionary: one row per category, terms in column 2+.

    Returns {category_id: [term, ...]} preserving file order.  Terms are
    matched case-insensitively on whole words by the extractors.
    """
    table: dict[str, list[str]] = {}
    for row in read_rows(name_or_path):
        category, *terms = row
        terms = [t for t in terms if t]
        if not terms:
            raise ValueError(f"category {category!r} has no terms")
        if category in table:
            raise ValueError(f"duplicate category {category!r}")
        table[category] = terms
    return table


def load_pairs(name_or_path: str | os.PathLike) -> list[tuple[str, str]]:
    """Load a two-column file as (column1, column2) tuples in file order."""
    pairs = []
    for row in read_rows(name_or_path):
        if len(row) < 2:
            raise ValueError(f"expected two columns, got {row!r}")
        pairs.append((row[0], row[1]))
    return pairs


def load_phrases(name_or_path: str | os.PathLike) -> list[str]:
    """Load a one-column phrase list in file order."""
    return [row[0] for row in read_rows(name_or_path)]

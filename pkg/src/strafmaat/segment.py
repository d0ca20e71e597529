"""Chapter segmentation of the judgment body.

Judgments written against the structured publication schema carry explicit
section elements with titles; older ones only mark headings with bridgehead,
title, or emphasis elements.  Section tags win; the heading fallback is used
when no sections exist.  Raw titles map to a chapter kind through the
configurable synonym table (data/heading_synonyms.tsv); anything unmatched
becomes "other", and a body without recognizable headings becomes a single
"other" chapter.
"""

from __future__ import annotations

import re

from strafmaat import configfiles
from strafmaat.models import CHAPTER_KINDS, Chapter, JudgmentDocument

_SYNONYMS_FILE = "heading_synonyms.tsv"

# leading "3." / "3.1" / "IV." numbering and trailing punctuation on titles
_NUMBERING_RE = re.compile(
    r"^\s*(?:(?:\d+(?:\.\d+)*|[ivxl]+)[a-z]?[.):]?\s+)+", re.I)
_TRAILING_RE = re.compile(r"[\s:.;]+$")

# a plausible fallback heading: short, not ending mid-sentence
_MAX_HEADING_CHARS = 80


class SynonymTable:
    """Heading-pattern -> chapter-kind lookup with exact and prefix rows."""

    def __init__(self, rows: list[tuple[str, str, str]]):
        self.exact: dict[str, str] = {}
        self.prefixes: list[tuple[str, str]] = []
        for pattern, kind, match in rows:
            if kind not in CHAPTER_KINDS:
                raise ValueError(f"unknown chapter kind {kind!r}")
            if match == "exact":
                self.exact[pattern] = kind
            elif match == "prefix":
                self.prefixes.append((pattern, kind))
            else:
                raise ValueError(f"unknown match mode {match!r}")

    def kind_of(self, title: str) -> str:
        key = normalize_title(title)
        if key in self.exact:
            return self.exact[key]
        for prefix, kind in self.prefixes:
            if key.startswith(prefix):
                return kind
        return "other"


def normalize_title(title: str) -> str:
    """Lowercase a title and strip numbering and trailing punctuation."""
    key = _NUMBERING_RE.sub("", title.lower())
    return _TRAILING_RE.sub("", key).strip()


_default_table: SynonymTable | None = None


def default_synonyms() -> SynonymTable:
    global _default_table
    if _default_table is None:
        rows = []
        for row in configfiles.read_rows(_SYNONYMS_FILE):
            if len(row) != 3:
                raise ValueError(f"expected 3 columns in {_SYNONYMS_FILE}: {row!r}")
            rows.append((row[0], row[1], row[2]))
        _default_table = SynonymTable(rows)
    return _default_table


def segment_chapters(doc: JudgmentDocument,
                     synonyms: SynonymTable | None = None) -> list[Chapter]:
    """Split the body into an in-order, non-overlapping chapter list."""
    if synonyms is None:
        synonyms = default_synonyms()
    text = doc.plain_text
    if not text:
        return []

    boundaries = _section_boundaries(doc) or _heading_boundaries(doc)
    if not boundaries:
        return [Chapter(kind="other", title=None, start=0, end=len(text),
                        text=text)]

    chapters: list[Chapter] = []
    if boundaries[0][0] > 0:  # leading text before the first heading
        chapters.append(Chapter(kind="other", title=None, start=0,
                                end=boundaries[0][0],
                                text=text[:boundaries[0][0]]))
    for i, (start, title) in enumerate(boundaries):
        end = boundaries[i + 1][0] if i + 1 < len(boundaries) else len(text)
        kind = synonyms.kind_of(title) if title else "other"
        chapters.append(Chapter(kind=kind, title=title, start=start, end=end,
                                text=text[start:end]))
    return chapters


def _section_boundaries(doc: JudgmentDocument) -> list[tuple[int, str | None]]:
    """Boundaries from explicit section elements (top level only)."""
    if not doc.sections:
        return []
    top = min(s.depth for s in doc.sections)
    spans = sorted((s for s in doc.sections if s.depth == top),
                   key=lambda s: s.start)
    return [(s.start, s.title) for s in spans]


def _heading_boundaries(doc: JudgmentDocument) -> list[tuple[int, str | None]]:
    """Fallback boundaries from heading markers.

    Title and bridgehead elements are headings by construction; emphasis is
    used for anything from stress to inline quotes, so an emphasis marker
    only counts when short and either numbered or known to the synonym
    table.
    """
    synonyms = default_synonyms()
    boundaries = []
    for h in sorted(doc.headings, key=lambda h: h.start):
        if len(h.text) > _MAX_HEADING_CHARS:
            continue
        if h.tag == "emphasis":
            known = synonyms.kind_of(h.text) != "other"
            numbered = bool(_NUMBERING_RE.match(h.text.lower()))
            if not (known or numbered):
                continue
        boundaries.append((h.start, h.text))
    deduped = []
    for start, title in boundaries:
        if deduped and start < deduped[-1][0] + 1:
            continue  # nested/duplicate markers at the same spot
        deduped.append((start, title))
    return deduped

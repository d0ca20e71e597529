"""Corpus ingestion: fetch judgment XML, parse it, filter the adult corpus.

Published judgments come as one XML file per ECLI with a metadata block
(identifier, date, court, case number, ...), an optional press-release
summary, and an optional full body.  Parsing produces a
:class:`~strafmaat.models.JudgmentDocument` whose ``plain_text`` is fully
normalized (diacritics folded, whitespace collapsed, tag boundaries becoming
single spaces) while section spans and heading markers keep character offsets
into that text for the segmenter.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import os
import re
import xml.etree.ElementTree as ET
from collections.abc import Iterable, Iterator

from strafmaat.models import Heading, JudgmentDocument, JudgmentMeta, SectionSpan
from strafmaat.textnorm import fold_collapse

NAMESPACES = {
    "dcterms": "http://purl.org/dc/terms/",
    "psi": "http://psi.rechtspraak.nl/",
    "rs": "http://www.rechtspraak.nl/schema/rechtspraak-1.0",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
}

# Default public open-data endpoint; override with the STRAFMAAT_ENDPOINT
# environment variable or the --source option.
DEFAULT_ENDPOINT = "https://data.rechtspraak.nl/uitspraken"
ENDPOINT_ENV_VAR = "STRAFMAAT_ENDPOINT"

_BODY_TAGS = ("uitspraak", "conclusie")
_HEADING_TAGS = ("title", "bridgehead", "emphasis")


class IngestError(Exception):
    """Raised for malformed judgment XML."""


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


class _PlainTextBuilder:
    """Accumulates normalized text chunks, one space between chunks."""

    def __init__(self) -> None:
        self._parts: list[str] = []
        self._len = 0

    def append(self, raw: str | None) -> None:
        if not raw:
            return
        piece = fold_collapse(raw)
        if not piece:
            return
        if self._parts:
            self._parts.append(" ")
            self._len += 1
        self._parts.append(piece)
        self._len += len(piece)

    @property
    def pos(self) -> int:
        """Current text length."""
        return self._len

    @property
    def next_pos(self) -> int:
        """Offset at which the next appended chunk would start."""
        return self._len + 1 if self._len else 0

    def text(self) -> str:
        return "".join(self._parts)


def parse_judgment_xml(data: bytes | str,
                       source_path: str | None = None) -> JudgmentDocument:
    """Parse one judgment XML document into a JudgmentDocument."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise IngestError(f"malformed XML ({source_path or '<bytes>'}): {exc}") from None

    meta = _parse_meta(root)
    body = None
    for tag in _BODY_TAGS:
        body = root.find(f"rs:{tag}", NAMESPACES)
        if body is not None:
            break

    builder = _PlainTextBuilder()
    headings: list[Heading] = []
    sections: list[SectionSpan] = []
    if body is not None:
        _walk_body(body, builder, headings, sections, depth=0)

    return JudgmentDocument(
        meta=meta,
        plain_text=builder.text(),
        headings=headings,
        sections=sections,
        source_path=source_path,
    )


def parse_judgment_file(path: str | os.PathLike) -> JudgmentDocument:
    with open(path, "rb") as fh:
        return parse_judgment_xml(fh.read(), source_path=os.fspath(path))


def _parse_meta(root: ET.Element) -> JudgmentMeta:
    def first_text(xpath: str) -> str | None:
        el = root.find(xpath, NAMESPACES)
        if el is None or el.text is None:
            return None
        value = fold_collapse(el.text)
        return value or None

    ecli = first_text(".//dcterms:identifier")
    if not ecli:
        raise IngestError("judgment XML without an ECLI identifier")

    raw_date = first_text(".//dcterms:date")
    date = None
    if raw_date:
        try:
            date = dt.date.fromisoformat(raw_date[:10])
        except ValueError:
            date = None

    jurisdictions = []
    for el in root.findall(".//dcterms:subject", NAMESPACES):
        if el.text:
            value = fold_collapse(el.text)
            if value and value not in jurisdictions:
                jurisdictions.append(value)

    press = None
    press_el = root.find("rs:inhoudsindicatie", NAMESPACES)
    if press_el is not None:
        press = fold_collapse(" ".join(press_el.itertext())) or None

    return JudgmentMeta(
        ecli=ecli,
        date=date,
        court=first_text(".//dcterms:creator"),
        case_number=first_text(".//psi:zaaknummer"),
        doc_type=first_text(".//dcterms:type"),
        jurisdictions=jurisdictions,
        location=first_text(".//dcterms:spatial"),
        language=first_text(".//dcterms:language"),
        press_release=press,
    )


def _walk_body(el: ET.Element, builder: _PlainTextBuilder,
               headings: list[Heading], sections: list[SectionSpan],
               depth: int) -> None:
    """Walk the body in document order, recording structure markers."""
    tag = _local(el.tag)

    if tag == "section":
        start = builder.next_pos
        title_text = None
        if el.text:
            builder.append(el.text)
        for child in el:
            if _local(child.tag) == "title" and title_text is None:
                t_start = builder.next_pos
                _walk_body(child, builder, headings, sections, depth + 1)
                title_text = builder.text()[t_start:builder.pos] or None
            else:
                _walk_body(child, builder, headings, sections, depth + 1)
            if child.tail:
                builder.append(child.tail)
        end = builder.pos
        if end < start:  # empty section
            start = end
        sections.append(SectionSpan(title=title_text, start=start, end=end,
                                    depth=depth))
        return

    if tag in _HEADING_TAGS:
        start = builder.next_pos
        if el.text:
            builder.append(el.text)
        for child in el:
            _walk_body(child, builder, headings, sections, depth + 1)
            if child.tail:
                builder.append(child.tail)
        end = builder.pos
        if end > start:
            headings.append(Heading(text=builder.text()[start:end],
                                    start=start, end=end, tag=tag))
        return

    if el.text:
        builder.append(el.text)
    for child in el:
        _walk_body(child, builder, headings, sections, depth + 1)
        if child.tail:
            builder.append(child.tail)


def load_corpus(directory: str | os.PathLike,
                on_error=None) -> Iterator[JudgmentDocument]:
    """Yield parsed judgments from a directory of XML files (sorted order).

    Parse failures call ``on_error(path, exc)`` when given, otherwise raise.
    """
    paths = sorted(
        os.path.join(directory, name)
        for name in os.listdir(directory)
        if name.lower().endswith(".xml")
    )
    for path in paths:
        try:
            yield parse_judgment_file(path)
        except IngestError as exc:
            if on_error is None:
                raise
            on_error(path, exc)


def filter_corpus(docs: Iterable[JudgmentDocument],
                  juvenile_markers: list[str] | None = None,
                  ) -> tuple[list[JudgmentDocument], dict[str, int]]:
    """Drop metadata-only publications and juvenile cases.

    Returns the retained documents plus exclusion tallies
    (total / metadata_only / juvenile / retained).
    """
    from strafmaat import extract, segment  # deferred: avoids import cycle

    if juvenile_markers is None:
        juvenile_markers = extract.juvenile_marker_phrases()
    marker_re = extract.compile_phrase_pattern(juvenile_markers)

    kept: list[JudgmentDocument] = []
    stats = {"total": 0, "metadata_only": 0, "juvenile": 0, "retained": 0}
    for doc in docs:
        stats["total"] += 1
        if doc.is_metadata_only:
            stats["metadata_only"] += 1
            continue
        if _is_juvenile(doc, marker_re, segment, extract):
            stats["juvenile"] += 1
            continue
        kept.append(doc)
        stats["retained"] += 1
    return kept, stats


def _is_juvenile(doc, marker_re, segment_mod, extract_mod) -> bool:
    chapters = segment_mod.segment_chapters(doc)
    for chapter in chapters:
        if chapter.kind == "decision" and marker_re.search(chapter.text.lower()):
            return True
    # juvenile criminal law: articles 77a-77gg of the penal code
    for entry in extract_mod.extract_legal_basis(chapters):
        if entry.statute == "Sr":
            for article in entry.articles:
                if re.fullmatch(r"77[a-z]{1,2}", article):
                    return True
    return False


# ---------------------------------------------------------------------------
# fetching


def ecli_filename(ecli: str) -> str:
    """File name for an ECLI: colons become underscores."""
    return ecli.replace(":", "_") + ".xml"


def endpoint_base(source: str | None = None) -> str:
    return source or os.environ.get(ENDPOINT_ENV_VAR) or DEFAULT_ENDPOINT


def fetch_index(session, base: str, date_from: str, date_to: str,
                extra_params: dict[str, str] | None = None,
                page_size: int = 1000) -> list[str]:
    """Collect ECLIs from the paged index feed of the open-data endpoint."""
    eclis: list[str] = []
    offset = 0
    while True:
        params = {
            "date": [date_from, date_to],
            "max": str(page_size),
            "from": str(offset),
            "return": "DOC",
        }
        if extra_params:
            params.update(extra_params)
        resp = session.get(f"{base}/zoeken", params=params, timeout=60)
        resp.raise_for_status()
        batch = _parse_index_feed(resp.content)
        eclis.extend(batch)
        if len(batch) < page_size:
            return eclis
        offset += page_size


def _parse_index_feed(data: bytes) -> list[str]:
    """Pull ECLIs out of an Atom index feed."""
    root = ET.fromstring(data)
    eclis = []
    for entry in root.iter("{http://www.w3.org/2005/Atom}entry"):
        id_el = entry.find("{http://www.w3.org/2005/Atom}id")
        if id_el is not None and id_el.text:
            eclis.append(id_el.text.strip())
    return eclis


def fetch_documents(session, base: str, eclis: Iterable[str],
                    out_dir: str | os.PathLike,
                    log=None) -> dict[str, int]:
    """Download judgment XML per ECLI into out_dir; checksum-idempotent.

    A file already on disk with identical content is skipped, so re-running
    the same fetch changes nothing.
    """
    os.makedirs(out_dir, exist_ok=True)
    stats = {"fetched": 0, "unchanged": 0, "failed": 0}
    for ecli in eclis:
        try:
            resp = session.get(f"{base}/content", params={"id": ecli},
                               timeout=60)
            resp.raise_for_status()
            data = resp.content
        except Exception as exc:
            stats["failed"] += 1
            if log is not None:
                log(ecli, "failed", str(exc))
            continue
        path = os.path.join(out_dir, ecli_filename(ecli))
        if os.path.exists(path):
            with open(path, "rb") as fh:
                if hashlib.sha256(fh.read()).digest() == hashlib.sha256(data).digest():
                    stats["unchanged"] += 1
                    if log is not None:
                        log(ecli, "unchanged", "")
                    continue
        with open(path, "wb") as fh:
            fh.write(data)
        stats["fetched"] += 1
        if log is not None:
            log(ecli, "fetched", "")
    return stats


def fetch_local(source_dir: str | os.PathLike, out_dir: str | os.PathLike,
                log=None) -> dict[str, int]:
    """Copy judgment XML files from a local directory (offline fetch)."""
    os.makedirs(out_dir, exist_ok=True)
    stats = {"fetched": 0, "unchanged": 0, "failed": 0}
    for name in sorted(os.listdir(source_dir)):
        if not name.lower().endswith(".xml"):
            continue
        src = os.path.join(source_dir, name)
        with open(src, "rb") as fh:
            data = fh.read()
        dst = os.path.join(out_dir, name)
        if os.path.exists(dst):
            with open(dst, "rb") as fh:
                if fh.read() == data:
                    stats["unchanged"] += 1
                    continue
        with open(dst, "wb") as fh:
            fh.write(data)
        stats["fetched"] += 1
        if log is not None:
            log(name, "fetched", "")
    return stats

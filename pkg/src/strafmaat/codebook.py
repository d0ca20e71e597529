"""Codebook: turn coded records into regression-ready rows.

The statutory-maximum lookup excludes procedural-law citations and the
general part of the criminal code (articles up to 91), takes the highest
maximum over the remaining cited offence provisions, and reports every
article it cannot resolve.  Ties are broken deterministically so the result
never depends on citation order.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
import re
from dataclasses import dataclass

from strafmaat import configfiles, numerals
from strafmaat.models import (
    AGE_BUCKETS,
    DURATION_UNITS,
    MAX_BUCKETS,
    OFFENCE_CLASSES,
    AnalysisRow,
    CodedRecord,
    LegalBasisEntry,
)

GENERAL_PART_LAST_ARTICLE = 91  # criminal code general part: articles 1-91
PROCEDURAL_STATUTES = frozenset({"Sv"})

_LEADING_DIGITS_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class MaxEntry:
    max_months: float
    offence_class: str


@dataclass(frozen=True)
class MaxLookup:
    max_months: float | None
    offence_class: str | None
    unknown: tuple[str, ...]  # cited articles with no table row


def load_statute_max(path: str = "statute_max.tsv") -> dict[tuple[str, str], MaxEntry]:
    """Read and validate the (statute, article) -> maximum table."""
    table: dict[tuple[str, str], MaxEntry] = {}
    for row in configfiles.read_rows(path):
        if len(row) != 5:
            raise ValueError(f"statute max row needs 5 fields: {row!r}")
        statute, article, months_s, offence_class, valid_from = row
        key = (statute, article.lower())
        if key in table:
            raise ValueError(f"duplicate statute max row: {statute} {article}")
        if offence_class not in OFFENCE_CLASSES:
            raise ValueError(f"unknown offence class {offence_class!r} for "
                             f"{statute} {article}")
        months = float(months_s)
        if not months > 0:
            raise ValueError(f"non-positive maximum for {statute} {article}")
        dt.date.fromisoformat(valid_from)  # format check only
        table[key] = MaxEntry(max_months=months, offence_class=offence_class)
    return table


def _article_number(article: str) -> int | None:
    m = _LEADING_DIGITS_RE.match(article)
    return int(m.group(0)) if m else None


def is_general_part(statute: str, article: str) -> bool:
    if statute != "Sr":
        return False
    number = _article_number(article)
    return number is not None and number <= GENERAL_PART_LAST_ARTICLE


def substantive_articles(
        legal_basis: list[LegalBasisEntry]) -> list[tuple[str, str]]:
    """Distinct cited offence provisions, citation order preserved.

    Drops procedural-code citations, the criminal-code general part, and
    loose article numbers that could not be attached to any statute.
    """
    seen: set[tuple[str, str]] = set()
    out: list[tuple[str, str]] = []
    for entry in legal_basis:
        if not entry.statute or entry.statute in PROCEDURAL_STATUTES:
            continue
        for article in entry.articles:
            key = (entry.statute, article.lower())
            if is_general_part(*key) or key in seen:
                continue
            seen.add(key)
            out.append(key)
    return out


def max_prison_months(legal_basis: list[LegalBasisEntry],
                      table: dict[tuple[str, str], MaxEntry]) -> MaxLookup:
    """Highest statutory maximum over the cited offence provisions.

    Unresolvable citations are reported, not fatal: the maximum comes from
    whatever subset resolves.  When every citation belongs to the general
    part, those articles themselves are tried as a fallback (aiding rules
    carry their own table rows in some table editions).  Ties take the
    lexicographically first (statute, article) so input order is irrelevant.
    """
    candidates = substantive_articles(legal_basis)
    if not candidates:
        candidates = sorted({
            (entry.statute, article.lower())
            for entry in legal_basis if entry.statute == "Sr"
            for article in entry.articles
        })
    hits: list[tuple[float, tuple[str, str], str]] = []
    unknown: list[str] = []
    for key in candidates:
        entry = table.get(key)
        if entry is None:
            unknown.append(f"{key[0]} {key[1]}")
        else:
            hits.append((entry.max_months, key, entry.offence_class))
    if not hits:
        return MaxLookup(None, None, tuple(unknown))
    best_months = max(h[0] for h in hits)
    _, _, offence_class = min(
        (h for h in hits if h[0] == best_months), key=lambda h: h[1])
    return MaxLookup(best_months, offence_class, tuple(unknown))


# ---------------------------------------------------------------------------
# bucketing

_MAX_BOUNDS = (72.0, 96.0, 108.0, 120.0, 144.0, 180.0, 216.0)
_AGE_BOUNDS = (21, 31, 41, 51)


def bucket_max(months: float) -> str:
    for bound, label in zip(_MAX_BOUNDS, MAX_BUCKETS):
        if months < bound:
            return label
    return MAX_BUCKETS[-1]


def bucket_age(age: int) -> str | None:
    if age < 18:
        return None
    for bound, label in zip(_AGE_BOUNDS, AGE_BUCKETS):
        if age < bound:
            return label
    return AGE_BUCKETS[-1]


# ---------------------------------------------------------------------------
# row derivation


def prison_duration_months(record: CodedRecord) -> float | None:
    """Months of the first custodial decision (prison, or a measure with a
    stated duration); None when nothing custodial was imposed."""
    for decision in record.decisions:
        if (decision.kind in ("incarceration", "measure")
                and decision.amount is not None
                and decision.unit in DURATION_UNITS):
            return numerals.to_months(decision.amount, decision.unit)
    return None


def derive_row(record: CodedRecord,
               table: dict[tuple[str, str], MaxEntry]) -> AnalysisRow:
    meta = record.meta
    year = meta.date.year if meta.date else None

    prison = prison_duration_months(record)
    ln_prison = math.log(prison) if prison is not None and prison > 0 else None

    lookup = max_prison_months(record.legal_basis, table)
    n_offences = (len(substantive_articles(record.legal_basis))
                  if record.legal_basis else None)

    age = None
    age_bucket = None
    if record.birth_year is not None and year is not None:
        age = year - record.birth_year
        age_bucket = bucket_age(age)

    special = 1 if record.special_terms else 0
    basic = 0 if special else (1 if record.basic_terms else 0)

    return AnalysisRow(
        ecli=record.ecli,
        court=meta.court,
        year=year,
        decision_type=record.decisions[0].kind if record.decisions else None,
        prison_months=prison,
        ln_prison_months=ln_prison,
        max_months=lookup.max_months,
        max_bucket=(bucket_max(lookup.max_months)
                    if lookup.max_months is not None else None),
        offence_class=lookup.offence_class,
        n_offences=n_offences,
        guidelines=int(record.guidelines_mentioned),
        prosecution_expertise=int(bool(record.prosecution_expertise)),
        age=age,
        age_bucket=age_bucket,
        born_abroad=(None if record.birth_country is None
                     else int(record.birth_country == "foreign")),
        female=int(record.sex == "female"),
        repeat_offender=(None if record.recidivism is None
                         else int(record.recidivism == "repeat")),
        multiple_victims=int((record.victim_count or 0) >= 2),
        basic_skills=basic,
        special_skills=special,
        large_scale=int(record.large_scale_mentioned),
    )


# ---------------------------------------------------------------------------
# dataset file round trip

DATASET_COLUMNS = (
    "ecli", "court", "year", "decision_type", "prison_months",
    "ln_prison_months", "max_months", "max_bucket", "offence_class",
    "n_offences", "guidelines", "prosecution_expertise", "age", "age_bucket",
    "born_abroad", "female", "repeat_offender", "multiple_victims",
    "basic_skills", "special_skills", "large_scale",
)

_FLOAT_COLUMNS = frozenset({"prison_months", "ln_prison_months", "max_months"})
_INT_COLUMNS = frozenset({
    "year", "n_offences", "guidelines", "prosecution_expertise", "age",
    "born_abroad", "female", "repeat_offender", "multiple_victims",
    "basic_skills", "special_skills", "large_scale",
})


def _format_cell(name: str, value) -> str:
    if value is None:
        return ""
    if name in _FLOAT_COLUMNS:
        return repr(float(value))  # shortest exact round-trip form
    return str(value)


def _parse_cell(name: str, text: str):
    if text == "":
        return None
    if name in _FLOAT_COLUMNS:
        return float(text)
    if name in _INT_COLUMNS:
        return int(text)
    return text


def export_dataset(rows: list[AnalysisRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(DATASET_COLUMNS)
        for row in rows:
            writer.writerow(_format_cell(c, getattr(row, c))
                            for c in DATASET_COLUMNS)


def read_dataset(path: str) -> list[AnalysisRow]:
    rows: list[AnalysisRow] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = set(DATASET_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"dataset missing columns: {sorted(missing)}")
        for record in reader:
            rows.append(AnalysisRow(**{
                c: _parse_cell(c, record[c]) for c in DATASET_COLUMNS}))
    return rows


def load_dataset_or_derive(records: list[CodedRecord],
                           table: dict[tuple[str, str], MaxEntry] | None = None,
                           ) -> list[AnalysisRow]:
    if table is None:
        table = load_statute_max()
    return [derive_row(record, table) for record in records]

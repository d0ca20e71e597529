"""Data-quality lint over judgments and their coded records.

Three rule families: anonymization gaps (identifiers that should have been
redacted before publication), sentence-description defects (the operative
text contradicts itself or is incomplete), and legal-basis defects (citation
structure the coder could not resolve).  Rules toggle via the packaged
rules table or per run; every finding carries a short evidence excerpt.
"""

from __future__ import annotations

import re
from collections.abc import Iterable

from strafmaat import codebook, configfiles
from strafmaat.models import CodedRecord, JudgmentDocument, LintIssue

_EXCERPT_WIDTH = 40


def load_rule_toggles(path: str = "lint_rules.tsv") -> dict[str, bool]:
    toggles: dict[str, bool] = {}
    for row in configfiles.read_rows(path):
        if len(row) != 3 or row[2] not in ("on", "off"):
            raise ValueError(f"bad lint rule row: {row!r}")
        rule, _category, enabled = row
        toggles[rule] = enabled == "on"
    unknown = set(toggles) - set(RULE_CATEGORIES)
    if unknown:
        raise ValueError(f"unknown lint rules configured: {sorted(unknown)}")
    return toggles


def _excerpt(text: str, start: int, end: int) -> str:
    lo = max(0, start - _EXCERPT_WIDTH)
    hi = min(len(text), end + _EXCERPT_WIDTH)
    prefix = "..." if lo > 0 else ""
    suffix = "..." if hi < len(text) else ""
    return f"{prefix}{text[lo:hi]}{suffix}"


# ---------------------------------------------------------------------------
# anonymization rules (pattern scan over the normalized body text)

# 15-digit runs (with optional grouping) near an equipment keyword.
_IMEI_RE = re.compile(r"\b\d(?:[ .-]?\d){14}\b")
_IMEI_CONTEXT_RE = re.compile(r"\bimei\b|\btoestel", re.I)

# Dutch phone numbers: 06 mobiles and 0xx/0xxx area forms, 10 digits total.
_PHONE_RE = re.compile(
    r"\b(?:\+31[ -]?6|06)[ -]?\d{2}[ -]?\d{2}[ -]?\d{2}[ -]?\d{2}\b"
    r"|\b0\d{2,3}[ -]\d{6,7}\b")

# XX-99-XX style plates (three groups, mixed letters and digits).
_PLATE_RE = re.compile(
    r"\b(?:[A-Z]{2}-\d{2}-[A-Z]{2}|\d{2}-[A-Z]{2,3}-\d{1,2}|"
    r"[A-Z]{2}-\d{3}-[A-Z]|\d{2}-[A-Z]{2}-[A-Z]{2}|[A-Z]{1,2}-\d{2}-\d{2})\b")

# Base58 strings of coin-address length starting 1/3/bc1.
_COIN_RE = re.compile(
    r"\b(?:bc1[0-9a-z]{25,59}|[13][1-9A-HJ-NP-Za-km-z]{25,34})\b")

# Passport/ID document numbers: two letters + 7 alphanumerics, flagged only
# near a document keyword.
_PASSPORT_RE = re.compile(r"\b[A-NP-Z]{2}[A-NP-Z0-9]{6}\d\b")
_PASSPORT_CONTEXT_RE = re.compile(r"paspoort|identiteits|reisdocument", re.I)

# Street + house number ("Dorpsstraat 12") outside placeholder brackets.
_STREET_RE = re.compile(
    r"\b[A-Z][a-z]{2,}(?:straat|laan|weg|plein|kade|gracht|singel|dijk|hof)"
    r"\s+\d{1,4}[a-z]?\b")


def _luhn_ok(digits: str) -> bool:
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = int(ch)
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def _scan_imei(text: str) -> Iterable[tuple[str, int, int]]:
    for m in _IMEI_RE.finditer(text):
        window = text[max(0, m.start() - 60):m.end() + 60]
        digits = re.sub(r"\D", "", m.group(0))
        if _IMEI_CONTEXT_RE.search(window) and _luhn_ok(digits):
            yield m.group(0), m.start(), m.end()


def _scan_plain(pattern: re.Pattern, text: str):
    for m in pattern.finditer(text):
        yield m.group(0), m.start(), m.end()


def _scan_passport(text: str) -> Iterable[tuple[str, int, int]]:
    for m in _PASSPORT_RE.finditer(text):
        window = text[max(0, m.start() - 60):m.end() + 60]
        if _PASSPORT_CONTEXT_RE.search(window):
            yield m.group(0), m.start(), m.end()


_ANONYMIZATION_SCANNERS = {
    "imei_number": _scan_imei,
    "phone_number": lambda text: _scan_plain(_PHONE_RE, text),
    "license_plate": lambda text: _scan_plain(_PLATE_RE, text),
    "crypto_address": lambda text: _scan_plain(_COIN_RE, text),
    "passport_number": _scan_passport,
    "street_address": lambda text: _scan_plain(_STREET_RE, text),
}

RULE_CATEGORIES = {
    "imei_number": "A", "phone_number": "A", "license_plate": "A",
    "crypto_address": "A", "passport_number": "A", "street_address": "A",
    "number_word_mismatch": "S", "implausible_birth_year": "S",
    "missing_unit": "S",
    "unknown_article": "V", "missing_legal_basis": "V",
    "article_without_statute": "V", "statute_without_articles": "V",
}


# ---------------------------------------------------------------------------
# sentence-description rules

_BIRTH_YEAR_MIN_AGE = 12
_BIRTH_YEAR_MAX_AGE = 99


def _sentence_issues(record: CodedRecord) -> Iterable[tuple[str, str]]:
    for position, decision in enumerate(record.decisions, start=1):
        if decision.inconsistent:
            yield ("number_word_mismatch",
                   f"decision {position}: digits and spelled-out number "
                   f"disagree")
        if (decision.kind in ("incarceration", "community_service", "fine",
                              "measure")
                and decision.amount is not None and decision.unit is None):
            yield ("missing_unit",
                   f"decision amount {decision.amount:g} has no unit")
    if record.birth_year is not None and record.meta.date is not None:
        age = record.meta.date.year - record.birth_year
        if not _BIRTH_YEAR_MIN_AGE <= age <= _BIRTH_YEAR_MAX_AGE:
            yield ("implausible_birth_year",
                   f"birth year {record.birth_year} implies age {age}")


def _legal_basis_issues(record: CodedRecord,
                        table) -> Iterable[tuple[str, str]]:
    if not record.legal_basis:
        yield "missing_legal_basis", "no cited legal basis found"
        return
    for entry in record.legal_basis:
        if not entry.statute and entry.articles:
            yield ("article_without_statute",
                   "articles " + ", ".join(entry.articles)
                   + " attached to no statute")
        elif entry.statute and entry.recognized and not entry.articles:
            yield ("statute_without_articles",
                   f"statute {entry.statute} cited without articles")
    lookup = codebook.max_prison_months(record.legal_basis, table)
    for citation in lookup.unknown:
        yield "unknown_article", f"no maximum known for {citation}"


# ---------------------------------------------------------------------------
# driver


def lint_document(doc: JudgmentDocument, record: CodedRecord, table,
                  toggles: dict[str, bool]) -> list[LintIssue]:
    issues: list[LintIssue] = []
    text = doc.plain_text

    for rule, scanner in _ANONYMIZATION_SCANNERS.items():
        if not toggles.get(rule, False):
            continue
        for _value, start, end in scanner(text):
            issues.append(LintIssue(ecli=record.ecli, category="A", rule=rule,
                                    excerpt=_excerpt(text, start, end)))

    for rule, message in _sentence_issues(record):
        if toggles.get(rule, False):
            issues.append(LintIssue(ecli=record.ecli, category="S",
                                    rule=rule, excerpt=message))

    for rule, message in _legal_basis_issues(record, table):
        if toggles.get(rule, False):
            issues.append(LintIssue(ecli=record.ecli, category="V",
                                    rule=rule, excerpt=message))
    return issues


def apply_overrides(toggles: dict[str, bool], enable: Iterable[str],
                    disable: Iterable[str]) -> dict[str, bool]:
    out = dict(toggles)
    for rule in enable:
        if rule not in RULE_CATEGORIES:
            raise ValueError(f"unknown lint rule {rule!r}")
        out[rule] = True
    for rule in disable:
        if rule not in RULE_CATEGORIES:
            raise ValueError(f"unknown lint rule {rule!r}")
        out[rule] = False
    return out

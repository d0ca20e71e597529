"""Dual-coding worksheets and agreement tallies.

A worksheet holds the program's value and a blank manual column for three
checked variables (birth year, cited legal basis, first decision).  The
manual coder writes the value in the same syntax, or ``-`` when the
judgment genuinely lacks it; an empty manual cell means "not coded yet" and
comparison refuses it.  Tallies are two-by-two: found/missed by the program
against present/absent per the coder.
"""

from __future__ import annotations

import csv

from strafmaat.models import (
    DECISION_LABELS,
    UNIT_LABELS,
    CodedRecord,
    Decision,
    ReliabilityTally,
)

NOT_PRESENT = "-"  # manual-coder sign for "nothing in the judgment"

VARIABLES = ("birth_year", "legal_basis", "decision")

_COLUMNS = ("ecli", "court", "year",
            "program_birth_year", "program_legal_basis", "program_decision",
            "manual_birth_year", "manual_legal_basis", "manual_decision")

_LABEL_TO_KIND = {v: k for k, v in DECISION_LABELS.items()}
_LABEL_TO_UNIT = {v: k for k, v in UNIT_LABELS.items()}


# ---------------------------------------------------------------------------
# cell syntax


def format_legal_basis(record: CodedRecord) -> str:
    parts = []
    for entry in record.legal_basis:
        name = entry.statute or "?"
        parts.append(f"{name}:{','.join(entry.articles)}" if entry.articles
                     else name)
    return "|".join(parts)


def parse_legal_basis_cell(text: str) -> dict[str, frozenset[str]]:
    out: dict[str, set[str]] = {}
    for part in text.split("|"):
        part = part.strip()
        if not part:
            continue
        statute, _, articles = part.partition(":")
        bucket = out.setdefault(statute.strip(), set())
        bucket.update(a.strip().lower() for a in articles.split(",")
                      if a.strip())
    return {k: frozenset(v) for k, v in out.items()}


def format_decision(decision: Decision | None) -> str:
    if decision is None:
        return ""
    label = DECISION_LABELS[decision.kind]
    if decision.amount is None:
        return label
    amount = decision.amount
    amount_s = str(int(amount)) if float(amount).is_integer() else str(amount)
    unit = UNIT_LABELS.get(decision.unit, "") if decision.unit else ""
    return f"{label} {amount_s} {unit}".rstrip()


def parse_decision_cell(text: str) -> tuple[str, float | None, str | None]:
    parts = text.split()
    if not parts or parts[0] not in _LABEL_TO_KIND:
        raise ValueError(f"unreadable decision cell: {text!r}")
    kind = _LABEL_TO_KIND[parts[0]]
    amount = float(parts[1]) if len(parts) > 1 else None
    unit = _LABEL_TO_UNIT.get(parts[2]) if len(parts) > 2 else None
    return kind, amount, unit


# ---------------------------------------------------------------------------
# worksheet file


def build_worksheet(records: list[CodedRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(_COLUMNS)
        for record in records:
            meta = record.meta
            first = record.decisions[0] if record.decisions else None
            writer.writerow([
                record.ecli,
                meta.court or "",
                meta.date.year if meta.date else "",
                record.birth_year if record.birth_year is not None else "",
                format_legal_basis(record),
                format_decision(first),
                "", "", "",
            ])


def read_worksheet(path: str) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = set(_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"worksheet missing columns: {sorted(missing)}")
        return list(reader)


# ---------------------------------------------------------------------------
# comparison


def _values_match(variable: str, program: str, manual: str,
                  subset_ok: bool) -> bool:
    if variable == "birth_year":
        return program.strip() == manual.strip()
    if variable == "legal_basis":
        prog = parse_legal_basis_cell(program)
        man = parse_legal_basis_cell(manual)
        if subset_ok:
            return all(statute in man and articles <= man[statute]
                       for statute, articles in prog.items())
        return prog == man
    if variable == "decision":
        return parse_decision_cell(program) == parse_decision_cell(manual)
    raise ValueError(f"unknown worksheet variable {variable!r}")


def compare_worksheet(rows: list[dict[str, str]], *,
                      subset_ok: bool = False) -> dict[str, ReliabilityTally]:
    """Tally program-vs-manual agreement per variable.

    ``subset_ok`` relaxes the legal-basis match: the program's citations
    only need to be contained in the manual ones (manual coders often add
    provisions the chapter groups under one number range).
    """
    tallies = {v: {"tp": 0, "fp": 0, "fn": 0, "tn": 0} for v in VARIABLES}
    for row in rows:
        for variable in VARIABLES:
            program = (row[f"program_{variable}"] or "").strip()
            manual = (row[f"manual_{variable}"] or "").strip()
            if manual == "":
                raise ValueError(
                    f"{row['ecli']}: manual_{variable} not coded yet "
                    f"(write a value, or {NOT_PRESENT!r} for not present)")
            cell = tallies[variable]
            if program == "" and manual == NOT_PRESENT:
                cell["tn"] += 1
            elif program == "":
                cell["fn"] += 1
            elif manual == NOT_PRESENT:
                cell["fp"] += 1
            elif _values_match(variable, program, manual, subset_ok):
                cell["tp"] += 1
            else:
                cell["fp"] += 1
    return {v: ReliabilityTally(**c) for v, c in tallies.items()}

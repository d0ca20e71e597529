"""Coded-record JSON: one object per judgment, one line per object.

Field names and value labels follow the published coding sheet for this
corpus (Dutch keys, ``DD-MM-YYYY`` dates, lowercase singular units).
Fields this coder adds beyond that sheet carry an ``X_`` prefix, as does
the per-decision consistency flag.  Set-valued fields are emitted sorted so
records are byte-stable; list-valued fields keep extraction order.
"""

from __future__ import annotations

import datetime as dt
import json
from functools import lru_cache

import jsonschema

from strafmaat import configfiles
from strafmaat.models import (
    DECISION_LABELS,
    UNIT_LABELS,
    CodedRecord,
    Decision,
    JudgmentMeta,
    LegalBasisEntry,
)

_LABEL_TO_KIND = {v: k for k, v in DECISION_LABELS.items()}
_LABEL_TO_UNIT = {v: k for k, v in UNIT_LABELS.items()}
_COUNTRY_LABELS = {"domestic": "Nederland", "foreign": "buitenland"}
_SEX_LABELS = {"male": "man", "female": "vrouw"}
_RECIDIVISM_LABELS = {"first": "Eerste keer", "repeat": "Recidivist"}

_LABEL_TO_COUNTRY = {v: k for k, v in _COUNTRY_LABELS.items()}
_LABEL_TO_SEX = {v: k for k, v in _SEX_LABELS.items()}
_LABEL_TO_RECIDIVISM = {v: k for k, v in _RECIDIVISM_LABELS.items()}

DATE_FORMAT = "%d-%m-%Y"


def _decision_to_json(decision: Decision) -> dict:
    obj: dict = {"soort": DECISION_LABELS[decision.kind]}
    if decision.amount is not None:
        amount = decision.amount
        obj["aantal"] = int(amount) if float(amount).is_integer() else amount
    if decision.unit is not None:
        obj["eenheid"] = UNIT_LABELS[decision.unit]
    if decision.inconsistent:
        obj["X_afwijkend"] = True
    return obj


def record_to_json(record: CodedRecord) -> dict:
    meta = record.meta
    obj = {
        "ECLI": meta.ecli,
        "Datum_uitspraak": (meta.date.strftime(DATE_FORMAT)
                            if meta.date else None),
        "Instelling": meta.court,
        "Zaaknummer": meta.case_number,
        "Type": meta.doc_type,
        "Locatie": meta.location,
        "Rechtsgebieden": list(meta.jurisdictions),
        "Taal": meta.language,
        "Inhoudsindicatie": meta.press_release,
        "Geboortejaar": record.birth_year,
        "Geboorteland": (_COUNTRY_LABELS[record.birth_country]
                         if record.birth_country else None),
        "Geslacht": _SEX_LABELS[record.sex],
        "Onderzoek": list(record.investigations),
        "Expertise_verdachte": sorted(record.special_terms),
        "Internet": sorted(record.basic_terms),
        "Expertise_rechtbank": sorted(record.prosecution_expertise),
        "Opsporing": sorted(record.detection_methods),
        "Verdachten_aantal": record.co_offender_count + 1,
        "Recidive": (_RECIDIVISM_LABELS[record.recidivism]
                     if record.recidivism else None),
        "Wettelijke_voorschriften": [
            [entry.statute, *entry.articles] for entry in record.legal_basis],
        "Beslissing": [_decision_to_json(d) for d in record.decisions],
    }
    # extension fields beyond the published record shape: only when they
    # carry a signal, like X_afwijkend on decisions
    if record.victim_count is not None:
        obj["X_Slachtoffers_aantal"] = record.victim_count
    if record.guidelines_mentioned:
        obj["X_Richtlijnen"] = True
    if record.large_scale_mentioned:
        obj["X_Grootschalig"] = True
    return obj


def json_to_record(obj: dict) -> CodedRecord:
    """Rebuild the analysis-relevant view of a record from its JSON form.

    Document text is not stored in records, so the result carries empty
    offsets/headings; everything the codebook and reports read is restored.
    """
    date = (dt.datetime.strptime(obj["Datum_uitspraak"], DATE_FORMAT).date()
            if obj.get("Datum_uitspraak") else None)
    meta = JudgmentMeta(
        ecli=obj["ECLI"],
        date=date,
        court=obj.get("Instelling"),
        case_number=obj.get("Zaaknummer"),
        doc_type=obj.get("Type"),
        jurisdictions=list(obj.get("Rechtsgebieden") or ()),
        location=obj.get("Locatie"),
        language=obj.get("Taal"),
        press_release=obj.get("Inhoudsindicatie"),
    )
    legal_basis = []
    for parts in obj.get("Wettelijke_voorschriften") or ():
        statute, articles = parts[0], list(parts[1:])
        legal_basis.append(LegalBasisEntry(
            statute=statute, articles=articles, recognized=bool(statute)))
    decisions = []
    for item in obj.get("Beslissing") or ():
        amount = item.get("aantal")
        decisions.append(Decision(
            kind=_LABEL_TO_KIND[item["soort"]],
            amount=float(amount) if amount is not None else None,
            unit=(_LABEL_TO_UNIT[item["eenheid"]]
                  if item.get("eenheid") else None),
            inconsistent=bool(item.get("X_afwijkend", False)),
        ))
    country = obj.get("Geboorteland")
    recidivism = obj.get("Recidive")
    return CodedRecord(
        meta=meta,
        birth_year=obj.get("Geboortejaar"),
        birth_country=_LABEL_TO_COUNTRY[country] if country else None,
        sex=_LABEL_TO_SEX[obj["Geslacht"]],
        recidivism=_LABEL_TO_RECIDIVISM[recidivism] if recidivism else None,
        victim_count=obj.get("X_Slachtoffers_aantal"),
        co_offender_count=int(obj["Verdachten_aantal"]) - 1,
        investigations=list(obj.get("Onderzoek") or ()),
        basic_terms=set(obj.get("Internet") or ()),
        special_terms=set(obj.get("Expertise_verdachte") or ()),
        prosecution_expertise=set(obj.get("Expertise_rechtbank") or ()),
        detection_methods=set(obj.get("Opsporing") or ()),
        guidelines_mentioned=bool(obj.get("X_Richtlijnen", False)),
        large_scale_mentioned=bool(obj.get("X_Grootschalig", False)),
        legal_basis=legal_basis,
        decisions=decisions,
    )


# ---------------------------------------------------------------------------
# schema validation and line-oriented files


@lru_cache(maxsize=1)
def _schema() -> dict:
    return json.loads(configfiles.read_data_text("record.schema.json"))


def validate_record(obj: dict) -> None:
    """Raise ``jsonschema.ValidationError`` when a record object is off-shape."""
    jsonschema.validate(obj, _schema())


def dumps_record(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))


def write_records(objs: list[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for obj in objs:
            handle.write(dumps_record(obj))
            handle.write("\n")


def read_records(path: str) -> list[dict]:
    out: list[dict] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out

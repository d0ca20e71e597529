"""Shared fixtures: parsed judgment fixtures, reference codings, and a
seeded generator of regression-ready rows with a known data-generating
process."""

from __future__ import annotations

import math
import random
from pathlib import Path

import pytest

from strafmaat import codebook, extract, ingest
from strafmaat.models import (
    AGE_BUCKETS,
    MAX_BUCKETS,
    OFFENCE_CLASSES,
    AnalysisRow,
)

FIXTURE_DIR = Path(__file__).parent / "fixtures"
LINT_FIXTURE_DIR = FIXTURE_DIR / "lint"

APPENDIX_ECLI = "ECLI:NL:RBMNE:2014:4790"
APPENDIX_XML = FIXTURE_DIR / "ECLI_NL_RBMNE_2014_4790.xml"
METADATA_ONLY_XML = FIXTURE_DIR / "ECLI_NL_RBAMS_2015_2001.xml"
JUVENILE_XML = FIXTURE_DIR / "ECLI_NL_RBROT_2016_2002.xml"
HEADING_FALLBACK_XML = FIXTURE_DIR / "ECLI_NL_GHDHA_2019_2003.xml"

# Reference coding of ECLI:NL:RBMNE:2014:4790.  The XML fixture reconstructs
# the judgment this record was coded from, so coding the fixture must
# reproduce the record.  The four dictionary-hit fields are compared as sets:
# their reference ordering is the coder's found order, while records emit
# them sorted for byte-stable output.
REFERENCE_PRESS = (
    "De rechtbank Midden-Nederland veroordeelt vijf verdachten tot "
    "gevangenisstraffen voor onder meer het faciliteren en bevorderen van "
    "drugshandel via online marktplaatsen. Via het beveiligde "
    "[naam]-netwerk maakten verdachten het mogelijk om op de website "
    "[naam], en later op de website [naam], op anonieme wijze drugs te "
    "kopen en te verkopen, ook buiten Nederland. De rechtbank rekent het "
    "de verdachten zwaar aan dat zij gedurende een langere periode bewust "
    "gedragingen hebben verricht die de samenleving zeer ondermijnen. Drie "
    "verdachten waren actief als moderators op [naam]. Door hun aandeel in "
    "de website hebben ze de handel van verdovende middelen bevorderd. "
    "Deze verdachten verkochten zelf ook drugs via de site. Verdachte en "
    "een 30-jarige Enschedeer hebben naast hun werkzaamheden als moderator "
    "voor [naam], ook de marktplaats [naam] laten ontwikkelen. De "
    "rechtbank veroordeelt verdachte tot een gevangenisstraf van 6 jaar"
)

APPENDIX_REFERENCE = {
    "ECLI": APPENDIX_ECLI,
    "Datum_uitspraak": "09-10-2014",
    "Instelling": "Rechtbank Midden-Nederland",
    "Zaaknummer": "16/659159-14 (P)",
    "Type": "Uitspraak",
    "Locatie": "Utrecht",
    "Rechtsgebieden": ["Strafrecht"],
    "Taal": "nl",
    "Inhoudsindicatie": REFERENCE_PRESS,
    "Geboortejaar": 1992,
    "Geboorteland": "buitenland",
    "Geslacht": "man",
    "Onderzoek": ["Commodore"],
    "Expertise_verdachte": ["Crypto_currency", "Market", "Wallet"],
    "Internet": ["Communication", "Company", "Generic", "Hardware", "Mail",
                 "Mobile", "Phone"],
    "Expertise_rechtbank": ["NFI"],
    "Opsporing": ["Infiltratie", "Pseudo-koop", "Tap-opname", "Aanhouding"],
    "Verdachten_aantal": 5,
    "Recidive": "Eerste keer",
    "Wettelijke_voorschriften": [["Sr", "33", "33a", "47", "57"],
                                 ["Opw", "10", "10a"]],
    "Beslissing": [{"soort": "gevangenisstraf", "aantal": 6,
                    "eenheid": "jaar"}],
}
SET_VALUED_FIELDS = ("Expertise_verdachte", "Internet",
                     "Expertise_rechtbank", "Opsporing")


@pytest.fixture(scope="session")
def appendix_doc():
    return ingest.parse_judgment_file(APPENDIX_XML)


@pytest.fixture(scope="session")
def appendix_record(appendix_doc):
    return extract.code_judgment(appendix_doc)


@pytest.fixture(scope="session")
def heading_doc():
    return ingest.parse_judgment_file(HEADING_FALLBACK_XML)


@pytest.fixture(scope="session")
def statute_table():
    return codebook.load_statute_max()


# ---------------------------------------------------------------------------
# judgment XML builder for targeted extraction tests

_XML_SHELL = """<?xml version="1.0" encoding="utf-8"?>
<open-rechtspraak xmlns="http://www.rechtspraak.nl/schema/rechtspraak-1.0"
    xmlns:dcterms="http://purl.org/dc/terms/"
    xmlns:psi="http://psi.rechtspraak.nl/"
    xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">
  <rdf:RDF>
    <rdf:Description>
      <dcterms:identifier>{ecli}</dcterms:identifier>
      <dcterms:date>{date}</dcterms:date>
      <dcterms:creator>{court}</dcterms:creator>
      <dcterms:type>Uitspraak</dcterms:type>
      <dcterms:subject>Strafrecht</dcterms:subject>
      <dcterms:language>nl</dcterms:language>
    </rdf:Description>
  </rdf:RDF>
  {body}
</open-rechtspraak>
"""


def make_doc(body_xml: str, *, ecli: str = "ECLI:NL:RBTST:2020:1",
             date: str = "2020-06-15", court: str = "Rechtbank Test"):
    """Parse a minimal judgment document around the given body markup.

    ``body_xml`` is the content of the <uitspraak> element, e.g. a couple of
    <section> or <para> elements.
    """
    xml = _XML_SHELL.format(ecli=ecli, date=date, court=court,
                            body=f"<uitspraak>{body_xml}</uitspraak>")
    return ingest.parse_judgment_xml(xml.encode("utf-8"))


def section(number: int, title: str, *paras: str) -> str:
    content = "".join(f"<para>{p}</para>" for p in paras)
    return (f"<section><title><nr>{number}</nr> {title}</title>"
            f"{content}</section>")


# ---------------------------------------------------------------------------
# synthetic regression rows with a known generating process

_BUCKET_MONTHS = {"<=71": 48.0, "72-95": 84.0, "96-107": 102.0,
                  "108-119": 114.0, "120-143": 132.0, "144-179": 160.0,
                  "180-215": 200.0, ">=216": 240.0}


def make_rows(n: int, seed: int, effects: dict[str, float] | None = None,
              sigma: float = 0.35) -> list[AnalysisRow]:
    """Listwise-complete analysis rows drawn from a linear model.

    ``effects`` maps design-column names (as produced by the design builder:
    "const", "max_<bucket>", "class_<class>", "n_offences", "age_<bucket>",
    plain flag names) to true coefficients of the log-months response;
    unnamed columns have a true coefficient of zero.
    """
    effects = effects or {"const": 3.0}
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        max_bucket = rng.choice(MAX_BUCKETS)
        offence_class = rng.choice(OFFENCE_CLASSES)
        age_bucket = rng.choice(AGE_BUCKETS)
        values = {
            "const": 1.0,
            f"max_{max_bucket}": 1.0,
            f"class_{offence_class}": 1.0,
            f"age_{age_bucket}": 1.0,
            "n_offences": float(rng.randint(1, 6)),
            "guidelines": float(rng.random() < 0.5),
            "prosecution_expertise": float(rng.random() < 0.5),
            "born_abroad": float(rng.random() < 0.3),
            "female": float(rng.random() < 0.2),
            "repeat_offender": float(rng.random() < 0.5),
            "multiple_victims": float(rng.random() < 0.4),
            "special_skills": float(rng.random() < 0.3),
        }
        values["basic_skills"] = (0.0 if values["special_skills"]
                                  else float(rng.random() < 0.5))
        ln_months = sum(b * values.get(name, 0.0)
                        for name, b in effects.items())
        ln_months += rng.gauss(0.0, sigma)
        age_low = {"18-20": 18, "21-30": 21, "31-40": 31,
                   "41-50": 41, ">=51": 51}[age_bucket]
        rows.append(AnalysisRow(
            ecli=f"ECLI:NL:RBTST:2019:{i + 1}",
            court=f"Rechtbank {'ABCDEFGHIJK'[i % 11]}",
            year=2015 + i % 6,
            decision_type="incarceration",
            prison_months=math.exp(ln_months),
            ln_prison_months=ln_months,
            max_months=_BUCKET_MONTHS[max_bucket],
            max_bucket=max_bucket,
            offence_class=offence_class,
            n_offences=int(values["n_offences"]),
            guidelines=int(values["guidelines"]),
            prosecution_expertise=int(values["prosecution_expertise"]),
            age=age_low + 2,
            age_bucket=age_bucket,
            born_abroad=int(values["born_abroad"]),
            female=int(values["female"]),
            repeat_offender=int(values["repeat_offender"]),
            multiple_victims=int(values["multiple_victims"]),
            basic_skills=int(values["basic_skills"]),
            special_skills=int(values["special_skills"]),
            large_scale=int(values["special_skills"] and rng.random() < 0.8),
        ))
    return rows

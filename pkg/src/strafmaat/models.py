"""Shared domain types for the judgment-coding pipeline."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field

import numpy as np

# Chapter kinds assigned by the structure segmenter.  Headings that match no
# synonym-table entry map to "other".
CHAPTER_KINDS = (
    "legal_basis",
    "decision",
    "evidence",
    "indictment",
    "personal_circumstances",
    "sentencing_motivation",
    "other",
)

# Decision families recognized in the decision chapter.
DECISION_KINDS = (
    "measure",
    "incarceration",
    "community_service",
    "fine",
    "acquittal",
    "procedural",
)

# Canonical quantity units.
UNITS = ("days", "weeks", "months", "years", "hours", "euros")
DURATION_UNITS = ("days", "weeks", "months", "years")

# Dutch labels used in the JSON record output.
DECISION_LABELS = {
    "measure": "maatregel",
    "incarceration": "gevangenisstraf",
    "community_service": "taakstraf",
    "fine": "geldboete",
    "acquittal": "vrijspraak",
    "procedural": "procedureel",
}
UNIT_LABELS = {
    "days": "dag",
    "weeks": "week",
    "months": "maand",
    "years": "jaar",
    "hours": "uur",
    "euros": "euro",
}

# Offence classes of the statutory-maximum table (national crime-statistics
# standard grouping; sexual offences and trafficking count as violent).
OFFENCE_CLASSES = (
    "property",
    "violent",
    "public_order",
    "other_penal",
    "road_traffic",
    "drugs",
    "weapons",
    "other_criminal",
)

# Dummy-coded bucket labels.  The reference levels ("108-119", "21-30",
# "violent") are dropped when building regression designs.
MAX_BUCKETS = ("<=71", "72-95", "96-107", "108-119", "120-143", "144-179",
               "180-215", ">=216")
MAX_BUCKET_REF = "108-119"
AGE_BUCKETS = ("18-20", "21-30", "31-40", "41-50", ">=51")
AGE_BUCKET_REF = "21-30"
OFFENCE_CLASS_REF = "violent"


@dataclass
class Heading:
    """A potential chapter heading found in the body markup."""

    text: str
    start: int
    end: int
    tag: str  # "title" | "bridgehead" | "emphasis"


@dataclass
class SectionSpan:
    """A section element's extent within the normalized plain text."""

    title: str | None
    start: int
    end: int
    depth: int


@dataclass
class JudgmentMeta:
    """Metadata block of one published judgment."""

    ecli: str
    date: dt.date | None = None
    court: str | None = None
    case_number: str | None = None
    doc_type: str | None = None  # raw value, e.g. "Uitspraak" / "Conclusie"
    jurisdictions: list[str] = field(default_factory=list)
    location: str | None = None
    language: str | None = None
    press_release: str | None = None  # normalized summary text


@dataclass
class JudgmentDocument:
    """A parsed judgment: metadata plus normalized body text and structure."""

    meta: JudgmentMeta
    plain_text: str = ""
    headings: list[Heading] = field(default_factory=list)
    sections: list[SectionSpan] = field(default_factory=list)
    source_path: str | None = None

    @property
    def is_metadata_only(self) -> bool:
        return not self.plain_text


@dataclass
class Chapter:
    """One chapter of the judgment body."""

    kind: str  # one of CHAPTER_KINDS
    title: str | None
    start: int
    end: int
    text: str


@dataclass
class Decision:
    """One operative decision found in the decision chapter."""

    kind: str  # one of DECISION_KINDS
    amount: float | None = None
    unit: str | None = None  # one of UNITS
    inconsistent: bool = False  # digit and written-out amount disagreed


@dataclass
class LegalBasisEntry:
    """Articles attached to one statute in the legal-basis chapter."""

    statute: str  # canonical abbreviation, verbatim text, or "" if missing
    articles: list[str] = field(default_factory=list)
    recognized: bool = True  # False: statute missing or not in config


@dataclass
class CodedRecord:
    """Structured coding of one judgment."""

    meta: JudgmentMeta
    birth_year: int | None = None
    birth_country: str | None = None  # "domestic" | "foreign" | None
    sex: str = "male"  # "male" | "female"
    recidivism: str | None = None  # "first" | "repeat" | None
    victim_count: int | None = None
    co_offender_count: int = 0
    investigations: list[str] = field(default_factory=list)
    basic_terms: set[str] = field(default_factory=set)
    special_terms: set[str] = field(default_factory=set)
    prosecution_expertise: set[str] = field(default_factory=set)
    detection_methods: set[str] = field(default_factory=set)
    guidelines_mentioned: bool = False
    large_scale_mentioned: bool = False
    legal_basis: list[LegalBasisEntry] = field(default_factory=list)
    decisions: list[Decision] = field(default_factory=list)

    @property
    def ecli(self) -> str:
        return self.meta.ecli


@dataclass
class AnalysisRow:
    """One regression-ready dataset row derived from a coded record."""

    ecli: str
    court: str | None = None
    year: int | None = None
    decision_type: str | None = None
    prison_months: float | None = None
    ln_prison_months: float | None = None
    max_months: float | None = None
    max_bucket: str | None = None
    offence_class: str | None = None
    n_offences: int | None = None
    guidelines: int = 0
    prosecution_expertise: int = 0
    age: int | None = None
    age_bucket: str | None = None
    born_abroad: int | None = None
    female: int = 0
    repeat_offender: int | None = None
    multiple_victims: int | None = None
    basic_skills: int = 0
    special_skills: int = 0
    large_scale: int = 0


@dataclass
class ModelFit:
    """Ordinary-least-squares fit summary."""

    names: list[str]
    coef: np.ndarray
    se: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    r2: float
    adj_r2: float
    f_stat: float
    f_df: tuple[int, int]
    f_p: float
    n: int
    sigma2: float
    residuals: np.ndarray
    fitted: np.ndarray


@dataclass
class ReliabilityTally:
    """2x2 agreement counts between program coding and manual coding."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass
class LintIssue:
    """One data-quality finding on a judgment."""

    ecli: str
    category: str  # "A" anonymization | "S" sentence | "V" legal basis
    rule: str
    excerpt: str

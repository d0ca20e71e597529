"""Extraction engine: turn a segmented judgment into a coded record.

Every matcher works on normalized text (diacritics folded, single spaces) so
the shipped dictionaries and phrase lists are plain ASCII.  Dictionary terms
match case-insensitively on word boundaries; capitalization is only used
where it carries signal (investigation names, verbatim statute capture).
"""

from __future__ import annotations

import re
from functools import lru_cache

from strafmaat import configfiles, numerals, segment
from strafmaat.models import (
    Chapter,
    CodedRecord,
    Decision,
    JudgmentDocument,
    LegalBasisEntry,
)

# ---------------------------------------------------------------------------
# dictionary plumbing


def compile_phrase_pattern(phrases: list[str]) -> re.Pattern:
    """One word-bounded, case-insensitive alternation; longest phrase wins."""
    ordered = sorted(phrases, key=len, reverse=True)
    return re.compile(
        r"\b(?:" + "|".join(re.escape(p) for p in ordered) + r")\b",
        re.IGNORECASE,
    )


@lru_cache(maxsize=None)
def _dictionary_patterns(file_name: str) -> dict[str, re.Pattern]:
    table = configfiles.load_term_dictionary(file_name)
    return {cat: compile_phrase_pattern(terms) for cat, terms in table.items()}


def basic_term_patterns() -> dict[str, re.Pattern]:
    return _dictionary_patterns("basic_terms.tsv")


def special_term_patterns() -> dict[str, re.Pattern]:
    return _dictionary_patterns("special_terms.tsv")


def expertise_patterns() -> dict[str, re.Pattern]:
    return _dictionary_patterns("expertise_terms.tsv")


def detection_patterns() -> dict[str, re.Pattern]:
    return _dictionary_patterns("detection_terms.tsv")


def juvenile_marker_phrases() -> list[str]:
    return configfiles.load_phrases("juvenile_markers.tsv")


@lru_cache(maxsize=None)
def _phrase_pattern_from_file(file_name: str) -> re.Pattern:
    return compile_phrase_pattern(configfiles.load_phrases(file_name))


def match_categories(text: str, patterns: dict[str, re.Pattern]) -> set[str]:
    """Categories whose term list hits the text."""
    return {cat for cat, pat in patterns.items() if pat.search(text)}


# ---------------------------------------------------------------------------
# offender profile

_BIRTH_WINDOW_RE = re.compile(r"\bgeboren\b(?P<window>[^.;]{0,160})", re.I)
_YEAR_RE = re.compile(r"\b(1[89]\d\d|20[0-2]\d)\b")
_AGE_RE = re.compile(r"\b(?:(\d{1,2})|([a-z]+))[ -]?jarige\b", re.I)


@lru_cache(maxsize=None)
def _country_scopes() -> tuple[dict[str, str], re.Pattern]:
    pairs = configfiles.load_pairs("countries.tsv")
    scope = {name: sc for name, sc in pairs}
    return scope, compile_phrase_pattern([name for name, _ in pairs])


def extract_birth(doc: JudgmentDocument) -> tuple[int | None, str | None]:
    """(birth_year, birth_country) from birth statements, else age phrases.

    Country defaults to domestic when there is a birth statement with no
    foreign marker and is missing without any birth statement.  An age
    phrase ("22-jarige", "tweeentwintigjarige") substitutes for a missing
    birth year using the decision year; the press release is searched last.
    """
    scope, country_re = _country_scopes()
    text = _scan_text(doc)

    birth_year = None
    birth_country = None
    m = _BIRTH_WINDOW_RE.search(text)
    if m:
        window = m.group("window")
        year_match = _YEAR_RE.search(window)
        if year_match:
            birth_year = int(year_match.group(0))
        birth_country = "domestic"
        for cm in country_re.finditer(window.lower()):
            if scope.get(cm.group(0).lower()) == "foreign":
                birth_country = "foreign"
                break

    if birth_year is None and doc.meta.date is not None:
        # skip non-numeric "-jarige" words such as "minderjarige"
        for am in _AGE_RE.finditer(text):
            age = (int(am.group(1)) if am.group(1)
                   else numerals.parse_number_word(am.group(2)))
            if age is not None and 12 <= age <= 99:
                birth_year = doc.meta.date.year - age
                break

    return birth_year, birth_country


def extract_sex(doc: JudgmentDocument) -> str:
    """"female" on explicit feminine fragments, "male" otherwise."""
    pattern = _phrase_pattern_from_file("female_markers.tsv")
    return "female" if pattern.search(_scan_text(doc)) else "male"


def _scan_text(doc: JudgmentDocument) -> str:
    press = doc.meta.press_release or ""
    return f"{doc.plain_text} {press}" if press else doc.plain_text


# ---------------------------------------------------------------------------
# criminal history, victims, co-offenders

_PLACEHOLDER_RES = {
    "victim": re.compile(r"\[\s*slachtoffer(?:\s+(\d+))?\s*\]", re.I),
    "co_offender": re.compile(r"\[\s*medeverdachte(?:\s+(\d+))?\s*\]", re.I),
}


@lru_cache(maxsize=None)
def _recidivism_patterns() -> list[tuple[re.Pattern, str]]:
    rows = configfiles.load_pairs("recidivism_markers.tsv")
    firsts = [p for p, label in rows if label == "first"]
    repeats = [p for p, label in rows if label == "repeat"]
    return [
        (compile_phrase_pattern(firsts), "first"),
        (compile_phrase_pattern(repeats), "repeat"),
    ]


def extract_recidivism(doc: JudgmentDocument) -> str | None:
    """"first" / "repeat" from criminal-record phrases, None when silent.

    First-offender phrases are checked before repeat phrases because the
    negated forms contain the repeat forms ("niet eerder veroordeeld").
    """
    text = _scan_text(doc)
    for pattern, label in _recidivism_patterns():
        if pattern.search(text):
            return label
    return None


def count_placeholders(doc: JudgmentDocument, which: str) -> int | None:
    """Highest anonymization-placeholder index; unnumbered counts as 1."""
    best = None
    for m in _PLACEHOLDER_RES[which].finditer(_scan_text(doc)):
        index = int(m.group(1)) if m.group(1) else 1
        best = index if best is None else max(best, index)
    return best


# ---------------------------------------------------------------------------
# prosecution: investigation names, expertise, detection, guidelines

_INVESTIGATION_RE = re.compile(
    r"\b[Oo]nderzoek\s+([A-Z][A-Za-z0-9-]{2,}|\d{1,2}[A-Z][A-Za-z0-9-]*)\b"
)
_INVESTIGATION_STOPWORDS = {
    "De", "Het", "Een", "In", "Op", "Naar", "Van", "Ter", "Tegen", "Door",
    "Aan", "Bij", "Uit", "Als", "Met", "Wetboek", "Strafrecht",
}


def extract_investigations(doc: JudgmentDocument) -> list[str]:
    """Named police investigations ("onderzoek Commodore"), found order."""
    names: list[str] = []
    for m in _INVESTIGATION_RE.finditer(_scan_text(doc)):
        name = m.group(1)
        if name in _INVESTIGATION_STOPWORDS:
            continue
        if name not in names:
            names.append(name)
    return names


def guidelines_mentioned(doc: JudgmentDocument) -> bool:
    pattern = _phrase_pattern_from_file("guideline_terms.tsv")
    return bool(pattern.search(_scan_text(doc).lower()))


_LARGE_SCALE_RE = re.compile(r"\bgrootschalig\w*", re.I)


def large_scale_mentioned(doc: JudgmentDocument) -> bool:
    return bool(_LARGE_SCALE_RE.search(_scan_text(doc)))


# ---------------------------------------------------------------------------
# legal basis

_ARTICLE_TOKEN_RE = re.compile(r"\b(\d{1,5})([a-z]{1,9})?\b")
_RUN_GAP_RE = re.compile(
    r"[\s,]*(?:\b(?:en|t/m|tot en met|jo|juncto|alsmede)\b\.?[\s,]*)*",
    re.I,
)
_BACKWARD_LINK_RE = re.compile(r"[\s,]*(?:van\s+(?:de|het)\s+)?", re.I)
_FORWARD_LINK_RE = re.compile(r"[\s,:]*(?:artt?\.?|artikel(?:en)?)?\s*", re.I)
_UNKNOWN_STATUTE_RE = re.compile(
    r"[\s,]*van\s+(?:de|het)\s+(?P<name>[A-Z][^,;.()]{2,80}?)(?=[,;.()]|\s+en\s+|$)"
)
_YEAR_TOKEN_RE = re.compile(r"(19|20)\d\d$")
# chapter-number prefix on the heading that opens the chapter text
_LEADING_NUMBERING_RE = re.compile(r"^\s*(?:(?:\d+|[ivxl]+)[.):]?\s+)+", re.I)


@lru_cache(maxsize=None)
def _statute_tables() -> tuple[re.Pattern, dict[str, str]]:
    rows = configfiles.read_rows("statutes.tsv")
    canon_of: dict[str, str] = {}
    surfaces: list[str] = []
    for canonical, *forms in rows:
        for form in forms:
            canon_of[form.lower()] = canonical
            surfaces.append(form)
    return compile_phrase_pattern(surfaces), canon_of


def extract_legal_basis(chapters: list[Chapter]) -> list[LegalBasisEntry]:
    """Statutes with their cited articles from the legal-basis chapters.

    Handles both citation orders ("Sr art. 33, 33a" and "artikelen 10 en 10a
    van de Opiumwet"), keeps suffix letters and unknown article numbers
    verbatim, captures unrecognized statutes verbatim with a flag, and
    preserves found order.  Articles with no attachable statute land in an
    entry with an empty statute name.
    """
    entries: list[LegalBasisEntry] = []
    for chapter in chapters:
        if chapter.kind == "legal_basis":
            # the chapter text opens with its own heading; a section number
            # there ("6. Toepasselijke wettelijke voorschriften") would read
            # as an orphan article
            text = _LEADING_NUMBERING_RE.sub("", chapter.text)
            _parse_legal_basis_text(text, entries)
    return _merge_entries(entries)


def _parse_legal_basis_text(text: str, entries: list[LegalBasisEntry]) -> None:
    statute_re, canon_of = _statute_tables()
    statutes = [
        (m.start(), m.end(), canon_of[m.group(0).lower()])
        for m in statute_re.finditer(text)
    ]
    covered = [(s, e) for s, e, _ in statutes]

    tokens = []
    for m in _ARTICLE_TOKEN_RE.finditer(text):
        if any(s <= m.start() < e for s, e in covered):
            continue  # part of a statute name ("wegenverkeerswet 1994")
        if not m.group(2) and _YEAR_TOKEN_RE.fullmatch(m.group(1)):
            continue  # bare year
        tokens.append((m.start(), m.end(), m.group(1) + (m.group(2) or "")))

    runs: list[tuple[int, int, list[str]]] = []
    for start, end, article in tokens:
        if runs and _RUN_GAP_RE.fullmatch(text, runs[-1][1], start):
            runs[-1] = (runs[-1][0], end, runs[-1][2] + [article])
        else:
            runs.append((start, end, [article]))

    claimed: set[int] = set()  # statute indexes hit by backward links
    for run_start, run_end, articles in runs:
        entry = _attach_run(text, statutes, claimed, run_start, run_end,
                            articles)
        entries.append(entry)

    for idx, (_, _, canonical) in enumerate(statutes):
        if idx in claimed:
            continue
        if any(e.statute == canonical and e.articles for e in entries):
            continue
        entries.append(LegalBasisEntry(statute=canonical, articles=[],
                                       recognized=True))


def _attach_run(text: str, statutes, claimed: set[int], run_start: int,
                run_end: int, articles: list[str]) -> LegalBasisEntry:
    # backward: "33, 33a van het Wetboek van Strafrecht" / "27a Sr"
    for idx, (s_start, _, canonical) in enumerate(statutes):
        if s_start >= run_end:
            if _BACKWARD_LINK_RE.fullmatch(text, run_end, s_start):
                claimed.add(idx)
                return LegalBasisEntry(statute=canonical, articles=articles)
            break
    # forward: "Sr art. 33, 33a"
    preceding = [(i, s) for i, s in enumerate(statutes) if s[1] <= run_start]
    if preceding:
        idx, (_, s_end, canonical) = preceding[-1]
        if _FORWARD_LINK_RE.fullmatch(text, s_end, run_start):
            return LegalBasisEntry(statute=canonical, articles=articles)
    # unrecognized statute, captured verbatim
    m = _UNKNOWN_STATUTE_RE.match(text, run_end)
    if m:
        return LegalBasisEntry(statute=m.group("name").strip(),
                               articles=articles, recognized=False)
    return LegalBasisEntry(statute="", articles=articles, recognized=False)


def _merge_entries(entries: list[LegalBasisEntry]) -> list[LegalBasisEntry]:
    merged: list[LegalBasisEntry] = []
    by_statute: dict[str, LegalBasisEntry] = {}
    for entry in entries:
        key = entry.statute
        if key and key in by_statute:
            target = by_statute[key]
            for article in entry.articles:
                if article not in target.articles:
                    target.articles.append(article)
        else:
            merged.append(entry)
            if key:
                by_statute[key] = entry
    return merged


# ---------------------------------------------------------------------------
# decisions

# Family patterns; a segment is classified by its earliest match.  Substring
# traps are handled by phrase length and lookbehinds: "geen straf of
# maatregel" starts before its embedded "maatregel", replacement/pre-trial
# detention never matches because "hechtenis" requires the absence of
# "voorlopige "/"vervangende " right before it.
_DECISION_PATTERNS: list[tuple[str, re.Pattern]] = [
    ("acquittal", re.compile(
        r"spreekt\s+(?:de\s+)?verdachte[^.;]{0,40}?\bvrij\b|vrijspraak|"
        r"verklaart\s+niet\s+bewezen|niet\s+wettig\s+en\s+overtuigend\s+bewezen|"
        r"ontslaat\s+(?:de\s+)?verdachte\s+van\s+alle\s+rechtsvervolging|"
        r"ontslag\s+van\s+alle\s+rechtsvervolging|geen\s+straf\s+of\s+maatregel")),
    ("procedural", re.compile(
        r"uitlevering[^.;]{0,60}?toelaatbaar|toelaatbaar[^.;]{0,60}?uitlevering|"
        r"heropent\s+(?:het\s+onderzoek|de\s+behandeling)|"
        r"heropening\s+van\s+het\s+onderzoek|verwijst\s+de\s+zaak|"
        r"verklaart\s+zich\s+onbevoegd|"
        r"verklaart\s+de\s+officier\s+van\s+justitie\s+niet-ontvankelijk|"
        r"schorst\s+(?:het\s+onderzoek|de\s+behandeling)|"
        r"stelt\s+de\s+stukken\s+in\s+handen|gelast\s+de\s+tenuitvoerlegging")),
    ("measure", re.compile(
        r"terbeschikkingstelling|ter\s+beschikking\s+(?:wordt\s+)?gesteld|"
        r"\btbs\b|plaatsing\s+in\s+een\s+psychiatrisch\s+ziekenhuis|"
        r"plaatsing\s+in\s+een\s+inrichting\s+voor\s+stelselmatige\s+daders|"
        r"isd-maatregel|"
        r"legt\s+(?:de\s+verdachte\s+|aan\s+(?:de\s+)?verdachte\s+)?op\s+de\s+maatregel|"
        r"gelast\s+de\s+plaatsing")),
    ("community_service", re.compile(
        r"taakstraf|werkstraf|leerstraf|onbetaalde\s+arbeid")),
    ("fine", re.compile(
        r"geldboete|betaling\s+aan\s+de\s+staat")),
    ("incarceration", re.compile(
        r"levenslange?\s+gevangenisstraf|gevangenisstraf|jeugddetentie|"
        r"militaire\s+detentie|"
        r"(?<!voorlopige )(?<!vervangende )hechtenis")),
]

_LIFE_RE = re.compile(r"levenslange?\s+gevangenisstraf")
_SEGMENT_SPLIT_RE = re.compile(r";|\.\s+|\s-\s")
_DEDUCTION_RE = re.compile(r"in\s+mindering|met\s+aftrek|onder\s+aftrek")

LIFE_SENTENCE_MONTHS = 360.0


def classify_decision(segment_text: str) -> Decision | None:
    """Classify one sentence-like segment of the decision chapter."""
    s = segment_text.lower()
    if _DEDUCTION_RE.search(s) and "veroordeelt" not in s:
        return None  # pre-trial custody deduction order, not a decision
    if "meer of anders" in s:
        return None  # partial-acquittal boilerplate inside convictions

    hits = []
    for kind, pattern in _DECISION_PATTERNS:
        m = pattern.search(s)
        if m:
            hits.append((m.start(), kind, m.end()))
    if not hits:
        return None
    _, kind, match_end = min(hits, key=lambda h: h[0])

    if kind in ("acquittal", "procedural"):
        return Decision(kind=kind)
    if kind == "incarceration" and _LIFE_RE.search(s):
        return Decision(kind=kind, amount=LIFE_SENTENCE_MONTHS, unit="months")

    amount, unit, inconsistent = numerals.parse_quantity(s[match_end:])
    if amount is None:
        # "240 (tweehonderd veertig) uren taakstraf": amount precedes keyword
        amount, unit, inconsistent = numerals.parse_quantity(s)
    return Decision(kind=kind, amount=amount, unit=unit,
                    inconsistent=inconsistent)


def extract_decisions(chapters: list[Chapter]) -> list[Decision]:
    """All operative decisions from the decision chapters, textual order."""
    decisions: list[Decision] = []
    for chapter in chapters:
        if chapter.kind != "decision":
            continue
        for segment_text in _SEGMENT_SPLIT_RE.split(chapter.text):
            decision = classify_decision(segment_text)
            if decision is not None:
                decisions.append(decision)
    return decisions


# ---------------------------------------------------------------------------
# composition


def code_judgment(doc: JudgmentDocument,
                  chapters: list[Chapter] | None = None) -> CodedRecord:
    """Run every extractor over one judgment; pure, no I/O."""
    if chapters is None:
        chapters = segment.segment_chapters(doc)
    scan_lower = _scan_text(doc).lower()

    birth_year, birth_country = extract_birth(doc)
    co_offenders = count_placeholders(doc, "co_offender")

    return CodedRecord(
        meta=doc.meta,
        birth_year=birth_year,
        birth_country=birth_country,
        sex=extract_sex(doc),
        recidivism=extract_recidivism(doc),
        victim_count=count_placeholders(doc, "victim"),
        co_offender_count=co_offenders or 0,
        investigations=extract_investigations(doc),
        basic_terms=match_categories(scan_lower, basic_term_patterns()),
        special_terms=match_categories(scan_lower, special_term_patterns()),
        prosecution_expertise=match_categories(scan_lower,
                                               expertise_patterns()),
        detection_methods=match_categories(scan_lower, detection_patterns()),
        guidelines_mentioned=guidelines_mentioned(doc),
        large_scale_mentioned=large_scale_mentioned(doc),
        legal_basis=extract_legal_basis(chapters),
        decisions=extract_decisions(chapters),
    )

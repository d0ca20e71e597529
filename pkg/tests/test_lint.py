"""Data-quality lint rules: anonymization, sentence text, legal basis."""

from __future__ import annotations

import pytest

from strafmaat import codebook, extract, ingest, lint

from conftest import LINT_FIXTURE_DIR, make_doc, section


@pytest.fixture(scope="module")
def lint_run(statute_table):
    toggles = lint.load_rule_toggles()
    issues = []
    for doc in ingest.load_corpus(LINT_FIXTURE_DIR):
        record = extract.code_judgment(doc)
        issues.extend(lint.lint_document(doc, record, statute_table, toggles))
    return issues


def _lint_one(body, statute_table, toggles=None, **kw):
    doc = make_doc(body, **kw)
    record = extract.code_judgment(doc)
    if toggles is None:
        toggles = lint.load_rule_toggles()
    return lint.lint_document(doc, record, statute_table, toggles)


# ---------------------------------------------------------------------------
# the planted corpus trips every rule exactly once

def test_every_rule_fires_exactly_once(lint_run):
    fired = sorted(issue.rule for issue in lint_run)
    assert fired == sorted(lint.RULE_CATEGORIES)
    assert len(lint_run) == len(lint.RULE_CATEGORIES)


def test_findings_carry_category_and_evidence(lint_run):
    for issue in lint_run:
        assert issue.category == lint.RULE_CATEGORIES[issue.rule]
        assert issue.ecli.startswith("ECLI:NL:")
        assert issue.excerpt
        assert len(issue.excerpt) <= 120


def test_each_category_fires(lint_run):
    assert {issue.category for issue in lint_run} == {"A", "S", "V"}


def test_disabling_a_rule_removes_exactly_its_finding(lint_run,
                                                      statute_table):
    toggles = lint.load_rule_toggles()
    for rule in lint.RULE_CATEGORIES:
        reduced_toggles = dict(toggles)
        reduced_toggles[rule] = False
        issues = []
        for doc in ingest.load_corpus(LINT_FIXTURE_DIR):
            record = extract.code_judgment(doc)
            issues.extend(lint.lint_document(doc, record, statute_table,
                                             reduced_toggles))
        assert sorted(i.rule for i in issues) == \
            sorted(r for r in lint.RULE_CATEGORIES if r != rule)


# ---------------------------------------------------------------------------
# anonymization gates

def test_imei_requires_checksum_and_context(statute_table):
    # valid checksum, equipment context -> flagged
    hit = _lint_one("<para>een toestel met IMEI 490154203237518 is in "
                    "beslag genomen</para>", statute_table)
    assert [i.rule for i in hit if i.category == "A"] == ["imei_number"]
    # broken checksum, same context -> clean
    miss = _lint_one("<para>een toestel met IMEI 490154203237519 is in "
                     "beslag genomen</para>", statute_table)
    assert [i.rule for i in miss if i.category == "A"] == []
    # valid checksum, no context -> clean (could be any long number)
    miss = _lint_one("<para>het dossiernummer 490154203237518 is geregistreerd"
                     "</para>", statute_table)
    assert [i.rule for i in miss if i.category == "A"] == []


def test_passport_requires_document_context(statute_table):
    hit = _lint_one("<para>een paspoort met nummer NW5LR9D23 lag in de "
                    "woning</para>", statute_table)
    assert [i.rule for i in hit if i.category == "A"] == ["passport_number"]
    miss = _lint_one("<para>de code NW5LR9D23 stond op de doos</para>",
                     statute_table)
    assert [i.rule for i in miss if i.category == "A"] == []


def test_phone_number_forms(statute_table):
    for fragment in ("06-12345678", "06 12 34 56 78", "030-1234567"):
        hit = _lint_one(f"<para>bel {fragment} voor informatie</para>",
                        statute_table)
        assert [i.rule for i in hit if i.category == "A"] == \
            ["phone_number"], fragment


def test_excerpt_trimmed_with_ellipses(statute_table):
    body = ("<para>" + "voorafgaande tekst " * 10
            + "bel 06-12345678 nu " + "volgende tekst " * 10 + "</para>")
    (issue,) = [i for i in _lint_one(body, statute_table)
                if i.rule == "phone_number"]
    assert issue.excerpt.startswith("...")
    assert issue.excerpt.endswith("...")
    assert "06-12345678" in issue.excerpt


# ---------------------------------------------------------------------------
# sentence-description rules

def test_number_word_mismatch_follows_decision_flag(statute_table):
    issues = _lint_one(
        section(7, "Beslissing",
                "Veroordeelt verdachte tot een gevangenisstraf van 35 "
                "(dertig) maanden."), statute_table)
    assert "number_word_mismatch" in {i.rule for i in issues}
    clean = _lint_one(
        section(7, "Beslissing",
                "Veroordeelt verdachte tot een gevangenisstraf van 30 "
                "(dertig) maanden."), statute_table)
    assert "number_word_mismatch" not in {i.rule for i in clean}


def test_missing_unit_only_for_quantified_punitive_decisions(statute_table):
    issues = _lint_one(
        section(7, "Beslissing",
                "Veroordeelt verdachte tot jeugddetentie voor de duur van "
                "157, waarvan 90 voorwaardelijk."), statute_table)
    assert "missing_unit" in {i.rule for i in issues}
    # acquittals have no amount at all; nothing to flag
    clean = _lint_one(
        section(7, "Beslissing", "Spreekt verdachte vrij."), statute_table)
    assert "missing_unit" not in {i.rule for i in clean}


@pytest.mark.parametrize("birth_year,flagged", [
    (2009, True),   # age 11: younger than any adult-court offender
    (2008, False),  # age 12
    (1921, False),  # age 99
    (1920, True),   # age 100
])
def test_implausible_birth_year_boundaries(statute_table, birth_year,
                                           flagged):
    issues = _lint_one(
        f"<para>verdachte, geboren in {birth_year} te Utrecht.</para>",
        statute_table, date="2020-06-15")
    assert ("implausible_birth_year" in {i.rule for i in issues}) is flagged


# ---------------------------------------------------------------------------
# legal-basis rules

def test_missing_legal_basis(statute_table):
    issues = _lint_one(
        section(7, "Beslissing",
                "Veroordeelt verdachte tot een geldboete van 500 euro."),
        statute_table)
    assert "missing_legal_basis" in {i.rule for i in issues}


def test_unknown_article_names_the_citation(statute_table):
    issues = _lint_one(
        section(6, "Toepasselijke wettelijke voorschriften",
                "De beslissing berust op de artikelen 310 en 999 van het "
                "Wetboek van Strafrecht."), statute_table)
    (issue,) = [i for i in issues if i.rule == "unknown_article"]
    assert issue.excerpt == "no maximum known for Sr 999"
    assert "missing_legal_basis" not in {i.rule for i in issues}


def test_article_without_statute(statute_table):
    issues = _lint_one(
        section(6, "Toepasselijke wettelijke voorschriften",
                "De beslissing berust op de artikelen 36f en 63."),
        statute_table)
    assert "article_without_statute" in {i.rule for i in issues}


def test_statute_without_articles(statute_table):
    issues = _lint_one(
        section(6, "Toepasselijke wettelijke voorschriften",
                "De beslissing berust op de Wet wapens en munitie."),
        statute_table)
    assert "statute_without_articles" in {i.rule for i in issues}


def test_well_formed_basis_is_clean(statute_table):
    issues = _lint_one(
        section(6, "Toepasselijke wettelijke voorschriften",
                "De beslissing berust op de artikelen 310 en 311 van het "
                "Wetboek van Strafrecht."), statute_table)
    assert [i for i in issues if i.category == "V"] == []


# ---------------------------------------------------------------------------
# configuration

def test_load_rule_toggles_shape():
    toggles = lint.load_rule_toggles()
    assert set(toggles) == set(lint.RULE_CATEGORIES)
    assert all(toggles.values())  # shipped configuration enables everything


def test_load_rule_toggles_validation(tmp_path):
    bad = tmp_path / "rules.tsv"
    bad.write_text("imei_number\tA\tmaybe\n")
    with pytest.raises(ValueError, match="bad lint rule row"):
        lint.load_rule_toggles(str(bad))
    bad.write_text("no_such_rule\tA\ton\n")
    with pytest.raises(ValueError, match="unknown lint rules"):
        lint.load_rule_toggles(str(bad))


def test_apply_overrides():
    toggles = {rule: True for rule in lint.RULE_CATEGORIES}
    out = lint.apply_overrides(toggles, enable=(),
                               disable=("imei_number", "missing_unit"))
    assert out["imei_number"] is False and out["missing_unit"] is False
    assert toggles["imei_number"] is True  # input untouched
    out = lint.apply_overrides(out, enable=("imei_number",), disable=())
    assert out["imei_number"] is True
    with pytest.raises(ValueError, match="unknown lint rule"):
        lint.apply_overrides(toggles, enable=("made_up",), disable=())
    with pytest.raises(ValueError, match="unknown lint rule"):
        lint.apply_overrides(toggles, enable=(), disable=("made_up",))


def test_disabled_rules_do_not_scan(statute_table):
    toggles = {rule: False for rule in lint.RULE_CATEGORIES}
    issues = _lint_one("<para>bel 06-12345678, paspoort NW5LR9D23</para>",
                       statute_table, toggles=toggles)
    assert issues == []

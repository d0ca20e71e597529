"""Dutch number words, quantity phrases, and duration conversion.

Judgments state amounts as digits, words, or both ("6 (zes) jaren",
"tweehonderd veertig uren").  The word grammar covers compounds
("vijfenvijftig", "driehonderdzestig", "negentienhonderdtweeennegentig") on
diacritic-folded text, plus the misspellings observed in published judgments
(data/misspelled_numbers.tsv).  When digits and words disagree the digits
win and the quantity is flagged inconsistent.
"""

from __future__ import annotations

import re

from strafmaat import configfiles
from strafmaat.models import DURATION_UNITS
from strafmaat.textnorm import fold_collapse

_MISSPELLINGS_FILE = "misspelled_numbers.tsv"

# Simple number words on folded text ("een" covers "één").
_ONES = {
    "nul": 0, "een": 1, "twee": 2, "drie": 3, "vier": 4, "vijf": 5,
    "zes": 6, "zeven": 7, "acht": 8, "negen": 9, "tien": 10, "elf": 11,
    "twaalf": 12, "dertien": 13, "veertien": 14, "vijftien": 15,
    "zestien": 16, "zeventien": 17, "achttien": 18, "negentien": 19,
}
_TENS = {
    "twintig": 20, "dertig": 30, "veertig": 40, "vijftig": 50,
    "zestig": 60, "zeventig": 70, "tachtig": 80, "negentig": 90,
}
_SIMPLE = {**_ONES, **_TENS}

_ONES_WORDS = {v: k for k, v in _ONES.items()}
_TENS_WORDS = {v: k for k, v in _TENS.items()}

# unit surface form -> canonical unit (English unit words appear in
# translated passages)
UNIT_WORDS = {
    "dag": "days", "dagen": "days", "day": "days", "days": "days",
    "week": "weeks", "weken": "weeks", "weeks": "weeks",
    "maand": "months", "maanden": "months", "month": "months",
    "months": "months",
    "jaar": "years", "jaren": "years", "year": "years", "years": "years",
    "uur": "hours", "uren": "hours", "hour": "hours", "hours": "hours",
    "euro": "euros", "euro's": "euros", "euros": "euros", "eur": "euros",
}

_UNIT_ALT = "|".join(sorted((re.escape(u) for u in UNIT_WORDS), key=len,
                            reverse=True))

# digits with optional thousands separators and a decimal comma/point;
# ",-" marks whole euro amounts ("5.700,-")
_AMOUNT = r"(?P<digits>\d{1,3}(?:\.\d{3})+|\d+)(?:[,.](?P<frac>\d{1,2}|-))?"

_DIGIT_QTY_RE = re.compile(
    rf"{_AMOUNT}\s*(?:\(\s*(?P<words>[^()]{{1,60}}?)\s*\)\s*)?(?P<unit>{_UNIT_ALT})\b"
)
_WORD_QTY_RE = re.compile(
    rf"\b(?P<words>[a-z][a-z -]{{1,60}}?)\s+(?P<unit>{_UNIT_ALT})\b"
)
_MONEY_FIRST_RE = re.compile(rf"\b(?:euro|eur)\b\s*{_AMOUNT}")
# last resort: an amount whose unit was left out of the sentence entirely
_BARE_QTY_RE = re.compile(
    rf"{_AMOUNT}\s*(?:\(\s*(?P<words>[^()]{{1,60}}?)\s*\))?")

_misspellings: list[tuple[str, str]] | None = None


def _misspelling_pairs() -> list[tuple[str, str]]:
    global _misspellings
    if _misspellings is None:
        _misspellings = configfiles.load_pairs(_MISSPELLINGS_FILE)
    return _misspellings


def parse_number_word(text: str) -> int | None:
    """Parse a Dutch cardinal written in words; None when unparseable.

    Accepts spaced, hyphenated, and fully joined compounds.
    """
    s = fold_collapse(text).lower()
    s = re.sub(r"[\s-]+", "", s)
    if not s:
        return None
    for wrong, right in _misspelling_pairs():
        if wrong in s:
            s = s.replace(wrong, right)
    return _parse_compound(s)


def _parse_compound(s: str) -> int | None:
    if s in _SIMPLE:
        return _SIMPLE[s]

    i = s.find("duizend")
    if i >= 0:
        left = s[:i]
        lv = 1 if not left else _parse_compound(left)
        if lv is None or not 1 <= lv <= 999:
            return None
        rv = _parse_rest(s[i + len("duizend"):], upper=999)
        return None if rv is None else lv * 1000 + rv

    i = s.find("honderd")
    if i >= 0:
        left = s[:i]
        lv = 1 if not left else _parse_compound(left)
        # "negentienhonderd..." year-style compounds allow 1-99
        if lv is None or not 1 <= lv <= 99:
            return None
        rv = _parse_rest(s[i + len("honderd"):], upper=99)
        return None if rv is None else lv * 100 + rv

    # "<unit>en<tens>" compounds: vijfenvijftig, tweeentwintig, ...
    for tens_word, tens_value in _TENS.items():
        if s.endswith(tens_word):
            head = s[: -len(tens_word)]
            if head.endswith("en"):
                unit = head[:-2]
                if unit in _ONES and 1 <= _ONES[unit] <= 9:
                    return _ONES[unit] + tens_value
    return None


def _parse_rest(rest: str, upper: int) -> int | None:
    """Parse the tail of a compound; allows an optional 'en' joiner."""
    if not rest:
        return 0
    value = _parse_compound(rest)
    if value is None and rest.startswith("en"):
        value = _parse_compound(rest[2:])
    if value is None or value > upper:
        return None
    return value


def render_number_word(n: int) -> str:
    """Render 0..999999 as a Dutch cardinal (folded spelling)."""
    if not 0 <= n <= 999_999:
        raise ValueError(f"out of range: {n}")
    if n < 20:
        return _ONES_WORDS[n]
    if n < 100:
        tens, unit = divmod(n, 10)
        tens_word = _TENS_WORDS[tens * 10]
        return tens_word if unit == 0 else f"{_ONES_WORDS[unit]}en{tens_word}"
    if n < 1000:
        hundreds, rest = divmod(n, 100)
        head = "honderd" if hundreds == 1 else _ONES_WORDS[hundreds] + "honderd"
        return head if rest == 0 else head + render_number_word(rest)
    thousands, rest = divmod(n, 1000)
    head = "duizend" if thousands == 1 else render_number_word(thousands) + "duizend"
    return head if rest == 0 else head + render_number_word(rest)


def parse_quantity(text: str) -> tuple[float | None, str | None, bool]:
    """Parse an amount-plus-unit phrase.

    Returns (amount, canonical unit, inconsistent).  With both digits and a
    parenthesized written-out amount, the digits win; the flag is set when
    the words disagree with the digits or cannot be read as a number.
    """
    s = fold_collapse(text).lower()

    m = _DIGIT_QTY_RE.search(s)
    if m:
        amount = _digits_value(m.group("digits"), m.group("frac"))
        inconsistent = False
        if m.group("words"):
            word_value = parse_number_word(m.group("words"))
            inconsistent = word_value is None or word_value != amount
        return amount, UNIT_WORDS[m.group("unit")], inconsistent

    m = _MONEY_FIRST_RE.search(s)
    if m:
        return _digits_value(m.group("digits"), m.group("frac")), "euros", False

    for m in _WORD_QTY_RE.finditer(s):
        words = m.group("words").split()
        # longest parsable suffix: "voor de duur van twee jaren" -> "twee"
        for start in range(len(words)):
            value = parse_number_word(" ".join(words[start:]))
            if value is not None:
                return float(value), UNIT_WORDS[m.group("unit")], False

    m = _BARE_QTY_RE.search(s)
    if m:  # amount with its unit missing ("jeugddetentie van 157")
        amount = _digits_value(m.group("digits"), m.group("frac"))
        inconsistent = False
        if m.group("words"):
            word_value = parse_number_word(m.group("words"))
            inconsistent = word_value is None or word_value != amount
        return amount, None, inconsistent

    return None, None, False


def _digits_value(digits: str, frac: str | None) -> float:
    value = float(digits.replace(".", ""))
    if frac and frac != "-":
        value += float(frac) / 10 ** len(frac)
    return value


def to_months(amount: float, unit: str) -> float:
    """Convert a duration to months (30-day month; full precision).

    Report formatting rounds to two decimals; one day is 0.03 months there.
    """
    if unit not in DURATION_UNITS:
        raise ValueError(f"not a duration unit: {unit!r}")
    if unit == "days":
        return amount / 30.0
    if unit == "weeks":
        return amount * 7.0 / 30.0
    if unit == "months":
        return float(amount)
    return amount * 12.0  # years

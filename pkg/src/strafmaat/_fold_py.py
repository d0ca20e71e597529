"""Pure-Python text-normalization kernel.

Fallback for the compiled `strafmaat._fold` extension; both implement the
same contract and the test suite pins them to byte-identical output:

    fold_collapse(text, fold) == " ".join(text.translate(fold).split())

where `fold` maps code points to ASCII replacement strings that contain no
whitespace (enforced when the table is built, see strafmaat.textnorm).
"""

from __future__ import annotations


def fold_collapse(text: str, fold: dict[int, str]) -> str:
    """Fold characters per `fold` and collapse whitespace runs to one space.

    Leading and trailing whitespace is dropped.  Characters not in the table
    are kept verbatim.
    """
    return " ".join(text.translate(fold).split())

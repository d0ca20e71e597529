"""strafmaat: code anonymised Dutch criminal judgments into a sentencing dataset.

The package turns published judgment XML into structured records (offender
profile, technology vocabulary, legal basis, decisions), derives a
regression-ready dataset keyed on statutory maximum sentences, and ships the
statistics used to analyse it (hierarchical OLS, regression diagnostics,
inter-rater reliability, stratified sampling) plus a data-quality linter.
"""

from strafmaat.models import (
    AnalysisRow,
    Chapter,
    CodedRecord,
    Decision,
    JudgmentDocument,
    JudgmentMeta,
    LegalBasisEntry,
    LintIssue,
    ModelFit,
    ReliabilityTally,
)

__all__ = [
    "AnalysisRow",
    "Chapter",
    "CodedRecord",
    "Decision",
    "JudgmentDocument",
    "JudgmentMeta",
    "LegalBasisEntry",
    "LintIssue",
    "ModelFit",
    "ReliabilityTally",
]

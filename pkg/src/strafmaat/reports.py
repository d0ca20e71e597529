"""Plain-text report rendering for the command-line tools.

Number formatting mirrors common social-science reporting: unstandardized
coefficients with standard errors and significance stars, increments per
model step, and percent effects (exp(b) - 1) for coefficients of the
log-scale response.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence

from strafmaat.models import AnalysisRow, LintIssue, ReliabilityTally
from strafmaat.statsengine import (
    INTERCEPT,
    HierarchyStep,
    ModelFit,
    RatioSummary,
    describe_ratio,
    frequency_table,
    percent_effect,
)


def stars(p_value: float) -> str:
    if p_value < 0.001:
        return "***"
    if p_value < 0.01:
        return "**"
    if p_value < 0.05:
        return "*"
    return ""


def _fmt(value: float | None, digits: int = 3) -> str:
    return "" if value is None else f"{value:.{digits}f}"


# ---------------------------------------------------------------------------
# regression


def format_fit(fit: ModelFit, *, show_percent: bool = True) -> str:
    width = max(len(n) for n in fit.names)
    lines = [
        f"{'':{width}}        B       SE        t        p     "
        + ("   %" if show_percent else ""),
    ]
    for i, name in enumerate(fit.names):
        pct = ""
        if show_percent and name != INTERCEPT:
            pct = f"{percent_effect(float(fit.coef[i])):8.1f}"
        lines.append(
            f"{name:{width}} {fit.coef[i]:8.3f} {fit.se[i]:8.3f} "
            f"{fit.t_values[i]:8.2f} {fit.p_values[i]:8.4f} "
            f"{stars(float(fit.p_values[i])):3s} {pct}")
    lines.append(
        f"n = {fit.n}   R2 = {fit.r2:.3f}   adj R2 = {fit.adj_r2:.3f}   "
        f"F({fit.f_df[0]}, {fit.f_df[1]}) = {fit.f_stat:.2f}"
        f"{stars(fit.f_p)}")
    return "\n".join(lines)


def format_hierarchy(steps: Sequence[HierarchyStep]) -> str:
    blocks = []
    for step in steps:
        header = f"== {step.label} =="
        if step.delta_r2 is not None:
            header += (
                f"  (delta R2 = {step.delta_r2:.3f}, "
                f"F change({step.f_change_df[0]}, {step.f_change_df[1]}) = "
                f"{step.f_change:.2f}{stars(step.f_change_p)})")
        blocks.append(header + "\n" + format_fit(step.fit))
    return "\n\n".join(blocks)


def format_diagnostics(durbin_watson: float,
                       tolerances: dict[str, float],
                       outlier_count: int, n: int) -> str:
    worst = sorted(tolerances.items(), key=lambda kv: kv[1])[:5]
    lines = [
        f"Durbin-Watson: {durbin_watson:.3f}",
        f"outliers (|studentized residual| > 3): {outlier_count} of {n}",
        "lowest tolerances: "
        + ", ".join(f"{name} {value:.3f}" for name, value in worst),
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# descriptives

_RATIO_COLUMNS = ("prison_months", "max_months", "age", "n_offences")
_CATEGORICAL_COLUMNS = ("decision_type", "offence_class", "max_bucket",
                        "age_bucket")
_FLAG_COLUMNS = ("guidelines", "prosecution_expertise", "born_abroad",
                 "female", "repeat_offender", "multiple_victims",
                 "basic_skills", "special_skills", "large_scale")


def _format_ratio_line(name: str, summary: RatioSummary) -> str:
    if summary.n == 0:
        return f"{name:22s} n=0"
    return (f"{name:22s} n={summary.n:<6d} mean={_fmt(summary.mean, 2):>9s} "
            f"sd={_fmt(summary.sd, 2):>9s} min={_fmt(summary.minimum, 2):>9s} "
            f"max={_fmt(summary.maximum, 2):>9s}")


def format_descriptives(rows: Sequence[AnalysisRow]) -> str:
    lines = [f"rows: {len(rows)}", "", "ratio variables:"]
    for name in _RATIO_COLUMNS:
        values = [getattr(r, name) for r in rows]
        lines.append("  " + _format_ratio_line(name, describe_ratio(values)))
    lines.append("")
    lines.append("categorical variables:")
    for name in _CATEGORICAL_COLUMNS:
        values = [getattr(r, name) for r in rows]
        table = frequency_table(values)
        missing = sum(1 for v in values if v is None)
        lines.append(f"  {name} (missing {missing}):")
        for value, count, share in table:
            lines.append(f"    {str(value):18s} {count:6d}  {share:6.1%}")
    lines.append("")
    lines.append("flags (share of non-missing):")
    for name in _FLAG_COLUMNS:
        values = [getattr(r, name) for r in rows]
        valid = [v for v in values if v is not None]
        share = sum(valid) / len(valid) if valid else float("nan")
        lines.append(f"  {name:22s} n={len(valid):<6d} yes={share:6.1%}")
    return "\n".join(lines)


def format_correlations(names: Sequence[str], r, n) -> str:
    width = max(len(name) for name in names)
    header = f"{'':{width}} " + " ".join(f"{i + 1:>6d}" for i in range(len(names)))
    lines = [header]
    for i, name in enumerate(names):
        cells = []
        for j in range(len(names)):
            value = r[i, j]
            cells.append("   .  " if value != value else f"{value:6.2f}")
        lines.append(f"{name:{width}} " + " ".join(cells) + f"  ({i + 1})")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# reliability and lint


def format_reliability(tallies: dict[str, ReliabilityTally],
                       kappas: dict[str, tuple[float, float | None]]) -> str:
    lines = [f"{'variable':14s} {'n':>5s} {'TP':>5s} {'FP':>5s} {'FN':>5s} "
             f"{'TN':>5s} {'accuracy':>9s} {'agreement':>10s}"]
    for variable, tally in tallies.items():
        accuracy, kappa = kappas[variable]
        kappa_s = "n/a" if kappa is None else f"{kappa:.2f}"
        lines.append(
            f"{variable:14s} {tally.total:5d} {tally.tp:5d} {tally.fp:5d} "
            f"{tally.fn:5d} {tally.tn:5d} {accuracy:9.2f} {kappa_s:>10s}")
    return "\n".join(lines)


def format_lint(issues: Sequence[LintIssue], documents: int) -> str:
    by_rule = Counter((i.category, i.rule) for i in issues)
    affected = len({i.ecli for i in issues})
    lines = [f"documents checked: {documents}   findings: {len(issues)}   "
             f"documents with findings: {affected}"]
    for (category, rule), count in sorted(by_rule.items()):
        lines.append(f"  [{category}] {rule:24s} {count:6d}")
    return "\n".join(lines)


def format_lint_details(issues: Sequence[LintIssue]) -> str:
    return "\n".join(f"{i.ecli}  [{i.category}] {i.rule}: {i.excerpt}"
                     for i in issues)

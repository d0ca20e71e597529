"""Regression, diagnostics, agreement measures, and sampling.

Everything operates on plain numpy arrays.  Designs are expected to carry an
explicit leading intercept column; R-squared and the model F statistic are
defined against the intercept-only baseline.  The solver factorizes through
QR rather than forming normal equations, and refuses rank-deficient designs
by naming the offending columns.
"""

from __future__ import annotations

import math
import random
from collections import defaultdict
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.stats

from strafmaat.models import (
    AGE_BUCKET_REF,
    AGE_BUCKETS,
    MAX_BUCKET_REF,
    MAX_BUCKETS,
    OFFENCE_CLASS_REF,
    OFFENCE_CLASSES,
    AnalysisRow,
    ModelFit,
    ReliabilityTally,
)

INTERCEPT = "const"


class RankDeficientError(ValueError):
    """Design matrix is not full column rank."""

    def __init__(self, columns: list[str]) -> None:
        self.columns = columns
        super().__init__(
            "design is rank deficient; dependent columns: "
            + ", ".join(columns))


def _check_rank(x: np.ndarray, names: Sequence[str]) -> None:
    _, r, pivots = scipy.linalg.qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0:
        raise ValueError("empty design")
    tol = max(x.shape) * np.finfo(x.dtype).eps * diag[0]
    rank = int(np.sum(diag > tol))
    if rank < x.shape[1]:
        raise RankDeficientError([names[i] for i in sorted(pivots[rank:])])


def fit_ols(x: np.ndarray, y: np.ndarray, names: Sequence[str]) -> ModelFit:
    """Least squares with the usual inference table.

    ``x`` must contain the intercept as an explicit column.  Raises
    :class:`RankDeficientError` (naming columns) on collinear designs.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = x.shape
    if len(names) != p:
        raise ValueError("one name per design column required")
    if n <= p:
        raise ValueError(f"need more rows ({n}) than columns ({p})")
    _check_rank(x, names)

    q, r = np.linalg.qr(x)
    coef = scipy.linalg.solve_triangular(r, q.T @ y)
    fitted = x @ coef
    resid = y - fitted
    df_resid = n - p
    ssr = float(resid @ resid)
    sigma2 = ssr / df_resid

    r_inv = scipy.linalg.solve_triangular(r, np.eye(p))
    xtx_inv_diag = np.sum(r_inv * r_inv, axis=1)
    se = np.sqrt(sigma2 * xtx_inv_diag)
    with np.errstate(divide="ignore", invalid="ignore"):  # se=0 on exact fit
        t_values = coef / se
    p_values = 2.0 * scipy.stats.t.sf(np.abs(t_values), df_resid)

    sst = float(np.sum((y - y.mean()) ** 2))
    if sst <= 0.0:
        raise ValueError("response is constant")
    r2 = 1.0 - ssr / sst
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df_resid
    df_model = p - 1
    if df_model <= 0:
        f_stat, f_p = float("nan"), float("nan")
    elif r2 >= 1.0:  # perfect fit: no residual variance left to test against
        f_stat, f_p = float("inf"), 0.0
    else:
        f_stat = (r2 / df_model) / ((1.0 - r2) / df_resid)
        f_p = float(scipy.stats.f.sf(f_stat, df_model, df_resid))

    return ModelFit(
        names=tuple(names), coef=coef, se=se, t_values=t_values,
        p_values=p_values, r2=r2, adj_r2=adj_r2, f_stat=f_stat,
        f_df=(df_model, df_resid), f_p=f_p, n=n, sigma2=sigma2,
        residuals=resid, fitted=fitted,
    )


# ---------------------------------------------------------------------------
# diagnostics


def durbin_watson(residuals: np.ndarray) -> float:
    e = np.asarray(residuals, dtype=float)
    if e.size < 2:
        raise ValueError("Durbin-Watson needs at least two residuals")
    denom = np.sum(e ** 2)
    if denom == 0.0:
        raise ValueError("Durbin-Watson is undefined for all-zero residuals")
    return float(np.sum(np.diff(e) ** 2) / denom)


def tolerances(x: np.ndarray, names: Sequence[str]) -> dict[str, float]:
    """Collinearity tolerance (1 - R^2 of each column on all others).

    The intercept column is the baseline of every auxiliary regression and
    gets no tolerance of its own.
    """
    x = np.asarray(x, dtype=float)
    out: dict[str, float] = {}
    for j, name in enumerate(names):
        if name == INTERCEPT:
            continue
        target = x[:, j]
        others = np.delete(x, j, axis=1)
        coef, *_ = np.linalg.lstsq(others, target, rcond=None)
        resid = target - others @ coef
        sst = float(np.sum((target - target.mean()) ** 2))
        if sst <= 0.0:
            continue
        # a share of variance lies in [0, 1]; clamp the rounding spill
        out[name] = min(1.0, max(0.0, float(resid @ resid) / sst))
    return out


def leverage(x: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(np.asarray(x, dtype=float))
    return np.sum(q * q, axis=1)


def studentized_residuals(x: np.ndarray, fit: ModelFit) -> np.ndarray:
    """Externally studentized residuals (each point left out of its own
    error-variance estimate)."""
    h = leverage(x)
    e = fit.residuals
    n, p = x.shape
    df = n - p
    ssr = float(e @ e)
    with np.errstate(divide="ignore", invalid="ignore"):  # exact fits -> NaN
        s2_i = (ssr - e ** 2 / (1.0 - h)) / (df - 1)
        return e / np.sqrt(s2_i * (1.0 - h))


def outlier_indexes(x: np.ndarray, fit: ModelFit,
                    threshold: float = 3.0) -> list[int]:
    t = studentized_residuals(x, fit)
    return [int(i) for i in np.flatnonzero(np.abs(t) > threshold)]


# ---------------------------------------------------------------------------
# hierarchical fitting


@dataclass(frozen=True)
class HierarchyStep:
    label: str
    fit: ModelFit
    delta_r2: float | None
    f_change: float | None
    f_change_df: tuple[int, int] | None
    f_change_p: float | None


def fit_hierarchy(x: np.ndarray, y: np.ndarray, names: Sequence[str],
                  blocks: Sequence[tuple[str, Sequence[str]]]) -> list[HierarchyStep]:
    """Nested fits over cumulative column blocks, all on the same rows.

    ``blocks`` maps step labels to the design columns *added* at that step;
    the intercept is always included.  Each step reports the F test of its
    R-squared increment over the previous step.
    """
    name_index = {name: i for i, name in enumerate(names)}
    steps: list[HierarchyStep] = []
    cumulative: list[str] = [INTERCEPT]
    prev: ModelFit | None = None
    for label, added in blocks:
        for name in added:
            if name not in name_index:
                raise ValueError(f"unknown design column {name!r}")
        cumulative = cumulative + list(added)
        cols = [name_index[name] for name in cumulative]
        fit = fit_ols(x[:, cols], y, cumulative)
        if prev is None:
            steps.append(HierarchyStep(label, fit, None, None, None, None))
        else:
            k = len(added)
            df_resid = fit.n - len(cumulative)
            delta = fit.r2 - prev.r2
            f_change = (delta / k) / ((1.0 - fit.r2) / df_resid)
            f_p = float(scipy.stats.f.sf(f_change, k, df_resid))
            steps.append(HierarchyStep(label, fit, delta, f_change,
                                       (k, df_resid), f_p))
        prev = fit
    return steps


def interaction_f_change(x: np.ndarray, y: np.ndarray, names: Sequence[str],
                         left: Sequence[str], right: Sequence[str],
                         ) -> HierarchyStep:
    """F test of adding all left-x-right product columns to the full design."""
    name_index = {name: i for i, name in enumerate(names)}
    base = fit_ols(x, y, names)
    extra_cols = []
    extra_names = []
    for a in left:
        for b in right:
            extra_cols.append(x[:, name_index[a]] * x[:, name_index[b]])
            extra_names.append(f"{a}*{b}")
    full_x = np.column_stack([x] + extra_cols)
    full_names = list(names) + extra_names
    full = fit_ols(full_x, y, full_names)
    k = len(extra_names)
    df_resid = full.n - full_x.shape[1]
    delta = full.r2 - base.r2
    f_change = (delta / k) / ((1.0 - full.r2) / df_resid)
    f_p = float(scipy.stats.f.sf(f_change, k, df_resid))
    return HierarchyStep("interactions", full, delta, f_change,
                         (k, df_resid), f_p)


# ---------------------------------------------------------------------------
# agreement and association


def cohens_kappa(tally: ReliabilityTally) -> tuple[float, float | None]:
    """(observed accuracy, chance-corrected agreement) for a 2x2 tally.

    The chance-corrected coefficient is undefined (None) when the
    both-absent cell is empty or when chance agreement is total.
    """
    n = tally.total
    if n == 0:
        raise ValueError("empty tally")
    accuracy = (tally.tp + tally.tn) / n
    if tally.tn == 0:
        return accuracy, None
    p_yes = ((tally.tp + tally.fp) / n) * ((tally.tp + tally.fn) / n)
    p_no = ((tally.fn + tally.tn) / n) * ((tally.fp + tally.tn) / n)
    p_chance = p_yes + p_no
    if p_chance >= 1.0:
        return accuracy, None
    return accuracy, (accuracy - p_chance) / (1.0 - p_chance)


def chi_square_2x2(a: int, b: int, c: int, d: int) -> tuple[float, float]:
    """Pearson chi-square (no continuity correction) for a 2x2 table
    [[a, b], [c, d]]; returns (statistic, p)."""
    n = a + b + c + d
    margins = ((a + b), (c + d), (a + c), (b + d))
    if any(m == 0 for m in margins):
        raise ValueError("chi-square needs non-empty margins")
    stat = n * (a * d - b * c) ** 2 / (margins[0] * margins[1]
                                       * margins[2] * margins[3])
    return float(stat), float(scipy.stats.chi2.sf(stat, 1))


# ---------------------------------------------------------------------------
# stratified sampling


def stratified_sample(items: Sequence, size: int, seed: int,
                      key: Callable, id_key: Callable) -> list:
    """Proportional sample over the ``key`` strata, reproducible by seed.

    Quotas use the largest-remainder rule, so each stratum differs from its
    exact proportional share by less than one.  All tie-breaks and the
    within-stratum draw are deterministic in (items, size, seed); items are
    ordered by ``id_key`` first so input order never matters.
    """
    if not 0 <= size <= len(items):
        raise ValueError(f"sample size {size} outside 0..{len(items)}")
    groups: dict = defaultdict(list)
    for item in items:
        groups[key(item)].append(item)
    cells = sorted(groups)
    for cell in cells:
        groups[cell].sort(key=id_key)

    total = len(items)
    quotas = {cell: size * len(groups[cell]) / total for cell in cells}
    alloc = {cell: int(quotas[cell]) for cell in cells}
    leftovers = size - sum(alloc.values())
    by_remainder = sorted(cells, key=lambda c: (-(quotas[c] - alloc[c]), c))
    for cell in by_remainder[:leftovers]:
        alloc[cell] += 1

    rng = random.Random(seed)
    chosen: list = []
    for cell in cells:
        chosen.extend(sorted(rng.sample(groups[cell], alloc[cell]),
                             key=id_key))
    return chosen


# ---------------------------------------------------------------------------
# descriptives


@dataclass(frozen=True)
class RatioSummary:
    n: int
    mean: float | None
    sd: float | None
    minimum: float | None
    maximum: float | None


def describe_ratio(values: Sequence[float | None]) -> RatioSummary:
    valid = [float(v) for v in values if v is not None]
    if not valid:
        return RatioSummary(0, None, None, None, None)
    arr = np.asarray(valid)
    sd = float(arr.std(ddof=1)) if arr.size > 1 else None
    return RatioSummary(arr.size, float(arr.mean()), sd,
                        float(arr.min()), float(arr.max()))


def frequency_table(values: Sequence) -> list[tuple[object, int, float]]:
    """(value, count, share-of-non-missing) rows, most frequent first."""
    counts: dict = defaultdict(int)
    for v in values:
        if v is not None:
            counts[v] += 1
    total = sum(counts.values())
    return [(value, count, count / total) for value, count in
            sorted(counts.items(), key=lambda kv: (-kv[1], str(kv[0])))]


def correlation_matrix(columns: dict[str, Sequence[float | None]],
                       ) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Pairwise-deletion Pearson correlations.

    Returns (names, r matrix, n matrix); r is NaN where fewer than two
    complete pairs exist or either column is constant on the shared rows.
    """
    names = list(columns)
    k = len(names)
    r = np.full((k, k), np.nan)
    n = np.zeros((k, k), dtype=int)
    series = {name: list(columns[name]) for name in names}
    for i in range(k):
        for j in range(i, k):
            xs, ys = [], []
            for a, b in zip(series[names[i]], series[names[j]]):
                if a is not None and b is not None:
                    xs.append(float(a))
                    ys.append(float(b))
            n[i, j] = n[j, i] = len(xs)
            if len(xs) < 2:
                continue
            ax, ay = np.asarray(xs), np.asarray(ys)
            sx, sy = ax.std(), ay.std()
            if sx == 0.0 or sy == 0.0:
                r[i, j] = r[j, i] = np.nan if i != j else 1.0
                continue
            rij = float(((ax - ax.mean()) @ (ay - ay.mean()))
                        / (len(xs) * sx * sy))
            r[i, j] = r[j, i] = rij
    return names, r, n


def percent_effect(coef: float) -> float:
    """Percent change in the (log-scale) response for a one-unit move."""
    return (math.exp(coef) - 1.0) * 100.0


# ---------------------------------------------------------------------------
# dataset-to-design bridge

# Dummy blocks drop their reference level.
_MAX_DUMMIES = [(f"max_{b}", b) for b in MAX_BUCKETS if b != MAX_BUCKET_REF]
_CLASS_DUMMIES = [(f"class_{c}", c) for c in OFFENCE_CLASSES
                  if c != OFFENCE_CLASS_REF]
_AGE_DUMMIES = [(f"age_{b}", b) for b in AGE_BUCKETS if b != AGE_BUCKET_REF]

# Cumulative model blocks: offence severity, then prosecution context, then
# offender characteristics.  Every model keeps all earlier blocks.
REGRESSION_BLOCKS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("model 1 (offence)",
     tuple(n for n, _ in _MAX_DUMMIES)
     + tuple(n for n, _ in _CLASS_DUMMIES) + ("n_offences",)),
    ("model 2 (+ prosecution)", ("guidelines", "prosecution_expertise")),
    ("model 3 (+ offender)",
     tuple(n for n, _ in _AGE_DUMMIES)
     + ("born_abroad", "female", "repeat_offender", "multiple_victims",
        "basic_skills", "special_skills")),
)

_ROW_FIELDS_NEEDED = (
    "ln_prison_months", "max_bucket", "offence_class", "n_offences",
    "guidelines", "prosecution_expertise", "age_bucket", "born_abroad",
    "female", "repeat_offender", "multiple_victims", "basic_skills",
    "special_skills",
)


def _row_values(row: AnalysisRow) -> list[float]:
    values = [1.0]
    values += [1.0 if row.max_bucket == b else 0.0 for _, b in _MAX_DUMMIES]
    values += [1.0 if row.offence_class == c else 0.0
               for _, c in _CLASS_DUMMIES]
    values.append(float(row.n_offences))
    values.append(float(row.guidelines))
    values.append(float(row.prosecution_expertise))
    values += [1.0 if row.age_bucket == b else 0.0 for _, b in _AGE_DUMMIES]
    values += [float(row.born_abroad), float(row.female),
               float(row.repeat_offender), float(row.multiple_victims),
               float(row.basic_skills), float(row.special_skills)]
    return values


def missingness_breakdown(rows: Sequence[AnalysisRow]) -> dict[str, int]:
    return {field: sum(1 for r in rows if getattr(r, field) is None)
            for field in _ROW_FIELDS_NEEDED}


def build_design(rows: Sequence[AnalysisRow],
                 ) -> tuple[np.ndarray, np.ndarray, list[str], list[int]]:
    """Listwise-complete design for the full model.

    Returns (X, y, names, kept-row indexes); X starts with the intercept and
    contains the union of all block columns, so nested models are column
    subsets over the identical row set.
    """
    names = [INTERCEPT]
    for _, added in REGRESSION_BLOCKS:
        names.extend(added)
    kept: list[int] = []
    x_rows: list[list[float]] = []
    y_values: list[float] = []
    for i, row in enumerate(rows):
        if any(getattr(row, f) is None for f in _ROW_FIELDS_NEEDED):
            continue
        kept.append(i)
        x_rows.append(_row_values(row))
        y_values.append(float(row.ln_prison_months))
    if not kept:
        raise ValueError("no listwise-complete rows; missing per field: "
                         + repr(missingness_breakdown(rows)))
    return (np.asarray(x_rows), np.asarray(y_values), names, kept)


def fit_row_hierarchy(rows: Sequence[AnalysisRow]) -> list[HierarchyStep]:
    """The three nested models on the identical listwise-complete rows."""
    x, y, names, _ = build_design(rows)
    if x.shape[0] <= x.shape[1]:
        raise ValueError(
            f"only {x.shape[0]} complete rows for {x.shape[1]} design "
            f"columns; missing per field: {missingness_breakdown(rows)!r}")
    return fit_hierarchy(x, y, names, REGRESSION_BLOCKS)


def predictor_series(rows: Sequence[AnalysisRow],
                     ) -> dict[str, list[float | None]]:
    """Every design predictor as a column with row-level missingness,
    for pairwise-deletion correlations."""
    columns: dict[str, list[float | None]] = {}
    for name, bucket in _MAX_DUMMIES:
        columns[name] = [None if r.max_bucket is None
                         else float(r.max_bucket == bucket) for r in rows]
    for name, cls in _CLASS_DUMMIES:
        columns[name] = [None if r.offence_class is None
                         else float(r.offence_class == cls) for r in rows]
    for field in ("n_offences", "guidelines", "prosecution_expertise"):
        columns[field] = [None if getattr(r, field) is None
                          else float(getattr(r, field)) for r in rows]
    for name, bucket in _AGE_DUMMIES:
        columns[name] = [None if r.age_bucket is None
                         else float(r.age_bucket == bucket) for r in rows]
    for field in ("born_abroad", "female", "repeat_offender",
                  "multiple_victims", "basic_skills", "special_skills"):
        columns[field] = [None if getattr(r, field) is None
                          else float(getattr(r, field)) for r in rows]
    return columns

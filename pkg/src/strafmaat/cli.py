"""Command-line surface: fetch, code, analyze, sample, reliability, chisq,
lint.

Every command takes ``--config`` (a JSON file of defaults) plus explicit
flags that override it.  Identical inputs and seed give byte-identical
outputs.  Fatal problems exit nonzero; per-document soft failures are
written to the run log and never change the exit status.
"""

from __future__ import annotations

import datetime as dt
import json
import math
import os
import sys

import click

from strafmaat import (
    codebook,
    extract,
    ingest,
    lint as lintmod,
    recordio,
    reliability as relmod,
    reports,
    statsengine,
    textnorm,
)

_CONFIG_KEYS = {
    "source", "output_dir", "seed", "statute_table_path", "date_from",
    "date_to", "sample_size", "outlier_threshold", "keyword", "flag",
    "models", "lint_enable", "lint_disable", "subset_ok",
}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as handle:
        config = json.load(handle)
    if not isinstance(config, dict):
        raise click.ClickException("config must be a JSON object")
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise click.ClickException(
            f"unknown config keys: {sorted(unknown)}")
    return config


def _cfg(ctx: click.Context, flag_value, key: str, default=None):
    if flag_value is not None:
        return flag_value
    return ctx.obj.get(key, default)


def _statute_table(ctx: click.Context, flag_value):
    path = _cfg(ctx, flag_value, "statute_table_path", "statute_max.tsv")
    try:
        return codebook.load_statute_max(path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"statute table: {exc}") from exc


def _write_run_log(out_dir: str, entries: list[dict]) -> None:
    path = os.path.join(out_dir, "run_log.jsonl")
    with open(path, "w", encoding="utf-8") as handle:
        for entry in entries:
            handle.write(json.dumps(entry, ensure_ascii=False))
            handle.write("\n")


def _load_records(path: str) -> list:
    try:
        return [recordio.json_to_record(obj)
                for obj in recordio.read_records(path)]
    except (OSError, ValueError, KeyError) as exc:
        raise click.ClickException(f"records file: {exc}") from exc


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON file with default option values.")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Code criminal-judgment XML, derive the dataset, run the analysis."""
    ctx.obj = _load_config(config_path)


# ---------------------------------------------------------------------------
# fetch


@main.command()
@click.option("--source", default=None,
              help="Endpoint URL or local directory of judgment XML.")
@click.option("--from", "date_from", default=None,
              help="Earliest decision date (YYYY-MM-DD).")
@click.option("--to", "date_to", default=None,
              help="Latest decision date (YYYY-MM-DD).")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--param", "params", multiple=True, metavar="KEY=VALUE",
              help="Extra index query parameter; repeatable.")
@click.option("--max", "page_size", default=1000, show_default=True,
              help="Index page size.")
@click.pass_context
def fetch(ctx, source, date_from, date_to, out_dir, params, page_size):
    """Download judgment XML (or copy it from a local directory)."""
    source = _cfg(ctx, source, "source")
    date_from = _cfg(ctx, date_from, "date_from")
    date_to = _cfg(ctx, date_to, "date_to")

    def log(name: str, status: str, detail: str) -> None:
        click.echo(f"{status:9} {name}" + (f"  {detail}" if detail else ""))

    if source and os.path.isdir(source):
        stats = ingest.fetch_local(source, out_dir, log=log)
    else:
        if not (date_from and date_to):
            raise click.ClickException(
                "remote fetch needs --from and --to dates")
        extra = {}
        for item in params:
            key, sep, value = item.partition("=")
            if not sep:
                raise click.ClickException(f"bad --param (need KEY=VALUE): "
                                           f"{item!r}")
            extra[key] = value
        import requests

        base = ingest.endpoint_base(source)
        with requests.Session() as session:
            try:
                eclis = ingest.fetch_index(session, base, date_from, date_to,
                                           extra_params=extra,
                                           page_size=page_size)
            except Exception as exc:  # noqa: BLE001 - network boundary
                raise click.ClickException(f"index fetch failed: {exc}")
            click.echo(f"index: {len(eclis)} documents")
            stats = ingest.fetch_documents(session, base, eclis, out_dir,
                                           log=log)
    click.echo(f"fetched {stats['fetched']}, unchanged {stats['unchanged']}, "
               f"failed {stats['failed']}")


# ---------------------------------------------------------------------------
# code


@main.command()
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--statute-table", default=None,
              help="Statutory-maximum table (TSV).")
@click.option("--validate/--no-validate", default=True, show_default=True,
              help="Check each record against the shipped JSON schema.")
@click.pass_context
def code(ctx, corpus_dir, out_dir, statute_table, validate):
    """Code a corpus into JSON records and the CSV dataset."""
    table = _statute_table(ctx, statute_table)
    os.makedirs(out_dir, exist_ok=True)
    log_entries: list[dict] = []

    def on_parse_error(path, exc):
        log_entries.append({"file": os.path.basename(path),
                            "status": "rejected", "detail": str(exc)})

    docs = list(ingest.load_corpus(corpus_dir, on_error=on_parse_error))
    kept, filter_stats = ingest.filter_corpus(docs)
    kept_eclis = {d.meta.ecli for d in kept}
    for doc in docs:
        if doc.meta.ecli not in kept_eclis:
            log_entries.append({"ecli": doc.meta.ecli, "status": "filtered",
                                "detail": "metadata-only or juvenile"})
    kept.sort(key=lambda d: d.meta.ecli)

    objs: list[dict] = []
    rows = []
    for doc in kept:
        try:
            record = extract.code_judgment(doc)
            obj = recordio.record_to_json(record)
            if validate:
                recordio.validate_record(obj)
            rows.append(codebook.derive_row(record, table))
            objs.append(obj)
            log_entries.append({"ecli": doc.meta.ecli, "status": "coded",
                                "decision": bool(record.decisions),
                                "legal_basis": bool(record.legal_basis)})
        except Exception as exc:  # noqa: BLE001 - soft per-document failure
            log_entries.append({"ecli": doc.meta.ecli, "status": "error",
                                "detail": str(exc)})

    recordio.write_records(objs, os.path.join(out_dir, "records.jsonl"))
    codebook.export_dataset(rows, os.path.join(out_dir, "dataset.csv"))
    _write_run_log(out_dir, log_entries)

    coded = [e for e in log_entries if e["status"] == "coded"]
    n = len(coded)
    decision_rate = sum(e["decision"] for e in coded) / n if n else 0.0
    basis_rate = sum(e["legal_basis"] for e in coded) / n if n else 0.0
    click.echo(f"documents: {filter_stats['total']}  "
               f"metadata-only: {filter_stats['metadata_only']}  "
               f"juvenile: {filter_stats['juvenile']}  coded: {n}")
    click.echo(f"decision coded: {decision_rate:.1%}   "
               f"legal basis coded: {basis_rate:.1%}")
    if len(coded) < len(kept):
        click.echo(f"soft failures: {len(kept) - len(coded)} "
                   f"(see run_log.jsonl)")


# ---------------------------------------------------------------------------
# analyze


def _narrative_lines(fit) -> list[str]:
    lines = []
    for i, name in enumerate(fit.names):
        if name == statsengine.INTERCEPT or fit.p_values[i] >= 0.05:
            continue
        pct = statsengine.percent_effect(float(fit.coef[i]))
        direction = "longer" if pct > 0 else "shorter"
        lines.append(f"{name}: B={fit.coef[i]:.2f} -> {abs(pct):.0f}% "
                     f"{direction} sentence")
    return lines


def _regression_json(steps, diagnostics: dict) -> dict:
    models = []
    for step in steps:
        fit = step.fit
        models.append({
            "label": step.label,
            "n": fit.n,
            "r2": fit.r2,
            "adj_r2": fit.adj_r2,
            "f": fit.f_stat,
            "f_df": list(fit.f_df),
            "f_p": fit.f_p,
            "delta_r2": step.delta_r2,
            "f_change": step.f_change,
            "f_change_p": step.f_change_p,
            "coefficients": [
                {"name": name,
                 "b": float(fit.coef[i]),
                 "se": float(fit.se[i]),
                 "t": float(fit.t_values[i]),
                 "p": float(fit.p_values[i]),
                 "stars": reports.stars(float(fit.p_values[i])),
                 "percent": (None if name == statsengine.INTERCEPT else
                             statsengine.percent_effect(float(fit.coef[i])))}
                for i, name in enumerate(fit.names)],
        })
    return {"models": models, "diagnostics": diagnostics}


@main.command()
@click.option("--records", "records_path", default=None,
              type=click.Path(exists=True), help="records.jsonl to derive "
              "the dataset from.")
@click.option("--dataset", "dataset_path", default=None,
              type=click.Path(exists=True), help="Existing dataset CSV.")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--statute-table", default=None)
@click.option("--outlier-threshold", type=float, default=None)
@click.option("--models", "models_spec", default=None,
              help="Comma list of model numbers to report (default 1,2,3).")
@click.pass_context
def analyze(ctx, records_path, dataset_path, out_dir, statute_table,
            outlier_threshold, models_spec):
    """Hierarchical regression, diagnostics, and descriptives reports."""
    threshold = _cfg(ctx, outlier_threshold, "outlier_threshold", 3.0)
    models_spec = _cfg(ctx, models_spec, "models", "1,2,3")
    try:
        selected = sorted({int(s) for s in str(models_spec).split(",")})
    except ValueError:
        raise click.ClickException(f"bad --models value: {models_spec!r}")
    if not selected or not set(selected) <= {1, 2, 3}:
        raise click.ClickException("--models must be a subset of 1,2,3")

    if (records_path is None) == (dataset_path is None):
        raise click.ClickException("give exactly one of --records/--dataset")
    os.makedirs(out_dir, exist_ok=True)
    if records_path is not None:
        table = _statute_table(ctx, statute_table)
        records = _load_records(records_path)
        rows = [codebook.derive_row(r, table) for r in records]
        codebook.export_dataset(rows, os.path.join(out_dir, "dataset.csv"))
    else:
        rows = codebook.read_dataset(dataset_path)

    try:
        steps = statsengine.fit_row_hierarchy(rows)
        x, y, names, kept = statsengine.build_design(rows)
    except ValueError as exc:
        raise click.ClickException(str(exc))

    final = steps[-1].fit
    dw = statsengine.durbin_watson(final.residuals)
    tol = statsengine.tolerances(x, names)
    outliers = statsengine.outlier_indexes(x, final, threshold)
    outlier_eclis = [rows[kept[i]].ecli for i in outliers]

    interactions = []
    max_cols = [n for n in names if n.startswith("max_")]
    for partner in ("prosecution_expertise", "guidelines"):
        step = statsengine.interaction_f_change(x, y, names, max_cols,
                                                [partner])
        interactions.append((f"max buckets x {partner}", step))

    corr_names, corr_r, corr_n = statsengine.correlation_matrix(
        statsengine.predictor_series(rows))
    off_diag = [abs(corr_r[i, j])
                for i in range(len(corr_names))
                for j in range(i + 1, len(corr_names))
                if not math.isnan(corr_r[i, j])]
    max_corr = max(off_diag) if off_diag else float("nan")

    shown = [steps[i - 1] for i in selected]
    regression_text = reports.format_hierarchy(shown)
    diag_text = reports.format_diagnostics(dw, tol, len(outliers), final.n)
    inter_lines = [
        f"{label}: delta R2 = {step.delta_r2:.4f}, "
        f"F change({step.f_change_df[0]}, {step.f_change_df[1]}) = "
        f"{step.f_change:.2f}{reports.stars(step.f_change_p)}"
        for label, step in interactions]
    narrative = _narrative_lines(final)

    report = "\n\n".join([
        regression_text,
        diag_text,
        "interaction tests:\n" + "\n".join("  " + l for l in inter_lines),
        f"max |r| between predictors: {max_corr:.3f}",
        "percent effects (significant coefficients, final model):\n"
        + "\n".join("  " + l for l in narrative),
    ]) + "\n"
    with open(os.path.join(out_dir, "regression.txt"), "w",
              encoding="utf-8") as handle:
        handle.write(report)

    diagnostics = {
        "durbin_watson": dw,
        "outlier_threshold": threshold,
        "outlier_eclis": outlier_eclis,
        "min_tolerance": min(tol.values()) if tol else None,
        "tolerances": tol,
        "max_abs_correlation": max_corr,
        "interactions": [
            {"label": label, "delta_r2": step.delta_r2,
             "f_change": step.f_change, "df": list(step.f_change_df),
             "p": step.f_change_p}
            for label, step in interactions],
    }
    with open(os.path.join(out_dir, "regression.json"), "w",
              encoding="utf-8") as handle:
        json.dump(_regression_json(shown, diagnostics), handle,
                  ensure_ascii=False, indent=2)
        handle.write("\n")

    with open(os.path.join(out_dir, "descriptives.txt"), "w",
              encoding="utf-8") as handle:
        handle.write(reports.format_descriptives(rows) + "\n")
    with open(os.path.join(out_dir, "correlations.txt"), "w",
              encoding="utf-8") as handle:
        handle.write(reports.format_correlations(corr_names, corr_r, corr_n)
                     + "\n")

    t_values = statsengine.studentized_residuals(x, final)
    with open(os.path.join(out_dir, "residuals.csv"), "w",
              encoding="utf-8", newline="") as handle:
        handle.write("ecli,fitted,residual,studentized\n")
        for pos, row_index in enumerate(kept):
            handle.write(f"{rows[row_index].ecli},{final.fitted[pos]!r},"
                         f"{final.residuals[pos]!r},{t_values[pos]!r}\n")

    click.echo(report)


# ---------------------------------------------------------------------------
# sample


@main.command()
@click.option("--records", "records_path", required=True,
              type=click.Path(exists=True))
@click.option("--size", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def sample(ctx, records_path, size, seed, out_path):
    """Draw the court-by-year stratified worksheet for manual checking."""
    size = _cfg(ctx, size, "sample_size", 275)
    seed = _cfg(ctx, seed, "seed", 0)
    records = _load_records(records_path)
    usable = [r for r in records
              if r.meta.court is not None and r.meta.date is not None]
    dropped = len(records) - len(usable)
    if dropped:
        click.echo(f"warning: {dropped} records lack court or date and "
                   f"cannot be stratified", err=True)
    try:
        chosen = statsengine.stratified_sample(
            usable, size, seed,
            key=lambda r: (r.meta.court, r.meta.date.year),
            id_key=lambda r: r.ecli)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    relmod.build_worksheet(chosen, out_path)
    if size == 0:
        click.echo("warning: sample size 0, worksheet is empty", err=True)
    click.echo(f"sampled {len(chosen)} of {len(usable)} -> {out_path}")


# ---------------------------------------------------------------------------
# reliability


@main.command()
@click.argument("worksheets", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--subset-ok", is_flag=True, default=None,
              help="Count the legal basis as agreeing when the program's "
                   "citations are a subset of the manual ones.")
@click.pass_context
def reliability(ctx, worksheets, subset_ok):
    """Score filled worksheets: TP/FP/FN/TN, accuracy, chance-corrected
    agreement; two worksheets give a before/after comparison."""
    if len(worksheets) > 2:
        raise click.ClickException("give one worksheet, or two to compare")
    subset_ok = bool(_cfg(ctx, subset_ok, "subset_ok", False))
    results = []
    for path in worksheets:
        try:
            tallies = relmod.compare_worksheet(relmod.read_worksheet(path),
                                               subset_ok=subset_ok)
        except ValueError as exc:
            raise click.ClickException(f"{path}: {exc}")
        kappas = {v: statsengine.cohens_kappa(t) for v, t in tallies.items()}
        results.append((path, tallies, kappas))
        click.echo(f"== {path} ==")
        click.echo(reports.format_reliability(tallies, kappas))
    if len(results) == 2:
        click.echo("== change (second minus first) ==")
        for variable in relmod.VARIABLES:
            first = results[0][2][variable][0]
            second = results[1][2][variable][0]
            click.echo(f"{variable:14s} accuracy {second - first:+.2f}")


# ---------------------------------------------------------------------------
# chisq


@main.command()
@click.option("--records", "records_path", required=True,
              type=click.Path(exists=True))
@click.option("--corpus", "corpus_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Judgment XML directory; needed for keywords other than "
                   "the built-in large-scale flag.")
@click.option("--keyword", default=None, show_default="grootschalig")
@click.option("--flag", "flag_name", default=None,
              show_default="special_skills")
@click.option("--statute-table", default=None)
@click.pass_context
def chisq(ctx, records_path, corpus_dir, keyword, flag_name, statute_table):
    """Association between a keyword and a dataset flag (2x2 chi-square)."""
    keyword = _cfg(ctx, keyword, "keyword", "grootschalig")
    flag_name = _cfg(ctx, flag_name, "flag", "special_skills")
    if flag_name not in codebook.DATASET_COLUMNS:
        raise click.ClickException(f"unknown dataset flag {flag_name!r}")
    table = _statute_table(ctx, statute_table)
    records = _load_records(records_path)
    rows = [codebook.derive_row(r, table) for r in records]

    folded = textnorm.fold_collapse(keyword).lower()
    if corpus_dir is not None:
        import re as _re

        pattern = _re.compile(r"\b" + _re.escape(folded) + r"\w*")
        presence = {}
        for doc in ingest.load_corpus(corpus_dir):
            press = doc.meta.press_release or ""
            text = f"{doc.plain_text} {press}".lower()
            presence[doc.meta.ecli] = bool(pattern.search(text))
    elif folded == "grootschalig":
        presence = {r.ecli: r.large_scale_mentioned for r in records}
    else:
        raise click.ClickException(
            f"keyword {keyword!r} needs --corpus to scan document text")

    a = b = c = d = 0
    for row in rows:
        if row.ecli not in presence:
            continue
        value = getattr(row, flag_name)
        if value is None:
            continue
        if presence[row.ecli]:
            a, b = (a + 1, b) if value else (a, b + 1)
        else:
            c, d = (c + 1, d) if value else (c, d + 1)
    try:
        stat, p = statsengine.chi_square_2x2(a, b, c, d)
    except ValueError as exc:
        raise click.ClickException(f"degenerate table "
                                   f"[[{a}, {b}], [{c}, {d}]]: {exc}")
    with_kw = a / (a + b) if a + b else float("nan")
    without_kw = c / (c + d) if c + d else float("nan")
    click.echo(f"keyword {keyword!r} x flag {flag_name!r}: "
               f"[[{a}, {b}], [{c}, {d}]]")
    click.echo(f"{flag_name} share: {with_kw:.1%} with keyword, "
               f"{without_kw:.1%} without")
    click.echo(f"chi2(1) = {stat:.1f}, p = {p:.2g}")


# ---------------------------------------------------------------------------
# lint


@main.command(name="lint")
@click.option("--corpus", "corpus_dir", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--statute-table", default=None)
@click.option("--enable", "enabled", multiple=True, metavar="RULE")
@click.option("--disable", "disabled", multiple=True, metavar="RULE")
@click.option("--date", "date_checked", default=None,
              help="date_checked value for the report (YYYY-MM-DD); "
                   "defaults to today.")
@click.option("--details", is_flag=True, help="Print every finding.")
@click.pass_context
def lint_cmd(ctx, corpus_dir, out_dir, statute_table, enabled, disabled,
             date_checked, details):
    """Scan a corpus for anonymization gaps and description defects."""
    table = _statute_table(ctx, statute_table)
    try:
        toggles = lintmod.apply_overrides(
            lintmod.load_rule_toggles(),
            enabled or ctx.obj.get("lint_enable", ()),
            disabled or ctx.obj.get("lint_disable", ()))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if date_checked is None:
        date_checked = dt.date.today().isoformat()
    else:
        try:
            dt.date.fromisoformat(date_checked)
        except ValueError:
            raise click.ClickException(f"bad --date: {date_checked!r}")

    os.makedirs(out_dir, exist_ok=True)
    issues = []
    documents = 0
    for doc in sorted(ingest.load_corpus(corpus_dir),
                      key=lambda d: d.meta.ecli):
        documents += 1
        record = extract.code_judgment(doc)
        issues.extend(lintmod.lint_document(doc, record, table, toggles))

    with open(os.path.join(out_dir, "lint.csv"), "w", encoding="utf-8",
              newline="") as handle:
        import csv as _csv

        writer = _csv.writer(handle)
        writer.writerow(["ecli", "date_checked", "category", "rule",
                         "excerpt"])
        for issue in issues:
            writer.writerow([issue.ecli, date_checked, issue.category,
                             issue.rule, issue.excerpt])
    with open(os.path.join(out_dir, "lint.json"), "w",
              encoding="utf-8") as handle:
        json.dump([{"ecli": i.ecli, "date_checked": date_checked,
                    "category": i.category, "rule": i.rule,
                    "excerpt": i.excerpt} for i in issues],
                  handle, ensure_ascii=False, indent=2)
        handle.write("\n")

    click.echo(reports.format_lint(issues, documents))
    if details and issues:
        click.echo(reports.format_lint_details(issues))


if __name__ == "__main__":
    sys.exit(main())

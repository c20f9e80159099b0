"""Command-line interface: ``afp-src fit | predict | evaluate | sweep | noise | encode``."""

from __future__ import annotations

import csv
import functools
import hashlib
import io
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import artifact
from .classifier import classify_batch, fit_model
from .config import Config, load_config, parse_pc_list
from .encoding import Encoding, EncodingError, encode, encode_batch, write_feature_csv
from .experiments import format_sweep_csv, noise_robustness, pc_sweep, split_dataset
from .metrics import REPORT_COLUMNS, evaluate_labels
from .pca import project_batch
from .seqio import AFP, NON_AFP, FastaError, read_fasta

PREDICT_COLUMNS = ["id", "label", "r1", "r2", "score1", "score2", "converged"]


def _fmt(x: float) -> str:
    return repr(float(x))


def _shared_options(f):
    opts = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="Flat key = value config file; flags override it."),
        click.option("--encoding", type=click.Choice([e.value for e in Encoding]), default=None),
        click.option("--pcs", type=int, default=None, help="Number of principal components kept."),
        click.option("--lambda", "lam", type=float, default=None,
                     help="l1 penalty relative to max|T^T t| of each probe."),
        click.option("--tol", type=float, default=None),
        click.option("--max-iter", type=int, default=None),
        click.option("--seed", type=int, default=None),
        click.option("--drop-ambiguous/--strict", "drop_ambiguous", default=None,
                     help="Drop residues outside the 20-letter alphabet instead of failing."),
        click.option("--jobs", type=int, default=None,
                     help="Worker threads for probe chunks; results do not depend on it."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _config(config_path, **overrides) -> Config:
    try:
        return load_config(config_path, **overrides)
    except (ValueError, OSError) as e:
        raise click.ClickException(str(e))


def _errors_as_click(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (FastaError, EncodingError, artifact.ModelFormatError, ValueError, OSError) as e:
            raise click.ClickException(str(e))
    return wrapper


def _load_labeled(afp_path, non_path, cfg: Config):
    afps = read_fasta(afp_path, drop_ambiguous=cfg.drop_ambiguous)
    nons = read_fasta(non_path, drop_ambiguous=cfg.drop_ambiguous)
    if not afps or not nons:
        raise click.ClickException("each class needs at least one sequence")
    return afps, nons


def _encode_labeled(items, kind):
    X = encode_batch([it.record for it in items], kind)
    y = np.array([it.label for it in items], dtype=np.int8)
    return X, y


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _comment_header(pairs: dict) -> str:
    return "".join(f"# {k}={v}\n" for k, v in pairs.items())


@click.group()
@click.option("-v", "--verbose", is_flag=True)
def main(verbose):
    """Sparse representation classification of antifreeze proteins."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.argument("non_afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@_shared_options
@_errors_as_click
def fit(afp_fasta, non_afp_fasta, output, config_path, **flags):
    """Build a model from one FASTA file per class."""
    cfg = _config(config_path, **flags)
    afps, nons = _load_labeled(afp_fasta, non_afp_fasta, cfg)
    records = afps + nons
    X = encode_batch(records, cfg.encoding)
    y = np.array([AFP] * len(afps) + [NON_AFP] * len(nons), dtype=np.int8)
    model = fit_model(X, y, cfg.pcs, cfg.encoding, cfg.solver)
    artifact.save_model(model, output)
    click.echo(
        f"fitted {len(afps)} AFP + {len(nons)} non-AFP sequences; "
        f"encoding={cfg.encoding} d={model.pca.dim} k={model.k} "
        f"dictionary={model.dictionary.p}x{model.dictionary.m} -> {output}"
    )


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("fasta", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", default="-", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--drop-ambiguous/--strict", "drop_ambiguous", default=False)
@click.option("--jobs", type=int, default=1)
@_errors_as_click
def predict(model_file, fasta, output, drop_ambiguous, jobs):
    """Classify every sequence in FASTA; one CSV row per record, input order."""
    model = artifact.load_model(model_file)
    records = read_fasta(fasta, drop_ambiguous=drop_ambiguous)

    feats, ok, failures = [], [], []
    for i, rec in enumerate(records):
        try:
            feats.append(encode(rec.sequence, model.encoding))
            ok.append(i)
        except EncodingError as e:
            failures.append((rec.id, str(e)))
    X = np.array(feats).reshape(len(feats), model.pca.dim)
    if len(ok):
        P = project_batch(model.pca, X, model.k)
        zero = np.linalg.norm(P, axis=1) == 0
        for j in np.flatnonzero(zero):
            failures.append((records[ok[j]].id, "projected probe has zero norm"))
        ok = [i for i, z in zip(ok, zero) if not z]
        X = X[~zero]
    result = classify_batch(model, X, jobs) if len(ok) else None

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PREDICT_COLUMNS)
    row_of = {i: j for j, i in enumerate(ok)}
    for i, rec in enumerate(records):
        j = row_of.get(i)
        if j is None:
            w.writerow([rec.id, "ERROR", "", "", "", "", ""])
            continue
        c = result[j]
        w.writerow([rec.id, c.label, _fmt(c.residuals[0]), _fmt(c.residuals[1]),
                    _fmt(c.scores[0]), _fmt(c.scores[1]), int(c.converged)])
    _write_text(output, buf.getvalue())
    for rid, msg in failures:
        click.echo(f"error: {rid}: {msg}", err=True)
    if failures:
        sys.exit(1)


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.argument("non_afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", default="-", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--drop-ambiguous/--strict", "drop_ambiguous", default=False)
@click.option("--jobs", type=int, default=1)
@_errors_as_click
def evaluate(model_file, afp_fasta, non_afp_fasta, output, drop_ambiguous, jobs):
    """Score a model on labeled test files (one per class); writes one metrics row."""
    raw = Path(model_file).read_bytes()
    model = artifact.loads(raw)
    afps = read_fasta(afp_fasta, drop_ambiguous=drop_ambiguous)
    nons = read_fasta(non_afp_fasta, drop_ambiguous=drop_ambiguous)
    X = encode_batch(afps + nons, model.encoding)
    y = np.array([AFP] * len(afps) + [NON_AFP] * len(nons), dtype=np.int8)
    report = evaluate_labels(y, classify_batch(model, X, jobs).labels)

    buf = io.StringIO()
    buf.write(_comment_header({
        "encoding": model.encoding.value, "lambda": model.solver.lam_rel,
        "tol": model.solver.tol, "max_iter": model.solver.max_iter,
        "model_hash": hashlib.sha256(raw).hexdigest(),
    }))
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    w.writerow(report.csv_row(model.k))
    _write_text(output, buf.getvalue())


@main.command()
@click.argument("afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.argument("non_afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", default="-", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--pc-list", default=None, help="Comma-separated component counts.")
@click.option("--train-per-class", type=int, default=None)
@_shared_options
@_errors_as_click
def sweep(afp_fasta, non_afp_fasta, output, pc_list, config_path, **flags):
    """Split each class into train/test and evaluate every component count."""
    cfg = _config(config_path, pc_list=parse_pc_list(pc_list) if pc_list else None, **flags)
    afps, nons = _load_labeled(afp_fasta, non_afp_fasta, cfg)
    split = split_dataset(afps, nons, cfg.split)
    Xtr, ytr = _encode_labeled(split.train, cfg.encoding)
    Xte, yte = _encode_labeled(split.test, cfg.encoding)
    result = pc_sweep(Xtr, ytr, Xte, yte, cfg.pc_list, cfg.solver, cfg.jobs)
    for msg in result.warnings:
        click.echo(f"warning: {msg}", err=True)
    _emit_sweep(output, result, cfg, n_train=len(split.train), n_test=len(split.test))


@main.command()
@click.argument("afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.argument("non_afp_fasta", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", default="-", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--sigma", type=float, default=None, help="Noise standard deviation (default 1).")
@click.option("--noise-stage", type=click.Choice(["projected", "raw"]), default=None)
@click.option("--pc-list", default=None, help="Comma-separated component counts.")
@_shared_options
@_errors_as_click
def noise(afp_fasta, non_afp_fasta, output, pc_list, config_path, **flags):
    """Self-classify the training files against a noise-corrupted dictionary."""
    cfg = _config(config_path, pc_list=parse_pc_list(pc_list) if pc_list else None, **flags)
    afps, nons = _load_labeled(afp_fasta, non_afp_fasta, cfg)
    X = encode_batch(afps + nons, cfg.encoding)
    y = np.array([AFP] * len(afps) + [NON_AFP] * len(nons), dtype=np.int8)
    result = noise_robustness(X, y, cfg.sigma, cfg.seed, cfg.pc_list, cfg.solver,
                              cfg.noise_stage, cfg.jobs)
    for msg in result.warnings:
        click.echo(f"warning: {msg}", err=True)
    _emit_sweep(output, result, cfg, n_train=len(y))


def _emit_sweep(output, result, cfg: Config, **extra):
    _write_text(output, format_sweep_csv(result, {**cfg.as_header(), **extra}))


@main.command("encode")
@click.argument("fasta", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False))
@click.option("--encoding", type=click.Choice([e.value for e in Encoding]), default="seg2")
@click.option("--drop-ambiguous/--strict", "drop_ambiguous", default=False)
@_errors_as_click
def encode_cmd(fasta, output, encoding, drop_ambiguous):
    """Export the feature matrix of FASTA as CSV."""
    write_feature_csv(output, read_fasta(fasta, drop_ambiguous=drop_ambiguous), encoding)


if __name__ == "__main__":
    main()

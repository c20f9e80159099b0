"""Experimental protocols: seeded class-wise split, principal-component sweep,
noisy-dictionary robustness, and synthetic benchmarks for testing."""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import zlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classifier import SolverParams, build_dictionary, classify_probes
from .metrics import REPORT_COLUMNS, MetricsReport, evaluate_labels
from .pca import PcaModel, fit_pca, project_batch
from .seqio import AFP, ALPHABET, NON_AFP, LabeledRecord, ProteinRecord

log = logging.getLogger(__name__)

DEFAULT_PC_LIST = (10, 20, 30, 40, 50, 60, 70, 80, 90, 100,
                   150, 175, 200, 225, 250, 300, 400, 500, 600)
NOISE_STAGES = ("projected", "raw")


def rng_for(seed: int, *stream) -> np.random.Generator:
    """Counter-based generator keyed by the user seed plus a stream label.

    Stream labels keep the split, the noise for each k, etc. independent of
    one another and of the order in which they are drawn.
    """
    words = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for s in stream:
        words.append(zlib.crc32(s.encode()) if isinstance(s, str) else int(s))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(words)))


@dataclass(frozen=True)
class SplitSpec:
    train_per_class: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.train_per_class < 1:
            raise ValueError("train_per_class must be positive")


@dataclass
class Split:
    train: list
    test: list

    @staticmethod
    def labels(items) -> np.ndarray:
        return np.array([it.label for it in items], dtype=np.int8)


def split_dataset(afps: Sequence, non_afps: Sequence, spec: SplitSpec) -> Split:
    """Draw ``train_per_class`` items per class without replacement; the rest is test.

    Items are wrapped as :class:`LabeledRecord` when they are
    :class:`ProteinRecord` instances and returned as-is otherwise (they must
    then carry a ``label``). Original order is kept on both sides. Each class
    must keep at least one test item.
    """
    train, test = [], []
    for label, items in ((AFP, afps), (NON_AFP, non_afps)):
        n = len(items)
        if spec.train_per_class >= n:
            raise ValueError(
                f"class {label} has {n} samples; need more than {spec.train_per_class} "
                "to leave at least one for testing"
            )
        chosen = np.zeros(n, dtype=bool)
        chosen[rng_for(spec.seed, "split", label).permutation(n)[:spec.train_per_class]] = True
        for i, item in enumerate(items):
            if isinstance(item, ProteinRecord):
                item = LabeledRecord(item, label)
            (train if chosen[i] else test).append(item)
    return Split(train, test)


@dataclass
class SweepRow:
    pcs: int
    report: MetricsReport | None
    note: str = "ok"


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def completed(self) -> list[SweepRow]:
        return [r for r in self.rows if r.report is not None]


def _check_pc_list(pc_list) -> list[int]:
    pcs = [int(k) for k in pc_list]
    if not pcs or any(k < 1 for k in pcs):
        raise ValueError("pc_list must hold positive integers")
    if any(b <= a for a, b in zip(pcs, pcs[1:])):
        raise ValueError("pc_list must be strictly increasing")
    return pcs


def _rank_note(pca: PcaModel, k: int) -> str | None:
    if k > pca.dim:
        return f"skipped: k={k} exceeds feature dimension {pca.dim}"
    if k > pca.rank_bound:
        return f"skipped: k={k} exceeds rank bound n-1={pca.n_samples - 1}"
    return None


def pca_hash(pca: PcaModel, labels) -> str:
    h = hashlib.sha256()
    for a in (pca.mean, pca.eigenvalues, pca.components, np.asarray(labels, dtype=np.int8)):
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


def pc_sweep(X_train, y_train, X_test, y_test, pc_list=DEFAULT_PC_LIST,
             params: SolverParams = SolverParams(), jobs: int = 1) -> SweepResult:
    """Fit PCA once on the training matrix, then evaluate each k on the test set."""
    pcs = _check_pc_list(pc_list)
    pca = fit_pca(X_train)
    y_test = np.asarray(y_test)
    result = SweepResult(meta={"model_hash": pca_hash(pca, y_train)})
    for k in pcs:
        note = _rank_note(pca, k)
        if note:
            log.warning(note)
            result.warnings.append(note)
            result.rows.append(SweepRow(k, None, note))
            continue
        D = build_dictionary(project_batch(pca, X_train, k), y_train)
        out = classify_probes(D, project_batch(pca, X_test, k), params, jobs)
        result.rows.append(SweepRow(k, evaluate_labels(y_test, out.labels)))
        log.info("k=%d done", k)
    return result


def noise_robustness(X_train, y_train, sigma: float = 1.0, seed: int = 0,
                     pc_list=DEFAULT_PC_LIST, params: SolverParams = SolverParams(),
                     stage: str = "projected", jobs: int = 1) -> SweepResult:
    """Self-classify the training set against a noise-corrupted dictionary.

    Each training sample is scaled to unit norm and receives i.i.d.
    N(0, sigma^2) noise before it becomes a dictionary column; probes are the
    clean samples. ``stage`` selects whether the noise enters after the PCA
    projection (default) or on the raw feature vectors. The noise is applied
    as ``v + sigma * ||v|| * z``, which is the same column after normalization
    and leaves ``v`` bit-for-bit unchanged when sigma is 0.
    """
    if not (np.isfinite(sigma) and sigma >= 0):
        raise ValueError(f"sigma must be a finite nonnegative number, got {sigma}")
    if stage not in NOISE_STAGES:
        raise ValueError(f"stage must be one of {NOISE_STAGES}, got {stage!r}")
    pcs = _check_pc_list(pc_list)
    X_train = np.asarray(X_train, dtype=np.float64)
    y_train = np.asarray(y_train)
    pca = fit_pca(X_train)
    result = SweepResult(meta={"model_hash": pca_hash(pca, y_train)})

    def corrupt(V, k):
        if sigma == 0:
            return V
        z = rng_for(seed, "noise", stage, k).standard_normal(V.shape)
        return V + sigma * np.linalg.norm(V, axis=1, keepdims=True) * z

    for k in pcs:
        note = _rank_note(pca, k)
        if note:
            log.warning(note)
            result.warnings.append(note)
            result.rows.append(SweepRow(k, None, note))
            continue
        probes = project_batch(pca, X_train, k)
        if stage == "projected":
            cols = corrupt(probes, k)
        else:
            cols = project_batch(pca, corrupt(X_train, k), k)
        D = build_dictionary(cols, y_train)
        out = classify_probes(D, probes, params, jobs)
        result.rows.append(SweepRow(k, evaluate_labels(y_train, out.labels)))
    return result


def format_sweep_csv(result: SweepResult, header: dict | None = None) -> str:
    """One row per requested k; skipped rows keep empty metric cells."""
    buf = io.StringIO()
    for key, val in {**(header or {}), **result.meta}.items():
        buf.write(f"# {key}={val}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS + ["status"])
    for row in result.rows:
        if row.report is None:
            w.writerow([row.pcs] + [""] * (len(REPORT_COLUMNS) - 1) + [row.note])
        else:
            w.writerow(row.report.csv_row(row.pcs) + [row.note])
    return buf.getvalue()


def write_sweep_csv(path, result: SweepResult, header: dict | None = None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_sweep_csv(result, header))


# -- synthetic benchmarks -------------------------------------------------

def gaussian_clusters(p: int = 10, n_dict: int = 20, n_probe: int = 100, seed: int = 42,
                      spread: float = 3.0, rank: int = 3, scale: float = 4.0,
                      noise: float = 0.1):
    """Two Gaussian clusters, each stretched along its own random ``rank``-dim subspace.

    A sample of class c is ``mean_c + scale * U_c g + noise * e`` with
    ``g ~ N(0, I_rank)``, ``e ~ N(0, I_p)``, mean entries N(0, spread^2) and
    ``U_c`` a random orthonormal basis. The class-specific subspaces matter:
    after centering, two isotropic clusters sit at antipodal points, which a
    signed linear code cannot tell apart.

    Returns ``(D_samples, D_labels, probes, probe_labels)``.
    """
    rng = rng_for(seed, "clusters")
    means = spread * rng.standard_normal((2, p))
    bases = [np.linalg.qr(rng.standard_normal((p, rank)))[0] for _ in range(2)]

    def draw(n):
        X = np.concatenate([
            means[c] + scale * rng.standard_normal((n, rank)) @ bases[c].T
            + noise * rng.standard_normal((n, p))
            for c in range(2)
        ])
        y = np.repeat(np.array([AFP, NON_AFP], dtype=np.int8), n)
        return X, y

    Xd, yd = draw(n_dict)
    Xp, yp = draw(n_probe)
    return Xd, yd, Xp, yp


def nearest_centroid(X_train, y_train, X_test) -> np.ndarray:
    """Label each test row by the closest class mean of the training rows."""
    y_train = np.asarray(y_train)
    cents = np.stack([X_train[y_train == c].mean(axis=0) for c in (AFP, NON_AFP)])
    d = ((X_test[:, None, :] - cents[None]) ** 2).sum(axis=2)
    return np.where(d[:, 0] <= d[:, 1], AFP, NON_AFP).astype(np.int8)


def composition_records(X, labels, seed: int = 0, length: int = 10000,
                        fill: float = 0.5) -> list[ProteinRecord]:
    """Write real vectors (dimension <= 19) as sequences whose AAC encodes them.

    Each row x becomes the composition ``1/20 + a * B x``, where B has
    orthonormal columns orthogonal to the all-ones vector (so compositions
    still sum to 1) and ``a`` keeps every frequency at least
    ``(1 - fill) / 20``. The map is an isometry up to the factor ``a``, so
    PCA of the AAC vectors sees the same geometry as PCA of X, apart from
    count rounding of order ``1 / length``. Residue order within a sequence
    is shuffled; AAC does not depend on it.

    All rows share one map, so dictionary and probe rows that must live in
    the same space have to be embedded in a single call. Records come back
    in row order with ids ``afpNNNN`` / ``nonNNNN`` counted per class.
    """
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    n_res = len(ALPHABET)
    if X.ndim != 2 or X.shape[1] >= n_res:
        raise ValueError(f"need an n x d matrix with d < {n_res}")
    rng = rng_for(seed, "composition")
    G = np.concatenate([np.ones((n_res, 1)), rng.standard_normal((n_res, X.shape[1]))], axis=1)
    B = np.linalg.qr(G)[0][:, 1:]
    offsets = X @ B.T
    a = fill / (n_res * np.abs(offsets).max())
    freqs = 1.0 / n_res + a * offsets
    out, seen = [], {AFP: 0, NON_AFP: 0}
    for i, (f, label) in enumerate(zip(freqs, labels)):
        counts = np.rint(length * f).astype(int)
        seq = rng.permutation(np.repeat(np.arange(n_res), counts))
        prefix = "afp" if label == AFP else "non"
        rid = f"{prefix}{seen[int(label)]:04d}"
        seen[int(label)] += 1
        out.append(ProteinRecord(rid, f"embedded row={i}", tuple(int(s) for s in seq)))
    return out


# residues over-represented in each synthetic class
_ENRICHED = {AFP: "AGNST", NON_AFP: "EKLRD"}


def synthetic_proteins(n: int, label: int, seed: int, min_len: int = 60,
                       max_len: int = 200, enrichment: float = 3.0) -> list[ProteinRecord]:
    """Random sequences whose composition is skewed towards a class-specific residue set."""
    rng = rng_for(seed, "proteins", label)
    w = np.ones(len(ALPHABET))
    for aa in _ENRICHED[label]:
        w[ALPHABET.index(aa)] = enrichment
    w /= w.sum()
    prefix = "afp" if label == AFP else "non"
    out = []
    for i in range(n):
        L = int(rng.integers(min_len, max_len + 1))
        seq = rng.choice(len(ALPHABET), size=L, p=w)
        out.append(ProteinRecord(f"{prefix}{i:04d}", f"synthetic class={label}", tuple(int(s) for s in seq)))
    return out

"""Composition features: AAC (20), DPC (400) and the two-segment AAC+DPC (840)."""

from __future__ import annotations

import csv
import enum
from typing import Sequence

import numpy as np

from .seqio import ALPHABET, ProteinRecord

N_AA = len(ALPHABET)


class EncodingError(ValueError):
    def __init__(self, message, record_id=None):
        super().__init__(message)
        self.record_id = record_id


class Encoding(str, enum.Enum):
    AAC = "aac"
    DPC = "dpc"
    SEG2 = "seg2"

    @property
    def dim(self) -> int:
        return {"aac": N_AA, "dpc": N_AA * N_AA, "seg2": 2 * (N_AA + N_AA * N_AA)}[self.value]

    @property
    def min_length(self) -> int:
        return {"aac": 1, "dpc": 2, "seg2": 4}[self.value]


def _as_indices(seq) -> np.ndarray:
    a = np.asarray(seq, dtype=np.intp)
    if a.ndim != 1:
        raise EncodingError("sequence must be one-dimensional")
    if a.size and (a.min() < 0 or a.max() >= N_AA):
        raise EncodingError("residue index out of range")
    return a


def aac(seq) -> np.ndarray:
    """Relative frequency of each residue, in alphabet order."""
    a = _as_indices(seq)
    if a.size < 1:
        raise EncodingError("AAC needs at least 1 residue")
    return np.bincount(a, minlength=N_AA) / a.size


def dpc(seq) -> np.ndarray:
    """Relative frequency of adjacent residue pairs; pair (i, j) sits at 20*i + j."""
    a = _as_indices(seq)
    if a.size < 2:
        raise EncodingError("DPC needs at least 2 residues")
    pairs = N_AA * a[:-1] + a[1:]
    return np.bincount(pairs, minlength=N_AA * N_AA) / (a.size - 1)


def split_halves(seq):
    a = _as_indices(seq)
    cut = (a.size + 1) // 2
    return a[:cut], a[cut:]


def seg2_features(seq) -> np.ndarray:
    """[AAC | DPC] of each half; the first half takes the extra residue."""
    a = _as_indices(seq)
    if a.size < 4:
        raise EncodingError("two-segment encoding needs at least 4 residues")
    s1, s2 = split_halves(a)
    return np.concatenate([aac(s1), dpc(s1), aac(s2), dpc(s2)])


_ENCODERS = {Encoding.AAC: aac, Encoding.DPC: dpc, Encoding.SEG2: seg2_features}


def encode(seq, kind) -> np.ndarray:
    return _ENCODERS[Encoding(kind)](seq)


def encode_batch(records: Sequence[ProteinRecord], kind) -> np.ndarray:
    kind = Encoding(kind)
    X = np.zeros((len(records), kind.dim))
    for row, rec in enumerate(records):
        try:
            X[row] = _ENCODERS[kind](rec.sequence)
        except EncodingError as e:
            raise EncodingError(f"record {rec.id!r}: {e}", rec.id) from None
    return X


def feature_names(kind) -> list[str]:
    kind = Encoding(kind)
    aac_names = [f"AAC_{a}" for a in ALPHABET]
    dpc_names = [f"DPC_{a}{b}" for a in ALPHABET for b in ALPHABET]
    if kind is Encoding.AAC:
        return aac_names
    if kind is Encoding.DPC:
        return dpc_names
    block = aac_names + dpc_names
    return [f"S1_{n}" for n in block] + [f"S2_{n}" for n in block]


def write_feature_csv(path, records: Sequence[ProteinRecord], kind) -> None:
    X = encode_batch(records, kind)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + feature_names(kind))
        for rec, row in zip(records, X):
            w.writerow([rec.id] + [repr(float(v)) for v in row])

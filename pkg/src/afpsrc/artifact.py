"""Binary model container (``.srcm``).

Layout, all integers unsigned little-endian, all floats little-endian float64:

    offset  field
    0       magic            4 bytes  b"SRCM"
    4       version          u32      (currently 1)
    8       encoding         u32      0 = aac, 1 = dpc, 2 = seg2
    12      k                u32      retained components
    16      p                u32      dictionary rows (== k)
    20      m                u32      dictionary columns
    24      d                u32      feature dimension
    28      n_train          u32      samples the PCA was fitted on
    32      alphabet_len     u32
    36      alphabet         alphabet_len ASCII bytes
    ..      mean             d floats
    ..      eigenvalues      d floats
    ..      components       d*d floats, column-major
    ..      dictionary       p*m floats, column-major
    ..      labels           m bytes, each 1 or 2
    ..      lambda_rel       float
    ..      tol              float
    ..      max_iter         u32

Readers reject any other magic or version, and trailing bytes.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

import numpy as np

from .classifier import Dictionary, SolverParams, SrcModel
from .encoding import Encoding
from .pca import PcaModel
from .seqio import ALPHABET

MAGIC = b"SRCM"
VERSION = 1
_KINDS = [Encoding.AAC, Encoding.DPC, Encoding.SEG2]
_HEADER = struct.Struct("<4s8I")


class ModelFormatError(ValueError):
    pass


def _floats(a) -> bytes:
    return np.asarray(a, dtype="<f8").tobytes(order="F")


def dumps(model: SrcModel) -> bytes:
    pca, D = model.pca, model.dictionary
    alpha = ALPHABET.encode("ascii")
    parts = [
        _HEADER.pack(MAGIC, VERSION, _KINDS.index(model.encoding), model.k, D.p, D.m,
                     pca.dim, pca.n_samples, len(alpha)),
        alpha,
        _floats(pca.mean),
        _floats(pca.eigenvalues),
        _floats(pca.components),
        _floats(D.columns),
        np.asarray(D.labels, dtype=np.uint8).tobytes(),
        struct.pack("<ddI", model.solver.lam_rel, model.solver.tol, model.solver.max_iter),
    ]
    return b"".join(parts)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise ModelFormatError("model file is truncated")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def floats(self, shape) -> np.ndarray:
        n = int(np.prod(shape))
        a = np.frombuffer(self.take(8 * n), dtype="<f8").astype(np.float64)
        # same memory layout as a freshly fitted model, so BLAS takes the same path
        return np.ascontiguousarray(a.reshape(shape, order="F"))


def loads(buf: bytes) -> SrcModel:
    if len(buf) < _HEADER.size or buf[:4] != MAGIC:
        raise ModelFormatError("not a model file")
    r = _Reader(buf)
    magic, version, kind, k, p, m, d, n_train, alen = _HEADER.unpack(r.take(_HEADER.size))
    if version != VERSION:
        raise ModelFormatError(f"unsupported model format version {version} (expected {VERSION})")
    if kind >= len(_KINDS):
        raise ModelFormatError(f"unknown encoding code {kind}")
    alphabet = r.take(alen).decode("ascii", errors="replace")
    if alphabet != ALPHABET:
        raise ModelFormatError(f"model uses residue order {alphabet!r}, expected {ALPHABET!r}")
    mean = r.floats((d,))
    eig = r.floats((d,))
    comps = r.floats((d, d))
    cols = r.floats((p, m))
    labels = np.frombuffer(r.take(m), dtype=np.uint8).astype(np.int8)
    lam_rel, tol, max_iter = struct.unpack("<ddI", r.take(struct.calcsize("<ddI")))
    if r.pos != len(buf):
        raise ModelFormatError("trailing bytes after model data")
    for a in (mean, eig, comps, cols, labels):
        a.setflags(write=False)
    try:
        pca = PcaModel(mean=mean, components=comps, eigenvalues=eig, n_samples=n_train)
        return SrcModel(
            pca=pca,
            dictionary=Dictionary(cols, labels),
            k=k,
            encoding=_KINDS[kind],
            solver=SolverParams(lam_rel, tol, max_iter),
        )
    except ValueError as e:
        raise ModelFormatError(f"inconsistent model file: {e}") from None


def save_model(model: SrcModel, path) -> None:
    Path(path).write_bytes(dumps(model))


def load_model(path) -> SrcModel:
    return loads(Path(path).read_bytes())


def model_hash(model: SrcModel) -> str:
    return hashlib.sha256(dumps(model)).hexdigest()

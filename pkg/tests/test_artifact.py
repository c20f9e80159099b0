import struct

import numpy as np
import pytest

from afpsrc import artifact
from afpsrc.classifier import SolverParams, classify_batch, fit_model


@pytest.fixture
def model(rng):
    X = rng.random((12, 20))
    return fit_model(X, [1] * 5 + [2] * 7, 6, "aac", SolverParams(2e-4, 1e-7, 321))


def test_round_trip(model, tmp_path):
    p = tmp_path / "m.srcm"
    artifact.save_model(model, p)
    back = artifact.load_model(p)
    assert back.k == 6 and back.encoding == model.encoding and back.solver == model.solver
    for a, b in ((back.pca.mean, model.pca.mean), (back.pca.components, model.pca.components),
                 (back.pca.eigenvalues, model.pca.eigenvalues), (back.dictionary.columns, model.dictionary.columns),
                 (back.dictionary.labels, model.dictionary.labels)):
        assert np.array_equal(a, b)
    assert back.pca.n_samples == 12
    assert artifact.dumps(back) == artifact.dumps(model)
    assert artifact.model_hash(back) == artifact.model_hash(model)


def test_loaded_model_classifies_identically(model, rng):
    X = rng.random((4, 20))
    a = classify_batch(model, X)
    b = classify_batch(artifact.loads(artifact.dumps(model)), X)
    assert a.residuals.tobytes() == b.residuals.tobytes()


def test_header_layout(model):
    buf = artifact.dumps(model)
    magic, version, kind, k, p, m, d, n, alen = struct.unpack_from("<4s8I", buf)
    assert (magic, version, kind, k, p, m, d, n, alen) == (b"SRCM", 1, 0, 6, 6, 12, 20, 12, 20)
    assert buf[36:56] == b"ACDEFGHIKLMNPQRSTVWY"
    expected = 36 + 20 + 8 * (20 + 20 + 400 + 6 * 12) + 12 + 8 + 8 + 4
    assert len(buf) == expected


def test_bad_magic(model):
    buf = bytearray(artifact.dumps(model))
    buf[0:4] = b"XXXX"
    with pytest.raises(artifact.ModelFormatError, match="not a model file"):
        artifact.loads(bytes(buf))
    with pytest.raises(artifact.ModelFormatError, match="not a model file"):
        artifact.loads(b"SR")


def test_unknown_version(model):
    buf = bytearray(artifact.dumps(model))
    buf[4:8] = struct.pack("<I", 2)
    with pytest.raises(artifact.ModelFormatError, match="version 2"):
        artifact.loads(bytes(buf))


def test_truncated_and_trailing(model):
    buf = artifact.dumps(model)
    with pytest.raises(artifact.ModelFormatError, match="truncated"):
        artifact.loads(buf[:-1])
    with pytest.raises(artifact.ModelFormatError, match="trailing"):
        artifact.loads(buf + b"\0")


def test_alphabet_checked(model):
    buf = bytearray(artifact.dumps(model))
    buf[36:38] = b"CA"
    with pytest.raises(artifact.ModelFormatError, match="residue order"):
        artifact.loads(bytes(buf))

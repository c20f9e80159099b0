import csv
import io

import numpy as np
import pytest
from click.testing import CliRunner

from afpsrc import artifact
from afpsrc.cli import main
from afpsrc.experiments import composition_records, gaussian_clusters, synthetic_proteins
from afpsrc.seqio import write_fasta


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fasta_pair(tmp_path):
    a, n = tmp_path / "afp.fa", tmp_path / "non.fa"
    write_fasta(a, synthetic_proteins(25, 1, seed=11))
    write_fasta(n, synthetic_proteins(25, 2, seed=11))
    return a, n


def run(runner, *args, ok=True):
    res = runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    if ok:
        assert res.exit_code == 0, res.output
    return res


def rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_fit_shape(runner, tmp_path):
    a, n, m = tmp_path / "a.fa", tmp_path / "n.fa", tmp_path / "m.srcm"
    write_fasta(a, synthetic_proteins(5, 1, seed=0))
    write_fasta(n, synthetic_proteins(5, 2, seed=0))
    res = run(runner, "fit", a, n, "-o", m, "--pcs", 4)
    model = artifact.load_model(m)
    assert model.dictionary.m == 10 and model.dictionary.p == 4
    assert "5 AFP + 5 non-AFP" in res.output


def test_fit_short_sequence_names_record(runner, tmp_path, fasta_pair):
    bad = tmp_path / "bad.fa"
    bad.write_text(">good\nACDEFG\n>tiny\nACD\n")
    res = run(runner, "fit", bad, fasta_pair[1], "-o", tmp_path / "m", "--pcs", 4, ok=False)
    assert res.exit_code != 0 and "tiny" in res.output


def test_fit_is_byte_identical(runner, tmp_path, fasta_pair):
    a, n = fasta_pair
    run(runner, "fit", a, n, "-o", tmp_path / "m1", "--pcs", 8, "--seed", 5)
    run(runner, "fit", a, n, "-o", tmp_path / "m2", "--pcs", 8, "--seed", 5)
    assert (tmp_path / "m1").read_bytes() == (tmp_path / "m2").read_bytes()


def test_predict_training_sequence(runner, tmp_path, fasta_pair):
    a, n = fasta_pair
    m, out = tmp_path / "m", tmp_path / "p.csv"
    run(runner, "fit", a, n, "-o", m, "--pcs", 20)
    run(runner, "predict", m, n, "-o", out)
    got = rows(out)
    assert [r["id"] for r in got] == [f"non{i:04d}" for i in range(25)]
    assert list(got[0]) == ["id", "label", "r1", "r2", "score1", "score2", "converged"]
    for r in got:
        assert r["label"] == "2" and float(r["r2"]) < 1e-3


def test_predict_empty_fasta(runner, tmp_path, fasta_pair):
    m, empty, out = tmp_path / "m", tmp_path / "e.fa", tmp_path / "p.csv"
    run(runner, "fit", *fasta_pair, "-o", m, "--pcs", 4)
    empty.write_text("")
    run(runner, "predict", m, empty, "-o", out)
    assert out.read_text() == "id,label,r1,r2,score1,score2,converged\n"


def test_predict_marks_bad_records(runner, tmp_path, fasta_pair):
    m, probes, out = tmp_path / "m", tmp_path / "q.fa", tmp_path / "p.csv"
    run(runner, "fit", *fasta_pair, "-o", m, "--pcs", 4)
    probes.write_text(">ok\nACDEFGHIKLMNPQ\n>short\nACD\n")
    res = run(runner, "predict", m, probes, "-o", out, ok=False)
    assert res.exit_code == 1
    got = rows(out)
    assert got[0]["label"] in ("1", "2") and got[1]["label"] == "ERROR"


def test_corrupted_magic(runner, tmp_path, fasta_pair):
    m = tmp_path / "m"
    run(runner, "fit", *fasta_pair, "-o", m, "--pcs", 4)
    buf = bytearray(m.read_bytes())
    buf[:4] = b"JUNK"
    m.write_bytes(bytes(buf))
    res = run(runner, "predict", m, fasta_pair[0], ok=False)
    assert res.exit_code != 0 and "not a model file" in res.output


def test_evaluate_single_row(runner, tmp_path, fasta_pair):
    m, out = tmp_path / "m", tmp_path / "e.csv"
    run(runner, "fit", *fasta_pair, "-o", m, "--pcs", 10)
    run(runner, "evaluate", m, *fasta_pair, "-o", out)
    text = out.read_text()
    assert "# model_hash=" in text
    got = rows(out)
    assert len(got) == 1 and got[0]["PCs"] == "10" and got[0]["accuracy"] == "100.00"


def test_sweep_default_list(runner, tmp_path, fasta_pair):
    out = tmp_path / "s.csv"
    res = run(runner, "sweep", *fasta_pair, "-o", out, "--train-per-class", 15, "--seed", 2)
    got = rows(out)
    assert [int(r["PCs"]) for r in got] == [10, 20, 30, 40, 50, 60, 70, 80, 90, 100,
                                            150, 175, 200, 225, 250, 300, 400, 500, 600]
    done = [r for r in got if r["status"] == "ok"]
    assert [r["PCs"] for r in done] == ["10", "20"]
    assert "warning" in res.output
    assert all(r["accuracy"] == "" for r in got if r["status"] != "ok")


def test_noise_zero_matches_evaluate(runner, tmp_path, fasta_pair):
    m, ev, nz = tmp_path / "m", tmp_path / "e.csv", tmp_path / "n.csv"
    run(runner, "fit", *fasta_pair, "-o", m, "--pcs", 12)
    run(runner, "evaluate", m, *fasta_pair, "-o", ev)
    run(runner, "noise", *fasta_pair, "-o", nz, "--sigma", 0, "--pc-list", "12")
    a, b = rows(ev)[0], rows(nz)[0]
    assert {k: a[k] for k in a} == {k: b[k] for k in a}


def test_experiments_are_byte_identical(runner, tmp_path, fasta_pair):
    for cmd, extra in (("sweep", ["--train-per-class", 15, "--pc-list", "5,10"]),
                       ("noise", ["--sigma", 1, "--pc-list", "5,10"])):
        outs = []
        for i, jobs in enumerate((1, 2)):
            out = tmp_path / f"{cmd}{i}.csv"
            run(runner, cmd, *fasta_pair, "-o", out, "--seed", 4, "--jobs", jobs, *extra)
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


def test_config_file_and_flags(runner, tmp_path, fasta_pair):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("pcs = 6\nencoding = dpc\n")
    m = tmp_path / "m"
    run(runner, "fit", *fasta_pair, "-o", m, "--config", cfg, "--pcs", 7)
    model = artifact.load_model(m)
    assert model.k == 7 and model.encoding.value == "dpc"
    cfg.write_text("nonsense = 1\n")
    res = run(runner, "fit", *fasta_pair, "-o", m, "--config", cfg, ok=False)
    assert "unknown key" in res.output


def test_strict_and_drop_ambiguous(runner, tmp_path, fasta_pair):
    amb = tmp_path / "amb.fa"
    amb.write_text(">x1\nACDEFGXHIKLMN\n>x2\nMNPQRSTVWYAC\n")
    m = tmp_path / "m"
    res = run(runner, "fit", amb, fasta_pair[1], "-o", m, "--pcs", 4, ok=False)
    assert "x1" in res.output and "X" in res.output
    run(runner, "fit", amb, fasta_pair[1], "-o", m, "--pcs", 4, "--drop-ambiguous")


def test_encode_command(runner, tmp_path, fasta_pair):
    out = tmp_path / "f.csv"
    run(runner, "encode", fasta_pair[0], "-o", out, "--encoding", "aac")
    lines = out.read_text().splitlines()
    assert len(lines) == 26 and lines[0].startswith("id,AAC_A,")


def test_gaussian_benchmark_through_fasta(runner, tmp_path):
    Xd, yd, Xp, yp = gaussian_clusters(seed=42)
    recs = composition_records(np.vstack([Xd, Xp]), np.concatenate([yd, yp]))
    train, probes = recs[:len(yd)], recs[len(yd):]
    paths = {}
    for name, items in (("a", [r for r, y in zip(train, yd) if y == 1]),
                        ("n", [r for r, y in zip(train, yd) if y == 2]), ("q", probes)):
        paths[name] = tmp_path / f"{name}.fa"
        write_fasta(paths[name], items)
    m, out = tmp_path / "m", tmp_path / "p.csv"
    run(runner, "fit", paths["a"], paths["n"], "-o", m, "--encoding", "aac", "--pcs", 10)
    run(runner, "predict", m, paths["q"], "-o", out)
    labels = np.array([int(r["label"]) for r in rows(out)])
    assert np.mean(labels == yp) >= 0.95

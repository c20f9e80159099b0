import pytest

from afpsrc.config import Config, load_config, parse_config, parse_pc_list


def test_defaults():
    c = Config()
    assert (c.encoding, c.pcs, c.lam, c.tol, c.max_iter, c.sigma) == ("seg2", 200, 1e-4, 1e-6, 5000, 1.0)
    assert len(c.pc_list) == 19 and c.train_per_class == 300


def test_parse_file_keys():
    text = """
    # comment
    encoding = aac
    pcs = 40        # trailing comment
    lambda = 1e-3
    max-iter = 100
    drop-ambiguous = yes
    pc_list = 5, 10,20
    """
    d = parse_config(text)
    assert d == {"encoding": "aac", "pcs": 40, "lam": 1e-3, "max_iter": 100, "drop_ambiguous": True,
                 "pc_list": (5, 10, 20)}


@pytest.mark.parametrize("text", ["nokey\n", "bogus = 1\n", "pcs = ten\n", "drop_ambiguous = maybe\n"])
def test_parse_errors(text):
    with pytest.raises(ValueError, match="line 1"):
        parse_config(text)


def test_flags_override_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("pcs = 40\nseed = 3\n")
    c = load_config(p, pcs=10, seed=None)
    assert c.pcs == 10 and c.seed == 3


@pytest.mark.parametrize("kw", [dict(encoding="x"), dict(pcs=0), dict(lam=-1.0), dict(tol=0.0),
                                dict(sigma=-0.1), dict(noise_stage="z"), dict(seed=-1), dict(jobs=0)])
def test_validation(kw):
    with pytest.raises(ValueError):
        Config(**kw)


def test_header_leaves_out_jobs():
    h = Config(jobs=4).as_header()
    assert "jobs" not in h and h == Config().as_header()
    assert h["pc_list"].startswith("10,20,")
    assert parse_pc_list("1, 2,3,") == (1, 2, 3)

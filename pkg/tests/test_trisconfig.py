import json
import re
from pathlib import Path

import pytest

from trispec.trisconfig import (
    BruteForceConfig,
    GraphConfig,
    ResourceCapError,
    RunConfig,
    config_from_env,
    load_config,
)


def test_load_sample_config():
    repo_root = Path(__file__).resolve().parent.parent
    cfg = load_config(repo_root / "config-sample.json")
    assert isinstance(cfg, RunConfig)
    assert cfg.signatures == ["4,5,6", "3,3,6", "2,4,6"]
    assert isinstance(cfg.brute, BruteForceConfig)
    assert cfg.brute.cutoff is None
    assert cfg.cert.eps == pytest.approx(1e-3)
    assert cfg.output.out is None
    cfg.check()


def test_nested_paths_are_coerced(tmp_path: Path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"output": {"format": "csv", "out": "out/table.csv"}}), encoding="utf-8")
    cfg = load_config(path)
    assert cfg.output.format == "csv"
    assert cfg.output.out == Path("out/table.csv")
    assert cfg.graph == GraphConfig()


def test_numbers_are_coerced_to_field_types(tmp_path: Path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"brute": {"cutoff": 3}, "cert": {"eps": 0}}), encoding="utf-8")
    cfg = load_config(path)
    assert cfg.brute.cutoff == 3.0
    assert isinstance(cfg.brute.cutoff, float)
    assert isinstance(cfg.cert.eps, float)


@pytest.mark.parametrize(
    ("raw", "where"),
    [
        ({"brute": {"max_words": 10}}, "brute"),
        ({"colour": "red"}, "colour"),
        ({"output": {"format": "xml"}}, "output.format"),
        ({"signatures": "4,5,6"}, "signatures"),
        ({"signatures": ["4,5,6", 7]}, "signatures[1]"),
        ({"cert": {"tails": "yes"}}, "cert.tails"),
        ({"jobs": 1.5}, "jobs"),
        ({"seed": None}, "seed"),
        ({"grid": [3, 8]}, "grid"),
    ],
)
def test_bad_settings_name_their_key(tmp_path: Path, raw: dict, where: str):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    with pytest.raises(ValueError, match=re.escape(where)):
        load_config(path)


def test_config_must_be_an_object(tmp_path: Path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(path)


@pytest.mark.parametrize(
    "cfg",
    [
        RunConfig(brute=BruteForceConfig(max_word=17)),
        RunConfig(brute=BruteForceConfig(conj_depth=20)),
        RunConfig(graph=GraphConfig(ball=7)),
        RunConfig(word_cap=8, brute=BruteForceConfig(max_word=10)),
    ],
)
def test_caps_are_enforced(cfg: RunConfig):
    with pytest.raises(ResourceCapError):
        cfg.check()


def test_jobs_must_be_positive():
    with pytest.raises(ValueError):
        RunConfig(jobs=0).check()


def test_env_overrides(monkeypatch, tmp_path: Path):
    path = tmp_path / "env.json"
    path.write_text(json.dumps({"seed": 7}), encoding="utf-8")
    monkeypatch.setenv("TRISPEC_CONFIG", str(path))
    monkeypatch.setenv("TRISPEC_JOBS", "3")
    cfg = config_from_env()
    assert cfg.seed == 7
    assert cfg.jobs == 3
    monkeypatch.setenv("TRISPEC_JOBS", "many")
    with pytest.raises(ValueError):
        config_from_env(RunConfig())


def test_as_dict_is_json_ready():
    cfg = RunConfig()
    cfg.output.out = Path("x.json")
    plain = cfg.as_dict()
    assert plain["output"]["out"] == "x.json"
    json.dumps(plain)

import json

import pytest

from fintempo.config import ConfigError, RunConfig, build_config, load_config
from fintempo.models import DECISION_TREE, LINEAR_SVC


def test_defaults():
    cfg = load_config(None)
    assert cfg.model.kind == LINEAR_SVC and cfg.folds == 10
    assert len(cfg.features.extras) == 27
    with pytest.raises(ConfigError, match="no corpus"):
        cfg.validate()
    cfg.validate(need_corpus=False)


def test_toml_file(tmp_path):
    (tmp_path / "c.jsonl").write_text("")
    p = tmp_path / "run.toml"
    p.write_text("""
corpus = "c.jsonl"
folds = 5
seed = 11

[model]
kind = "DecisionTree"
hyperparameters = { max_depth = "none", min_samples_leaf = 2 }

[features]
extras = "none"

[features.ngram.CharGrams]
max_features = "none"
ngram_range = [1, 3]

[selection]
symmetry_tolerance = 0.02
percentile = "none"
""")
    cfg = load_config(p)
    assert cfg.corpus == tmp_path / "c.jsonl"
    assert (cfg.folds, cfg.seed, cfg.symmetry_tolerance) == (5, 11, 0.02)
    assert cfg.model.kind == DECISION_TREE and cfg.model.seed == 11
    assert cfg.model.hyperparameters["max_depth"] is None
    assert cfg.features.extras == () or list(cfg.features.extras) == []
    assert cfg.features.percentile is None
    ng = cfg.features.ngram_config("CharGrams")
    assert ng.max_features is None and (ng.n_min, ng.n_max) == (1, 3)
    cfg.validate()


def test_json_file(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"folds": 4, "vectorizer_grid": {"ngram_range": [[1, 2]], "max_features": ["none"]}}))
    cfg = load_config(p)
    assert cfg.folds == 4
    assert cfg.vectorizer_grid == {"ngram_range": [(1, 2)], "max_features": [None]}


def test_errors(tmp_path):
    with pytest.raises(ConfigError, match="unknown config key"):
        build_config({"colour": 1})
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("folds = [")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config(bad)
    with pytest.raises(ConfigError):
        build_config({"folds": 1}).validate(need_corpus=False)
    with pytest.raises(ConfigError, match="unknown lexicon"):
        RunConfig(lexica={"planets": tmp_path}).validate(need_corpus=False)
    with pytest.raises(ConfigError):
        build_config({"grids": {"LinearSVC": {"C": [-1.0]}}}).validate(need_corpus=False)

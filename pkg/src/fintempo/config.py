"""Run configuration: a TOML or JSON file, overridden by command-line flags."""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .features import EXTRA_NAMES, FeatureConfig, NgramConfig
from .models import DEFAULT_GRIDS, DEFAULT_SEED, KINDS, LINEAR_SVC, ModelSpec
from .models.base import validate_value
from .normalize import DEFAULT_LEXICON_FILES

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


# default vectorizer grid: 7 x 5 x 5 x 4 = 700 points
VECTORIZER_GRID = {
    "max_df": [0.3, 0.35, 0.4, 0.5, 0.7, 0.8, 1.0],
    "min_df": [0, 0.002, 0.005, 0.008, 0.01],
    "ngram_range": [(1, 1), (1, 2), (1, 3), (1, 4), (2, 4)],
    "max_features": [10000, 20000, 30000, None],
}


def _none(v):
    return None if isinstance(v, str) and v.lower() in ("none", "null") else v


@dataclass
class RunConfig:
    corpus: Path | None = None
    lexica: dict = field(default_factory=dict)
    semantic_tree: Path | None = None
    features: FeatureConfig = field(default_factory=FeatureConfig)
    model: ModelSpec = field(default_factory=lambda: ModelSpec(LINEAR_SVC, {"C": 0.1}))
    grids: dict = field(default_factory=lambda: {k: dict(v) for k, v in DEFAULT_GRIDS.items()})
    vectorizer_grid: dict = field(default_factory=lambda: dict(VECTORIZER_GRID))
    symmetry_tolerance: float = 0.01
    folds: int = 10
    seed: int = DEFAULT_SEED
    out_dir: Path = Path("out")
    jobs: int = 1

    def validate(self, need_corpus: bool = True) -> "RunConfig":
        if need_corpus:
            if self.corpus is None:
                raise ConfigError("no corpus given; pass --corpus or set 'corpus' in the config")
            if not Path(self.corpus).is_file():
                raise ConfigError(f"corpus file not found: {self.corpus}")
        for key, path in self.lexica.items():
            if key not in DEFAULT_LEXICON_FILES:
                raise ConfigError(f"unknown lexicon {key!r}; expected one of {', '.join(DEFAULT_LEXICON_FILES)}")
            if not Path(path).is_file():
                raise ConfigError(f"{key} lexicon not found: {path}")
        if self.semantic_tree is not None and not Path(self.semantic_tree).is_file():
            raise ConfigError(f"semantic tree not found: {self.semantic_tree}")
        if self.folds < 2:
            raise ConfigError("folds must be at least 2")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        for kind, grid in self.grids.items():
            if kind not in KINDS:
                raise ConfigError(f"unknown model kind in grids: {kind!r}")
            for name, values in grid.items():
                try:
                    ModelSpec(kind, {name: values[0]} if values else {})
                    for v in values:
                        validate_value(kind, name, v)
                except (ValueError, IndexError, TypeError) as exc:
                    raise ConfigError(str(exc)) from None
        return self


def read_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() == ".json":
            return json.loads(text)
        return tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def _feature_config(d: dict) -> FeatureConfig:
    d = dict(d)
    extras = d.get("extras", "all")
    if extras == "all":
        d["extras"] = list(EXTRA_NAMES)
    elif extras in ("none", None):
        d["extras"] = []
    ngram = {}
    for fam, cfg in d.get("ngram", {}).items():
        cfg = {k: _none(v) for k, v in cfg.items()}
        ngram[fam] = NgramConfig.from_dict(cfg)
    d["ngram"] = ngram
    return FeatureConfig(**d)


def build_config(data: dict | None = None, base_dir: Path | None = None) -> RunConfig:
    """RunConfig from a parsed config mapping; relative paths resolve against base_dir."""
    data = dict(data or {})
    base_dir = base_dir or Path.cwd()

    def path(v):
        if v is None:
            return None
        p = Path(v)
        return p if p.is_absolute() else base_dir / p

    known = {"corpus", "lexica", "semantic_tree", "features", "model", "grids", "vectorizer_grid",
             "selection", "folds", "seed", "out_dir", "jobs"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    cfg = RunConfig()
    try:
        if "corpus" in data:
            cfg.corpus = path(data["corpus"])
        cfg.lexica = {k: path(v) for k, v in data.get("lexica", {}).items()}
        if "semantic_tree" in data:
            cfg.semantic_tree = path(data["semantic_tree"])
            cfg.lexica.setdefault("semantic_tree", cfg.semantic_tree)
        if "features" in data:
            cfg.features = _feature_config(data["features"])
        if "seed" in data:
            cfg.seed = int(data["seed"])
        if "model" in data:
            m = data["model"]
            hp = {k: _none(v) for k, v in m.get("hyperparameters", {}).items()}
            cfg.model = ModelSpec(m.get("kind", LINEAR_SVC), hp, int(m.get("seed", cfg.seed)))
        else:
            cfg.model = ModelSpec(cfg.model.kind, dict(cfg.model.hyperparameters), cfg.seed)
        if "grids" in data:
            cfg.grids = {k: {n: [_none(x) for x in vs] for n, vs in g.items()} for k, g in data["grids"].items()}
        if "vectorizer_grid" in data:
            vg = {n: [_none(x) for x in vs] for n, vs in data["vectorizer_grid"].items()}
            if "ngram_range" in vg:
                vg["ngram_range"] = [tuple(r) for r in vg["ngram_range"]]
            cfg.vectorizer_grid = vg
        sel = data.get("selection", {})
        cfg.symmetry_tolerance = float(sel.get("symmetry_tolerance", cfg.symmetry_tolerance))
        if "percentile" in sel:
            cfg.features.percentile = _none(sel["percentile"])
        cfg.folds = int(data.get("folds", cfg.folds))
        if "out_dir" in data:
            cfg.out_dir = path(data["out_dir"])
        cfg.jobs = int(data.get("jobs", cfg.jobs))
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config: {exc}") from None
    return cfg


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return build_config({})
    return build_config(read_config_file(path), Path(path).resolve().parent)

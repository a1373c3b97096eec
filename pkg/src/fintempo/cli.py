"""Command-line entry point.

Exit status: 0 on success, 1 on a validation error (bad flags, config or
input files), 2 on a runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .corpus import CorpusError, class_distribution, load_corpus, stratified_folds

log = logging.getLogger("fintempo")

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def _resources(cfg: RunConfig):
    from .normalize import LexiconSet
    from .pipeline import Resources

    if not cfg.lexica:
        return Resources.default()
    from .lingua import default_verb_lexicon

    return Resources(LexiconSet.load(cfg.lexica), default_verb_lexicon())


def _tree(cfg: RunConfig):
    from .baseline import SemanticTree

    return SemanticTree.load(cfg.semantic_tree or cfg.lexica.get("semantic_tree"))


def _prepare(cfg, corpus):
    from .pipeline import prepare

    return prepare(corpus.items, _resources(cfg), cfg.jobs)


# -- subcommands -------------------------------------------------------------------

def cmd_inspect(cfg, corpus, args):
    summary = class_distribution(corpus)
    d = summary.to_dict()
    _dump(cfg.out_dir / "distribution.json", d)
    print(f"{'Label':<8} {'Count':>6} {'Sentences':>16} {'Words':>18}")
    for lab, s in d.items():
        print(f"{lab:<8} {s['count']:>6} {s['sentences_mean']:>8.2f} ± {s['sentences_std']:<5.2f} "
              f"{s['words_mean']:>9.2f} ± {s['words_std']:<6.2f}")
    return EXIT_OK


def cmd_preprocess(cfg, corpus, args):
    from .normalize import TaggedDocument

    prepared = _prepare(cfg, corpus)
    out = cfg.out_dir / "tagged.jsonl"
    with open(out, "w", encoding="utf-8") as fh:
        for item, (a, f) in zip(corpus, prepared):
            doc = a.doc
            row = {
                "id": item.id,
                "tagged": doc.render(),
                "sentences": [TaggedDocument(doc.tokens[s:e]).render() for s, e in doc.sentence_bounds],
                "verbs": [{"text": v.words(doc), "tense": v.tense, "sentence": v.sentence_id} for v in a.verbs],
                "links": [{"ticker": l.ticker_index, "verb": l.verb.words(doc), "method": l.method, "role": l.role}
                          for l in a.dep_links + a.prox_links],
                "num": f.num, "perc": f.perc,
                "temporal": f.temporal.values if f.temporal else {},
            }
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
    print(f"wrote {len(corpus)} tagged documents to {out}")
    return EXIT_OK


def cmd_features(cfg, corpus, args):
    from .features import FeaturePipeline, write_feature_csv, write_header_csv

    docs = [f for _, f in _prepare(cfg, corpus)]
    pipe = FeaturePipeline(cfg.features)
    X = pipe.fit_transform(docs, corpus.labels)
    header = pipe.header()
    write_header_csv(header, cfg.out_dir / "feature_header.csv")
    write_feature_csv(corpus.ids, X, header, cfg.out_dir / "features.csv")
    print(f"{X.shape[0]} documents x {X.shape[1]} columns "
          f"({len(pipe.ngram_names())} n-grams + {X.shape[1] - len(pipe.ngram_names())} extra)")
    return EXIT_OK


def cmd_tune(cfg, corpus, args):
    from .evaluation import tune_vectorizer
    from .features import FAMILIES

    docs = [f for _, f in _prepare(cfg, corpus)]
    folds = stratified_folds(corpus, cfg.folds, cfg.seed)
    families = [args.family] if args.family else list(FAMILIES)
    best_all = {}
    for fam in families:
        best, rows = tune_vectorizer(corpus, docs, folds, fam, cfg.vectorizer_grid, cfg.model, args.limit)
        with open(cfg.out_dir / f"tune_{fam}.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["max_df", "min_df", "n_min", "n_max", "max_features", "accuracy"])
            for c, acc in rows:
                w.writerow([c.max_df_ratio, c.min_df, c.n_min, c.n_max, c.max_features, f"{acc:.6f}"])
        best_all[fam] = vars(best)
        print(f"{fam}: best ngram_range=({best.n_min},{best.n_max}) max_df={best.max_df_ratio} "
              f"min_df={best.min_df} max_features={best.max_features} over {len(rows)} points")
    _dump(cfg.out_dir / "tune_best.json", best_all)
    return EXIT_OK


def cmd_select(cfg, corpus, args):
    from .evaluation import select_extras
    from .features import FeatureConfig, FeaturePipeline
    from .select import chi2_scores, select_percentile, write_chi2_report, write_selection_report

    docs = [f for _, f in _prepare(cfg, corpus)]
    ngram_cfg = FeatureConfig.from_dict({**cfg.features.to_dict(), "percentile": None, "extras": []})
    pipe = FeaturePipeline(ngram_cfg)
    X = pipe.fit_transform(docs, corpus.labels)
    mask = select_percentile(chi2_scores(X, corpus.labels), cfg.features.percentile or 1.0)
    write_chi2_report(pipe.ngram_names(), mask, cfg.out_dir / "chi2.csv")
    print(f"chi2: kept {len(mask.kept_columns)} of {X.shape[1]} n-gram columns")
    folds = stratified_folds(corpus, cfg.folds, cfg.seed)
    result = select_extras(corpus, docs, folds, cfg.model, cfg.features, cfg.symmetry_tolerance)
    write_selection_report(result, cfg.out_dir / "selection.csv")
    _dump(cfg.out_dir / "selected.json", {"retained": list(result.retained)})
    print(f"combinatorial selection retained {len(result.retained)}: {', '.join(result.retained) or '-'}")
    return EXIT_OK


def cmd_train(cfg, corpus, args):
    from .pipeline import TemporalityClassifier

    docs = [f for _, f in _prepare(cfg, corpus)]
    clf = TemporalityClassifier.fit(corpus, cfg.features, cfg.model, _resources(cfg), prepared=docs)
    out = Path(args.model_out) if args.model_out else cfg.out_dir / "model.json"
    clf.save(out)
    print(f"saved {cfg.model.kind} model with {clf.model.n_features} columns to {out}")
    return EXIT_OK


def cmd_evaluate(cfg, corpus, args):
    from .evaluation import PipelineConfig, cross_validate, experiment_configs, render_json, render_text
    from .models import ZEROR

    folds = stratified_folds(corpus, cfg.folds, cfg.seed)
    if args.experiments:
        selected = None
        if args.selected:
            selected = json.loads(Path(args.selected).read_text(encoding="utf-8"))["retained"]
        configs = experiment_configs(cfg.model, cfg.features, selected)
    else:
        configs = [PipelineConfig(cfg.model.kind, cfg.model, cfg.features)]
    docs = None
    if any(c.model.kind != ZEROR for c in configs):
        docs = [f for _, f in _prepare(cfg, corpus)]
    reports = [cross_validate(c, corpus, folds, docs=docs) for c in configs]
    (cfg.out_dir / "report.json").write_text(render_json(reports), encoding="utf-8")
    (cfg.out_dir / "report.txt").write_text(render_text(reports, timings=False), encoding="utf-8")
    _dump(cfg.out_dir / "timings.json", [r.timings() for r in reports])
    print(render_text(reports, timings=True), end="")
    return EXIT_OK


def cmd_baseline(cfg, corpus, args):
    from .baseline import run_baseline
    from .evaluation import EvalReport, render_json, render_text

    analyses = [a for a, _ in _prepare(cfg, corpus)]
    decisions, metrics = run_baseline(corpus, _tree(cfg), analyses=analyses)
    report = EvalReport("RuleBaseline", metrics, {d.id: d.label for d in decisions}, 0, {"kind": "rules"})
    (cfg.out_dir / "baseline.json").write_text(render_json([report]), encoding="utf-8")
    (cfg.out_dir / "baseline.txt").write_text(render_text([report], timings=False), encoding="utf-8")
    with open(cfg.out_dir / "baseline_tallies.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "summary", "past", "present", "future", "present_followed_by_number", "label"])
        for d in decisions:
            t = d.tally
            w.writerow([d.id, " ".join(map(str, d.summary)), t.past, t.present, t.future,
                        int(t.present_followed_by_number), d.label])
    print(render_text([report], timings=False), end="")
    return EXIT_OK


def cmd_predict(cfg, corpus, args):
    from .pipeline import TemporalityClassifier

    path = Path(args.model)
    if not path.is_file():
        raise ConfigError(f"model file not found: {path}")
    if args.text is not None:
        text = args.text
    elif args.input == "-":
        text = sys.stdin.read()
    elif args.input:
        if not Path(args.input).is_file():
            raise ConfigError(f"input file not found: {args.input}")
        text = Path(args.input).read_text(encoding="utf-8")
    else:
        raise ConfigError("predict needs --text or --input")
    clf = TemporalityClassifier.load(path, _resources(cfg))
    pred = clf.predict(text, args.ticker)
    print(json.dumps(pred.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


COMMANDS = {
    "inspect": (cmd_inspect, "corpus statistics per label"),
    "preprocess": (cmd_preprocess, "write tagged documents as JSONL"),
    "features": (cmd_features, "write the feature matrix CSV and its column header"),
    "tune": (cmd_tune, "vectorizer grid search per n-gram family"),
    "select": (cmd_select, "chi-square and combinatorial selection reports"),
    "train": (cmd_train, "fit on the whole corpus and save the model"),
    "evaluate": (cmd_evaluate, "k-fold cross-validation report"),
    "baseline": (cmd_baseline, "rule-based classifier run with metrics"),
    "predict": (cmd_predict, "label and signed margin for a new text"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="TOML or JSON run configuration")
    common.add_argument("--corpus", help="JSONL corpus (overrides config)")
    common.add_argument("--out-dir", help="output directory (default: out)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--jobs", type=int, help="worker processes for document analysis")
    common.add_argument("--folds", type=int, help="cross-validation folds")
    common.add_argument("--model-kind", choices=["ZeroR", "DecisionTree", "RandomForest", "LinearSVC"],
                        help="classifier (overrides config)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="fintempo", description="Past/future temporality of financial news.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name == "tune":
            p.add_argument("--family", choices=["CharGrams", "WordTokens", "WordGrams"])
            p.add_argument("--limit", type=int, help="evaluate only the first N grid points")
        elif name == "train":
            p.add_argument("--model-out", help="model file (default: OUT_DIR/model.json)")
        elif name == "evaluate":
            p.add_argument("--experiments", action="store_true",
                           help="run n-grams only, n-grams + 27 extras and, with --selected, the retained extras")
            p.add_argument("--selected", help="selected.json written by the select command")
        elif name == "predict":
            p.add_argument("--model", required=True, help="model file written by train")
            p.add_argument("--ticker", required=True, help="main asset the text is about")
            p.add_argument("--text", help="news text")
            p.add_argument("--input", help="file holding the news text, or - for stdin")
    return parser


def _apply_flags(cfg: RunConfig, args) -> RunConfig:
    from .models import ModelSpec

    if args.corpus:
        cfg.corpus = Path(args.corpus)
    if args.out_dir:
        cfg.out_dir = Path(args.out_dir)
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if args.folds is not None:
        cfg.folds = args.folds
    if args.seed is not None:
        cfg.seed = args.seed
    kind = args.model_kind or cfg.model.kind
    hp = cfg.model.hyperparameters if kind == cfg.model.kind else {}
    cfg.model = ModelSpec(kind, dict(hp), args.seed if args.seed is not None else cfg.model.seed)
    return cfg


def run(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if not args.command:
            raise ConfigError(f"missing command; choose one of: {', '.join(COMMANDS)}")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        cfg = _apply_flags(load_config(args.config), args)
        needs_corpus = args.command != "predict"
        cfg.validate(need_corpus=needs_corpus)
        corpus = load_corpus(cfg.corpus) if needs_corpus else None
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        handler = COMMANDS[args.command][0]
    except (ConfigError, CorpusError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return handler(cfg, corpus, args)
    except (ConfigError, CorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        log.debug("failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

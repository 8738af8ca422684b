"""Command-line entry point.

Subcommands: train, predict, eval, cv, sweep, compare. Settings resolve
as flag > config file (--config, JSON keyed by flag names) > default.
Exit codes: 0 success, 1 usage error, 2 data or runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .eval import (
    ExperimentConfig,
    compare,
    load_corpus,
    report_to_json,
    reports_to_csv,
    run_cv,
    run_feature_sweep,
    run_holdout,
)
from .exceptions import ConfigError, DataError, ModelFormatError, ParseError
from .persist import ModelBundle, load_model, save_model
from .vectorize import BowVectorizer

__all__ = ["main", "run_cli"]

DEFAULTS = {
    "data": None,
    "format": "tsv",
    "label_col": None,
    "text_col": None,
    "repr": "tfidf-nwn",
    "model": "lsvm",
    "features": 8000,
    "split": 0.8,
    "folds": 10,
    "sweep": None,
    "axis": None,
    "seed": 42,
    "stopwords": "on",
    "stopword_file": None,
    "save": None,
    "output": None,
    "model_params": None,
    "model_path": None,
}

_CONFIG_KEYS = set(DEFAULTS)


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so usage errors map to exit code 1."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _add_common(p):
    p.add_argument("--data", help="dataset path")
    p.add_argument("--format", choices=["tsv", "csv", "prefix", "imdb-dir"],
                   help="dataset format (default tsv)")
    p.add_argument("--label-col", dest="label_col", help="label column name (csv)")
    p.add_argument("--text-col", dest="text_col", help="text column name (csv)")
    p.add_argument("--repr", choices=["binary", "tfidf", "tfidf-nwn"],
                   help="document representation (default tfidf-nwn)")
    p.add_argument("--features", type=int, help="vocabulary size (default 8000)")
    p.add_argument("--seed", type=int, help="random seed (default 42)")
    p.add_argument("--stopwords", choices=["on", "off"],
                   help="drop stopwords (default on)")
    p.add_argument("--stopword-file", dest="stopword_file",
                   help="replace the built-in stopword list")
    p.add_argument("--model-params", dest="model_params",
                   help="JSON object of extra model hyperparameters")
    p.add_argument("--output", help="report path (.csv for CSV, else JSON); default stdout")
    p.add_argument("--config", help="JSON config file; flags override its values")


def _add_model_choice(p):
    p.add_argument("--model", choices=["lsvm", "mnb", "merf"],
                   help="classifier (default lsvm)")


def build_parser() -> _Parser:
    parser = _Parser(prog="sentkit", description="Sentiment classification experiments.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("train", help="train on the full dataset and save a model bundle")
    _add_common(p)
    _add_model_choice(p)
    p.add_argument("--save", help="where to write the model bundle (required)")

    p = sub.add_parser("predict", help="score one document per input line")
    p.add_argument("--model", dest="model_path", help="model bundle path (required)")
    p.add_argument("--data", help="input file; default stdin")
    p.add_argument("--output", help="output path; default stdout")
    p.add_argument("--config", help="JSON config file; flags override its values")

    p = sub.add_parser("eval", help="holdout split, train, and score")
    _add_common(p)
    _add_model_choice(p)
    p.add_argument("--split", type=float, help="training fraction (default 0.8)")

    p = sub.add_parser("cv", help="stratified k-fold cross-validation")
    _add_common(p)
    _add_model_choice(p)
    p.add_argument("--folds", type=int, help="fold count (default 10)")

    p = sub.add_parser("sweep", help="holdout runs over a range of vocabulary sizes")
    _add_common(p)
    _add_model_choice(p)
    p.add_argument("--split", type=float, help="training fraction (default 0.8)")
    p.add_argument("--sweep", help='sizes as "start:stop:step" (inclusive) or "a,b,c"')

    p = sub.add_parser("compare", help="holdout runs across models or representations")
    _add_common(p)
    _add_model_choice(p)
    p.add_argument("--split", type=float, help="training fraction (default 0.8)")
    p.add_argument("--axis", choices=["model", "representation"],
                   help="which config field to vary")
    return parser


def _load_config_file(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    settings = {}
    for key, value in doc.items():
        norm = key.replace("-", "_")
        if norm not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        settings[norm] = value
    return settings


def _merge_settings(args) -> dict:
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _parse_model_params(raw) -> dict:
    if raw is None:
        return {}
    if isinstance(raw, dict):
        return raw
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--model-params is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError("--model-params must be a JSON object")
    return doc


def _stopwords_flag(value) -> bool:
    if isinstance(value, bool):
        return value
    if value in ("on", "off"):
        return value == "on"
    raise ConfigError(f"stopwords must be 'on' or 'off', got {value!r}")


def _experiment_config(settings) -> ExperimentConfig:
    return ExperimentConfig(
        data=settings["data"] or "",
        format=settings["format"],
        label_col=settings["label_col"],
        text_col=settings["text_col"],
        representation=str(settings["repr"]).replace("-", "_"),
        model=settings["model"],
        k_features=int(settings["features"]),
        split=float(settings["split"]),
        seed=int(settings["seed"]),
        stopwords=_stopwords_flag(settings["stopwords"]),
        stopword_file=settings["stopword_file"],
        model_params=_parse_model_params(settings["model_params"]),
    ).validate()


def parse_sweep_sizes(text: str) -> list[int]:
    """Accepts "start:stop:step" (inclusive) or a comma list of sizes."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = parts
            if step < 1 or stop < start:
                raise ValueError("need step >= 1 and stop >= start")
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --sweep value {text!r}: {exc}")


def _log(line: str) -> None:
    print(f"[sentkit] {line}", file=sys.stderr)


def _log_report(r) -> None:
    cfg = r.config
    fold = f" fold={r.fold}" if r.fold is not None else ""
    _log(f"{cfg['model']} {cfg['representation']} k={cfg['k_features']}"
         f"{fold} acc={r.accuracy:.4f} n_test={r.n_test} {r.seconds:.1f}s")


def _emit(report, output) -> None:
    if output:
        text = reports_to_csv(report) if str(output).endswith(".csv") else report_to_json(report)
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(report_to_json(report))


def _cmd_train(settings) -> int:
    if not settings["save"]:
        raise ConfigError("train needs --save PATH for the model bundle")
    config = _experiment_config(settings)
    corpus = load_corpus(config)
    if len(corpus.labels) != 2:
        raise DataError(f"need exactly 2 classes, got {list(corpus.labels)}")
    pre = config.preprocessor().fit()
    tokens = pre.transform(corpus.texts())
    vec = BowVectorizer(k=config.k_features, weighting=config.weighting())
    X = vec.fit(tokens).transform(tokens)
    model = config.make_model()
    model.fit(X, corpus.label_indices())
    bundle = ModelBundle(
        representation=config.representation,
        preprocessor=pre,
        vocabulary=vec.vocabulary_,
        idf=vec.idf_,
        model=model,
        labels=(corpus.labels[0], corpus.labels[1]),
    )
    save_model(bundle, settings["save"])
    _log(f"trained {config.model} on {len(corpus)} docs, saved to {settings['save']}")
    return 0


def _cmd_predict(settings) -> int:
    if not settings["model_path"]:
        raise ConfigError("predict needs --model PATH")
    bundle = load_model(settings["model_path"])
    if settings["data"]:
        text = Path(settings["data"]).read_text(encoding="utf-8", errors="replace")
    else:
        text = sys.stdin.read()
    lines = text.splitlines()
    labels, decisions = bundle.predict_texts(lines) if lines else ([], [])
    out_lines = [f"{lab}\t{dec}" for lab, dec in zip(labels, decisions)]
    payload = "\n".join(out_lines) + ("\n" if out_lines else "")
    if settings["output"]:
        Path(settings["output"]).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_eval(settings) -> int:
    config = _experiment_config(settings)
    report = run_holdout(config)
    _log_report(report)
    _emit(report, settings["output"])
    return 0


def _cmd_cv(settings) -> int:
    config = _experiment_config(settings)
    report = run_cv(config, int(settings["folds"]))
    for r in report.reports:
        _log_report(r)
    _log(f"cv mean={report.mean:.4f} std={report.std:.4f} over {len(report.folds)} folds")
    _emit(report, settings["output"])
    return 0


def _cmd_sweep(settings) -> int:
    if not settings["sweep"]:
        raise ConfigError('sweep needs --sweep "start:stop:step"')
    config = _experiment_config(settings)
    sizes = parse_sweep_sizes(str(settings["sweep"]))
    report = run_feature_sweep(config, sizes)
    for r in report.reports:
        _log_report(r)
    _emit(report, settings["output"])
    return 0


def _cmd_compare(settings) -> int:
    if not settings["axis"]:
        raise ConfigError("compare needs --axis {model,representation}")
    config = _experiment_config(settings)
    reports = compare(config, settings["axis"])
    for r in reports:
        _log_report(r)
    _emit(reports, settings["output"])
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "predict": _cmd_predict,
    "eval": _cmd_eval,
    "cv": _cmd_cv,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if not args.command:
        parser.print_usage(sys.stderr)
        return 1

    try:
        settings = _merge_settings(args)
        return _COMMANDS[args.command](settings)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, DataError, ModelFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


run_cli = main

if __name__ == "__main__":
    sys.exit(main())

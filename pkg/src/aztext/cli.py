"""Command line entry point: ``aztext {clean,stats,train,evaluate,predict,serve}``.

Exit codes: 0 success, 2 usage or I/O problems, 3 unusable data.
Machine-readable output goes to stdout as JSON, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus as corpus_mod
from .classify import DEFAULT_VECTORIZER, MODEL_KINDS, fit_model, load_model, predict_text, save_model
from .corpus import CleanThresholds
from .errors import AztextError, DataError, EmptyCorpus, EmptyInput, EmptyMatrix
from .evaluate import evaluate_model, split
from .text import SENTENCE_MODES, PipelineConfig, default_stopwords, normalize, read_word_list, sentence_counter
from .vectorize import VECTORIZERS

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3

log = logging.getLogger("aztext")


def _env_seed() -> int:
    raw = os.environ.get("AZTEXT_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"AZTEXT_SEED must be an integer, got {raw!r}") from None


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Every knob of every subcommand, with its default."""

    subcommand: str | None = None
    input: str | None = None
    output: str | None = None
    report: str | None = None
    model_path: str | None = None
    # cleaning
    min_chars: int = 30
    max_chars: int = 10000
    min_sentences: int = 3
    max_sentences: int = 100
    rules: str | None = None  # None: shipped rule file
    mapping: str | None = None
    merge_policy: str = "passthrough"
    sentence_mode: str = "dot"
    max_bucket: int = 30
    # text pipeline
    stopwords: str | None = None  # None: shipped list, "none": no stop words
    stemming: bool = False
    keep_digits: bool = False
    min_token_len: int = 1
    # features + model
    min_df: int = 1
    vectorizer: str | None = None  # None: nb->count, svm/mlp->tfidf
    model: str = "svm"
    alpha: float = 1.0
    lam: float = 1e-5
    epochs: int = 50
    hidden: list[int] = field(default_factory=lambda: [100])
    solver: str = "lbfgs"
    max_iters: int = 200
    tol: float = 1e-6
    seed: int = field(default_factory=_env_seed)
    test_fraction: float = 0.1
    stratified: bool = True
    # serving
    bind: str = "127.0.0.1"
    port: int = 8080
    max_body: int = 1 << 20

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**d)

    def validate(self) -> None:
        try:
            self.thresholds()
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        checks = [
            (self.alpha > 0, f"--alpha must be > 0, got {self.alpha}"),
            (self.lam > 0, f"--lambda must be > 0, got {self.lam}"),
            (self.epochs >= 1, "--epochs must be >= 1"),
            (self.max_iters >= 1, "--max-iters must be >= 1"),
            (0 < self.test_fraction < 1, f"--test-fraction must be in (0, 1), got {self.test_fraction}"),
            (self.min_df >= 1, "--min-df must be >= 1"),
            (self.min_token_len >= 1, "--min-token-len must be >= 1"),
            (self.max_bucket >= 1, "--max-bucket must be >= 1"),
            (bool(self.hidden) and min(self.hidden) >= 1, "--hidden needs positive layer sizes"),
            (self.model in MODEL_KINDS, f"--model must be one of {MODEL_KINDS}"),
            (self.vectorizer is None or self.vectorizer in VECTORIZERS, f"--vectorizer must be one of {VECTORIZERS}"),
            (self.sentence_mode in SENTENCE_MODES, f"--sentence-mode must be one of {SENTENCE_MODES}"),
            (self.merge_policy in ("passthrough", "strict"), "--merge-policy must be passthrough or strict"),
            (self.solver in ("lbfgs", "sgd"), "--solver must be lbfgs or sgd"),
        ]
        for ok, message in checks:
            if not ok:
                raise UsageError(message)

    def thresholds(self) -> CleanThresholds:
        return CleanThresholds(self.min_chars, self.max_chars, self.min_sentences, self.max_sentences)

    def pipeline(self) -> PipelineConfig:
        if self.stopwords is None:
            stop = default_stopwords()
        elif self.stopwords == "none":
            stop = frozenset()
        else:
            stop = frozenset(normalize(w) for w in read_word_list(self.stopwords))
        return PipelineConfig(stop, self.stemming, self.keep_digits, self.min_token_len)


# -- argument parsing -------------------------------------------------------

def _add(p, *flags, **kw):
    p.add_argument(*flags, default=argparse.SUPPRESS, **kw)


def _cleaning_flags(p):
    _add(p, "--min-chars", dest="min_chars", type=int, help="drop bodies shorter than this (default 30)")
    _add(p, "--max-chars", dest="max_chars", type=int, help="drop bodies longer than this (default 10000)")
    _add(p, "--min-sentences", dest="min_sentences", type=int, help="default 3")
    _add(p, "--max-sentences", dest="max_sentences", type=int, help="default 100")
    _add(p, "--rules", help="scrub rule file (PATTERN<TAB>REPLACEMENT); default: shipped rules")
    _add(p, "--mapping", help="category mapping file (old<TAB>new)")
    _add(p, "--merge-policy", dest="merge_policy", choices=["passthrough", "strict"])


def _sentence_flags(p):
    _add(p, "--sentence-mode", dest="sentence_mode", choices=list(SENTENCE_MODES),
         help="dot: count periods (default); terminator: count runs of .!?…")


def _pipeline_flags(p):
    _add(p, "--stopwords", help="stop-word file, or 'none'; default: shipped Azerbaijani list")
    _add(p, "--stemming", action="store_true")
    _add(p, "--keep-digits", dest="keep_digits", action="store_true")
    _add(p, "--min-token-len", dest="min_token_len", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aztext", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON RunConfig file; flags override it")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("clean", help="dedup, threshold-filter, scrub and relabel a CSV corpus")
    _add(p, "--input", required=True)
    _add(p, "--output", required=True, help="cleaned CSV path")
    _add(p, "--report", help="also write the JSON clean report here")
    _cleaning_flags(p)
    _sentence_flags(p)

    p = sub.add_parser("stats", help="descriptive statistics and sentence histogram")
    _add(p, "--input", required=True)
    _add(p, "--max-bucket", dest="max_bucket", type=int)
    _sentence_flags(p)

    p = sub.add_parser("train", help="split, vectorize, train, save, report")
    _add(p, "--input", required=True)
    _add(p, "--model-out", dest="model_path", required=True)
    _add(p, "--model", choices=list(MODEL_KINDS))
    _add(p, "--vectorizer", choices=list(VECTORIZERS))
    _add(p, "--alpha", type=float, help="NB smoothing (default 1.0)")
    _add(p, "--lambda", dest="lam", type=float, help="SVM regularization (default 1e-5)")
    _add(p, "--epochs", type=int, help="SVM passes over the data (default 50)")
    _add(p, "--hidden", type=lambda s: [int(x) for x in s.split(",") if x], help="MLP layer sizes, e.g. 100 or 64,32")
    _add(p, "--solver", choices=["lbfgs", "sgd"])
    _add(p, "--max-iters", dest="max_iters", type=int)
    _add(p, "--tol", type=float)
    _add(p, "--seed", type=int, help="default: $AZTEXT_SEED or 0")
    _add(p, "--test-fraction", dest="test_fraction", type=float, help="held-out share (default 0.1)")
    _add(p, "--no-stratify", dest="stratified", action="store_false")
    _add(p, "--min-df", dest="min_df", type=int)
    _pipeline_flags(p)

    p = sub.add_parser("evaluate", help="score a saved model on a labelled CSV")
    _add(p, "--model-path", dest="model_path", required=True)
    _add(p, "--input", required=True)

    p = sub.add_parser("predict", help="classify one document per line")
    _add(p, "--model-path", dest="model_path", required=True)
    _add(p, "--input", help="text file; default stdin")

    p = sub.add_parser("serve", help="HTTP prediction service")
    _add(p, "--model-path", dest="model_path", required=True)
    _add(p, "--bind")
    _add(p, "--port", type=int)
    _add(p, "--max-body", dest="max_body", type=int, help="request size limit in bytes (default 1 MiB)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = RunConfig().to_dict()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(from_file, dict):
            raise UsageError("config file must hold a JSON object")
        values.update(from_file)
    values.update({k: v for k, v in vars(args).items() if k not in ("config", "verbose")})
    cfg = RunConfig.from_dict(values)
    cfg.validate()
    return cfg


# -- subcommands ------------------------------------------------------------

def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
    sys.stdout.flush()


def run_clean(cfg: RunConfig) -> int:
    corpus = corpus_mod.load_csv(cfg.input)
    rules = corpus_mod.read_rules(cfg.rules) if cfg.rules else corpus_mod.default_rules()
    mapping = corpus_mod.read_mapping(cfg.mapping) if cfg.mapping else None
    cleaned, report = corpus_mod.clean_pipeline(
        corpus, cfg.thresholds(), rules, mapping, cfg.merge_policy, sentence_counter(cfg.sentence_mode)
    )
    corpus_mod.write_csv(cleaned, cfg.output)
    if cfg.report:
        Path(cfg.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    _emit(report.to_dict())
    return EXIT_OK


def run_stats(cfg: RunConfig) -> int:
    corpus = corpus_mod.load_csv(cfg.input)
    counter = sentence_counter(cfg.sentence_mode)
    stats = corpus_mod.corpus_stats(corpus, counter)
    out = stats.to_dict()
    out["sentence_mode"] = cfg.sentence_mode
    out["histogram"] = corpus_mod.sentence_histogram(corpus, counter, cfg.max_bucket).to_dict()
    _emit(out)
    return EXIT_OK


def run_train(cfg: RunConfig) -> int:
    corpus = corpus_mod.load_csv(cfg.input)
    if len(corpus) == 0:
        raise EmptyCorpus(f"{cfg.input} has no documents")
    class_names = sorted(corpus.labels)
    train, test = split(corpus, cfg.test_fraction, cfg.seed, cfg.stratified)
    model = fit_model(
        [d.body for d in train],
        [d.category for d in train],
        cfg.model,
        cfg.vectorizer,
        pipeline=cfg.pipeline(),
        min_df=cfg.min_df,
        class_names=class_names,
        alpha=cfg.alpha,
        lam=cfg.lam,
        epochs=cfg.epochs,
        hidden=cfg.hidden,
        solver=cfg.solver,
        max_iters=cfg.max_iters,
        tol=cfg.tol,
        seed=cfg.seed,
    )
    save_model(model, cfg.model_path)
    try:
        report = evaluate_model(model, [d.body for d in test], [d.category for d in test]).to_dict()
    except EmptyMatrix:
        raise DataError("held-out split is empty; the corpus is too small to evaluate") from None
    report.update(
        model_kind=model.kind,
        vectorizer=model.vectorizer,
        train_size=len(train),
        test_size=len(test),
        seed=cfg.seed,
        model_path=str(cfg.model_path),
    )
    _emit(report)
    return EXIT_OK


def run_evaluate(cfg: RunConfig) -> int:
    model = load_model(cfg.model_path)
    corpus = corpus_mod.load_csv(cfg.input)
    unknown = sorted(corpus.labels - set(model.class_names))
    if unknown:
        raise DataError(f"labels not known to the model: {', '.join(unknown)}")
    report = evaluate_model(model, [d.body for d in corpus], [d.category for d in corpus]).to_dict()
    report["model_kind"] = model.kind
    _emit(report)
    return EXIT_OK


def run_predict(cfg: RunConfig) -> int:
    model = load_model(cfg.model_path)
    stream = open(cfg.input, encoding="utf-8") if cfg.input else sys.stdin
    try:
        for line in stream:
            text = line.rstrip("\r\n")
            try:
                label, scores = predict_text(model, text)
            except EmptyInput:
                sys.stdout.write("ERROR:empty_input\n")
                continue
            sys.stdout.write(f"{label}\t{scores[label]!r}\n")
    finally:
        if stream is not sys.stdin:
            stream.close()
    sys.stdout.flush()
    return EXIT_OK


def run_serve(cfg: RunConfig) -> int:
    from .serve import serve

    serve(cfg.model_path, cfg.bind, cfg.port, cfg.max_body)
    return EXIT_OK


COMMANDS = {
    "clean": run_clean,
    "stats": run_stats,
    "train": run_train,
    "evaluate": run_evaluate,
    "predict": run_predict,
    "serve": run_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"aztext {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        # stats reports an empty corpus as an input problem, not a data-quality one
        code = EXIT_USAGE if args.subcommand == "stats" else EXIT_DATA
        print(f"aztext {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    except (AztextError, OSError, ValueError) as exc:
        print(f"aztext {args.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

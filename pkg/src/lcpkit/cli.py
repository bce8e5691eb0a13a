"""Command line surface: train, predict, evaluate, ablate, coverage.

A run is described by an INI-style config file (sections below) which every
flag can override; flags win. All output files are written byte-stably so a
repeated run with identical inputs, flags and seed reproduces them exactly.
A run manifest (config snapshot, input file hashes, seed) is written next to
every model and report.

Config grammar::

    [data]                      [forest]
    train = path                n_trees = 120
    test = path                 max_features_per_split = 750
    dev_fraction = 0.2          min_samples_leaf = 1
    eval_on = dev               min_samples_split = 2
                                max_depth = none
    [features]                  bootstrap = true
    preset = lcp_rit            seed = 42
    enabled = length,syllables
    trigram_min_count = 5       [run]
    trigram_max_vocab = 700     seed = 42
    frequency_source = lexicon  threads = 1

    [pos]
    tag_lexicon = path

    [lexicon:prevalence]
    path = prevalence.tsv
    kind = continuous           # or binary
    term_column = 0
    value_column = 1
    lowercase = true
    skip_rows = 0

Exit codes: 0 success, 1 usage, 2 data error, 3 resource error.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .corpus import band_of, parse_dataset, split_train_dev
from .errors import DataError, LcpkitError, ResourceError
from .evaluation import AblationRow, MetricsReport, evaluate, format_metric, render_report
from .features import (
    FEATURE_FAMILIES,
    PRESETS,
    FeatureConfig,
    FeatureSchema,
    LexiconTagger,
)
from .forest import ForestConfig, load_model, save_model
from .lexicons import LexiconRegistry, LexiconSpec, coverage, load_lexicon
from .pipeline import fit_and_evaluate, predict_scores, run_ablation

logger = logging.getLogger(__name__)


class UsageError(LcpkitError):
    """Bad flag/config combination; maps to exit code 1."""


# ---------------------------------------------------------------------------
# Run configuration


@dataclass
class RunConfig:
    train_path: str | None = None
    test_path: str | None = None
    dev_fraction: float = 0.2
    eval_on: str = "dev"
    seed: int = 0
    threads: int = 1
    preset: str | None = None
    enabled: frozenset[str] | None = None
    trigram_min_count: int = 5
    trigram_max_vocab: int = 700
    frequency_source: str = "lexicon"
    forest: ForestConfig = field(default_factory=ForestConfig)
    forest_seed_set: bool = False
    lexicons: dict[str, LexiconSpec] = field(default_factory=dict)
    pos_lexicon: str | None = None

    def feature_config(self) -> FeatureConfig:
        kwargs = dict(
            trigram_min_count=self.trigram_min_count,
            trigram_max_vocab=self.trigram_max_vocab,
            frequency_source=self.frequency_source,
        )
        if self.preset is not None:
            return FeatureConfig.preset(self.preset, **kwargs)
        if self.enabled is not None:
            return FeatureConfig(enabled=self.enabled, **kwargs)
        return FeatureConfig.preset("baseline", **kwargs)

    def forest_config(self) -> ForestConfig:
        seed = self.forest.seed if self.forest_seed_set else self.seed
        return replace(self.forest, seed=seed)


_ALLOWED_KEYS = {
    "data": {"train", "test", "dev_fraction", "eval_on"},
    "features": {"preset", "enabled", "trigram_min_count", "trigram_max_vocab", "frequency_source"},
    "forest": {
        "n_trees",
        "max_features_per_split",
        "min_samples_leaf",
        "min_samples_split",
        "max_depth",
        "bootstrap",
        "seed",
    },
    "run": {"seed", "threads"},
    "pos": {"tag_lexicon"},
}
_LEXICON_KEYS = {"path", "kind", "term_column", "value_column", "lowercase", "skip_rows"}


def _parse_bool(raw: str, where: str) -> bool:
    if raw.lower() in ("true", "1", "yes", "on"):
        return True
    if raw.lower() in ("false", "0", "no", "off"):
        return False
    raise DataError(f"config {where}: expected a boolean, got {raw!r}")


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise DataError(f"config {where}: expected an integer, got {raw!r}") from None


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise DataError(f"config {where}: expected a number, got {raw!r}") from None


def parse_enabled_list(raw: str) -> frozenset[str]:
    families = frozenset(f.strip() for f in raw.split(",") if f.strip())
    if not families:
        raise DataError("feature list is empty")
    unknown = families - set(FEATURE_FAMILIES)
    if unknown:
        raise DataError(f"unknown feature families: {sorted(unknown)}")
    return families


def load_run_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if path is None:
        return cfg
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read config file {path}: {exc}") from None
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=path)
    except configparser.Error as exc:
        raise DataError(f"config file {path}: {exc}") from None

    for section in parser.sections():
        if section.startswith("lexicon:"):
            name = section.split(":", 1)[1].strip()
            if not name:
                raise DataError(f"config section [{section}]: empty lexicon name")
            keys = dict(parser.items(section))
            unknown = keys.keys() - _LEXICON_KEYS
            if unknown:
                raise DataError(f"config section [{section}]: unknown keys {sorted(unknown)}")
            if "path" not in keys:
                raise DataError(f"config section [{section}]: missing required key 'path'")
            cfg.lexicons[name] = LexiconSpec(
                name=name,
                path=keys["path"],
                kind=keys.get("kind", "continuous"),
                term_column=_parse_int(keys.get("term_column", "0"), f"[{section}] term_column"),
                value_column=_parse_int(keys.get("value_column", "1"), f"[{section}] value_column"),
                lowercase=_parse_bool(keys.get("lowercase", "true"), f"[{section}] lowercase"),
                skip_rows=_parse_int(keys.get("skip_rows", "0"), f"[{section}] skip_rows"),
            )
            continue
        if section not in _ALLOWED_KEYS:
            raise DataError(f"config file {path}: unknown section [{section}]")
        keys = dict(parser.items(section))
        unknown = keys.keys() - _ALLOWED_KEYS[section]
        if unknown:
            raise DataError(f"config section [{section}]: unknown keys {sorted(unknown)}")
        for key, raw in keys.items():
            where = f"[{section}] {key}"
            if section == "data":
                if key == "train":
                    cfg.train_path = raw
                elif key == "test":
                    cfg.test_path = raw
                elif key == "dev_fraction":
                    cfg.dev_fraction = _parse_float(raw, where)
                elif key == "eval_on":
                    cfg.eval_on = raw
            elif section == "features":
                if key == "preset":
                    cfg.preset = raw
                elif key == "enabled":
                    cfg.enabled = parse_enabled_list(raw)
                elif key == "trigram_min_count":
                    cfg.trigram_min_count = _parse_int(raw, where)
                elif key == "trigram_max_vocab":
                    cfg.trigram_max_vocab = _parse_int(raw, where)
                elif key == "frequency_source":
                    cfg.frequency_source = raw
            elif section == "forest":
                if key == "max_depth":
                    depth = None if raw.lower() == "none" else _parse_int(raw, where)
                    cfg.forest = replace(cfg.forest, max_depth=depth)
                elif key == "bootstrap":
                    cfg.forest = replace(cfg.forest, bootstrap=_parse_bool(raw, where))
                elif key == "seed":
                    cfg.forest = replace(cfg.forest, seed=_parse_int(raw, where))
                    cfg.forest_seed_set = True
                else:
                    cfg.forest = replace(cfg.forest, **{key: _parse_int(raw, where)})
            elif section == "run":
                if key == "seed":
                    cfg.seed = _parse_int(raw, where)
                elif key == "threads":
                    cfg.threads = _parse_int(raw, where)
            elif section == "pos":
                cfg.pos_lexicon = raw
    return cfg


def _apply_common_flags(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.seed is not None:
        cfg.seed = args.seed
        cfg.forest_seed_set = False
    if args.threads is not None:
        cfg.threads = args.threads
    if getattr(args, "train", None):
        cfg.train_path = args.train
    if getattr(args, "preset", None):
        if args.preset not in PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
        cfg.preset = args.preset
    if getattr(args, "features", None):
        cfg.enabled = parse_enabled_list(args.features)
        cfg.preset = None
    if getattr(args, "dev_fraction", None) is not None:
        cfg.dev_fraction = args.dev_fraction
    if getattr(args, "eval_on", None):
        cfg.eval_on = args.eval_on
    return cfg


# ---------------------------------------------------------------------------
# Resource loading


def _read_file(path: str, what: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ResourceError(f"cannot read {what} {path}: {exc}") from None


def needed_lexicon_names(feature_config: FeatureConfig, configured: set[str]) -> list[str]:
    """Registry names that must be loaded for the enabled feature families."""
    needed: list[str] = []
    enabled = feature_config.enabled
    if "aoa" in enabled:
        needed.extend(n for n in ("aoa_1981", "aoa_2017") if n in configured)
    for fam in ("prevalence", "concreteness_brysbaert", "concreteness_mrc", "familiarity_mrc", "arousal"):
        if fam in enabled and fam in configured:
            needed.append(fam)
    if "prior_complexity" in enabled:
        needed.extend(sorted(n for n in configured if n.startswith("prior_complexity")))
    if "frequency" in enabled and feature_config.frequency_source == "lexicon" and "frequency" in configured:
        needed.append("frequency")
    return needed


def build_registry(cfg: RunConfig, feature_config: FeatureConfig) -> LexiconRegistry:
    registry = LexiconRegistry()
    for name in needed_lexicon_names(feature_config, set(cfg.lexicons)):
        spec = cfg.lexicons[name]
        registry.add(load_lexicon(spec, _read_file(spec.path, f"lexicon {name!r}")))
    return registry


def load_tagger(cfg: RunConfig, feature_config: FeatureConfig) -> LexiconTagger | None:
    if "pos" not in feature_config.enabled or cfg.pos_lexicon is None:
        return None
    return LexiconTagger.load(_read_file(cfg.pos_lexicon, "pos lexicon"))


# ---------------------------------------------------------------------------
# Manifest


def _sha256(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _config_snapshot(cfg: RunConfig) -> dict:
    feature = cfg.feature_config()
    forest = cfg.forest_config()
    snap = {
        "data.train": cfg.train_path,
        "data.test": cfg.test_path,
        "data.dev_fraction": cfg.dev_fraction,
        "data.eval_on": cfg.eval_on,
        "features.enabled": ",".join(sorted(feature.enabled)),
        "features.preset": cfg.preset,
        "features.trigram_min_count": feature.trigram_min_count,
        "features.trigram_max_vocab": feature.trigram_max_vocab,
        "features.frequency_source": feature.frequency_source,
        "forest.n_trees": forest.n_trees,
        "forest.max_features_per_split": forest.max_features_per_split,
        "forest.min_samples_leaf": forest.min_samples_leaf,
        "forest.min_samples_split": forest.min_samples_split,
        "forest.max_depth": forest.max_depth,
        "forest.bootstrap": forest.bootstrap,
        "forest.seed": forest.seed,
        "run.seed": cfg.seed,
        "pos.tag_lexicon": cfg.pos_lexicon,
    }
    for name, spec in sorted(cfg.lexicons.items()):
        snap[f"lexicon.{name}"] = spec.path
    return snap


def write_manifest(
    out_path: Path, command: str, cfg: RunConfig, input_paths: list[str], outputs: list[str]
) -> None:
    inputs = {}
    for p in input_paths:
        try:
            inputs[p] = _sha256(Path(p).read_bytes())
        except OSError:
            inputs[p] = None
    doc = {
        "version": 1,
        "command": command,
        "seed": cfg.seed,
        "config": _config_snapshot(cfg),
        "inputs": inputs,
        "outputs": outputs,
    }
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    manifest_path.write_bytes(
        (json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=1) + "\n").encode("utf-8")
    )


# ---------------------------------------------------------------------------
# Commands


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def _metrics_line(report: MetricsReport) -> str:
    return (
        f"n={report.n}"
        f" r={format_metric(report.pearson_r)}"
        f" rho={format_metric(report.spearman_rho)}"
        f" mae={format_metric(report.mae)}"
        f" mse={format_metric(report.mse)}"
    )


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"missing required input: give {flag} or set it in the config file")
    return value


def _dataset_inputs(cfg: RunConfig, feature_config: FeatureConfig) -> list[str]:
    paths = [cfg.train_path] if cfg.train_path else []
    paths += [cfg.lexicons[n].path for n in needed_lexicon_names(feature_config, set(cfg.lexicons))]
    if "pos" in feature_config.enabled and cfg.pos_lexicon:
        paths.append(cfg.pos_lexicon)
    return paths


def cmd_train(args) -> int:
    cfg = _apply_common_flags(load_run_config(args.config), args)
    train_path = _require(cfg.train_path, "--train")
    feature_config = cfg.feature_config()
    instances = parse_dataset(_read_file(train_path, "training dataset"), has_gold=True)
    split = split_train_dev(instances, cfg.dev_fraction, cfg.seed)
    registry = build_registry(cfg, feature_config)
    tagger = load_tagger(cfg, feature_config)
    result = fit_and_evaluate(
        split,
        registry,
        feature_config,
        cfg.forest_config(),
        tagger,
        eval_on=cfg.eval_on,
        n_threads=cfg.threads,
    )
    model_path = Path(args.model)
    try:
        with open(model_path, "wb") as sink:
            save_model(result.model, sink)
        schema_path = model_path.with_name(model_path.name + ".schema.json")
        schema_path.write_bytes(result.schema.to_json().encode("utf-8"))
    except OSError as exc:
        raise ResourceError(f"cannot write model output: {exc}") from None
    write_manifest(
        model_path,
        "train",
        cfg,
        _dataset_inputs(cfg, feature_config),
        [model_path.name, schema_path.name],
    )
    _say(args, f"model written to {model_path}")
    if result.report is not None:
        _say(args, f"{cfg.eval_on} metrics: {_metrics_line(result.report)}")
    return 0


def cmd_predict(args) -> int:
    cfg = _apply_common_flags(load_run_config(args.config), args)
    model_bytes = _read_file(args.model, "model file")
    model = load_model(model_bytes)
    schema_path = args.schema or args.model + ".schema.json"
    schema = FeatureSchema.from_json(_read_file(schema_path, "schema file"))
    feature_config = schema.config
    registry = build_registry(cfg, feature_config)
    tagger = load_tagger(cfg, feature_config)
    instances = parse_dataset(_read_file(args.input, "input dataset"), has_gold=False)
    scores = predict_scores(instances, schema, model, registry, tagger)
    lines = ["id\tprediction\tband"]
    for inst, score in zip(instances, scores):
        lines.append(f"{inst.id}\t{score:.3f}\t{band_of(float(score)).value}")
    out_path = Path(args.output)
    try:
        out_path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    except OSError as exc:
        raise ResourceError(f"cannot write predictions: {exc}") from None
    inputs = [args.model, schema_path, args.input]
    inputs += [cfg.lexicons[n].path for n in needed_lexicon_names(feature_config, set(cfg.lexicons))]
    write_manifest(out_path, "predict", cfg, inputs, [out_path.name])
    _say(args, f"{len(instances)} predictions written to {out_path}")
    return 0


def _parse_predictions(data: bytes, path: str) -> dict[str, float]:
    try:
        lines = data.decode("utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise DataError(f"predictions file {path}: not valid UTF-8: {exc}") from None
    if not lines:
        raise DataError(f"predictions file {path}: empty")
    header = lines[0].split("\t")
    if header[:2] != ["id", "prediction"]:
        raise DataError(f"predictions file {path}: expected header starting 'id\\tprediction'")
    out: dict[str, float] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) < 2:
            raise DataError(f"predictions file {path} line {line_no}: expected at least 2 columns")
        if parts[0] in out:
            raise DataError(f"predictions file {path} line {line_no}: duplicate id {parts[0]!r}")
        try:
            out[parts[0]] = float(parts[1])
        except ValueError:
            raise DataError(
                f"predictions file {path} line {line_no}: non-numeric prediction {parts[1]!r}"
            ) from None
    return out


def cmd_evaluate(args) -> int:
    cfg = _apply_common_flags(load_run_config(args.config), args)
    predictions = _parse_predictions(_read_file(args.pred, "predictions file"), args.pred)
    gold_instances = parse_dataset(_read_file(args.gold, "gold dataset"), has_gold=True)
    labeled = [inst for inst in gold_instances if inst.gold is not None]
    if not labeled:
        raise DataError(f"gold dataset {args.gold} contains no labeled instances")
    missing = [inst.id for inst in labeled if inst.id not in predictions]
    if missing:
        shown = ", ".join(missing[:10]) + ("..." if len(missing) > 10 else "")
        raise DataError(f"{len(missing)} gold id(s) missing from predictions: {shown}")
    pred = [predictions[inst.id] for inst in labeled]
    gold = [inst.gold for inst in labeled]
    report = evaluate(pred, gold)
    _say(args, _metrics_line(report))
    if args.report:
        text = render_report([AblationRow("evaluation", report)], args.format)
        report_path = Path(args.report)
        try:
            report_path.write_bytes(text.encode("utf-8"))
        except OSError as exc:
            raise ResourceError(f"cannot write report: {exc}") from None
        write_manifest(report_path, "evaluate", cfg, [args.pred, args.gold], [report_path.name])
    return 0


def cmd_ablate(args) -> int:
    cfg = _apply_common_flags(load_run_config(args.config), args)
    train_path = _require(cfg.train_path, "--train")
    candidates = [c.strip() for c in args.candidates.split(",") if c.strip()]
    baseline = cfg.feature_config()
    all_families = FeatureConfig(enabled=frozenset(baseline.enabled | set(candidates)),
                                 frequency_source=baseline.frequency_source,
                                 trigram_min_count=baseline.trigram_min_count,
                                 trigram_max_vocab=baseline.trigram_max_vocab)
    instances = parse_dataset(_read_file(train_path, "training dataset"), has_gold=True)
    split = split_train_dev(instances, cfg.dev_fraction, cfg.seed)
    registry = build_registry(cfg, all_families)
    tagger = load_tagger(cfg, all_families)
    rows = run_ablation(
        split,
        registry,
        baseline,
        candidates,
        cfg.forest_config(),
        tagger,
        eval_on=cfg.eval_on,
        n_threads=cfg.threads,
    )
    text = render_report(rows, args.format)
    report_path = Path(args.report)
    try:
        report_path.write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise ResourceError(f"cannot write report: {exc}") from None
    write_manifest(report_path, "ablate", cfg, _dataset_inputs(cfg, all_families), [report_path.name])
    for row in rows:
        _say(args, f"{row.label}: {_metrics_line(row.report)}")
    return 0


def cmd_coverage(args) -> int:
    cfg = _apply_common_flags(load_run_config(args.config), args)
    train_path = _require(cfg.train_path, "--train")
    if args.lexicon not in cfg.lexicons:
        raise ResourceError(f"lexicon {args.lexicon!r} is not configured (add [lexicon:{args.lexicon}])")
    spec = cfg.lexicons[args.lexicon]
    lex = load_lexicon(spec, _read_file(spec.path, f"lexicon {args.lexicon!r}"))
    instances = parse_dataset(_read_file(train_path, "training dataset"), has_gold=True)
    vocab = sorted({lex.normalize(inst.token.strip()) for inst in instances})
    stat = coverage(lex, vocab)
    print(
        f"coverage lexicon={stat.lexicon_name} vocab={stat.vocab_size}"
        f" covered={stat.covered} fraction={stat.fraction:.4f}"
    )
    return 0


# ---------------------------------------------------------------------------
# Parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lcp",
        description="Lexical complexity prediction toolkit",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run config file (INI format)")
    common.add_argument("--seed", type=int, default=None, help="seed for split and forest (default: 0)")
    common.add_argument("--threads", type=int, default=None, help="tree building threads, 0 = auto (default: 1)")
    common.add_argument("--quiet", action="store_true", help="suppress informational output (default: off)")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "train",
        parents=[common],
        help="fit a model and report dev metrics",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--train", metavar="PATH", help="labeled training dataset TSV")
    p.add_argument("--model", metavar="PATH", required=True, help="output model file")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None, help="feature preset (default: baseline)")
    p.add_argument("--features", metavar="LIST", default=None, help="comma-separated feature families")
    p.add_argument("--dev-fraction", type=float, default=None, help="held-out fraction (default: 0.2)")
    p.add_argument("--eval-on", choices=["dev", "train"], default=None, help="evaluation side (default: dev)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser(
        "predict",
        parents=[common],
        help="score an unlabeled dataset with a trained model",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--model", metavar="PATH", required=True, help="trained model file")
    p.add_argument("--schema", metavar="PATH", default=None, help="schema sidecar (default: MODEL.schema.json)")
    p.add_argument("--input", metavar="PATH", required=True, help="unlabeled dataset TSV")
    p.add_argument("--output", metavar="PATH", required=True, help="output predictions TSV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser(
        "evaluate",
        parents=[common],
        help="score a predictions file against gold labels",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--pred", metavar="PATH", required=True, help="predictions TSV (id, prediction)")
    p.add_argument("--gold", metavar="PATH", required=True, help="labeled dataset TSV")
    p.add_argument("--report", metavar="PATH", default=None, help="optional rendered report file")
    p.add_argument("--format", choices=["markdown", "csv"], default="markdown", help="report format")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "ablate",
        parents=[common],
        help="baseline-plus-one-feature ablation report",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--train", metavar="PATH", help="labeled training dataset TSV")
    p.add_argument("--candidates", metavar="LIST", default="", help="comma-separated candidate families")
    p.add_argument("--report", metavar="PATH", required=True, help="output report file")
    p.add_argument("--format", choices=["markdown", "csv"], default="markdown", help="report format")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None, help="baseline preset (default: baseline)")
    p.add_argument("--features", metavar="LIST", default=None, help="baseline families, comma-separated")
    p.add_argument("--dev-fraction", type=float, default=None, help="held-out fraction (default: 0.2)")
    p.add_argument("--eval-on", choices=["dev", "train"], default=None, help="evaluation side (default: dev)")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser(
        "coverage",
        parents=[common],
        help="lexicon coverage of distinct training targets",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    p.add_argument("--train", metavar="PATH", help="labeled training dataset TSV")
    p.add_argument("--lexicon", metavar="NAME", required=True, help="configured lexicon name")
    p.set_defaults(func=cmd_coverage)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

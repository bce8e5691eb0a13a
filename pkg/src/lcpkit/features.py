"""Feature schema fitting and per-instance vector extraction.

Feature families (config names):

* ``length``, ``syllables``, ``frequency`` - statistical features
* ``char_bigrams``, ``char_trigrams`` - character n-gram counts plus two
  aggregate columns (mean and min of log(1 + training count))
* ``aoa``, ``prevalence``, ``concreteness_brysbaert``, ``concreteness_mrc``,
  ``familiarity_mrc``, ``arousal``, ``prior_complexity`` - lexicon lookups,
  each with a paired 0/1 coverage indicator column and training-mean imputation
* ``pos`` - one-hot tag from a pluggable tagger over a 12-tag universal set

Column order is fixed: statistical block, lexicon scalars with indicators,
POS one-hot, n-gram aggregates, n-gram count columns. Extraction is total:
missing data is imputed, never raised.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import IO, Mapping, Protocol, Sequence

import numpy as np

from .corpus import Instance
from .errors import DataError, ResourceError
from .forest import columns_fingerprint
from .lexicons import BINARY, Lexicon, LexiconRegistry, lookup, merge_average, merge_binary_union

VOWELS = frozenset("aeiouy")

FEATURE_FAMILIES = (
    "length",
    "syllables",
    "frequency",
    "char_bigrams",
    "char_trigrams",
    "aoa",
    "prevalence",
    "concreteness_brysbaert",
    "concreteness_mrc",
    "familiarity_mrc",
    "arousal",
    "pos",
    "prior_complexity",
)

#: Lexicon-backed scalar families in schema column order.
LEXICON_FAMILIES = (
    "aoa",
    "prevalence",
    "concreteness_brysbaert",
    "concreteness_mrc",
    "familiarity_mrc",
    "arousal",
    "prior_complexity",
)

#: 12-tag universal part-of-speech set used by the one-hot block.
POS_TAGSET = ("ADJ", "ADP", "ADV", "CONJ", "DET", "NOUN", "NUM", "PRON", "PRT", "VERB", "X", ".")

_BASELINE = frozenset({"length", "syllables", "frequency", "char_trigrams"})
_MODEL1 = _BASELINE | {"aoa", "prevalence", "concreteness_brysbaert"}

PRESETS: dict[str, frozenset[str]] = {
    "baseline": _BASELINE,
    "model1": frozenset(_MODEL1),
    "model2": frozenset(_MODEL1 | {"familiarity_mrc", "prior_complexity"}),
    "lcp_rit": frozenset(_MODEL1 | {"arousal"}),
}

FREQUENCY_SOURCES = ("lexicon", "corpus_internal")


def syllable_count(word: str) -> int:
    """Heuristic syllable count, always at least 1.

    Counts maximal vowel runs (a, e, i, o, u, y) in the lowercased word, then
    drops one for a trailing silent "e" unless the word ends in "le" after a
    consonant.
    """
    if not word:
        raise ValueError("syllable_count requires a non-empty word")
    w = word.lower()
    runs = 0
    in_run = False
    for ch in w:
        if ch in VOWELS:
            if not in_run:
                runs += 1
            in_run = True
        else:
            in_run = False
    silent_le = len(w) >= 3 and w.endswith("le") and w[-3] not in VOWELS
    if w.endswith("e") and runs > 1 and not silent_le:
        runs -= 1
    return max(runs, 1)


def char_ngrams(word: str, n: int) -> list[str]:
    """Padded character n-grams of the lowercased word, duplicates retained."""
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    if not word:
        raise ValueError("char_ngrams requires a non-empty word")
    s = "^" + word.lower() + "$"
    return [s[i : i + n] for i in range(len(s) - n + 1)]


class Tagger(Protocol):
    def __call__(self, token: str, sentence: str) -> str: ...


class LexiconTagger:
    """Most-frequent-tag lookup tagger; unknown tokens get "X"."""

    def __init__(self, tags: Mapping[str, str]):
        self._tags = dict(tags)

    def __call__(self, token: str, sentence: str) -> str:
        return self._tags.get(token.strip().lower(), "X")

    @classmethod
    def load(cls, source: IO[bytes] | bytes) -> "LexiconTagger":
        """Load a ``term<TAB>tag`` TSV; repeated terms keep their most frequent
        tag (ties to the lexicographically smaller tag)."""
        data = source if isinstance(source, (bytes, bytearray)) else source.read()
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DataError(f"pos lexicon: not valid UTF-8: {exc}") from None
        counts: dict[str, Counter] = {}
        for line_no, line in enumerate(text.splitlines(), start=1):
            parts = line.split("\t")
            if len(parts) < 2:
                raise DataError(f"pos lexicon line {line_no}: expected 2 columns")
            term = parts[0].strip().lower()
            tag = parts[1].strip()
            if not term:
                raise DataError(f"pos lexicon line {line_no}: empty term")
            if tag not in POS_TAGSET:
                raise DataError(f"pos lexicon line {line_no}: unknown tag {tag!r}")
            counts.setdefault(term, Counter())[tag] += 1
        tags = {t: min(c.items(), key=lambda kv: (-kv[1], kv[0]))[0] for t, c in counts.items()}
        return cls(tags)


def pos_tag(token: str, sentence: str, tagger: Tagger, tagset: Sequence[str] = POS_TAGSET) -> str:
    """Tag a token with the given tagger, coercing anything off-tagset to "X"."""
    tag = tagger(token, sentence)
    return tag if tag in tagset else "X"


@dataclass(frozen=True)
class FeatureConfig:
    enabled: frozenset[str]
    trigram_min_count: int = 5
    trigram_max_vocab: int = 700
    frequency_source: str = "lexicon"

    def __post_init__(self):
        object.__setattr__(self, "enabled", frozenset(self.enabled))
        if not self.enabled:
            raise ValueError("at least one feature family must be enabled")
        unknown = self.enabled - set(FEATURE_FAMILIES)
        if unknown:
            raise ValueError(f"unknown feature families: {sorted(unknown)}")
        if self.trigram_min_count < 1:
            raise ValueError("trigram_min_count must be >= 1")
        if self.trigram_max_vocab < 1:
            raise ValueError("trigram_max_vocab must be >= 1")
        if self.frequency_source not in FREQUENCY_SOURCES:
            raise ValueError(f"frequency_source must be one of {FREQUENCY_SOURCES}")

    @classmethod
    def preset(cls, name: str, **kwargs) -> "FeatureConfig":
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return cls(enabled=PRESETS[name], **kwargs)


@dataclass(frozen=True)
class FeatureColumn:
    name: str
    kind: str  # scalar | onehot | ngram_count
    impute: float = 0.0


@dataclass(frozen=True)
class FeatureSchema:
    """Fitted, ordered feature description.

    Everything extraction needs besides the lexicon registry itself lives
    here: imputation means, n-gram vocabularies with their training counts,
    the POS tagset and (for the corpus-internal source) frequency counts.
    """

    config: FeatureConfig
    impute: Mapping[str, float]
    bigram_vocab: tuple[str, ...]
    trigram_vocab: tuple[str, ...]
    bigram_counts: Mapping[str, int]
    trigram_counts: Mapping[str, int]
    pos_tagset: tuple[str, ...]
    internal_frequency: Mapping[str, int] | None
    columns: tuple[FeatureColumn, ...] = field(default=())

    def __post_init__(self):
        if not self.columns:
            object.__setattr__(self, "columns", tuple(_build_columns(self)))

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    def fingerprint(self) -> str:
        return columns_fingerprint(self.column_names())

    def to_json(self) -> str:
        doc = {
            "version": 1,
            "config": {
                "enabled": sorted(self.config.enabled),
                "trigram_min_count": self.config.trigram_min_count,
                "trigram_max_vocab": self.config.trigram_max_vocab,
                "frequency_source": self.config.frequency_source,
            },
            "impute": dict(self.impute),
            "bigram_vocab": list(self.bigram_vocab),
            "trigram_vocab": list(self.trigram_vocab),
            "bigram_counts": dict(self.bigram_counts),
            "trigram_counts": dict(self.trigram_counts),
            "pos_tagset": list(self.pos_tagset),
            "internal_frequency": None
            if self.internal_frequency is None
            else dict(self.internal_frequency),
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str | bytes) -> "FeatureSchema":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"schema file: invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or doc.get("version") != 1:
            raise DataError("schema file: missing or unsupported version")
        try:
            cfg = FeatureConfig(
                enabled=frozenset(doc["config"]["enabled"]),
                trigram_min_count=doc["config"]["trigram_min_count"],
                trigram_max_vocab=doc["config"]["trigram_max_vocab"],
                frequency_source=doc["config"]["frequency_source"],
            )
            return cls(
                config=cfg,
                impute={k: float(v) for k, v in doc["impute"].items()},
                bigram_vocab=tuple(doc["bigram_vocab"]),
                trigram_vocab=tuple(doc["trigram_vocab"]),
                bigram_counts={k: int(v) for k, v in doc["bigram_counts"].items()},
                trigram_counts={k: int(v) for k, v in doc["trigram_counts"].items()},
                pos_tagset=tuple(doc["pos_tagset"]),
                internal_frequency=None
                if doc["internal_frequency"] is None
                else {k: int(v) for k, v in doc["internal_frequency"].items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"schema file: bad content: {exc}") from None


def _build_columns(schema: FeatureSchema) -> list[FeatureColumn]:
    enabled = schema.config.enabled
    cols: list[FeatureColumn] = []
    if "length" in enabled:
        cols.append(FeatureColumn("length", "scalar"))
    if "syllables" in enabled:
        cols.append(FeatureColumn("syllables", "scalar"))
    if "frequency" in enabled:
        cols.append(FeatureColumn("frequency", "scalar", 0.0))
        cols.append(FeatureColumn("frequency_present", "scalar"))
    for fam in LEXICON_FAMILIES:
        if fam in enabled:
            cols.append(FeatureColumn(fam, "scalar", schema.impute[fam]))
            cols.append(FeatureColumn(f"{fam}_present", "scalar"))
    if "pos" in enabled:
        cols.extend(FeatureColumn(f"pos={t}", "onehot") for t in schema.pos_tagset)
    if "char_bigrams" in enabled:
        cols.append(FeatureColumn("bigram_log_mean", "scalar"))
        cols.append(FeatureColumn("bigram_log_min", "scalar"))
    if "char_trigrams" in enabled:
        cols.append(FeatureColumn("trigram_log_mean", "scalar"))
        cols.append(FeatureColumn("trigram_log_min", "scalar"))
    if "char_bigrams" in enabled:
        cols.extend(FeatureColumn(f"bi:{g}", "ngram_count") for g in schema.bigram_vocab)
    if "char_trigrams" in enabled:
        cols.extend(FeatureColumn(f"tri:{g}", "ngram_count") for g in schema.trigram_vocab)
    return cols


_FAMILY_REGISTRY_HINTS = {
    "aoa": "aoa_1981 and/or aoa_2017",
    "prior_complexity": "one or more prior_complexity_* entries",
}


def resolve_family_lexicons(registry: LexiconRegistry, config: FeatureConfig) -> dict[str, Lexicon]:
    """Map each enabled lexicon-backed family to its backing lexicon.

    ``aoa`` averages the two age-of-acquisition registry entries when both are
    present; ``prior_complexity`` unions every binary ``prior_complexity*``
    entry. A missing backing resource raises ResourceError naming the family.
    """

    def require(family: str, lex: Lexicon | None) -> Lexicon:
        if lex is None:
            hint = _FAMILY_REGISTRY_HINTS.get(family, family)
            raise ResourceError(
                f"feature family '{family}' has no backing lexicon (expected registry entry: {hint})"
            )
        return lex

    views: dict[str, Lexicon] = {}
    for fam in LEXICON_FAMILIES:
        if fam not in config.enabled:
            continue
        if fam == "aoa":
            parts = [lex for name in ("aoa_1981", "aoa_2017") if (lex := registry.get(name))]
            if len(parts) == 2:
                views[fam] = merge_average(parts[0], parts[1])
            else:
                views[fam] = require(fam, parts[0] if parts else None)
        elif fam == "prior_complexity":
            names = [n for n in registry.names() if n.startswith("prior_complexity")]
            sources = [registry.get(n) for n in names]
            if not sources:
                require(fam, None)
            bad = [lex.name for lex in sources if lex.kind != BINARY]
            if bad:
                raise ResourceError(f"feature family 'prior_complexity': lexicons {bad} are not binary")
            views[fam] = sources[0] if len(sources) == 1 else merge_binary_union(sources)
        else:
            views[fam] = require(fam, registry.get(fam))
    if "frequency" in config.enabled and config.frequency_source == "lexicon":
        views["frequency"] = require("frequency", registry.get("frequency"))
    return views


def _fit_ngram_vocab(tokens: Sequence[str], n: int, min_count: int, max_vocab: int):
    counter: Counter = Counter()
    for tok in tokens:
        counter.update(char_ngrams(tok, n))
    kept = sorted(
        ((g, c) for g, c in counter.items() if c >= min_count),
        key=lambda gc: (-gc[1], gc[0]),
    )[:max_vocab]
    return tuple(g for g, _ in kept), {g: c for g, c in kept}


def fit_schema(
    train: Sequence[Instance],
    registry: LexiconRegistry,
    config: FeatureConfig,
    tagger: Tagger | None = None,
) -> FeatureSchema:
    """Fit the feature schema on training instances.

    Imputation means are averaged over the covered training targets of each
    enabled lexicon; a lexicon covering none of them fails fast. N-gram
    vocabularies keep grams with total training count >= trigram_min_count,
    most frequent first (ties lexicographic), capped at trigram_max_vocab.
    """
    if not train:
        raise ValueError("cannot fit a schema on empty training data")
    views = resolve_family_lexicons(registry, config)
    if "pos" in config.enabled and tagger is None:
        raise ResourceError("feature family 'pos' is enabled but no tagger is configured")

    tokens = [inst.token.strip() for inst in train]

    bigram_vocab: tuple[str, ...] = ()
    trigram_vocab: tuple[str, ...] = ()
    bigram_counts: dict[str, int] = {}
    trigram_counts: dict[str, int] = {}
    if "char_bigrams" in config.enabled:
        bigram_vocab, bigram_counts = _fit_ngram_vocab(
            tokens, 2, config.trigram_min_count, config.trigram_max_vocab
        )
    if "char_trigrams" in config.enabled:
        trigram_vocab, trigram_counts = _fit_ngram_vocab(
            tokens, 3, config.trigram_min_count, config.trigram_max_vocab
        )

    impute: dict[str, float] = {}
    for fam in LEXICON_FAMILIES:
        if fam not in config.enabled:
            continue
        values = [v for tok in tokens if (v := lookup(views[fam], tok)) is not None]
        if not values:
            raise ResourceError(
                f"lexicon for feature family '{fam}' covers none of the training targets"
            )
        impute[fam] = float(np.mean(values))

    internal_frequency: dict[str, int] | None = None
    if "frequency" in config.enabled and config.frequency_source == "corpus_internal":
        counter: Counter = Counter()
        for inst in train:
            counter.update(inst.sentence.lower().split())
        internal_frequency = dict(counter)

    return FeatureSchema(
        config=config,
        impute=impute,
        bigram_vocab=bigram_vocab,
        trigram_vocab=trigram_vocab,
        bigram_counts=bigram_counts,
        trigram_counts=trigram_counts,
        pos_tagset=POS_TAGSET,
        internal_frequency=internal_frequency,
    )


def _ngram_values(token_key: str, n: int, vocab, counts) -> list[float]:
    grams = char_ngrams(token_key, n)
    logs = [math.log1p(counts.get(g, 0)) for g in grams]
    agg = [sum(logs) / len(logs), min(logs)]
    occur = Counter(grams)
    return agg + [float(occur.get(g, 0)) for g in vocab]


def _extract_row(
    instance: Instance,
    schema: FeatureSchema,
    views: Mapping[str, Lexicon],
    tagger: Tagger | None,
) -> list[float]:
    cfg = schema.config
    enabled = cfg.enabled
    key = instance.token.strip()
    values: list[float] = []
    if "length" in enabled:
        values.append(float(len(key)))
    if "syllables" in enabled:
        values.append(float(syllable_count(key)))
    if "frequency" in enabled:
        if cfg.frequency_source == "corpus_internal":
            raw = (schema.internal_frequency or {}).get(key.lower())
        else:
            raw = lookup(views["frequency"], key)
        if raw is None:
            values.extend([0.0, 0.0])
        else:
            values.extend([math.log1p(max(float(raw), 0.0)), 1.0])
    for fam in LEXICON_FAMILIES:
        if fam not in enabled:
            continue
        v = lookup(views[fam], key)
        if v is None:
            values.extend([schema.impute[fam], 0.0])
        else:
            values.extend([float(v), 1.0])
    if "pos" in enabled:
        if tagger is None:
            raise ValueError("schema has the pos family enabled but no tagger was provided")
        tag = pos_tag(instance.token, instance.sentence, tagger, schema.pos_tagset)
        values.extend(1.0 if t == tag else 0.0 for t in schema.pos_tagset)
    ngram_aggs: list[float] = []
    ngram_counts: list[float] = []
    if "char_bigrams" in enabled:
        block = _ngram_values(key, 2, schema.bigram_vocab, schema.bigram_counts)
        ngram_aggs.extend(block[:2])
        ngram_counts.extend(block[2:])
    if "char_trigrams" in enabled:
        block = _ngram_values(key, 3, schema.trigram_vocab, schema.trigram_counts)
        ngram_aggs.extend(block[:2])
        ngram_counts.extend(block[2:])
    values.extend(ngram_aggs)
    values.extend(ngram_counts)
    return values


def extract(
    instance: Instance,
    schema: FeatureSchema,
    registry: LexiconRegistry,
    tagger: Tagger | None = None,
) -> np.ndarray:
    """Feature vector for one instance, aligned with ``schema.columns``.

    Total over valid instances: missing lexicon values are imputed with their
    paired indicator set to 0, unknown n-grams count as 0, unknown POS maps
    to "X". The result never contains non-finite values.
    """
    views = resolve_family_lexicons(registry, schema.config)
    row = _extract_row(instance, schema, views, tagger)
    return np.asarray(row, dtype=np.float64)


def extract_matrix(
    instances: Sequence[Instance],
    schema: FeatureSchema,
    registry: LexiconRegistry,
    tagger: Tagger | None = None,
) -> np.ndarray:
    """Stacked feature vectors, shape (len(instances), len(schema.columns))."""
    views = resolve_family_lexicons(registry, schema.config)
    width = len(schema.columns)
    if not instances:
        return np.zeros((0, width), dtype=np.float64)
    rows = [_extract_row(inst, schema, views, tagger) for inst in instances]
    return np.asarray(rows, dtype=np.float64)


def with_families(config: FeatureConfig, *families: str) -> FeatureConfig:
    """Copy of the config with extra families enabled."""
    return replace(config, enabled=frozenset(config.enabled | set(families)))

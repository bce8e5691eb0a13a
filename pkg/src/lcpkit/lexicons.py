"""Psycholinguistic lexicon ingestion and querying.

A lexicon is an immutable term -> value map loaded from a generic TSV layout
(configurable term/value columns). Continuous lexicons hold real-valued norms
(age of acquisition, prevalence, concreteness, familiarity, arousal, raw
frequency counts); binary lexicons hold 0/1 prior complexity labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

from .errors import DataError

CONTINUOUS = "continuous"
BINARY = "binary"


@dataclass(frozen=True)
class LexiconSpec:
    """How to read one lexicon file: columns, kind and normalization."""

    name: str
    path: str
    kind: str = CONTINUOUS
    term_column: int = 0
    value_column: int = 1
    lowercase: bool = True
    skip_rows: int = 0

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, BINARY):
            raise ValueError(f"lexicon {self.name!r}: kind must be continuous or binary")
        if self.term_column == self.value_column:
            raise ValueError(f"lexicon {self.name!r}: term_column equals value_column")
        if self.term_column < 0 or self.value_column < 0 or self.skip_rows < 0:
            raise ValueError(f"lexicon {self.name!r}: negative column or skip_rows")


@dataclass(frozen=True)
class Lexicon:
    """Immutable normalized term -> value map with provenance name and kind."""

    name: str
    kind: str
    entries: Mapping[str, float]
    lowercase: bool = True

    @property
    def source_count(self) -> int:
        return len(self.entries)

    def normalize(self, term: str) -> str:
        return term.lower() if self.lowercase else term


@dataclass(frozen=True)
class CoverageStat:
    lexicon_name: str
    vocab_size: int
    covered: int

    @property
    def fraction(self) -> float:
        return self.covered / self.vocab_size


def load_lexicon(spec: LexiconSpec, source: IO[bytes] | bytes) -> Lexicon:
    """Load a lexicon from a UTF-8 TSV stream.

    Duplicate terms are averaged (continuous) or resolved 1-if-any-1 (binary).
    Non-numeric value cells, out-of-{0,1} binary values, short rows and empty
    terms raise DataError with the line number.
    """
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    try:
        text = bytes(data).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"lexicon {spec.name!r}: not valid UTF-8: {exc}") from None

    need = max(spec.term_column, spec.value_column) + 1
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line_no <= spec.skip_rows:
            continue
        parts = line.split("\t")
        if len(parts) < need:
            raise DataError(
                f"lexicon {spec.name!r} line {line_no}: expected at least {need} columns,"
                f" found {len(parts)}"
            )
        term = parts[spec.term_column].strip()
        if not term:
            raise DataError(f"lexicon {spec.name!r} line {line_no}: empty term")
        if spec.lowercase:
            term = term.lower()
        cell = parts[spec.value_column].strip()
        try:
            value = float(cell)
        except ValueError:
            raise DataError(
                f"lexicon {spec.name!r} line {line_no}: non-numeric value {cell!r}"
            ) from None
        if spec.kind == BINARY and value not in (0.0, 1.0):
            raise DataError(
                f"lexicon {spec.name!r} line {line_no}: binary value must be 0 or 1, got {cell}"
            )
        if spec.kind == BINARY:
            sums[term] = max(sums.get(term, 0.0), value)
            counts[term] = 1
        else:
            sums[term] = sums.get(term, 0.0) + value
            counts[term] = counts.get(term, 0) + 1
    entries = {t: sums[t] / counts[t] for t in sums}
    return Lexicon(name=spec.name, kind=spec.kind, entries=entries, lowercase=spec.lowercase)


def lookup(lex: Lexicon, term: str) -> float | None:
    """Value for the normalized term, or None when absent. Never raises."""
    return lex.entries.get(lex.normalize(term))


def merge_average(a: Lexicon, b: Lexicon) -> Lexicon:
    """Average two continuous lexicons term-wise.

    Terms present in both sides get the mean of the two values; terms present
    in exactly one keep their single value.
    """
    if a.kind != CONTINUOUS or b.kind != CONTINUOUS:
        raise ValueError(f"merge_average requires continuous lexicons, got {a.kind}/{b.kind}")
    if a.lowercase != b.lowercase:
        raise ValueError("merge_average requires matching normalization")
    entries = dict(a.entries)
    for term, value in b.entries.items():
        entries[term] = (entries[term] + value) / 2.0 if term in entries else value
    return Lexicon(name=f"{a.name}+{b.name}", kind=CONTINUOUS, entries=entries, lowercase=a.lowercase)


def merge_binary_union(sources: Sequence[Lexicon]) -> Lexicon:
    """Union binary lexicons; conflicting labels resolve to 1 (complex wins)."""
    if not sources:
        raise ValueError("merge_binary_union requires at least one source")
    for lex in sources:
        if lex.kind != BINARY:
            raise ValueError(f"merge_binary_union: lexicon {lex.name!r} is not binary")
        if lex.lowercase != sources[0].lowercase:
            raise ValueError("merge_binary_union requires matching normalization")
    entries: dict[str, float] = {}
    for lex in sources:
        for term, value in lex.entries.items():
            entries[term] = max(entries.get(term, 0.0), value)
    return Lexicon(
        name="+".join(lex.name for lex in sources),
        kind=BINARY,
        entries=entries,
        lowercase=sources[0].lowercase,
    )


def coverage(lex: Lexicon, vocab: Iterable[str]) -> CoverageStat:
    """Fraction of a vocabulary the lexicon covers."""
    terms = list(vocab)
    if not terms:
        raise ValueError("coverage requires a non-empty vocabulary")
    covered = sum(1 for t in terms if lookup(lex, t) is not None)
    return CoverageStat(lexicon_name=lex.name, vocab_size=len(terms), covered=covered)


@dataclass
class LexiconRegistry:
    """Named collection of loaded lexicons, built once and shared read-only."""

    _by_name: dict[str, Lexicon] = field(default_factory=dict)

    def add(self, lex: Lexicon) -> None:
        if lex.name in self._by_name:
            raise ValueError(f"duplicate lexicon name {lex.name!r}")
        self._by_name[lex.name] = lex

    def get(self, name: str) -> Lexicon | None:
        return self._by_name.get(name)

    def names(self) -> list[str]:
        return sorted(self._by_name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

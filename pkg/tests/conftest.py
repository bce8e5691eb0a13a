"""Shared builders for toy datasets and lexicons."""

from __future__ import annotations

import math
import random
import string

import pytest

from lcpkit.corpus import Instance, parse_dataset
from lcpkit.lexicons import Lexicon, LexiconRegistry

SUBCORPORA = ("bible", "europarl", "biomed")


def dataset_tsv(rows, with_gold_column=True) -> bytes:
    header = "id\tcorpus\tsentence\ttoken" + ("\tcomplexity" if with_gold_column else "")
    lines = [header]
    for row in rows:
        lines.append("\t".join(str(c) for c in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def lexicon_tsv(entries) -> bytes:
    return ("\n".join(f"{t}\t{v}" for t, v in entries) + "\n").encode("utf-8")


def random_word(rng: random.Random, min_len=3, max_len=10) -> str:
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(min_len, max_len)))


def make_instances(n: int, seed: int, score=None) -> list[Instance]:
    """n distinct-token instances; gold from ``score(token, rng)`` when given."""
    rng = random.Random(seed)
    words = set()
    while len(words) < n:
        words.add(random_word(rng))
    instances = []
    for k, word in enumerate(sorted(words)):
        gold = None if score is None else score(word, rng)
        instances.append(
            Instance(
                id=f"i{k:05d}",
                subcorpus=SUBCORPORA[k % 3],
                sentence=f"every {word} in this sentence counts",
                token=word,
                gold=gold,
            )
        )
    return instances


def make_registry(**lexicons: Lexicon) -> LexiconRegistry:
    registry = LexiconRegistry()
    for lex in lexicons.values():
        registry.add(lex)
    return registry


def continuous_lexicon(name: str, entries: dict) -> Lexicon:
    return Lexicon(name=name, kind="continuous", entries=dict(entries))


def binary_lexicon(name: str, entries: dict) -> Lexicon:
    return Lexicon(name=name, kind="binary", entries=dict(entries))


@pytest.fixture
def tiny_corpus_bytes() -> bytes:
    rows = [
        ("a1", "bible", "there came up out of the river seven cattle", "river", "0.10"),
        ("a2", "europarl", "the parliament adopted the proposal", "proposal", "0.35"),
        ("a3", "biomed", "the protein misfolds under stress", "protein", "0.55"),
        ("a4", "bible", "a voice cried in the wilderness", "wilderness", "0.80"),
        ("a5", "europarl", "the committee was unanimous", "committee", "0.25"),
        ("a6", "biomed", "enzyme kinetics were measured", "enzyme", "0.60"),
    ]
    return dataset_tsv(rows)


@pytest.fixture
def tiny_instances(tiny_corpus_bytes) -> list[Instance]:
    return parse_dataset(tiny_corpus_bytes, has_gold=True)


def synthetic_complexity(word: str, freq: int, noise: float, max_log: float) -> float:
    """Syllables-plus-frequency-deficit target used by recovery tests."""
    from lcpkit.features import syllable_count

    deficit = max_log - math.log1p(freq)
    raw = 0.1 * syllable_count(word) + 0.05 * deficit + noise
    return min(1.0, max(0.0, raw))

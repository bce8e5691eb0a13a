import pytest

from lcpkit.errors import DataError
from lcpkit.lexicons import (
    LexiconSpec,
    coverage,
    load_lexicon,
    lookup,
    merge_average,
    merge_binary_union,
)

from conftest import binary_lexicon, continuous_lexicon, lexicon_tsv


def cont_spec(name="test", **kwargs) -> LexiconSpec:
    return LexiconSpec(name=name, path=f"{name}.tsv", kind="continuous", **kwargs)


def bin_spec(name="labels", **kwargs) -> LexiconSpec:
    return LexiconSpec(name=name, path=f"{name}.tsv", kind="binary", **kwargs)


class TestLoad:
    def test_basic_load(self):
        lex = load_lexicon(cont_spec(), lexicon_tsv([("dog", 2.3), ("cat", 4.1)]))
        assert lex.entries == {"dog": 2.3, "cat": 4.1}
        assert lex.source_count == 2

    def test_duplicates_averaged(self):
        lex = load_lexicon(cont_spec(), lexicon_tsv([("dog", 2.3), ("dog", 3.7)]))
        assert lex.entries["dog"] == pytest.approx(3.0)

    def test_triple_duplicate_averaged(self):
        lex = load_lexicon(cont_spec(), lexicon_tsv([("dog", 1.0), ("dog", 2.0), ("dog", 6.0)]))
        assert lex.entries["dog"] == pytest.approx(3.0)

    def test_binary_any_one_wins(self):
        lex = load_lexicon(bin_spec(), lexicon_tsv([("arcane", 1), ("arcane", 0)]))
        assert lex.entries["arcane"] == 1.0

    def test_lowercase_normalization(self):
        lex = load_lexicon(cont_spec(), lexicon_tsv([("DOG", 2.3)]))
        assert lookup(lex, "dog") == 2.3
        assert lookup(lex, "DOG") == 2.3

    def test_lowercase_disabled(self):
        lex = load_lexicon(cont_spec(lowercase=False), lexicon_tsv([("DOG", 2.3)]))
        assert lookup(lex, "DOG") == 2.3
        assert lookup(lex, "dog") is None

    def test_non_numeric_value_names_line(self):
        with pytest.raises(DataError, match="line 2"):
            load_lexicon(cont_spec(), lexicon_tsv([("dog", 2.3), ("cat", "often")]))

    def test_binary_value_out_of_domain(self):
        with pytest.raises(DataError, match="0 or 1"):
            load_lexicon(bin_spec(), lexicon_tsv([("dog", 0.5)]))

    def test_short_row_names_line(self):
        with pytest.raises(DataError, match="line 1"):
            load_lexicon(cont_spec(), b"loneword\n")

    def test_custom_columns(self):
        data = b"x\tdog\t9\t2.5\n"
        lex = load_lexicon(cont_spec(term_column=1, value_column=3), data)
        assert lex.entries == {"dog": 2.5}

    def test_skip_rows(self):
        data = b"Word\tRating\ndog\t2.0\n"
        lex = load_lexicon(cont_spec(skip_rows=1), data)
        assert lex.entries == {"dog": 2.0}

    def test_spec_rejects_equal_columns(self):
        with pytest.raises(ValueError):
            LexiconSpec(name="x", path="x.tsv", term_column=1, value_column=1)


class TestMergeAverage:
    def test_shared_terms_averaged(self):
        merged = merge_average(
            continuous_lexicon("a", {"cat": 3.0}), continuous_lexicon("b", {"cat": 5.0})
        )
        assert merged.entries["cat"] == 4.0

    def test_single_source_fallback(self):
        merged = merge_average(
            continuous_lexicon("a", {"zygote": 10.0}), continuous_lexicon("b", {"cat": 5.0})
        )
        assert merged.entries["zygote"] == 10.0
        assert merged.entries["cat"] == 5.0

    def test_idempotent_on_identical_inputs(self):
        lex = continuous_lexicon("a", {"cat": 3.0, "dog": 2.5})
        merged = merge_average(lex, lex)
        assert dict(merged.entries) == dict(lex.entries)

    def test_commutative(self):
        a = continuous_lexicon("a", {"cat": 3.0, "owl": 1.0})
        b = continuous_lexicon("b", {"cat": 5.0, "elk": 9.0})
        assert dict(merge_average(a, b).entries) == dict(merge_average(b, a).entries)

    def test_kind_mismatch_rejected(self):
        with pytest.raises(ValueError):
            merge_average(continuous_lexicon("a", {"x": 1.0}), binary_lexicon("b", {"x": 1.0}))


class TestMergeBinaryUnion:
    def test_conflict_resolves_to_one(self):
        merged = merge_binary_union(
            [binary_lexicon("a", {"w": 1.0}), binary_lexicon("b", {"w": 0.0})]
        )
        assert merged.entries["w"] == 1.0

    def test_disjoint_union_cardinality(self):
        a = binary_lexicon("a", {f"a{i}": 1.0 for i in range(10)})
        b = binary_lexicon("b", {f"b{i}": 0.0 for i in range(16)})
        assert merge_binary_union([a, b]).source_count == 26

    def test_three_disjoint_sources(self):
        sizes = (4, 7, 11)
        sources = [
            binary_lexicon(f"s{k}", {f"s{k}w{i}": 1.0 for i in range(n)})
            for k, n in enumerate(sizes)
        ]
        assert merge_binary_union(sources).source_count == sum(sizes)

    def test_values_stay_binary(self):
        merged = merge_binary_union(
            [binary_lexicon("a", {"w": 1.0, "v": 0.0}), binary_lexicon("b", {"v": 1.0})]
        )
        assert set(merged.entries.values()) <= {0.0, 1.0}

    def test_combined_prior_label_resource_scale(self):
        # two overlapping shared-task label sets plus a complexity lexicon,
        # combining to 26,088 distinct labeled words
        a = binary_lexicon("cwi_2016", {f"w{i}": float(i % 2) for i in range(12000)})
        b = binary_lexicon("cwi_2018", {f"w{i}": 1.0 for i in range(8000, 16000)})
        c = binary_lexicon("wcl", {f"v{i}": 1.0 for i in range(10088)})
        merged = merge_binary_union([a, b, c])
        assert merged.source_count == 26088

    def test_empty_sources_rejected(self):
        with pytest.raises(ValueError):
            merge_binary_union([])

    def test_non_binary_source_rejected(self):
        with pytest.raises(ValueError):
            merge_binary_union([continuous_lexicon("a", {"x": 2.0})])


class TestLookupCoverage:
    def test_missing_term_absent(self):
        lex = continuous_lexicon("a", {"dog": 2.3})
        assert lookup(lex, "unseen") is None

    def test_lookup_pure(self):
        lex = continuous_lexicon("a", {"dog": 2.3})
        assert lookup(lex, "dog") == lookup(lex, "dog") == 2.3

    def test_fraction_arithmetic(self):
        lex = continuous_lexicon("a", {"a": 1.0, "b": 2.0})
        stat = coverage(lex, {"a", "b", "c", "d"})
        assert stat.covered == 2
        assert stat.vocab_size == 4
        assert stat.fraction == 0.5

    def test_full_coverage(self):
        lex = continuous_lexicon("a", {"a": 1.0, "b": 2.0, "c": 3.0})
        assert coverage(lex, {"a", "b"}).fraction == 1.0

    def test_own_terms_fully_covered(self):
        lex = continuous_lexicon("a", {"a": 1.0, "b": 2.0})
        assert coverage(lex, set(lex.entries)).fraction == 1.0

    def test_empty_vocab_rejected(self):
        with pytest.raises(ValueError):
            coverage(continuous_lexicon("a", {"a": 1.0}), set())

from __future__ import annotations

import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from varnet.ingest import (
    Catalog,
    CatalogError,
    DatasetRecord,
    catalog_stats,
    dump_csv,
    dump_jsonl,
    normalize_label,
    parse_csv,
    parse_jsonl,
    sample,
)

from conftest import DATA


def cat(*sets: set[str]) -> Catalog:
    return Catalog(tuple(DatasetRecord(f"d{i}", tuple(sorted(s))) for i, s in enumerate(sets)))


labels = st.text(st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=12).filter(lambda s: s.strip())


@st.composite
def catalogs(draw, max_records: int = 10) -> Catalog:
    n = draw(st.integers(0, max_records))
    vocab = draw(st.lists(st.sampled_from("abcdefghij"), min_size=1, max_size=10, unique=True))
    recs = []
    for i in range(n):
        vs = draw(st.lists(st.sampled_from(vocab), min_size=1, unique=True))
        title = draw(st.one_of(st.none(), st.text(max_size=5)))
        recs.append(DatasetRecord(f"r{i:02d}", tuple(vs), title))
    return Catalog(tuple(recs))


class TestNormalize:
    def test_examples(self):
        assert normalize_label("  Longitude ") == "longitude"
        assert normalize_label("名前") == "名前"
        assert normalize_label("Wind \t  Speed") == "wind speed"

    def test_blank_rejected(self):
        with pytest.raises(CatalogError):
            normalize_label("  ")

    def test_nfc(self):
        assert normalize_label("Café") == "café"

    @given(labels)
    def test_idempotent(self, raw):
        try:
            once = normalize_label(raw)
        except CatalogError:
            return
        assert normalize_label(once) == once


class TestParseJsonl:
    def test_normalizes(self):
        c = parse_jsonl(['{"id":"d1","variables":["Lat"," lon "]}'])
        assert len(c) == 1
        assert set(c.records[0].variables) == {"lat", "lon"}

    def test_empty(self):
        assert len(parse_jsonl([])) == 0
        assert len(parse_jsonl(["", "  \n"])) == 0

    def test_case_duplicates_merge(self):
        c = parse_jsonl(['{"id":"d1","variables":["lat","LAT"]}'])
        assert c.records[0].variables == ("lat",)

    def test_no_normalize_keeps_raw(self):
        c = parse_jsonl(['{"id":"d1","variables":["lat","LAT"]}'], normalize=False)
        assert c.records[0].variables == ("lat", "LAT")

    @pytest.mark.parametrize(
        "lines, line",
        [
            (['{"id":"d1","variables":["a"]}', "{not json"], 2),
            (['{"variables":["a"]}'], 1),
            (['{"id":"d1"}'], 1),
            (['{"id":"d1","variables":"a"}'], 1),
            (['{"id":"d1","variables":[]}'], 1),
            (['{"id":"d1","variables":["  "]}'], 1),
            (['{"id":"d1","variables":["a"]}', "", '{"id":"d1","variables":["b"]}'], 3),
        ],
    )
    def test_errors_carry_line(self, lines, line):
        with pytest.raises(CatalogError) as info:
            parse_jsonl(lines)
        assert info.value.line == line

    def test_title_kept(self):
        c = parse_jsonl(['{"id":"d1","title":"Rain","variables":["a"]}'])
        assert c.records[0].title == "Rain"


class TestParseCsv:
    def test_basic(self):
        c = parse_csv("id,variables\nd1,lat;lon\n")
        assert c.records[0].variables == ("lat", "lon")

    def test_empty_variables(self):
        with pytest.raises(CatalogError, match="empty variable list"):
            parse_csv("id,variables\nd1,\n")

    def test_duplicate_id(self):
        with pytest.raises(CatalogError, match="duplicate"):
            parse_csv("id,variables\nd1,a\nd1,b\n")

    def test_missing_header(self):
        with pytest.raises(CatalogError, match="header"):
            parse_csv("d1,lat;lon\n")

    def test_title_column(self):
        c = parse_csv('id,variables,title\nd1,"a;B",Some title\n')
        assert c.records[0] == DatasetRecord("d1", ("a", "b"), "Some title")

    def test_csv_jsonl_agree(self, fixture_path):
        jc = parse_jsonl(fixture_path.read_text(encoding="utf-8").splitlines())
        assert parse_csv(dump_csv(jc, canonical=False)) == jc


class TestCatalog:
    def test_index_is_inverse(self):
        c = cat({"a", "b"}, {"b", "c"}, {"d"})
        assert c.index == {"a": {"d0"}, "b": {"d0", "d1"}, "c": {"d1"}, "d": {"d2"}}

    def test_duplicate_ids(self):
        with pytest.raises(CatalogError):
            Catalog((DatasetRecord("x", ("a",)), DatasetRecord("x", ("b",))))

    @given(catalogs())
    def test_index_sizes_sum_to_total(self, c):
        assert sum(len(ids) for ids in c.index.values()) == catalog_stats(c).total_variables

    @given(catalogs())
    def test_jsonl_round_trip(self, c):
        assert parse_jsonl(io.StringIO(dump_jsonl(c, canonical=False))) == c
        assert parse_jsonl(io.StringIO(dump_jsonl(c))) == c.canonical()

    def test_canonical_serialization(self):
        c = Catalog((DatasetRecord("b", ("z", "y")), DatasetRecord("a", ("q",))))
        lines = dump_jsonl(c).splitlines()
        assert [json.loads(x)["id"] for x in lines] == ["a", "b"]
        assert json.loads(lines[1])["variables"] == ["y", "z"]


class TestStats:
    def test_hand_count(self):
        s = catalog_stats(cat({"a", "b"}, {"b", "c"}, {"d"}))
        assert (s.total_data, s.total_variables, s.variable_types, s.max_variables, s.min_variables) == (3, 5, 4, 2, 1)

    def test_empty(self):
        assert catalog_stats(Catalog()).to_dict() == dict.fromkeys(
            ["total_data", "total_variables", "variable_types", "max_variables", "min_variables"], 0
        )

    def test_fixture_golden(self, fixture_path):
        c = parse_jsonl(fixture_path.open(encoding="utf-8"))
        golden = json.loads((DATA / "fixture_stats.json").read_text())
        assert catalog_stats(c).to_dict() == golden

    @given(catalogs())
    def test_invariants(self, c):
        s = catalog_stats(c)
        assert s.variable_types <= s.total_variables
        assert s.min_variables <= s.max_variables


class TestSample:
    def test_all_is_identity(self):
        c = cat({"a"}, {"b"}, {"c"})
        for seed in (0, 1, 99):
            assert sample(c, 3, seed) == c

    def test_zero(self):
        assert len(sample(cat({"a"}, {"b"}), 0, 5)) == 0

    def test_too_many(self):
        with pytest.raises(CatalogError):
            sample(cat({"a"}), 2, 0)

    def test_golden(self):
        c = parse_jsonl((DATA / "ten.jsonl").open(encoding="utf-8"))
        first = dump_jsonl(sample(c, 3, 42))
        assert dump_jsonl(sample(c, 3, 42)) == first
        assert first == (DATA / "ten_sample_3_42.jsonl").read_text(encoding="utf-8")

    @given(catalogs(), st.data())
    def test_subset_and_size(self, c, data):
        n = data.draw(st.integers(0, len(c)))
        seed = data.draw(st.integers(0, 2**32))
        s = sample(c, n, seed)
        assert len(s) == n
        assert set(s.records) <= set(c.records)

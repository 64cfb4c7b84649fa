"""CSV loading and seeded attribute sub-sampling."""

from __future__ import annotations

import pytest

from conftest import DATA_2, make_dataset2
from ontoshape.errors import DatasetError
from ontoshape.tabular import (
    Dataset,
    Table,
    list_attributes,
    load_dataset,
    load_table,
    subsample_attributes,
)


def _write_data2(tmp_path):
    (tmp_path / "welding_operation.csv").write_text(DATA_2, encoding="utf-8")
    return tmp_path


def test_load_dataset_fixture(tmp_path):
    d = load_dataset(_write_data2(tmp_path), "welding_operation")
    assert set(d.tables) == {"welding_operation"}
    t = d.main
    assert t.attributes == ["operation_id", "program_id", "current_mean", "current_array"]
    assert len(t.rows) == 2
    assert t.rows[0]["operation_id"] == "op1"


def test_quoted_cells_preserved(tmp_path):
    d = load_dataset(_write_data2(tmp_path), "welding_operation")
    # the quoted list must come back exactly, comma included
    assert d.main.rows[0]["current_array"] == "[1,2]"
    assert d.main.rows[1]["current_array"] == "[3,4]"


def test_missing_main_table(tmp_path):
    _write_data2(tmp_path)
    with pytest.raises(DatasetError, match="main table not found: sensors"):
        load_dataset(tmp_path, "sensors")


def test_ragged_row_reports_row_number(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b,c,d\n1,2,3,4\n1,2,3\n", encoding="utf-8")
    with pytest.raises(DatasetError, match=r"row 3: expected 4 cells, got 3"):
        load_table(path)


def test_duplicate_header(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("a,b,a\n1,2,3\n", encoding="utf-8")
    with pytest.raises(DatasetError, match="duplicate header"):
        load_table(path)


def test_empty_file_is_empty_table(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    t = load_table(path)
    assert t.name == "empty"
    assert t.attributes == []
    assert t.rows == []


def test_list_attributes_fixture():
    d = make_dataset2()
    assert list_attributes(d) == [
        ("welding_operation", "operation_id"),
        ("welding_operation", "program_id"),
        ("welding_operation", "current_mean"),
        ("welding_operation", "current_array"),
    ]


def test_list_attributes_empty():
    d = Dataset({"m": Table("m", [], [])}, "m")
    assert list_attributes(d) == []


def test_list_attributes_orders_by_table_name():
    d = Dataset(
        {
            "zeta": Table("zeta", ["x"], []),
            "alpha": Table("alpha", ["y", "z"], []),
        },
        "alpha",
    )
    assert list_attributes(d) == [("alpha", "y"), ("alpha", "z"), ("zeta", "x")]


def test_subsample_is_deterministic():
    d = make_dataset2()
    a = subsample_attributes(d, 2, {"operation_id"}, seed=7)
    b = subsample_attributes(d, 2, {"operation_id"}, seed=7)
    assert a.main.attributes == b.main.attributes
    assert a.main.rows == b.main.rows


def test_subsample_counts_and_retained():
    d = make_dataset2()
    out = subsample_attributes(d, 2, {"operation_id"}, seed=7)
    attrs = out.main.attributes
    assert "operation_id" in attrs
    assert len(attrs) == 3  # retained + k sampled
    assert set(attrs) <= set(d.main.attributes)
    # rows carry exactly the kept attributes
    assert all(set(row) == set(attrs) for row in out.main.rows)


def test_subsample_preserves_attribute_order():
    d = make_dataset2()
    out = subsample_attributes(d, 3, {"operation_id"}, seed=3)
    original = d.main.attributes
    assert out.main.attributes == [a for a in original if a in set(out.main.attributes)]


def test_subsample_k_zero_keeps_only_retained():
    d = make_dataset2()
    out = subsample_attributes(d, 0, {"operation_id"}, seed=1)
    assert out.main.attributes == ["operation_id"]


def test_subsample_all_candidates_is_identity():
    d = make_dataset2()
    out = subsample_attributes(d, 3, {"operation_id"}, seed=5)
    assert out.main.attributes == d.main.attributes
    assert out.main.rows == d.main.rows


def test_subsample_k_too_large():
    d = make_dataset2()
    with pytest.raises(ValueError, match="k too large"):
        subsample_attributes(d, 4, {"operation_id"}, seed=1)


def test_subsample_leaves_other_tables_alone():
    d = make_dataset2()
    d.tables["extra"] = Table("extra", ["a"], [{"a": "1"}])
    out = subsample_attributes(d, 1, {"operation_id"}, seed=2)
    assert out.tables["extra"] is d.tables["extra"]


def test_subsample_seeds_differ():
    # with 3 candidates and k=1 two seeds should eventually disagree
    d = make_dataset2()
    picks = {
        tuple(subsample_attributes(d, 1, {"operation_id"}, seed=s).main.attributes)
        for s in range(8)
    }
    assert len(picks) > 1

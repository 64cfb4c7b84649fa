"""Command line behavior: exit codes, file outputs, determinism."""

from __future__ import annotations

import pytest
from conftest import DATA_2, MAPPINGS_WX, ONTOLOGY_WX

from ontoshape.cli import main
from ontoshape.kggen import generate_kg, serialize_ntriples
from ontoshape.mapping import UserInfo, parse_mappings
from ontoshape.ontology import parse_ontology
from ontoshape.reshape import parse_schema, reshape, serialize_schema
from ontoshape.tabular import load_dataset


@pytest.fixture()
def workdir(tmp_path):
    (tmp_path / "ontology.osf").write_text(ONTOLOGY_WX, encoding="utf-8")
    (tmp_path / "mappings.csv").write_text(MAPPINGS_WX, encoding="utf-8")
    data = tmp_path / "data"
    data.mkdir()
    (data / "welding_operation.csv").write_text(DATA_2, encoding="utf-8")
    return tmp_path


def _reshape_argv(workdir, out):
    return [
        "reshape",
        "-o", str(workdir / "ontology.osf"),
        "-d", str(workdir / "data"),
        "-m", str(workdir / "mappings.csv"),
        "--main-class", "WeldingOperation",
        "--out", str(out),
    ]


def test_reshape_writes_expected_schema(workdir):
    out = workdir / "schema.txt"
    assert main(_reshape_argv(workdir, out)) == 0

    ontology = parse_ontology(ONTOLOGY_WX)
    mappings = parse_mappings(MAPPINGS_WX)
    dataset = load_dataset(str(workdir / "data"), "welding_operation")
    expected = serialize_schema(
        reshape(ontology, dataset, mappings, UserInfo("WeldingOperation"))
    )
    assert out.read_text(encoding="utf-8") == expected


def test_baseline_subcommand(workdir):
    out = workdir / "baseline.txt"
    argv = [
        "baseline",
        "-o", str(workdir / "ontology.osf"),
        "-d", str(workdir / "data"),
        "-m", str(workdir / "mappings.csv"),
        "--main-class", "WeldingOperation",
        "--out", str(out),
    ]
    assert main(argv) == 0
    schema = parse_schema(out.read_text(encoding="utf-8"))
    assert len(schema.classes) == 8


def test_generate_and_metrics(workdir, capsys):
    schema_file = workdir / "schema.txt"
    kg_file = workdir / "kg.nt"
    assert main(_reshape_argv(workdir, schema_file)) == 0
    assert main([
        "generate",
        "-s", str(schema_file),
        "-d", str(workdir / "data"),
        "-m", str(workdir / "mappings.csv"),
        "--out", str(kg_file),
    ]) == 0

    schema = parse_schema(schema_file.read_text(encoding="utf-8"))
    dataset = load_dataset(str(workdir / "data"), "welding_operation")
    expected = serialize_ntriples(
        generate_kg(schema, dataset, parse_mappings(MAPPINGS_WX), "WeldingOperation")
    )
    assert kg_file.read_text(encoding="utf-8") == expected

    assert main([
        "metrics",
        "-k", str(kg_file),
        "-s", str(schema_file),
        "-d", str(workdir / "data"),
        "-m", str(workdir / "mappings.csv"),
    ]) == 0
    report = capsys.readouterr().out
    assert report.startswith("data coverage")
    assert "#entities" in report


def test_missing_required_flag_is_usage_error(workdir, capsys):
    argv = _reshape_argv(workdir, workdir / "schema.txt")
    argv.remove("-m")
    argv.remove(str(workdir / "mappings.csv"))
    assert main(argv) == 1
    err = capsys.readouterr().err
    assert "usage:" in err
    assert "error:" in err


def test_missing_main_class_is_usage_error(workdir, capsys):
    argv = _reshape_argv(workdir, workdir / "schema.txt")
    argv.remove("--main-class")
    argv.remove("WeldingOperation")
    assert main(argv) == 1
    assert "either --userinfo or --main-class" in capsys.readouterr().err


def test_missing_input_file_is_io_error(workdir, capsys):
    argv = _reshape_argv(workdir, workdir / "schema.txt")
    argv[argv.index("-o") + 1] = str(workdir / "nope.osf")
    assert main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_ontology_is_validation_error(workdir, capsys):
    (workdir / "ontology.osf").write_text("class A\nobjprop r A B\n", encoding="utf-8")
    argv = _reshape_argv(workdir, workdir / "schema.txt")
    assert main(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("ontoshape ")


def test_userinfo_file(workdir):
    (workdir / "user.json").write_text('{"main_class": "WeldingOperation"}', encoding="utf-8")
    out = workdir / "schema.txt"
    argv = _reshape_argv(workdir, out)
    argv.remove("--main-class")
    argv.remove("WeldingOperation")
    argv[1:1] = ["-u", str(workdir / "user.json")]
    assert main(argv) == 0
    assert parse_schema(out.read_text(encoding="utf-8")).main_class == "WeldingOperation"


def test_synth_writes_fixture_tree(tmp_path):
    out = tmp_path / "fixture"
    argv = [
        "synth", "--attrs", "4", "--rows", "6", "--chain-depth", "2",
        "--entities", "1", "--seed", "9", "--out", str(out),
    ]
    assert main(argv) == 0
    assert (out / "ontology.osf").is_file()
    assert (out / "mappings.csv").is_file()
    assert (out / "userinfo.json").is_file()
    assert (out / "data" / "operation.csv").is_file()


def test_bench_writes_reports(tmp_path, capsys):
    out = tmp_path / "bench"
    argv = [
        "bench", "--synth-attrs", "5", "--rows", "8", "--chain-depth", "2",
        "--synth-entities", "1", "--counts", "2,3", "--reps", "2",
        "--seed", "3", "--out", str(out),
    ]
    assert main(argv) == 0
    assert "time ratio (baseline / reshape)" in capsys.readouterr().out
    assert (out / "report.csv").read_text(encoding="utf-8").startswith("approach,metric,")
    assert "== reshape ==" in (out / "report.txt").read_text(encoding="utf-8")


def test_bench_bad_counts_is_validation_error(tmp_path, capsys):
    argv = [
        "bench", "--counts", "5,5", "--out", str(tmp_path / "bench"),
    ]
    assert main(argv) == 1
    assert "strictly increasing" in capsys.readouterr().err


def test_same_seed_runs_are_byte_identical(workdir, tmp_path):
    outs = []
    for name in ("a", "b"):
        schema_file = tmp_path / f"schema_{name}.txt"
        kg_file = tmp_path / f"kg_{name}.nt"
        assert main(_reshape_argv(workdir, schema_file)) == 0
        assert main([
            "generate",
            "-s", str(schema_file),
            "-d", str(workdir / "data"),
            "-m", str(workdir / "mappings.csv"),
            "--out", str(kg_file),
        ]) == 0
        outs.append((schema_file.read_bytes(), kg_file.read_bytes()))
    assert outs[0] == outs[1]


def test_main_table_flag_required_with_several_tables(workdir, capsys):
    (workdir / "data" / "extra.csv").write_text("x\n1\n", encoding="utf-8")
    argv = _reshape_argv(workdir, workdir / "schema.txt")
    assert main(argv) == 1
    assert "--main-table is required" in capsys.readouterr().err

    argv += ["--main-table", "welding_operation"]
    assert main(argv) == 0

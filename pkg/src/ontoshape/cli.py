"""Command line front end.

Exit codes: 0 on success, 1 on validation or usage errors, 2 on I/O
errors. Diagnostics go to stderr; file outputs are byte stable for equal
inputs and seeds.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, bench, kggen, metrics, syndata
from .errors import OntoshapeError
from .mapping import UserInfo, parse_mappings, parse_userinfo
from .ontology import parse_ontology
from .reshape import baseline_schema, parse_schema, reshape, serialize_schema
from .tabular import load_dataset


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _add_input_flags(p: argparse.ArgumentParser, ontology: bool = True) -> None:
    if ontology:
        p.add_argument("-o", "--ontology", required=True, help="ontology file (.osf)")
    p.add_argument("-d", "--data", required=True, help="directory of <table>.csv files")
    p.add_argument("-m", "--mappings", required=True, help="mapping CSV file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ontoshape",
        description="Reshape a class ontology into a compact schema, materialize "
        "knowledge graphs from tables, and benchmark against the naive approach.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reshape", help="build the compact data-oriented schema")
    _add_input_flags(p)
    p.add_argument("-u", "--userinfo", help="user info JSON file")
    p.add_argument("--main-class", help="override the main class")
    p.add_argument("--main-table", help="main table name (default: sole table or 'operation')")
    p.add_argument("--include-unmapped", action="store_true",
                   help="attach attributes without a mapping to the main class")
    p.add_argument("--out", required=True, help="schema output file")
    p.set_defaults(func=_cmd_reshape)

    p = sub.add_parser("baseline", help="build the naive schema for comparison")
    _add_input_flags(p)
    p.add_argument("-u", "--userinfo", help="user info JSON file")
    p.add_argument("--main-class", help="override the main class")
    p.add_argument("--main-table", help="main table name (default: sole table or 'operation')")
    p.add_argument("--out", required=True, help="schema output file")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("generate", help="materialize a knowledge graph as N-Triples")
    p.add_argument("-s", "--schema", required=True, help="schema file")
    _add_input_flags(p, ontology=False)
    p.add_argument("--main-class", help="override the schema's main class")
    p.add_argument("--main-table", help="main table name (default: sole table or 'operation')")
    p.add_argument("--base-iri", default=kggen.DEFAULT_BASE_IRI,
                   help="IRI prefix, must end with '#' or '/'")
    p.add_argument("--out", required=True, help="N-Triples output file")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("metrics", help="measure a generated knowledge graph")
    p.add_argument("-k", "--kg", required=True, help="N-Triples file")
    p.add_argument("-s", "--schema", required=True, help="schema file the graph was generated from")
    _add_input_flags(p, ontology=False)
    p.add_argument("--main-class", help="override the schema's main class")
    p.add_argument("--main-table", help="main table name (default: sole table or 'operation')")
    p.add_argument("--base-iri", default=kggen.DEFAULT_BASE_IRI)
    p.add_argument("--out", help="write the text report here instead of stdout")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("bench", help="run the paired benchmark on synthetic inputs")
    p.add_argument("--synth-attrs", type=int, default=60, help="attributes in the synthetic table")
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--chain-depth", type=int, default=4)
    p.add_argument("--synth-entities", type=int, default=2)
    p.add_argument("--counts", default="10,20,30,40,50,60",
                   help="comma-separated attribute counts, strictly increasing")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--approaches", default="baseline,reshape")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", required=True, help="output directory for report.csv and report.txt")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("synth", help="write a synthetic fixture tree")
    p.add_argument("--attrs", type=int, default=60)
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--chain-depth", type=int, default=4)
    p.add_argument("--entities", type=int, default=2)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_synth)
    return parser


def _pick_main_table(args, dataset_dir: str) -> str:
    if args.main_table:
        return args.main_table
    names = sorted(p.stem for p in Path(dataset_dir).glob("*.csv"))
    if len(names) == 1:
        return names[0]
    if syndata.MAIN_TABLE in names:
        return syndata.MAIN_TABLE
    raise _UsageError("--main-table is required when the data directory holds several tables")


def _load_userinfo(args) -> UserInfo:
    if args.userinfo:
        info = parse_userinfo(Path(args.userinfo).read_text(encoding="utf-8"))
        if args.main_class:
            info.main_class = args.main_class
        return info
    if args.main_class:
        return UserInfo(args.main_class)
    raise _UsageError("either --userinfo or --main-class is required")


def _cmd_reshape(args) -> int:
    ontology = parse_ontology(Path(args.ontology).read_text(encoding="utf-8"))
    mappings = parse_mappings(Path(args.mappings).read_text(encoding="utf-8"))
    dataset = load_dataset(args.data, _pick_main_table(args, args.data))
    info = _load_userinfo(args)
    schema = reshape(ontology, dataset, mappings, info, include_unmapped=args.include_unmapped)
    Path(args.out).write_text(serialize_schema(schema), encoding="utf-8")
    return 0


def _cmd_baseline(args) -> int:
    ontology = parse_ontology(Path(args.ontology).read_text(encoding="utf-8"))
    mappings = parse_mappings(Path(args.mappings).read_text(encoding="utf-8"))
    dataset = load_dataset(args.data, _pick_main_table(args, args.data))
    info = _load_userinfo(args)
    schema = baseline_schema(ontology, dataset, mappings, info.main_class)
    Path(args.out).write_text(serialize_schema(schema), encoding="utf-8")
    return 0


def _cmd_generate(args) -> int:
    schema = parse_schema(Path(args.schema).read_text(encoding="utf-8"))
    mappings = parse_mappings(Path(args.mappings).read_text(encoding="utf-8"))
    dataset = load_dataset(args.data, _pick_main_table(args, args.data))
    mc = args.main_class or schema.main_class
    graph = kggen.generate_kg(schema, dataset, mappings, mc)
    Path(args.out).write_text(kggen.serialize_ntriples(graph, args.base_iri), encoding="utf-8")
    return 0


def _cmd_metrics(args) -> int:
    schema = parse_schema(Path(args.schema).read_text(encoding="utf-8"))
    mappings = parse_mappings(Path(args.mappings).read_text(encoding="utf-8"))
    dataset = load_dataset(args.data, _pick_main_table(args, args.data))
    kg_path = Path(args.kg)
    text = kg_path.read_text(encoding="utf-8")
    graph = kggen.load_ntriples(text, args.base_iri, schema)
    mc = args.main_class or schema.main_class
    report = metrics.build_report(
        graph, schema, dataset, mappings, mc,
        storage_bytes=len(text.encode("utf-8")),
    )
    rendered = metrics.report_text(report)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return 0


def _cmd_bench(args) -> int:
    counts = tuple(int(c) for c in args.counts.split(",") if c.strip())
    approaches = tuple(a.strip() for a in args.approaches.split(",") if a.strip())
    cfg = bench.ExperimentConfig(counts, args.reps, args.seed, approaches)
    synth_cfg = syndata.SynthConfig(
        args.synth_attrs, args.rows, args.chain_depth, args.synth_entities, args.seed
    )
    inputs = syndata.generate_synthetic(synth_cfg)
    results = bench.run_experiment(cfg, inputs, jobs=args.jobs)
    csv_doc, text_doc = bench.render_report(bench.aggregate_runs(results))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.csv").write_text(csv_doc, encoding="utf-8")
    (out / "report.txt").write_text(text_doc, encoding="utf-8")
    sys.stdout.write(text_doc)
    return 0


def _cmd_synth(args) -> int:
    cfg = syndata.SynthConfig(args.attrs, args.rows, args.chain_depth, args.entities, args.seed)
    syndata.write_fixture_tree(cfg, args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --version and --help exit through argparse
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OntoshapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Experiment harness: repeated sub-sampling, paired runs, aggregation.

Every (attribute count, repetition) cell draws its own attribute sample,
seeded with the base seed plus the repetition index, and both approaches
run on that same sample. Timing covers schema building, materialization
and triples serialization; loading the shared inputs is excluded. All
non-timing metrics are deterministic, so a rerun or a reshuffled schedule
reproduces them exactly.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from statistics import mean

from . import kggen, metrics
from .mapping import MappingSet, UserInfo
from .ontology import Ontology
from .reshape import baseline_schema, reshape
from .tabular import Dataset, subsample_attributes

log = logging.getLogger(__name__)

APPROACHES = ("baseline", "reshape")

Inputs = tuple[Ontology, Dataset, MappingSet, UserInfo]


@dataclass(frozen=True)
class ExperimentConfig:
    attribute_counts: tuple[int, ...] = (10, 20, 30, 40, 50, 60)
    repetitions: int = 10
    seed: int = 1
    approaches: tuple[str, ...] = APPROACHES

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not self.attribute_counts or any(
            b <= a for a, b in zip(self.attribute_counts, self.attribute_counts[1:])
        ):
            raise ValueError("attribute_counts must be nonempty and strictly increasing")
        unknown = set(self.approaches) - set(APPROACHES)
        if unknown or not self.approaches:
            raise ValueError(f"approaches must be a nonempty subset of {APPROACHES}")


@dataclass(frozen=True)
class RunResult:
    approach: str
    attribute_count: int
    repetition: int
    report: metrics.MetricsReport


def key_attributes(m: MappingSet, d: Dataset) -> set[str]:
    """Main-table attributes whose mapped class name marks an identifier."""
    out = set()
    for attr in d.main.attributes:
        cls = m.attribute_map.get((d.main_table, attr))
        if cls is not None and cls.upper().endswith(("ID", "NAME")):
            out.add(attr)
    return out


def run_one(approach: str, o: Ontology, d: Dataset, m: MappingSet, u: UserInfo) -> metrics.MetricsReport:
    """Run one approach end to end on an already-sampled dataset."""
    start = time.perf_counter()
    if approach == "reshape":
        schema = reshape(o, d, m, u)
    else:
        schema = baseline_schema(o, d, m, u.main_class)
    graph = kggen.generate_kg(schema, d, m, u.main_class)
    document = kggen.serialize_ntriples(graph)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return metrics.build_report(
        graph, schema, d, m, u.main_class,
        time_cost_ms=elapsed_ms,
        storage_bytes=len(document.encode("utf-8")),
    )


def _run_cell(args: tuple[Inputs, tuple[str, ...], set[str], int, int, int]) -> list[RunResult]:
    inputs, approaches, retained, count, rep, seed = args
    o, d, m, u = inputs
    sample = subsample_attributes(d, count, retained, seed + rep)
    return [RunResult(ap, count, rep, run_one(ap, o, sample, m, u)) for ap in approaches]


def run_experiment(cfg: ExperimentConfig, inputs: Inputs, jobs: int = 1) -> list[RunResult]:
    """Run every (count, repetition, approach) combination.

    Results come back ordered by count, repetition, then the configured
    approach order, regardless of the worker count.
    """
    o, d, m, u = inputs
    retained = key_attributes(m, d)
    available = len(d.main.attributes) - len(retained & set(d.main.attributes))
    if max(cfg.attribute_counts) > available:
        raise ValueError(
            f"insufficient attributes: need {max(cfg.attribute_counts)}, have {available} non-key"
        )
    cells = [
        (inputs, cfg.approaches, retained, count, rep, cfg.seed)
        for count in cfg.attribute_counts
        for rep in range(cfg.repetitions)
    ]
    results: list[RunResult] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for batch in pool.map(_run_cell, cells):
                results.extend(batch)
    else:
        for cell in cells:
            if cell[4] == 0:
                log.info("running attribute count %d (%d repetitions)", cell[3], cfg.repetitions)
            results.extend(_run_cell(cell))
    return results


def aggregate_runs(results: list[RunResult]) -> dict[tuple[str, int], dict[str, float]]:
    """Mean/max aggregation per (approach, attribute count).

    The value dict is keyed by the report row labels, plus "data coverage"
    which is kept for inspection but not rendered in the report table.
    """
    if not results:
        raise ValueError("no results to aggregate")
    groups: dict[tuple[str, int], list[metrics.MetricsReport]] = {}
    for r in results:
        groups.setdefault((r.approach, r.attribute_count), []).append(r.report)
    out = {}
    for key, reports in groups.items():
        out[key] = {
            "time cost (sec)": mean(r.time_cost_ms for r in reports) / 1000.0,
            "storage space (MB)": mean(r.storage_bytes for r in reports) / 1e6,
            "#avg. class": mean(r.class_count for r in reports),
            "#max. class": max(r.class_count for r in reports),
            "#object prop.": mean(r.object_prop_count for r in reports),
            "#data prop.": mean(r.data_prop_count for r in reports),
            "#entities": mean(r.entity_count for r in reports),
            "#avg. dummy entities": mean(r.dummy_count for r in reports),
            "#max. dummy entities": max(r.dummy_count for r in reports),
            "avg. root to leaf depth": mean(r.root_to_leaf_depth for r in reports),
            "max. root to leaf depth": max(r.root_to_leaf_depth for r in reports),
            "avg. global depth": mean(r.global_depth for r in reports),
            "max. global depth": max(r.global_depth for r in reports),
            "data coverage": mean(r.data_coverage for r in reports),
        }
    return out


def render_report(agg: dict[tuple[str, int], dict[str, float]]) -> tuple[str, str]:
    """Render aggregates as (CSV document, aligned text table).

    Columns are Set 1..Set N in ascending attribute-count order; rows use
    the fixed metric labels, one block per approach. When both approaches
    are present the text report ends with the per-set time ratio.
    """
    approaches = [ap for ap in APPROACHES if any(k[0] == ap for k in agg)]
    counts = sorted({count for _, count in agg})
    set_headers = [f"Set {i + 1}" for i in range(len(counts))]
    fmt = metrics.format_value

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["approach", "metric"] + set_headers)
    for approach in approaches:
        for label in metrics.ROW_LABELS:
            row = [approach, label]
            for count in counts:
                cell = agg.get((approach, count))
                row.append(fmt(cell[label]) if cell is not None else "")
            writer.writerow(row)
    csv_doc = buf.getvalue()

    label_width = max(len(label) for label in metrics.ROW_LABELS) + 2
    col_width = max(12, max(len(h) for h in set_headers) + 2)
    lines = []
    for approach in approaches:
        lines.append(f"== {approach} ==")
        lines.append(" " * label_width + "".join(h.rjust(col_width) for h in set_headers))
        for section, labels in (
            ("Efficiency metrics", metrics.EFFICIENCY_LABELS),
            ("Simplicity metrics", metrics.SIMPLICITY_LABELS),
        ):
            lines.append(section)
            for label in labels:
                cells = []
                for count in counts:
                    cell = agg.get((approach, count))
                    cells.append((fmt(cell[label]) if cell is not None else "-").rjust(col_width))
                lines.append(label.ljust(label_width) + "".join(cells))
        lines.append("")
    if "baseline" in approaches and "reshape" in approaches:
        cells = []
        for count in counts:
            b = agg.get(("baseline", count))
            r = agg.get(("reshape", count))
            if b is None or r is None or r["time cost (sec)"] == 0:
                cells.append("-".rjust(col_width))
            else:
                cells.append(fmt(b["time cost (sec)"] / r["time cost (sec)"]).rjust(col_width))
        lines.append("time ratio (baseline / reshape)".ljust(label_width) + "".join(cells))
        lines.append("")
    return csv_doc, "\n".join(lines)

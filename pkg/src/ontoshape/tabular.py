"""Relational input tables: CSV loading and seeded attribute sub-sampling."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DatasetError


@dataclass
class Table:
    """One relational table. Cell values stay strings; "" means missing."""

    name: str
    attributes: list[str]
    rows: list[dict[str, str]]


@dataclass
class Dataset:
    """A set of tables keyed by name, one of which is the main table."""

    tables: dict[str, Table]
    main_table: str

    @property
    def main(self) -> Table:
        return self.tables[self.main_table]


def load_table(path: Path) -> Table:
    """Read one ``<name>.csv`` file (comma separated, double-quote quoting,
    UTF-8, header first). Cell values are preserved byte for byte."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return Table(path.stem, [], [])
        seen = set()
        for name in header:
            if name in seen:
                raise DatasetError(f"{path.name}: duplicate header name {name!r}")
            seen.add(name)
        rows = []
        # row numbers count the header as row 1
        for rownum, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise DatasetError(
                    f"{path.name} row {rownum}: expected {len(header)} cells, got {len(record)}"
                )
            rows.append(dict(zip(header, record)))
    return Table(path.stem, list(header), rows)


def load_dataset(directory: str | Path, main_table: str) -> Dataset:
    """Load every ``*.csv`` file under ``directory`` as one table each."""
    directory = Path(directory)
    tables = {}
    for path in sorted(directory.glob("*.csv")):
        tables[path.stem] = load_table(path)
    if main_table not in tables:
        raise DatasetError(f"main table not found: {main_table}")
    return Dataset(tables, main_table)


def list_attributes(d: Dataset) -> list[tuple[str, str]]:
    """All (table, attribute) pairs, ordered by table name then by the
    attribute's position in its table."""
    out = []
    for name in sorted(d.tables):
        out.extend((name, a) for a in d.tables[name].attributes)
    return out


def subsample_attributes(d: Dataset, k: int, retained: set[str], seed: int) -> Dataset:
    """Return a dataset whose main table keeps the ``retained`` attributes
    plus ``k`` others sampled uniformly without replacement.

    Sampling uses a counter-based generator seeded with ``seed``, so equal
    inputs give byte-equal results. Attribute order and the other tables
    are left untouched.
    """
    main = d.main
    kept_keys = set(retained) & set(main.attributes)
    candidates = [a for a in main.attributes if a not in kept_keys]
    if k > len(candidates):
        raise ValueError(f"k too large: {k} > {len(candidates)} non-key attributes")
    if k and candidates:
        rng = np.random.Generator(np.random.Philox(seed))
        picked_idx = rng.choice(len(candidates), size=k, replace=False)
        picked = {candidates[i] for i in picked_idx}
    else:
        picked = set()
    keep = [a for a in main.attributes if a in kept_keys or a in picked]
    rows = [{a: row[a] for a in keep} for row in main.rows]
    tables = dict(d.tables)
    tables[main.name] = Table(main.name, keep, rows)
    return Dataset(tables, d.main_table)

"""Correspondences between tables/attributes and classes, plus user guidance.

Two small input documents live here. The mapping CSV declares which class a
table or an attribute corresponds to:

    kind,table,attribute,class
    table,welding_operation,,WeldingOperation
    attribute,welding_operation,current_mean,CurrentMeanValue

The user-info JSON carries what only a person can know: the main class the
data revolves around, optional entity identification rules, optional
connection rules, and the prefix used when relation names have to be made
up.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .errors import ParseError

MAPPING_HEADER = ["kind", "table", "attribute", "class"]


@dataclass
class MappingSet:
    table_map: dict[str, str]
    attribute_map: dict[tuple[str, str], str]


def parse_mappings(text: str) -> MappingSet:
    """Parse the mapping CSV. Duplicate keys, empty class cells and unknown
    kinds are rejected with the offending row number."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != MAPPING_HEADER:
        raise ParseError(f"mapping header must be {','.join(MAPPING_HEADER)}", 1)
    table_map: dict[str, str] = {}
    attribute_map: dict[tuple[str, str], str] = {}
    for lineno, record in enumerate(reader, start=2):
        if not record:
            continue
        if len(record) != 4:
            raise ParseError(f"expected 4 cells, got {len(record)}", lineno)
        kind, table, attribute, cls = (c.strip() for c in record)
        if not cls:
            raise ParseError("empty class cell", lineno)
        if kind == "table":
            if attribute:
                raise ParseError("table mapping must leave the attribute cell empty", lineno)
            if table in table_map:
                raise ParseError(f"duplicate table mapping for {table!r}", lineno)
            table_map[table] = cls
        elif kind == "attribute":
            if not attribute:
                raise ParseError("attribute mapping needs an attribute name", lineno)
            key = (table, attribute)
            if key in attribute_map:
                raise ParseError(f"duplicate attribute mapping for {table}.{attribute}", lineno)
            attribute_map[key] = cls
        else:
            raise ParseError(f"unknown kind {kind!r}", lineno)
    return MappingSet(table_map, attribute_map)


def serialize_mappings(m: MappingSet) -> str:
    """Render a mapping set back to CSV, rows sorted for determinism."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(MAPPING_HEADER)
    for table in sorted(m.table_map):
        writer.writerow(["table", table, "", m.table_map[table]])
    for table, attribute in sorted(m.attribute_map):
        writer.writerow(["attribute", table, attribute, m.attribute_map[(table, attribute)]])
    return buf.getvalue()


def resolve_table_class(m: MappingSet, table: str) -> str | None:
    return m.table_map.get(table)


def resolve_attribute_class(m: MappingSet, table: str, attribute: str) -> str | None:
    return m.attribute_map.get((table, attribute))


@dataclass(frozen=True)
class EntityRule:
    """Marks an attribute class as the identifier of an entity class."""

    attribute_class: str
    entity_class: str
    relation: str


@dataclass(frozen=True)
class ConnectionRule:
    """Names the relation to use between two schema classes."""

    from_class: str
    to_class: str
    relation: str


@dataclass
class UserInfo:
    main_class: str
    entity_rules: tuple[EntityRule, ...] = ()
    connection_rules: tuple[ConnectionRule, ...] = ()
    fallback_relation_prefix: str = "has"


def parse_userinfo(text: str) -> UserInfo:
    """Parse the user-info JSON document. ``main_class`` is mandatory."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("user info must be a JSON object")
    main_class = doc.get("main_class")
    if not isinstance(main_class, str) or not main_class:
        raise ParseError("main_class required")
    entity_rules = []
    for i, raw in enumerate(doc.get("entity_rules", [])):
        try:
            entity_rules.append(
                EntityRule(raw["attribute_class"], raw["entity_class"], raw["relation"])
            )
        except (TypeError, KeyError) as exc:
            raise ParseError(
                f"entity_rules[{i}] needs attribute_class, entity_class and relation"
            ) from exc
    connection_rules = []
    for i, raw in enumerate(doc.get("connection_rules", [])):
        try:
            connection_rules.append(ConnectionRule(raw["from"], raw["to"], raw["relation"]))
        except (TypeError, KeyError) as exc:
            raise ParseError(f"connection_rules[{i}] needs from, to and relation") from exc
    prefix = doc.get("fallback_relation_prefix", "has")
    if not isinstance(prefix, str) or not prefix:
        raise ParseError("fallback_relation_prefix must be a nonempty string")
    return UserInfo(main_class, tuple(entity_rules), tuple(connection_rules), prefix)


def serialize_userinfo(u: UserInfo) -> str:
    doc: dict = {"main_class": u.main_class}
    if u.entity_rules:
        doc["entity_rules"] = [
            {
                "attribute_class": r.attribute_class,
                "entity_class": r.entity_class,
                "relation": r.relation,
            }
            for r in u.entity_rules
        ]
    if u.connection_rules:
        doc["connection_rules"] = [
            {"from": r.from_class, "to": r.to_class, "relation": r.relation}
            for r in u.connection_rules
        ]
    if u.fallback_relation_prefix != "has":
        doc["fallback_relation_prefix"] = u.fallback_relation_prefix
    return json.dumps(doc, indent=2) + "\n"

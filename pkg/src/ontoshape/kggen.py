"""Materialize entity graphs from tables under a schema; read and write N-Triples.

Materialization walks the main table row by row. Each row yields one main
entity, one entity per keyed class (identified by the row's key value and
deduplicated globally), and one placeholder entity per keyless class.
Attribute values become literal triples on their owner's entity; every
schema edge whose two endpoint entities exist for the row becomes an object
triple. Secondary tables are joined to main entities through a shared key
attribute.

Rows could be processed in parallel as long as entity deduplication stays
race free; the sequential implementation below is the reference behavior
and any alternative must produce an identical graph.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from urllib.parse import quote, unquote

from .errors import DatasetError, SchemaError
from .mapping import MappingSet
from .reshape import KGSchema
from .tabular import Dataset

log = logging.getLogger(__name__)

RDF_TYPE_IRI = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
DEFAULT_BASE_IRI = "http://example.org/kg#"

_PLAIN_KEY = re.compile(r"[A-Za-z0-9_.\-~]+\Z")
_PLAIN_LABEL = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass
class KnowledgeGraph:
    """Entities plus object and literal triples.

    ``entities`` maps an entity id to its (class, dummy flag). Literal
    triples carry their provenance as (table, attribute, row index), or
    None when a graph was re-read from a triples file. ``key_sources``
    records the attributes whose values were consumed as entity keys; those
    attributes are represented in entity ids rather than literals.
    """

    entities: dict[str, tuple[str, bool]]
    object_triples: set[tuple[str, str, str]]
    literal_triples: set[tuple[str, str, str, tuple[str, str, int] | None]]
    key_sources: frozenset[tuple[str, str]] = frozenset()


def _label_safe(text: str) -> str:
    if _PLAIN_LABEL.match(text):
        return text
    return re.sub(r"[^A-Za-z0-9_]", lambda m: f"_{ord(m.group()):x}", text)


def mint_entity_id(class_name: str, key: str, dummy: bool = False) -> str:
    """Build a deterministic entity id from a class name and key material.

    Regular entities get ``<Class>/<percent-encoded key>``; dummies get a
    blank-node label ``_:dummy_<Class>_<key>`` with the key folded to
    label-safe characters.
    """
    if not key:
        raise ValueError("entity key material must be nonempty")
    if dummy:
        return f"_:dummy_{class_name}_{_label_safe(key)}"
    if _PLAIN_KEY.match(key):
        return f"{class_name}/{key}"
    return f"{class_name}/{quote(key, safe='')}"


def _check_schema_sources(s: KGSchema, d: Dataset) -> None:
    for cls, tname in s.class_tables.items():
        if tname not in d.tables:
            raise DatasetError(f"schema maps {cls} to table {tname!r} missing from the dataset")
    for cls, (tname, attr) in s.class_keys.items():
        if tname not in d.tables:
            raise DatasetError(f"key of {cls} names table {tname!r} missing from the dataset")
        if attr not in d.tables[tname].attributes:
            raise DatasetError(f"key of {cls} names attribute {tname}.{attr} missing from the dataset")
    for prop, _, (tname, attr) in s.data_attachments:
        if tname not in d.tables:
            raise DatasetError(f"attachment {prop} names table {tname!r} missing from the dataset")
        if attr not in d.tables[tname].attributes:
            raise DatasetError(f"attachment {prop} names attribute {tname}.{attr} missing from the dataset")


def generate_kg(s: KGSchema, d: Dataset, m: MappingSet, mc: str) -> KnowledgeGraph:
    """Materialize ``d`` under schema ``s`` with ``mc`` as the main class.

    A main-table row missing one of its key values is skipped with a
    warning. Secondary-table rows whose join value matches no main entity
    become free-standing entities, also with a warning.
    """
    if mc not in s.classes:
        raise SchemaError(f"main class {mc!r} is not part of the schema")
    _check_schema_sources(s, d)
    main = d.tables[d.main_table]
    main_name = d.main_table

    entities: dict[str, tuple[str, bool]] = {}
    objects: set[tuple[str, str, str]] = set()
    literals: list[tuple[str, str, str, tuple[str, str, int]]] = []
    key_sources: set[tuple[str, str]] = set()

    mc_key = s.class_keys.get(mc)
    if mc_key is not None and mc_key[0] != main_name:
        log.warning("key of %s comes from table %s, not the main table; using row numbers", mc, mc_key[0])
        mc_key = None

    keyed_main = [
        (cls, attr)
        for cls, (tname, attr) in sorted(s.class_keys.items())
        if tname == main_name and cls != mc
    ]
    secondary_tables = {t: cls for cls, t in s.class_tables.items() if t != main_name}
    rowkeyed_main = sorted(
        cls
        for cls in s.classes
        if cls != mc and cls not in s.class_keys and s.class_tables.get(cls) == main_name
    )
    dummy_classes = sorted(
        cls
        for cls in s.classes
        if cls != mc and cls not in s.class_keys and cls not in s.class_tables
    )
    attach_by_table: dict[str, list[tuple[str, str, str]]] = {}
    for prop, owner, (tname, attr) in sorted(s.data_attachments):
        attach_by_table.setdefault(tname, []).append((prop, owner, attr))
    edge_list = sorted(s.edges)

    if mc_key is not None:
        key_sources.add(mc_key)
    for _, attr in keyed_main:
        key_sources.add((main_name, attr))

    mc_id_by_key: dict[str, str] = {}
    main_attaches = attach_by_table.get(main_name, ())

    for i, row in enumerate(main.rows):
        if mc_key is not None:
            mc_value = row[mc_key[1]]
            if not mc_value:
                log.warning("%s row %d: empty key %s; row skipped", main_name, i, mc_key[1])
                continue
        else:
            mc_value = f"row{i}"
        ids = {mc: mint_entity_id(mc, mc_value)}
        skip = False
        for cls, attr in keyed_main:
            value = row[attr]
            if not value:
                log.warning("%s row %d: empty key %s for %s; row skipped", main_name, i, attr, cls)
                skip = True
                break
            ids[cls] = mint_entity_id(cls, value)
        if skip:
            continue
        for cls in rowkeyed_main:
            ids[cls] = mint_entity_id(cls, f"row{i}")
        for cls in dummy_classes:
            ids[cls] = f"_:dummy_{cls}_row{i}"

        mc_id_by_key[mc_value] = ids[mc]
        for cls, eid in ids.items():
            if eid not in entities:
                entities[eid] = (cls, cls in dummy_classes)
        for prop, owner, attr in main_attaches:
            sid = ids.get(owner)
            if sid is None:
                continue
            value = row[attr]
            if value:
                literals.append((sid, prop, value, (main_name, attr, i)))
        for rel, f, t in edge_list:
            sf = ids.get(f)
            st = ids.get(t)
            if sf is not None and st is not None:
                objects.add((sf, rel, st))

    for tname in sorted(secondary_tables):
        cls = secondary_tables[tname]
        table = d.tables[tname]
        key_spec = s.class_keys.get(cls)
        if key_spec is not None and key_spec[0] != tname:
            key_spec = None
        keyed_here = [
            (kcls, attr)
            for kcls, (ktab, attr) in sorted(s.class_keys.items())
            if ktab == tname and kcls not in (cls, mc)
        ]
        join_attr = None
        if mc_key is not None and mc_key[1] in table.attributes:
            join_attr = mc_key[1]
        attaches = attach_by_table.get(tname, ())
        for _, attr in keyed_here:
            key_sources.add((tname, attr))
        if key_spec is not None:
            key_sources.add(key_spec)

        for j, row in enumerate(table.rows):
            if key_spec is not None:
                value = row[key_spec[1]]
                if not value:
                    log.warning("%s row %d: empty key %s; row skipped", tname, j, key_spec[1])
                    continue
                eid = mint_entity_id(cls, value)
            else:
                eid = mint_entity_id(cls, f"{tname}_row{j}")
            ids = {cls: eid}
            skip = False
            for kcls, attr in keyed_here:
                value = row[attr]
                if not value:
                    log.warning("%s row %d: empty key %s for %s; row skipped", tname, j, attr, kcls)
                    skip = True
                    break
                ids[kcls] = mint_entity_id(kcls, value)
            if skip:
                continue
            if join_attr is not None:
                join_value = row[join_attr]
                mcid = mc_id_by_key.get(join_value)
                if mcid is None:
                    log.warning(
                        "%s row %d: no main entity matches %s=%r; free-standing entity",
                        tname, j, join_attr, join_value,
                    )
                else:
                    ids[mc] = mcid
                    key_sources.add((tname, join_attr))
            for kcls, eid2 in ids.items():
                if eid2 not in entities:
                    entities[eid2] = (kcls, False)
            for prop, owner, attr in attaches:
                sid = ids.get(owner)
                if sid is None:
                    continue
                value = row[attr]
                if value:
                    literals.append((sid, prop, value, (tname, attr, j)))
            for rel, f, t in edge_list:
                sf = ids.get(f)
                st = ids.get(t)
                if sf is not None and st is not None:
                    objects.add((sf, rel, st))

    return KnowledgeGraph(entities, objects, set(literals), frozenset(key_sources))


# characters that str.splitlines treats as line breaks must not appear raw,
# or the file would not survive line-oriented reading
_NEEDS_U_ESCAPE = set("\x0b\x0c\x1c\x1d\x1e\x85  ")


def _escape_literal(value: str) -> str:
    out = []
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ch in _NEEDS_U_ESCAPE or ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape_literal(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            if nxt == "u" and i + 6 <= len(value):
                out.append(chr(int(value[i + 2 : i + 6], 16)))
                i += 6
                continue
            if nxt == "U" and i + 10 <= len(value):
                out.append(chr(int(value[i + 2 : i + 10], 16)))
                i += 10
                continue
            out.append({"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def serialize_ntriples(g: KnowledgeGraph, base_iri: str = DEFAULT_BASE_IRI) -> str:
    """Write the graph as N-Triples, one triple per line, lines sorted.

    Entity and property IRIs are the base IRI plus the local name; dummy
    entities keep their blank-node labels. The output is byte stable for a
    given graph.
    """
    if not base_iri.endswith(("#", "/")):
        raise ValueError("base IRI must end with '#' or '/'")

    def term(local: str) -> str:
        if local.startswith("_:"):
            return local
        return f"<{base_iri}{local}>"

    type_pred = f"<{RDF_TYPE_IRI}>"
    lines = set()
    for eid, (cls, _) in g.entities.items():
        lines.add(f"{term(eid)} {type_pred} <{base_iri}{cls}> .")
    for subj, rel, obj in g.object_triples:
        lines.add(f"{term(subj)} <{base_iri}{rel}> {term(obj)} .")
    for subj, prop, value, _ in g.literal_triples:
        lines.add(f'{term(subj)} <{base_iri}{prop}> "{_escape_literal(value)}" .')
    return "".join(line + "\n" for line in sorted(lines))


_NT_LINE = re.compile(
    r"(<[^>]*>|_:\S+)\s+<([^>]*)>\s+(<[^>]*>|_:\S+|\"(?:[^\"\\]|\\.)*\")\s*\.\s*\Z"
)


def load_ntriples(text: str, base_iri: str = DEFAULT_BASE_IRI, schema: KGSchema | None = None) -> KnowledgeGraph:
    """Read a graph back from N-Triples written by :func:`serialize_ntriples`.

    Literal provenance is not stored in the triples, so sources are
    reconstructed from the schema's attachments when one is given (row
    indices stay unknown) and ``key_sources`` is taken from the schema's
    key declarations. Without a schema those fields stay empty.
    """

    def local(iri: str) -> str:
        name = iri[1:-1]
        return name[len(base_iri):] if name.startswith(base_iri) else name

    entities: dict[str, tuple[str, bool]] = {}
    objects: set[tuple[str, str, str]] = set()
    raw_literals: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        match = _NT_LINE.match(line)
        if match is None:
            raise ValueError(f"line {lineno}: not a recognized triple: {line!r}")
        subj_t, pred_iri, obj_t = match.groups()
        subj = subj_t if subj_t.startswith("_:") else local(subj_t)
        if obj_t.startswith('"'):
            raw_literals.append((subj, local(f"<{pred_iri}>"), _unescape_literal(obj_t[1:-1])))
        elif pred_iri == RDF_TYPE_IRI:
            cls = obj_t[1:-1]
            cls = cls[len(base_iri):] if cls.startswith(base_iri) else cls
            entities[subj] = (cls, subj.startswith("_:"))
        else:
            obj = obj_t if obj_t.startswith("_:") else local(obj_t)
            objects.add((subj, local(f"<{pred_iri}>"), obj))

    source_of: dict[tuple[str, str], tuple[str, str]] = {}
    if schema is not None:
        for prop, owner, (tname, attr) in sorted(schema.data_attachments):
            source_of.setdefault((prop, owner), (tname, attr))
    literals: set[tuple[str, str, str, tuple[str, str, int] | None]] = set()
    for subj, prop, value in raw_literals:
        owner_class = entities.get(subj, ("", False))[0]
        src = source_of.get((prop, owner_class))
        literals.add((subj, prop, value, (src[0], src[1], -1) if src else None))
    key_sources: frozenset[tuple[str, str]] = frozenset()
    if schema is not None:
        present = {cls for cls, _ in entities.values()}
        key_sources = frozenset(src for cls, src in schema.class_keys.items() if cls in present)
    return KnowledgeGraph(entities, objects, literals, key_sources)

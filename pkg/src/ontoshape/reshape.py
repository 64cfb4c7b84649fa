"""Schema extraction: shrink a class graph onto the data it has to carry.

Domain ontologies are written to organize knowledge, so a single record of
raw data can fan out over long chains of classes that exist purely for
conceptual hygiene. Materializing a knowledge graph straight from such an
ontology buries the data under placeholder entities. The builders in this
module produce the graph schema that materialization works from:

``reshape``
    Keeps only classes witnessed by the data: the main class, classes
    mapped from table names, and entity classes recovered from
    identifier-like attributes (``...ID`` / ``...Name`` suffixes or
    explicit user rules). Relations between the survivors are copied from
    the ontology where a direct property exists, minted toward the main
    class where only an indirect path exists, and every attribute is
    attached as a data property to the nearest surviving class.

``baseline_schema``
    The naive contrast: keeps every mapped class plus every class sitting
    on a shortest connecting path between two of them. Those connector
    classes carry no data and materialize as placeholder ("dummy")
    entities downstream.

Both builders are pure: they never mutate their inputs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from urllib.parse import quote, unquote

from .errors import ParseError, SchemaError
from .mapping import MappingSet, UserInfo
from .ontology import (
    ClassPair,
    Ontology,
    direct_relation,
    has_indirect_relation,
    undirected_distances,
)
from .tabular import Dataset, list_attributes

log = logging.getLogger(__name__)

_KEY_SUFFIXES = ("ID", "NAME")


@dataclass(frozen=True)
class ClassPartition:
    """Split of the ontology classes by what the data maps onto.

    ``potential_properties`` are classes some attribute corresponds to;
    ``potential_classes`` are all the others, the candidates for entity
    classes. The two sets are disjoint and cover the ontology.
    """

    potential_classes: frozenset[str]
    potential_properties: frozenset[str]


@dataclass
class KGSchema:
    """Compact graph schema driving materialization.

    ``edges`` holds (relation, from, to) triples. ``data_attachments``
    holds (property, owner class, (table, attribute)) triples saying which
    class carries which raw attribute. ``class_keys`` names the attribute
    whose value identifies an entity of a class; ``class_tables`` records
    which table a class was mapped from. Classes with neither a key nor a
    table (and that are not the main class) materialize as dummies.
    """

    main_class: str
    classes: set[str]
    edges: set[tuple[str, str, str]]
    data_attachments: set[tuple[str, str, tuple[str, str]]] = field(default_factory=set)
    class_keys: dict[str, tuple[str, str]] = field(default_factory=dict)
    class_tables: dict[str, str] = field(default_factory=dict)


def partition_classes(o: Ontology, m: MappingSet, d: Dataset) -> ClassPartition:
    """Split ``o.classes`` by whether an attribute of ``d`` maps onto them."""
    mapped = {m.attribute_map.get(ta) for ta in list_attributes(d)}
    properties = frozenset(c for c in mapped if c is not None and c in o.classes)
    return ClassPartition(o.classes - properties, properties)


def identify_entity_class(
    cp: str, partition: ClassPartition, u: UserInfo
) -> tuple[str, str] | None:
    """Decide whether an attribute class identifies an entity class.

    User rules take precedence. Failing those, a class whose name ends in
    ``ID`` or ``Name`` (case-insensitive) identifies the class named by the
    rest, provided that class is among the entity candidates. The returned
    relation is the one to use when the entity class must be linked by a
    made-up relation (user rules supply theirs; otherwise the fallback
    prefix plus the entity class name).
    """
    for rule in u.entity_rules:
        if rule.attribute_class == cp:
            return rule.entity_class, rule.relation
    upper = cp.upper()
    for suffix in _KEY_SUFFIXES:
        if upper.endswith(suffix) and len(cp) > len(suffix):
            stem = cp[: -len(suffix)]
            if stem in partition.potential_classes:
                return stem, u.fallback_relation_prefix + stem
    return None


def _link_relation(c: str, u: UserInfo) -> str:
    """Relation name for a minted link toward class ``c``."""
    for rule in u.entity_rules:
        if rule.entity_class == c:
            return rule.relation
    return u.fallback_relation_prefix + c


def _components(classes: set[str], edges: set[tuple[str, str, str]]) -> list[set[str]]:
    adj: dict[str, set[str]] = {c: set() for c in classes}
    for _, f, t in edges:
        if f in adj and t in adj:
            adj[f].add(t)
            adj[t].add(f)
    seen: set[str] = set()
    out = []
    for start in sorted(classes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in adj[node]:
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        seen |= comp
        out.append(comp)
    return out


def connect_classes(s: KGSchema, mc: str, o: Ontology, u: UserInfo) -> KGSchema:
    """Wire up the classes of a schema using the ontology as the guide.

    Ordered pairs of distinct classes are visited in sorted order. A pair
    already linked (either direction) is skipped; a direct ontology
    relation is copied; an indirect one makes both ends hang off the main
    class (or uses a matching user connection rule). Classes that finish
    with no relation at all are linked to the main class last.
    """
    if mc not in s.classes:
        raise SchemaError(f"main class {mc!r} is not part of the schema")
    edges = set(s.edges)
    linked = {frozenset((f, t)) for _, f, t in edges}

    usable_rules = []
    for rule in u.connection_rules:
        if rule.from_class in s.classes and rule.to_class in s.classes:
            usable_rules.append(rule)
        else:
            log.warning(
                "connection rule %s(%s -> %s) names a class not in the schema; skipped",
                rule.relation,
                rule.from_class,
                rule.to_class,
            )
    rule_for: dict[tuple[str, str], str] = {}
    for rule in usable_rules:
        rule_for.setdefault((rule.from_class, rule.to_class), rule.relation)

    def add(rel: str, f: str, t: str) -> None:
        edges.add((rel, f, t))
        linked.add(frozenset((f, t)))

    def ensure_mc_link(c: str) -> None:
        if c != mc and frozenset((mc, c)) not in linked:
            add(_link_relation(c, u), mc, c)

    names = sorted(s.classes)
    for ci in names:
        for cj in names:
            if ci == cj or frozenset((ci, cj)) in linked:
                continue
            if ci not in o.classes or cj not in o.classes:
                continue
            pair = ClassPair(ci, cj)
            rel = direct_relation(o, pair)
            if rel is not None:
                add(rel, ci, cj)
            elif has_indirect_relation(o, pair):
                user_rel = rule_for.get((ci, cj))
                if user_rel is not None:
                    add(user_rel, ci, cj)
                else:
                    ensure_mc_link(ci)
                    ensure_mc_link(cj)

    # link every class that still touches no relation
    touched = {f for _, f, _ in edges} | {t for _, _, t in edges}
    for c in names:
        if c == mc or c in touched:
            continue
        for rule in usable_rules:
            if c in (rule.from_class, rule.to_class):
                add(rule.relation, rule.from_class, rule.to_class)
                touched |= {rule.from_class, rule.to_class}
                break
        else:
            add(_link_relation(c, u), mc, c)
            touched |= {mc, c}

    # a disconnected source graph can leave whole clusters unreachable from
    # the main class; stitch them in so the schema stays one piece
    for comp in _components(s.classes, edges):
        if mc in comp:
            continue
        rep = min(comp)
        log.warning("classes %s cannot reach %s through the ontology; linking %s", sorted(comp), mc, rep)
        add(_link_relation(rep, u), mc, rep)

    return KGSchema(
        s.main_class,
        set(s.classes),
        edges,
        set(s.data_attachments),
        dict(s.class_keys),
        dict(s.class_tables),
    )


def assign_data_properties(
    s: KGSchema, partition: ClassPartition, o: Ontology, m: MappingSet, d: Dataset
) -> KGSchema:
    """Attach every mapped attribute of ``d`` to a schema class.

    Attributes recorded in ``s.class_keys`` identify entities: the one
    keying the main class is consumed by entity ids and gets no attachment,
    the others attach to their entity class. Every other attribute mapped
    to an ontology class attaches to the schema class nearest to it
    (undirected distance in ``o``; ties prefer the main class, then the
    lexicographically smallest name). Attributes mapped to names the
    ontology does not declare fall back to the main class with a warning.
    """
    attachments = set(s.data_attachments)
    class_keys = dict(s.class_keys)
    key_owner = {src: cls for cls, src in class_keys.items()}
    mc = s.main_class
    dist_cache: dict[str, dict[str, int]] = {}

    def nearest_owner(p: str) -> str | None:
        if p not in dist_cache:
            dist_cache[p] = undirected_distances(o, p)
        dist = dist_cache[p]
        best = min(
            ((dist[c], c != mc, c) for c in s.classes if c in dist),
            default=None,
        )
        return best[2] if best else None

    for table, attr in list_attributes(d):
        cp = m.attribute_map.get((table, attr))
        if cp is None:
            continue
        keyed_class = key_owner.get((table, attr))
        if keyed_class is not None and keyed_class in s.classes:
            if keyed_class != mc:
                attachments.add(("has" + cp, keyed_class, (table, attr)))
            continue
        if cp in partition.potential_properties:
            owner = nearest_owner(cp)
            if owner is None:
                log.warning(
                    "attribute %s.%s maps to %s which no schema class can reach; attaching to %s",
                    table, attr, cp, mc,
                )
                owner = mc
            attachments.add(("has" + cp, owner, (table, attr)))
        else:
            log.warning(
                "attribute %s.%s maps to %s which is not a declared class; attaching to %s",
                table, attr, cp, mc,
            )
            attachments.add(("has" + cp, mc, (table, attr)))
    return KGSchema(mc, set(s.classes), set(s.edges), attachments, class_keys, dict(s.class_tables))


def reshape(
    o: Ontology,
    d: Dataset,
    m: MappingSet,
    u: UserInfo,
    include_unmapped: bool = False,
) -> KGSchema:
    """Build the compact data-oriented schema for ``d`` under ``o``.

    The main class seeds the schema. Table-mapped classes join it, then
    every identifier-like attribute contributes its entity class together
    with the key recording which attribute names its entities. The classes
    are wired up through the ontology and every attribute is attached to
    its owner. The result is connected and free of dummy-producing
    classes.

    ``include_unmapped=True`` additionally attaches attributes that have no
    mapping at all to the main class; by default they are only reported.
    """
    mc = u.main_class
    if mc not in o.classes:
        raise SchemaError(f"main class {mc!r} is not declared in the ontology")
    partition = partition_classes(o, m, d)

    classes = {mc}
    class_tables: dict[str, str] = {}
    class_keys: dict[str, tuple[str, str]] = {}

    for tname in sorted(d.tables):
        c = m.table_map.get(tname)
        if c is None:
            continue
        if c == mc or c in partition.potential_classes:
            classes.add(c)
            class_tables.setdefault(c, tname)
        elif c not in o.classes:
            log.warning("table %s maps to undeclared class %s; ignored", tname, c)

    unmapped = []
    for table, attr in list_attributes(d):
        cp = m.attribute_map.get((table, attr))
        if cp is None:
            unmapped.append((table, attr))
            continue
        hit = identify_entity_class(cp, partition, u)
        if hit is None:
            continue
        entity_class, _ = hit
        classes.add(entity_class)
        if entity_class not in class_keys:
            class_keys[entity_class] = (table, attr)
        else:
            log.warning(
                "%s already keyed by %s.%s; %s.%s will only attach",
                entity_class, *class_keys[entity_class], table, attr,
            )

    base = KGSchema(mc, classes, set(), set(), class_keys, class_tables)
    connected = connect_classes(base, mc, o, u)
    full = assign_data_properties(connected, partition, o, m, d)

    for table, attr in unmapped:
        if include_unmapped:
            full.data_attachments.add((u.fallback_relation_prefix + attr, mc, (table, attr)))
        else:
            log.warning("attribute %s.%s has no mapping and is not represented", table, attr)
    return full


def baseline_schema(o: Ontology, d: Dataset, m: MappingSet, mc: str) -> KGSchema:
    """Build the naive schema: every mapped class plus connecting classes.

    All classes with a correspondence to the raw data survive, and for each
    pair of them every class on one shortest undirected ontology path is
    pulled in as well. Ontology relations among the selected classes are
    kept as-is. Attribute-mapped classes carry their own value through a
    single ``hasValue`` attachment and are keyed by it; the connector
    classes carry nothing and will materialize as dummies.
    """
    if mc not in o.classes:
        raise SchemaError(f"main class {mc!r} is not declared in the ontology")

    attr_classes = []
    for table, attr in list_attributes(d):
        cls = m.attribute_map.get((table, attr))
        if cls is not None and cls in o.classes:
            attr_classes.append((table, attr, cls))
    table_classes: dict[str, str] = {}
    for tname in sorted(d.tables):
        cls = m.table_map.get(tname)
        if cls is not None and cls in o.classes:
            table_classes.setdefault(cls, tname)

    mapped = {mc} | {cls for _, _, cls in attr_classes} | set(table_classes)
    classes = set(mapped)
    names = sorted(mapped)
    dist_maps = {c: undirected_distances(o, c) for c in names}
    for i, ci in enumerate(names):
        dist = dist_maps[ci]
        for cj in names[i + 1 :]:
            if cj not in dist:
                log.warning("no path connects %s and %s; the schema stays disconnected", ci, cj)
                continue
            # walk one shortest path, smallest class name first at each tie
            current = cj
            while current != ci:
                want = dist[current] - 1
                current = min(w for w in o.neighbors(current) if dist.get(w) == want)
                if current != ci:
                    classes.add(current)

    edges = {
        (rel, dom, rng)
        for rel, dom, rng in o.object_properties
        if dom in classes and rng in classes
    }

    attachments = set()
    class_keys: dict[str, tuple[str, str]] = {}
    for table, attr, cls in attr_classes:
        attachments.add(("hasValue", cls, (table, attr)))
        if cls in class_keys:
            log.warning(
                "%s already keyed by %s.%s; %s.%s will only attach",
                cls, *class_keys[cls], table, attr,
            )
        else:
            class_keys[cls] = (table, attr)

    if mc not in class_keys:
        for table, attr in list_attributes(d):
            cp = m.attribute_map.get((table, attr))
            if cp is None or cp in o.classes:
                continue
            upper = cp.upper()
            for suffix in _KEY_SUFFIXES:
                if upper.endswith(suffix) and cp[: -len(suffix)] == mc:
                    class_keys[mc] = (table, attr)
                    break
            if mc in class_keys:
                break

    return KGSchema(mc, classes, edges, attachments, class_keys, dict(table_classes))


# ---------------------------------------------------------------------------
# schema text format

def _enc(token: str) -> str:
    return quote(token, safe="_-")


def serialize_schema(s: KGSchema) -> str:
    """Render a schema to text. The format extends the ontology format with
    ``main``, ``attach``, ``key`` and ``table`` lines so a schema file can
    be inspected and loaded back losslessly."""
    lines = [f"main {s.main_class}"]
    lines += sorted(f"class {c}" for c in s.classes)
    lines += sorted(f"objprop {r} {f} {t}" for r, f, t in s.edges)
    lines += sorted(
        f"attach {p} {owner} {_enc(tb)}.{_enc(at)}" for p, owner, (tb, at) in s.data_attachments
    )
    lines += sorted(f"key {c} {_enc(tb)}.{_enc(at)}" for c, (tb, at) in s.class_keys.items())
    lines += sorted(f"table {c} {_enc(tb)}" for c, tb in s.class_tables.items())
    return "".join(line + "\n" for line in lines)


def _split_source(token: str, lineno: int) -> tuple[str, str]:
    table, sep, attr = token.partition(".")
    if not sep or not table or not attr:
        raise ParseError(f"expected <table>.<attribute>, got {token!r}", lineno)
    return unquote(table), unquote(attr)


def parse_schema(text: str) -> KGSchema:
    """Parse a schema document written by :func:`serialize_schema`."""
    main_class = None
    classes: set[str] = set()
    edges: set[tuple[str, str, str]] = set()
    attachments: set[tuple[str, str, tuple[str, str]]] = set()
    class_keys: dict[str, tuple[str, str]] = {}
    class_tables: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "main" and len(parts) == 2:
            if main_class is not None:
                raise ParseError("duplicate main declaration", lineno)
            main_class = parts[1]
        elif parts[0] == "class" and len(parts) == 2:
            classes.add(parts[1])
        elif parts[0] == "objprop" and len(parts) == 4:
            edges.add((parts[1], parts[2], parts[3]))
        elif parts[0] == "attach" and len(parts) == 4:
            attachments.add((parts[1], parts[2], _split_source(parts[3], lineno)))
        elif parts[0] == "key" and len(parts) == 3:
            class_keys[parts[1]] = _split_source(parts[2], lineno)
        elif parts[0] == "table" and len(parts) == 3:
            class_tables[parts[1]] = unquote(parts[2])
        else:
            raise ParseError(f"unrecognized directive {line!r}", lineno)
    if main_class is None:
        raise ParseError("missing main declaration")
    if main_class not in classes:
        raise ParseError(f"main class {main_class} is not declared")
    for _, f, t in edges:
        for name in (f, t):
            if name not in classes:
                raise ParseError(f"undeclared class {name}")
    return KGSchema(main_class, classes, edges, attachments, class_keys, class_tables)

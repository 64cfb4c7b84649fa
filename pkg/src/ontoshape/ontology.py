"""Directed labeled class graph: data model, text format, and path queries.

An ontology here is reduced to the fragment the schema builders need: a set
of named classes, object properties connecting them, and data properties
that ride along for round-tripping. The text format (OSF) is line oriented:

    # comment
    class <Name>
    objprop <relation> <DomainClass> <RangeClass>
    dataprop <property> <DomainClass>

Names are case-sensitive identifiers matching ``[A-Za-z_][A-Za-z0-9_]*``.
Parsing is order-independent: a property may textually precede the class
declarations it refers to. Serialization sorts each section so that
parse/serialize round-trips are byte stable.

Ontology values are treated as immutable once constructed; all query
functions are pure.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

from .errors import ParseError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class ClassPair:
    """Ordered pair of two distinct class names."""

    from_class: str
    to_class: str

    def __post_init__(self):
        if self.from_class == self.to_class:
            raise ValueError(
                f"class pair must name two distinct classes, got {self.from_class!r} twice"
            )


@dataclass
class Ontology:
    """Immutable class graph.

    ``object_properties`` holds (relation, domain, range) triples and
    ``data_properties`` holds (property, domain) pairs. Every referenced
    class must be declared in ``classes``. Cycles and disconnected parts
    are allowed.
    """

    classes: frozenset[str]
    object_properties: frozenset[tuple[str, str, str]]
    data_properties: frozenset[tuple[str, str]]
    _succ: dict[str, tuple[str, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _pred: dict[str, tuple[str, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _und: dict[str, tuple[str, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _direct: dict[tuple[str, str], str] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self):
        self.classes = frozenset(self.classes)
        self.object_properties = frozenset(self.object_properties)
        self.data_properties = frozenset(self.data_properties)
        for _, dom, rng in sorted(self.object_properties):
            for name in (dom, rng):
                if name not in self.classes:
                    raise ValueError(f"undeclared class {name}")
        for _, dom in sorted(self.data_properties):
            if dom not in self.classes:
                raise ValueError(f"undeclared class {dom}")
        succ: dict[str, set[str]] = {}
        pred: dict[str, set[str]] = {}
        for rel, dom, rng in self.object_properties:
            succ.setdefault(dom, set()).add(rng)
            pred.setdefault(rng, set()).add(dom)
            key = (dom, rng)
            if key not in self._direct or rel < self._direct[key]:
                self._direct[key] = rel
        for name in self.classes:
            s = succ.get(name, set())
            p = pred.get(name, set())
            self._succ[name] = tuple(sorted(s))
            self._pred[name] = tuple(sorted(p))
            self._und[name] = tuple(sorted(s | p))

    def successors(self, name: str) -> tuple[str, ...]:
        return self._succ.get(name, ())

    def predecessors(self, name: str) -> tuple[str, ...]:
        return self._pred.get(name, ())

    def neighbors(self, name: str) -> tuple[str, ...]:
        """Adjacent classes with edge direction ignored."""
        return self._und.get(name, ())


def _check_ident(name: str, lineno: int) -> None:
    if not _IDENT.match(name):
        raise ParseError(f"invalid identifier {name!r}", lineno)


def parse_ontology(text: str) -> Ontology:
    """Parse an OSF document into an :class:`Ontology`.

    Raises :class:`ParseError` on unknown directives, malformed names,
    duplicate declarations, or properties referencing undeclared classes.
    """
    classes: dict[str, int] = {}
    objprops: dict[tuple[str, str, str], int] = {}
    dataprops: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "class" and len(parts) == 2:
            name = parts[1]
            _check_ident(name, lineno)
            if name in classes:
                raise ParseError(f"duplicate class declaration {name!r}", lineno)
            classes[name] = lineno
        elif parts[0] == "objprop" and len(parts) == 4:
            rel, dom, rng = parts[1], parts[2], parts[3]
            for name in (rel, dom, rng):
                _check_ident(name, lineno)
            key = (rel, dom, rng)
            if key in objprops:
                raise ParseError(f"duplicate object property {rel} {dom} {rng}", lineno)
            objprops[key] = lineno
        elif parts[0] == "dataprop" and len(parts) == 3:
            prop, dom = parts[1], parts[2]
            for name in (prop, dom):
                _check_ident(name, lineno)
            key = (prop, dom)
            if key in dataprops:
                raise ParseError(f"duplicate data property {prop} {dom}", lineno)
            dataprops[key] = lineno
        else:
            raise ParseError(f"unrecognized directive {line!r}", lineno)
    for (rel, dom, rng), lineno in sorted(objprops.items(), key=lambda kv: kv[1]):
        for name in (dom, rng):
            if name not in classes:
                raise ParseError(f"undeclared class {name}", lineno)
    for (prop, dom), lineno in sorted(dataprops.items(), key=lambda kv: kv[1]):
        if dom not in classes:
            raise ParseError(f"undeclared class {dom}", lineno)
    return Ontology(frozenset(classes), frozenset(objprops), frozenset(dataprops))


def serialize_ontology(o: Ontology) -> str:
    """Render an ontology back to OSF text, sections sorted for determinism."""
    lines = sorted(f"class {c}" for c in o.classes)
    lines += sorted(f"objprop {r} {d} {g}" for r, d, g in o.object_properties)
    lines += sorted(f"dataprop {p} {d}" for p, d in o.data_properties)
    return "".join(line + "\n" for line in lines)


def _require_declared(o: Ontology, *names: str) -> None:
    for name in names:
        if name not in o.classes:
            raise ValueError(f"undeclared class {name}")


def direct_relation(o: Ontology, pair: ClassPair) -> str | None:
    """Relation name of an object property from ``pair.from_class`` to
    ``pair.to_class``, or None. The lexicographically smallest name wins
    when several parallel properties exist."""
    _require_declared(o, pair.from_class, pair.to_class)
    return o._direct.get((pair.from_class, pair.to_class))


def has_indirect_relation(o: Ontology, pair: ClassPair) -> bool:
    """True iff a directed path of length at least 2 runs from
    ``pair.from_class`` to ``pair.to_class``.

    A lone direct edge does not count; there must be at least one
    intermediate class distinct from both endpoints.
    """
    src, dst = pair.from_class, pair.to_class
    _require_declared(o, src, dst)
    # Multi-source reachability from src's successors (except dst itself),
    # with src removed so intermediates never revisit an endpoint.
    queue = deque(w for w in o.successors(src) if w != dst)
    seen = set(queue) | {src}
    while queue:
        node = queue.popleft()
        for nxt in o.successors(node):
            if nxt == dst:
                return True
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def _distances_to(o: Ontology, target: str, undirected: bool) -> dict[str, int]:
    """BFS distance of every class TO ``target`` (walking edges backward
    when directed)."""
    step = o.neighbors if undirected else o.predecessors
    dist = {target: 0}
    queue = deque([target])
    while queue:
        node = queue.popleft()
        for nxt in step(node):
            if nxt not in dist:
                dist[nxt] = dist[node] + 1
                queue.append(nxt)
    return dist


def _walk_shortest(
    o: Ontology, source: str, target: str, dist: dict[str, int], undirected: bool
) -> list[str]:
    """Greedy forward walk along decreasing distance-to-target, choosing the
    lexicographically smallest next class at every step."""
    step = o.neighbors if undirected else o.successors
    path = [source]
    current = source
    while current != target:
        want = dist[current] - 1
        current = min(w for w in step(current) if dist.get(w) == want)
        path.append(current)
    return path


def shortest_path_classes(
    o: Ontology, pair: ClassPair, undirected: bool = False
) -> list[str] | None:
    """Shortest path between two classes as a list including both endpoints.

    Ties are broken by the lexicographic order of the next class name, so
    the result is deterministic. Returns None when the target is
    unreachable.
    """
    src, dst = pair.from_class, pair.to_class
    _require_declared(o, src, dst)
    dist = _distances_to(o, dst, undirected)
    if src not in dist:
        return None
    return _walk_shortest(o, src, dst, dist, undirected)


def undirected_distances(o: Ontology, source: str) -> dict[str, int]:
    """Distance from ``source`` to every reachable class, edge direction
    ignored."""
    _require_declared(o, source)
    return _distances_to(o, source, undirected=True)

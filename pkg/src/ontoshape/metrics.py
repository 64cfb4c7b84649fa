"""Measurements over generated graphs: coverage, size, counts, and depth.

Entity and dummy counts are disjoint: ``entity_count`` covers only entities
that correspond to raw data, ``dummy_count`` only the placeholders minted
because the schema demanded a class the data never fills. Depths are
measured on the undirected instance graph induced by object triples;
literal triples never contribute. The root-to-leaf depth looks out from the
main-class entities, the global depth is the largest shortest-path distance
found in any connected component.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .kggen import KnowledgeGraph
from .mapping import MappingSet
from .reshape import KGSchema
from .tabular import Dataset, list_attributes

ROW_LABELS = [
    "time cost (sec)",
    "storage space (MB)",
    "#avg. class",
    "#max. class",
    "#object prop.",
    "#data prop.",
    "#entities",
    "#avg. dummy entities",
    "#max. dummy entities",
    "avg. root to leaf depth",
    "max. root to leaf depth",
    "avg. global depth",
    "max. global depth",
]

EFFICIENCY_LABELS = ROW_LABELS[:7]
SIMPLICITY_LABELS = ROW_LABELS[7:]


@dataclass
class MetricsReport:
    data_coverage: float
    time_cost_ms: float
    storage_bytes: int
    class_count: int
    object_prop_count: int
    data_prop_count: int
    entity_count: int
    dummy_count: int
    root_to_leaf_depth: int
    global_depth: int


def data_coverage(g: KnowledgeGraph, d: Dataset, m: MappingSet | None = None) -> float:
    """Fraction of the dataset's attributes represented in the graph.

    An attribute counts as covered when at least one literal triple stems
    from it or when its values were consumed as entity keys. A dataset
    without attributes is fully covered by definition. The mapping set is
    accepted for interface symmetry with generation; coverage itself is
    read off the graph.
    """
    attrs = list_attributes(d)
    if not attrs:
        return 1.0
    covered = {src[:2] for _, _, _, src in g.literal_triples if src is not None}
    covered |= set(g.key_sources)
    return sum(1 for ta in attrs if ta in covered) / len(attrs)


def count_dummy_entities(g: KnowledgeGraph) -> int:
    return sum(1 for _, dummy in g.entities.values() if dummy)


def kg_counts(g: KnowledgeGraph, s: KGSchema) -> tuple[int, int, int, int]:
    """(class count, object triple count, literal triple count, entity
    count), with dummies excluded from the entity count."""
    non_dummy = sum(1 for _, dummy in g.entities.values() if not dummy)
    return (len(s.classes), len(g.object_triples), len(g.literal_triples), non_dummy)


def _bfs_farthest(adj: list[list[int]], start: int, dist: list[int]) -> tuple[int, int]:
    """BFS from ``start``; returns (farthest node, its distance). ``dist``
    is a scratch array reset lazily via a visited stamp pattern."""
    dist[start] = 0
    queue = deque([start])
    seen = [start]
    far_node, far_dist = start, 0
    while queue:
        node = queue.popleft()
        base = dist[node]
        for nxt in adj[node]:
            if dist[nxt] < 0:
                dist[nxt] = base + 1
                seen.append(nxt)
                queue.append(nxt)
                if base + 1 > far_dist:
                    far_dist = base + 1
                    far_node = nxt
    for node in seen:
        dist[node] = -1
    return far_node, far_dist


def depth_metrics(g: KnowledgeGraph, mc: str) -> tuple[int, int]:
    """(root-to-leaf depth, global depth) over the undirected entity graph.

    Root-to-leaf is the largest distance from any main-class entity to an
    entity reachable from it; global is the largest distance between any
    two entities in the same component. An empty graph yields (0, 0).
    """
    index = {eid: i for i, eid in enumerate(g.entities)}
    n = len(index)
    if n == 0:
        return (0, 0)
    adj: list[list[int]] = [[] for _ in range(n)]
    edge_seen = set()
    for subj, _, obj in g.object_triples:
        a, b = index.get(subj), index.get(obj)
        if a is None or b is None or a == b:
            continue
        if (a, b) in edge_seen or (b, a) in edge_seen:
            continue
        edge_seen.add((a, b))
        adj[a].append(b)
        adj[b].append(a)

    ids = list(g.entities)
    mc_nodes = [index[eid] for eid in ids if g.entities[eid][0] == mc]
    dist = [-1] * n

    # connected components
    comp_of = [-1] * n
    components: list[list[int]] = []
    for start in range(n):
        if comp_of[start] >= 0:
            continue
        comp = [start]
        comp_of[start] = len(components)
        stack = [start]
        while stack:
            node = stack.pop()
            for nxt in adj[node]:
                if comp_of[nxt] < 0:
                    comp_of[nxt] = len(components)
                    comp.append(nxt)
                    stack.append(nxt)
        components.append(comp)

    root_depth = 0
    sweep_start: dict[int, tuple[int, int]] = {}
    for node in mc_nodes:
        far_node, ecc = _bfs_farthest(adj, node, dist)
        if ecc > root_depth:
            root_depth = ecc
        current = sweep_start.get(comp_of[node])
        if current is None or ecc > current[1]:
            sweep_start[comp_of[node]] = (far_node, ecc)

    global_depth = 0
    for ci, comp in enumerate(components):
        size = len(comp)
        if size == 1:
            continue
        edges = sum(len(adj[node]) for node in comp) // 2
        if edges == size - 1:
            # tree component: double sweep is exact
            start = sweep_start.get(ci, (comp[0], 0))[0]
            far_node, _ = _bfs_farthest(adj, start, dist)
            _, diameter = _bfs_farthest(adj, far_node, dist)
        else:
            diameter = 0
            for node in comp:
                _, ecc = _bfs_farthest(adj, node, dist)
                if ecc > diameter:
                    diameter = ecc
        if diameter > global_depth:
            global_depth = diameter
    return (root_depth, global_depth)


def build_report(
    g: KnowledgeGraph,
    s: KGSchema,
    d: Dataset,
    m: MappingSet,
    mc: str,
    time_cost_ms: float = 0.0,
    storage_bytes: int = 0,
) -> MetricsReport:
    """Assemble a full report for one generated graph."""
    coverage = data_coverage(g, d, m)
    class_count, object_props, data_props, entity_count = kg_counts(g, s)
    root_depth, global_depth = depth_metrics(g, mc)
    return MetricsReport(
        data_coverage=coverage,
        time_cost_ms=time_cost_ms,
        storage_bytes=storage_bytes,
        class_count=class_count,
        object_prop_count=object_props,
        data_prop_count=data_props,
        entity_count=entity_count,
        dummy_count=count_dummy_entities(g),
        root_to_leaf_depth=root_depth,
        global_depth=global_depth,
    )


def _single_values(r: MetricsReport) -> dict[str, float]:
    return {
        "time cost (sec)": r.time_cost_ms / 1000.0,
        "storage space (MB)": r.storage_bytes / 1e6,
        "#avg. class": r.class_count,
        "#max. class": r.class_count,
        "#object prop.": r.object_prop_count,
        "#data prop.": r.data_prop_count,
        "#entities": r.entity_count,
        "#avg. dummy entities": r.dummy_count,
        "#max. dummy entities": r.dummy_count,
        "avg. root to leaf depth": r.root_to_leaf_depth,
        "max. root to leaf depth": r.root_to_leaf_depth,
        "avg. global depth": r.global_depth,
        "max. global depth": r.global_depth,
    }


def format_value(value: float) -> str:
    return f"{value:.4f}"


def report_csv(r: MetricsReport) -> str:
    """One CSV header row plus one value row (data coverage first)."""
    values = _single_values(r)
    header = ["data coverage"] + ROW_LABELS
    row = [format_value(r.data_coverage)] + [format_value(values[label]) for label in ROW_LABELS]
    return ",".join(f'"{h}"' for h in header) + "\n" + ",".join(row) + "\n"


def report_text(r: MetricsReport) -> str:
    """Aligned label/value block for terminal inspection."""
    values = _single_values(r)
    rows = [("data coverage", format_value(r.data_coverage))]
    rows += [(label, format_value(values[label])) for label in ROW_LABELS]
    width = max(len(label) for label, _ in rows)
    return "".join(f"{label:<{width}}  {value}\n" for label, value in rows)

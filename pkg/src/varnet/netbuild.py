"""Dataset network construction and connected-component decomposition."""

from __future__ import annotations

import csv
import io
import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .ingest import Catalog

log = logging.getLogger(__name__)

HUB_WARN_THRESHOLD = 2000


@dataclass(frozen=True)
class DataNetwork:
    """Undirected simple graph over dataset ids.

    Nodes are addressed by position in ``nodes``; ``adjacency[i]`` is the
    sorted tuple of neighbor positions of node ``i``. ``overlap`` maps each
    edge ``(i, j)`` with ``i < j`` to the number of shared variables.
    """

    nodes: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]
    overlap: Mapping[tuple[int, int], int]

    @classmethod
    def from_edges(
        cls,
        nodes: Sequence[str],
        edges: Iterable[tuple[int, int]],
        overlap: Mapping[tuple[int, int], int] | None = None,
    ) -> DataNetwork:
        """Build from position pairs. Duplicate edges collapse; self-loops are rejected."""
        n = len(nodes)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        ov: dict[tuple[int, int], int] = {}
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop on node {nodes[i]!r}")
            a, b = (i, j) if i < j else (j, i)
            nbrs[a].add(b)
            nbrs[b].add(a)
            ov[(a, b)] = overlap.get((a, b), 1) if overlap else 1
        return cls(tuple(nodes), tuple(tuple(sorted(s)) for s in nbrs), dict(sorted(ov.items())))

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.overlap)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(i, j)`` position pairs with ``i < j``, sorted."""
        return [(i, j) for i, nb in enumerate(self.adjacency) for j in nb if i < j]

    def position(self, node_id: str) -> int:
        return self.nodes.index(node_id)

    def subgraph(self, positions: Iterable[int]) -> DataNetwork:
        """Induced subgraph on ``positions``, nodes kept in their current order."""
        keep = sorted(set(positions))
        remap = {old: new for new, old in enumerate(keep)}
        adjacency = tuple(
            tuple(remap[j] for j in self.adjacency[i] if j in remap) for i in keep
        )
        overlap = {
            (remap[i], remap[j]): c
            for (i, j), c in self.overlap.items()
            if i in remap and j in remap
        }
        return DataNetwork(tuple(self.nodes[i] for i in keep), adjacency, overlap)


def build_network(
    catalog: Catalog, min_overlap: int = 1, warn_threshold: int = HUB_WARN_THRESHOLD
) -> DataNetwork:
    """Link every pair of datasets sharing at least ``min_overlap`` variables.

    Pairs are enumerated per label through the inverted index, so the work is
    the sum over labels of C(m, 2) where m is the label's dataset count.
    Nodes are sorted by id, which makes the result independent of record order.
    """
    if min_overlap < 1:
        raise ValueError("min_overlap must be >= 1")
    nodes = sorted(catalog.ids())
    pos = {nid: i for i, nid in enumerate(nodes)}

    counts: dict[tuple[int, int], int] = {}
    for label, holders in catalog.index.items():
        if len(holders) > warn_threshold:
            log.warning(
                "variable %r is held by %d datasets (%d pairs)",
                label, len(holders), len(holders) * (len(holders) - 1) // 2,
            )
        for pair in combinations(sorted(pos[h] for h in holders), 2):
            counts[pair] = counts.get(pair, 0) + 1

    kept = {pair: c for pair, c in counts.items() if c >= min_overlap}
    return DataNetwork.from_edges(nodes, kept, kept)


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[frozenset[str], ...]
    component_of: Mapping[str, int]

    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


def _component_positions(network: DataNetwork) -> list[list[int]]:
    seen = [False] * network.n_nodes
    comps: list[list[int]] = []
    for start in range(network.n_nodes):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in network.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(network.nodes[i] for i in c)))
    return comps


def components(network: DataNetwork) -> ComponentDecomposition:
    comps = _component_positions(network)
    members = tuple(frozenset(network.nodes[i] for i in c) for c in comps)
    component_of = {nid: k for k, comp in enumerate(members) for nid in comp}
    return ComponentDecomposition(members, component_of)


def largest_component(network: DataNetwork) -> DataNetwork:
    if network.n_nodes == 0:
        raise ValueError("empty network has no largest component")
    comps = _component_positions(network)
    if len(comps) == 1:
        return network
    return network.subgraph(comps[0])


def edge_list_csv(network: DataNetwork) -> str:
    """``src,dst,overlap`` rows with ``src < dst`` by id, sorted."""
    rows = []
    for (i, j), c in network.overlap.items():
        a, b = sorted((network.nodes[i], network.nodes[j]))
        rows.append((a, b, c))
    rows.sort()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["src", "dst", "overlap"])
    w.writerows(rows)
    return buf.getvalue()

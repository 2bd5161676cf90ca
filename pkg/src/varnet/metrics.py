"""Structural metrics of a data network.

All metrics treat the network as simple and unweighted. Path-based metrics
require a connected network; extract the largest component first.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Sequence

import numpy as np

from .netbuild import DataNetwork


# Dense BLAS kernels beat per-node Python loops on small, well-connected
# graphs. A matrix level costs ~n^3 flops against ~n (n + 2|E|) interpreted
# steps for a full BFS sweep; DENSE_GAIN is the measured speed ratio with
# a safety margin. The adjacency matrix costs 4 n^2 bytes, so cap n.
DENSE_MAX_NODES = 4096
DENSE_GAIN = 500


class DisconnectedError(ValueError):
    pass


def _use_dense(network: DataNetwork, levels: int = 1) -> bool:
    n = network.n_nodes
    return 2 <= n <= DENSE_MAX_NODES and n * n * levels <= DENSE_GAIN * (n + 2 * network.n_edges)


def _dense_adjacency(network: DataNetwork) -> np.ndarray:
    n = network.n_nodes
    a = np.zeros((n, n), dtype=np.float32)
    for i, nbrs in enumerate(network.adjacency):
        a[i, list(nbrs)] = 1.0
    return a


@dataclass(frozen=True)
class MetricsReport:
    n_nodes: int
    n_edges: int
    average_degree: float
    density: float
    average_clustering: float
    assortativity: float | None
    average_path_length: float
    diameter: int

    def to_dict(self) -> dict:
        return asdict(self)


def average_degree(network: DataNetwork) -> float:
    if network.n_nodes == 0:
        raise ValueError("average degree of an empty network")
    return 2 * network.n_edges / network.n_nodes


def density(network: DataNetwork) -> float:
    n = network.n_nodes
    if n < 2:
        raise ValueError("density needs at least 2 nodes")
    # 2|E| / (n (n-1)) in one division; equals <k>/(n-1)
    return 2 * network.n_edges / (n * (n - 1))


def local_clustering(network: DataNetwork, node: int) -> float:
    """Fraction of neighbor pairs of ``node`` that are linked; 0 below degree 2."""
    nbrs = network.adjacency[node]
    k = len(nbrs)
    if k < 2:
        return 0.0
    nbr_set = set(nbrs)
    links = sum(1 for u in nbrs for v in network.adjacency[u] if v in nbr_set)
    # every neighbor link was counted from both ends
    return links / (k * (k - 1))


def _neighbor_links_dense(network: DataNetwork, block: int = 512) -> list[int]:
    """Per node, twice the number of links among its neighbors, via rows of A^2 * A."""
    a = _dense_adjacency(network)
    out: list[int] = []
    for r0 in range(0, network.n_nodes, block):
        rows = a[r0 : r0 + block]
        # float32 entries of A^2 are exact (<= n < 2^24); sum in float64 stays exact
        out.extend(int(x) for x in ((rows @ a) * rows).sum(axis=1, dtype=np.float64))
    return out


def average_clustering(network: DataNetwork) -> float:
    n = network.n_nodes
    if n == 0:
        raise ValueError("clustering of an empty network")
    if _use_dense(network):
        deg = network.degrees()
        local = (links / (k * (k - 1)) if k >= 2 else 0.0 for links, k in zip(_neighbor_links_dense(network), deg))
        return math.fsum(local) / n
    return math.fsum(local_clustering(network, i) for i in range(n)) / n


def _assortativity_terms(network: DataNetwork) -> tuple[int, int]:
    deg = network.degrees()
    m = network.n_edges
    s_prod = s_sum = s_sq = 0
    for i, j in network.overlap:
        p, q = deg[i], deg[j]
        s_prod += p * q
        s_sum += p + q
        s_sq += p * p + q * q
    # numerator and denominator of the edge-degree correlation, both scaled by 4|E|^2
    num = 4 * m * s_prod - s_sum * s_sum
    den = 2 * m * s_sq - s_sum * s_sum
    return num, den


def assortativity(network: DataNetwork) -> float | None:
    """Degree assortativity over edges; ``None`` when all endpoint degrees are equal.

    Sums are accumulated in integers so the only rounding is the final division.
    """
    if network.n_edges == 0:
        raise ValueError("assortativity needs at least one edge")
    num, den = _assortativity_terms(network)
    if den == 0:
        return None
    return float(Fraction(num, den))


def degree_correlation(network: DataNetwork) -> dict[int, float]:
    """Map degree k to the mean, over degree-k nodes, of their neighbors' mean degree."""
    if network.n_edges == 0:
        raise ValueError("degree correlation needs at least one edge")
    deg = network.degrees()
    buckets: dict[int, list[float]] = {}
    for i, nbrs in enumerate(network.adjacency):
        if nbrs:
            buckets.setdefault(deg[i], []).append(sum(deg[j] for j in nbrs) / deg[i])
    return {k: math.fsum(v) / len(v) for k, v in sorted(buckets.items())}


def _bfs_sweep(adjacency: Sequence[Sequence[int]], sources: Sequence[int]) -> tuple[int, int, int]:
    """Total distance, max eccentricity and count of unreached pairs from ``sources``."""
    n = len(adjacency)
    total = ecc_max = unreached = 0
    for s in sources:
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        reached = 1
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in adjacency[u]:
                if dist[v] < 0:
                    dist[v] = du
                    total += du
                    reached += 1
                    queue.append(v)
        ecc_max = max(ecc_max, max(dist))
        unreached += n - reached
    return total, ecc_max, unreached


def _frontier_sweep(network: DataNetwork, block: int = 512) -> tuple[int, int, int]:
    """Same result as :func:`_bfs_sweep` over all sources, expanding a block of
    BFS frontiers at once with one matrix product per level."""
    n = network.n_nodes
    a = _dense_adjacency(network)
    total = ecc_max = unreached = 0
    for s0 in range(0, n, block):
        b = min(block, n - s0)
        reached = np.zeros((b, n), dtype=bool)
        reached[np.arange(b), np.arange(s0, s0 + b)] = True
        frontier = reached.astype(np.float32)
        d = 0
        while True:
            nxt = (frontier @ a) > 0
            nxt &= ~reached
            count = int(nxt.sum())
            if count == 0:
                break
            d += 1
            total += d * count
            ecc_max = max(ecc_max, d)
            reached |= nxt
            frontier = nxt.astype(np.float32)
        unreached += b * n - int(reached.sum())
    return total, ecc_max, unreached


def distance_summary(network: DataNetwork, workers: int = 1) -> tuple[int, int]:
    """Sum of shortest distances over ordered pairs, and the diameter.

    Dense enough graphs use a matrix frontier sweep and ignore ``workers``.
    Otherwise, with ``workers > 1`` the per-source BFS runs are split across
    processes; the totals are order independent.
    """
    n = network.n_nodes
    # the eccentricity of one node estimates how many matrix levels a sweep takes
    if n > 1 and _use_dense(network, _bfs_sweep(network.adjacency, [0])[1] + 1):
        parts = [_frontier_sweep(network)]
    elif workers > 1 and n > 1:
        chunks = [range(k, n, workers) for k in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_bfs_sweep, [network.adjacency] * workers, chunks))
    else:
        parts = [_bfs_sweep(network.adjacency, range(n))]
    if any(p[2] for p in parts):
        raise DisconnectedError("path metrics need a connected network")
    return sum(p[0] for p in parts), max((p[1] for p in parts), default=0)


def average_path_length(network: DataNetwork, workers: int = 1) -> float:
    n = network.n_nodes
    if n < 2:
        raise ValueError("average path length needs at least 2 nodes")
    total, _ = distance_summary(network, workers)
    return total / (n * (n - 1))


def diameter(network: DataNetwork, workers: int = 1) -> int:
    if network.n_nodes == 0:
        raise ValueError("diameter of an empty network")
    return distance_summary(network, workers)[1]


def full_report(network: DataNetwork, workers: int = 1) -> MetricsReport:
    n = network.n_nodes
    if n < 2:
        raise ValueError(f"metrics need a connected network with >= 2 nodes, got {n}")
    total, diam = distance_summary(network, workers)
    return MetricsReport(
        n_nodes=n,
        n_edges=network.n_edges,
        average_degree=average_degree(network),
        density=density(network),
        average_clustering=average_clustering(network),
        assortativity=assortativity(network),
        average_path_length=total / (n * (n - 1)),
        diameter=diam,
    )

"""Independent reference computations used to check the library."""

from __future__ import annotations

from itertools import combinations

import numpy as np

INF = float("inf")


def floyd_warshall(net) -> np.ndarray:
    n = net.n_nodes
    d = np.full((n, n), INF)
    np.fill_diagonal(d, 0.0)
    for i, j in net.edges():
        d[i, j] = d[j, i] = 1.0
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def path_metrics(net) -> tuple[float, int]:
    d = floyd_warshall(net)
    n = net.n_nodes
    off = d[~np.eye(n, dtype=bool)]
    return int(off.sum()) / (n * (n - 1)), int(off.max())


def pearson_assortativity(net) -> float:
    deg = net.degrees()
    pairs = [(deg[i], deg[j]) for i, j in net.edges()]
    xs = [p for p, q in pairs] + [q for p, q in pairs]
    ys = [q for p, q in pairs] + [p for p, q in pairs]
    with np.errstate(invalid="ignore", divide="ignore"):
        return float(np.corrcoef(xs, ys)[0, 1])


def triangle_clustering(net, i: int) -> float:
    nb = net.adjacency[i]
    if len(nb) < 2:
        return 0.0
    links = sum(1 for u, v in combinations(nb, 2) if v in net.adjacency[u])
    return links / (len(nb) * (len(nb) - 1) / 2)

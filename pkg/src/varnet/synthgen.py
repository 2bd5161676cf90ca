"""Seeded synthetic graphs and catalogs used as test oracles and demo inputs."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .ingest import Catalog, DatasetRecord
from .netbuild import DataNetwork

GRAPH_KINDS = ("complete", "star", "path", "cycle", "er", "pref_attach")
ZIPF_SUPPORT = 10**6

# positional parameters accepted by each kind, in CLI order
_PARAMS = {
    "complete": ("n",),
    "star": ("leaves",),
    "path": ("n",),
    "cycle": ("n",),
    "er": ("n", "p", "seed"),
    "pref_attach": ("n", "m_new", "seed"),
    "zipf_catalog": ("n_datasets", "n_draws", "gamma", "seed"),
}
_ALIASES = {"pa": "pref_attach", "ba": "pref_attach", "zipf": "zipf_catalog", "k": "complete"}


def derive_seed(seed: int, purpose: str) -> int:
    """Stable 63-bit seed from a master seed and a purpose label."""
    digest = hashlib.sha256(f"{seed}:{purpose}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int | None = None
    leaves: int | None = None
    p: float | None = None
    m_new: int | None = None
    n_datasets: int | None = None
    n_draws: int | None = None
    gamma: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        kind = _ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in _PARAMS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        for name in _PARAMS[kind]:
            if name != "seed" and getattr(self, name) is None:
                raise ValueError(f"{kind} needs parameter {name!r}")
        for name in ("n", "leaves", "m_new", "n_datasets", "n_draws"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.gamma is not None and not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if kind == "pref_attach" and self.n <= self.m_new:
            raise ValueError("pref_attach needs n > m_new")

    @classmethod
    def from_args(cls, kind: str, args: list[str]) -> GenSpec:
        """Parse positional CLI arguments, e.g. ``("zipf", ["100", "10000", "2.3", "7"])``."""
        kind = _ALIASES.get(kind, kind)
        names = _PARAMS.get(kind)
        if names is None:
            raise ValueError(f"unknown generator kind {kind!r}")
        if len(args) != len(names):
            raise ValueError(f"{kind} takes {len(names)} arguments ({', '.join(names)}), got {len(args)}")
        values = {}
        for name, raw in zip(names, args):
            values[name] = float(raw) if name in ("p", "gamma") else int(raw)
        return cls(kind, **values)

    @property
    def is_graph(self) -> bool:
        return self.kind in GRAPH_KINDS


def node_ids(n: int) -> list[str]:
    width = max(3, len(str(n - 1)))
    return [f"n{i:0{width}d}" for i in range(n)]


def complete_graph(n: int) -> DataNetwork:
    return DataNetwork.from_edges(node_ids(n), combinations(range(n), 2))


def star_graph(leaves: int) -> DataNetwork:
    """Hub ``n000`` joined to ``leaves`` leaf nodes."""
    return DataNetwork.from_edges(node_ids(leaves + 1), ((0, i) for i in range(1, leaves + 1)))


def path_graph(n: int) -> DataNetwork:
    return DataNetwork.from_edges(node_ids(n), ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> DataNetwork:
    if n < 3:
        return path_graph(n)
    return DataNetwork.from_edges(node_ids(n), [(i, (i + 1) % n) for i in range(n)])


def er_graph(n: int, p: float, seed: int) -> DataNetwork:
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return DataNetwork.from_edges(node_ids(n), (e for e, k in zip(pairs, keep) if k))


def pref_attach_graph(n: int, m_new: int, seed: int) -> DataNetwork:
    """Preferential attachment grown from a clique of ``m_new + 1`` nodes.

    Each later node links to ``m_new`` distinct earlier nodes drawn with
    probability proportional to degree, giving
    ``m_new * (n - m_new) + m_new * (m_new - 1) / 2`` edges.
    """
    if n <= m_new:
        raise ValueError("pref_attach needs n > m_new")
    rng = np.random.default_rng(seed)
    edges = list(combinations(range(m_new + 1), 2))
    # each node appears once per incident edge end
    ends = [u for e in edges for u in e]
    for v in range(m_new + 1, n):
        targets: list[int] = []
        chosen: set[int] = set()
        while len(targets) < m_new:
            u = ends[int(rng.integers(len(ends)))]
            if u not in chosen:
                chosen.add(u)
                targets.append(u)
        for u in targets:
            edges.append((u, v))
            ends.extend((u, v))
    return DataNetwork.from_edges(node_ids(n), edges)


def zipf_sample(size: int, gamma: float, rng: np.random.Generator, support: int = ZIPF_SUPPORT) -> np.ndarray:
    """Integers in [1, support] with P(k) proportional to k**-gamma, by inverse CDF."""
    cdf = np.cumsum(np.arange(1, support + 1, dtype=float) ** -gamma)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(size), side="right")
    return np.minimum(idx, support - 1) + 1


def zipf_catalog(n_datasets: int, n_draws: int, gamma: float, seed: int) -> Catalog:
    """Catalog whose label occurrence counts follow a Zipf law.

    Each of the ``n_draws`` labels gets an occurrence count m from the Zipf
    law (capped at ``n_datasets``). Its first occurrence goes round-robin to
    dataset ``i mod n_datasets``; the other m - 1 land on distinct datasets
    picked at random.
    """
    if n_draws < 1 or n_datasets < 1:
        raise ValueError("zipf catalog needs n_draws >= 1 and n_datasets >= 1")
    if not gamma > 1.0:
        raise ValueError("gamma must be > 1")
    if n_draws < n_datasets:
        raise ValueError("n_draws must be >= n_datasets so every dataset holds a label")
    rng = np.random.default_rng(seed)
    counts = np.minimum(zipf_sample(n_draws, gamma, rng), n_datasets)
    width = len(str(n_draws - 1))
    holdings: list[list[str]] = [[] for _ in range(n_datasets)]
    for i, m in enumerate(counts.tolist()):
        label = f"v{i:0{width}d}"
        home = i % n_datasets
        holdings[home].append(label)
        if m > 1:
            for j in rng.choice(n_datasets - 1, size=m - 1, replace=False).tolist():
                holdings[(home + 1 + j) % n_datasets].append(label)
    dwidth = max(3, len(str(n_datasets - 1)))
    return Catalog(tuple(DatasetRecord(f"d{k:0{dwidth}d}", tuple(h)) for k, h in enumerate(holdings)))


def generate_graph(spec: GenSpec) -> DataNetwork:
    if spec.kind == "complete":
        return complete_graph(spec.n)
    if spec.kind == "star":
        return star_graph(spec.leaves)
    if spec.kind == "path":
        return path_graph(spec.n)
    if spec.kind == "cycle":
        return cycle_graph(spec.n)
    if spec.kind == "er":
        return er_graph(spec.n, spec.p, spec.seed)
    if spec.kind == "pref_attach":
        return pref_attach_graph(spec.n, spec.m_new, spec.seed)
    raise ValueError(f"{spec.kind} is not a graph generator")


def generate_catalog(spec: GenSpec) -> Catalog:
    if spec.kind != "zipf_catalog":
        raise ValueError(f"{spec.kind} is not a catalog generator")
    return zipf_catalog(spec.n_datasets, spec.n_draws, spec.gamma, spec.seed)


def network_to_catalog(network: DataNetwork) -> Catalog:
    """Catalog whose network is exactly ``network``: one shared label per edge.

    Isolated nodes get a private label so every record stays nonempty.
    """
    holdings: list[list[str]] = [[] for _ in range(network.n_nodes)]
    for i, j in network.edges():
        label = f"e:{network.nodes[i]}:{network.nodes[j]}"
        holdings[i].append(label)
        holdings[j].append(label)
    for i, h in enumerate(holdings):
        if not h:
            h.append(f"own:{network.nodes[i]}")
    return Catalog(tuple(DatasetRecord(nid, tuple(h)) for nid, h in zip(network.nodes, holdings)))

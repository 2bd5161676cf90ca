"""Robustness of the largest component under node removal."""

from __future__ import annotations

import csv
import heapq
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .netbuild import DataNetwork, _component_positions


@dataclass(frozen=True)
class RobustnessCurve:
    strategy: str
    f: tuple[float, ...]
    mean_ratio: tuple[float, ...]
    std_ratio: tuple[float, ...]
    n_runs: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["f", "mean_ratio", "std_ratio"])
        for f, m, s in zip(self.f, self.mean_ratio, self.std_ratio):
            w.writerow([f"{f:.4f}", repr(m), repr(s)])
        return buf.getvalue()


def default_grid(step: float = 0.02) -> tuple[float, ...]:
    """Fractions 0, step, ..., 1 rounded to 10 decimals."""
    if not 0 < step <= 1:
        raise ValueError("grid step must lie in (0, 1]")
    n = round(1 / step)
    if not math.isclose(n * step, 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError(f"grid step {step} does not divide 1")
    return tuple(round(i / n, 10) for i in range(n + 1))


def _check_grid(f_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(f) for f in f_grid)
    if not grid or any(not 0.0 <= f <= 1.0 for f in grid):
        raise ValueError("grid fractions must lie in [0, 1]")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    return grid


def removal_count(f: float, n: int) -> int:
    """floor(f * n), tolerant of decimal fractions like 0.58 stored just below their value."""
    return min(n, math.floor(f * n + 1e-9))


def largest_component_size(network: DataNetwork) -> int:
    if network.n_nodes == 0:
        return 0
    return len(_component_positions(network)[0])


def _surviving_lcc(adjacency: Sequence[Sequence[int]], alive: Sequence[bool]) -> int:
    """Largest component size among nodes flagged alive."""
    n = len(adjacency)
    seen = [not a for a in alive]
    best = 0
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        size = 0
        while stack:
            u = stack.pop()
            size += 1
            for v in adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        best = max(best, size)
    return best


def _prefix_removal_sizes(adjacency: Sequence[Sequence[int]], order: Sequence[int]) -> list[int]:
    """``sizes[k]`` = largest component after removing ``order[:k]``.

    Nodes are added back in reverse order with union-find, so every prefix is
    answered in one pass.
    """
    n = len(adjacency)
    parent = list(range(n))
    size = [1] * n
    alive = [False] * n

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    sizes = [0] * (n + 1)
    best = 0
    for k in range(n - 1, -1, -1):
        u = order[k]
        alive[u] = True
        for v in adjacency[u]:
            if alive[v]:
                ru, rv = find(u), find(v)
                if ru != rv:
                    if size[ru] < size[rv]:
                        ru, rv = rv, ru
                    parent[rv] = ru
                    size[ru] += size[rv]
        best = max(best, size[find(u)])
        sizes[k] = best
    return sizes


def _check_network(network: DataNetwork) -> int:
    if network.n_nodes < 2:
        raise ValueError("robustness needs a connected network with >= 2 nodes")
    s0 = largest_component_size(network)
    if s0 != network.n_nodes:
        raise ValueError("robustness needs a connected network; extract the largest component first")
    return s0


def _random_cell(args: tuple[Sequence[Sequence[int]], int, int, int, int]) -> int:
    adjacency, seed, run, fi, k = args
    n = len(adjacency)
    rng = np.random.default_rng([seed, run, fi])
    alive = [True] * n
    for u in rng.choice(n, size=k, replace=False).tolist():
        alive[u] = False
    return _surviving_lcc(adjacency, alive)


def random_removal_curve(
    network: DataNetwork,
    f_grid: Sequence[float] | None = None,
    n_runs: int = 10,
    seed: int = 0,
    workers: int = 1,
) -> RobustnessCurve:
    """Mean and std of S(f)/S(0) over ``n_runs`` independent uniform removals.

    Each (run, f) cell draws its own removal set from a generator seeded with
    ``(seed, run, f_index)``, so results do not depend on ``workers``.
    """
    grid = _check_grid(f_grid if f_grid is not None else default_grid())
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    s0 = _check_network(network)
    n = network.n_nodes
    cells = [
        (network.adjacency, seed, run, fi, removal_count(f, n))
        for run in range(n_runs)
        for fi, f in enumerate(grid)
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            sizes = list(pool.map(_random_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        sizes = [_random_cell(c) for c in cells]
    ratios = np.array(sizes, dtype=float).reshape(n_runs, len(grid)) / s0
    return RobustnessCurve(
        strategy="random",
        f=grid,
        mean_ratio=tuple(float(v) for v in ratios.mean(axis=0)),
        std_ratio=tuple(float(v) for v in ratios.std(axis=0)),
        n_runs=n_runs,
    )


def targeted_order(network: DataNetwork, mode: str = "static") -> list[int]:
    """Removal order by descending degree, ties by ascending node id.

    ``static`` ranks by the initial degrees; ``adaptive`` always removes the
    node with the highest degree in the remaining graph.
    """
    ids = network.nodes
    deg = network.degrees()
    if mode == "static":
        return sorted(range(network.n_nodes), key=lambda i: (-deg[i], ids[i]))
    if mode != "adaptive":
        raise ValueError(f"unknown targeted mode {mode!r}")
    heap = [(-deg[i], ids[i], i) for i in range(network.n_nodes)]
    heapq.heapify(heap)
    removed = [False] * network.n_nodes
    order = []
    while heap:
        d, _, u = heapq.heappop(heap)
        if removed[u] or -d != deg[u]:
            continue  # stale entry
        removed[u] = True
        order.append(u)
        for v in network.adjacency[u]:
            if not removed[v]:
                deg[v] -= 1
                heapq.heappush(heap, (-deg[v], ids[v], v))
    return order


def targeted_removal_curve(
    network: DataNetwork,
    f_grid: Sequence[float] | None = None,
    mode: str = "static",
) -> RobustnessCurve:
    grid = _check_grid(f_grid if f_grid is not None else default_grid())
    s0 = _check_network(network)
    sizes = _prefix_removal_sizes(network.adjacency, targeted_order(network, mode))
    n = network.n_nodes
    return RobustnessCurve(
        strategy=f"targeted-{mode}",
        f=grid,
        mean_ratio=tuple(sizes[removal_count(f, n)] / s0 for f in grid),
        std_ratio=tuple(0.0 for _ in grid),
        n_runs=1,
    )

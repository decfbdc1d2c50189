"""Directed capacitated topologies and candidate-path enumeration.

The topology file format is plain text: a header line ``nodes <n>`` followed
by one ``src dst capacity`` record per directed edge.  Node ids are integers
in ``0..n-1``, capacities are positive rates in Mbps.  Lines starting with
``#`` and blank lines are ignored.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class TopologyError(ValueError):
    """Raised for malformed topology files or invalid edge data."""


@dataclass(frozen=True)
class Topology:
    """A directed graph with strictly positive link capacities.

    Edge indices are dense ``0..n_links-1`` in file order and stable for the
    lifetime of the object.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    edge_index: dict[tuple[int, int], int] = field(repr=False)

    def __post_init__(self):
        for src, dst, cap in self.edges:
            if src == dst:
                raise TopologyError(f"self-loop at node {src}")
            if not (0 <= src < self.node_count and 0 <= dst < self.node_count):
                raise TopologyError(f"edge ({src},{dst}) references unknown node")
            if not cap > 0:
                raise TopologyError(f"edge ({src},{dst}) has nonpositive capacity {cap}")

    @property
    def n_links(self) -> int:
        return len(self.edges)

    @property
    def capacities(self) -> np.ndarray:
        return np.array([cap for _, _, cap in self.edges], dtype=float)

    def out_edges(self, node: int) -> list[tuple[int, int]]:
        """(edge index, head node) pairs leaving ``node``, in edge-index order."""
        return self._adjacency()[node]

    def _adjacency(self) -> list[list[tuple[int, int]]]:
        adj = getattr(self, "_adj_cache", None)
        if adj is None:
            adj = [[] for _ in range(self.node_count)]
            for idx, (src, dst, _) in enumerate(self.edges):
                adj[src].append((idx, dst))
            object.__setattr__(self, "_adj_cache", adj)
        return adj

    def all_demand_pairs(self) -> list[tuple[int, int]]:
        """All ordered node pairs, the canonical demand ordering."""
        n = self.node_count
        return [(i, j) for i in range(n) for j in range(n) if i != j]


def make_topology(node_count: int, edges) -> Topology:
    index: dict[tuple[int, int], int] = {}
    canon = []
    for i, (src, dst, cap) in enumerate(edges):
        key = (int(src), int(dst))
        if key in index:
            raise TopologyError(f"duplicate edge {key}")
        index[key] = i
        canon.append((int(src), int(dst), float(cap)))
    return Topology(node_count=node_count, edges=tuple(canon), edge_index=index)


def load_topology(path) -> Topology:
    """Parse a topology file, reporting the offending line on failure."""
    node_count = None
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if node_count is None:
                if len(parts) != 2 or parts[0] != "nodes":
                    raise TopologyError(f"{path}:{lineno}: expected header 'nodes <n>'")
                node_count = int(parts[1])
                continue
            if len(parts) != 3:
                raise TopologyError(f"{path}:{lineno}: expected 'src dst capacity'")
            try:
                src, dst, cap = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise TopologyError(f"{path}:{lineno}: {exc}") from exc
            if cap <= 0:
                raise TopologyError(f"{path}:{lineno}: nonpositive capacity {cap}")
            edges.append((src, dst, cap))
    if node_count is None:
        raise TopologyError(f"{path}: empty file")
    try:
        return make_topology(node_count, edges)
    except TopologyError as exc:
        raise TopologyError(f"{path}: {exc}") from exc


def save_topology(topo: Topology, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"nodes {topo.node_count}\n")
        for src, dst, cap in topo.edges:
            fh.write(f"{src} {dst} {cap:.10g}\n")


def k_shortest_paths(topo: Topology, demand: tuple[int, int], k: int) -> list[tuple[int, ...]]:
    """Up to ``k`` loop-free paths as node tuples, ordered by (hops, lexicographic).

    Partial paths are expanded in best-first order keyed by
    ``(hop count, node sequence)``, which yields complete simple paths in
    exactly the required deterministic order.  Returns an empty list when the
    destination is unreachable.
    """
    src, dst = demand
    if src == dst:
        raise ValueError("demand source equals destination")
    if not (0 <= src < topo.node_count and 0 <= dst < topo.node_count):
        raise ValueError(f"demand ({src},{dst}) references unknown node")
    if k <= 0:
        return []

    found: list[tuple[int, ...]] = []
    queue: list[tuple[int, tuple[int, ...]]] = [(0, (src,))]
    while queue and len(found) < k:
        hops, path = heapq.heappop(queue)
        tail = path[-1]
        if tail == dst:
            found.append(path)
            continue
        for _, head in topo.out_edges(tail):
            if head not in path:
                heapq.heappush(queue, (hops + 1, path + (head,)))
    return found


def path_edges(topo: Topology, path: tuple[int, ...]) -> tuple[int, ...]:
    """Translate a node-sequence path into its edge-index sequence."""
    try:
        return tuple(topo.edge_index[(a, b)] for a, b in zip(path[:-1], path[1:]))
    except KeyError as exc:
        raise ValueError(f"path {path} uses a nonexistent edge") from exc


@dataclass(frozen=True)
class PathSet:
    """Candidate paths for an ordered list of demands, with incidence matrices.

    ``incidence`` is the column-wise concatenation of the per-demand 0/1
    link-path matrices: entry (l, p) is 1 iff global path p traverses link l.
    ``offsets[d]:offsets[d+1]`` delimits demand d's columns.
    """

    topo: Topology
    demands: tuple[tuple[int, int], ...]
    node_paths: tuple[tuple[tuple[int, ...], ...], ...]
    edge_paths: tuple[tuple[tuple[int, ...], ...], ...]
    offsets: np.ndarray
    incidence: sp.csr_matrix = field(repr=False)

    @property
    def n_paths(self) -> int:
        return int(self.offsets[-1])

    @property
    def n_demands(self) -> int:
        return len(self.demands)

    @property
    def path_counts(self) -> np.ndarray:
        return np.diff(self.offsets)

    def demand_slice(self, d: int) -> slice:
        return slice(int(self.offsets[d]), int(self.offsets[d + 1]))

    def incidence_for(self, d: int) -> sp.csr_matrix:
        """The link-path incidence matrix of demand ``d`` (n_links x n_paths_d)."""
        return self.incidence[:, self.demand_slice(d)]

    def subset(self, demand_positions) -> "PathSet":
        """A PathSet restricted to the given demand positions (order preserved)."""
        positions = list(demand_positions)
        demands = tuple(self.demands[i] for i in positions)
        node_paths = tuple(self.node_paths[i] for i in positions)
        edge_paths = tuple(self.edge_paths[i] for i in positions)
        return build_pathset_from_paths(self.topo, demands, node_paths, edge_paths)

    def global_path_indices(self, demand_positions) -> np.ndarray:
        """Flat path indices covered by the given demand positions."""
        idx = [np.arange(self.offsets[i], self.offsets[i + 1]) for i in demand_positions]
        return np.concatenate(idx) if idx else np.array([], dtype=int)


def build_pathset_from_paths(topo, demands, node_paths, edge_paths) -> PathSet:
    offsets = np.zeros(len(demands) + 1, dtype=int)
    rows, cols = [], []
    col = 0
    for d, paths in enumerate(edge_paths):
        for edges in paths:
            rows.extend(edges)
            cols.extend([col] * len(edges))
            col += 1
        offsets[d + 1] = col
    incidence = sp.csr_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(topo.n_links, col)
    )
    return PathSet(
        topo=topo,
        demands=tuple(demands),
        node_paths=tuple(tuple(p) for p in node_paths),
        edge_paths=tuple(tuple(p) for p in edge_paths),
        offsets=offsets,
        incidence=incidence,
    )


def build_pathset(topo: Topology, demands, k: int) -> PathSet:
    """Enumerate up to ``k`` candidate paths per demand.

    Demands with no path are dropped; ``n_paths_d`` may vary per demand.
    """
    kept, node_paths, edge_paths = [], [], []
    for demand in demands:
        paths = k_shortest_paths(topo, demand, k)
        if not paths:
            continue
        kept.append(demand)
        node_paths.append(tuple(paths))
        edge_paths.append(tuple(path_edges(topo, p) for p in paths))
    return build_pathset_from_paths(topo, kept, node_paths, edge_paths)

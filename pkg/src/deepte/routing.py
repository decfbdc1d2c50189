"""Split-ratio routing vectors, link loads, and per-link routing aggregation.

A routing configuration over a :class:`~deepte.topology.PathSet` is a flat
vector with one split fraction per (demand, candidate path); each demand's
fractions are nonnegative and sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topology import PathSet

SIMPLEX_TOL = 1e-9


def uniform_routing(pathset: PathSet) -> np.ndarray:
    """Equal split over each demand's candidate paths."""
    counts = pathset.path_counts
    return np.repeat(1.0 / counts, counts)


def first_path_routing(pathset: PathSet) -> np.ndarray:
    """All traffic on each demand's first (shortest) candidate path."""
    r = np.zeros(pathset.n_paths)
    r[pathset.offsets[:-1]] = 1.0
    return r


def demand_sums(pathset: PathSet, r: np.ndarray) -> np.ndarray:
    return np.add.reduceat(r, pathset.offsets[:-1])


def validate_routing(pathset: PathSet, r: np.ndarray, tol: float = SIMPLEX_TOL) -> None:
    r = np.asarray(r)
    if r.shape != (pathset.n_paths,):
        raise ValueError(f"routing vector has shape {r.shape}, expected ({pathset.n_paths},)")
    if np.any(r < -tol) or np.any(r > 1 + tol):
        raise ValueError("split fractions outside [0, 1]")
    sums = demand_sums(pathset, r)
    worst = np.max(np.abs(sums - 1.0)) if len(sums) else 0.0
    if worst > tol:
        raise ValueError(f"demand split fractions sum to 1 within {tol}; worst residual {worst:.3e}")


def project_to_simplex(pathset: PathSet, r: np.ndarray) -> np.ndarray:
    """Euclidean projection of each demand's block onto the probability simplex."""
    out = np.empty_like(r)
    for d in range(pathset.n_demands):
        sl = pathset.demand_slice(d)
        out[sl] = _simplex_projection(r[sl])
    return out


def _simplex_projection(v: np.ndarray) -> np.ndarray:
    # Held/Wolfe/Crowder algorithm: sort, find the threshold, clip.
    u = np.sort(v)[::-1]
    cumsum = np.cumsum(u) - 1.0
    rho = np.nonzero(u - cumsum / np.arange(1, len(v) + 1) > 0)[0][-1]
    theta = cumsum[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def compute_link_loads(pathset: PathSet, w: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Link loads from the link-path formula: per-path flow summed over links.

    ``w`` holds one demand volume per pathset demand, ``r`` the split
    fractions.  The result is the length-``n_links`` load vector.
    """
    w = np.asarray(w, dtype=float)
    r = np.asarray(r, dtype=float)
    if w.shape != (pathset.n_demands,):
        raise ValueError(f"demand vector has shape {w.shape}, expected ({pathset.n_demands},)")
    if r.shape != (pathset.n_paths,):
        raise ValueError(f"routing vector has shape {r.shape}, expected ({pathset.n_paths},)")
    per_path = np.repeat(w, pathset.path_counts) * r
    return pathset.incidence @ per_path


@dataclass(frozen=True)
class AggregationMaps:
    """Per-link 0/1 maps from split fractions to per-link demand fractions.

    ``link_maps[l, d, p]`` is 1 iff demand d's candidate path p traverses
    link l; ``stacked`` is the vertical stack of the per-link maps in
    edge-index order, shape (n_links * n_demands, n_paths).
    """

    pathset: PathSet
    link_maps: np.ndarray

    @property
    def n_links(self) -> int:
        return self.link_maps.shape[0]

    @property
    def n_demands(self) -> int:
        return self.link_maps.shape[1]

    @property
    def n_paths(self) -> int:
        return self.link_maps.shape[2]

    @property
    def stacked(self) -> np.ndarray:
        return self.link_maps.reshape(self.n_links * self.n_demands, self.n_paths)


def build_aggregation_maps(pathset: PathSet) -> AggregationMaps:
    n_l, n_d, n_p = pathset.topo.n_links, pathset.n_demands, pathset.n_paths
    maps = np.zeros((n_l, n_d, n_p))
    col = 0
    for d, paths in enumerate(pathset.edge_paths):
        for edges in paths:
            maps[list(edges), d, col] = 1.0
            col += 1
    return AggregationMaps(pathset=pathset, link_maps=maps)


def aggregate_routing(maps: AggregationMaps, r: np.ndarray) -> np.ndarray:
    """Per-link total fraction of each demand, shape (n_demands, n_links)."""
    r = np.asarray(r, dtype=float)
    if r.shape != (maps.n_paths,):
        raise ValueError(f"routing vector has shape {r.shape}, expected ({maps.n_paths},)")
    return np.einsum("ldp,p->dl", maps.link_maps, r)


@dataclass(frozen=True)
class DisaggregationResult:
    status: str  # "ok" | "ambiguous" | "infeasible"
    routing: np.ndarray | None
    residual: float
    rank: int


def disaggregate_routing(
    maps: AggregationMaps,
    r_agg: np.ndarray,
    residual_tol: float = 1e-6,
) -> DisaggregationResult:
    """Recover split fractions from aggregated per-link fractions.

    Solves the stacked linear system by least squares.  Reports "ambiguous"
    when the stacked map is column-rank deficient (multiple routings produce
    the same aggregate) and "infeasible" when no routing reproduces the
    aggregate within ``residual_tol``.
    """
    r_agg = np.asarray(r_agg, dtype=float)
    if r_agg.shape != (maps.n_demands, maps.n_links):
        raise ValueError(
            f"aggregated routing has shape {r_agg.shape}, "
            f"expected ({maps.n_demands}, {maps.n_links})"
        )
    stacked = maps.stacked
    # Stack the per-link columns in edge-index order to match the row order.
    target = r_agg.T.reshape(-1)
    rank = int(np.linalg.matrix_rank(stacked))
    if rank < maps.n_paths:
        return DisaggregationResult("ambiguous", None, np.inf, rank)
    solution, _, _, _ = np.linalg.lstsq(stacked, target, rcond=None)
    residual = float(np.linalg.norm(stacked @ solution - target, np.inf))
    if residual > residual_tol:
        return DisaggregationResult("infeasible", None, residual, rank)
    return DisaggregationResult("ok", solution, residual, rank)

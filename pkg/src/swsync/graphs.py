"""Ring-lattice and small-world graph construction, statistics, and edge-list IO.

The small-world model is a ring where every node is joined to its ``2k``
closest neighbours, plus independent Bernoulli(p) "shortcut" edges between
non-ring pairs, with p parametrised as ``r / N``.  Graphs are simple,
undirected and immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EdgeListFormatError, ParameterError

__all__ = [
    "Graph",
    "SmallWorldParams",
    "ring_lattice",
    "generate_small_world",
    "degree_sequence",
    "count_triangles",
    "laplacian",
    "save_edge_list",
    "load_edge_list",
]


class Graph:
    """Simple undirected graph on nodes ``0 .. node_count-1``.

    Parameters
    ----------
    node_count : int
        Number of nodes, at least 1.
    edges : iterable of (int, int)
        Unordered node pairs.  Self-loops and duplicates are rejected.

    Notes
    -----
    Edges are stored canonically (``i < j``, lexicographically sorted) and
    adjacency is kept as one sorted neighbour array per node, so neighbour
    iteration is O(d) and the structure is safe to share read-only.
    """

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]]):
        if node_count < 1:
            raise ParameterError(f"node_count must be positive, got {node_count}")
        self.node_count = int(node_count)

        arr = np.asarray(list(edges), dtype=np.int64)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ParameterError("edges must be pairs of node indices")
        if arr.size and (arr.min() < 0 or arr.max() >= node_count):
            raise ParameterError("edge endpoint out of range")
        if arr.size and np.any(arr[:, 0] == arr[:, 1]):
            raise ParameterError("self-loops are not allowed")

        lo = arr.min(axis=1)
        hi = arr.max(axis=1)
        canon = np.column_stack([lo, hi])
        order = np.lexsort((canon[:, 1], canon[:, 0]))
        canon = canon[order]
        if len(canon) > 1 and np.any(np.all(canon[1:] == canon[:-1], axis=1)):
            raise ParameterError("duplicate edges are not allowed")
        self._edges = canon
        self._edges.setflags(write=False)

        deg = np.bincount(canon.ravel(), minlength=node_count)
        self._degrees = deg
        self._degrees.setflags(write=False)
        # sorted adjacency lists
        both_src = np.concatenate([canon[:, 0], canon[:, 1]])
        both_dst = np.concatenate([canon[:, 1], canon[:, 0]])
        order = np.lexsort((both_dst, both_src))
        self._adj_flat = both_dst[order]
        self._adj_flat.setflags(write=False)
        self._adj_start = np.concatenate([[0], np.cumsum(deg)])

    @property
    def edges(self) -> np.ndarray:
        """Canonical ``(E, 2)`` edge array with ``i < j`` rows."""
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbour indices of node ``i``."""
        return self._adj_flat[self._adj_start[i]:self._adj_start[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        nbrs = self.neighbors(i)
        pos = np.searchsorted(nbrs, j)
        return pos < len(nbrs) and nbrs[pos] == j

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self._edges.shape == other._edges.shape
            and bool(np.all(self._edges == other._edges))
        )

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, num_edges={self.num_edges})"


@dataclass(frozen=True)
class SmallWorldParams:
    """Parameters of the shortcut small-world model.

    ``node_count`` nodes on a ring, each joined to its ``2 * half_degree``
    closest neighbours; every non-ring pair receives an independent shortcut
    with probability ``shortcut_rate / node_count``.
    """

    node_count: int
    half_degree: int
    shortcut_rate: float
    seed: int

    def __post_init__(self):
        if self.half_degree < 1:
            raise ParameterError(f"half_degree must be >= 1, got {self.half_degree}")
        if self.node_count <= 2 * self.half_degree:
            raise ParameterError(
                f"node_count must exceed 2*half_degree "
                f"({self.node_count} <= {2 * self.half_degree})"
            )
        if self.shortcut_rate < 0:
            raise ParameterError(f"shortcut_rate must be >= 0, got {self.shortcut_rate}")
        if self.shortcut_probability > 1.0:
            raise ParameterError(
                f"shortcut probability {self.shortcut_probability} exceeds 1 "
                f"(shortcut_rate > node_count)"
            )

    @property
    def shortcut_probability(self) -> float:
        return self.shortcut_rate / self.node_count


def ring_lattice(node_count: int, half_degree: int) -> Graph:
    """Ring of ``node_count`` nodes, each adjacent to its ``2*half_degree``
    closest neighbours (periodic boundary).

    Raises
    ------
    ParameterError
        If ``node_count <= 2 * half_degree``.
    """
    n, k = int(node_count), int(half_degree)
    if k < 1:
        raise ParameterError(f"half_degree must be >= 1, got {k}")
    if n <= 2 * k:
        raise ParameterError(f"node_count must exceed 2*half_degree ({n} <= {2 * k})")
    i = np.repeat(np.arange(n), k)
    m = np.tile(np.arange(1, k + 1), n)
    j = (i + m) % n
    edges = np.column_stack([np.minimum(i, j), np.maximum(i, j)])
    return Graph(n, edges)


def _pair_from_index(t: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unrank lexicographic pair indices ``t`` into pairs ``(i, j)``, i < j."""
    t = t.astype(np.int64)
    # row i holds pairs (i, i+1..n-1); solve cumulative count S(i) <= t
    b = 2 * n - 1
    i = np.floor((b - np.sqrt(b * b - 8.0 * t)) / 2.0).astype(np.int64)
    # guard against float rounding: S(i) = i*(2n-1-i)/2 must satisfy
    # S(i) <= t < S(i+1)
    def start(row):
        return row * (2 * n - 1 - row) // 2

    i = np.where(start(i + 1) <= t, i + 1, i)
    i = np.where(start(i) > t, i - 1, i)
    j = t - start(i) + i + 1
    return i, j


def generate_small_world(params: SmallWorldParams) -> Graph:
    """Sample a small-world graph: full ring plus Bernoulli(p) shortcuts.

    Shortcut candidates are drawn by geometric skipping over the lexicographic
    pair-index space, so the cost is proportional to the number of sampled
    pairs rather than ``N**2``.  Candidates already adjacent in the ring are
    discarded, which keeps the graph simple; each non-ring pair is still an
    independent Bernoulli(p) trial.  The result is deterministic for a fixed
    ``params.seed``.
    """
    n, k = params.node_count, params.half_degree
    p = params.shortcut_probability
    ring = ring_lattice(n, k)
    if p == 0.0:
        return ring

    rng = np.random.default_rng(params.seed)
    total = n * (n - 1) // 2
    positions = []
    pos = -1
    batch = max(64, int(1.5 * p * total) + 16)
    while pos < total - 1:
        gaps = rng.geometric(p, size=batch)
        steps = np.cumsum(gaps) + pos
        take = steps[steps < total]
        positions.append(take)
        if len(take) < len(steps):
            break
        pos = int(steps[-1])
    hits = np.concatenate(positions) if positions else np.empty(0, dtype=np.int64)

    i, j = _pair_from_index(hits, n)
    d = j - i
    ring_dist = np.minimum(d, n - d)
    keep = ring_dist > k
    shortcuts = np.column_stack([i[keep], j[keep]])
    edges = np.vstack([ring.edges, shortcuts])
    return Graph(n, edges)


def degree_sequence(g: Graph) -> np.ndarray:
    """Per-node degrees; the sum equals twice the edge count."""
    return g.degrees.copy()


def count_triangles(g: Graph) -> int:
    """Exact number of triangles (3-cliques).

    Intersects sorted neighbour lists over every edge; each triangle is seen
    once per edge, so the total is divided by 3.
    """
    total = 0
    for i, j in g.edges:
        total += np.intersect1d(
            g.neighbors(i), g.neighbors(j), assume_unique=True
        ).size
    return total // 3


def laplacian(g: Graph) -> np.ndarray:
    """Dense combinatorial Laplacian: degrees on the diagonal, -1 per edge."""
    n = g.node_count
    lap = np.zeros((n, n))
    e = g.edges
    lap[e[:, 0], e[:, 1]] = -1.0
    lap[e[:, 1], e[:, 0]] = -1.0
    lap[np.arange(n), np.arange(n)] = g.degrees
    return lap


def save_edge_list(g: Graph, path) -> None:
    """Write the edge-list text format: first line is N, then one ``i j``
    line per edge with ``i < j``; ``#`` starts a comment."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.node_count}\n")
        for i, j in g.edges:
            fh.write(f"{i} {j}\n")


def load_edge_list(path) -> Graph:
    """Parse the edge-list format written by :func:`save_edge_list`.

    Raises
    ------
    EdgeListFormatError
        On a malformed header, out-of-range index, self-loop or duplicate
        edge; the error names the offending line.
    """
    node_count = None
    edges = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if node_count is None:
                try:
                    node_count = int(line)
                except ValueError:
                    raise EdgeListFormatError(
                        f"expected node count, got {line!r}", lineno
                    ) from None
                if node_count < 1:
                    raise EdgeListFormatError(
                        f"node count must be positive, got {node_count}", lineno
                    )
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListFormatError(f"expected 'i j', got {line!r}", lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListFormatError(
                    f"non-integer endpoint in {line!r}", lineno
                ) from None
            if i == j:
                raise EdgeListFormatError(f"self-loop at node {i}", lineno)
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise EdgeListFormatError(
                    f"node index out of range in ({i}, {j})", lineno
                )
            key = (min(i, j), max(i, j))
            if key in seen:
                raise EdgeListFormatError(f"duplicate edge ({i}, {j})", lineno)
            seen.add(key)
            edges.append(key)
    if node_count is None:
        raise EdgeListFormatError("empty file, missing node count", 1)
    return Graph(node_count, edges)

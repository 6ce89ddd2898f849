"""Cayley graphs, plain graphs, colorings and DIMACS interchange.

A :class:`CayleyGraph` never stores an edge list.  Vertices are group
elements sorted by key (so a vertex id is its position in the canonical
enumeration) and adjacency is answered by membership of ``x^-1 y`` in the
connection set.  Neighbours of a batch of vertices come from right
multiplication by each connection element, which is how edges are streamed.
Groups too large to enumerate are kept as oracle-only graphs.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, TextIO

import numpy as np

from .errors import (
    AsymmetricSet,
    CapExceeded,
    IdentityInSet,
    ImproperBase,
    ImproperColoring,
    IncompleteColoring,
    UnknownVertex,
)
from .matrices import (
    DEFAULT_ENUM_CAP,
    SymmetricSet,
    batch_det,
    batch_inverse,
    batch_matmul,
    decode,
    encode,
    identity_codes,
    make_symmetric_set,
    sing_set,
    sl_enumerate,
    sl_order,
)
from .rings import RingSpec, reduce_codes

DEFAULT_DENSE_CAP = int(os.environ.get("CAYLEYCHI_DENSE_CAP", 5000))


# --- groups -----------------------------------------------------------------

class MatrixGroup:
    """SL_n(R) with batched multiplication on code arrays."""

    def __init__(self, ring: RingSpec, n: int):
        self.ring, self.n = ring, n
        self.element_shape = (n, n)

    def __repr__(self):
        return f"SL_{self.n}({self.ring})"

    def __eq__(self, other):
        return isinstance(other, MatrixGroup) and (self.ring, self.n) == (other.ring, other.n)

    def __hash__(self):
        return hash((MatrixGroup, self.ring, self.n))

    @property
    def order(self) -> int:
        return sl_order(self.n, self.ring)

    def identity(self) -> np.ndarray:
        return identity_codes(self.n)

    def op(self, A, B) -> np.ndarray:
        return batch_matmul(self.ring, A, B)

    def inverse(self, A) -> np.ndarray:
        return batch_inverse(self.ring, A)

    def encode(self, A) -> np.ndarray:
        return encode(self.ring, A)

    def contains(self, A) -> np.ndarray:
        A = np.asarray(A)
        in_range = ((A >= 0) & (A < self.ring.size)).all(axis=(-1, -2))
        det = batch_det(self.ring, np.where(in_range[..., None, None], A, 0))
        return in_range & (det == self.ring.one)

    def enumerate(self, cap: int | None = None) -> np.ndarray:
        return sl_enumerate(self.n, self.ring, cap=cap)

    def sample(self, k: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform sample by rejection on the determinant."""
        found, total = [], 0
        while total < k:
            cand = rng.integers(0, self.ring.size, size=(max(4 * k, 1024), self.n, self.n))
            good = cand[batch_det(self.ring, cand) == self.ring.one]
            found.append(good)
            total += len(good)
        return np.concatenate(found)[:k]


class AdditiveGroup:
    """(R^dim, +) for a ring R, or (Z/m)^dim when given an integer modulus."""

    def __init__(self, ring: RingSpec | int, dim: int = 1):
        self.ring, self.dim = ring, dim
        if isinstance(ring, RingSpec):
            self.size, self.add_table, self.neg_table = ring.size, ring.add_table, ring.neg_table
        else:
            m = int(ring)
            codes = np.arange(m)
            self.size = m
            self.add_table = (codes[:, None] + codes[None, :]) % m
            self.neg_table = (-codes) % m
        self.element_shape = (dim,)

    def __repr__(self):
        base = str(self.ring) if isinstance(self.ring, RingSpec) else f"Z/{self.ring}"
        return f"({base})^{self.dim}"

    def __eq__(self, other):
        return isinstance(other, AdditiveGroup) and (self.ring, self.dim) == (other.ring, other.dim)

    def __hash__(self):
        return hash((AdditiveGroup, self.ring, self.dim))

    @property
    def order(self) -> int:
        return self.size**self.dim

    def identity(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def op(self, A, B) -> np.ndarray:
        return self.add_table[np.asarray(A), np.asarray(B)]

    def inverse(self, A) -> np.ndarray:
        return self.neg_table[np.asarray(A)]

    def encode(self, A) -> np.ndarray:
        weights = self.size ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        return np.asarray(A) @ weights

    def contains(self, A) -> np.ndarray:
        A = np.asarray(A)
        return ((A >= 0) & (A < self.size)).all(axis=-1)

    def enumerate(self, cap: int | None = None) -> np.ndarray:
        cap = DEFAULT_ENUM_CAP if cap is None else cap
        if self.order > cap:
            raise CapExceeded(f"|{self}|", self.order, cap)
        weights = self.size ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        return (np.arange(self.order)[:, None] // weights) % self.size

    def sample(self, k: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.size, size=(k, self.dim))


def group_set(group, elements, kind: str = "explicit", predicate=None, **params) -> SymmetricSet:
    """Connection set for an arbitrary supported group."""
    return make_symmetric_set(
        kind,
        np.asarray(elements, dtype=np.int64).reshape((-1,) + group.element_shape),
        group.encode,
        group.inverse,
        int(group.encode(group.identity())),
        predicate=predicate,
        group=repr(group),
        **params,
    )


# --- plain graphs -----------------------------------------------------------

class Graph:
    """Small materialised undirected graph on vertices ``0..n-1``."""

    def __init__(self, n: int, adjacency: np.ndarray | None = None, name: str = "graph"):
        self.n_vertices = int(n)
        self._adj = np.zeros((n, n), dtype=bool) if adjacency is None else np.asarray(adjacency, dtype=bool)
        if self._adj.shape != (n, n):
            raise ValueError("adjacency matrix has the wrong shape")
        self.name = name

    @classmethod
    def from_edges(cls, n: int, edges, name: str = "graph") -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError("loops are not allowed")
            adj[i, j] = adj[j, i] = True
        return cls(n, adj, name)

    @classmethod
    def from_adjacency(cls, matrix, name: str = "graph") -> "Graph":
        matrix = np.asarray(matrix) != 0
        if matrix.shape[0] != matrix.shape[1] or (matrix != matrix.T).any() or matrix.diagonal().any():
            raise ValueError("expected a symmetric loop-free adjacency matrix")
        return cls(len(matrix), matrix, name)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, ~np.eye(n, dtype=bool), f"K{n}")

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")

    def adjacency_matrix(self, dense_cap: int | None = None) -> np.ndarray:
        return self._adj.astype(np.int8)

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self._adj[i])

    def adjacency_lists(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.n_vertices)]

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def edges(self) -> np.ndarray:
        i, j = np.nonzero(np.triu(self._adj, 1))
        return np.stack([i, j], axis=1)

    @property
    def edge_count(self) -> int:
        return int(np.triu(self._adj, 1).sum())

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)


# --- Cayley graphs ----------------------------------------------------------

@dataclass(eq=False)
class CayleyGraph:
    """Cay(G, S): x ~ y iff x^-1 y in S."""

    group: object
    connection: SymmetricSet
    vertices: np.ndarray | None
    keys: np.ndarray | None
    name: str = "cayley"

    @property
    def materialized(self) -> bool:
        return self.vertices is not None

    @property
    def n_vertices(self) -> int:
        return len(self.keys) if self.materialized else self.group.order

    @property
    def degree(self) -> int:
        return self.connection.size

    @property
    def edge_count(self) -> int:
        return self.n_vertices * self.degree // 2

    def _require_vertices(self):
        if not self.materialized:
            raise CapExceeded(f"vertex list of {self.name}", self.n_vertices, DEFAULT_ENUM_CAP)

    def index_of(self, elements) -> np.ndarray:
        self._require_vertices()
        keys = self.group.encode(elements)
        pos = np.minimum(np.searchsorted(self.keys, keys), len(self.keys) - 1)
        if not (self.keys[pos] == keys).all():
            raise UnknownVertex("element is not a vertex of the graph")
        return pos

    def adjacent_elements(self, x, y) -> np.ndarray:
        return self.connection.contains_keys(self.group.encode(self.group.op(self.group.inverse(x), y)))

    def adjacent(self, i: int, j: int) -> bool:
        self._require_vertices()
        return bool(self.adjacent_elements(self.vertices[i], self.vertices[j]))

    def neighbors(self, i: int) -> np.ndarray:
        self._require_vertices()
        return np.sort(self.index_of(self.group.op(self.vertices[i], self.connection.elements)))

    def iter_targets(self, chunk: range | None = None) -> Iterator[tuple[int, np.ndarray]]:
        """Yield ``(k, t)`` with ``t[i]`` the index of ``v_i * s_k``."""
        self._require_vertices()
        for k in chunk if chunk is not None else range(self.degree):
            yield k, self.index_of(self.group.op(self.vertices, self.connection.elements[k]))

    def adjacency_lists(self) -> list[np.ndarray]:
        targets = np.stack([t for _, t in self.iter_targets()], axis=1)
        return [np.sort(row) for row in targets]

    def adjacency_matrix(self, dense_cap: int | None = None) -> np.ndarray:
        cap = DEFAULT_DENSE_CAP if dense_cap is None else dense_cap
        if self.n_vertices > cap:
            raise CapExceeded(f"dense adjacency of {self.name}", self.n_vertices, cap)
        n = self.n_vertices
        adj = np.zeros((n, n), dtype=np.int8)
        rows = np.arange(n)
        for _, t in self.iter_targets():
            adj[rows, t] = 1
        return adj

    def edges(self) -> np.ndarray:
        pairs = [np.stack([np.arange(self.n_vertices), t], 1) for _, t in self.iter_targets()]
        pairs = np.concatenate(pairs) if pairs else np.zeros((0, 2), dtype=np.int64)
        pairs = pairs[pairs[:, 0] < pairs[:, 1]]
        order = np.lexsort((pairs[:, 1], pairs[:, 0]))
        return pairs[order]

    def to_graph(self, dense_cap: int | None = None) -> Graph:
        return Graph(self.n_vertices, self.adjacency_matrix(dense_cap) != 0, self.name)


def cayley_build(group, connection: SymmetricSet, elements=None, *, cap: int | None = None,
                 materialize: bool | None = None, name: str | None = None) -> CayleyGraph:
    """Cay(G, S) on ``elements`` (default: all of G in canonical order).

    With ``materialize=None`` groups above ``cap`` become oracle-only graphs;
    ``materialize=True`` raises :class:`CapExceeded` instead.
    """
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    if connection.contains_identity:
        raise IdentityInSet("the connection set contains the identity")
    inverse_keys = group.encode(group.inverse(connection.elements))
    if len(connection.keys) and not connection.contains_keys(inverse_keys).all():
        raise AsymmetricSet("connection set is not closed under inversion")
    name = name or f"Cay({group!r}, {connection.kind})"
    if elements is None:
        if group.order > cap:
            if materialize:
                raise CapExceeded(f"|{group!r}|", group.order, cap)
            return CayleyGraph(group, connection, None, None, name)
        elements = group.enumerate(cap=cap)
    else:
        elements = np.asarray(elements, dtype=np.int64)
        if len(elements) > cap:
            raise CapExceeded(f"{name} vertex list", len(elements), cap)
    keys = group.encode(elements)
    order = np.argsort(keys, kind="stable")
    return CayleyGraph(group, connection, elements[order], keys[order], name)


def sing_graph(ring: RingSpec, n: int = 2, *, cap: int | None = None, materialize: bool | None = None) -> CayleyGraph:
    """Sing_n(R): vertices SL_n(R), x ~ y iff det(x + y) = 0."""
    return cayley_build(MatrixGroup(ring, n), sing_set(n, ring, cap=cap), cap=cap,
                        materialize=materialize, name=f"Sing_{n}({ring})")


def induced_subgraph(g, subset) -> Graph:
    """Induced subgraph on vertex indices (1-D ints) or on group elements."""
    if isinstance(g, Graph):
        idx = np.asarray(subset, dtype=np.int64)
        if ((idx < 0) | (idx >= g.n_vertices)).any():
            raise UnknownVertex("index out of range")
        return Graph(len(idx), g._adj[np.ix_(idx, idx)], f"{g.name}[subset]")
    subset = np.asarray(subset, dtype=np.int64)
    if subset.ndim == 1:
        g._require_vertices()
        if ((subset < 0) | (subset >= g.n_vertices)).any():
            raise UnknownVertex("index out of range")
        elements = g.vertices[subset]
    else:
        elements = subset
        if not g.group.contains(elements).all():
            raise UnknownVertex("element is not in the group")
        if g.materialized:
            g.index_of(elements)
    inv = g.group.inverse(elements)
    k = len(elements)
    adj = np.zeros((k, k), dtype=bool)
    for i in range(k):
        adj[i] = g.connection.contains_keys(g.group.encode(g.group.op(inv[i], elements)))
    return Graph(k, adj, f"{g.name}[subset]")


class Connectivity(NamedTuple):
    connected: bool
    bipartite: bool
    components: int


def connectivity_bipartiteness(g) -> Connectivity:
    """BFS 2-colouring; each component is explored with vectorised frontiers."""
    n = g.n_vertices
    parity = np.full(n, -1, dtype=np.int8)
    bipartite, components = True, 0
    if isinstance(g, CayleyGraph):
        g._require_vertices()

        def expand(frontier):
            return np.stack([g.index_of(g.group.op(g.vertices[frontier], s)) for s in g.connection.elements], 1)
    else:
        lists = g.adjacency_lists()

        def expand(frontier):
            return [lists[v] for v in frontier]

    for start in range(n):
        if parity[start] >= 0:
            continue
        components += 1
        parity[start] = 0
        frontier = np.array([start])
        while len(frontier):
            nbrs = expand(frontier)
            src, dst = [], []
            for v, row in zip(frontier, nbrs):
                src.append(np.full(len(row), v))
                dst.append(np.asarray(row))
            if not src:
                break
            src, dst = np.concatenate(src), np.concatenate(dst).astype(np.int64)
            seen = parity[dst] >= 0
            if (parity[dst[seen]] == parity[src[seen]]).any():
                bipartite = False
            fresh = dst[~seen]
            fresh_src = src[~seen]
            uniq, first = np.unique(fresh, return_index=True)
            parity[uniq] = 1 - parity[fresh_src[first]]
            # same-level fresh pairs reached from both parities break bipartiteness
            if len(fresh) and (parity[fresh] == parity[fresh_src]).any():
                bipartite = False
            frontier = uniq
    return Connectivity(components == 1, bipartite, components)


# --- colorings --------------------------------------------------------------

@dataclass
class Coloring:
    """Vertex colouring.  ``colors`` is indexed by vertex id; oracle-only
    graphs carry ``color_fn`` (group elements -> colour ids) instead."""

    colors: np.ndarray | None
    scheme: str
    params: dict = field(default_factory=dict)
    color_fn: Callable | None = field(default=None, repr=False)
    palette_size: int | None = None

    def __post_init__(self):
        if self.colors is not None:
            self.colors = np.asarray(self.colors, dtype=np.int64)
            if self.palette_size is None:
                self.palette_size = int(len(np.unique(self.colors)))

    @property
    def palette(self) -> int:
        return int(self.palette_size)

    def compact(self) -> "Coloring":
        """Relabel colours 0..k-1 in order of first appearance."""
        _, first, inverse = np.unique(self.colors, return_index=True, return_inverse=True)
        rank = np.argsort(np.argsort(first))
        return Coloring(rank[inverse], self.scheme, dict(self.params))

    def to_dict(self) -> dict:
        out = {"scheme": self.scheme, "palette": self.palette, "params": self.params}
        if self.colors is not None:
            out["colors"] = [int(c) for c in self.colors]
        return out

    def to_dimacs(self) -> str:
        lines = [f"s col {self.palette}"]
        lines += [f"l {i + 1} {int(c) + 1}" for i, c in enumerate(self.colors)]
        return "\n".join(lines) + "\n"


def _colors_for(g, coloring: Coloring, elements=None, index=None) -> np.ndarray:
    if coloring.colors is not None and index is not None:
        return coloring.colors[index]
    if coloring.color_fn is None:
        raise IncompleteColoring("coloring has neither a colour array nor a colour map")
    return coloring.color_fn(elements)


def find_monochromatic_edge(g, coloring: Coloring, *, samples: int = 2000, seed: int = 0, threads: int = 1):
    """First monochromatic edge, or None.

    Materialised graphs are checked edge by edge (streamed per connection
    element for Cayley graphs).  Oracle-only Cayley graphs are checked on all
    edges at ``samples`` random vertices.
    """
    if isinstance(g, Graph):
        colors = coloring.colors
        if colors is None or len(colors) != g.n_vertices:
            raise IncompleteColoring("need one colour per vertex")
        e = g.edges()
        bad = e[colors[e[:, 0]] == colors[e[:, 1]]]
        return tuple(int(v) for v in bad[0]) if len(bad) else None

    if g.materialized:
        if coloring.colors is not None and len(coloring.colors) != g.n_vertices:
            raise IncompleteColoring("need one colour per vertex")
        colors = coloring.colors if coloring.colors is not None else coloring.color_fn(g.vertices)

        def scan(chunk):
            for k, t in g.iter_targets(chunk):
                hit = np.flatnonzero(colors == colors[t])
                if len(hit):
                    return k, (int(hit[0]), int(t[hit[0]]))
            return None

        chunks = [range(s, g.degree, max(threads, 1)) for s in range(max(threads, 1))]
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                found = [r for r in pool.map(scan, chunks) if r is not None]
        else:
            found = [r for r in map(scan, chunks) if r is not None]
        return min(found)[1] if found else None

    rng = np.random.default_rng(seed)
    xs = g.group.sample(samples, rng)
    cx = coloring.color_fn(xs)
    for s in g.connection.elements:
        ys = g.group.op(xs, s)
        hit = np.flatnonzero(cx == coloring.color_fn(ys))
        if len(hit):
            return xs[hit[0]], ys[hit[0]]
    return None


def lift_coloring(base_graph: CayleyGraph, base: Coloring, target: CayleyGraph, *,
                  samples: int = 2000, seed: int = 0, verify: bool = True) -> Coloring:
    """Pull a colouring of Sing_n(R/a) back along SL_n(R) -> SL_n(R/a).

    The base is checked first (:class:`ImproperBase`); the lifted colouring is
    then verified on every edge of ``target`` when it is materialised, or on
    sampled vertices otherwise.
    """
    src, dst = target.group.ring, base_graph.group.ring
    if target.group.n != base_graph.group.n:
        raise ValueError("dimension mismatch between target and base")
    if dst.p == 2:
        raise ValueError("2 is a zero divisor in the quotient")
    reduce_codes(src, dst, [0])
    if verify and find_monochromatic_edge(base_graph, base) is not None:
        raise ImproperBase("base colouring is not proper on the quotient graph")

    def color_fn(elements):
        return base.colors[base_graph.index_of(reduce_codes(src, dst, elements))]

    colors = color_fn(target.vertices) if target.materialized else None
    lifted = Coloring(
        colors,
        f"lift({base.scheme})",
        {**base.params, "from": str(src), "to": str(dst)},
        color_fn=color_fn,
        palette_size=None if colors is not None else base.palette,
    )
    if verify:
        bad = find_monochromatic_edge(target, lifted, samples=samples, seed=seed)
        if bad is not None:
            raise ImproperColoring(f"lifted colouring has a monochromatic edge {bad}")
        lifted.params["verified"] = "full" if target.materialized else f"sampled:{samples}"
    return lifted


# --- DIMACS -----------------------------------------------------------------

def write_dimacs(g, fp: TextIO, comment: str | None = None) -> None:
    edges = g.edges()
    if comment:
        fp.write(f"c {comment}\n")
    fp.write(f"p edge {g.n_vertices} {len(edges)}\n")
    for i, j in edges:
        fp.write(f"e {i + 1} {j + 1}\n")


def read_dimacs(fp: TextIO) -> Graph:
    n, edges = None, []
    for line in fp:
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise ValueError("missing 'p edge' header")
    return Graph.from_edges(n, edges)

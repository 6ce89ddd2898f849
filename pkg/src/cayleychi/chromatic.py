"""Proper colourings: explicit constructions for Sing_2(F_q), DSATUR, and an
exact branch-and-bound chromatic/clique oracle for small graphs."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .cayley import CayleyGraph, Coloring, Graph, find_monochromatic_edge, induced_subgraph
from .errors import CapExceeded, IncompleteColoring, PreconditionFailed
from .matrices import sl_enumerate
from .rings import RingSpec

DEFAULT_EXACT_CAP = int(os.environ.get("CAYLEYCHI_EXACT_CAP", 300))
DEFAULT_BUDGET = 60.0


class ColoringCheck(NamedTuple):
    proper: bool
    violating_edge: tuple | None


def verify_coloring(g, coloring: Coloring, **kwargs) -> ColoringCheck:
    """Check that no edge is monochromatic (streamed or sampled, see
    :func:`cayleychi.cayley.find_monochromatic_edge`)."""
    if coloring.colors is None and coloring.color_fn is None:
        raise IncompleteColoring("coloring assigns no colours")
    if coloring.colors is not None and (coloring.colors < 0).any():
        raise IncompleteColoring("some vertices are uncoloured")
    edge = find_monochromatic_edge(g, coloring, **kwargs)
    return ColoringCheck(edge is None, edge)


# --- explicit colourings of Sing_2(F_q) --------------------------------------

def projective_point(ring: RingSpec, first_col: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Point of P^1 for columns (a, c), and the scalar s with (a, c) = s * rep.

    rep is (a/c, 1) when c != 0 (point id a/c) and (1, 0) otherwise (id q).
    """
    a, c = first_col[..., 0], first_col[..., 1]
    nz = c != 0
    inv_c = ring.inv_table[np.where(nz, c, 1)]
    point = np.where(nz, ring.mul_table[a, inv_c], ring.size)
    scalar = np.where(nz, c, a)
    return point, scalar


def theta_colors(ring: RingSpec, elements: np.ndarray) -> np.ndarray:
    """Colour ids of X = [[a, b], [c, d]] from (coset of B, lambda(c), lambda(d))."""
    ring.require_field()
    point, _ = projective_point(ring, elements[..., :, 0])
    lam_c = ring.sign_table[elements[..., 1, 0]] + 1
    lam_d = ring.sign_table[elements[..., 1, 1]] + 1
    return point * 9 + lam_c * 3 + lam_d


def theta_coloring(q: int, vertices: np.ndarray | None = None) -> Coloring:
    """Colouring of Sing_2(F_q) by upper-triangular coset and the signs of the
    bottom row; at most 8(q + 1) colours."""
    ring = RingSpec.field(q)
    if ring.p == 2:
        raise ValueError("q must be odd")
    vertices = sl_enumerate(2, ring) if vertices is None else vertices
    return Coloring(theta_colors(ring, vertices), "theta", {"q": q, "bound": 8 * (q + 1)})


def coset_class_count(q: int, variant: str) -> int:
    if variant == "squares":
        return 2
    if variant == "fourth-powers":
        return math.gcd(4, q - 1)
    raise ValueError(f"unknown variant {variant!r}")


def coset_colors(ring: RingSpec, elements: np.ndarray, variant: str) -> np.ndarray:
    k = coset_class_count(ring.size, variant)
    point, scalar = projective_point(ring, elements[..., :, 0])
    return point * k + ring.log_table[scalar] % k


def coset_coloring(q: int, variant: str = "squares", vertices: np.ndarray | None = None) -> Coloring:
    """Colour by the coset of B' = {[[x, y], [0, 1/x]] : x in H}, H the squares
    or fourth powers of F_q^*; proper whenever -1 is not in H."""
    ring = RingSpec.field(q)
    k = coset_class_count(q, variant)
    log_minus_one = (q - 1) // 2
    if log_minus_one % k == 0:
        raise PreconditionFailed(f"-1 lies in the {variant} subgroup of F_{q}^*")
    vertices = sl_enumerate(2, ring) if vertices is None else vertices
    return Coloring(coset_colors(ring, vertices, variant), f"coset-{variant}",
                    {"q": q, "variant": variant, "cosets": (q + 1) * k})


# --- adjacency helpers ------------------------------------------------------

def _adjacency_lists(g, cap: int | None = None) -> list[np.ndarray]:
    if cap is not None and g.n_vertices > cap:
        raise CapExceeded(f"exact search on {getattr(g, 'name', 'graph')}", g.n_vertices, cap)
    return [np.asarray(a, dtype=np.int64) for a in g.adjacency_lists()]


def dsatur_colors(adj: list) -> np.ndarray:
    """Brelaz DSATUR: highest saturation first, ties by degree then index."""
    n = len(adj)
    colors = np.full(n, -1, dtype=np.int64)
    degree = np.array([len(a) for a in adj])
    saturation = np.zeros(n, dtype=np.int64)
    seen: list[set] = [set() for _ in range(n)]
    for _ in range(n):
        key = np.where(colors < 0, saturation * (n + 1) + degree, -1)
        v = int(np.argmax(key))
        c = 0
        while c in seen[v]:
            c += 1
        colors[v] = c
        for u in adj[v]:
            if c not in seen[u]:
                seen[u].add(c)
                saturation[u] += 1
    return colors


def greedy_dsatur(g, cap: int | None = None) -> Coloring:
    from .cayley import DEFAULT_DENSE_CAP

    adj = _adjacency_lists(g, DEFAULT_DENSE_CAP if cap is None else cap)
    return Coloring(dsatur_colors(adj), "dsatur")


# --- maximum clique ---------------------------------------------------------

class CliqueResult(NamedTuple):
    size: int
    exact: bool
    members: tuple


def _bitsets(adj) -> list[int]:
    masks = []
    for row in adj:
        m = 0
        for u in row:
            m |= 1 << int(u)
        masks.append(m)
    return masks


def _max_clique_masks(nbr: list[int], deadline: float) -> tuple[list[int], bool]:
    """Branch and bound with greedy-colouring bounds (Tomita-style)."""
    best: list[int] = []
    exhausted = False
    nodes = 0

    def colour_bound(cand: int):
        order, bounds, k = [], [], 0
        while cand:
            k += 1
            avail = cand
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(1 << v) & ~nbr[v]
                cand &= ~(1 << v)
                order.append(v)
                bounds.append(k)
        return order, bounds

    def expand(clique: list[int], cand: int):
        nonlocal best, exhausted, nodes
        nodes += 1
        if nodes & 1023 == 0 and time.monotonic() > deadline:
            exhausted = True
        if exhausted:
            return
        order, bounds = colour_bound(cand)
        for v, b in zip(reversed(order), reversed(bounds)):
            if len(clique) + b <= len(best):
                return
            clique.append(v)
            new = cand & nbr[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            cand &= ~(1 << v)
            if exhausted:
                return

    n = len(nbr)
    if n:
        expand([], (1 << n) - 1)
    return best, not exhausted


def clique_number(g, budget: float = DEFAULT_BUDGET, cap: int | None = None) -> CliqueResult:
    """Exact clique number, or the best clique found when the budget runs out.

    Cayley graphs are vertex-transitive, so only cliques through the identity
    are searched: omega = 1 + omega(neighbourhood of vertex 0).  The vertex
    cap applies to the graph actually searched.
    """
    cap = DEFAULT_EXACT_CAP if cap is None else cap
    deadline = time.monotonic() + budget
    if isinstance(g, CayleyGraph):
        if g.degree == 0:
            return CliqueResult(1, True, (0,))
        g._require_vertices()
        root = int(g.index_of(g.group.identity()[None])[0])
        nbrs = g.neighbors(root)
        sub = induced_subgraph(g, nbrs)
        masks = _bitsets(_adjacency_lists(sub, cap))
        best, exact = _max_clique_masks(masks, deadline)
        members = (root,) + tuple(int(nbrs[v]) for v in best)
        return CliqueResult(len(members), exact, tuple(sorted(members)))
    adj = _adjacency_lists(g, cap)
    if not adj:
        return CliqueResult(0, True, ())
    best, exact = _max_clique_masks(_bitsets(adj), deadline)
    return CliqueResult(len(best), exact, tuple(sorted(best)))


# --- exact chromatic number -------------------------------------------------

@dataclass
class ChromaticResult:
    lower: int
    upper: int
    exact: int | None = None
    methods: list = field(default_factory=list)
    budget_exhausted: bool = False
    nodes: int = 0
    elapsed: float = 0.0
    coloring: Coloring | None = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        if self.exact is not None and not self.lower == self.upper == self.exact:
            raise ValueError("exact value must equal both bounds")

    def to_dict(self) -> dict:
        # elapsed time is left out so identical runs serialise identically
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "methods": list(self.methods),
            "budget_exhausted": self.budget_exhausted,
            "nodes": self.nodes,
        }


def _dsatur_branch_and_bound(adj, clique, upper, best_colors, deadline):
    n = len(adj)
    degree = [len(a) for a in adj]
    width = upper + 1
    counts = [[0] * width for _ in range(n)]
    saturation = [0] * n
    colors = [-1] * n
    state = {"upper": upper, "best": best_colors, "nodes": 0, "exhausted": False}

    def assign(v, c):
        colors[v] = c
        for u in adj[v]:
            if counts[u][c] == 0:
                saturation[u] += 1
            counts[u][c] += 1

    def unassign(v, c):
        colors[v] = -1
        for u in adj[v]:
            counts[u][c] -= 1
            if counts[u][c] == 0:
                saturation[u] -= 1

    for c, v in enumerate(clique):
        assign(v, c)

    def search(n_colored, k):
        state["nodes"] += 1
        if state["nodes"] & 1023 == 0 and time.monotonic() > deadline:
            state["exhausted"] = True
        if state["exhausted"]:
            return
        if n_colored == n:
            state["upper"] = k
            state["best"] = np.array(colors, dtype=np.int64)
            return
        v, key = -1, (-1, -1)
        for u in range(n):
            if colors[u] < 0 and (saturation[u], degree[u]) > key:
                v, key = u, (saturation[u], degree[u])
        options = [c for c in range(k) if counts[v][c] == 0]
        if k + 1 < state["upper"]:
            options.append(k)
        for c in options:
            if max(k, c + 1) >= state["upper"]:
                break
            assign(v, c)
            search(n_colored + 1, max(k, c + 1))
            unassign(v, c)
            if state["exhausted"] or state["upper"] <= len(clique):
                return

    search(len(clique), len(clique))
    return state


def exact_chromatic(g, budget: float = DEFAULT_BUDGET, cap: int | None = None) -> ChromaticResult:
    """chi(g) by DSATUR branch and bound seeded with a maximum clique.

    The clique supplies the lower bound and fixes the first colours (symmetry
    breaking); DSATUR supplies the initial upper bound.  If the time budget
    runs out the current bracket is returned with ``budget_exhausted`` set.
    """
    cap = DEFAULT_EXACT_CAP if cap is None else cap
    start = time.monotonic()
    deadline = start + budget
    adj = _adjacency_lists(g, cap)
    n = len(adj)
    if n == 0:
        return ChromaticResult(0, 0, 0, ["trivial"], coloring=Coloring(np.zeros(0, np.int64), "exact"))
    best_clique, clique_exact = _max_clique_masks(_bitsets(adj), start + budget / 2)
    best_clique = best_clique or [0]
    heuristic = dsatur_colors(adj)
    upper = int(heuristic.max()) + 1
    methods = ["clique" if clique_exact else "clique(partial)", "dsatur"]
    if upper == len(best_clique):
        return ChromaticResult(upper, upper, upper, methods, elapsed=time.monotonic() - start,
                               coloring=Coloring(heuristic, "exact"))
    state = _dsatur_branch_and_bound(adj, best_clique, upper, heuristic, deadline)
    methods.append("branch-and-bound")
    elapsed = time.monotonic() - start
    coloring = Coloring(state["best"], "exact")
    if state["exhausted"]:
        return ChromaticResult(len(best_clique), state["upper"], None, methods, True,
                               state["nodes"], elapsed, coloring)
    chi = state["upper"]
    return ChromaticResult(chi, chi, chi, methods, False, state["nodes"], elapsed, coloring)

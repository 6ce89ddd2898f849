import io

import networkx as nx
import numpy as np
import pytest

from cayleychi.cayley import (
    AdditiveGroup,
    Coloring,
    Graph,
    MatrixGroup,
    cayley_build,
    connectivity_bipartiteness,
    find_monochromatic_edge,
    group_set,
    induced_subgraph,
    lift_coloring,
    read_dimacs,
    sing_graph,
    write_dimacs,
)
from cayleychi.chromatic import theta_coloring
from cayleychi.errors import AsymmetricSet, IdentityInSet, ImproperBase, UnknownVertex
from cayleychi.kloosterman import hyperbola_graph
from cayleychi.matrices import embed_a_codes, explicit_set, t1_matrix
from cayleychi.rings import RingSpec
from cayleychi.spectral import eig_dense


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n_vertices))
    G.add_edges_from(map(tuple, g.edges()))
    return G


def graphs():
    yield sing_graph(RingSpec.field(3))
    yield sing_graph(RingSpec.field(5))
    yield hyperbola_graph(RingSpec.field(5))
    yield hyperbola_graph(RingSpec.field(7))
    z6 = AdditiveGroup(6)
    yield cayley_build(z6, group_set(z6, [[2], [4]]))
    z8 = AdditiveGroup(8)
    yield cayley_build(z8, group_set(z8, [[1], [7], [3], [5]]))


@pytest.mark.parametrize("ring,n_vertices,degree", [
    (RingSpec.field(3), 24, 9), (RingSpec.field(5), 120, 25), (RingSpec.field(7), 336, 49),
])
def test_sing_sizes(ring, n_vertices, degree):
    g = sing_graph(ring)
    assert (g.n_vertices, g.degree) == (n_vertices, degree)
    assert (g.adjacency_matrix().sum(axis=1) == degree).all()


def test_hyperbola_sizes():
    g = hyperbola_graph(RingSpec.field(5))
    assert (g.n_vertices, g.degree) == (25, 4)
    g = hyperbola_graph(RingSpec.modular(5, 2))
    assert (g.n_vertices, g.degree) == (625, 20)
    assert g.adjacent_elements(np.array([3, 3]), np.array([4, 4]))


def test_adjacency_is_definition():
    ring = RingSpec.field(3)
    g = sing_graph(ring)
    A = g.adjacency_matrix()
    V = g.vertices
    for i in range(g.n_vertices):
        for j in range(g.n_vertices):
            s = V[i] + V[j]
            det = (s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]) % 3
            assert A[i, j] == (det == 0)


@pytest.mark.parametrize("g", list(graphs()), ids=lambda g: g.name)
def test_handshake_and_symmetry(g):
    A = g.adjacency_matrix()
    assert (A == A.T).all() and not A.diagonal().any()
    assert 2 * g.edge_count == g.degree * g.n_vertices == A.sum()
    rng = np.random.default_rng(0)
    for i, j in rng.integers(0, g.n_vertices, size=(10_000, 2)):
        assert g.adjacent(i, j) == g.adjacent(j, i) == A[i, j]


@pytest.mark.parametrize("g", list(graphs()), ids=lambda g: g.name)
def test_connectivity_against_networkx_and_spectrum(g):
    c = connectivity_bipartiteness(g)
    G = to_nx(g)
    assert c.connected == nx.is_connected(G)
    assert c.components == nx.number_connected_components(G)
    assert c.bipartite == nx.is_bipartite(G)
    spec = eig_dense(g)
    assert c.connected == (spec.multiplicity(g.degree) == 1)
    assert c.bipartite == (spec.multiplicity(-g.degree) > 0)


def test_connectivity_examples():
    for q in (3, 5, 7):
        assert connectivity_bipartiteness(sing_graph(RingSpec.field(q))).connected
    for n in (1, 2):
        c = connectivity_bipartiteness(hyperbola_graph(RingSpec.modular(5, n)))
        assert c.connected and not c.bipartite
    z6 = AdditiveGroup(6)
    assert not connectivity_bipartiteness(cayley_build(z6, group_set(z6, [[2], [4]]))).connected


def test_build_errors():
    z6 = AdditiveGroup(6)
    with pytest.raises(AsymmetricSet):
        cayley_build(z6, group_set(z6, [[1], [2], [5]]))
    with pytest.raises(IdentityInSet):
        cayley_build(z6, group_set(z6, [[0], [3]]))
    ring = RingSpec.field(5)
    with pytest.raises(AsymmetricSet):
        explicit_set(ring, [t1_matrix(ring)])


def test_oracle_only_graph():
    g = sing_graph(RingSpec.modular(5, 3))
    assert not g.materialized
    assert g.n_vertices == 1_875_000 and g.degree == 18125


def test_induced_subgraph_examples():
    g = sing_graph(RingSpec.field(3))
    full = induced_subgraph(g, np.arange(g.n_vertices))
    assert (full.adjacency_matrix() == g.adjacency_matrix()).all()
    assert induced_subgraph(g, [5]).edge_count == 0
    with pytest.raises(UnknownVertex):
        induced_subgraph(g, [99])


def test_induced_embedding_is_hyperbola():
    ring = RingSpec.field(5)
    H = hyperbola_graph(ring)
    A = embed_a_codes(ring, H.vertices[:, 0], H.vertices[:, 1])
    sub = induced_subgraph(sing_graph(ring), A)
    assert sub.n_vertices == 25 and (sub.degrees() == 4).all()
    assert (sub.adjacency_matrix() == H.adjacency_matrix()).all()
    assert nx.is_isomorphic(to_nx(sub), to_nx(H))


# --- colourings -------------------------------------------------------------

def test_monochromatic_edge_detection():
    g = sing_graph(RingSpec.field(3))
    assert find_monochromatic_edge(g, Coloring(np.arange(24), "distinct")) is None
    i, j = find_monochromatic_edge(g, Coloring(np.zeros(24, int), "constant"))
    assert g.adjacent(i, j)


def test_monochromatic_threads_agree():
    g = sing_graph(RingSpec.field(5))
    bad = Coloring(np.arange(120) % 7, "mod7")
    assert find_monochromatic_edge(g, bad, threads=1) == find_monochromatic_edge(g, bad, threads=4)


def test_lift_identity_reduction():
    g = sing_graph(RingSpec.field(5))
    c = theta_coloring(5, g.vertices)
    lifted = lift_coloring(g, c, g)
    assert (lifted.colors == c.colors).all()


def test_lift_to_z25():
    base_graph = sing_graph(RingSpec.field(5))
    base = theta_coloring(5, base_graph.vertices)
    target = sing_graph(RingSpec.modular(5, 2))
    lifted = lift_coloring(base_graph, base, target)
    assert lifted.params["verified"] == "full"
    assert lifted.palette == base.palette <= 48
    assert find_monochromatic_edge(target, lifted) is None


def test_lift_to_z125_sampled():
    base_graph = sing_graph(RingSpec.field(5))
    base = theta_coloring(5, base_graph.vertices)
    target = sing_graph(RingSpec.modular(5, 3))
    lifted = lift_coloring(base_graph, base, target, samples=300)
    assert lifted.params["verified"] == "sampled:300"
    assert lifted.palette == base.palette


def test_lift_rejects_improper_base():
    base_graph = sing_graph(RingSpec.field(5))
    with pytest.raises(ImproperBase):
        lift_coloring(base_graph, Coloring(np.zeros(120, int), "constant"), sing_graph(RingSpec.modular(5, 2)))


# --- DIMACS -----------------------------------------------------------------

def test_dimacs_round_trip():
    g = sing_graph(RingSpec.field(3))
    buf = io.StringIO()
    write_dimacs(g, buf, comment="Sing_2(F_3)")
    text = buf.getvalue()
    assert text.startswith("c Sing_2(F_3)\np edge 24 108\n")
    back = read_dimacs(io.StringIO(text))
    assert (back.adjacency_matrix() == g.adjacency_matrix()).all()
    edges = [tuple(map(int, line.split()[1:])) for line in text.splitlines() if line.startswith("e ")]
    assert min(min(e) for e in edges) == 1 and max(max(e) for e in edges) == 24


def test_coloring_dimacs_output():
    c = Coloring(np.array([0, 1, 0, 2]), "x")
    assert c.to_dimacs() == "s col 3\nl 1 1\nl 2 2\nl 3 1\nl 4 3\n"
    assert c.to_dict() == {"scheme": "x", "palette": 3, "params": {}, "colors": [0, 1, 0, 2]}


def test_plain_graph_helpers():
    assert Graph.complete(4).edge_count == 6
    assert not connectivity_bipartiteness(Graph.cycle(5)).bipartite
    assert connectivity_bipartiteness(Graph.cycle(6)).bipartite
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])

import numpy as np
import pytest
from sklearn.base import clone

from cayleychi.cayley import Graph, sing_graph
from cayleychi.estimators import AdjacencySpectrum, DSaturColoring, ExactColoring, MaxClique, check_adjacency
from cayleychi.rings import RingSpec


def c7():
    return Graph.cycle(7).adjacency_matrix().astype(int)


def test_check_adjacency():
    assert check_adjacency(c7()).n_vertices == 7
    for bad in (np.ones((2, 3)), np.array([[0, 2], [2, 0]]), np.array([[0, 1], [0, 0]]), np.eye(3)):
        with pytest.raises(ValueError):
            check_adjacency(bad)
    with pytest.raises(ValueError):
        check_adjacency(np.array([[0, np.nan], [np.nan, 0]]))


def test_dsatur_estimator():
    labels = DSaturColoring().fit_predict(c7())
    A = c7()
    assert all(labels[i] != labels[j] for i, j in zip(*np.nonzero(A)))
    assert DSaturColoring().fit(c7()).n_colors_ == 3


def test_exact_estimator_params_and_clone():
    est = ExactColoring(budget=5)
    assert est.get_params() == {"budget": 5, "cap": None}
    est2 = clone(est).set_params(budget=3)
    assert est2.budget == 3 and est.budget == 5
    est2.fit(sing_graph(RingSpec.field(3)))
    assert est2.chromatic_number_ == 6 and est2.lower_bound_ == est2.upper_bound_ == 6
    with pytest.raises(ValueError):
        ExactColoring(budget=0).fit(c7())


def test_max_clique_and_spectrum():
    assert MaxClique().fit(Graph.complete(5).adjacency_matrix()).clique_number_ == 5
    s = AdjacencySpectrum().fit(Graph.complete(5).adjacency_matrix())
    assert s.hoffman_bound_ == pytest.approx(5) and s.sarnak_bound_ == pytest.approx(4)
    assert s.transform()[0] == pytest.approx(4)
    empty = AdjacencySpectrum().fit(np.zeros((3, 3)))
    assert empty.hoffman_bound_ == 1.0 and empty.sarnak_bound_ is None

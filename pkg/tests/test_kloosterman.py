import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cayleychi.cayley import connectivity_bipartiteness
from cayleychi.errors import BadModulus
from cayleychi.kloosterman import (
    embedding_check,
    hyperbola_graph,
    hyperbola_spectrum,
    klo_sl_bound,
    kloosterman,
    kloosterman_csv,
    kloosterman_table,
    nontrivial_bound,
    weil_budget,
    weil_check,
    weil_sweep,
)
from cayleychi.rings import RingSpec
from cayleychi.spectral import eig_dense, hoffman_bound, sarnak_bound

MODULI = [5, 7, 25, 49, 125]


def kl_oracle(u, v, m):
    return sum(cmath.exp(2j * math.pi * ((u * x + v * pow(x, -1, m)) % m) / m)
               for x in range(1, m) if math.gcd(x, m) == 1)


def test_examples():
    assert kloosterman(0, 0, 25).value == pytest.approx(20)
    assert kloosterman(1, 0, 5).value == pytest.approx(-1)
    assert kloosterman(1, 1, 5).value == pytest.approx(2 + 2 * math.cos(4 * math.pi / 5), abs=1e-12)
    assert kloosterman(1, 1, 5).value == pytest.approx(0.3819660, abs=1e-7)


def test_weil_examples():
    r = weil_check(1, 1, 5, 1)
    assert r["holds"] and r["bound"] == pytest.approx(2 * math.sqrt(5))
    r = weil_check(5, 5, 5, 2)
    assert r["holds"] and r["bound"] == pytest.approx(2 * math.sqrt(5) * 5)


@pytest.mark.parametrize("m", MODULI)
def test_sweep(m):
    r = weil_sweep(m)
    assert r["violations"] == 0 and r["symmetric"] and r["pairs"] == m * m


@given(st.sampled_from([5, 7, 9, 25, 27, 49]), st.integers(0, 10**6), st.integers(0, 10**6))
def test_against_oracle(m, u, v):
    z = kl_oracle(u, v, m)
    assert abs(z.imag) < 1e-9
    assert kloosterman(u, v, m).value == pytest.approx(z.real, abs=1e-9)


@pytest.mark.parametrize("m", [5, 25, 27])
def test_table_matches_pointwise(m):
    T = kloosterman_table(m)
    for u in range(0, m, 3):
        for v in range(0, m, 4):
            assert T[u, v] == pytest.approx(kl_oracle(u, v, m).real, abs=1e-9)


def test_bad_modulus():
    for m in (12, 8, 1, 15):
        with pytest.raises(BadModulus):
            kloosterman(1, 1, m)


def test_value_record():
    kl = kloosterman(5, 10, 25)
    assert kl.weil_budget == pytest.approx(weil_budget(5, 10, 25)) == pytest.approx(2 * math.sqrt(5) * 5)
    d = kl.to_dict()
    assert set(d) == {"u", "v", "m", "value", "weil_ratio"}


def test_csv_export():
    lines = kloosterman_csv(5).splitlines()
    assert lines[0] == "u,v,m,value,weil_ratio"
    assert len(lines) == 26
    assert lines[1].startswith("0,0,5,4,")


# --- hyperbola graph --------------------------------------------------------

@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (5, 2)])
def test_spectrum_equals_dense(p, n):
    g = hyperbola_graph(RingSpec.modular(p, n))
    assert hyperbola_spectrum(p, n).matches(eig_dense(g), 1e-8)


@pytest.mark.parametrize("p,n", [(5, 1), (7, 1), (11, 1), (5, 2), (7, 2), (5, 3)])
def test_spectrum_properties(p, n):
    spec = hyperbola_spectrum(p, n)
    m = p**n
    degree = m - m // p
    assert spec.max == pytest.approx(degree) and spec.entries[0][1] == 1
    assert spec.min > -degree + 1e-6
    assert spec.total == m * m
    assert abs(spec.trace()) < 1e-6 * m * m
    assert max(abs(v) for v in spec.values[1:]) <= nontrivial_bound(p, n) + 1e-9


def test_hyperbola_loop_free_and_connected():
    for p, n in [(5, 1), (5, 2), (7, 1)]:
        g = hyperbola_graph(RingSpec.modular(p, n))
        assert not g.adjacency_matrix().diagonal().any()
        c = connectivity_bipartiteness(g)
        assert c.connected and not c.bipartite


def test_hyperbola_spectrum_needs_p5():
    with pytest.raises(BadModulus):
        hyperbola_spectrum(3, 1)


def test_bounds_on_h_z5():
    spec = hyperbola_spectrum(5, 1)
    golden = 1 + math.sqrt(5)
    assert hoffman_bound(spec) == pytest.approx(1 + 4 / golden)
    assert sarnak_bound(spec) == pytest.approx(4 / golden)


@pytest.mark.parametrize("p,n", [(5, 1), (5, 2), (7, 1), (5, 3), (11, 1)])
def test_klo_sl_bound(p, n):
    value = klo_sl_bound(p, n)
    assert value >= math.sqrt(p) / 4
    m = p**n
    assert value >= (m - m // p) / (2 * p ** (n - 0.5)) - 1e-12


def test_klo_sl_bound_value():
    assert klo_sl_bound(5, 1) == pytest.approx(4 / (1 + math.sqrt(5)))


@pytest.mark.parametrize("ring", [RingSpec.modular(5, 1), RingSpec.modular(7, 1), RingSpec.modular(5, 2)], ids=str)
def test_embedding(ring):
    r = embedding_check(ring)
    assert r["injective"] and r["determinant_one"] and r["isomorphic"] and r["mismatched_pairs"] == 0

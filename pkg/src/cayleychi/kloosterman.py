"""Kloosterman sums, the Estermann-Weil bound and the hyperbola graph.

H(Z/m) = Cay((Z/m)^2, {(x, x*)}) is abelian, so its eigenvalues are the
character sums over the connection set, which are exactly Kl(u, v, m) for
(u, v) in (Z/m)^2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .cayley import AdditiveGroup, CayleyGraph, cayley_build, group_set, induced_subgraph, sing_graph
from .errors import BadModulus
from .matrices import batch_det, embed_a_codes, encode
from .rings import RingSpec, prime_power
from .spectral import Spectrum, sarnak_bound

IMAG_TOL = 1e-9
WEIL_SLACK = 1e-6


@dataclass(frozen=True)
class KloostermanValue:
    u: int
    v: int
    m: int
    value: float

    @property
    def weil_budget(self) -> float:
        return weil_budget(self.u, self.v, self.m)

    @property
    def weil_ratio(self) -> float:
        return abs(self.value) / self.weil_budget

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "m": self.m, "value": float(f"{self.value:.12g}"),
                "weil_ratio": float(f"{self.weil_ratio:.12g}")}


def _check_modulus(m: int) -> tuple[int, int]:
    pk = prime_power(int(m))
    if pk is None or pk[0] < 3:
        raise BadModulus(f"modulus {m} is not a power of an odd prime")
    return pk


def weil_budget(u: int, v: int, m: int) -> float:
    p, n = _check_modulus(m)
    return 2.0 * math.sqrt(math.gcd(u % m, v % m, m)) * p ** (n / 2)


def _unit_inverses(m: int) -> tuple[np.ndarray, np.ndarray]:
    units = np.array([x for x in range(1, m) if math.gcd(x, m) == 1], dtype=np.int64)
    return units, np.array([pow(int(x), -1, m) for x in units], dtype=np.int64)


def _real(z: np.ndarray, m: int) -> np.ndarray:
    worst = float(np.abs(z.imag).max(initial=0.0))
    if worst > IMAG_TOL:
        raise ArithmeticError(f"Kloosterman sum mod {m} has imaginary part {worst:.3g}")
    return z.real


def kloosterman(u: int, v: int, m: int) -> KloostermanValue:
    """Kl(u, v, m) by direct summation over the units mod m."""
    _check_modulus(m)
    x, xs = _unit_inverses(m)
    z = np.exp(2j * np.pi * ((u * x + v * xs) % m) / m).sum()
    return KloostermanValue(u % m, v % m, m, float(_real(np.array([z]), m)[0]))


def _complex_table(m: int) -> np.ndarray:
    _check_modulus(m)
    x, xs = _unit_inverses(m)
    r = np.arange(m)
    E = np.exp(2j * np.pi * ((r[:, None] * x[None, :]) % m) / m)
    F = np.exp(2j * np.pi * ((r[:, None] * xs[None, :]) % m) / m)
    return E @ F.T


def kloosterman_table(m: int) -> np.ndarray:
    """All Kl(u, v, m) as an m x m real array indexed [u, v]."""
    return _real(_complex_table(m), m)


def weil_check(u: int, v: int, p: int, n: int) -> dict:
    m = p**n
    kl = kloosterman(u, v, m)
    bound = kl.weil_budget
    return {"holds": abs(kl.value) <= bound + WEIL_SLACK, "ratio": abs(kl.value) / bound,
            "value": kl.value, "bound": bound}


def weil_sweep(m: int) -> dict:
    """Exhaustive Estermann-Weil check over every (u, v) mod m."""
    p, n = _check_modulus(m)
    z = _complex_table(m)
    max_imag = float(np.abs(z.imag).max())
    table = _real(z, m)
    r = np.arange(m)
    g = np.gcd(np.gcd(r[:, None], r[None, :]), m)
    budget = 2.0 * np.sqrt(g) * p ** (n / 2)
    ratio = np.abs(table) / budget
    bad = np.argwhere(np.abs(table) > budget + WEIL_SLACK)
    return {"m": m, "pairs": m * m, "violations": len(bad), "max_ratio": float(ratio.max()), "max_imag": max_imag,
            "symmetric": bool(np.allclose(table, table.T, atol=1e-9))}


def kloosterman_csv(m: int) -> str:
    table = kloosterman_table(m)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["u", "v", "m", "value", "weil_ratio"])
    for u in range(m):
        for v in range(m):
            val = float(table[u, v])
            w.writerow([u, v, m, f"{val:.12g}", f"{abs(val) / weil_budget(u, v, m):.12g}"])
    return buf.getvalue()


# --- hyperbola graph --------------------------------------------------------

def hyperbola_set(ring: RingSpec) -> np.ndarray:
    units = np.flatnonzero(ring.unit_mask)
    return np.stack([units, ring.inv_table[units]], axis=1)


def hyperbola_graph(ring: RingSpec, *, cap: int | None = None, materialize: bool | None = None) -> CayleyGraph:
    """H(R): vertices R^2, (a,b) ~ (c,d) iff (c-a)(d-b) = 1."""
    group = AdditiveGroup(ring, 2)
    S = group_set(group, hyperbola_set(ring), kind="hyperbola")
    return cayley_build(group, S, cap=cap, materialize=materialize, name=f"H({ring})")


def hyperbola_spectrum(p: int, n: int) -> Spectrum:
    """Spectrum of H(Z/p^n) as the multiset of Kloosterman sums."""
    if p < 5:
        raise BadModulus("hyperbola spectrum needs p >= 5 (connectivity)")
    return Spectrum.from_values(kloosterman_table(p**n).ravel())


def nontrivial_bound(p: int, n: int) -> float:
    """2 p^(n - 1/2): the cap on every non-degree eigenvalue of H(Z/p^n)."""
    return 2.0 * p ** (n - 0.5)


def klo_sl_bound(p: int, n: int) -> float:
    """Sarnak bound of H(Z/p^n); a lower bound for chi(Sing_2(Z/p^n))."""
    m = p**n
    spec = hyperbola_spectrum(p, n)
    value = float(sarnak_bound(spec, degree=m - m // p))
    assert value >= math.sqrt(p) / 4, (p, n, value)
    return value


def embedding_check(ring: RingSpec) -> dict:
    """(x, y) -> a_{x,y} is injective into SL_2(R), and H(R) is isomorphic to
    the subgraph of Sing_2(R) it induces, checked on every vertex pair."""
    if ring.p == 2:
        raise BadModulus("2 must be a unit")
    H = hyperbola_graph(ring)
    xs, ys = H.vertices[:, 0], H.vertices[:, 1]
    A = embed_a_codes(ring, xs, ys)
    keys = encode(ring, A)
    injective = len(np.unique(keys)) == len(keys)
    in_sl = bool((batch_det(ring, A) == ring.one).all())
    S = sing_graph(ring, materialize=False, cap=0)
    induced = induced_subgraph(S, A).adjacency_matrix()
    direct = H.adjacency_matrix()
    return {"ring": str(ring), "vertices": H.n_vertices, "pairs": H.n_vertices * (H.n_vertices - 1) // 2,
            "injective": injective, "determinant_one": in_sl,
            "mismatched_pairs": int(np.triu(induced != direct, 1).sum()),
            "isomorphic": bool((induced == direct).all())}

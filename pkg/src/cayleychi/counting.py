"""Point counts of the rank varieties and a brute-force Gowers mixing check."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .cayley import MatrixGroup
from .errors import CapExceeded
from .matrices import batch_matmul, encode, rank_le_set, sl_enumerate, sl_order
from .rings import RingSpec

SLOPE_TOL = 0.35
MIXING_CAP = 400


@dataclass(frozen=True)
class CountReport:
    n: int
    ell: int
    q: int
    count: int
    group_order: int
    dim: int            # d = n^2 - 1
    codim: int          # m = ell^2
    rank: int           # r = n - 1
    expected_exponent: int
    observed_exponent: float

    @property
    def deviation(self) -> float:
        return abs(self.observed_exponent - self.expected_exponent)

    @property
    def ratio(self) -> float:
        """count / q^(d - m); reported only, never turned into a constant."""
        return self.count / self.q**self.expected_exponent

    def within(self, tol: float = SLOPE_TOL) -> bool:
        return self.deviation <= tol

    def to_dict(self) -> dict:
        d = asdict(self)
        d["observed_exponent"] = float(f"{self.observed_exponent:.12g}")
        d["ratio"] = float(f"{self.ratio:.12g}")
        return d


def count_rank_variety(n: int, ell: int, q: int, cap: int | None = None) -> CountReport:
    """#{x in SL_n(F_q) : rank(x + I) <= n - ell}, by enumeration."""
    if not 1 <= ell < n:
        raise ValueError("the slope check needs 1 <= ell < n")
    ring = RingSpec.field(q)
    count = len(rank_le_set(n, ell, ring, cap=cap))
    return CountReport(
        n=n, ell=ell, q=q, count=count, group_order=sl_order(n, ring),
        dim=n * n - 1, codim=ell * ell, rank=n - 1,
        expected_exponent=n * n - 1 - ell * ell,
        observed_exponent=math.log(count, q) if count else 0.0,
    )


# --- mixing -----------------------------------------------------------------

def multiplication_table(group: MatrixGroup, cap: int = MIXING_CAP) -> np.ndarray:
    """Cayley table of a matrix group, indices in canonical order."""
    if group.order > cap:
        raise CapExceeded(f"multiplication table of {group!r}", group.order, cap)
    elems = sl_enumerate(group.n, group.ring)
    keys = encode(group.ring, elems)
    N = len(elems)
    prod = batch_matmul(group.ring, elems[:, None], elems[None, :])
    return np.searchsorted(keys, encode(group.ring, prod)).reshape(N, N)


def minimal_size(order: int, D: int) -> int | None:
    """Smallest k with k^3 > order^3 / D, or None when k would exceed the order."""
    k = int(order / D ** (1 / 3))
    while k**3 * D <= order**3:
        k += 1
    while k > 1 and (k - 1) ** 3 * D > order**3:
        k -= 1
    return k if k <= order else None


def product_set(table: np.ndarray, A, B) -> np.ndarray:
    hit = np.zeros(len(table), dtype=bool)
    hit[table[np.ix_(np.asarray(A), np.asarray(B))].ravel()] = True
    return hit


def mixes(table: np.ndarray, A, B, C) -> bool:
    """AB meets C."""
    return bool(product_set(table, A, B)[np.asarray(C)].any())


def gowers_mixing_check(table, D: int, trials: int = 100, seed: int = 0, adversarial: bool = False) -> dict:
    """Sample A, B, C with |A||B||C| > |G|^3/D and check that AB meets C.

    ``table`` is a Cayley table or a :class:`MatrixGroup`.  With
    ``adversarial`` the set C is drawn from the complement of AB whenever that
    complement is large enough, which is the only way a violation can occur.
    """
    if isinstance(table, MatrixGroup):
        table = multiplication_table(table)
    table = np.asarray(table)
    N = len(table)
    if D < 1:
        raise ValueError("D must be >= 1")
    k = minimal_size(N, D)
    report = {"group_order": N, "D": D, "set_size": k, "seed": seed, "adversarial": adversarial,
              "trials_requested": trials, "trials": 0, "violations": 0, "skipped": 0}
    if k is None:
        report["note"] = "hypothesis unsatisfiable: |A||B||C| > |G|^3/D needs sets larger than G"
        return report
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        A = rng.choice(N, k, replace=False)
        B = rng.choice(N, k, replace=False)
        hit = product_set(table, A, B)
        if adversarial:
            outside = np.flatnonzero(~hit)
            if len(outside) < k:
                report["skipped"] += 1
                report["trials"] += 1
                continue
            C = rng.choice(outside, k, replace=False)
        else:
            C = rng.choice(N, k, replace=False)
        report["trials"] += 1
        if not hit[C].any():
            report["violations"] += 1
    return report


def report_json(report) -> str:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(data, sort_keys=True)

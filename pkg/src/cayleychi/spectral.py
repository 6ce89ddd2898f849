"""Adjacency spectra and spectral chromatic bounds.

Two independent routes to the spectrum of Sing_2(F_q):

* :func:`eig_dense` -- numerical eigensolve of the adjacency matrix (cyclic
  Jacobi with a round-robin rotation schedule, or LAPACK for large graphs);
* :func:`sing2_spectrum_exact` -- character sums over the three classes of
  trace -2 elements, evaluated in exact arithmetic over Q(sqrt(eps*q)).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, Disconnected, EmptyGraph, NoConvergence
from .rings import epsilon, prime_power

EXACT, QUADRATIC, FLOAT = "exact", "quadratic", "float"

CLUSTER_TOL = 1e-6
JACOBI_TOL = 1e-9
JACOBI_MAX_SWEEPS = 100
# pure-numpy Jacobi costs ~n^3 memory traffic per sweep; beyond this use LAPACK
JACOBI_AUTO_CAP = 128


# --- exact quadratic numbers ------------------------------------------------

@dataclass(frozen=True)
class QuadraticSurd:
    """``rational + irrational * sqrt(radicand)`` with Fraction coefficients.

    The square root is kept symbolic even when the radicand is a perfect
    square, so cancellations are checked coefficient by coefficient.
    """

    rational: Fraction
    irrational: Fraction
    radicand: int

    @classmethod
    def half(cls, a: int, b: int, radicand: int) -> "QuadraticSurd":
        """(a + b*sqrt(radicand)) / 2."""
        return cls(Fraction(a, 2), Fraction(b, 2), radicand)

    @classmethod
    def integer(cls, a: int, radicand: int) -> "QuadraticSurd":
        return cls(Fraction(a), Fraction(0), radicand)

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            if other.radicand != self.radicand:
                raise ValueError("mismatched radicands")
            return other
        return QuadraticSurd(Fraction(other), Fraction(0), self.radicand)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticSurd(self.rational + o.rational, self.irrational + o.irrational, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.rational, -self.irrational, self.radicand)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadraticSurd(
            self.rational * o.rational + self.irrational * o.irrational * self.radicand,
            self.rational * o.irrational + self.irrational * o.rational,
            self.radicand,
        )

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = Fraction(k)
        return QuadraticSurd(self.rational / k, self.irrational / k, self.radicand)

    @property
    def is_rational(self) -> bool:
        return self.irrational == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} has a nonzero sqrt({self.radicand}) part")
        return self.rational

    def __float__(self):
        if self.radicand < 0 and self.irrational:
            raise ValueError("value is not real")
        return float(self.rational) + float(self.irrational) * math.sqrt(max(self.radicand, 0))

    def __str__(self):
        if self.is_rational:
            return str(self.rational)
        return f"{self.rational} + {self.irrational}*sqrt({self.radicand})"


# --- spectra ----------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicities, sorted by decreasing value."""

    entries: tuple
    kind: str = FLOAT

    def __post_init__(self):
        entries = tuple(sorted(((v, int(m)) for v, m in self.entries), key=lambda e: -float(e[0])))
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_values(cls, values: Iterable[float], tol: float = CLUSTER_TOL) -> "Spectrum":
        """Cluster floating eigenvalues: neighbours within ``tol`` merge."""
        vals = np.sort(np.asarray(list(values), dtype=float))[::-1]
        entries, start = [], 0
        for i in range(1, len(vals) + 1):
            if i == len(vals) or vals[i - 1] - vals[i] > tol:
                entries.append((float(vals[start:i].mean()), i - start))
                start = i
        return cls(tuple(entries), FLOAT)

    @classmethod
    def from_counts(cls, counts: dict, kind: str = EXACT) -> "Spectrum":
        return cls(tuple((v, m) for v, m in counts.items() if m), kind)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def values(self) -> list:
        return [v for v, _ in self.entries]

    @property
    def max(self):
        return self.entries[0][0]

    @property
    def min(self):
        return self.entries[-1][0]

    def expanded(self) -> np.ndarray:
        return np.repeat([float(v) for v, _ in self.entries], [m for _, m in self.entries])

    def trace(self):
        return sum(v * m for v, m in self.entries)

    def multiplicity(self, value, tol: float = CLUSTER_TOL) -> int:
        return sum(m for v, m in self.entries if abs(float(v) - float(value)) <= tol)

    def rounded(self, tol: float = CLUSTER_TOL) -> "Spectrum":
        """Exact-integer spectrum, provided every value is within ``tol`` of an integer."""
        counts: dict[int, int] = {}
        for v, m in self.entries:
            r = round(float(v))
            if abs(float(v) - r) > tol:
                raise ValueError(f"eigenvalue {v} is not within {tol} of an integer")
            counts[r] = counts.get(r, 0) + m
        return Spectrum.from_counts(counts, EXACT)

    def matches(self, other: "Spectrum", tol: float = CLUSTER_TOL) -> bool:
        a, b = self.expanded(), other.expanded()
        return len(a) == len(b) and bool(np.all(np.abs(np.sort(a) - np.sort(b)) <= tol))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "total": self.total,
            "entries": [{"value": _jsonable(v), "multiplicity": m} for v, m in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        data = json.loads(text)
        kind = data["kind"]
        conv = (lambda v: Fraction(v) if isinstance(v, str) else int(v)) if kind == EXACT else float
        return cls(tuple((conv(e["value"]), e["multiplicity"]) for e in data["entries"]), kind)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["value", "multiplicity"])
        for v, m in self.entries:
            writer.writerow([_jsonable(v), m])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, kind: str = FLOAT) -> "Spectrum":
        rows = list(csv.DictReader(io.StringIO(text)))
        conv = (lambda s: Fraction(s)) if kind == EXACT else float
        return cls(tuple((conv(r["value"]), int(r["multiplicity"])) for r in rows), kind)


def _jsonable(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else str(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(f"{float(v):.12g}")


# --- dense eigensolver ------------------------------------------------------

def _round_robin(m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """m - 1 rounds of m/2 disjoint pairs covering every pair once (m even)."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p = np.array(players[: m // 2])
        q = np.array(players[m // 2:][::-1])
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(matrix, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs so one round is a single vectorised update.  Stops when
    the off-diagonal Frobenius norm is at most ``tol * ||A||_F``.
    """
    A = np.array(matrix, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or not np.allclose(A, A.T):
        raise ValueError("expected a square symmetric matrix")
    if n <= 1:
        return A.diagonal().copy()
    m = n + (n % 2)
    if m != n:
        # dummy row/column, decoupled from the rest
        A = np.pad(A, ((0, 1), (0, 1)))
    scale = np.linalg.norm(A)
    if scale == 0:
        return np.zeros(n)
    rounds = _round_robin(m)

    def off_norm():
        off = A.copy()
        np.fill_diagonal(off, 0.0)
        return np.linalg.norm(off)

    for _ in range(max_sweeps):
        if off_norm() <= tol * scale:
            return np.sort(np.diag(A)[:n] if m == n else np.delete(np.diag(A), n))[::-1]
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 1e-300
            theta = np.where(active, (A[Q, Q] - A[P, P]) / (2 * np.where(active, apq, 1.0)), 0.0)
            # t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)), overflow-safe for huge theta
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(big, 0.5 / np.where(big, theta, 1.0), np.sign(th) / (np.abs(th) + np.sqrt(th * th + 1)))
            t = np.where(active & (theta == 0), 1.0, np.where(active, t, 0.0))
            c = 1 / np.sqrt(t * t + 1)
            s = t * c
            rp, rq = A[P], A[Q]
            A[P] = c[:, None] * rp - s[:, None] * rq
            A[Q] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, P], A[:, Q]
            A[:, P] = cp * c - cq * s
            A[:, Q] = cp * s + cq * c
    raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")


def eig_dense(g, method: str = "auto", *, dense_cap: int | None = None,
              tol: float = JACOBI_TOL, cluster_tol: float = CLUSTER_TOL) -> Spectrum:
    """Floating spectrum of a graph's adjacency matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    :data:`JACOBI_AUTO_CAP` vertices).
    """
    from .cayley import DEFAULT_DENSE_CAP

    cap = DEFAULT_DENSE_CAP if dense_cap is None else dense_cap
    if g.n_vertices > cap:
        raise CapExceeded(f"dense spectrum of {getattr(g, 'name', 'graph')}", g.n_vertices, cap)
    A = g.adjacency_matrix(cap).astype(float)
    if method == "auto":
        method = "jacobi" if g.n_vertices <= JACOBI_AUTO_CAP else "lapack"
    if method == "jacobi":
        vals = jacobi_eigenvalues(A, tol=tol)
    elif method == "lapack":
        vals = np.linalg.eigvalsh(A)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Spectrum.from_values(vals, cluster_tol)


# --- SL_2(F_q) characters ---------------------------------------------------

@dataclass(frozen=True)
class CharacterRow:
    """An irreducible character of SL_2(F_q) at -I, T1 and T2."""

    name: str
    index: int | None
    dimension: int
    at_minus_i: QuadraticSurd
    at_t1: QuadraticSurd
    at_t2: QuadraticSurd

    @property
    def label(self) -> str:
        return self.name if self.index is None else f"{self.name}_{self.index}"


def sl2_character_table(q: int) -> list[CharacterRow]:
    """Trivial, psi, chi_i, theta_j, xi_1, xi_2, eta_1, eta_2 for odd q.

    Values live in Q(sqrt(eps*q)) with eps = (-1)^((q-1)/2).
    """
    if q % 2 == 0 or prime_power(q) is None:
        raise ValueError("q must be an odd prime power")
    eps = epsilon(q)
    D = eps * q

    def z(a):
        return QuadraticSurd.integer(a, D)

    def h(a, b):
        return QuadraticSurd.half(a, b, D)

    rows = [CharacterRow("triv", None, 1, z(1), z(1), z(1)), CharacterRow("psi", None, q, z(q), z(0), z(0))]
    for i in range(1, (q - 3) // 2 + 1):
        s = (-1) ** i
        rows.append(CharacterRow("chi", i, q + 1, z(s * (q + 1)), z(s), z(s)))
    for j in range(1, (q - 1) // 2 + 1):
        s = (-1) ** j
        rows.append(CharacterRow("theta", j, q - 1, z(s * (q - 1)), z(-s), z(-s)))
    plus, minus = h(eps, eps), h(eps, -eps)
    rows += [
        CharacterRow("xi", 1, (q + 1) // 2, h(eps * (q + 1), 0), plus, minus),
        CharacterRow("xi", 2, (q + 1) // 2, h(eps * (q + 1), 0), minus, plus),
        CharacterRow("eta", 1, (q - 1) // 2, h(-eps * (q - 1), 0), minus, plus),
        CharacterRow("eta", 2, (q - 1) // 2, h(-eps * (q - 1), 0), plus, minus),
    ]
    return rows


def character_eigenvalue(row: CharacterRow, q: int) -> QuadraticSurd:
    """(1/dim) * sum over the trace -2 set: one -I and (q^2-1)/2 of each T_i."""
    half_class = (q * q - 1) // 2
    total = row.at_minus_i + (row.at_t1 + row.at_t2) * half_class
    return total / row.dimension


def sing2_spectrum_exact(q: int) -> Spectrum:
    """Spectrum of Sing_2(F_q) from the character table; multiplicity dim^2."""
    counts: dict[int, int] = {}
    for row in sl2_character_table(q):
        value = character_eigenvalue(row, q).to_fraction()
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral eigenvalue {value} for {row.label}")
        counts[int(value)] = counts.get(int(value), 0) + row.dimension**2
    return Spectrum.from_counts(counts, EXACT)


# --- chromatic lower bounds -------------------------------------------------

def _num(v):
    return v if isinstance(v, (Fraction, int)) else float(v)


def hoffman_bound(spec: Spectrum):
    """1 - lambda_max / lambda_min (a Fraction for exact spectra)."""
    lo, hi = _num(spec.min), _num(spec.max)
    if float(lo) >= -CLUSTER_TOL:
        raise EmptyGraph("graph has no edges (lambda_min >= 0)")
    if spec.kind == EXACT:
        return 1 - Fraction(hi) / Fraction(lo)
    return 1 - float(hi) / float(lo)


def sarnak_bound(spec: Spectrum, degree=None):
    """degree / max(|lambda_1|, |lambda_min|) for a connected regular graph."""
    top, top_mult = spec.entries[0]
    degree = top if degree is None else degree
    if abs(float(top) - float(degree)) > CLUSTER_TOL:
        raise ValueError("largest eigenvalue differs from the degree; graph is not regular")
    if top_mult > 1:
        raise Disconnected("degree eigenvalue is not simple")
    rest = [v for v, _ in spec.entries[1:]]
    if not rest:
        raise EmptyGraph("single-vertex graph")
    worst = max(abs(_num(v)) for v in rest)
    if worst == 0:
        return math.inf
    if spec.kind == EXACT:
        return Fraction(degree) / Fraction(worst)
    return float(degree) / float(worst)


def quasirandom_bound(D: float, set_size: int, group_order: int) -> float:
    """sqrt(D |S| / |G|)."""
    if D <= 0 or set_size <= 0 or group_order <= 0:
        raise ValueError("all arguments must be positive")
    return math.sqrt(D * set_size / group_order)


def known_quasirandom_degree(n: int, q: int) -> int | None:
    """Minimal nontrivial representation degree where it is classically known.

    Only SL_2(F_q), q odd, is tabulated: (q - 1)/2.
    """
    if n == 2 and q % 2 == 1:
        return (q - 1) // 2
    return None

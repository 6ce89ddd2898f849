"""Matrices over :mod:`cayleychi.rings`, SL_n enumeration and connection sets.

Batches of n x n matrices are int arrays of shape ``(..., n, n)`` holding
element codes; the ``batch_*`` helpers broadcast over the leading axes.
Single matrices at API boundaries are :class:`GroupMatrix` values.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import AsymmetricSet, CapExceeded, NotAField, NotInSet
from .rings import RingElement, RingSpec, SQUARE, square_class

DEFAULT_ENUM_CAP = int(os.environ.get("CAYLEYCHI_ENUM_CAP", 20_000))

MINUS_I, CLASS_T1, CLASS_T2 = "minusI", "classT1", "classT2"


# --- batched arithmetic -----------------------------------------------------

def batch_matmul(ring: RingSpec, A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    n = A.shape[-1]
    out = np.empty(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
    mul, add = ring.mul_table, ring.add_table
    for i in range(n):
        for k in range(n):
            acc = mul[A[..., i, 0], B[..., 0, k]]
            for j in range(1, n):
                acc = add[acc, mul[A[..., i, j], B[..., j, k]]]
            out[..., i, k] = acc
    return out


def batch_add(ring: RingSpec, A, B) -> np.ndarray:
    return ring.add_table[np.asarray(A), np.asarray(B)]


def batch_det(ring: RingSpec, A) -> np.ndarray:
    A = np.asarray(A)
    n = A.shape[-1]
    mul, add, neg = ring.mul_table, ring.add_table, ring.neg_table
    total = np.zeros(A.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = A[..., 0, perm[0]]
        for i in range(1, n):
            term = mul[term, A[..., i, perm[i]]]
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        if inversions % 2:
            term = neg[term]
        total = add[total, term]
    return total


def batch_trace(ring: RingSpec, A) -> np.ndarray:
    A = np.asarray(A)
    acc = A[..., 0, 0]
    for i in range(1, A.shape[-1]):
        acc = ring.add_table[acc, A[..., i, i]]
    return acc


def batch_adjugate(ring: RingSpec, A) -> np.ndarray:
    A = np.asarray(A)
    n = A.shape[-1]
    if n == 1:
        return np.ones_like(A)
    adj = np.empty_like(A)
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            minor = batch_det(ring, A[..., rows, :][..., :, cols])
            adj[..., i, j] = minor if (i + j) % 2 == 0 else ring.neg_table[minor]
    return adj


def batch_inverse(ring: RingSpec, A) -> np.ndarray:
    """Inverse of unit-determinant matrices (adjugate scaled by det^-1)."""
    A = np.asarray(A)
    inv_det = ring.inv_table[batch_det(ring, A)]
    if np.any(inv_det < 0):
        raise NotInSet("matrix with non-unit determinant is not invertible")
    return ring.mul_table[batch_adjugate(ring, A), inv_det[..., None, None]]


def batch_rank(ring: RingSpec, A) -> np.ndarray:
    """Ranks over a field: rank <= k iff every (k+1)-minor vanishes."""
    ring.require_field()
    A = np.asarray(A)
    n = A.shape[-1]
    rank = np.full(A.shape[:-2], n, dtype=np.int64)
    undecided = np.ones(A.shape[:-2], dtype=bool)
    for k in range(n):
        all_zero = np.ones(A.shape[:-2], dtype=bool)
        for rows in itertools.combinations(range(n), k + 1):
            for cols in itertools.combinations(range(n), k + 1):
                sub = A[..., list(rows), :][..., :, list(cols)]
                all_zero &= batch_det(ring, sub) == 0
        newly = undecided & all_zero
        rank[newly] = k
        undecided &= ~all_zero
    return rank


def identity_codes(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def encode(ring: RingSpec, A) -> np.ndarray:
    """Integer keys whose ordering is row-major lexicographic entry order."""
    A = np.asarray(A)
    n = A.shape[-1]
    flat = A.reshape(A.shape[:-2] + (n * n,))
    weights = ring.size ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def decode(ring: RingSpec, n: int, keys) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    weights = ring.size ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return ((keys[..., None] // weights) % ring.size).reshape(keys.shape + (n, n))


# --- single matrices --------------------------------------------------------

@dataclass(frozen=True)
class GroupMatrix:
    """Dense row-major matrix of ring-element codes."""

    ring: RingSpec
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, ring: RingSpec, rows: Sequence[Sequence]) -> "GroupMatrix":
        coded = tuple(tuple(ring.code_of(x) for x in row) for row in rows)
        if any(len(r) != len(coded) for r in coded):
            raise ValueError("matrix must be square")
        return cls(ring, coded)

    @classmethod
    def from_array(cls, ring: RingSpec, arr) -> "GroupMatrix":
        return cls(ring, tuple(tuple(int(c) for c in row) for row in np.asarray(arr)))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "GroupMatrix":
        return cls.from_array(ring, identity_codes(n))

    @property
    def n(self) -> int:
        return len(self.rows)

    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def entry(self, i: int, j: int) -> RingElement:
        return self.ring.from_code(self.rows[i][j])

    def __matmul__(self, other: "GroupMatrix") -> "GroupMatrix":
        return GroupMatrix.from_array(self.ring, batch_matmul(self.ring, self.array(), other.array()))

    def __add__(self, other: "GroupMatrix") -> "GroupMatrix":
        return GroupMatrix.from_array(self.ring, batch_add(self.ring, self.array(), other.array()))

    def __neg__(self) -> "GroupMatrix":
        return GroupMatrix.from_array(self.ring, self.ring.neg_table[self.array()])

    def det(self) -> RingElement:
        return self.ring.from_code(int(batch_det(self.ring, self.array())))

    def trace(self) -> RingElement:
        return self.ring.from_code(int(batch_trace(self.ring, self.array())))

    def inverse(self) -> "GroupMatrix":
        return GroupMatrix.from_array(self.ring, batch_inverse(self.ring, self.array()))

    @property
    def key(self) -> int:
        return int(encode(self.ring, self.array()))

    def __repr__(self):
        body = "; ".join(" ".join(repr(self.entry(i, j)) for j in range(self.n)) for i in range(self.n))
        return f"GroupMatrix[{self.ring}]({body})"


def t1_matrix(ring: RingSpec) -> GroupMatrix:
    return GroupMatrix.of(ring, [[-1, 0], [-1, -1]])


def t2_matrix(ring: RingSpec) -> GroupMatrix:
    nu = ring.generator
    return GroupMatrix.of(ring, [[-1, 0], [ring.from_code(int(ring.neg_table[nu])), -1]])


# --- SL_n enumeration -------------------------------------------------------

def sl_order(n: int, ring: RingSpec) -> int:
    q = ring.p if ring.kind == "modular-ring" else ring.size
    order = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        order *= q**i - 1
    if ring.kind == "modular-ring":
        order *= ring.p ** ((ring.exponent - 1) * (n * n - 1))
    return order


def _filter_det_one(ring: RingSpec, candidates: np.ndarray) -> np.ndarray:
    return candidates[batch_det(ring, candidates) == ring.one]


def sl_enumerate(n: int, ring: RingSpec, cap: int | None = None) -> np.ndarray:
    """All of SL_n(ring) as a ``(N, n, n)`` code array in lexicographic order.

    Modular rings are built by lifting SL_n(F_p) one p-adic digit at a time.
    """
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    order = sl_order(n, ring)
    if order > cap:
        raise CapExceeded(f"|SL_{n}({ring})|", order, cap)
    if ring.kind != "modular-ring":
        total = ring.size ** (n * n)
        chunks = [
            _filter_det_one(ring, decode(ring, n, np.arange(start, min(start + (1 << 20), total))))
            for start in range(0, total, 1 << 20)
        ]
        out = np.concatenate(chunks)
    else:
        p = ring.p
        level = sl_enumerate(n, RingSpec.prime_field(p), cap=cap)
        offsets = decode(RingSpec.prime_field(p), n, np.arange(p ** (n * n)))
        for k in range(1, ring.exponent):
            sub = RingSpec.modular(p, k + 1)
            cand = (level[:, None] + p**k * offsets[None, :]).reshape(-1, n, n)
            level = _filter_det_one(sub, cand)
        out = level
    out = out[np.argsort(encode(ring, out), kind="stable")]
    assert len(out) == order, (len(out), order)
    return out


# --- connection sets --------------------------------------------------------

@dataclass(frozen=True)
class SymmetricSet:
    """Inverse-closed subset of a group, materialised and sorted by key.

    ``elements`` has shape ``(M, n, n)`` for matrix groups or ``(M, d)`` for
    additive groups; ``keys`` are the matching sorted integer keys.
    """

    kind: str
    elements: np.ndarray
    keys: np.ndarray
    contains_identity: bool
    params: dict = field(default_factory=dict)
    predicate: Callable | None = field(default=None, compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.keys)

    def __len__(self):
        return self.size

    def contains_keys(self, keys) -> np.ndarray:
        keys = np.asarray(keys)
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, len(self.keys) - 1)
        return self.keys[pos] == keys if len(self.keys) else np.zeros(keys.shape, bool)


def make_symmetric_set(kind: str, elements, encode_fn, inverse_fn, identity_key: int,
                       predicate=None, **params) -> SymmetricSet:
    """Sort, dedupe and validate S^-1 == S for any group given its key and inverse maps."""
    elements = np.asarray(elements, dtype=np.int64)
    keys, idx = np.unique(encode_fn(elements), return_index=True)
    elements = elements[idx]
    s = SymmetricSet(
        kind=kind,
        elements=elements,
        keys=keys,
        contains_identity=bool(np.isin(identity_key, keys)),
        params=params,
        predicate=predicate,
    )
    if len(keys) and not s.contains_keys(encode_fn(inverse_fn(elements))).all():
        raise AsymmetricSet(f"{kind} set is not closed under inversion")
    return s


def matrix_set(kind: str, ring: RingSpec, elements, predicate=None, **params) -> SymmetricSet:
    """Build a :class:`SymmetricSet` of SL_n matrices, checking S^-1 == S."""
    elements = np.asarray(elements, dtype=np.int64)
    n = elements.shape[-1]
    return make_symmetric_set(
        kind,
        elements,
        lambda A: encode(ring, A),
        lambda A: batch_inverse(ring, A),
        int(encode(ring, identity_codes(n))),
        predicate=predicate,
        ring=str(ring),
        n=n,
        **params,
    )


def eigen_neg1_set(ring: RingSpec) -> SymmetricSet:
    """{x in SL_2(ring) : tr x = -2}, enumerated without listing SL_2.

    With d = -2 - a, det x = 1 becomes b*c = -(a+1)^2.
    """
    if ring.p == 2:
        raise ValueError("2 must be invertible")
    size = ring.size
    bc = np.stack(np.meshgrid(np.arange(size), np.arange(size), indexing="ij"), -1).reshape(-1, 2)
    prod = ring.mul_table[bc[:, 0], bc[:, 1]]
    minus_two = ring.code_of(-2)
    found = []
    for a in range(size):
        a1 = int(ring.add_table[a, ring.one])
        target = int(ring.neg_table[ring.mul_table[a1, a1]])
        hit = bc[prod == target]
        d = int(ring.sub(minus_two, a))
        block = np.empty((len(hit), 2, 2), dtype=np.int64)
        block[:, 0, 0], block[:, 0, 1], block[:, 1, 0], block[:, 1, 1] = a, hit[:, 0], hit[:, 1], d
        found.append(block)

    def predicate(A):
        return (batch_trace(ring, A) == minus_two) & (batch_det(ring, A) == ring.one)

    return matrix_set("eigen-neg1", ring, np.concatenate(found), predicate=predicate)


def rank_le_set(n: int, ell: int, ring: RingSpec, cap: int | None = None) -> SymmetricSet:
    """{x in SL_n : rank(I + x) <= n - ell} over a field."""
    ring.require_field()
    if not 1 <= ell <= n:
        raise ValueError("need 1 <= ell <= n")
    group = sl_enumerate(n, ring, cap=cap)
    ident = identity_codes(n)

    def predicate(A):
        return batch_rank(ring, batch_add(ring, A, ident)) <= n - ell

    return matrix_set("rank-le", ring, group[predicate(group)], predicate=predicate, ell=ell)


def sing_set(n: int, ring: RingSpec, cap: int | None = None) -> SymmetricSet:
    """{x in SL_n : det(I + x) = 0}, the connection set of Sing_n(ring).

    For n = 2 this is the trace -2 set and is built without enumerating SL_2.
    """
    if n == 2:
        return eigen_neg1_set(ring)
    group = sl_enumerate(n, ring, cap=cap)
    ident = identity_codes(n)

    def predicate(A):
        return batch_det(ring, batch_add(ring, A, ident)) == 0

    return matrix_set("sing", ring, group[predicate(group)], predicate=predicate)


def explicit_set(ring: RingSpec, matrices: Sequence[GroupMatrix]) -> SymmetricSet:
    return matrix_set("explicit", ring, np.array([m.array() for m in matrices]))


# --- rank and classification ------------------------------------------------

def matrix_rank(m, ring: RingSpec | None = None) -> int:
    """Row-echelon rank by Gaussian elimination over a field."""
    if isinstance(m, GroupMatrix):
        ring, rows = m.ring, [list(r) for r in m.rows]
    else:
        if ring is None:
            raise ValueError("ring is required for raw matrices")
        rows = [[ring.code_of(x) for x in row] for row in m]
    if not ring.is_field:
        raise NotAField(f"rank over {ring} is not defined here")
    mul, neg, add, inv = ring.mul_table, ring.neg_table, ring.add_table, ring.inv_table
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        scale = int(inv[rows[rank][col]])
        rows[rank] = [int(mul[scale, x]) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = int(neg[rows[r][col]])
                rows[r] = [int(add[x, mul[factor, y]]) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def unipotent_class_of(x: GroupMatrix) -> str:
    """Conjugacy class of a trace -2 element of SL_2(F_q).

    x + I has rank <= 1.  Writing it as v w^T forces w = lam (v2, -v1), and
    the square class of lam is an SL_2-conjugation invariant; T1 has lam = -1.
    """
    ring = x.ring
    ring.require_field()
    if x.n != 2 or x.det().code != ring.one or x.trace().code != ring.code_of(-2):
        raise NotInSet("expected an element of SL_2 with trace -2")
    m = (x + GroupMatrix.identity(ring, 2)).array()
    if not m.any():
        return MINUS_I
    j = int(np.flatnonzero(m.any(axis=0))[0])
    v = m[:, j]
    i = int(np.flatnonzero(v)[0])
    inv_vi = int(ring.inv_table[v[i]])
    w = ring.mul_table[m[i], inv_vi]
    if v[1]:
        lam = int(ring.mul_table[w[0], ring.inv_table[v[1]]])
    else:
        lam = int(ring.neg_table[ring.mul_table[w[1], ring.inv_table[v[0]]]])
    return CLASS_T1 if square_class(ring, ring.from_code(int(ring.neg_table[lam]))) == SQUARE else CLASS_T2


# --- the hyperbola embedding ------------------------------------------------

def embed_a_codes(ring: RingSpec, xs, ys) -> np.ndarray:
    """Batch of a_{x,y} = [[1 - 4xy, -2x], [2y, 1]]."""
    xs, ys = np.asarray(xs), np.asarray(ys)
    mul, sub = ring.mul_table, ring.sub
    two, four = ring.code_of(2), ring.code_of(4)
    out = np.empty(np.broadcast_shapes(xs.shape, ys.shape) + (2, 2), dtype=np.int64)
    out[..., 0, 0] = sub(ring.one, mul[four, mul[xs, ys]])
    out[..., 0, 1] = ring.neg_table[mul[two, xs]]
    out[..., 1, 0] = mul[two, ys]
    out[..., 1, 1] = ring.one
    return out


def embed_a(x: RingElement, y: RingElement) -> GroupMatrix:
    if x.ring != y.ring:
        raise ValueError("x and y must live in the same ring")
    if x.ring.p == 2:
        raise ValueError("2 must be invertible")
    return GroupMatrix.from_array(x.ring, embed_a_codes(x.ring, x.code, y.code))

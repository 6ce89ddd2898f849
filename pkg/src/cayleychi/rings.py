"""Finite fields F_q (q = p^f) and residue rings Z/p^nZ.

Elements are handled in two forms.  :class:`RingElement` is the small
immutable value type used at API boundaries; internally every element is an
integer *code* in ``[0, size)`` and arithmetic is done by lookup in the
ring's addition/multiplication tables, so batches of elements can be pushed
through numpy fancy indexing.

Codes are canonical representatives: the residue itself for prime fields and
modular rings, and ``c0 + c1*p + ... + c_{f-1}*p^(f-1)`` for extension
fields with coefficients of the reduction polynomial basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import NonUnit, NotAField

PRIME_FIELD = "prime-field"
EXTENSION_FIELD = "extension-field"
MODULAR_RING = "modular-ring"

MAX_EXTENSION_DEGREE = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(m: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``m == p**k`` and ``k >= 1``, or None."""
    if m < 2:
        return None
    p = next(d for d in itertools.count(2) if m % d == 0)
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


# --- polynomials over F_p, coefficient lists low degree first ---------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    m = _poly_trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _poly_trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p of a monic polynomial of degree <= 4.

    Degrees 2 and 3 only need a root test; degree 4 additionally rules out
    every monic quadratic factor.
    """
    f = len(poly) - 1
    if f < 1 or poly[-1] % p != 1:
        raise ValueError("expected a monic polynomial of positive degree")
    if f == 1:
        return True
    for x in range(p):
        if sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p == 0:
            return False
    if f <= 3:
        return True
    for d in range(2, f // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``f`` with the smallest lower-coefficient code."""
    for code in range(p**f):
        low = [(code // p**i) % p for i in range(f)]
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("unreachable: irreducibles exist in every degree")


@dataclass(frozen=True)
class RingSpec:
    """A finite ring F_p, F_{p^f} or Z/p^nZ.

    ``exponent`` is ``f`` for extension fields and ``n`` for modular rings
    (1 for prime fields).  Use the ``prime_field``/``extension_field``/
    ``modular``/``field`` constructors rather than calling this directly.
    """

    kind: str
    p: int
    exponent: int = 1
    modulus_poly: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p == 2 and self.kind != PRIME_FIELD:
            raise ValueError("characteristic 2 is only supported as the prime field F_2")
        if self.exponent < 1:
            raise ValueError("exponent must be >= 1")
        if self.kind == PRIME_FIELD:
            if self.exponent != 1:
                raise ValueError("prime field has exponent 1")
        elif self.kind == EXTENSION_FIELD:
            if not 2 <= self.exponent <= MAX_EXTENSION_DEGREE:
                raise ValueError(f"extension degree must be in [2, {MAX_EXTENSION_DEGREE}]")
            poly = self.modulus_poly
            if poly is None:
                object.__setattr__(self, "modulus_poly", smallest_irreducible(self.p, self.exponent))
            else:
                poly = tuple(int(c) % self.p for c in poly)
                if len(poly) != self.exponent + 1 or not is_irreducible(poly, self.p):
                    raise ValueError(f"{poly} is not a monic irreducible of degree {self.exponent}")
                object.__setattr__(self, "modulus_poly", poly)
        elif self.kind != MODULAR_RING:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    # -- constructors --------------------------------------------------------
    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls(PRIME_FIELD, p)

    @classmethod
    def extension_field(cls, p: int, f: int, modulus_poly=None) -> "RingSpec":
        if f == 1:
            return cls.prime_field(p)
        return cls(EXTENSION_FIELD, p, f, modulus_poly)

    @classmethod
    def modular(cls, p: int, n: int) -> "RingSpec":
        """Z/p^nZ; for n == 1 this is the prime field."""
        if n == 1:
            return cls.prime_field(p)
        return cls(MODULAR_RING, p, n)

    @classmethod
    def field(cls, q: int) -> "RingSpec":
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"{q} is not a prime power")
        return cls.extension_field(*pk)

    # -- basic facts ---------------------------------------------------------
    @property
    def size(self) -> int:
        return self.p**self.exponent

    @property
    def is_field(self) -> bool:
        return self.kind != MODULAR_RING

    @property
    def characteristic(self) -> int:
        return self.size if self.kind == MODULAR_RING else self.p

    def __str__(self):
        if self.kind == PRIME_FIELD:
            return f"F_{self.p}"
        if self.kind == EXTENSION_FIELD:
            return f"F_{self.size}"
        return f"Z/{self.size}"

    def require_field(self):
        if not self.is_field:
            raise NotAField(f"{self} is not a field")

    # -- tables --------------------------------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        codes = np.arange(self.size)
        if self.kind == EXTENSION_FIELD:
            digits = self.digits(codes)
            s = (digits[:, None, :] + digits[None, :, :]) % self.p
            return s @ (self.p ** np.arange(self.exponent))
        return (codes[:, None] + codes[None, :]) % self.size

    @cached_property
    def mul_table(self) -> np.ndarray:
        codes = np.arange(self.size)
        if self.kind != EXTENSION_FIELD:
            return (codes[:, None] * codes[None, :]) % self.size
        p, f = self.p, self.exponent
        digits = self.digits(codes)
        # schoolbook product then reduce x^k for k >= f with precomputed residues
        prod = np.zeros((self.size, self.size, 2 * f - 1), dtype=np.int64)
        for i in range(f):
            for j in range(f):
                prod[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
        reduced = prod[:, :, :f].copy()
        for k in range(f, 2 * f - 1):
            xk = [0] * k + [1]
            res = _poly_mod(xk, self.modulus_poly, p)
            res = res + [0] * (f - len(res))
            reduced += prod[:, :, k, None] * np.array(res)
        return (reduced % p) @ (p ** np.arange(f))

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.argmin(self.add_table, axis=1)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """Multiplicative inverse code, or -1 for non-units."""
        hits = self.mul_table == self.one
        inv = np.where(hits.any(axis=1), np.argmax(hits, axis=1), -1)
        return inv

    @cached_property
    def unit_mask(self) -> np.ndarray:
        return self.inv_table >= 0

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def digits(self, codes) -> np.ndarray:
        """Coefficient vectors (..., f) of extension-field codes."""
        codes = np.asarray(codes)
        return (codes[..., None] // self.p ** np.arange(self.exponent)) % self.p

    def code_of(self, value) -> int:
        """Canonical code of an int (embedded via Z -> R) or coefficient sequence."""
        if isinstance(value, RingElement):
            if value.ring != self:
                raise ValueError(f"element of {value.ring} used in {self}")
            return value.code
        if isinstance(value, (int, np.integer)):
            if self.kind == EXTENSION_FIELD:
                return int(value) % self.p
            return int(value) % self.size
        coeffs = list(value)
        if self.kind != EXTENSION_FIELD or len(coeffs) > self.exponent:
            raise ValueError(f"cannot interpret {value!r} in {self}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value) -> "RingElement":
        return RingElement(self, self.code_of(value))

    def from_code(self, code: int) -> "RingElement":
        return RingElement(self, int(code))

    def elements(self) -> list["RingElement"]:
        return [RingElement(self, c) for c in range(self.size)]

    # -- vectorised helpers --------------------------------------------------
    def add(self, a, b):
        return self.add_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def power(self, a: int, k: int) -> int:
        result, base = self.one, int(a)
        while k:
            if k & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            k >>= 1
        return result

    @cached_property
    def sign_table(self) -> np.ndarray:
        """lambda for every code: 0 at zero, +1/-1 by the first nonzero coefficient."""
        self.require_field()
        digits = self.digits(np.arange(self.size)) if self.kind == EXTENSION_FIELD else np.arange(self.size)[:, None]
        half = (self.p - 1) // 2
        out = np.zeros(self.size, dtype=np.int64)
        for code, row in enumerate(digits):
            nz = row[row != 0]
            if nz.size:
                out[code] = 1 if nz[0] <= half else -1
        return out

    @cached_property
    def generator(self) -> int:
        return multiplicative_generator(self).code

    @cached_property
    def log_table(self) -> np.ndarray:
        """Discrete log base the canonical generator; -1 at zero."""
        self.require_field()
        out = np.full(self.size, -1, dtype=np.int64)
        x = self.one
        for k in range(self.size - 1):
            out[x] = k
            x = int(self.mul_table[x, self.generator])
        return out


@dataclass(frozen=True)
class RingElement:
    ring: RingSpec
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.ring.size:
            raise ValueError(f"code {self.code} out of range for {self.ring}")

    @property
    def coefficients(self) -> tuple[int, ...]:
        if self.ring.kind == EXTENSION_FIELD:
            return tuple(int(c) for c in self.ring.digits(self.code))
        return (self.code,)

    def _other(self, other) -> int:
        return self.ring.code_of(other)

    def __add__(self, other):
        return RingElement(self.ring, int(self.ring.add_table[self.code, self._other(other)]))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElement(self.ring, int(self.ring.sub(self.code, self._other(other))))

    def __rsub__(self, other):
        return RingElement(self.ring, int(self.ring.sub(self._other(other), self.code)))

    def __mul__(self, other):
        return RingElement(self.ring, int(self.ring.mul_table[self.code, self._other(other)]))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, int(self.ring.neg_table[self.code]))

    def __pow__(self, k: int):
        if k < 0:
            return ring_inverse(self.ring, self) ** (-k)
        return RingElement(self.ring, self.ring.power(self.code, k))

    def inverse(self) -> "RingElement":
        return ring_inverse(self.ring, self)

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.ring.kind == EXTENSION_FIELD:
            terms = []
            for i, c in enumerate(self.coefficients):
                if c:
                    mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                    terms.append(f"{c}{mono}" if (c != 1 or i == 0) else mono)
            return " + ".join(reversed(terms)) or "0"
        return str(self.code)


def _as_element(r: RingSpec, x) -> RingElement:
    return x if isinstance(x, RingElement) and x.ring == r else r(x)


def ring_inverse(r: RingSpec, x) -> RingElement:
    x = _as_element(r, x)
    inv = int(r.inv_table[x.code])
    if inv < 0:
        raise NonUnit(f"{x!r} is not a unit in {r}")
    return RingElement(r, inv)


def multiplicative_order(r: RingSpec, x) -> int:
    x = _as_element(r, x)
    if x.code == 0:
        raise NonUnit("zero has no multiplicative order")
    k, y = 1, x.code
    while y != r.one:
        y = int(r.mul_table[y, x.code])
        k += 1
    return k


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_generator(r: RingSpec) -> RingElement:
    """First code (ascending) whose multiplicative order is q - 1."""
    r.require_field()
    order = r.size - 1
    maximal = [order // f for f in _prime_factors(order)]
    for code in range(1, r.size):
        if all(r.power(code, d) != r.one for d in maximal):
            return RingElement(r, code)
    raise AssertionError("a finite field always has a generator")


SQUARE, NONSQUARE, ZERO = "square", "nonsquare", "zero"


def square_class(r: RingSpec, x) -> str:
    r.require_field()
    x = _as_element(r, x)
    if x.code == 0:
        return ZERO
    if r.p == 2:
        return SQUARE
    return SQUARE if r.power(x.code, (r.size - 1) // 2) == r.one else NONSQUARE


def sign_lambda(r: RingSpec, x) -> int:
    """Odd sign function: 0 at 0 and lambda(-x) == -lambda(x) elsewhere."""
    x = _as_element(r, x)
    return int(r.sign_table[x.code])


def epsilon(q: int) -> int:
    """(-1)^((q-1)/2) for odd q."""
    if q % 2 == 0:
        raise ValueError("q must be odd")
    return 1 if q % 4 == 1 else -1


def reduce_codes(src: RingSpec, dst: RingSpec, codes: Iterable[int] | np.ndarray) -> np.ndarray:
    """Reduction Z/p^kZ -> Z/p^jZ (j <= k) on codes; identity when src == dst."""
    codes = np.asarray(codes)
    if src == dst:
        return codes
    if src.kind == EXTENSION_FIELD or dst.kind == EXTENSION_FIELD or src.p != dst.p or dst.exponent > src.exponent:
        raise ValueError(f"no reduction map {src} -> {dst}")
    return codes % dst.size

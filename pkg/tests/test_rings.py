import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cayleychi.errors import NonUnit, NotAField
from cayleychi.rings import (
    RingSpec,
    epsilon,
    is_irreducible,
    multiplicative_generator,
    multiplicative_order,
    prime_power,
    reduce_codes,
    ring_inverse,
    sign_lambda,
    square_class,
)

RINGS = [RingSpec.field(q) for q in (3, 5, 7, 9, 11, 13, 25, 27)] + [RingSpec.modular(5, 2), RingSpec.modular(3, 3)]


def poly_mul_mod(a, b, mod, p):
    """Schoolbook product of coefficient lists (low degree first) modulo a monic polynomial."""
    f = len(mod) - 1
    prod = [0] * (2 * f)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k] % p
        for i in range(f + 1):
            prod[k - f + i] -= c * mod[i]
    return [c % p for c in prod[:f]]


# --- spec examples ----------------------------------------------------------

def test_inverse_examples():
    assert int(ring_inverse(RingSpec.field(5), 2)) == 3
    assert int(ring_inverse(RingSpec.modular(5, 2), 7)) == 18
    with pytest.raises(NonUnit):
        ring_inverse(RingSpec.modular(5, 2), 5)
    with pytest.raises(NonUnit):
        ring_inverse(RingSpec.field(7), 0)


def test_generator_examples():
    assert int(multiplicative_generator(RingSpec.field(5))) == 2
    assert int(multiplicative_generator(RingSpec.field(7))) == 3
    f9 = RingSpec.field(9)
    assert f9.modulus_poly == (1, 0, 1)  # t^2 + 1
    g = multiplicative_generator(f9)
    assert g.coefficients == (1, 1)  # t + 1
    assert (g**4).coefficients == (2, 0)


def test_generator_needs_field():
    with pytest.raises(NotAField):
        multiplicative_generator(RingSpec.modular(5, 2))


def test_square_class_examples():
    assert square_class(RingSpec.field(5), -1) == "square"
    assert square_class(RingSpec.field(7), -1) == "nonsquare"
    for q in (5, 7, 9):
        assert square_class(RingSpec.field(q), 0) == "zero"


def test_sign_lambda_examples():
    f7, f9 = RingSpec.field(7), RingSpec.field(9)
    assert sign_lambda(f7, 0) == 0
    assert sign_lambda(f7, 2) == 1 and sign_lambda(f7, 5) == -1
    t = f9((0, 1))
    assert sign_lambda(f9, t) == 1
    assert sign_lambda(f9, t * 2) == -1


def test_epsilon_examples():
    assert [epsilon(q) for q in (5, 7, 9)] == [1, -1, 1]


def test_prime_power():
    assert prime_power(125) == (5, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(12) is None and prime_power(1) is None


def test_ring_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        RingSpec.field(6)
    with pytest.raises(ValueError):
        RingSpec.extension_field(3, 2, (1, 1, 1))  # t^2+t+1 = (t-1)^2 over F_3


def test_irreducibility_quartic_factor_search():
    # (t^2+1)^2 over F_3 has no roots but is reducible
    assert not is_irreducible((1, 0, 2, 0, 1), 3)
    assert is_irreducible(RingSpec.extension_field(3, 4).modulus_poly, 3)


# --- oracles ----------------------------------------------------------------

@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_tables_match_schoolbook(ring):
    size = ring.size
    codes = range(size)
    if ring.modulus_poly is None:
        for a, b in itertools.product(codes, repeat=2):
            assert ring.mul_table[a, b] == (a * b) % size
            assert ring.add_table[a, b] == (a + b) % size
        return
    p, mod = ring.p, list(ring.modulus_poly)
    digits = ring.digits(np.arange(size))
    for a, b in itertools.product(codes, repeat=2):
        want = poly_mul_mod(list(digits[a]), list(digits[b]), mod, p)
        assert list(ring.digits(ring.mul_table[a, b])) == want
        assert list(ring.digits(ring.add_table[a, b])) == [(x + y) % p for x, y in zip(digits[a], digits[b])]


@pytest.mark.parametrize("ring", RINGS, ids=str)
def test_inverse_involution_and_product(ring):
    for x in range(ring.size):
        inv = int(ring.inv_table[x])
        if inv < 0:
            with pytest.raises(NonUnit):
                ring_inverse(ring, ring.from_code(x))
            continue
        assert ring.mul_table[x, inv] == ring.one
        assert ring_inverse(ring, ring_inverse(ring, ring.from_code(x))).code == x


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13, 25, 27])
def test_field_invariants(q):
    r = RingSpec.field(q)
    nu = multiplicative_generator(r)
    assert multiplicative_order(r, nu) == q - 1
    assert len({(nu**k).code for k in range(q - 1)}) == q - 1
    el = r.from_code
    signs = [sign_lambda(r, el(x)) for x in range(1, q)]
    assert signs.count(1) == signs.count(-1) == (q - 1) // 2
    for x in range(1, q):
        assert sign_lambda(r, -el(x)) == -sign_lambda(r, el(x))
    squares = {int(r.mul_table[x, x]) for x in range(1, q)}
    assert len(squares) == (q - 1) // 2
    for x in range(1, q):
        euler = r.power(x, (q - 1) // 2)
        assert (square_class(r, el(x)) == "square") == (euler == r.one)
        assert square_class(r, el(x) * el(x)) == "square"


@given(st.sampled_from(RINGS), st.data())
def test_ring_axioms(ring, data):
    a, b, c = (ring.from_code(data.draw(st.integers(0, ring.size - 1))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ring(0)
    assert -(-a) == a


def test_reduce_codes():
    z125, z25, f5 = RingSpec.modular(5, 3), RingSpec.modular(5, 2), RingSpec.field(5)
    x = np.arange(125)
    assert (reduce_codes(z125, z25, x) == x % 25).all()
    assert (reduce_codes(z125, f5, x) == x % 5).all()
    with pytest.raises(ValueError):
        reduce_codes(z25, z125, x)
    with pytest.raises(ValueError):
        reduce_codes(RingSpec.field(25), f5, x[:25])

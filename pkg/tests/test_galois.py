import itertools

import pytest
from hypothesis import given, strategies as st

from lrcodes.galois import (
    MAX_ORDER,
    FieldError,
    Polynomial,
    build_field,
    field_arith,
    field_of_order,
    multiplicative_order,
    nth_root_context,
    prime_power,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 8), (3, 4)]


def slow_mul(p, s, poly, a, b):
    """Schoolbook product of digit polynomials reduced by the monic ``poly``."""
    da = [(a // p**i) % p for i in range(s)]
    db = [(b // p**i) % p for i in range(s)]
    prod = [0] * (2 * s - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for top in range(len(prod) - 1, s - 1, -1):
        c = prod[top]
        if c:
            for t in range(s + 1):
                prod[top - s + t] = (prod[top - s + t] - c * poly[t]) % p
    return sum(c * p**i for i, c in enumerate(prod[:s]))


def elements(F):
    return st.integers(min_value=0, max_value=F.q - 1)


@pytest.mark.parametrize("p,s", SMALL_FIELDS)
def test_table_multiplication_matches_schoolbook(p, s):
    F = build_field(p, s)
    rng = range(F.q) if F.q <= 32 else list(range(0, F.q, max(1, F.q // 40)))
    for a in rng:
        for b in rng:
            assert F.mul(a, b) == slow_mul(p, s, F.poly, a, b)


@pytest.mark.parametrize("p,s", SMALL_FIELDS)
def test_defining_polynomial_is_primitive(p, s):
    F = build_field(p, s)
    if F.q == 2:
        return
    x = F.primitive
    seen = set()
    acc = 1
    for _ in range(F.q - 1):
        acc = slow_mul(p, s, F.poly, acc, x)
        seen.add(acc)
    assert acc == 1 and len(seen) == F.q - 1


def test_deterministic_polynomials():
    assert build_field(2, 3).poly == (1, 1, 0, 1)  # x^3 + x + 1
    assert build_field(2, 8).descriptor()["defining_poly"] == [1, 0, 1, 1, 1, 0, 0, 0, 1]
    assert build_field(3, 2).poly == (2, 1, 1)
    assert build_field(3, 1).primitive == 2
    assert build_field(2, 4) is field_of_order(16)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_field_axioms(q):
    F = field_of_order(q)

    @given(elements(F), elements(F), elements(F))
    def check(a, b, c):
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(F.add(a, b), b) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.div(F.mul(a, b), a) == b
            assert F.pow(a, F.q - 1) == 1

    check()


def test_division_by_zero_raises():
    F = field_of_order(8)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_field_element_wrapper_and_dispatch():
    F = field_of_order(9)
    a, b = F.element(5), F.element(7)
    assert int(a + b) == F.add(5, 7)
    assert int(a * b) == F.mul(5, 7)
    assert int(field_arith(a, b, "div")) == F.div(5, 7)
    assert int(field_arith(a, 3, "pow")) == F.pow(5, 3)
    assert int(field_arith(a, None, "inv")) == F.inv(5)
    with pytest.raises(FieldError):
        field_arith(a, field_of_order(3).element(1), "add")
    with pytest.raises(FieldError):
        field_arith(a, b, "xor")


def test_rejects_bad_orders():
    with pytest.raises(FieldError):
        field_of_order(6)
    with pytest.raises(FieldError):
        build_field(2, 17)
    assert prime_power(81) == (3, 4)


@pytest.mark.parametrize("big,small", [((2, 4), (2, 2)), ((2, 8), (2, 4)), ((2, 8), (2, 2)), ((3, 4), (3, 2)), ((2, 6), (2, 3))])
def test_subfield_embedding_is_a_ring_homomorphism(big, small):
    B, S = build_field(*big), build_field(*small)
    e = B.embed(S)
    assert len(set(e)) == S.q
    for a, b in itertools.product(range(S.q), repeat=2):
        assert e[S.add(a, b)] == B.add(e[a], e[b])
        assert e[S.mul(a, b)] == B.mul(e[a], e[b])


def test_polynomial_division_identity():
    F = field_of_order(4)

    @given(st.lists(elements(F), max_size=8), st.lists(elements(F), min_size=1, max_size=5))
    def check(a, b):
        B = Polynomial(F, b)
        if B.is_zero():
            return
        A = Polynomial(F, a)
        quo, rem = A.divmod(B)
        assert quo * B + rem == A
        assert rem.is_zero() or rem.degree < B.degree

    check()


@pytest.mark.parametrize("q,n", [(2, 33), (2, 63), (3, 80), (4, 255), (2, 15), (3, 13), (2, 129)])
def test_root_context_has_exact_order(q, n):
    ctx = nth_root_context(q, n)
    assert ctx.s == multiplicative_order(q, n)
    F = ctx.field
    assert F.pow(ctx.alpha, n) == 1
    for p in {d for d in range(2, n + 1) if n % d == 0}:
        assert F.pow(ctx.alpha, n // p) != 1
    sub = ctx.sub_context(n // min(d for d in range(2, n + 1) if n % d == 0))
    assert F.pow(sub.alpha, sub.n) == 1


def test_root_context_limits():
    assert nth_root_context(2, 33).s == 10
    assert nth_root_context(4, 255).field.q == 256
    with pytest.raises(FieldError):
        nth_root_context(2, 513)  # needs GF(2^18)
    assert MAX_ORDER == 1 << 16

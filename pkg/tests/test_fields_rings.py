import random

import pytest

from cokernels.fields import FieldCtx, field_of_order, make_field, prime_power
from cokernels.poly import first_irreducible, irreducibles, is_irreducible, poly
from cokernels.rings import RingCtx, context_from_descriptor, equal_char_quotient, galois_ring, padic_quotient
from cokernels.errors import ContextMismatchError

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2)]


@pytest.mark.parametrize("p,e,modulus", [(2, 1, (0, 1)), (2, 2, (1, 1, 1)), (3, 2, (1, 0, 1)), (2, 3, (1, 0, 1, 1))])
def test_make_field_modulus(p, e, modulus):
    assert make_field(p, e).modulus == modulus


def test_modulus_is_lexicographically_smallest():
    for p, e in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)]:
        F = make_field(p, e)
        G = make_field(p, 1)
        first = first_irreducible(G, e)
        assert F.modulus == first.coeffs


def test_make_field_errors():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        FieldCtx(2, 2, (1, 0, 1))  # (t + 1)^2
    with pytest.raises(ValueError):
        FieldCtx(3, 1, (1, 1))


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        prime_power(12)


@pytest.mark.parametrize("p,e", FIELDS)
def test_field_axioms(p, e):
    F = make_field(p, e)
    rng = random.Random(1000 * p + e)
    for _ in range(1000):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, b) == F.add(b, a) and F.mul(a, b) == F.mul(b, a)
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(F.add(a, b), b) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1


def test_field_multiplicative_group_is_cyclic_of_order_q_minus_1():
    for p, e in FIELDS:
        F = make_field(p, e)
        for a in range(1, F.q):
            assert F.pow(a, F.q - 1) == 1


def test_irreducibility_examples():
    F2 = make_field(2, 1)
    assert is_irreducible(poly(F2, 1, 1, 1))
    assert not is_irreducible(poly(F2, 1, 0, 1))
    for q in (2, 3, 4, 5):
        F = field_of_order(q)
        assert is_irreducible(poly(F, 0, 1))
    with pytest.raises(ValueError):
        is_irreducible(poly(make_field(3, 1), 1, 2))  # not monic


def test_irreducible_counts_match_necklace_formula():
    # number of monic irreducibles of degree d over F_q: (1/d) sum_{k | d} mu(k) q^{d/k}
    expected = {(2, 1): 2, (2, 2): 1, (2, 3): 2, (2, 4): 3, (3, 1): 3, (3, 2): 3, (3, 3): 8, (4, 2): 6}
    for (q, d), count in expected.items():
        assert len(irreducibles(field_of_order(q), d)) == count


RINGS = [
    padic_quotient(2, 3),
    padic_quotient(3, 2),
    equal_char_quotient(make_field(2, 1), 3),
    equal_char_quotient(make_field(2, 2), 2),
    galois_ring(2, 2, 2),
    galois_ring(3, 2, 2),
]


@pytest.mark.parametrize("R", RINGS, ids=lambda R: f"{R.kind}-{R.q}-{R.level}")
def test_ring_axioms(R):
    rng = random.Random(R.size)
    for _ in range(500):
        a, b, c = (rng.randrange(R.size) for _ in range(3))
        assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
        assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
        assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
        assert R.mul(a, b) == R.mul(b, a)
        assert R.add(a, R.neg(a)) == 0
        # residue map is a ring homomorphism
        F = R.field
        assert R.residue(R.mul(a, b)) == F.mul(R.residue(a), R.residue(b))
        assert R.residue(R.add(a, b)) == F.add(R.residue(a), R.residue(b))
        if R.is_unit(a):
            assert R.mul(a, R.inv(a)) == 1


@pytest.mark.parametrize("R", RINGS, ids=lambda R: f"{R.kind}-{R.q}-{R.level}")
def test_valuation_and_division(R):
    counts = [0] * (R.level + 1)
    for a in range(R.size):
        v = R.valuation(a)
        counts[v] += 1
        if a:
            u = R.div_pi(a, v)
            assert R.is_unit(u)
            assert R.mul(u, R.pi_power(v)) == a
    # |m^v \ m^{v+1}| = q^{level - v} - q^{level - v - 1}
    q, L = R.q, R.level
    assert counts[:L] == [q ** (L - v) - q ** (L - v - 1) for v in range(L)]
    assert counts[L] == 1


def test_unit_examples():
    R = equal_char_quotient(make_field(2, 1), 3)
    assert R.mul(3, R.inv(3)) == 1
    G = galois_ring(2, 2, 2)
    assert G.valuation(0) == 2
    assert G.valuation(2) == 1


def test_truncation_and_reduction():
    R = padic_quotient(2, 3)
    S = R.truncate(2)
    assert S.size == 4
    assert all(R.reduce_to(a, S) == a % 4 for a in range(8))
    assert R.reduce_to(5, R.field) == 1


def test_descriptor_round_trip():
    for ctx in RINGS + [make_field(3, 2)]:
        assert context_from_descriptor(ctx.describe()) == ctx


def test_poly_lift_and_reduce():
    R = galois_ring(2, 2, 2)
    F = R.field
    P = poly(F, 1, 1, 1)
    assert P.lift_to(R).reduce() == P
    with pytest.raises(ContextMismatchError):
        P.lift_to(padic_quotient(3, 2))

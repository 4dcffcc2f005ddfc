import random
from fractions import Fraction

import pytest

from cokernels.errors import ContextMismatchError
from cokernels.fields import field_of_order, make_field
from cokernels.partitions import aut_count, partitions_up_to
from cokernels.poly import irreducibles, monomial_t, poly
from cokernels.qseries import (
    PointConstraint,
    RationalInterval,
    TruncSeries,
    an_coeffs,
    bn_coeffs,
    constrained_series,
    exact_partition_prob,
    finite_n_event_prob,
    gl_fraction,
    limit_product,
    qpoch_expand,
    series_add,
    series_inv,
    series_mul,
)

F2 = make_field(2, 1)
T2 = monomial_t(F2)


def S(*coeffs):
    return TruncSeries.from_list(coeffs, len(coeffs) - 1)


def test_series_examples():
    assert series_inv(S(1, -1, 0, 0)) == S(1, 1, 1, 1)
    assert series_mul(S(1, -1, 0), S(1, 1, 1)) == S(1, 0, 0)
    assert series_add(S(1, 2), S(Fraction(1, 2), -2)) == S(Fraction(3, 2), 0)
    with pytest.raises(ZeroDivisionError):
        series_inv(S(0, 1))
    with pytest.raises(ValueError):
        series_mul(S(1, 1), S(1, 1, 1))


def test_series_inverse_round_trip():
    rng = random.Random(2)
    for _ in range(50):
        coeffs = [Fraction(rng.randint(1, 9), rng.randint(1, 9))]
        coeffs += [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(6)]
        s = S(*coeffs)
        assert series_inv(series_inv(s)) == s
        assert series_mul(s, series_inv(s)) == TruncSeries.one(6)


def test_series_json():
    assert S(Fraction(1, 3)).to_json() == [{"num": "1", "den": "3"}]


def _float_product(a, x, d, sign, order, factors=60):
    """Coefficients of prod_{i < factors} (1 - a x^i u^d)^sign as floats."""
    out = [1.0] + [0.0] * order
    for i in range(factors):
        c = a * x**i
        if sign == 1:
            out = [out[k] - (c * out[k - d] if k >= d else 0.0) for k in range(order + 1)]
        else:
            # multiply by 1 / (1 - c u^d): running recurrence
            for k in range(d, order + 1):
                out[k] += c * out[k - d]
    return out


def test_qpoch_examples():
    assert qpoch_expand(1, Fraction(1, 2), 1, -1, 1)[1] == 2
    assert qpoch_expand(Fraction(1, 2), Fraction(1, 2), 1, 1, 1)[1] == -1
    for sign in (1, -1):
        assert qpoch_expand(Fraction(1, 3), Fraction(1, 3), 2, sign, 0) == TruncSeries.one(0)
    with pytest.raises(ValueError):
        qpoch_expand(1, 1, 1, 1, 3)


@pytest.mark.parametrize("a,x,d", [(1, Fraction(1, 2), 1), (Fraction(1, 2), Fraction(1, 2), 1),
                                   (Fraction(1, 4), Fraction(1, 4), 2), (Fraction(1, 3), Fraction(1, 3), 1),
                                   (1, Fraction(1, 3), 3), (Fraction(-2, 3), Fraction(1, 5), 2)])
@pytest.mark.parametrize("sign", [1, -1])
def test_qpoch_matches_float_partial_product(a, x, d, sign):
    exact = qpoch_expand(a, x, d, sign, 7)
    approx = _float_product(float(a), float(x), d, sign, 7)
    for k in range(8):
        assert abs(float(exact[k]) - approx[k]) < 1e-12


def test_bn_examples():
    for q in (2, 3, 4):
        for d in (1, 2, 3):
            assert bn_coeffs(q, d, 0) == (1,)
    for q in (2, 3):
        assert all(b == 1 for b in bn_coeffs(q, 1, 10))
    assert bn_coeffs(2, 2, 1)[1] == 2


def test_bn_is_a_unit_count_over_gl():
    # b_n(d) = |{A : P(A) invertible}| / |GL_n(F_q)| with deg P = d, checked directly for n = 1
    for q in (2, 3, 4, 5):
        F = field_of_order(q)
        for d in (1, 2):
            P = irreducibles(F, d)[0]
            count = sum(1 for a in range(q) if _eval(F, P, a) != 0)
            assert bn_coeffs(q, d, 1)[1] == Fraction(count, q - 1)


def _eval(F, P, a):
    acc = 0
    for c in reversed(P.coeffs):
        acc = F.add(F.mul(acc, a), c)
    return acc


def test_partial_sum_identity():
    for q in (2, 3):
        for d in (1, 2, 3):
            b, a = bn_coeffs(q, d, 12), an_coeffs(q, d, 12)
            assert b[0] == a[0] == 1
            for n in range(1, 13):
                assert b[n] - b[n - 1] == a[n]


def test_point_series_is_the_partition_sum():
    for q in (2, 3):
        for d in (1, 2):
            Q = q**d
            sums = [Fraction(0)] * 9
            for nu in partitions_up_to(8):
                sums[nu.size] += Fraction(1, aut_count(Q, nu))
            series = qpoch_expand(Fraction(1, Q), Fraction(1, Q), 1, -1, 8)
            assert list(series.coeffs) == sums


def test_limit_product_examples():
    I = limit_product(2, 1, Fraction(1, 10**6))
    assert I.width <= Fraction(1, 10**6)
    assert Fraction(2887880950, 10**10) in I.pad(Fraction(1, 10**10))
    J = limit_product(10**6, 1, Fraction(1, 10**3))
    assert J.lo >= 1 - Fraction(2, 10**6)
    K = limit_product(2, 2, Fraction(1, 10**6))
    assert Fraction(6, 10) <= K.lo and K.hi <= Fraction(7, 10)
    with pytest.raises(ValueError):
        limit_product(2, 1, 0)


def test_limit_product_encloses_long_partial_products():
    for q, d in [(2, 1), (3, 1), (2, 2), (5, 3)]:
        I = limit_product(q, d, Fraction(1, 10**8))
        assert I.width <= Fraction(1, 10**8)
        partial = 1.0
        for i in range(1, 200):
            partial *= 1 - float(q) ** (-i * d)
        assert float(I.lo) - 1e-15 <= partial <= float(I.hi) + 1e-15


def test_interval_arithmetic():
    a = RationalInterval(Fraction(1, 2), 1)
    b = RationalInterval(-1, 2)
    assert a * b == RationalInterval(-1, 2)
    assert (a + b).width == Fraction(7, 2)
    assert RationalInterval.point(3) * Fraction(1, 3) == RationalInterval.point(1)
    with pytest.raises(ValueError):
        RationalInterval(1, 0)
    assert a.to_json() == {"lo": {"num": "1", "den": "2"}, "hi": {"num": "1", "den": "1"}}


def test_sum_one_bracket():
    m, q = 12, 2
    partial = sum(Fraction(1, aut_count(q, lam)) for lam in partitions_up_to(m))
    I = limit_product(q, 1, Fraction(1, 10**6))
    lower = partial * I.lo
    # every partition of size k > m has 1/|Aut| <= ... the tail sum is at most q^{-m} / ((q - 1) prod(1 - q^{-i}))
    upper = (partial + Fraction(1, q**m * (q - 1)) / I.lo) * I.hi
    assert lower <= 1 <= upper
    assert upper - lower < Fraction(1, 10**3)


def test_bn_converges_to_the_limit_ratio():
    q, d = 2, 2
    num, den = limit_product(q, d, Fraction(1, 10**9)), limit_product(q, 1, Fraction(1, 10**9))
    ratio = RationalInterval(num.lo / den.hi, num.hi / den.lo)
    b = bn_coeffs(q, d, 12)
    gaps = [abs(x - ratio.midpoint) for x in b[:8]]
    assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
    assert b[12] in ratio.pad(ratio.width)


def test_constrained_series_examples():
    free = constrained_series(2, [], 3)
    # |Mat_n(F_2)| / |GL_n(F_2)| for n = 0..3
    assert list(free.coeffs) == [1, 2, Fraction(16, 6), Fraction(512, 168)]
    only_units = constrained_series(2, [PointConstraint(T2, frozenset())], 6)
    assert all(c == 1 for c in only_units.coeffs)
    both = constrained_series(2, [PointConstraint(T2, frozenset()), PointConstraint(poly(F2, 1, 1), frozenset())], 2)
    assert both[1] == 0


def test_constrained_series_counts_matrices():
    # coefficient * |GL_n| counts matrices with the required P-parts (brute force on Mat_2(F_2))
    from cokernels.linalg import matrix_from_index
    from cokernels.module_stats import p_part_partition

    P = poly(F2, 1, 1, 1)
    allowed = frozenset({(1,)})
    series = constrained_series(2, [PointConstraint(T2, allowed), PointConstraint(P, frozenset())], 2)
    count = 0
    for i in range(16):
        A = matrix_from_index(F2, 2, i)
        if p_part_partition(A, T2) in allowed | {()} and p_part_partition(A, P) == ():
            count += 1
    assert series[2] * 6 == count


def test_constraint_validation():
    with pytest.raises(ValueError):
        constrained_series(2, [PointConstraint(T2), PointConstraint(T2)], 2)
    with pytest.raises(ValueError):
        constrained_series(2, [PointConstraint(poly(F2, 1, 0, 1))], 2)
    with pytest.raises(ContextMismatchError):
        constrained_series(3, [PointConstraint(T2)], 2)
    assert PointConstraint(T2, frozenset({(1,)})).allowed == {(), (1,)}


def test_finite_n_examples():
    for n in range(6):
        assert finite_n_event_prob(2, [PointConstraint(T2, frozenset())], n) == gl_fraction(2, n)
    assert finite_n_event_prob(3, [PointConstraint(monomial_t(make_field(3, 1)), frozenset())], 0) == 1
    assert finite_n_event_prob(2, [PointConstraint(T2, frozenset({(1,)}))], 1) == 1
    assert finite_n_event_prob(2, [PointConstraint(T2)], 4) == 1


def test_finite_n_single_vanishing_constraint_is_bn():
    for q in (2, 3):
        F = field_of_order(q)
        for d in (1, 2):
            P = irreducibles(F, d)[-1]
            b = bn_coeffs(q, d, 6)
            for n in range(7):
                assert finite_n_event_prob(q, [PointConstraint(P, frozenset())], n) == b[n] * gl_fraction(q, n)


def test_exact_partition_examples():
    assert exact_partition_prob(2, T2, (1,), 1) == Fraction(1, 2)
    assert exact_partition_prob(2, T2, (1,), 2) == Fraction(3, 8)
    assert exact_partition_prob(2, T2, (2, 1), 2) == 0
    assert exact_partition_prob(2, poly(F2, 1, 1, 1), (1,), 1) == 0


def test_exact_partition_probabilities_sum_to_one():
    for q, n in [(2, 3), (3, 2)]:
        F = field_of_order(q)
        for P in irreducibles(F, 1) + irreducibles(F, 2):
            total = sum(exact_partition_prob(q, P, lam, n) for lam in partitions_up_to(n))
            assert total == 1

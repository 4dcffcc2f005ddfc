"""Exact truncated power series, q-Pochhammer expansions, b_n(d), rational
enclosures of infinite products and the specialised cycle-index series of
Mat_n(F_q) under conjugation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ContextMismatchError
from .fields import FieldCtx
from .partitions import EMPTY, Partition, aut_count
from .poly import Poly, is_irreducible, is_t


@dataclass(frozen=True)
class TruncSeries:
    """sum_{k <= order} coeffs[k] u^k with exact rational coefficients."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise ValueError("a series of order n carries n + 1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_list(cls, coeffs, order: int) -> "TruncSeries":
        coeffs = list(coeffs)[: order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        return cls(order, tuple(coeffs))

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls.from_list([1], order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        _same_order(self, other)
        return TruncSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return series_mul(self, other)
        return TruncSeries(self.order, tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def to_json(self) -> list[dict]:
        return [{"num": str(c.numerator), "den": str(c.denominator)} for c in self.coeffs]


def _same_order(a: TruncSeries, b: TruncSeries):
    if a.order != b.order:
        raise ValueError(f"series orders differ ({a.order} vs {b.order})")


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _same_order(a, b)
    return TruncSeries(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _same_order(a, b)
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j in range(n + 1 - i):
                out[i + j] += x * b.coeffs[j]
    return TruncSeries(n, tuple(out))


def series_inv(a: TruncSeries) -> TruncSeries:
    c0 = a.coeffs[0]
    if c0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    n = a.order
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / c0
    for k in range(1, n + 1):
        s = sum(a.coeffs[j] * out[k - j] for j in range(1, k + 1))
        out[k] = -s / c0
    return TruncSeries(n, tuple(out))


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError("interval with lo > hi")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "RationalInterval":
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __mul__(self, other):
        if isinstance(other, RationalInterval):
            ends = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
            return RationalInterval(min(ends), max(ends))
        other = Fraction(other)
        return RationalInterval(min(self.lo * other, self.hi * other), max(self.lo * other, self.hi * other))

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        return RationalInterval(self.lo + other, self.hi + other)

    def pad(self, eps) -> "RationalInterval":
        return RationalInterval(self.lo - eps, self.hi + eps)

    def to_json(self) -> dict:
        return {"lo": _frac_json(self.lo), "hi": _frac_json(self.hi)}


def _frac_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


# -- q-Pochhammer expansions -------------------------------------------------------

def qpoch_expand(a, x, d: int, sign: int, order: int) -> TruncSeries:
    """Truncation of prod_{i>=0} (1 - a x^i u^d)^sign for sign = +1 or -1.

    Uses Euler's identities: the coefficient of u^{dk} is
    (-1)^k a^k x^{k(k-1)/2} / (x; x)_k for the product and a^k / (x; x)_k
    for its reciprocal.
    """
    a, x = Fraction(a), Fraction(x)
    if abs(x) >= 1:
        raise ValueError("qpoch_expand needs |x| < 1")
    if d < 1:
        raise ValueError("degree must be >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = [Fraction(0)] * (order + 1)
    poch = Fraction(1)
    k = 0
    while d * k <= order:
        if k:
            poch *= 1 - x**k
        if sign == 1:
            out[d * k] = (-1) ** k * a**k * x ** (k * (k - 1) // 2) / poch
        else:
            out[d * k] = a**k / poch
        k += 1
    return TruncSeries(order, tuple(out))


def point_series(q: int, d: int, order: int) -> TruncSeries:
    """sum_nu u^{|nu| d} / w(q^d, nu) = prod_{i>=1} 1 / (1 - (q^{-i} u)^d)."""
    s = Fraction(1, q**d)
    return qpoch_expand(s, s, d, -1, order)


def point_series_inverse(q: int, d: int, order: int) -> TruncSeries:
    s = Fraction(1, q**d)
    return qpoch_expand(s, s, d, 1, order)


@lru_cache(maxsize=None)
def bn_coeffs(q: int, d: int, n_max: int) -> tuple[Fraction, ...]:
    """b_0(d), ..., b_{n_max}(d) from prod_{i>=1} (1 - (q^{-i}u)^d) / (1 - q^{1-i}u)."""
    if d < 1 or n_max < 0:
        raise ValueError("need d >= 1 and n_max >= 0")
    num = point_series_inverse(q, d, n_max)
    den = qpoch_expand(1, Fraction(1, q), 1, -1, n_max)
    return series_mul(num, den).coeffs


def an_coeffs(q: int, d: int, n_max: int) -> tuple[Fraction, ...]:
    """Coefficients of prod_{i>=1} (1 - (q^{-i}u)^d) / (1 - q^{-i}u)."""
    num = point_series_inverse(q, d, n_max)
    den = qpoch_expand(Fraction(1, q), Fraction(1, q), 1, -1, n_max)
    return series_mul(num, den).coeffs


def gl_fraction(q: int, n: int) -> Fraction:
    """|GL_n(F_q)| / |Mat_n(F_q)| = prod_{i=1}^n (1 - q^{-i})."""
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= 1 - Fraction(1, q**i)
    return out


def limit_product(q: int, d: int, tol) -> RationalInterval:
    """Enclosure of prod_{i>=1} (1 - q^{-id}) of width <= tol.

    With P_M the partial product through i = M and T = q^{-(M+1)d} / (1 - q^{-d})
    bounding the tail sum, the product lies in [P_M (1 - T), P_M].
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    x = Fraction(1, q**d)
    partial = Fraction(1)
    M = 0
    while True:
        tail = x ** (M + 1) / (1 - x)
        if partial * tail <= tol:
            return RationalInterval(partial * (1 - tail), partial)
        M += 1
        partial *= 1 - x**M


# -- constrained cycle index ---------------------------------------------------------

@dataclass(frozen=True)
class PointConstraint:
    """Allowed P-part types at one closed point; ``allowed=None`` leaves it free."""

    point: Poly
    allowed: frozenset | None = None

    def __post_init__(self):
        if self.allowed is not None:
            allowed = frozenset(Partition(p) for p in self.allowed) | {EMPTY}
            object.__setattr__(self, "allowed", allowed)


def _validate_points(constraints, q: int) -> None:
    seen = set()
    for c in constraints:
        P = c.point
        if not isinstance(P.ctx, FieldCtx):
            raise ContextMismatchError("constraint points live over F_q")
        if P.ctx.q != q:
            raise ContextMismatchError(f"constraint point over F_{P.ctx.q}, expected F_{q}")
        if not is_irreducible(P):
            raise ValueError(f"constraint point {P} is reducible")
        if P in seen:
            raise ValueError(f"duplicate constraint point {P}")
        seen.add(P)


def constrained_series(q: int, constraints, n_max: int) -> TruncSeries:
    """Specialised cycle index: coefficient of u^n is |{A in Mat_n : mu_P(A) in allowed(P)}| / |GL_n|.

    Each constrained point contributes the finite sum over its allowed
    partitions; all other points are collapsed into the closed form
    1/(1-u) * Z({t}) [if t unconstrained] / prod_{P constrained, P != t} Z({P}).
    """
    constraints = list(constraints)
    _validate_points(constraints, q)
    result = qpoch_expand(1, 0, 1, -1, n_max)  # 1 / (1 - u)
    t_constrained = any(is_t(c.point) for c in constraints)
    if not t_constrained:
        result = series_mul(result, point_series(q, 1, n_max))
    for c in constraints:
        d = c.point.degree
        if not is_t(c.point):
            result = series_mul(result, point_series_inverse(q, d, n_max))
        if c.allowed is None:
            local = point_series(q, d, n_max)
        else:
            coeffs = [Fraction(0)] * (n_max + 1)
            for nu in c.allowed:
                h = nu.size * d
                if h <= n_max:
                    coeffs[h] += Fraction(1, aut_count(q**d, nu))
            local = TruncSeries(n_max, tuple(coeffs))
        result = series_mul(result, local)
    return result


def finite_n_event_prob(q: int, constraints, n: int) -> Fraction:
    """Probability that a uniform A in Mat_n(F_q) has mu_P(A) in allowed(P) for all constraints."""
    return constrained_series(q, constraints, n)[n] * gl_fraction(q, n)


def exact_partition_prob(q: int, point: Poly, lam, n: int) -> Fraction:
    """Prob(mu_P(A) = lam) by inclusion-exclusion over the allowed sets {0, lam} and {0}."""
    lam = Partition(lam)
    only_empty = finite_n_event_prob(q, [PointConstraint(point, frozenset())], n)
    if not lam:
        return only_empty
    if lam.size * point.degree > n:
        return Fraction(0)
    both = finite_n_event_prob(q, [PointConstraint(point, frozenset({lam}))], n)
    return both - only_empty

"""Closed-form counts, probabilities and limits as exact rationals or
rational intervals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import field_of_order
from .partitions import Partition, aut_count, partitions_up_to
from .poly import irreducibles, monomial_t
from .qseries import (
    PointConstraint,
    RationalInterval,
    bn_coeffs,
    finite_n_event_prob,
    gl_fraction,
    limit_product,
)


def _prod_range(q: int, lo: int, hi: int) -> Fraction:
    """prod_{i=lo}^{hi} (1 - q^{-i})."""
    out = Fraction(1)
    for i in range(max(lo, 1), hi + 1):
        out *= 1 - Fraction(1, q**i)
    return out


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer: {x}")
    return x.numerator


def prop_fw_prob(q: int, n: int, lam) -> Fraction:
    """Prob(coker A ~ H) over Mat_n(R) for H of type lam (finite n)."""
    lam = Partition(lam)
    l = lam.length
    if n < l:
        return Fraction(0)
    return gl_fraction(q, n) * _prod_range(q, n - l + 1, n) / aut_count(q, lam)


def thm_main1_prob(q: int, d: int, n: int, nu) -> Fraction:
    """Prob(mu_P(A) = nu) over Mat_n(F_q) for an irreducible P of degree d."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    nu = Partition(nu)
    h = nu.size * d
    if n < h:
        return Fraction(0)
    return bn_coeffs(q, d, n - h)[n - h] / aut_count(q**d, nu) * gl_fraction(q, n)


@dataclass(frozen=True)
class LimitSpec:
    q: int
    points: tuple[tuple[int, Partition], ...] = ()

    def __post_init__(self):
        pts = tuple((int(d), Partition(nu)) for d, nu in self.points)
        if any(d < 1 for d, _ in pts):
            raise ValueError("point degrees must be >= 1")
        object.__setattr__(self, "points", pts)


def conj_limit(spec: LimitSpec, tol=Fraction(1, 10**9)) -> RationalInterval:
    """Enclosure of prod_j w(q^{d_j}, nu_j)^{-1} prod_i (1 - q^{-i d_j}), width <= tol."""
    tol = Fraction(tol)
    r = len(spec.points)
    out = RationalInterval.point(1)
    for d, nu in spec.points:
        # each factor lies in [0, 1], so widths add up under multiplication
        out = out * limit_product(spec.q, d, tol / r) * Fraction(1, aut_count(spec.q**d, nu))
    return out


def thm_main3x_limit(q: int, degrees, lam_H, tol=Fraction(1, 10**9)) -> RationalInterval:
    """Limit for coker P_j(A) = 0 (j < r) and coker P_r(A) ~ H with deg P_r = 1."""
    pts = [(d, ()) for d in degrees] + [(1, lam_H)]
    return conj_limit(LimitSpec(q, tuple(pts)), tol)


def default_points(q: int, degrees):
    """Distinct irreducibles of the given degrees, none equal to t (reserved for P_r)."""
    F = field_of_order(q)
    t = monomial_t(F)
    used = {t}
    out = []
    for d in degrees:
        P = next((P for P in irreducibles(F, d) if P not in used), None)
        if P is None:
            raise ValueError(f"not enough irreducibles of degree {d} over F_{q}")
        used.add(P)
        out.append(P)
    return out, t


def corank_event_prob(q: int, n: int, degrees, l: int) -> Fraction:
    """Prob over Mat_n(F_q) that mu_{P_j} = 0 for j < r and corank P_r(A) = l (deg P_r = 1)."""
    others, t = default_points(q, degrees)
    base = [PointConstraint(P, frozenset()) for P in others]
    empty = finite_n_event_prob(q, base + [PointConstraint(t, frozenset())], n)
    if l == 0:
        return empty
    allowed = frozenset(nu for nu in partitions_up_to(n) if nu.length == l)
    if not allowed:
        return Fraction(0)
    return finite_n_event_prob(q, base + [PointConstraint(t, allowed)], n) - empty


def thm_main3x_finite(q: int, n: int, degrees, lam_H) -> Fraction:
    """Finite-n probability behind the main3x limit, via the lift count."""
    lam_H = Partition(lam_H)
    l = lam_H.length
    factor = Fraction(q) ** (l * l) * _prod_range(q, 1, l) ** 2 / aut_count(q, lam_H)
    return factor * corank_event_prob(q, n, degrees, l)


def corank_count(q: int, n: int, l: int) -> int:
    """Number of matrices in Mat_n(F_q) of corank l."""
    if not 0 <= l <= n:
        raise ValueError("need 0 <= l <= n")
    value = Fraction(q) ** (n * n - l * l) * _prod_range(q, l + 1, n) ** 2 / _prod_range(q, 1, n - l)
    return _as_int(value, "corank count")


def fw_lift_count(q: int, N: int, n: int, lam_H, l: int) -> int:
    """Lifts A in Mat_n(R/m^{N+1}) of a fixed reduction of corank l with coker P(A) ~ H, deg P = 1."""
    lam_H = Partition(lam_H)
    if lam_H and N < lam_H[0]:
        raise ValueError(f"m^{N} does not annihilate a module of type {tuple(lam_H)}")
    lH = lam_H.length
    if l != lH:
        return 0
    value = Fraction(q) ** (N * n * n + lH * lH) * _prod_range(q, 1, lH) ** 2 / aut_count(q, lam_H)
    return _as_int(value, "lift count")


def cl2_corank_prob(q: int, l: int, tol=Fraction(1, 10**9)) -> RationalInterval:
    """Cohen-Lenstra probability that dim H/mH = l."""
    if l < 0:
        raise ValueError("l must be >= 0")
    factor = Fraction(1, q ** (l * l)) / _prod_range(q, 1, l) ** 2
    return limit_product(q, 1, Fraction(tol) / factor) * factor


def boreico_transfer(q: int, n: int, modules) -> Fraction:
    """prod_j |Aut H_j| / prod_{i = n - h + 1}^{n} (1 - q^{-i}), h = sum |nu_j| d_j."""
    h = 0
    aut = 1
    for d, nu in modules:
        nu = Partition(nu)
        h += nu.size * d
        aut *= aut_count(q**d, nu)
    if n < h:
        raise ValueError(f"n = {n} is smaller than the total dimension {h}")
    return Fraction(aut) / _prod_range(q, n - h + 1, n)


def cl_finite_level_prob(q: int, m: int, lam) -> Fraction:
    """Weight 1/|Aut| normalised over the partitions of size <= m."""
    lam = Partition(lam)
    if lam.size > m:
        raise ValueError("|lambda| exceeds m")
    total = sum(Fraction(1, aut_count(q, nu)) for nu in partitions_up_to(m))
    return Fraction(1, aut_count(q, lam)) / total


# id -> (callable, provenance)
REGISTRY = {
    "prop-fw": (prop_fw_prob, "Friedman-Washington proposition, finite n"),
    "thm-main1": (thm_main1_prob, "P-part distribution over Mat_n(F_q), finite n"),
    "lemma-count": (fw_lift_count, "Friedman-Washington lift count"),
    "boreico": (boreico_transfer, "Boreico transfer factor"),
    "cl2": (cl2_corank_prob, "Cohen-Lenstra corank distribution"),
    "corank": (corank_count, "corank census of Mat_n(F_q)"),
    "conj-limit": (conj_limit, "conjectured joint limit (proved in the listed special cases)"),
    "thm-main3x": (thm_main3x_limit, "joint limit with deg P_r = 1"),
    "thm-main3x-finite": (thm_main3x_finite, "finite-n form of the joint limit with deg P_r = 1"),
    "cl-finite": (cl_finite_level_prob, "Cohen-Lenstra weights truncated at size m"),
    "bn": (bn_coeffs, "generating function of b_n(d)"),
}


def provenance(formula_id: str) -> str:
    try:
        return REGISTRY[formula_id][1]
    except KeyError:
        raise KeyError(f"unknown formula id {formula_id!r}") from None

"""Verification battery: exact formula/oracle identities plus the Monte-Carlo
conjecture cases.  Each suite returns a list of check records."""

from __future__ import annotations

from fractions import Fraction

from . import formulas as fm
from .fields import field_of_order
from .linalg import matrix_from_index
from .module_stats import corank
from .oracle import (
    BatteryCase,
    CokerTypeIs,
    CokerVanishes,
    EventSpec,
    PPartIs,
    coker_histogram,
    conjecture_battery,
    enumerate_event,
    lift_type_counts,
    ppart_histogram,
)
from .partitions import EMPTY, Partition, aut_count, partitions_up_to
from .poly import Poly, first_irreducible, irreducibles, monomial_t
from .qseries import (
    PointConstraint,
    bn_coeffs,
    finite_n_event_prob,
    gl_fraction,
    limit_product,
)
from .rings import padic_quotient

DEFAULT_SEED = 7
DEFAULT_SAMPLES = 20000


def _check(name: str, got, want, **detail) -> dict:
    return {"name": name, "ok": got == want, "got": str(got), "want": str(want), **detail}


def _gl_count(q: int, n: int) -> int:
    return int(gl_fraction(q, n) * q ** (n * n))


# -- suites ----------------------------------------------------------------------------

def suite_prop_fw(guard=None) -> list[dict]:
    out = []
    for p in (2, 3):
        for n in (1, 2):
            for lam in (EMPTY, Partition((1,)), Partition((2,)), Partition((1, 1))):
                level = (lam[0] if lam else 0) + 1
                R = padic_quotient(p, level)
                spec = EventSpec(R, n, ((monomial_t(R), CokerTypeIs(lam)),))
                hits, total = enumerate_event(spec, guard)
                out.append(_check(f"prop-fw p={p} n={n} lam={lam.to_str()}",
                                  Fraction(hits, total), fm.prop_fw_prob(p, n, lam)))
    return out


def suite_thm_main1(guard=None, qs=(2, 3, 4), n_max=3) -> list[dict]:
    out = []
    for q in qs:
        F = field_of_order(q)
        for d in (1, 2):
            P = first_irreducible(F, d)
            for n in range(n_max + 1):
                hist = ppart_histogram(F, n, P, guard)
                total = q ** (n * n)
                for nu in partitions_up_to(2):
                    enum = Fraction(hist.get(nu, 0), total)
                    formula = fm.thm_main1_prob(q, d, n, nu)
                    cycle = _cycle_index_prob(q, P, nu, n)
                    ok = enum == formula == cycle
                    out.append({"name": f"thm-main1 q={q} d={d} n={n} nu={nu.to_str()}", "ok": ok,
                                "got": str(enum), "want": str(formula), "cycle_index": str(cycle)})
    return out


def _cycle_index_prob(q, P, nu, n):
    from .qseries import exact_partition_prob
    return exact_partition_prob(q, P, nu, n)


def suite_bn(guard=None) -> list[dict]:
    out = []
    for q in (2, 3):
        F = field_of_order(q)
        for d in (1, 2, 3):
            P = first_irreducible(F, d)
            bn = bn_coeffs(q, d, 3)
            for n in range(4):
                hist = ppart_histogram(F, n, P, guard)
                out.append(_check(f"bn q={q} d={d} n={n}", Fraction(hist.get(EMPTY, 0), _gl_count(q, n)), bn[n]))
        out.append({"name": f"bn q={q} d=1 all ones", "ok": all(b == 1 for b in bn_coeffs(q, 1, 10)),
                    "got": "", "want": "1"})
    return out


def suite_lemma_count(guard=None) -> list[dict]:
    """Lift counts over Z/p^2 for every reduction in Mat_n(F_p), n <= 2."""
    out = []
    for p in (2, 3):
        R = padic_quotient(p, 2)
        F = R.field
        t = monomial_t(R)
        targets = [EMPTY, Partition((1,)), Partition((1, 1))]
        for n in (1, 2):
            agg = {lam: 0 for lam in targets}
            ok = True
            for i in range(p ** (n * n)):
                Abar = matrix_from_index(F, n, i)
                l = corank(Abar)
                counts = lift_type_counts(R, Abar, t)
                for lam in targets:
                    want = fm.fw_lift_count(p, 1, n, lam, l)
                    if counts.get(lam, 0) != want:
                        ok = False
                    agg[lam] += want
            out.append({"name": f"lemma-count p={p} n={n} per reduction", "ok": ok, "got": "", "want": ""})
            hist = coker_histogram(R, n, t, guard)
            for lam in targets:
                out.append(_check(f"lemma-count p={p} n={n} lam={lam.to_str()} aggregate",
                                  agg[lam], hist.get(lam, 0)))
    return out


BOREICO_CASES = [
    # (n, [(point index, degree, nu)]) over F_2; point index picks among the irreducibles of that degree
    (2, [(0, 1, (1,))]),
    (3, [(0, 1, (1,))]),
    (3, [(0, 1, (2,))]),
    (3, [(0, 1, (1, 1))]),
    (2, [(0, 2, (1,))]),
    (3, [(0, 2, (1,))]),
    (2, [(0, 1, ()), (1, 1, (1,))]),
    (2, [(0, 1, (1,)), (1, 1, (1,))]),
    (3, [(0, 1, (1,)), (1, 1, (1,))]),
    (3, [(0, 1, (2,)), (1, 1, (1,))]),
    (3, [(0, 1, (1,)), (0, 2, (1,))]),
]


def _boreico_points(F, items):
    return [(irreducibles(F, d)[k], d, Partition(nu)) for k, d, nu in items]


def suite_boreico(guard=None) -> list[dict]:
    out = []
    q = 2
    F = field_of_order(q)
    R = padic_quotient(2, 2)
    for n, items in BOREICO_CASES:
        pts = _boreico_points(F, items)
        h = sum(nu.size * d for _, d, nu in pts)
        rhs_spec = EventSpec(F, n, tuple((P, PPartIs(nu)) for P, _, nu in pts))
        hits, total = enumerate_event(rhs_spec, guard)
        factor = fm.boreico_transfer(q, n, [(d, nu) for _, d, nu in pts])
        rhs = factor * Fraction(hits, total)
        lhs_f = enumerate_event(EventSpec(F, n - h, tuple((P, PPartIs(())) for P, _, _ in pts)), guard)
        lhs_r = enumerate_event(EventSpec(R, n - h, tuple((P.lift_to(R), CokerVanishes()) for P, _, _ in pts)), guard)
        label = ";".join(f"{P}:{nu.to_str()}" for P, _, nu in pts)
        out.append(_check(f"boreico F_q n={n} [{label}]", Fraction(*lhs_f), rhs))
        out.append(_check(f"boreico Z/4 n={n} [{label}]", Fraction(*lhs_r), rhs))
    return out


def suite_corank(guard=None) -> list[dict]:
    out = []
    for q in (2, 3):
        for n in range(6):
            total = sum(fm.corank_count(q, n, l) for l in range(n + 1))
            out.append(_check(f"corank sum q={q} n={n}", total, q ** (n * n)))
        F = field_of_order(q)
        for n in range(1, 4):
            hist = coker_histogram(F, n, monomial_t(F), guard)
            census = {}
            for lam, c in hist.items():
                census[lam.length] = census.get(lam.length, 0) + c
            for l in range(n + 1):
                out.append(_check(f"corank census q={q} n={n} l={l}", census.get(l, 0), fm.corank_count(q, n, l)))
    return out


def suite_cl2() -> list[dict]:
    total = sum(fm.cl2_corank_prob(2, l).midpoint for l in range(7))
    return [{"name": "cl2 sum l<=6 q=2", "ok": abs(total - 1) < Fraction(1, 1000), "got": str(float(total)),
             "want": "1 within 1e-3"}]


def sum1_bracket(m: int = 12, q: int = 2):
    """Enclosure of prod_i (1 - q^{-i}) * sum_lambda 1/w(q, lambda) from the sizes <= m.

    The mass of size k is q^{-k} / prod_{j<=k} (1 - q^{-j}) <= q^{-k} / L with L
    the lower end of the product enclosure, so the omitted tail is at most
    q^{-m} / ((q - 1) L).
    """
    prod = limit_product(q, 1, Fraction(1, 10**9))
    partial = sum(Fraction(1, aut_count(q, lam)) for lam in partitions_up_to(m))
    tail = Fraction(1, q**m) / ((q - 1) * prod.lo)
    return type(prod)(prod.lo * partial, prod.hi * (partial + tail))


def suite_sum1(m: int = 12, q: int = 2) -> list[dict]:
    bracket = sum1_bracket(m, q)
    ok = 1 in bracket and bracket.width < Fraction(1, 1000)
    return [{"name": f"sum=1 bracket m={m} q={q}", "ok": ok, "got": f"[{float(bracket.lo)}, {float(bracket.hi)}]",
             "want": "contains 1, width < 1e-3"}]


def suite_cl_finite() -> list[dict]:
    out = []
    for m in range(5):
        total = sum(fm.cl_finite_level_prob(2, m, lam) for lam in partitions_up_to(m))
        out.append(_check(f"cl-finite normalised m={m}", total, 1))
    out.append(_check("cl-finite m=2 empty", fm.cl_finite_level_prob(2, 2, ()), Fraction(3, 8)))
    return out


def suite_conj_limit() -> list[dict]:
    out = []
    for d in (1, 2):
        lim = fm.conj_limit(fm.LimitSpec(2, ((d, ()),)))
        for n in (20, 30):
            fin = fm.thm_main1_prob(2, d, n, ())
            pad = Fraction(2, 2 ** n)
            out.append({"name": f"conj-limit d={d} n={n}", "ok": fin in lim.pad(pad),
                        "got": str(float(fin)), "want": f"[{float(lim.lo)}, {float(lim.hi)}] +- 2^{1 - n}"})
    return out


def suite_thm_main3x(guard=None) -> list[dict]:
    """Finite-n form of the main3x identity against enumeration over Z/p^2."""
    out = []
    for p, d1 in ((2, 1), (2, 2), (3, 1)):
        R = padic_quotient(p, 2)
        F = R.field
        others, t = fm.default_points(p, [d1])
        for n in (1, 2):
            for lam in (EMPTY, Partition((1,)), Partition((1, 1))):
                spec = EventSpec(R, n, ((others[0].lift_to(R), CokerVanishes()),
                                        (t.lift_to(R), CokerTypeIs(lam))))
                hits, total = enumerate_event(spec, guard)
                out.append(_check(f"thm-main3x finite p={p} d1={d1} n={n} lam={lam.to_str()}",
                                  Fraction(hits, total), fm.thm_main3x_finite(p, n, [d1], lam)))
    return out


def default_battery(n: int = 8) -> list[BatteryCase]:
    F = field_of_order(2)
    R = padic_quotient(2, 2)
    t = monomial_t(F)
    P2 = first_irreducible(F, 2)
    return [
        BatteryCase("main1x q=2 d=1 H=0", EventSpec(F, n, ((t, CokerVanishes()),)),
                    fm.conj_limit(fm.LimitSpec(2, ((1, ()),))), True, fm.thm_main1_prob(2, 1, n, ())),
        BatteryCase("main1x q=2 d=2 H=0", EventSpec(F, n, ((P2, CokerVanishes()),)),
                    fm.conj_limit(fm.LimitSpec(2, ((2, ()),))), True, fm.thm_main1_prob(2, 2, n, ())),
        BatteryCase("main3x q=2 d1=2 H=(1)",
                    EventSpec(R, n, ((P2.lift_to(R), CokerVanishes()), (t.lift_to(R), CokerTypeIs((1,))))),
                    fm.thm_main3x_limit(2, [2], (1,)), True, fm.thm_main3x_finite(2, n, [2], (1,))),
        # a module of type (1) over the degree-2 extension has R-type (1, 1)
        BatteryCase("conjecture q=2 d=2 nu=(1)",
                    EventSpec(R, n, ((P2.lift_to(R), CokerTypeIs((1, 1))),)),
                    fm.conj_limit(fm.LimitSpec(2, ((2, (1,)),))), False),
    ]


def suite_conjecture(samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, workers=1, n=8) -> list[dict]:
    report = conjecture_battery(default_battery(n), samples, seed, workers=workers)
    out = []
    for row in report["cases"]:
        ok = row["verdict"] == "PASS" or row["conjectural"]
        out.append({"name": row["name"], "ok": ok, "got": row["estimate"], "want": row["prediction"],
                    "z": row["z"], "verdict": row["verdict"], "conjectural": row["conjectural"]})
    return out


EXACT_SUITES = {
    "prop-fw": suite_prop_fw,
    "thm-main1": suite_thm_main1,
    "bn": suite_bn,
    "lemma-count": suite_lemma_count,
    "boreico": suite_boreico,
    "corank": suite_corank,
    "thm-main3x": suite_thm_main3x,
}
PURE_SUITES = {
    "cl2": suite_cl2,
    "sum1": suite_sum1,
    "cl-finite": suite_cl_finite,
    "conj-limit": suite_conj_limit,
}
SUITES = sorted([*EXACT_SUITES, *PURE_SUITES, "conjecture"])


def run_suite(name: str, guard=None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, workers=1) -> dict:
    names = SUITES if name == "all" else [name]
    results = {}
    for s in names:
        if s in EXACT_SUITES:
            results[s] = EXACT_SUITES[s](guard)
        elif s in PURE_SUITES:
            results[s] = PURE_SUITES[s]()
        elif s == "conjecture":
            results[s] = suite_conjecture(samples, seed, workers)
        else:
            raise KeyError(f"unknown suite {s!r}")
    passed = all(c["ok"] for checks in results.values() for c in checks)
    return {"suites": results, "passed": passed}

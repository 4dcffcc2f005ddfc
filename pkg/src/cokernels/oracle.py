"""Exhaustive enumeration and seeded Monte Carlo for joint cokernel events."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt

import numpy as np

from . import batch
from .errors import GuardExceededError, TruncationError
from .fields import TABLE_LIMIT, FieldCtx
from .linalg import cokernel_type, matrix_from_index, poly_eval_matrix
from .module_stats import choose_truncation_level, corank, p_part_partition, validate_points
from .partitions import Partition
from .poly import Poly
from .qseries import RationalInterval
from .rings import context_from_descriptor

DEFAULT_GUARD = 2**24
DEFAULT_CHUNK = 4096
ENUM_BLOCK = 1 << 15
SIGMA_DIGITS = 12


def guard_from_env(default: int = DEFAULT_GUARD) -> int:
    value = os.environ.get("COKERNELS_ENUM_GUARD")
    return int(value) if value else default


# -- predicates ----------------------------------------------------------------------

@dataclass(frozen=True)
class CokerVanishes:
    def to_json(self):
        return {"predicate": "coker-vanishes"}


@dataclass(frozen=True)
class CokerTypeIs:
    partition: Partition

    def __post_init__(self):
        object.__setattr__(self, "partition", Partition(self.partition))

    def to_json(self):
        return {"predicate": "coker-type", "partition": list(self.partition)}


@dataclass(frozen=True)
class PPartIs:
    partition: Partition

    def __post_init__(self):
        object.__setattr__(self, "partition", Partition(self.partition))

    def to_json(self):
        return {"predicate": "p-part", "partition": list(self.partition)}


@dataclass(frozen=True)
class CorankIs:
    l: int

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("corank must be >= 0")

    def to_json(self):
        return {"predicate": "corank", "l": self.l}


def predicate_from_json(d: dict):
    kind = d["predicate"]
    if kind == "coker-vanishes":
        return CokerVanishes()
    if kind == "coker-type":
        return CokerTypeIs(tuple(d["partition"]))
    if kind == "p-part":
        return PPartIs(tuple(d["partition"]))
    if kind == "corank":
        return CorankIs(int(d["l"]))
    raise ValueError(f"unknown predicate {kind!r}")


@dataclass(frozen=True)
class EventSpec:
    """Joint event on a uniform A in Mat_n(ctx): every (P, predicate) holds."""

    ctx: object
    n: int
    conditions: tuple = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        polys = validate_points([P for P, _ in self.conditions], self.ctx)
        conds = tuple(zip(polys, (pred for _, pred in self.conditions)))
        for P, pred in conds:
            if isinstance(pred, CokerTypeIs):
                need = choose_truncation_level(pred.partition) + 1
                if self.ctx.level < need:
                    raise TruncationError(
                        f"type {tuple(pred.partition)} needs level {need}, ring has {self.ctx.level}")
            elif not isinstance(pred, (CokerVanishes, PPartIs, CorankIs)):
                raise TypeError(f"unknown predicate {pred!r}")
        object.__setattr__(self, "conditions", conds)

    @property
    def total(self) -> int:
        return self.ctx.size ** (self.n * self.n)

    def to_json(self) -> dict:
        return {"ring": self.ctx.describe(), "n": self.n,
                "conditions": [{"poly": list(P.coeffs), **pred.to_json()} for P, pred in self.conditions]}

    @classmethod
    def from_json(cls, d: dict) -> "EventSpec":
        ctx = context_from_descriptor(d["ring"])
        conds = [(Poly(ctx, tuple(c["poly"])), predicate_from_json(c)) for c in d["conditions"]]
        return cls(ctx, int(d["n"]), tuple(conds))


# -- scalar evaluation (reference path) ----------------------------------------------

def holds(spec: EventSpec, A) -> bool:
    """Whether a single matrix satisfies every condition of the spec."""
    ctx = spec.ctx
    F = ctx.field
    for P, pred in spec.conditions:
        if isinstance(pred, PPartIs):
            Abar = A if isinstance(ctx, FieldCtx) else _reduce(A, F)
            if p_part_partition(Abar, P.reduce()) != pred.partition:
                return False
            continue
        PA = poly_eval_matrix(P, A)
        if isinstance(pred, CokerVanishes):
            if corank(PA) != 0:
                return False
        elif isinstance(pred, CorankIs):
            if corank(PA) != pred.l:
                return False
        else:
            if cokernel_type(PA, require_exact=False) != pred.partition:
                return False
    return True


def _reduce(A, F):
    from .linalg import reduce_matrix
    return reduce_matrix(A, F)


def _scalar_hits(spec: EventSpec, start: int, stop: int) -> int:
    return sum(holds(spec, matrix_from_index(spec.ctx, spec.n, i)) for i in range(start, stop))


# -- batched evaluation --------------------------------------------------------------

def _target_exps(lam: Partition, n: int):
    if lam.length > n:
        return None
    return np.array(sorted([0] * (n - lam.length) + list(lam)), dtype=np.int64)


def _target_counts(lam: Partition, n: int):
    conj = list(lam.conjugate())
    if len(conj) > n:
        return None
    return np.array(conj + [0] * (n - len(conj)), dtype=np.int64)


def evaluate_batch(spec: EventSpec, A) -> np.ndarray:
    """Boolean mask over a (B, n, n) stack of encoded matrices."""
    ctx, n = spec.ctx, spec.n
    B = A.shape[0]
    ok = np.ones(B, dtype=bool)
    if n == 0:
        for _, pred in spec.conditions:
            if isinstance(pred, (CokerTypeIs, PPartIs)) and pred.partition:
                ok[:] = False
            if isinstance(pred, CorankIs) and pred.l:
                ok[:] = False
        return ok
    T = batch.tables_for(ctx)
    FT = batch.tables_for(ctx.field)
    Abar = None
    for P, pred in spec.conditions:
        if isinstance(pred, PPartIs):
            Pbar = P.reduce()
            target = _target_counts(pred.partition, n)
            if target is None or pred.partition.size * Pbar.degree > n:
                ok[:] = False
                continue
            if Abar is None:
                Abar = A if isinstance(ctx, FieldCtx) else batch.batch_residue(T, A)
            idx = np.flatnonzero(ok)
            counts = batch.batch_p_part(FT, list(Pbar.coeffs), Pbar.degree, Abar[idx])
            ok[idx] &= np.all(counts == target, axis=1)
            continue
        idx = np.flatnonzero(ok)
        PA = batch.batch_poly_eval(T, list(P.coeffs), A[idx])
        if isinstance(pred, CokerTypeIs):
            target = _target_exps(pred.partition, n)
            if target is None:
                ok[:] = False
                continue
            ok[idx] &= np.all(batch.batch_snf(T, PA) == target, axis=1)
        else:
            rk = batch.batch_rank(FT, batch.batch_residue(T, PA)) if T is not FT else batch.batch_rank(T, PA)
            want = 0 if isinstance(pred, CokerVanishes) else pred.l
            ok[idx] &= (n - rk) == want
    return ok


def _index_block(ctx, n: int, start: int, stop: int) -> np.ndarray:
    size = ctx.size
    idx = np.arange(start, stop, dtype=object if size ** (n * n) >= 2**62 else np.int64)
    out = np.empty((len(idx), n * n), dtype=np.int64)
    rest = idx
    for k in range(n * n):
        out[:, k] = (rest % size).astype(np.int64)
        rest = rest // size
    return out.reshape(len(idx), n, n)


def _batched_hits(spec: EventSpec, start: int, stop: int) -> int:
    hits = 0
    for s in range(start, stop, ENUM_BLOCK):
        e = min(stop, s + ENUM_BLOCK)
        A = _index_block(spec.ctx, spec.n, s, e)
        hits += int(np.count_nonzero(evaluate_batch(spec, A)))
    return hits


def _use_batch(spec: EventSpec) -> bool:
    return spec.ctx.size <= TABLE_LIMIT


def _range_hits(args):
    spec, start, stop, method = args
    if method == "batch":
        return _batched_hits(spec, start, stop)
    return _scalar_hits(spec, start, stop)


def _map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def enumerate_event(spec: EventSpec, guard: int | None = None, workers: int = 1,
                    method: str | None = None) -> tuple[int, int]:
    """Exact (hits, total) over all of Mat_n(ctx)."""
    guard = guard_from_env() if guard is None else guard
    total = spec.total
    if total > guard:
        raise GuardExceededError(f"|Mat_{spec.n}| = {total} exceeds the guard {guard}")
    if method is None:
        method = "batch" if _use_batch(spec) else "scalar"
    step = max(ENUM_BLOCK, -(-total // max(workers, 1)))
    jobs = [(spec, s, min(total, s + step), method) for s in range(0, total, step)]
    return sum(_map(_range_hits, jobs, workers)), total


# -- Monte Carlo -----------------------------------------------------------------------

@dataclass(frozen=True)
class McResult:
    samples: int
    hits: int
    seed: int
    chunk_size: int

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.hits, self.samples)

    @property
    def variance(self) -> Fraction:
        p = self.estimate
        return p * (1 - p) / self.samples

    @property
    def sigma(self) -> Fraction:
        """Standard error rounded down to 10^-12."""
        v = self.variance
        scale = 10**SIGMA_DIGITS
        return Fraction(isqrt(v.numerator * scale * scale // v.denominator), scale)

    def z_score(self, p) -> float:
        """(estimate - p) / sqrt(p (1 - p) / samples); infinite when p is 0 or 1 and missed."""
        p = Fraction(p)
        diff = self.estimate - p
        var = p * (1 - p) / self.samples
        if var == 0:
            return 0.0 if diff == 0 else float("inf")
        return float(diff) / sqrt(float(var))

    def to_json(self) -> dict:
        est, sig = self.estimate, self.sigma
        return {"samples": self.samples, "hits": self.hits, "seed": self.seed, "chunk_size": self.chunk_size,
                "estimate": {"num": str(est.numerator), "den": str(est.denominator)},
                "sigma": {"num": str(sig.numerator), "den": str(sig.denominator)}}


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    """Counter-based stream for one chunk; independent of scheduling."""
    return np.random.Generator(np.random.Philox(key=(chunk << 64) | seed))


def sample_chunk(spec: EventSpec, seed: int, chunk: int, count: int) -> np.ndarray:
    rng = chunk_generator(seed, chunk)
    return rng.integers(0, spec.ctx.size, size=(count, spec.n, spec.n), dtype=np.int64)


def _chunk_hits(args):
    spec, seed, chunk, count = args
    A = sample_chunk(spec, seed, chunk, count)
    if _use_batch(spec):
        return int(np.count_nonzero(evaluate_batch(spec, A)))
    from .linalg import Matrix
    return sum(holds(spec, Matrix(spec.ctx, a.tolist())) for a in A)


def mc_estimate(spec: EventSpec, samples: int, seed: int, chunk_size: int = DEFAULT_CHUNK,
                workers: int = 1) -> McResult:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if chunk_size < 1:
        raise ValueError("chunk size must be >= 1")
    jobs = []
    for c, start in enumerate(range(0, samples, chunk_size)):
        jobs.append((spec, seed, c, min(chunk_size, samples - start)))
    hits = sum(_map(_chunk_hits, jobs, workers))
    return McResult(samples, hits, seed, chunk_size)


# -- conjecture battery ----------------------------------------------------------------

Z_THRESHOLD = 4.0


@dataclass(frozen=True)
class BatteryCase:
    name: str
    spec: EventSpec
    prediction: RationalInterval
    proved: bool
    exact: Fraction | None = None  # finite-n value when known


def conjecture_battery(cases, samples: int, seed: int, chunk_size: int = DEFAULT_CHUNK,
                       workers: int = 1) -> dict:
    rows = []
    failed = False
    for case in cases:
        res = mc_estimate(case.spec, samples, seed, chunk_size, workers)
        z = res.z_score(case.prediction.midpoint)
        verdict = "PASS" if abs(z) <= Z_THRESHOLD else "FLAG"
        row = {"name": case.name, "spec": case.spec.to_json(), "method": "mc",
               "hits": res.hits, "samples": res.samples,
               "estimate": {"num": str(res.estimate.numerator), "den": str(res.estimate.denominator)},
               "prediction": case.prediction.to_json(), "z": round(z, 6), "verdict": verdict,
               "conjectural": not case.proved}
        if case.exact is not None:
            row["exact_finite_n"] = {"num": str(case.exact.numerator), "den": str(case.exact.denominator)}
            row["z_finite_n"] = round(res.z_score(case.exact), 6)
        rows.append(row)
        if case.proved and verdict == "FLAG":
            failed = True
    return {"seed": seed, "samples": samples, "chunk_size": chunk_size, "cases": rows, "failed": failed}


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


# -- histograms over full sweeps -------------------------------------------------------

def _check_guard(total: int, guard: int | None):
    guard = guard_from_env() if guard is None else guard
    if total > guard:
        raise GuardExceededError(f"sweep of {total} matrices exceeds the guard {guard}")


def ppart_histogram(F: FieldCtx, n: int, P: Poly, guard: int | None = None) -> dict:
    """Partition -> number of A in Mat_n(F) with mu_P(A) equal to it."""
    total = F.size ** (n * n)
    _check_guard(total, guard)
    if n == 0:
        return {Partition(): 1}
    FT = batch.tables_for(F)
    hist: dict = {}
    for s in range(0, total, ENUM_BLOCK):
        A = _index_block(F, n, s, min(total, s + ENUM_BLOCK))
        counts = batch.batch_p_part(FT, list(P.coeffs), P.degree, A)
        rows, mult = np.unique(counts, axis=0, return_counts=True)
        for row, m in zip(rows, mult):
            lam = Partition([int(c) for c in row if c]).conjugate()
            hist[lam] = hist.get(lam, 0) + int(m)
    return hist


def coker_histogram(ctx, n: int, P: Poly, guard: int | None = None) -> dict:
    """Capped cokernel type of P(A) -> count over Mat_n(ctx).

    Types with a part equal to the level are not determined at this level.
    """
    total = ctx.size ** (n * n)
    _check_guard(total, guard)
    if n == 0:
        return {Partition(): 1}
    T = batch.tables_for(ctx)
    hist: dict = {}
    for s in range(0, total, ENUM_BLOCK):
        A = _index_block(ctx, n, s, min(total, s + ENUM_BLOCK))
        exps = batch.batch_snf(T, batch.batch_poly_eval(T, list(P.coeffs), A))
        rows, mult = np.unique(exps, axis=0, return_counts=True)
        for row, m in zip(rows, mult):
            lam = Partition(sorted((int(e) for e in row if e), reverse=True))
            hist[lam] = hist.get(lam, 0) + int(m)
    return hist


def lift_type_counts(ring, Abar, P: Poly) -> dict:
    """Capped type of coker P(A) -> count, over all lifts A of Abar to the ring."""
    n = Abar.n
    T = batch.tables_for(ring)
    base = np.array([[ring.lift(x) for x in r] for r in Abar.rows], dtype=np.int64)
    ideal = np.array([a for a in range(ring.size) if ring.residue(a) == 0], dtype=np.int64)
    k = len(ideal)
    total = k ** (n * n)
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n * n), dtype=np.int64)
    for j in range(n * n):
        digits[:, j] = ideal[idx % k]
        idx //= k
    A = T.arith.add(base[None, :, :], digits.reshape(-1, n, n))
    exps = batch.batch_snf(T, batch.batch_poly_eval(T, list(P.coeffs), A))
    out: dict = {}
    rows, mult = np.unique(exps, axis=0, return_counts=True)
    for row, m in zip(rows, mult):
        lam = Partition(sorted((int(e) for e in row if e), reverse=True))
        out[lam] = out.get(lam, 0) + int(m)
    return out

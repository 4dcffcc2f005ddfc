"""Type data of concrete matrices: P-parts over F_q and cokernels of P(A) over
chain rings."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContextMismatchError, TruncationError
from .fields import FieldCtx
from .linalg import Matrix, _coerce_poly, cokernel_type, poly_eval_matrix, rank_rows, _mul_rows, poly_eval_rows
from .partitions import EMPTY, Partition
from .poly import Poly, is_irreducible


def _field_poly(P: Poly, F: FieldCtx) -> Poly:
    if P.ctx == F:
        return P
    if not isinstance(P.ctx, FieldCtx) and P.ctx.field == F:
        return P.reduce()
    raise ContextMismatchError(f"polynomial over {P.ctx} used with a matrix over {F}")


def p_part_partition(A: Matrix, P: Poly) -> Partition:
    """mu_P(A) from the rank sequence of powers of P(A).

    The number of parts >= k is (rank P(A)^{k-1} - rank P(A)^k) / deg P.
    """
    F = A.ctx
    if not isinstance(F, FieldCtx):
        raise ContextMismatchError("P-parts are computed over the residue field")
    P = _field_poly(P, F)
    if not is_irreducible(P):
        raise ValueError(f"{P} is not irreducible")
    return _p_part_rows(F, P.coeffs, P.degree, A.rows)


def _p_part_rows(F: FieldCtx, coeffs, degree: int, rows) -> Partition:
    n = len(rows)
    PA = poly_eval_rows(F, coeffs, rows)
    prev, power = n, PA
    counts = []
    while True:
        r = rank_rows(F, power)
        drop = prev - r
        if drop % degree:
            raise ArithmeticError("rank drop not divisible by deg P")
        if drop == 0:
            break
        counts.append(drop // degree)
        prev = r
        power = _mul_rows(F, power, PA)
    # counts[k] = number of parts >= k + 1, i.e. the conjugate partition
    return Partition(counts).conjugate() if counts else EMPTY


def choose_truncation_level(H) -> int:
    """Smallest N with m^N H = 0 (the largest part); work at level N + 1."""
    H = Partition(H)
    return H[0] if H else 0


@dataclass(frozen=True)
class PointReport:
    poly: Poly
    partition: Partition
    target: Partition | None = None

    @property
    def vanishes(self) -> bool:
        return not self.partition

    @property
    def matches(self) -> bool | None:
        return None if self.target is None else self.partition == self.target

    def to_json(self) -> dict:
        out = {"poly": list(self.poly.coeffs), "partition": list(self.partition), "vanishes": self.vanishes}
        if self.target is not None:
            out["target"] = list(self.target)
            out["matches"] = self.matches
        return out


@dataclass(frozen=True)
class TypeReport:
    n: int
    ring: dict
    points: tuple[PointReport, ...] = field(default_factory=tuple)

    @property
    def all_match(self) -> bool:
        return all(p.matches is not False for p in self.points)

    def to_json(self) -> dict:
        return {"n": self.n, "ring": self.ring, "points": [p.to_json() for p in self.points]}


def validate_points(points, ctx) -> list[Poly]:
    """Coerce polynomials into ctx; reductions must be distinct, monic and irreducible."""
    out, seen = [], set()
    F = ctx.field
    for P in points:
        P = _coerce_poly(P, ctx)
        if not P.is_monic:
            raise ValueError(f"{P} is not monic")
        red = P.reduce() if not isinstance(ctx, FieldCtx) else P
        if red.ctx != F or not is_irreducible(red):
            raise ValueError(f"reduction of {P} is not irreducible over F_{F.q}")
        if red in seen:
            raise ValueError(f"reductions of the points are not distinct ({red})")
        seen.add(red)
        out.append(P)
    return out


def coker_report(A: Matrix, points, targets=None) -> TypeReport:
    """Cokernel types of P_j(A) over the chain ring of A, compared with targets.

    Raises TruncationError when some cokernel is not determined at this level.
    """
    ctx = A.ctx
    points = validate_points(points, ctx)
    if targets is not None:
        targets = [Partition(t) for t in targets]
        if len(targets) != len(points):
            raise ValueError("one target per point is required")
        need = max((choose_truncation_level(t) + 1 for t in targets), default=1)
        if ctx.level < need:
            raise TruncationError(f"level {ctx.level} is below the required level {need}")
    reports = []
    for j, P in enumerate(points):
        lam = cokernel_type(poly_eval_matrix(P, A), require_exact=True)
        reports.append(PointReport(P, lam, None if targets is None else targets[j]))
    return TypeReport(A.n, ctx.describe(), tuple(reports))


def ppart_report(A: Matrix, points, targets=None) -> TypeReport:
    """mu_P(A) for each point over F_q, compared with targets."""
    if targets is not None and len(targets) != len(points):
        raise ValueError("one target per point is required")
    reports = []
    for j, P in enumerate(points):
        lam = p_part_partition(A, P)
        tgt = None if targets is None else Partition(targets[j])
        reports.append(PointReport(P, lam, tgt))
    return TypeReport(A.n, A.ctx.describe(), tuple(reports))


def corank(A: Matrix) -> int:
    """n - rank of the reduction of A mod m."""
    ctx = A.ctx
    F = ctx.field
    rows = A.rows if isinstance(ctx, FieldCtx) else [[ctx.residue(x) for x in r] for r in A.rows]
    return A.n - rank_rows(F, rows)

"""Square matrices over fields and chain rings: products, rank, polynomial
evaluation, Smith normal form and cokernel types."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ContextMismatchError, TruncationError
from .fields import FieldCtx
from .partitions import Partition
from .poly import Poly


@dataclass(frozen=True)
class Matrix:
    ctx: object
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        size = self.ctx.size
        if any(not 0 <= x < size for r in rows for x in r):
            raise ValueError("entry outside the element range of the context")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        return mat_add(self, other)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return mat_sub(self, other)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def matrix(ctx, rows) -> Matrix:
    return Matrix(ctx, tuple(tuple(r) for r in rows))


def identity(ctx, n: int) -> Matrix:
    return Matrix(ctx, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))


def zero_matrix(ctx, n: int) -> Matrix:
    return Matrix(ctx, ((0,) * n,) * n)


def diagonal(ctx, entries) -> Matrix:
    n = len(entries)
    return Matrix(ctx, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


def _check(A: Matrix, B: Matrix):
    if A.ctx != B.ctx:
        raise ContextMismatchError(f"{A.ctx} vs {B.ctx}")
    if A.n != B.n:
        raise ValueError("dimension mismatch")


def _mul_rows(ctx, a, b):
    add, mul = ctx.add, ctx.mul
    n = len(a)
    cols = list(zip(*b)) if n else []
    out = []
    for row in a:
        new = []
        for col in cols:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = add(s, mul(x, y))
            new.append(s)
        out.append(tuple(new))
    return tuple(out)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    _check(A, B)
    return Matrix(A.ctx, _mul_rows(A.ctx, A.rows, B.rows))


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    _check(A, B)
    add = A.ctx.add
    return Matrix(A.ctx, tuple(tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(A.rows, B.rows)))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    _check(A, B)
    sub = A.ctx.sub
    return Matrix(A.ctx, tuple(tuple(sub(x, y) for x, y in zip(r, s)) for r, s in zip(A.rows, B.rows)))


def mat_pow(A: Matrix, k: int) -> Matrix:
    result, base = identity(A.ctx, A.n), A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def reduce_matrix(A: Matrix, target) -> Matrix:
    """Entrywise image in R/m or in a lower-level quotient."""
    if A.ctx == target:
        return A
    red = A.ctx.reduce_to
    return Matrix(target, tuple(tuple(red(x, target) for x in r) for r in A.rows))


def lift_matrix(A: Matrix, ring) -> Matrix:
    """Entrywise digit lift of a residue-field matrix into a chain ring."""
    if A.ctx != ring.field:
        raise ContextMismatchError("matrix is not over the residue field of the ring")
    return Matrix(ring, tuple(tuple(ring.lift(x) for x in r) for r in A.rows))


def _coerce_poly(P: Poly, ctx) -> Poly:
    if P.ctx == ctx:
        return P
    if not isinstance(ctx, FieldCtx) and P.ctx == ctx.field:
        return P.lift_to(ctx)
    raise ContextMismatchError(f"polynomial over {P.ctx} applied to matrix over {ctx}")


def poly_eval_rows(ctx, coeffs, rows):
    """Horner evaluation of a coefficient list at a matrix given as rows."""
    n = len(rows)
    add = ctx.add
    if not coeffs:
        return tuple((0,) * n for _ in range(n))
    acc = tuple(tuple(coeffs[-1] if i == j else 0 for j in range(n)) for i in range(n))
    for c in reversed(coeffs[:-1]):
        acc = _mul_rows(ctx, acc, rows)
        if c:
            acc = tuple(tuple(add(x, c) if i == j else x for j, x in enumerate(r)) for i, r in enumerate(acc))
    return acc


def poly_eval_matrix(P: Poly, A: Matrix) -> Matrix:
    """P(A) by Horner's rule; a residue-field P is lifted into a ring context."""
    P = _coerce_poly(P, A.ctx)
    return Matrix(A.ctx, poly_eval_rows(A.ctx, P.coeffs, A.rows))


def rank_rows(F: FieldCtx, rows) -> int:
    M = [list(r) for r in rows]
    n_rows = len(M)
    n_cols = len(M[0]) if M else 0
    sub, mul, inv = F.sub, F.mul, F.inv
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        scale = inv(M[r][c])
        pivot_row = [mul(scale, x) for x in M[r]]
        M[r] = pivot_row
        for i in range(r + 1, n_rows):
            f = M[i][c]
            if f:
                M[i] = [sub(x, mul(f, y)) for x, y in zip(M[i], pivot_row)]
        r += 1
        if r == n_rows:
            break
    return r


def matrix_rank(A: Matrix) -> int:
    if not isinstance(A.ctx, FieldCtx):
        raise ContextMismatchError("rank is defined here over a field; reduce the matrix first")
    return rank_rows(A.ctx, A.rows)


def snf_rows(ctx, rows) -> tuple[int, ...]:
    """Smith exponents of a square matrix over a chain ring (or field).

    Pivots on an entry of minimal valuation, scales it to pi^v, clears its
    column by row operations and drops its row and column (the column
    operations clearing the row touch nothing else).  Zero diagonal entries
    are reported as the sentinel ``ctx.level``.
    """
    level = ctx.level
    val, div_pi, inv, mul, sub = ctx.valuation, ctx.div_pi, ctx.inv, ctx.mul, ctx.sub
    M = [list(r) for r in rows]
    live_rows = list(range(len(M)))
    live_cols = list(range(len(M)))
    exps = []
    while live_rows:
        best_v, pr, pc = level, -1, -1
        for i in live_rows:
            row = M[i]
            for j in live_cols:
                x = row[j]
                if x:
                    v = val(x)
                    if v < best_v:
                        best_v, pr, pc = v, i, j
                        if v == 0:
                            break
            if best_v == 0:
                break
        if best_v >= level:
            exps.extend([level] * len(live_rows))
            break
        v = best_v
        scale = inv(div_pi(M[pr][pc], v))
        pivot_row = M[pr] = [mul(scale, x) for x in M[pr]]
        for i in live_rows:
            if i != pr:
                x = M[i][pc]
                if x:
                    f = div_pi(x, v)
                    M[i] = [sub(a, mul(f, b)) if b else a for a, b in zip(M[i], pivot_row)]
        live_rows.remove(pr)
        live_cols.remove(pc)
        exps.append(v)
    return tuple(sorted(exps))


def smith_normal_form(A: Matrix) -> tuple[int, ...]:
    """Exponents e_1 <= ... <= e_n with A equivalent to diag(pi^{e_i})."""
    return snf_rows(A.ctx, A.rows)


def type_from_exponents(exps, level: int, require_exact: bool) -> Partition:
    if require_exact and any(e >= level for e in exps):
        raise TruncationError(
            f"cokernel has a summand not annihilated by m^{level - 1}; raise the level")
    return Partition(sorted((e for e in exps if e > 0), reverse=True))


def cokernel_type(A: Matrix, require_exact: bool = True) -> Partition:
    """Partition of the cokernel of A; exponents are capped at the level."""
    return type_from_exponents(smith_normal_form(A), A.ctx.level, require_exact)


# -- random and indexed matrices ---------------------------------------------------

def matrix_from_index(ctx, n: int, index: int) -> Matrix:
    """The index-th matrix in base-|ctx| row-major order."""
    size = ctx.size
    flat = []
    for _ in range(n * n):
        index, d = divmod(index, size)
        flat.append(d)
    return Matrix(ctx, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))


def random_matrix(ctx, n: int, rng: random.Random) -> Matrix:
    return Matrix(ctx, tuple(tuple(rng.randrange(ctx.size) for _ in range(n)) for _ in range(n)))


def is_invertible(A: Matrix) -> bool:
    R = A.ctx
    if isinstance(R, FieldCtx):
        return rank_rows(R, A.rows) == A.n
    return rank_rows(R.field, [[R.residue(x) for x in r] for r in A.rows]) == A.n


def random_invertible(ctx, n: int, rng: random.Random) -> Matrix:
    while True:
        g = random_matrix(ctx, n, rng)
        if is_invertible(g):
            return g


def companion_matrix(P: Poly) -> Matrix:
    """Companion matrix of a monic P (acts as t on F[t]/(P))."""
    if not P.is_monic:
        raise ValueError("companion matrix needs a monic polynomial")
    ctx, d = P.ctx, P.degree
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = ctx.neg(P.coeffs[i])
    return Matrix(ctx, tuple(tuple(r) for r in rows))


def block_diagonal(ctx, blocks) -> Matrix:
    n = sum(b.n for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                rows[off + i][off + j] = b.rows[i][j]
        off += b.n
    return Matrix(ctx, tuple(tuple(r) for r in rows))

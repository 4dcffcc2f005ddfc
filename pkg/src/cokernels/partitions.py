"""Integer partitions and the automorphism count w(q, lambda)."""

from __future__ import annotations

from fractions import Fraction


class Partition(tuple):
    """A weakly decreasing tuple of positive integers; ``Partition()`` is empty."""

    def __new__(cls, parts=()):
        parts = tuple(int(x) for x in parts)
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({tuple(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for x in self:
            out[x] = out.get(x, 0) + 1
        return out

    def to_str(self) -> str:
        return ",".join(map(str, self))


EMPTY = Partition()


def parse_partition(text: str) -> Partition:
    """'3,1,1' -> (3,1,1); the empty string is the empty partition."""
    text = text.strip().strip("()[]")
    if not text:
        return EMPTY
    return Partition(int(x) for x in text.split(","))


def conjugate(lam) -> Partition:
    lam = tuple(lam)
    if not lam:
        return EMPTY
    return Partition(sum(1 for x in lam if x > j) for j in range(lam[0]))


def partitions_of(m: int, max_part: int | None = None):
    """Partitions of m in reverse-lexicographic order."""
    if max_part is None:
        max_part = m
    if m == 0:
        yield EMPTY
        return
    for first in range(min(m, max_part), 0, -1):
        for rest in partitions_of(m - first, first):
            yield Partition((first,) + tuple(rest))


def partitions_up_to(m: int):
    """All partitions of size <= m, by size and then reverse-lexicographically."""
    if m < 0:
        raise ValueError("m must be >= 0")
    for k in range(m + 1):
        yield from partitions_of(k)


def aut_count(q: int, lam) -> int:
    """w(q, lambda) = |Aut_R(H)| for H of type lambda over a DVR with residue size q.

    w = q^{sum_j (lambda'_j)^2} * prod_i prod_{k=1}^{m_i} (1 - q^{-k}).
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    lam = Partition(lam)
    value = Fraction(q) ** sum(c * c for c in conjugate(lam))
    for mult in lam.multiplicities().values():
        for k in range(1, mult + 1):
            value *= 1 - Fraction(1, q**k)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral automorphism count for {lam}")
    return value.numerator


class ModuleType:
    """H = sum_i F_q[t]/(P^{nu_i}), or sum_i R/m^{lambda_i} when ``point`` is None."""

    __slots__ = ("q", "point", "partition")

    def __init__(self, q: int, partition, point=None):
        self.q = q
        self.point = point
        self.partition = Partition(partition)

    @property
    def degree(self) -> int:
        return 1 if self.point is None else self.point.degree

    @property
    def dimension(self) -> int:
        """dim over F_q."""
        return self.partition.size * self.degree

    def aut(self) -> int:
        return aut_count(self.q**self.degree, self.partition)

    def __eq__(self, other):
        return isinstance(other, ModuleType) and (self.q, self.point, self.partition) == (
            other.q, other.point, other.partition)

    def __hash__(self):
        return hash((self.q, self.point, self.partition))

    def __repr__(self):
        return f"ModuleType(q={self.q}, partition={tuple(self.partition)}, point={self.point})"

    def to_json(self) -> dict:
        pt = None if self.point is None else list(self.point.coeffs)
        return {"q": self.q, "point": pt, "partition": list(self.partition)}


BRUTE_FORCE_DIM = 6
BRUTE_FORCE_Q = 4
BRUTE_FORCE_SPACE = 3**16


def brute_force_aut_count(q: int, lam, point_degree: int = 1) -> int:
    """|Aut_{F_q[t]}(H_{P, lambda})| by exhaustive search of the commutant.

    H is realised as F_q^D with t acting by the block companion matrix of
    P^{lambda_1}, P^{lambda_2}, ... where P is the first irreducible of the
    requested degree.  The commutant {X : XT = TX} is solved for linearly and
    every element is tested for invertibility.
    """
    from .batch import tables_for
    from .fields import field_of_order, poly_mul
    from .linalg import block_diagonal, companion_matrix
    from .poly import Poly, first_irreducible

    import numpy as np

    lam = Partition(lam)
    d = point_degree
    dim = d * lam.size
    if dim > BRUTE_FORCE_DIM or q > BRUTE_FORCE_Q:
        raise ValueError(f"brute force guard exceeded (dimension {dim}, q = {q})")
    F = field_of_order(q)
    if dim == 0:
        return 1
    P = first_irreducible(F, d)
    blocks = []
    for part in lam:
        f = (1,)
        for _ in range(part):
            f = poly_mul(F, f, P.coeffs)
        blocks.append(companion_matrix(Poly(F, f)))
    T = block_diagonal(F, blocks).rows

    # linear system in the D*D unknowns x_{ab}: (XT - TX)_{ij} = 0
    eqs = []
    for i in range(dim):
        for j in range(dim):
            row = [0] * (dim * dim)
            for k in range(dim):
                row[i * dim + k] = F.add(row[i * dim + k], T[k][j])
                row[k * dim + j] = F.sub(row[k * dim + j], T[i][k])
            eqs.append(row)
    basis = nullspace(F, eqs)
    k = len(basis)
    if q**k > BRUTE_FORCE_SPACE:
        raise ValueError(f"brute force guard exceeded (commutant of size {q}^{k})")

    from .batch import ModArith, batch_det

    basis_arr = np.asarray(basis, dtype=np.int64)
    tab = tables_for(F)
    prime = isinstance(tab.arith, ModArith)
    if not prime:
        add, mul = (np.asarray(t) for t in F.tables[:2])
    total = 0
    chunk = 1 << 18
    for start in range(0, q**k, chunk):
        idx = np.arange(start, min(start + chunk, q**k), dtype=np.int64)
        coeffs = np.empty((k, idx.size), dtype=np.int64)
        rest = idx
        for c in range(k):
            coeffs[c] = rest % q
            rest = rest // q
        coeffs = coeffs.T
        if prime:
            # float products are exact here: entries stay below k * q^2 < 2^53
            X = (coeffs.astype(np.float64) @ basis_arr.astype(np.float64)).astype(np.int64) % q
        else:
            X = np.zeros((idx.size, dim * dim), dtype=np.int64)
            for c in range(k):
                X = add[X, mul[coeffs[:, c:c + 1], basis_arr[c][None, :]]]
        dets = batch_det(tab, X.reshape(-1, dim, dim))
        total += int(np.count_nonzero(dets))
    return total


def nullspace(F, rows) -> list[list[int]]:
    """Basis of {x : rows . x = 0} over the field F."""
    M = [list(r) for r in rows]
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = F.inv(M[r][c])
        M[r] = [F.mul(s, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(M[i][fc])
        basis.append(v)
    return basis


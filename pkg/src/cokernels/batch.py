"""Vectorised kernels over stacks of small matrices (numpy).

These mirror the scalar routines in :mod:`cokernels.linalg` for contexts with
at most ``TABLE_LIMIT`` elements and are used by the Monte-Carlo sampler and
the brute-force automorphism counter.  Stacks are int64 arrays of shape
(batch, n, n) holding encoded ring elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .fields import TABLE_LIMIT, FieldCtx


class ModArith:
    """Arithmetic in Z/m on integer arrays."""

    def __init__(self, m: int):
        self.m = m

    def add(self, a, b):
        return (a + b) % self.m

    def sub(self, a, b):
        return (a - b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def matmul(self, a, b):
        return np.matmul(a, b) % self.m


class GF2Arith(ModArith):
    """Z/2 with xor and and."""

    def __init__(self):
        super().__init__(2)

    def add(self, a, b):
        return a ^ b

    sub = add

    def mul(self, a, b):
        return a & b


class TableArith:
    """Arithmetic through dense operation tables."""

    def __init__(self, add, mul, neg):
        self._add = np.asarray(add, dtype=np.int64)
        self._mul = np.asarray(mul, dtype=np.int64)
        self._neg = np.asarray(neg, dtype=np.int64)

    def add(self, a, b):
        return self._add[a, b]

    def sub(self, a, b):
        return self._add[a, self._neg[b]]

    def mul(self, a, b):
        return self._mul[a, b]

    def matmul(self, a, b):
        n = a.shape[-1]
        acc = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for k in range(n):
            acc = self._add[acc, self._mul[a[..., :, k, None], b[..., None, k, :]]]
        return acc


@dataclass(frozen=True, eq=False)
class Tables:
    ctx: object
    arith: object
    level: int
    val: np.ndarray      # valuation of each element (level for 0)
    divpi: np.ndarray    # divpi[v, a] * pi^v = a whenever val(a) >= v
    inv: np.ndarray      # inverse of each unit (0 elsewhere)
    residue: np.ndarray  # image in the residue field


@lru_cache(maxsize=None)
def tables_for(ctx) -> Tables:
    if ctx.size > TABLE_LIMIT:
        raise ValueError(f"context with {ctx.size} elements is too large for batched kernels")
    els = range(ctx.size)
    if isinstance(ctx, FieldCtx):
        if ctx.q == 2:
            arith = GF2Arith()
        elif ctx.e == 1:
            arith = ModArith(ctx.p)
        else:
            arith = TableArith(*ctx.tables[:3])
    elif ctx.kind == "padic":
        arith = ModArith(ctx.size)
    else:
        add, mul, neg, _ = ctx.tables
        arith = TableArith(add, mul, neg)
    level = ctx.level
    val = np.array([ctx.valuation(a) for a in els], dtype=np.int64)
    divpi = np.zeros((level, ctx.size), dtype=np.int64)
    for v in range(level):
        for a in els:
            if val[a] >= v:
                divpi[v, a] = ctx.div_pi(a, v)
    inv = np.array([ctx.inv(a) if ctx.is_unit(a) else 0 for a in els], dtype=np.int64)
    residue = np.array([ctx.residue(a) for a in els], dtype=np.int64)
    return Tables(ctx, arith, level, val, divpi, inv, residue)


def batch_matmul(T: Tables, a, b):
    return T.arith.matmul(a, b)


def batch_poly_eval(T: Tables, coeffs, A):
    """Horner evaluation of one polynomial at every matrix of the stack."""
    B, n, _ = A.shape
    eye = np.eye(n, dtype=bool)
    acc = np.zeros_like(A)
    if not coeffs:
        return acc
    acc[:, eye] = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = T.arith.matmul(acc, A)
        if c:
            acc[:, eye] = T.arith.add(acc[:, eye], c)
    return acc


def batch_snf(T: Tables, M):
    """Sorted Smith exponents of every matrix in the stack (sentinel = level)."""
    M = np.array(M, dtype=np.int64, copy=True)
    B, n, _ = M.shape
    level = T.level
    ar = T.arith
    rows_alive = np.ones((B, n), dtype=bool)
    cols_alive = np.ones((B, n), dtype=bool)
    exps = np.full((B, n), level, dtype=np.int64)
    bidx = np.arange(B)
    for step in range(n):
        V = T.val[M]
        alive = rows_alive[:, :, None] & cols_alive[:, None, :]
        V = np.where(alive, V, level + 1)
        flat = V.reshape(B, -1).argmin(axis=1)
        r, c = np.divmod(flat, n)
        v = V[bidx, r, c]
        active = v < level
        exps[:, step] = np.where(active, v, level)
        vv = np.where(active, v, 0)
        unit = T.divpi[vv, M[bidx, r, c]]
        scale = T.inv[unit]
        prow = ar.mul(scale[:, None], M[bidx, r, :])
        col = M[bidx, :, c]
        f = T.divpi[vv[:, None], col]
        f = np.where(active[:, None] & rows_alive, f, 0)
        f[bidx, r] = 0
        M = ar.sub(M, ar.mul(f[:, :, None], prow[:, None, :]))
        M[bidx, r, :] = prow
        rows_alive[bidx, r] = False
        cols_alive[bidx, c] = False
    exps.sort(axis=1)
    return exps


def batch_rank(T: Tables, M):
    """Rank over a field (number of unit Smith exponents)."""
    return np.count_nonzero(batch_snf(T, M) == 0, axis=1)


def batch_residue(T: Tables, M):
    return T.residue[M]


def batch_p_part(FT: Tables, coeffs, degree: int, A):
    """Conjugate partitions of mu_P for a stack over a field.

    Returns an array of shape (batch, n) whose k-th column is the number of
    parts of mu_P that are >= k + 1.
    """
    B, n, _ = A.shape
    PA = batch_poly_eval(FT, coeffs, A)
    counts = np.zeros((B, n), dtype=np.int64)
    prev = np.full(B, n, dtype=np.int64)
    power = PA
    for k in range(n // degree + 1):
        if k:
            power = FT.arith.matmul(power, PA)
        r = batch_rank(FT, power)
        drop = prev - r
        if np.any(drop % degree):
            raise ArithmeticError("rank drop not divisible by the degree; is P irreducible?")
        if k < n:
            counts[:, k] = drop // degree
        if not drop.any():
            break
        prev = r
    return counts


def batch_det(T: Tables, M):
    """Determinants over a field by expansion in minors of the leading rows.

    minors[S] is the determinant of rows 0..|S|-1 restricted to the column
    set S; each row adds one level, n * 2^(n-1) products in total.
    """
    B, n, _ = M.shape
    ar = T.arith
    if isinstance(ar, ModArith) and factorial(n) * (ar.m - 1) ** n < 2**62:
        # exact integer determinant, reduced once at the end
        ar = _IntArith()
    rows = np.ascontiguousarray(np.moveaxis(M, 0, -1))  # (n, n, B)
    minors = {(): np.ones(B, dtype=np.int64)}
    for k in range(n):
        row = rows[k]
        nxt = {}
        for S, val in minors.items():
            for j in range(n):
                if j in S:
                    continue
                # sign of inserting column j into the sorted set S at the last row
                after = sum(1 for c in S if c > j)
                term = ar.mul(row[j], val)
                if after % 2:
                    term = -term if isinstance(ar, _IntArith) else _neg(T, term)
                key = tuple(sorted(S + (j,)))
                nxt[key] = term if key not in nxt else ar.add(nxt[key], term)
        minors = nxt
    if not n:
        return np.ones(B, dtype=np.int64)
    det = minors[tuple(range(n))]
    return det % T.arith.m if isinstance(ar, _IntArith) else det


class _IntArith:
    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b


def _neg(T: Tables, a):
    if isinstance(T.arith, GF2Arith):
        return a
    if isinstance(T.arith, ModArith):
        return (-a) % T.arith.m
    return T.arith._neg[a]

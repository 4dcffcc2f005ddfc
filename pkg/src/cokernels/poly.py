"""Polynomials over a FieldCtx or RingCtx, stored little-endian."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContextMismatchError
from .fields import FieldCtx, _is_irreducible, poly_trim


@dataclass(frozen=True)
class Poly:
    ctx: object
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = poly_trim(int(c) for c in self.coeffs)
        size = self.ctx.size
        if any(not 0 <= c < size for c in coeffs):
            raise ValueError("coefficient outside the element range of the context")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def reduce(self) -> "Poly":
        """Coefficientwise image modulo m (identity over a field)."""
        if isinstance(self.ctx, FieldCtx):
            return self
        return Poly(self.ctx.field, tuple(self.ctx.residue(c) for c in self.coeffs))

    def lift_to(self, ring) -> "Poly":
        if isinstance(self.ctx, FieldCtx):
            if ring.field != self.ctx:
                raise ContextMismatchError("ring residue field differs from polynomial field")
            return Poly(ring, tuple(ring.lift(c) for c in self.coeffs))
        if self.ctx == ring:
            return self
        raise ContextMismatchError(f"cannot move {self} into {ring}")

    def __add__(self, other: "Poly") -> "Poly":
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        a, b = a + (0,) * (m - len(a)), b + (0,) * (m - len(b))
        return Poly(self.ctx, tuple(self.ctx.add(x, y) for x, y in zip(a, b)))

    def __mul__(self, other: "Poly") -> "Poly":
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
        ctx = self.ctx
        out = [0] * max(len(self.coeffs) + len(other.coeffs) - 1, 0)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
        return Poly(ctx, tuple(out))

    def to_json(self) -> dict:
        F = self.ctx.field
        out = {"coeffs": list(self.coeffs), "modulus": list(F.modulus), "p": F.p}
        if not isinstance(self.ctx, FieldCtx):
            out["ring"] = self.ctx.describe()
        return out

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(reversed(terms)) or "0"


def poly(ctx, *coeffs) -> Poly:
    return Poly(ctx, tuple(coeffs))


def monomial_t(ctx) -> Poly:
    return Poly(ctx, (0, 1))


def is_t(P: Poly) -> bool:
    return P.coeffs == (0, 1)


@lru_cache(maxsize=4096)
def is_irreducible(P: Poly) -> bool:
    """Irreducibility over F_q of a monic polynomial of degree >= 1."""
    if not isinstance(P.ctx, FieldCtx):
        raise ContextMismatchError("irreducibility is tested over a field")
    if not P.is_monic:
        raise ValueError("is_irreducible expects a monic polynomial")
    if P.degree < 1:
        raise ValueError("is_irreducible expects degree >= 1")
    return _is_irreducible(P.ctx, P.coeffs)


def monic_polys(F: FieldCtx, degree: int):
    """All monic polynomials of a given degree, constant term varying slowest."""
    for low in itertools.product(range(F.q), repeat=degree):
        yield Poly(F, tuple(low) + (1,))


@lru_cache(maxsize=None)
def irreducibles(F: FieldCtx, degree: int) -> tuple[Poly, ...]:
    return tuple(P for P in monic_polys(F, degree) if _is_irreducible(F, P.coeffs))


def first_irreducible(F: FieldCtx, degree: int) -> Poly:
    return next(P for P in monic_polys(F, degree) if _is_irreducible(F, P.coeffs))

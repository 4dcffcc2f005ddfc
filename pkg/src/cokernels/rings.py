"""Finite chain rings R/m^{N+1}: the quotients of a complete DVR.

Three families are realised, each with residue field F_q and uniformizer pi:

* ``padic``     -- Z/p^level,                   pi = p
* ``equalchar`` -- F_q[t]/(t^level),             pi = t
* ``galois``    -- (Z/p^level)[x]/(lifted f(x)), pi = p

Elements are encoded as integers in ``range(size)``:
``padic`` uses the residue itself, ``equalchar`` the base-q digits of the
t-adic expansion, ``galois`` the base-p^level digits of the coefficient vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .fields import TABLE_LIMIT, FieldCtx, _digits, _undigits, make_field

KINDS = ("padic", "equalchar", "galois")


@dataclass(frozen=True)
class RingCtx:
    kind: str
    field: FieldCtx
    level: int
    modulus_lift: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring family {self.kind!r}")
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if self.kind == "padic" and self.field.e != 1:
            raise ValueError("Z/p^k has residue field F_p")
        if self.kind == "galois":
            lift = self.modulus_lift
            if lift is None:
                raise ValueError("Galois ring needs a lifted modulus")
            lift = tuple(int(c) % self.p**self.level for c in lift)
            object.__setattr__(self, "modulus_lift", lift)
            if len(lift) != self.field.e + 1 or lift[-1] != 1:
                raise ValueError("lifted modulus must be monic of degree e")
            if tuple(c % self.p for c in lift) != self.field.modulus:
                raise ValueError("lifted modulus does not reduce to the field modulus")
        elif self.modulus_lift is not None:
            raise ValueError("modulus_lift only applies to Galois rings")

    def __reduce__(self):
        return (RingCtx, (self.kind, self.field, self.level, self.modulus_lift))

    def __repr__(self):
        extra = f", modulus_lift={self.modulus_lift}" if self.modulus_lift else ""
        return f"RingCtx({self.kind!r}, q={self.q}, level={self.level}{extra})"

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return self.q**self.level

    @property
    def N(self) -> int:
        return self.level - 1

    zero = 0
    one = 1

    def elements(self) -> range:
        return range(self.size)

    def describe(self) -> dict:
        d = {"kind": self.kind, "p": self.p, "e": self.field.e,
             "modulus": list(self.field.modulus), "level": self.level}
        if self.modulus_lift:
            d["modulus_lift"] = list(self.modulus_lift)
        return d

    # -- digit helpers -------------------------------------------------------------

    @cached_property
    def _pk(self) -> int:
        return self.p**self.level

    def _vec(self, a: int) -> list[int]:
        if self.kind == "equalchar":
            return _digits(a, self.q, self.level)
        return _digits(a, self._pk, self.field.e)

    def _unvec(self, v) -> int:
        if self.kind == "equalchar":
            return _undigits(v, self.q)
        return _undigits(v, self._pk)

    # -- arithmetic ----------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.kind == "padic":
            return (a + b) % self._pk
        if self.kind == "equalchar":
            F = self.field
            return self._unvec([F.add(x, y) for x, y in zip(self._vec(a), self._vec(b))])
        pk = self._pk
        return self._unvec([(x + y) % pk for x, y in zip(self._vec(a), self._vec(b))])

    def neg(self, a: int) -> int:
        if self.kind == "padic":
            return -a % self._pk
        if self.kind == "equalchar":
            return self._unvec([self.field.neg(x) for x in self._vec(a)])
        return self._unvec([-x % self._pk for x in self._vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.kind == "padic":
            return a * b % self._pk
        if a == 0 or b == 0:
            return 0
        va, vb = self._vec(a), self._vec(b)
        if self.kind == "equalchar":
            F, L = self.field, self.level
            out = [0] * L
            for i, x in enumerate(va):
                if x:
                    for j in range(L - i):
                        if vb[j]:
                            out[i + j] = F.add(out[i + j], F.mul(x, vb[j]))
            return self._unvec(out)
        pk, e, f = self._pk, self.field.e, self.modulus_lift
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(va):
            for j, y in enumerate(vb):
                prod[i + j] += x * y
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k] % pk
            if c:
                for i in range(e + 1):
                    prod[k - e + i] -= c * f[i]
        return self._unvec([c % pk for c in prod[:e]])

    def pow(self, a: int, k: int) -> int:
        r = 1 % self.size if self.size > 1 else 0
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def residue(self, a: int) -> int:
        """Image of ``a`` in the residue field R/m."""
        if self.kind == "padic":
            return a % self.p
        if self.kind == "equalchar":
            return a % self.q
        return _undigits([c % self.p for c in self._vec(a)], self.p)

    def lift(self, x: int) -> int:
        """The digit-wise lift of a residue-field element into R."""
        if self.kind in ("padic", "equalchar"):
            return x
        return self._unvec(self.field.to_coeffs(x))

    def from_int(self, k: int) -> int:
        if self.kind == "padic":
            return k % self._pk
        if self.kind == "equalchar":
            return k % self.p
        return self._unvec([k % self._pk] + [0] * (self.field.e - 1))

    def is_unit(self, a: int) -> bool:
        return self.residue(a) != 0

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit")
        if self.kind == "padic":
            return pow(a, -1, self._pk)
        # |R^x| = q^{level-1} (q-1)
        return self.pow(a, self.q ** (self.level - 1) * (self.q - 1) - 1)

    @property
    def pi(self) -> int:
        """The uniformizer (0 when level = 1)."""
        if self.level == 1:
            return 0
        return self.q if self.kind == "equalchar" else self.from_int(self.p)

    def pi_power(self, v: int) -> int:
        if v >= self.level:
            return 0
        if self.kind == "equalchar":
            return self.q**v
        return self.from_int(self.p**v)

    def valuation(self, a: int) -> int:
        """Largest v <= level with a in m^v (level for a = 0)."""
        if a == 0:
            return self.level
        if self.kind == "equalchar":
            v = 0
            while a % self.q == 0:
                a //= self.q
                v += 1
            return v
        if self.kind == "padic":
            v = 0
            while a % self.p == 0:
                a //= self.p
                v += 1
            return v
        return min(self._int_val(c) for c in self._vec(a))

    def _int_val(self, c: int) -> int:
        if c == 0:
            return self.level
        v = 0
        while c % self.p == 0:
            c //= self.p
            v += 1
        return v

    def div_pi(self, a: int, v: int) -> int:
        """Some c with c * pi^v = a; requires valuation(a) >= v."""
        if v == 0:
            return a
        if self.kind == "equalchar":
            return a // self.q**v
        if self.kind == "padic":
            return a // self.p**v
        return self._unvec([c // self.p**v for c in self._vec(a)])

    # -- change of level -----------------------------------------------------------

    def truncate(self, level: int) -> "RingCtx":
        if not 1 <= level <= self.level:
            raise ValueError("can only truncate to a level in [1, current level]")
        return RingCtx(self.kind, self.field, level, self.modulus_lift)

    def reduce_to(self, a: int, target) -> int:
        """Image of ``a`` in a lower-level ring of the same family or in R/m."""
        if isinstance(target, FieldCtx):
            if target != self.field:
                raise ValueError("target field is not the residue field")
            return self.residue(a)
        if target.kind != self.kind or target.field != self.field or target.level > self.level:
            raise ValueError(f"cannot reduce {self} to {target}")
        if self.kind == "padic":
            return a % target._pk
        if self.kind == "equalchar":
            return a % target.size
        return target._unvec([c % target._pk for c in self._vec(a)])

    @cached_property
    def tables(self):
        """Dense add/mul/neg tables as nested lists (small rings only)."""
        if self.size > TABLE_LIMIT:
            raise ValueError("ring too large for dense tables")
        els = range(self.size)
        add = [[self.add(a, b) for b in els] for a in els]
        mul = [[self.mul(a, b) for b in els] for a in els]
        neg = [self.neg(a) for a in els]
        inv = [self.inv(a) if self.is_unit(a) else 0 for a in els]
        return add, mul, neg, inv


def padic_quotient(p: int, level: int) -> RingCtx:
    """Z/p^level."""
    return RingCtx("padic", make_field(p, 1), level)


def equal_char_quotient(field: FieldCtx, level: int) -> RingCtx:
    """F_q[t]/(t^level)."""
    return RingCtx("equalchar", field, level)


def galois_ring(p: int, level: int, e: int, modulus_lift=None) -> RingCtx:
    """GR(p^level, e); the default lift is the field modulus read as integers."""
    F = make_field(p, e)
    return RingCtx("galois", F, level, tuple(modulus_lift or F.modulus))


def context_from_descriptor(desc: dict):
    """Inverse of ``describe()`` for both fields and chain rings."""
    kind = desc["kind"]
    p, e = int(desc["p"]), int(desc.get("e", 1))
    F = FieldCtx(p, e, tuple(desc["modulus"])) if "modulus" in desc else make_field(p, e)
    if kind == "field":
        return F
    level = int(desc["level"])
    lift = desc.get("modulus_lift")
    return RingCtx(kind, F, level, tuple(lift) if lift else None)

"""Finite fields F_q = F_p[x]/(modulus) and polynomial arithmetic over them.

An element with coefficient vector (c_0, ..., c_{e-1}) is encoded as the
integer c_0 + c_1 p + ... + c_{e-1} p^{e-1}, so elements of a prime field are
plain residues and ``range(q)`` enumerates the field.  Polynomials over a
field are little-endian tuples of such integers with no trailing zeros; the
zero polynomial is ``()``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

TABLE_LIMIT = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(f for f in itertools.count(2) if q % f == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _digits(a: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        a, d = divmod(a, base)
        out.append(d)
    return out


def _undigits(ds, base: int) -> int:
    a = 0
    for d in reversed(ds):
        a = a * base + d
    return a


# -- raw polynomial arithmetic over F_p with integer coefficients -----------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _fp_rem(prod, mod, p)


def _fp_rem(a: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    # mod is monic
    a = _fp_trim(list(a))
    d = len(mod) - 1
    while len(a) - 1 >= d:
        c = a[-1]
        shift = len(a) - 1 - d
        for i, m in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * m) % p
        _fp_trim(a)
    return a


@dataclass(frozen=True)
class FieldCtx:
    """The field F_{p^e} realised as F_p[x]/(modulus)."""

    p: int
    e: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1:
            raise ValueError("extension degree must be >= 1")
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        if any(not 0 <= c < self.p for c in mod):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if self.e == 1:
            if mod != (0, 1):
                raise ValueError("prime fields use the modulus t")
        elif not _fp_is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over F_{self.p}")

    def __reduce__(self):
        return (FieldCtx, (self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, modulus={self.modulus})"

    def describe(self) -> dict:
        return {"kind": "field", "p": self.p, "e": self.e, "modulus": list(self.modulus), "level": 1}

    @property
    def q(self) -> int:
        return self.p**self.e

    size = q

    @property
    def level(self) -> int:
        return 1

    @property
    def field(self) -> "FieldCtx":
        return self

    zero = 0
    one = 1

    def elements(self) -> range:
        return range(self.q)

    # -- element conversion --------------------------------------------------

    def to_coeffs(self, a: int) -> list[int]:
        return _digits(a, self.p, self.e)

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.e or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"expected {self.e} residues in [0, {self.p})")
        return _undigits(coeffs, self.p)

    def from_int(self, k: int) -> int:
        return k % self.p

    # -- arithmetic ------------------------------------------------------------

    @cached_property
    def _log_tables(self):
        q, p = self.q, self.p
        for g in range(2, q):
            exp, x = [1], g
            while x != 1:
                exp.append(x)
                x = self._mul_raw(x, g)
            if len(exp) == q - 1:
                log = [0] * q
                for i, y in enumerate(exp):
                    log[y] = i
                return exp, log
        raise AssertionError("no primitive element found")  # pragma: no cover

    def _mul_raw(self, a: int, b: int) -> int:
        pa = _fp_trim(self.to_coeffs(a))
        pb = _fp_trim(self.to_coeffs(b))
        r = _fp_mulmod(pa, pb, self.modulus, self.p)
        return _undigits(r, self.p)

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        r, m = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * m
            a //= p
            b //= p
            m *= p
        return r

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if self.p == 2:
            return a
        p = self.p
        r, m = 0, 1
        while a:
            r += (-(a % p) % p) * m
            a //= p
            m *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        exp, log = self._log_tables
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        if self.e == 1:
            return pow(a, -1, self.p)
        exp, log = self._log_tables
        return exp[-log[a] % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def is_unit(self, a: int) -> bool:
        return a != 0

    def valuation(self, a: int) -> int:
        return 0 if a else 1

    def div_pi(self, a: int, v: int) -> int:
        if v:
            raise ValueError("a field has no nonzero uniformizer")
        return a

    def residue(self, a: int) -> int:
        return a

    @cached_property
    def tables(self):
        """Dense add/mul/neg/inv tables as nested lists (small fields only)."""
        if self.q > TABLE_LIMIT:
            raise ValueError("field too large for dense tables")
        els = range(self.q)
        add = [[self.add(a, b) for b in els] for a in els]
        mul = [[self.mul(a, b) for b in els] for a in els]
        neg = [self.neg(a) for a in els]
        inv = [0] + [self.inv(a) for a in range(1, self.q)]
        return add, mul, neg, inv


def _fp_is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    prime = FieldCtx(p, 1, (0, 1))
    return _is_irreducible(prime, tuple(mod))


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldCtx:
    """F_{p^e} with the lexicographically smallest monic irreducible modulus.

    Candidates are ordered by their coefficient tuple, constant term first.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if e == 1:
        return FieldCtx(p, 1, (0, 1))
    prime = make_field(p, 1)
    for low in itertools.product(range(p), repeat=e):
        cand = tuple(low) + (1,)
        if _is_irreducible(prime, cand):
            return FieldCtx(p, e, cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_of_order(q: int) -> FieldCtx:
    return make_field(*prime_power(q))


# -- polynomials over a FieldCtx (tuples of field elements) -------------------

def poly_trim(a) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_add(F: FieldCtx, a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim(F.add(x, y) for x, y in zip(a, b))


def poly_sub(F: FieldCtx, a, b) -> tuple[int, ...]:
    return poly_add(F, a, [F.neg(y) for y in b])


def poly_mul(F: FieldCtx, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F: FieldCtx, a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(poly_trim(a))
    lead_inv = F.inv(b[-1])
    db = len(b) - 1
    quot = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        c = F.mul(a[-1], lead_inv)
        shift = len(a) - 1 - db
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, y))
        a = list(poly_trim(a))
    return poly_trim(quot), tuple(a)


def poly_mod(F: FieldCtx, a, b) -> tuple[int, ...]:
    return poly_divmod(F, a, b)[1]


def poly_gcd(F: FieldCtx, a, b) -> tuple[int, ...]:
    """Monic gcd (``()`` when both inputs vanish)."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    if not a:
        return ()
    c = F.inv(a[-1])
    return tuple(F.mul(c, x) for x in a)


def poly_powmod(F: FieldCtx, a, k: int, m) -> tuple[int, ...]:
    result = poly_mod(F, (1,), m)
    base = poly_mod(F, a, m)
    while k:
        if k & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        base = poly_mod(F, poly_mul(F, base, base), m)
        k >>= 1
    return result


def _is_irreducible(F: FieldCtx, f: tuple[int, ...]) -> bool:
    # Ben-Or: f of degree d is irreducible iff gcd(x^{q^i} - x, f) = 1 for i <= d/2
    d = len(f) - 1
    if d <= 1:
        return d == 1
    x = (0, 1)
    h = x
    for _ in range(d // 2):
        h = poly_powmod(F, h, F.q, f)
        if poly_gcd(F, poly_sub(F, h, x), f) != (1,):
            return False
    return True

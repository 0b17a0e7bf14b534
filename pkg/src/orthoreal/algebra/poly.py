"""Univariate polynomials over F_q and their factorization.

Coefficients are field codes, lowest degree first.  Factorization is
square-free decomposition, distinct-degree splitting, then Cantor-Zassenhaus
equal-degree splitting driven by a seeded generator.
"""

from __future__ import annotations

import random
from collections import Counter
from functools import total_ordering

from ..errors import FieldMismatch, NotIrreducible, ZeroConstantTerm
from .field import Field

__all__ = ["FqPoly", "factorize", "reciprocal", "twist", "is_irreducible", "irreducibles"]


def _trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@total_ordering
class FqPoly:
    """Immutable polynomial over a :class:`Field`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        self.field = field
        self.coeffs = _trim([int(c) for c in coeffs])

    @classmethod
    def x(cls, field: Field) -> FqPoly:
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field: Field, c: int) -> FqPoly:
        return cls(field, (c,))

    @classmethod
    def from_ints(cls, field: Field, coeffs) -> FqPoly:
        """Coefficients given as integers mapped into the prime subfield."""
        return cls(field, [field.from_int(c) for c in coeffs])

    # basic protocol ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FqPoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def sort_key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __repr__(self):
        return f"FqPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        F = self.field
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = F.encode(c) if F.k == 1 else "(" + F.encode(c) + ")"
            mon = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if i == 0:
                terms.append(cs)
            elif c == 1:
                terms.append(mon)
            else:
                terms.append(f"{cs}*{mon}")
        return " + ".join(terms)

    def _check(self, other: FqPoly):
        if self.field != other.field:
            raise FieldMismatch("polynomials over different fields")

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead() == 1

    def monic(self) -> FqPoly:
        if not self.coeffs:
            return self
        F = self.field
        il = F.inv(self.lead())
        return FqPoly(F, [F.mul(c, il) for c in self.coeffs])

    # arithmetic -------------------------------------------------------------

    def __add__(self, other: FqPoly) -> FqPoly:
        self._check(other)
        F = self.field
        n = max(len(self), len(other))
        return FqPoly(F, [F.add(self[i], other[i]) for i in range(n)])

    def __neg__(self) -> FqPoly:
        F = self.field
        return FqPoly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other: FqPoly) -> FqPoly:
        return self + (-other)

    def __mul__(self, other) -> FqPoly:
        F = self.field
        if isinstance(other, int):
            return FqPoly(F, [F.mul(c, other) for c in self.coeffs])
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return FqPoly(F)
        res = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        res[i + j] = F.add(res[i + j], F.mul(a, b))
        return FqPoly(F, res)

    def __pow__(self, e: int) -> FqPoly:
        out = FqPoly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def divmod(self, other: FqPoly) -> tuple[FqPoly, FqPoly]:
        self._check(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        d = other.degree
        il = F.inv(other.lead())
        if len(r) - 1 < d:
            return FqPoly(F), self
        qc = [0] * (len(r) - d)
        oc = other.coeffs
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                m = F.mul(c, il)
                qc[i - d] = m
                for j in range(d + 1):
                    if oc[j]:
                        r[i - d + j] = F.sub(r[i - d + j], F.mul(m, oc[j]))
        return FqPoly(F, qc), FqPoly(F, r[:d])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def eval(self, a: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def derivative(self) -> FqPoly:
        F = self.field
        return FqPoly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: FqPoly) -> FqPoly:
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, mod: FqPoly) -> FqPoly:
        out = FqPoly.const(self.field, 1) % mod
        base = self % mod
        while e:
            if e & 1:
                out = (out * base) % mod
            base = (base * base) % mod
            e >>= 1
        return out

    def compose_neg(self) -> FqPoly:
        """f(-t)."""
        F = self.field
        return FqPoly(F, [c if i % 2 == 0 else F.neg(c) for i, c in enumerate(self.coeffs)])


def reciprocal(f: FqPoly) -> FqPoly:
    """Monic f* = f(0)^-1 t^deg f f(1/t); its roots are the inverses of those of f."""
    if not f.is_monic():
        raise ValueError("reciprocal requires a monic polynomial")
    if f[0] == 0:
        raise ZeroConstantTerm(f"{f} has zero constant term")
    F = f.field
    c0 = F.inv(f[0])
    return FqPoly(F, [F.mul(c, c0) for c in reversed(f.coeffs)])


def twist(f: FqPoly) -> FqPoly:
    """Monic polynomial whose roots are -1/alpha for the roots alpha of f (q odd, f irreducible)."""
    if f.field.p == 2:
        raise ValueError("twist is defined for odd q")
    if not is_irreducible(f):
        raise NotIrreducible(f"{f} is not irreducible")
    return reciprocal(f.compose_neg().monic())


def _pth_root(f: FqPoly) -> FqPoly:
    F = f.field
    p = F.p
    e = F.q // p  # a -> a^(q/p) inverts Frobenius on F_q
    return FqPoly(F, [F.pow(f.coeffs[i], e) for i in range(0, len(f.coeffs), p)])


def _squarefree(f: FqPoly) -> list[tuple[FqPoly, int]]:
    """Square-free decomposition of a monic f: list of (g_i, i) with f = prod g_i^i."""
    F = f.field
    one = FqPoly.const(F, 1)
    out: list[tuple[FqPoly, int]] = []
    if f.degree < 1:
        return out
    d = f.derivative()
    if not d:
        for g, m in _squarefree(_pth_root(f)):
            out.append((g, m * F.p))
        return out
    c = f.gcd(d)
    w = f // c
    i = 1
    while w != one:
        y = w.gcd(c)
        z = w // y
        if z != one:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c != one:
        for g, m in _squarefree(_pth_root(c.monic())):
            out.append((g, m * F.p))
    return out


def _ddf(f: FqPoly) -> list[tuple[FqPoly, int]]:
    F = f.field
    x = FqPoly.x(F)
    out = []
    h = x % f
    i = 0
    g = f
    while g.degree >= 2 * (i + 1):
        i += 1
        h = h.powmod(F.q, g)
        fac = g.gcd(h - x)
        if fac.degree > 0:
            out.append((fac, i))
            g = g // fac
            h = h % g
    if g.degree > 0:
        out.append((g.monic(), g.degree))
    return out


def _edf(f: FqPoly, d: int, rng: random.Random) -> list[FqPoly]:
    F = f.field
    n = f.degree
    if n == d:
        return [f]
    while True:
        r = FqPoly(F, [rng.randrange(F.q) for _ in range(n)])
        if r.degree < 1:
            continue
        if F.p == 2:
            # trace map r + r^2 + ... + r^(2^(k d - 1))
            t = r % f
            acc = t
            for _ in range(F.k * d - 1):
                t = (t * t) % f
                acc = acc + t
            cand = acc
        else:
            cand = r.powmod((F.q**d - 1) // 2, f) - FqPoly.const(F, 1)
        g = f.gcd(cand)
        if 0 < g.degree < n:
            return _edf(g, d, rng) + _edf(f // g, d, rng)


def factorize(f: FqPoly, seed: int = 0) -> list[tuple[FqPoly, int]]:
    """Irreducible factorization of a monic polynomial of degree >= 1.

    Returns (factor, multiplicity) pairs sorted by factor.
    """
    if f.degree < 1:
        raise ValueError("factorize needs degree >= 1")
    if not f.is_monic():
        raise ValueError("factorize needs a monic polynomial")
    rng = random.Random(seed)
    counts: Counter = Counter()
    for g, m in _squarefree(f):
        for h, d in _ddf(g):
            for irr in _edf(h, d, rng):
                counts[irr.monic()] += m
    return sorted(counts.items(), key=lambda fm: fm[0].sort_key())


def is_irreducible(f: FqPoly) -> bool:
    """Rabin's test."""
    if f.degree < 1:
        return False
    f = f.monic()
    n = f.degree
    if n == 1:
        return True
    F = f.field
    x = FqPoly.x(F)
    if x.powmod(F.q**n, f) != x % f:
        return False
    primes = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, r))]
    for r in primes:
        h = x.powmod(F.q ** (n // r), f)
        if f.gcd(h - x).degree > 0:
            return False
    return True


def irreducibles(field: Field, degree: int):
    """All monic irreducible polynomials of the given degree (brute force)."""
    q = field.q
    for code in range(q**degree):
        low = [(code // q**i) % q for i in range(degree)]
        f = FqPoly(field, low + [1])
        if is_irreducible(f):
            yield f

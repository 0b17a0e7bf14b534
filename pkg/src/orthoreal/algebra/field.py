"""Finite fields F_q, q = p^k, with elements encoded as integers in [0, q).

An element a_0 + a_1 x + ... + a_{k-1} x^{k-1} (mod the field modulus) is
encoded as the integer a_0 + a_1 p + ... + a_{k-1} p^{k-1}; the codes
0..p-1 are the prime subfield.  Prime fields use plain modular arithmetic,
extension fields use exp/log and addition tables.
"""

from __future__ import annotations

import enum
import functools
from itertools import product

import numpy as np

from ..errors import ZeroInSquareClass

__all__ = ["Field", "GF", "FqElement", "SquareClass", "square_class", "is_prime", "prime_power"]


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
    """Return (p, k) with q = p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    if not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


class SquareClass(enum.Enum):
    """Coset of (F_q^x)^2 in F_q^x."""

    TRIVIAL = 0
    NONSQUARE = 1

    def __mul__(self, other: SquareClass) -> SquareClass:
        return SquareClass(self.value ^ other.value)

    def __str__(self) -> str:
        return "Trivial" if self is SquareClass.TRIVIAL else "NonSquare"


def _poly_mulmod_p(a, b, mod, p):
    # dense coefficient lists, low degree first; mod monic
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    k = len(mod) - 1
    for i in range(len(res) - 1, k - 1, -1):
        c = res[i]
        if c:
            for j in range(k + 1):
                res[i - k + j] = (res[i - k + j] - c * mod[j]) % p
    res = res[:k] + [0] * max(0, k - len(res))
    return res


def _is_irreducible_p(mod, p):
    """Brute-force irreducibility over F_p for small degree (root/factor search)."""
    k = len(mod) - 1
    if k == 1:
        return True
    # trial division by all monic polynomials of degree 1..k//2
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            div = list(low) + [1]
            r = list(mod)
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i]
                if c:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - c * div[j]) % p
            if not any(r[:d]):
                return False
    return True


class Field:
    """The finite field with q = p**k elements.

    The modulus for k > 1 is the first monic irreducible polynomial of degree
    k over F_p in lexicographic order of its lower coefficients (constant term
    most significant); it is exposed as :attr:`modulus` (low degree first).
    """

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        if self.q >= 2**63:
            raise ValueError("q must fit in a 64-bit word")
        self.dtype = np.uint8 if self.q <= 256 else np.int64
        if k == 1:
            self.modulus = (0, 1)
            self._prime = True
            self._big = p >= 2**26
        else:
            if self.q > 2**16:
                raise ValueError("extension fields are table driven; q <= 65536 required")
            self._prime = False
            self._big = False
            self.modulus = self._find_modulus()
            self._build_tables()
        self._half = (self.q - 1) // 2

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    def __reduce__(self):
        return (GF, (self.q,))

    @property
    def is_prime_field(self) -> bool:
        return self._prime

    # construction ---------------------------------------------------------

    def _find_modulus(self):
        p, k = self.p, self.k
        for code in range(p**k):
            low = [(code // p**i) % p for i in range(k)]
            if low[0] == 0:
                continue
            mod = tuple(low) + (1,)
            if _is_irreducible_p(mod, p):
                return mod
        raise AssertionError("no irreducible polynomial found")

    def _encode(self, coeffs) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def _decode(self, code: int) -> list[int]:
        return [(code // self.p**i) % self.p for i in range(self.k)]

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        digits = np.array([self._decode(c) for c in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        self._digits = digits
        self._add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int64)
        self._neg = (((-digits) % p) @ weights).astype(np.int64)
        # primitive element by trial
        mod = list(self.modulus)
        for cand in range(p, q):
            exp = [0] * (q - 1)
            cur = [1] + [0] * (k - 1)
            g = self._decode(cand)
            seen_one = False
            for i in range(q - 1):
                code = self._encode(cur)
                if i > 0 and code == 1:
                    seen_one = True
                    break
                exp[i] = code
                cur = _poly_mulmod_p(cur, g, mod, p)
            if not seen_one and self._encode(cur) == 1:
                break
        else:
            raise AssertionError("no primitive element")
        self.primitive = cand
        exp_arr = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        log[exp_arr[: q - 1]] = np.arange(q - 1)
        self._exp = exp_arr
        self._log = log
        a = np.arange(q)
        mul = exp_arr[(log[:, None] + log[None, :]) % (q - 1)]
        mul[0, :] = 0
        mul[:, 0] = 0
        self._mul = mul.astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp_arr[(-log[1:]) % (q - 1)]
        self._inv = inv
        self._add_l = self._add.tolist()
        self._mul_l = self._mul.tolist()
        self._neg_l = self._neg.tolist()
        self._inv_l = inv.tolist()
        del a

    # scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._prime:
            return (a + b) % self.p
        return self._add_l[a][b]

    def sub(self, a: int, b: int) -> int:
        if self._prime:
            return (a - b) % self.p
        return self._add_l[a][self._neg_l[b]]

    def neg(self, a: int) -> int:
        if self._prime:
            return (-a) % self.p
        return self._neg_l[a]

    def mul(self, a: int, b: int) -> int:
        if self._prime:
            return (a * b) % self.p
        return self._mul_l[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._prime:
            return pow(a, -1, self.p)
        return self._inv_l[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if self._prime:
            return pow(a, e, self.p)
        if a == 0:
            return 0 if e > 0 else 1
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True
        return self.pow(a, self._half) == 1

    def sqrt(self, a: int) -> int | None:
        for b in range(self.q):
            if self.mul(b, b) == a:
                return b
        return None

    def nonsquare(self) -> int:
        """Smallest code that is not a square (q odd)."""
        if self.p == 2:
            raise ValueError("every element is a square in characteristic 2")
        return next(a for a in range(1, self.q) if not self.is_square(a))

    # vectorised arithmetic --------------------------------------------------

    def asarray(self, a) -> np.ndarray:
        arr = np.asarray(a, dtype=object if self._big else np.int64)
        return arr

    def vadd(self, a, b):
        if self._prime:
            return (a + b) % self.p
        return self._add[a, b]

    def vsub(self, a, b):
        if self._prime:
            return (a - b) % self.p
        return self._add[a, self._neg[b]]

    def vneg(self, a):
        if self._prime:
            return (-a) % self.p
        return self._neg[a]

    def vmul(self, a, b):
        if self._prime:
            return (a * b) % self.p
        return self._mul[a, b]

    def vinv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self._prime:
            return np.vectorize(lambda x: pow(int(x), -1, self.p), otypes=[np.int64])(a)
        return self._inv[a]

    def matmul(self, a, b):
        """Matrix product over F_q; broadcasts over leading batch axes."""
        if self._prime:
            if self._big:
                return np.asarray(np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)) % self.p
            return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.ndim == 1:
            a = a[None, :]
            return self.matmul(a, b)[..., 0, :]
        if b.ndim == 1:
            return self.matmul(a, b[:, None])[..., 0]
        m = a.shape[-1]
        out = None
        for j in range(m):
            term = self._mul[a[..., :, j, None], b[..., j, None, :]]
            out = term if out is None else self._add[out, term]
        return out

    def dot(self, a, b) -> int:
        """Scalar product of two vectors."""
        return int(self.matmul(np.asarray(a)[None, :], np.asarray(b)[:, None])[0, 0])

    def vsum(self, a, axis=-1):
        """Sum over one axis."""
        if self._prime:
            return np.sum(a, axis=axis) % self.p
        a = np.moveaxis(np.asarray(a), axis, 0)
        out = a[0]
        for x in a[1:]:
            out = self._add[out, x]
        return out

    # text encoding ----------------------------------------------------------

    def encode(self, a: int) -> str:
        if self.k == 1:
            return str(int(a))
        return ",".join(str(d) for d in self._decode(int(a)))

    def decode(self, s: str) -> int:
        if self.k == 1:
            return int(s) % self.p
        digits = [int(x) for x in s.split(",")]
        if len(digits) != self.k or any(not 0 <= d < self.p for d in digits):
            raise ValueError(f"bad element encoding {s!r} for {self!r}")
        return self._encode(digits)

    def describe(self) -> dict:
        return {"q": self.q, "p": self.p, "k": self.k, "modulus": list(self.modulus)}


@functools.cache
def _field(p: int, k: int) -> Field:
    return Field(p, k)


def GF(q: int) -> Field:
    """Cached field with q elements."""
    p, k = prime_power(q)
    return _field(p, k)


class FqElement:
    """Thin value wrapper around a field code, for callers that want operators."""

    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int):
        self.field = field
        self.code = int(code) % field.q if field.k == 1 else int(code)

    def _coerce(self, other) -> int:
        if isinstance(other, FqElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else FqElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else FqElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else FqElement(self.field, self.field.sub(b, self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else FqElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return NotImplemented if b is NotImplemented else FqElement(self.field, self.field.div(self.code, b))

    def __neg__(self):
        return FqElement(self.field, self.field.neg(self.code))

    def __pow__(self, e: int):
        if e < 0:
            return FqElement(self.field, self.field.pow(self.field.inv(self.code), -e))
        return FqElement(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FqElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __repr__(self):
        return f"FqElement({self.field!r}, {self.field.encode(self.code)})"

    def inverse(self) -> FqElement:
        return FqElement(self.field, self.field.inv(self.code))


def square_class(field: Field, a: int) -> SquareClass:
    """Square class of a nonzero field element (always trivial for q even)."""
    if isinstance(a, FqElement):
        a = a.code
    if a == 0:
        raise ZeroInSquareClass("square class of zero is undefined")
    if field.p == 2:
        return SquareClass.TRIVIAL
    return SquareClass.TRIVIAL if field.pow(a, field._half) == 1 else SquareClass.NONSQUARE

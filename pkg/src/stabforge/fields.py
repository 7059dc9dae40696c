"""Exact scalar domains: the rationals, prime fields, and small extension fields.

Every other module computes over one of these.  Field objects are immutable,
hashable, and expose a tiny common protocol (``zero``, ``one``, ``add``,
``mul``, ``inv``, ``coerce``) so that generic elimination code can run over
any of them.  Hot numerical paths (numpy modular elimination) bypass the
protocol and work on raw integer arrays instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24 (covers 64 bits)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Rationals:
    """The field of rational numbers; elements are ``fractions.Fraction``."""

    characteristic: int = 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def scalar_str(self, a) -> str:
        return str(a)

    def __repr__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    """GF(p); elements are ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {self.p}")
            return x.numerator % self.p * pow(den, -1, self.p) % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def scalar_str(self, a) -> str:
        return str(a)

    def __repr__(self):
        return f"GF({self.p})"


def _poly_mulmod(a: Tuple[int, ...], b: Tuple[int, ...], modulus, p: int):
    # schoolbook product of coefficient tuples, reduced by the monic modulus
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(e):
                prod[k - e + j] = (prod[k - e + j] - c * modulus[j]) % p
    return tuple(prod[:e])


def _find_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """First monic irreducible of degree e over GF(p), low-to-high coefficients."""
    if e == 1:
        return (0, 1)

    def poly_iter(deg):
        # all monic polynomials of given degree, deterministic order
        total = p**deg
        for code in range(total):
            coeffs = []
            c = code
            for _ in range(deg):
                coeffs.append(c % p)
                c //= p
            yield tuple(coeffs) + (1,)

    def divides(d, f):
        # trial division of f by d, both monic coefficient tuples
        rem = list(f)
        while len(rem) >= len(d) and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) < len(d):
                break
            shift = len(rem) - len(d)
            lead = rem[-1]
            for i, di in enumerate(d):
                rem[shift + i] = (rem[shift + i] - lead * di) % p
            rem.pop()
        return not any(rem)

    small = []
    for deg in range(1, e // 2 + 1):
        for g in poly_iter(deg):
            if deg == 1 or not any(divides(h, g) for h in small if len(h) - 1 <= deg // 2):
                small.append(g)
    for f in poly_iter(e):
        if f[0] == 0:
            continue
        if not any(divides(g, f) for g in small):
            return f
    raise RuntimeError("no irreducible found")  # unreachable


@dataclass(frozen=True)
class ExtensionField:
    """GF(p^e) as GF(p)[x]/(modulus); elements are coefficient tuples of length e.

    Used only where a computation genuinely needs more than p points of a
    characteristic-p field (generic orbit sampling); the defining polynomial is
    the deterministic first irreducible so field objects compare equal across
    runs.
    """

    p: int
    e: int
    modulus: Tuple[int, ...] = field(default=None)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.e < 1:
            raise ValueError("extension degree must be >= 1")
        if self.modulus is None:
            object.__setattr__(self, "modulus", _find_irreducible(self.p, self.e))

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self) -> int:
        return self.p**self.e

    @property
    def zero(self):
        return (0,) * self.e

    @property
    def one(self):
        return (1,) + (0,) * (self.e - 1)

    def coerce(self, x):
        if isinstance(x, tuple):
            if len(x) != self.e:
                raise ValueError("wrong tuple length")
            return tuple(c % self.p for c in x)
        if isinstance(x, Fraction):
            base = PrimeField(self.p).coerce(x)
            return (base,) + (0,) * (self.e - 1)
        return (int(x) % self.p,) + (0,) * (self.e - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        return _poly_mulmod(a, b, self.modulus, self.p)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError
        # a^(q-2) by square and multiply
        result = self.one
        base = a
        n = self.size - 2
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def from_int(self, n: int):
        """Element whose base-p digits are n's; enumerates the field for n < p^e."""
        coeffs = []
        for _ in range(self.e):
            coeffs.append(n % self.p)
            n //= self.p
        return tuple(coeffs)

    def scalar_str(self, a) -> str:
        return ",".join(str(c) for c in a)

    def __repr__(self):
        return f"GF({self.p}^{self.e})"


QQ = Rationals()


def field_from_characteristic(char: int, ext_degree: int = 1):
    """Field of the given characteristic: 0 -> rationals, p -> GF(p^ext_degree)."""
    if char == 0:
        return QQ
    if ext_degree == 1:
        return PrimeField(char)
    return ExtensionField(char, ext_degree)


def field_to_json(f) -> dict:
    if isinstance(f, Rationals):
        return {"kind": "rationals"}
    if isinstance(f, PrimeField):
        return {"kind": "prime", "p": f.p}
    return {"kind": "extension", "p": f.p, "e": f.e, "modulus": list(f.modulus)}


def field_from_json(d: dict):
    if d["kind"] == "rationals":
        return QQ
    if d["kind"] == "prime":
        return PrimeField(d["p"])
    return ExtensionField(d["p"], d["e"], tuple(d["modulus"]))

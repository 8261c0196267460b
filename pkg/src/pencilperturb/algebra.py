"""Exact scalar fields, univariate polynomials and homogeneous polynomials.

Scalars are plain Python values: :class:`fractions.Fraction` over Q and
canonical residues ``0 <= a < p`` over GF(p).  A :class:`Field` object carries
the arithmetic, so matrices and polynomials can stay as tuples of raw values.

Homogeneous polynomials in (s, t) are stored factored as ``t^m * F(s, t)``
where ``F`` is the homogenization of a monic polynomial ``f(s)`` with
``f(0, ...)`` arbitrary; the bivariate expansion is never stored.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


class Field:
    """Base class for the two supported fields."""

    size: int | None = None
    zero: object
    one: object

    def __call__(self, x):
        raise NotImplementedError

    def red(self, x):
        return x

    def add(self, a, b):
        return self.red(a + b)

    def sub(self, a, b):
        return self.red(a - b)

    def mul(self, a, b):
        return self.red(a * b)

    def neg(self, a):
        return self.red(-a)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    def candidates(self) -> Iterator:
        """Field elements in the canonical search order 0, 1, 2, ..."""
        k = 0
        while self.size is None or k < self.size:
            yield self(k)
            k += 1

    def elements(self) -> list:
        if self.size is None:
            raise ValueError("Q has no finite element list")
        return list(range(self.size))

    def parse(self, token):
        raise NotImplementedError

    def dump(self, a):
        raise NotImplementedError


class Rationals(Field):
    name = "q"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x)
        return Fraction(x)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def parse(self, token):
        if isinstance(token, bool) or not isinstance(token, (int, str)):
            raise ValueError(f"bad rational entry {token!r}")
        return Fraction(token)

    def dump(self, a):
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def random(self, rng, height: int = 3):
        return Fraction(rng.randint(-height, height))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.size = p
        self.zero = 0
        self.one = 1
        self.name = f"gf({p})"

    def __call__(self, x):
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return int(x) % self.p

    def red(self, x):
        return x % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def parse(self, token):
        if isinstance(token, bool) or not isinstance(token, int):
            raise ValueError(f"bad GF({self.p}) entry {token!r}")
        return token % self.p

    def dump(self, a):
        return int(a)

    def random(self, rng, height: int = 0):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Parse ``"q"`` or ``"gf(p)"``."""
    key = name.strip().lower().replace(" ", "")
    if key in ("q", "qq", "rationals"):
        return QQ
    if key.startswith("gf(") and key.endswith(")"):
        return PrimeField(int(key[3:-1]))
    raise ValueError(f"unknown field {name!r}")


class Poly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("F", "c")

    def __init__(self, F: Field, coeffs: Iterable = (), _trusted: bool = False):
        if _trusted:
            c = tuple(coeffs)
        else:
            c = [F(x) for x in coeffs]
            while c and c[-1] == 0:
                c.pop()
            c = tuple(c)
        self.F = F
        self.c = c

    @classmethod
    def const(cls, F: Field, a) -> Poly:
        return cls(F, (a,))

    @classmethod
    def one(cls, F: Field) -> Poly:
        return cls(F, (F.one,), True)

    @classmethod
    def zero(cls, F: Field) -> Poly:
        return cls(F, (), True)

    @classmethod
    def s(cls, F: Field) -> Poly:
        return cls(F, (F.zero, F.one), True)

    @classmethod
    def linear(cls, F: Field, c0, c1) -> Poly:
        return cls(F, (c0, c1))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else self.F.zero

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def coeff(self, k: int):
        return self.c[k] if 0 <= k < len(self.c) else self.F.zero

    def monic(self) -> Poly:
        if not self.c:
            raise ZeroDivisionError("zero polynomial has no monic form")
        if self.c[-1] == 1:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def scale(self, k) -> Poly:
        F = self.F
        if k == 0:
            return Poly.zero(F)
        return Poly(F, tuple(F.mul(a, k) for a in self.c), True)

    def shift(self, k: int) -> Poly:
        """Multiply by s**k."""
        if not self.c:
            return self
        return Poly(self.F, (self.F.zero,) * k + self.c, True)

    def __add__(self, other: Poly) -> Poly:
        F = self.F
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = F.red(out[i] + x)
        while out and out[-1] == 0:
            out.pop()
        return Poly(F, out, True)

    def __neg__(self) -> Poly:
        F = self.F
        return Poly(F, tuple(F.neg(a) for a in self.c), True)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(self.F(other))
        F = self.F
        a, b = self.c, other.c
        if not a or not b:
            return Poly.zero(F)
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        out = [F.red(v) for v in out]
        return Poly(F, out, True)

    __rmul__ = __mul__

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        F = self.F
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = len(other.c) - 1
        if len(r) - 1 < db:
            return Poly.zero(F), self
        inv_lc = F.inv(other.c[-1])
        q = [F.zero] * (len(r) - db)
        bc = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            coef = F.mul(r[k + db], inv_lc)
            q[k] = coef
            if coef != 0:
                for j in range(db + 1):
                    r[k + j] = F.red(r[k + j] - coef * bc[j])
        del r[db:]
        while r and r[-1] == 0:
            r.pop()
        return Poly(F, q, True), Poly(F, r, True)

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = divmod(self, other)
        if r.c:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: Poly) -> bool:
        """True when ``self | other``; zero divides only zero."""
        if not self.c:
            return not other.c
        return not (other % self).c

    def __pow__(self, k: int) -> Poly:
        out = Poly.one(self.F)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        F = self.F
        acc = F.zero
        for a in reversed(self.c):
            acc = F.red(acc * x + a)
        return acc

    def root_multiplicity(self, lam) -> int:
        """Exponent of (s - lam) in a nonzero polynomial."""
        if not self.c:
            raise ValueError("zero polynomial")
        lin = Poly(self.F, (self.F.neg(self.F(lam)), self.F.one), True)
        k, cur = 0, self
        while True:
            q, r = divmod(cur, lin)
            if r.c:
                return k
            k, cur = k + 1, q

    def reversed(self, degree: int) -> Poly:
        """s**degree * p(1/s) for ``degree >= self.degree``."""
        c = self.c + (self.F.zero,) * (degree + 1 - len(self.c))
        return Poly(self.F, tuple(reversed(c)))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.c == other.c and self.F == other.F

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a == 0:
                continue
            mono = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if mono and a == 1:
                terms.append(mono)
            else:
                terms.append(f"{a}*{mono}" if mono else f"{a}")
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two polynomials, not both zero."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, u, v) with u*a + v*b = g, g monic."""
    F = a.F
    r0, r1 = a, b
    u0, u1 = Poly.one(F), Poly.zero(F)
    v0, v1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    k = F.inv(r0.lc)
    return r0.scale(k), u0.scale(k), v0.scale(k)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def rational_roots(f: Poly) -> list:
    """Distinct roots of ``f`` lying in Q, ascending."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    den = 1
    for a in f.c:
        den = den * a.denominator // math.gcd(den, a.denominator)
    ints = [int(a * den) for a in f.c]
    roots = set()
    low = 0
    while ints[low] == 0:
        low += 1
    if low:
        roots.add(Fraction(0))
    ints = ints[low:]
    a0, an = abs(ints[0]), abs(ints[-1])
    if len(ints) > 1:
        for p in _divisors(a0):
            for q in _divisors(an):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if f(cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def _divisors(k: int) -> list[int]:
    out = []
    for d in range(1, math.isqrt(k) + 1):
        if k % d == 0:
            out.append(d)
            out.append(k // d)
    return out


def roots_in_field(f: Poly) -> list:
    """Distinct roots of ``f`` in its base field, in candidate order."""
    F = f.F
    if F.is_finite:
        return [a for a in F.elements() if f(a) == 0]
    return rational_roots(f)


class HomogPoly:
    """Homogeneous polynomial ``t^m * t^deg(f) * f(s/t)`` with ``f`` monic.

    ``HomogPoly.zero(F)`` is the distinguished zero value used for indices
    past the rank in divisibility chains.
    """

    __slots__ = ("m", "f", "_zero")

    def __init__(self, f: Poly, m: int = 0, _zero: bool = False):
        if _zero:
            self.m, self.f, self._zero = 0, f, True
            return
        if m < 0:
            raise ValueError("negative infinite multiplicity")
        if f.is_zero():
            raise ValueError("use HomogPoly.zero() for the zero value")
        self.m = m
        self.f = f.monic()
        self._zero = False

    @classmethod
    def one(cls, F: Field) -> HomogPoly:
        return cls(Poly.one(F), 0)

    @classmethod
    def zero(cls, F: Field) -> HomogPoly:
        return cls(Poly.zero(F), 0, _zero=True)

    @classmethod
    def t_power(cls, F: Field, m: int) -> HomogPoly:
        return cls(Poly.one(F), m)

    @property
    def F(self) -> Field:
        return self.f.F

    def is_zero(self) -> bool:
        return self._zero

    def is_one(self) -> bool:
        return not self._zero and self.m == 0 and self.f.is_one()

    @property
    def degree(self) -> int:
        if self._zero:
            raise ValueError("zero has no degree")
        return self.m + self.f.degree

    def dehomogenize(self) -> Poly:
        """Gamma(s, 1)."""
        return self.f

    def bivariate(self) -> list:
        """Coefficients of s^j t^(deg-j), j = 0..deg."""
        F = self.F
        return list(self.f.c) + [F.zero] * self.m

    @classmethod
    def from_bivariate(cls, F: Field, coeffs: Sequence) -> tuple[object, HomogPoly]:
        """(scalar, monic form) of sum_j coeffs[j] s^j t^(D-j), D = len-1."""
        f = Poly(F, coeffs)
        if f.is_zero():
            return F.one, cls.zero(F)
        D = len(coeffs) - 1
        return f.lc, cls(f, D - f.degree)

    def __mul__(self, other: HomogPoly) -> HomogPoly:
        if self._zero or other._zero:
            return HomogPoly.zero(self.F)
        return HomogPoly(self.f * other.f, self.m + other.m)

    def exact_div(self, other: HomogPoly) -> HomogPoly:
        if not homog_divides(other, self):
            raise ArithmeticError(f"{other} does not divide {self}")
        if self._zero:
            return HomogPoly.zero(self.F)
        return HomogPoly(self.f.exact_div(other.f), self.m - other.m)

    def multiplicity(self, lam) -> int:
        """Exponent of (s - lam t), or of t when ``lam`` is INF."""
        if lam is INF:
            return self.m
        return self.f.root_multiplicity(lam)

    def key(self) -> tuple:
        if self._zero:
            return ("zero",)
        return (self.m, self.f.c)

    def __eq__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self._zero:
            return "0"
        parts = []
        if self.m:
            parts.append("t" if self.m == 1 else f"t^{self.m}")
        if not self.f.is_one() or not parts:
            parts.append(f"[{self.f}]")
        return "*".join(parts)


class _Infinity:
    """The point at infinity of the projective line."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def homog_divides(a: HomogPoly, b: HomogPoly) -> bool:
    """Divisibility of homogeneous polynomials, with ZERO as the top element."""
    if b.is_zero():
        return True
    if a.is_zero():
        return False
    return a.m <= b.m and a.f.divides(b.f)


def homogenize(q: Poly, total_degree: int) -> HomogPoly:
    """t^n q(s/t) as a monic homogeneous value; the dropped scalar is ``q.lc``."""
    if q.is_zero():
        raise ValueError("cannot homogenize the zero polynomial")
    if q.degree > total_degree:
        raise ValueError(f"degree {q.degree} exceeds total degree {total_degree}")
    return HomogPoly(q, total_degree - q.degree)


def dehomogenize(h: HomogPoly) -> Poly:
    return h.dehomogenize()

"""Polynomial matrices and matrix pencils over an exact field.

The central objects are :class:`Pencil` (``G0 + s*G1``) and
:class:`WeierstrassStructure` (the chain of homogeneous invariant factors,
a complete invariant for strict equivalence of regular pencils).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg as la
from .algebra import (
    INF,
    Field,
    HomogPoly,
    Poly,
    homog_divides,
    poly_gcd,
    roots_in_field,
)

PolyMatrix = list  # list of rows of Poly


class NotRegularError(ValueError):
    """Raised when an operation needs a square pencil with det not identically 0."""


# ---------------------------------------------------------------------------
# polynomial matrices


def poly_identity(F: Field, n: int) -> PolyMatrix:
    return [[Poly.one(F) if i == j else Poly.zero(F) for j in range(n)] for i in range(n)]


def poly_matmul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    F = A[0][0].F
    out = []
    for row in A:
        new = []
        for j in range(len(B[0])):
            acc = Poly.zero(F)
            for k, a in enumerate(row):
                if not a.is_zero() and not B[k][j].is_zero():
                    acc = acc + a * B[k][j]
            new.append(acc)
        out.append(new)
    return out


def matrix_degree(G: PolyMatrix) -> int:
    return max((p.degree for row in G for p in row), default=-1)


def _bareiss(G: PolyMatrix) -> tuple[int, Poly | None]:
    """Fraction-free echelon elimination: (normal rank, det if square)."""
    A = [list(row) for row in G]
    m = len(A)
    n = len(A[0]) if A else 0
    if m == 0 or n == 0:
        return 0, None
    F = A[0][0].F
    prev = Poly.one(F)
    sign = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if not A[i][c].is_zero()), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            sign = -sign
        piv = A[r][c]
        for i in range(r + 1, m):
            a_ic = A[i][c]
            row_i = A[i]
            row_r = A[r]
            for j in range(c + 1, n):
                val = piv * row_i[j]
                if not a_ic.is_zero() and not row_r[j].is_zero():
                    val = val - a_ic * row_r[j]
                row_i[j] = val.exact_div(prev) if not val.is_zero() else val
            row_i[c] = Poly.zero(F)
        prev = piv
        r += 1
    det = None
    if m == n:
        if r < n:
            det = Poly.zero(F)
        else:
            det = A[n - 1][n - 1] if sign == 1 else -A[n - 1][n - 1]
    return r, det


def normal_rank(G: PolyMatrix) -> int:
    """Rank over the fraction field F(s)."""
    return _bareiss(G)[0]


def poly_det(G: PolyMatrix) -> Poly:
    if len(G) != (len(G[0]) if G else 0):
        raise ValueError("determinant of non-square matrix")
    if not G:
        raise ValueError("empty matrix")
    return _bareiss(G)[1]


@dataclass
class SmithForm:
    invariant_factors: list[Poly]
    U: PolyMatrix | None = None
    V: PolyMatrix | None = None
    diagonal: PolyMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_form(G: PolyMatrix, want_witnesses: bool = False) -> SmithForm:
    """Smith normal form over F[s] by elementary row and column operations.

    The pivot is a nonzero entry of minimal degree (row-major tie break).
    A pivot that fails to divide the trailing block absorbs the offending
    row, which lowers its degree, until it divides everything.
    """
    A = [list(row) for row in G]
    m = len(A)
    n = len(A[0]) if m else 0
    F = A[0][0].F if m and n else None
    U = poly_identity(F, m) if want_witnesses else None
    V = poly_identity(F, n) if want_witnesses else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b if not b.is_zero() else a for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a + q * b if not b.is_zero() else a for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            if not row[src].is_zero():
                row[dst] = row[dst] + row[src] * q
        if V is not None:
            for row in V:
                if not row[src].is_zero():
                    row[dst] = row[dst] + row[src] * q

    factors = []
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                d = A[i][j].degree
                if d >= 0 and (best is None or d < best[0]):
                    best = (d, i, j)
                    if d == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(k, i)
        swap_cols(k, j)
        while True:
            piv = A[k][k]
            clean = True
            for i in range(k + 1, m):
                if not A[i][k].is_zero():
                    q, r = divmod(A[i][k], piv)
                    add_row(i, k, -q)
                    if not r.is_zero():
                        clean = False
            for j in range(k + 1, n):
                if not A[k][j].is_zero():
                    q, r = divmod(A[k][j], piv)
                    add_col(j, k, -q)
                    if not r.is_zero():
                        clean = False
            if not clean:
                best = None
                for i in range(k + 1, m):
                    d = A[i][k].degree
                    if d >= 0 and (best is None or d < best[0]):
                        best = (d, i, "r")
                for j in range(k + 1, n):
                    d = A[k][j].degree
                    if d >= 0 and (best is None or d < best[0]):
                        best = (d, j, "c")
                if best[2] == "r":
                    swap_rows(k, best[1])
                else:
                    swap_cols(k, best[1])
                continue
            bad = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if not piv.divides(A[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(k, bad, Poly.one(F))
        lc = A[k][k].lc
        if lc != 1:
            inv = F.inv(lc)
            A[k] = [a.scale(inv) for a in A[k]]
            if U is not None:
                U[k] = [a.scale(inv) for a in U[k]]
        factors.append(A[k][k])
    return SmithForm(factors, U, V, A if want_witnesses else None)


def _minors(G: PolyMatrix, k: int) -> Iterable[Poly]:
    m, n = len(G), len(G[0])
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(n), k):
            yield poly_det([[G[i][j] for j in cols] for i in rows])


def determinantal_divisors(G: PolyMatrix) -> list[Poly]:
    """D_1, ..., D_rho as monic gcds of all k x k minors."""
    out = []
    m, n = len(G), len(G[0]) if G else 0
    for k in range(1, min(m, n) + 1):
        g = None
        for minor in _minors(G, k):
            if minor.is_zero():
                continue
            g = minor if g is None else poly_gcd(g, minor)
            if g.is_one():
                break
        if g is None:
            break
        out.append(g.monic())
    return out


def invariant_factors_by_minors(G: PolyMatrix) -> list[Poly]:
    """gamma_k = D_k / D_{k-1}; independent of :func:`smith_form`."""
    D = determinantal_divisors(G)
    if not D:
        return []
    F = D[0].F
    prev = Poly.one(F)
    out = []
    for d in D:
        out.append(d.exact_div(prev).monic())
        prev = d
    return out


# ---------------------------------------------------------------------------
# rational functions (needed for Schur complements of polynomial matrices)


class RatFunc:
    """Reduced fraction num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        F = num.F
        if den is None:
            den = Poly.one(F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.one(F)
            return
        if not den.is_one():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc
            if lc != 1:
                inv = F.inv(lc)
                num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    def __add__(self, o):
        o = _as_rat(o, self.num.F)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-_as_rat(o, self.num.F))

    def __mul__(self, o):
        o = _as_rat(o, self.num.F)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _as_rat(o, self.num.F)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, o):
        if isinstance(o, (int,)) and o == 0:
            return self.num.is_zero()
        if isinstance(o, int) and o == 1:
            return self.num.is_one() and self.den.is_one()
        if not isinstance(o, RatFunc):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __ne__(self, o):
        r = self.__eq__(o)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.num, self.den))

    def is_poly(self) -> bool:
        return self.den.is_one()

    def __repr__(self):
        return f"({self.num})/({self.den})" if not self.den.is_one() else f"{self.num}"


def _as_rat(x, F):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc(Poly.const(F, x))


class FractionField(Field):
    """F(s) as a :class:`Field`, so constant-matrix routines apply verbatim."""

    def __init__(self, base: Field):
        self.base = base
        self.zero = RatFunc(Poly.zero(base))
        self.one = RatFunc(Poly.one(base))

    def __call__(self, x):
        return _as_rat(x, self.base)

    def inv(self, a):
        return self.one / a

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.base == self.base

    def __hash__(self):
        return hash(("frac", self.base))


def schur_complement(F: Field, G: Sequence[Sequence], I: Sequence[int], J: Sequence[int]):
    """G/G(I,J) = G(I^c,J^c) - G(I^c,J) G(I,J)^{-1} G(I,J^c).

    ``G`` holds raw scalars of ``F`` or :class:`Poly` entries; polynomial
    input is handled over F(s) and returned as polynomials when every entry
    of the result is polynomial, otherwise as :class:`RatFunc`.
    """
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        raise ValueError("|I| != |J|")
    m, n = len(G), len(G[0])
    Ic = [i for i in range(m) if i not in I]
    Jc = [j for j in range(n) if j not in J]
    poly_input = any(isinstance(a, Poly) for row in G for a in row)
    K = FractionField(F) if poly_input else F
    M = [[K(a) for a in row] for row in G] if poly_input else G
    if not I:
        S = la.submatrix(M, Ic, Jc)
    else:
        block = la.submatrix(M, I, J)
        try:
            binv = la.inverse(K, block)
        except ZeroDivisionError:
            raise ValueError("G(I, J) is singular") from None
        left = la.matmul(K, la.submatrix(M, Ic, J), binv)
        S = la.sub(K, la.submatrix(M, Ic, Jc), la.matmul(K, left, la.submatrix(M, I, Jc)))
    if poly_input and all(x.is_poly() for row in S for x in row):
        return [[x.num for x in row] for row in S]
    return S


# ---------------------------------------------------------------------------
# pencils


class Pencil:
    """G(s) = G0 + s*G1 with constant coefficient matrices over ``F``."""

    __slots__ = ("F", "G0", "G1", "m", "n")

    def __init__(self, F: Field, G0: Sequence[Sequence], G1: Sequence[Sequence]):
        self.F = F
        self.G0 = tuple(tuple(F(a) for a in row) for row in G0)
        self.G1 = tuple(tuple(F(a) for a in row) for row in G1)
        self.m = len(self.G0)
        self.n = len(self.G0[0]) if self.m else 0
        if len(self.G1) != self.m or any(len(r) != self.n for r in self.G0 + self.G1):
            raise ValueError("coefficient matrices of different shapes")

    @classmethod
    def zero(cls, F: Field, m: int, n: int | None = None) -> Pencil:
        Z = la.zeros(F, m, m if n is None else n)
        return cls(F, Z, Z)

    @classmethod
    def constant(cls, F: Field, M: Sequence[Sequence]) -> Pencil:
        return cls(F, M, la.zeros(F, len(M), len(M[0])))

    @classmethod
    def monic(cls, F: Field, M: Sequence[Sequence]) -> Pencil:
        """sI + M."""
        return cls(F, M, la.identity(F, len(M)))

    @classmethod
    def from_poly_matrix(cls, F: Field, G: PolyMatrix) -> Pencil:
        if matrix_degree(G) > 1:
            raise ValueError("degree exceeds 1")
        return cls(F, [[p.coeff(0) for p in row] for row in G], [[p.coeff(1) for p in row] for row in G])

    @property
    def is_square(self) -> bool:
        return self.m == self.n

    def poly_matrix(self) -> PolyMatrix:
        F = self.F
        return [[Poly(F, (a, b)) for a, b in zip(r0, r1)] for r0, r1 in zip(self.G0, self.G1)]

    def at(self, c):
        """Constant matrix G(c); ``c = INF`` gives G1."""
        if c is INF:
            return la.copy(self.G1)
        F = self.F
        c = F(c)
        return [[F.red(a + c * b) for a, b in zip(r0, r1)] for r0, r1 in zip(self.G0, self.G1)]

    def rev(self) -> Pencil:
        """G1 + s*G0."""
        return Pencil(self.F, self.G1, self.G0)

    def transpose(self) -> Pencil:
        return Pencil(self.F, la.transpose(self.G0), la.transpose(self.G1))

    def __add__(self, other: Pencil) -> Pencil:
        F = self.F
        return Pencil(F, la.add(F, self.G0, other.G0), la.add(F, self.G1, other.G1))

    def __sub__(self, other: Pencil) -> Pencil:
        F = self.F
        return Pencil(F, la.sub(F, self.G0, other.G0), la.sub(F, self.G1, other.G1))

    def __neg__(self) -> Pencil:
        F = self.F
        return Pencil(F, la.scale(F, F.neg(F.one), self.G0), la.scale(F, F.neg(F.one), self.G1))

    def left_mul(self, Q) -> Pencil:
        F = self.F
        return Pencil(F, la.matmul(F, Q, self.G0), la.matmul(F, Q, self.G1))

    def right_mul(self, R) -> Pencil:
        F = self.F
        return Pencil(F, la.matmul(F, self.G0, R), la.matmul(F, self.G1, R))

    def det(self) -> Poly:
        if not self.is_square:
            raise ValueError("determinant of non-square pencil")
        return poly_det(self.poly_matrix())

    def normal_rank(self) -> int:
        return normal_rank(self.poly_matrix())

    def is_regular(self) -> bool:
        return self.is_square and self.n > 0 and not self.det().is_zero()

    def is_zero(self) -> bool:
        return la.is_zero(self.G0) and la.is_zero(self.G1)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Pencil:
        return Pencil(self.F, la.submatrix(self.G0, rows, cols), la.submatrix(self.G1, rows, cols))

    @staticmethod
    def block_diag(F: Field, blocks: Sequence[Pencil]) -> Pencil:
        return Pencil(F, la.block_diag(F, [b.G0 for b in blocks]), la.block_diag(F, [b.G1 for b in blocks]))

    def key(self) -> tuple:
        return (self.G0, self.G1)

    def __eq__(self, other):
        if not isinstance(other, Pencil):
            return NotImplemented
        return self.F == other.F and self.G0 == other.G0 and self.G1 == other.G1

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Pencil({self.F}, G0={self.G0}, G1={self.G1})"


# ---------------------------------------------------------------------------
# Weierstrass structure


@dataclass(frozen=True)
class WeierstrassStructure:
    """Homogeneous invariant factors Gamma_1 | ... | Gamma_n."""

    hfactors: tuple[HomogPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "hfactors", tuple(self.hfactors))

    @property
    def n(self) -> int:
        return len(self.hfactors)

    @property
    def F(self) -> Field:
        return self.hfactors[0].F

    def gamma(self, i: int) -> HomogPoly:
        """1-based access with Gamma_i = 1 for i < 1 and 0 for i > n."""
        if i < 1:
            return HomogPoly.one(self.F)
        if i > self.n:
            return HomogPoly.zero(self.F)
        return self.hfactors[i - 1]

    @property
    def finite(self) -> list[Poly]:
        return [h.f for h in self.hfactors]

    @property
    def inf_mults(self) -> list[int]:
        return [h.m for h in self.hfactors]

    def total_degree(self) -> int:
        return sum(h.degree for h in self.hfactors)

    def multiplicities(self, lam) -> tuple[int, ...]:
        """Partial multiplicities m_1(lam) <= ... <= m_n(lam); lam in F or INF."""
        return tuple(h.multiplicity(lam) for h in self.hfactors)

    def algebraic_multiplicity(self, lam) -> int:
        return sum(self.multiplicities(lam))

    def det_homog(self) -> HomogPoly:
        out = HomogPoly.one(self.F)
        for h in self.hfactors:
            out = out * h
        return out

    def eigenvalues(self) -> list:
        """Eigenvalues in F, then INF if present."""
        top = self.hfactors[-1]
        out = roots_in_field(top.f)
        if top.m > 0:
            out.append(INF)
        return out

    def has_eigenvalue(self, c) -> bool:
        top = self.hfactors[-1]
        if c is INF:
            return top.m > 0
        return top.f(c) == 0

    def is_valid_chain(self) -> bool:
        hs = self.hfactors
        if any(h.is_zero() for h in hs):
            return False
        return all(homog_divides(a, b) for a, b in zip(hs, hs[1:]))

    def validate(self, n: int | None = None) -> None:
        if not self.hfactors:
            raise ValueError("empty structure")
        if not self.is_valid_chain():
            raise ValueError("homogeneous invariant factors do not form a divisibility chain")
        if self.total_degree() != self.n:
            raise ValueError(f"total degree {self.total_degree()} != n = {self.n}")
        if n is not None and n != self.n:
            raise ValueError(f"structure has length {self.n}, expected {n}")

    def key(self) -> tuple:
        return tuple(h.key() for h in self.hfactors)

    def __repr__(self):
        return "(" + ", ".join(repr(h) for h in self.hfactors) + ")"


def _assemble(F: Field, finite: Sequence[Poly], rev_factors: Sequence[Poly]) -> WeierstrassStructure:
    mults = [d.root_multiplicity(F.zero) for d in rev_factors]
    return WeierstrassStructure(tuple(HomogPoly(f, m) for f, m in zip(finite, mults)))


def weierstrass_structure(A: Pencil) -> WeierstrassStructure:
    """Homogeneous invariant factors of a regular pencil.

    Finite parts are the invariant factors of A(s); infinite multiplicities
    are the orders of s in the invariant factors of the reversal G1 + s*G0.
    """
    if not A.is_square:
        raise NotRegularError("not regular: pencil is not square")
    fin = smith_form(A.poly_matrix()).invariant_factors
    if len(fin) < A.n:
        raise NotRegularError("not regular: det A(s) is identically zero")
    rev = smith_form(A.rev().poly_matrix()).invariant_factors
    return _assemble(A.F, fin, rev)


def weierstrass_structure_by_minors(A: Pencil) -> WeierstrassStructure:
    """Same invariant via gcds of minors; kept independent for cross-checks."""
    if not A.is_square:
        raise NotRegularError("not regular: pencil is not square")
    fin = invariant_factors_by_minors(A.poly_matrix())
    if len(fin) < A.n:
        raise NotRegularError("not regular: det A(s) is identically zero")
    rev = invariant_factors_by_minors(A.rev().poly_matrix())
    return _assemble(A.F, fin, rev)


def is_strictly_equivalent(A: Pencil, B: Pencil) -> bool:
    return weierstrass_structure(A) == weierstrass_structure(B)


def homogeneous_det(A: Pencil) -> tuple[object, HomogPoly]:
    """det(t*G0 + s*G1) as (scalar, monic homogeneous value)."""
    d = A.det()
    if d.is_zero():
        return A.F.one, HomogPoly.zero(A.F)
    return d.lc, HomogPoly(d, A.n - d.degree)


# ---------------------------------------------------------------------------
# Moebius transformations


@dataclass(frozen=True)
class MobiusMap:
    F: Field = field(compare=False)
    x: object
    y: object
    z: object
    w: object

    def __post_init__(self):
        F = self.F
        for name in "xyzw":
            object.__setattr__(self, name, F(getattr(self, name)))
        if self.det == 0:
            raise ValueError("Moebius matrix is singular")

    @property
    def det(self):
        F = self.F
        return F.sub(F.mul(self.x, self.w), F.mul(self.y, self.z))

    def inverse(self) -> MobiusMap:
        F = self.F
        k = F.inv(self.det)
        return MobiusMap(F, F.mul(k, self.w), F.neg(F.mul(k, self.y)), F.neg(F.mul(k, self.z)), F.mul(k, self.x))

    @classmethod
    def identity(cls, F: Field) -> MobiusMap:
        return cls(F, 1, 0, 0, 1)

    @classmethod
    def sending_to_infinity(cls, F: Field, c) -> MobiusMap:
        """X = [c 1; 1 0]; the point c goes to infinity and infinity to 0."""
        return cls(F, c, 1, 1, 0)


def mobius_pencil(X: MobiusMap, G: Pencil) -> Pencil:
    """P_X(s*G1 + G0) = s*(x G1 + z G0) + (y G1 + w G0)."""
    F = G.F
    G1 = la.add(F, la.scale(F, X.x, G.G1), la.scale(F, X.z, G.G0))
    G0 = la.add(F, la.scale(F, X.y, G.G1), la.scale(F, X.w, G.G0))
    return Pencil(F, G0, G1)


def mobius_homog(X: MobiusMap, h: HomogPoly) -> tuple[object, HomogPoly]:
    """Pi_X(h)(s, t) = h(s x + t y, s z + t w), split as (scalar, monic value)."""
    F = X.F
    if h.is_zero():
        return F.one, h
    D = h.degree
    b = h.bivariate()
    first = Poly(F, (X.y, X.x))
    second = Poly(F, (X.w, X.z))
    acc = Poly.zero(F)
    for j, coef in enumerate(b):
        if coef == 0:
            continue
        acc = acc + (first ** j * second ** (D - j)).scale(coef)
    coeffs = list(acc.c) + [F.zero] * (D + 1 - len(acc.c))
    return HomogPoly.from_bivariate(F, coeffs)


def mobius_structure(X: MobiusMap, S: WeierstrassStructure) -> WeierstrassStructure:
    return WeierstrassStructure(tuple(mobius_homog(X, h)[1] for h in S.hfactors))


# ---------------------------------------------------------------------------
# spectra and strict equivalence transforms


def spectrum_witness(A: Pencil, candidates: Iterable):
    """First candidate c with A(c) invertible (c = INF tests G1), else None."""
    if not A.is_square:
        raise ValueError("spectrum witness needs a square pencil")
    for c in candidates:
        if la.det(A.F, A.at(c)) != 0:
            return c
    return None


def find_invertible_combination(
    F: Field,
    basis: Sequence[Sequence[Sequence]],
    rng: random.Random | None = None,
    tries: int = 64,
    enumerate_limit: int = 1 << 16,
    accept=None,
):
    """An invertible matrix in span(basis), or None.

    Random combinations are tried first; over a finite field the whole span
    is enumerated afterwards when it has at most ``enumerate_limit`` elements.
    ``accept`` optionally filters candidates further.
    """
    if not basis:
        return None
    rng = rng or random.Random(0)
    n = len(basis[0])

    def combo(coefs):
        M = la.zeros(F, n, len(basis[0][0]))
        for c, B in zip(coefs, basis):
            if c == 0:
                continue
            for i in range(n):
                Mi, Bi = M[i], B[i]
                for j in range(len(Mi)):
                    if Bi[j] != 0:
                        Mi[j] = F.red(Mi[j] + c * Bi[j])
        return M

    def ok(M):
        return la.is_invertible(F, M) and (accept is None or accept(M))

    for B in basis:
        if ok(B):
            return la.copy(B)
    for _ in range(tries):
        coefs = [F.random(rng, 3) for _ in basis]
        M = combo(coefs)
        if ok(M):
            return M
    if F.is_finite and F.size ** len(basis) <= enumerate_limit:
        for coefs in itertools.product(F.elements(), repeat=len(basis)):
            M = combo(coefs)
            if ok(M):
                return M
    return None


def find_strict_equivalence(
    G: Pencil, H: Pencil, rng: random.Random | None = None
) -> tuple[list[list], list[list]] | None:
    """Invertible (Q, R) with G(s) = Q H(s) R, or None if none was found.

    Solves X G_k = H_k Y (k = 0, 1) for X, Y and searches the solution space
    for an invertible X; then Q = X^{-1} and R = Y.
    """
    F = G.F
    n = G.n
    if G.m != n or H.m != n or H.n != n:
        raise ValueError("square pencils of equal size required")
    N = n * n
    rows = []
    for Gk, Hk in ((G.G0, H.G0), (G.G1, H.G1)):
        for i in range(n):
            for j in range(n):
                eq = [F.zero] * (2 * N)
                for l in range(n):
                    eq[i * n + l] = F.add(eq[i * n + l], Gk[l][j])
                    eq[N + l * n + j] = F.sub(eq[N + l * n + j], Hk[i][l])
                rows.append(eq)
    basis = la.nullspace(F, rows, 2 * N)
    found = _solve_pair(F, basis, n, rng or random.Random(0))
    if found is None:
        return None
    X, Y = found
    return la.inverse(F, X), Y


def _solve_pair(F, basis, n, rng):
    N = n * n
    # keep the coupled Y part by stacking X over Y as a 2n x n matrix
    stacked = [[v[i * n:(i + 1) * n] for i in range(n)] + [v[N + i * n:N + (i + 1) * n] for i in range(n)]
               for v in basis]

    def pick(coefs):
        M = la.zeros(F, 2 * n, n)
        for c, B in zip(coefs, stacked):
            if c == 0:
                continue
            for i in range(2 * n):
                for j in range(n):
                    if B[i][j] != 0:
                        M[i][j] = F.red(M[i][j] + c * B[i][j])
        return M

    def good(M):
        return la.det(F, M[:n]) != 0

    if not basis:
        return None
    for B in stacked:
        if good(B):
            return la.copy(B[:n]), la.copy(B[n:])
    for _ in range(96):
        M = pick([F.random(rng, 3) for _ in stacked])
        if good(M):
            return M[:n], M[n:]
    if F.is_finite and F.size ** len(stacked) <= 1 << 16:
        for coefs in itertools.product(F.elements(), repeat=len(stacked)):
            M = pick(coefs)
            if good(M):
                return M[:n], M[n:]
    return None

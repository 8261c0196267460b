"""Exact linear algebra for constant matrices over a :class:`Field`.

Matrices are sequences of rows; every function returns a fresh list of lists.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .algebra import Field

Matrix = Sequence[Sequence]


def zeros(F: Field, m: int, n: int | None = None) -> list[list]:
    return [[F.zero] * (m if n is None else n) for _ in range(m)]


def identity(F: Field, n: int) -> list[list]:
    out = zeros(F, n)
    for i in range(n):
        out[i][i] = F.one
    return out


def scalar_matrix(F: Field, n: int, c) -> list[list]:
    out = zeros(F, n)
    for i in range(n):
        out[i][i] = F(c)
    return out


def copy(M: Matrix) -> list[list]:
    return [list(row) for row in M]


def freeze(M: Matrix) -> tuple[tuple, ...]:
    return tuple(tuple(row) for row in M)


def shape(M: Matrix) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Matrix) -> list[list]:
    return [list(col) for col in zip(*M)]


def add(F: Field, A: Matrix, B: Matrix) -> list[list]:
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(F: Field, A: Matrix, B: Matrix) -> list[list]:
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(F: Field, c, A: Matrix) -> list[list]:
    return [[F.mul(c, a) for a in row] for row in A]


def matmul(F: Field, A: Matrix, B: Matrix) -> list[list]:
    if A and len(A[0]) != len(B):
        raise ValueError("dimension mismatch")
    ncol = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [F.zero] * ncol
        for k, a in enumerate(row):
            if a == 0:
                continue
            for j, b in enumerate(B[k]):
                acc[j] += a * b
        out.append([F.red(x) for x in acc])
    return out


def submatrix(M: Matrix, rows: Sequence[int], cols: Sequence[int]) -> list[list]:
    return [[M[i][j] for j in cols] for i in rows]


def is_zero(M: Matrix) -> bool:
    return all(a == 0 for row in M for a in row)


def rref(F: Field, M: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = copy(M)
    m, n = shape(A)
    pivots = []
    r = 0
    for j in range(n):
        p = next((i for i in range(r, m) if A[i][j] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = F.inv(A[r][j])
        A[r] = [F.mul(inv, a) for a in A[r]]
        for i in range(m):
            if i != r and A[i][j] != 0:
                c = A[i][j]
                A[i] = [F.red(a - c * b) for a, b in zip(A[i], A[r])]
        pivots.append(j)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(F: Field, M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(F, M)[1])


def det(F: Field, M: Matrix):
    A = copy(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of non-square matrix")
    d = F.one
    for j in range(n):
        p = next((i for i in range(j, n) if A[i][j] != 0), None)
        if p is None:
            return F.zero
        if p != j:
            A[j], A[p] = A[p], A[j]
            d = F.neg(d)
        d = F.mul(d, A[j][j])
        inv = F.inv(A[j][j])
        for i in range(j + 1, n):
            if A[i][j] != 0:
                c = F.mul(A[i][j], inv)
                A[i] = [F.red(a - c * b) for a, b in zip(A[i], A[j])]
    return d


def inverse(F: Field, M: Matrix) -> list[list]:
    n = len(M)
    aug = [list(row) + e for row, e in zip(M, identity(F, n))]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def is_invertible(F: Field, M: Matrix) -> bool:
    return len(M) == (len(M[0]) if M else 0) and det(F, M) != 0


def nullspace(F: Field, M: Matrix, ncols: int | None = None) -> list[list]:
    """Basis of the right kernel {x : M x = 0}, as a list of vectors."""
    n = ncols if ncols is not None else shape(M)[1]
    if not M:
        return [[F.one if i == k else F.zero for i in range(n)] for k in range(n)]
    R, piv = rref(F, M)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for r, p in enumerate(piv):
            v[p] = F.neg(R[r][f])
        basis.append(v)
    return basis


def independent_rows(F: Field, M: Matrix) -> list[int]:
    """Lexicographically smallest maximal set of independent rows."""
    return rref(F, transpose(M))[1] if M and M[0] else []


def permutation_matrix(F: Field, order: Sequence[int]) -> list[list]:
    """Matrix P with P e_k = e_{order[k]}."""
    n = len(order)
    P = zeros(F, n)
    for k, i in enumerate(order):
        P[i][k] = F.one
    return P


def block_diag(F: Field, blocks: Sequence[Matrix]) -> list[list]:
    n = sum(len(b) for b in blocks)
    out = zeros(F, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, a in enumerate(row):
                out[off + i][off + j] = a
        off += len(b)
    return out


def all_matrices(F: Field, m: int, n: int):
    """Every m x n matrix over a finite field, row-major digit order."""
    for digits in itertools.product(F.elements(), repeat=m * n):
        yield [list(digits[i * n:(i + 1) * n]) for i in range(m)]

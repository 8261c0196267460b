import itertools

import pytest
import sympy
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors

import property_suites as ps
from pencilperturb import linalg as la
from pencilperturb.algebra import GF, INF, QQ, HomogPoly, Poly, homog_divides
from pencilperturb.pencilcore import (
    MobiusMap, NotRegularError, Pencil, find_strict_equivalence, mobius_homog, mobius_pencil,
    normal_rank, schur_complement, smith_form, spectrum_witness, weierstrass_structure,
)
from pencilperturb.structure import companion
from helpers import (
    diag_pencil, explicit_rank2_perturbation, no_witness_pair, random_pencil, rng, shifted_eigenvalue_pair,
)
from test_algebra import from_sympy

X = sympy.symbols("x")


def hf(F, m, coeffs):
    return HomogPoly(Poly(F, coeffs), m)


@pytest.mark.parametrize("prop", ps.ALL, ids=lambda p: p.__name__)
def test_property_suite_quick(prop):
    assert ps.run(prop, 60) == 60


def test_normal_rank_examples():
    assert normal_rank(Pencil.zero(QQ, 3).poly_matrix()) == 0
    assert explicit_rank2_perturbation(QQ).normal_rank() == 2
    assert diag_pencil(QQ, [-1, -1, 0], [1, 1, 1]).normal_rank() == 3


def test_smith_shifted_eigenvalue():
    A, _ = shifted_eigenvalue_pair(QQ)
    x1 = Poly(QQ, [-1, 1])
    assert smith_form(A.poly_matrix()).invariant_factors == [x1, x1, x1]


def test_smith_companion_is_nonderogatory():
    F = GF(2)
    f = Poly(F, [1, 0, 0, 1])
    C = companion(F, f)
    pencil = Pencil(F, la.scale(F, 1, C), la.identity(F, 3))
    one = Poly.one(F)
    assert smith_form(pencil.poly_matrix()).invariant_factors == [one, one, f]


def _sympy_factors(A):
    F = A.F
    M = sympy.Matrix(A.n, A.n, lambda i, j: int(A.G0[i][j]) + X * int(A.G1[i][j]))
    dom = sympy.GF(F.p)[X] if F.is_finite else sympy.QQ[X]
    out = []
    for g in sympy_invariant_factors(M, domain=dom):
        if g == 0:
            continue
        out.append(from_sympy(F, sympy.Poly(g.as_expr() if hasattr(g, "as_expr") else g, X,
                                            modulus=F.p) if F.is_finite else sympy.Poly(g, X)).monic())
    return out


@pytest.mark.parametrize("F", [GF(3), GF(2), QQ])
def test_smith_against_sympy(F):
    r = rng(7)
    for _ in range(15):
        A = random_pencil(F, 3, r)
        assert smith_form(A.poly_matrix()).invariant_factors == _sympy_factors(A)


def test_weierstrass_examples():
    F = QQ
    A, _ = shifted_eigenvalue_pair(F)
    x1 = [-1, 1]
    assert weierstrass_structure(A).hfactors == tuple(hf(F, 0, x1) for _ in range(3))
    Ah, Bh = no_witness_pair()
    F2 = GF(2)
    assert weierstrass_structure(Ah).hfactors == (hf(F2, 0, [1]), hf(F2, 0, [1, 1]), hf(F2, 0, [1, 1]),
                                                  hf(F2, 1, [1, 1]))
    assert weierstrass_structure(Bh).hfactors == (hf(F2, 0, [1]), hf(F2, 0, [1]), hf(F2, 0, [1, 1]),
                                                  hf(F2, 1, [0, 1, 1]))


def test_singular_pencil_rejected():
    A = Pencil(QQ, [[1, 1], [1, 1]], [[1, 1], [1, 1]])
    with pytest.raises(NotRegularError, match="not regular"):
        weierstrass_structure(A)
    with pytest.raises(NotRegularError):
        weierstrass_structure(Pencil(QQ, [[1, 0]], [[0, 1]]))


def test_structure_invariant_under_strict_equivalence():
    r = rng(3)
    for F in (QQ, GF(3)):
        for _ in range(20):
            A = random_pencil(F, 3, r)
            Q = [[F.random(r, 2) for _ in range(3)] for _ in range(3)]
            R = [[F.random(r, 2) for _ in range(3)] for _ in range(3)]
            if not (la.is_invertible(F, Q) and la.is_invertible(F, R)):
                continue
            assert weierstrass_structure(A.left_mul(Q).right_mul(R)) == weierstrass_structure(A)


def test_degree_of_det():
    r = rng(5)
    for _ in range(30):
        A = random_pencil(GF(5), 3, r)
        S = weierstrass_structure(A)
        assert A.det().degree == A.n - S.algebraic_multiplicity(INF)


def test_mobius_examples():
    F = GF(5)
    A = random_pencil(F, 3, rng(1), regular=False)
    assert mobius_pencil(MobiusMap.identity(F), A) == A
    c = 3
    X = MobiusMap.sending_to_infinity(F, c)
    got = mobius_pencil(X, A)
    assert got.G1 == tuple(map(tuple, la.add(F, la.scale(F, c, A.G1), A.G0)))
    assert got.G0 == A.G1


def _substitute(X, h):
    """Direct bivariate substitution h(s x + t y, s z + t w) with sympy."""
    s, t = sympy.symbols("s t")
    F = X.F
    expr = sum(int(a) * s ** j * t ** (h.degree - j) if F.is_finite else a * s ** j * t ** (h.degree - j)
               for j, a in enumerate(h.bivariate()))
    sub = sympy.expand(expr.subs({s: s * int(X.x) + t * int(X.y), t: s * int(X.z) + t * int(X.w)},
                                 simultaneous=True))
    poly = sympy.Poly(sub, s, t, modulus=F.p)
    return [int(poly.coeff_monomial(s ** j * t ** (h.degree - j))) % F.p for j in range(h.degree + 1)]


def test_mobius_homog_against_substitution():
    F = GF(7)
    r = rng(11)
    for _ in range(40):
        X = None
        while X is None:
            vals = [r.randrange(7) for _ in range(4)]
            if (vals[0] * vals[3] - vals[1] * vals[2]) % 7:
                X = MobiusMap(F, *vals)
        deg = r.randint(0, 3)
        h = HomogPoly(Poly(F, [r.randrange(7) for _ in range(deg)] + [1]), r.randint(0, 2))
        k, img = mobius_homog(X, h)
        expected = _substitute(X, h)
        assert [F.mul(k, a) for a in img.bivariate()] == expected


def test_mobius_swap_exchanges_zero_and_infinity():
    F = GF(3)
    X = MobiusMap(F, 0, 1, 1, 0)
    h = HomogPoly(Poly(F, [0, 0, 1]), 1)  # t s^2
    _, img = mobius_homog(X, h)
    assert img.multiplicity(INF) == 2 and img.multiplicity(0) == 1


def test_mobius_preserves_divisibility_gf7():
    F = GF(7)
    r = rng(2)
    for _ in range(60):
        vals = [r.randrange(7) for _ in range(4)]
        if (vals[0] * vals[3] - vals[1] * vals[2]) % 7 == 0:
            continue
        X = MobiusMap(F, *vals)
        a = HomogPoly(Poly(F, [r.randrange(7), 1]), r.randint(0, 1))
        b = HomogPoly(Poly(F, [r.randrange(7) for _ in range(2)] + [1]), r.randint(0, 2))
        assert homog_divides(a, b) == homog_divides(mobius_homog(X, a)[1], mobius_homog(X, b)[1])


def test_schur_example():
    assert schur_complement(QQ, [[1, 2], [3, 4]], [0], [0]) == [[-2]]
    with pytest.raises(ValueError):
        schur_complement(QQ, [[0, 2], [3, 4]], [0], [0])


def test_schur_rank_gf3_exhaustive_blocks():
    F = GF(3)
    r = rng(4)
    for _ in range(40):
        M = [[r.randrange(3) for _ in range(4)] for _ in range(4)]
        for k in range(3):
            for I in itertools.combinations(range(4), k):
                for J in itertools.combinations(range(4), k):
                    if la.det(F, la.submatrix(M, I, J)) == 0:
                        continue
                    S = schur_complement(F, M, I, J)
                    assert la.rank(F, M) == k + la.rank(F, S)


def test_spectrum_witness_examples():
    F = GF(2)
    A = diag_pencil(F, [1, 1, 0], [1, 1, 1])
    assert spectrum_witness(A, [INF, 0, 1]) is INF
    Ah, Bh = no_witness_pair()
    joint = [c for c in [INF, 0, 1] if spectrum_witness(Ah, [c]) is not None and spectrum_witness(Bh, [c]) is not None]
    assert joint == []
    B = diag_pencil(QQ, [0, -1, 1], [1, 1, 1])
    assert spectrum_witness(B, QQ.candidates()) == 2


def test_find_strict_equivalence():
    F = GF(3)
    r = rng(9)
    A = random_pencil(F, 3, r)
    Q = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    R = [[0, 1, 0], [1, 0, 0], [2, 2, 1]]
    B = A.left_mul(Q).right_mul(R)
    found = find_strict_equivalence(B, A, r)
    assert found is not None
    Q2, R2 = found
    assert A.left_mul(Q2).right_mul(R2) == B
    other = diag_pencil(F, [0, 0, 0], [1, 1, 1])
    if weierstrass_structure(other) != weierstrass_structure(A):
        assert find_strict_equivalence(other, A, r) is None

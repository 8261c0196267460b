import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pencilperturb.algebra import GF, INF, QQ, HomogPoly, Poly
from pencilperturb.pencilcore import Pencil, WeierstrassStructure, homogeneous_det, weierstrass_structure
from pencilperturb.structure import (
    applicability, canonical_pencil, const_rank_bound, interlace, min_rank, sufficiency_applies,
)
from pencilperturb.oracle import structure_universe
from helpers import (
    FIELDS, diag_pencil, min_rank_three_structures, no_witness_pair, random_pencil, rng, shifted_eigenvalue_pair,
)


def S(A):
    return weierstrass_structure(A)


@pytest.mark.parametrize("F", [QQ, GF(2), GF(3)])
def test_interlace_shifted_eigenvalue(F):
    A, B = shifted_eigenvalue_pair(F)
    phi, psi = S(A), S(B)
    assert interlace(phi, psi, 2).holds
    assert interlace(phi, psi, 3).holds
    assert interlace(phi, psi, 1).holds
    rep = interlace(phi, psi, 0)
    assert not rep.holds and rep.first_violation == (1, "lower")
    assert min_rank(phi, psi) == 1


def test_interlace_trivial_cases():
    phi, psi = min_rank_three_structures(QQ)
    assert interlace(phi, psi, 5).holds
    assert interlace(phi, phi, 0).holds
    assert not interlace(phi, psi, 0).holds
    assert min_rank(phi, phi) == 0
    with pytest.raises(ValueError):
        interlace(phi, S(shifted_eigenvalue_pair(QQ)[0]), 1)


@pytest.mark.parametrize("F", [QQ, GF(3)])
def test_min_rank_size_five(F):
    phi, psi = min_rank_three_structures(F)
    assert min_rank(phi, psi) == 3
    assert [interlace(phi, psi, r).holds for r in range(6)] == [False, False, False, True, True, True]


def _all_structures(F, n):
    return sorted(structure_universe(F, n), key=repr)


@pytest.mark.parametrize("F,n", [(GF(2), 1), (GF(2), 2), (GF(2), 3), (GF(3), 2)])
def test_interlace_monotone_and_symmetric(F, n):
    U = _all_structures(F, n)
    for phi, psi in itertools.product(U, repeat=2):
        verdicts = [interlace(phi, psi, r).holds for r in range(n + 1)]
        assert verdicts == [interlace(psi, phi, r).holds for r in range(n + 1)]
        first = verdicts.index(True)
        assert all(verdicts[first:])
        assert first == min_rank(phi, psi)


def _splits(S):
    """Every finite factor is a product of linear factors over the base field."""
    F = S.F
    for h in S.hfactors:
        if sum(h.f.root_multiplicity(c) for c in F.elements()) != h.f.degree:
            return False
    return True


def _multiplicity_form(phi, psi, r, lam):
    n = phi.n
    a, b = phi.multiplicities(lam), psi.multiplicities(lam)

    def m(seq, i):
        if i < 1:
            return 0
        if i > n:
            return float("inf")
        return seq[i - 1]

    return all(m(a, i - r) <= m(b, i) <= m(a, i + r) for i in range(1, n + 1))


def test_multiplicity_form_matches_divisibility_gf3():
    F = GF(3)
    points = [INF] + F.elements()
    U = [S for S in _all_structures(F, 2) + _all_structures(F, 3) if _splits(S)]
    pairs = [(a, b) for a in U for b in U if a.n == b.n]
    rng(8).shuffle(pairs)
    for phi, psi in pairs[:600]:
        for r in range(phi.n + 1):
            pointwise = all(_multiplicity_form(phi, psi, r, lam) for lam in points)
            assert pointwise == interlace(phi, psi, r).holds


def test_const_rank_bound_examples():
    F = QQ
    c = diag_pencil(F, [2, 2, 2], [1, 1, 1])
    assert const_rank_bound(c, c) == 0
    A, B = shifted_eigenvalue_pair(F)
    assert const_rank_bound(A, B) == 1
    disjoint = diag_pencil(F, [5, 6, 7], [1, 1, 1])
    assert const_rank_bound(A, disjoint) == 3
    with pytest.raises(ValueError):
        const_rank_bound(diag_pencil(F, [1, 1], [1, 0]), diag_pencil(F, [1, 1], [1, 1]))


def test_applicability_no_witness():
    Ah, Bh = no_witness_pair()
    rep = applicability(Ah, Bh)
    assert rep.joint_spectrum_covers_field
    assert rep.witness_c is None
    assert rep.shared_multiplicity_lambda0 is INF
    assert S(Ah).multiplicities(INF) == S(Bh).multiplicities(INF) == (0, 0, 0, 1)
    assert not rep.scalar_exception


def test_applicability_shifted_eigenvalue_gf2():
    A, B = shifted_eigenvalue_pair(GF(2))
    assert applicability(A, B).witness_c is INF


def test_applicability_over_q_always_finds_witness():
    r = rng(12)
    for _ in range(20):
        A, B = random_pencil(QQ, 3, r), random_pencil(QQ, 3, r)
        rep = applicability(A, B)
        assert rep.witness_c is not None
        c = rep.witness_c
        assert not S(A).has_eigenvalue(c) and not S(B).has_eigenvalue(c)


def test_scalar_exception_flag():
    F = GF(2)
    a = Pencil(F, [[0]], [[1]])
    rep = applicability(a, a)
    assert rep.scalar_exception
    assert not sufficiency_applies(S(a), S(a), 1)
    assert sufficiency_applies(S(a), S(Pencil(F, [[1]], [[1]])), 1)


def _hf(F, m, coeffs):
    return HomogPoly(Poly(F, coeffs), m)


def test_canonical_pencil_examples():
    F = GF(2)
    target = WeierstrassStructure((_hf(F, 0, [1]), _hf(F, 0, [1, 1]), _hf(F, 0, [1, 1]), _hf(F, 1, [1, 1])))
    K = canonical_pencil(target)
    Ah, _ = no_witness_pair()
    assert S(K) == S(Ah)
    Fq = QQ
    x = [-1, 1]
    three = WeierstrassStructure(tuple(_hf(Fq, 0, x) for _ in range(3)))
    assert S(canonical_pencil(three)) == S(shifted_eigenvalue_pair(Fq)[0])
    pure_inf = WeierstrassStructure((_hf(Fq, 0, [1]), _hf(Fq, 2, [1])))
    K = canonical_pencil(pure_inf)
    assert K.G0 == ((1, 0), (0, 1)) and K.G1 == ((0, 1), (0, 0))
    _, det = homogeneous_det(K)
    assert det == HomogPoly.t_power(Fq, 2)


def test_canonical_pencil_rejects_bad_chains():
    F = QQ
    with pytest.raises(ValueError):
        canonical_pencil(WeierstrassStructure((_hf(F, 1, [1]), _hf(F, 0, [1]))))


@st.composite
def structures(draw):
    F = draw(st.sampled_from([GF(2), GF(3)]))
    n = draw(st.integers(1, 3))
    return draw(st.sampled_from(_all_structures(F, n)))


@settings(max_examples=200, deadline=None)
@given(structures())
def test_canonical_round_trip_exhaustive_families(target):
    assert S(canonical_pencil(target)) == target


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_canonical_round_trip_random(F, n, seed):
    A = random_pencil(F, n, rng(seed))
    target = S(A)
    assert S(canonical_pencil(target)) == target

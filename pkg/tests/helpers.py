import random

from hypothesis import assume
from hypothesis import strategies as st

from pencilperturb.algebra import GF, QQ, HomogPoly, Poly
from pencilperturb.pencilcore import Pencil, WeierstrassStructure

FIELDS = [QQ, GF(2), GF(3), GF(5)]


def diag_pencil(F, c0, c1):
    n = len(c0)
    G0 = [[c0[i] if i == j else 0 for j in range(n)] for i in range(n)]
    G1 = [[c1[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return Pencil(F, G0, G1)


def shifted_eigenvalue_pair(F):
    """diag(s-1, s-1, s-1) and diag(s-1, s-1, s)."""
    return diag_pencil(F, [-1, -1, -1], [1, 1, 1]), diag_pencil(F, [-1, -1, 0], [1, 1, 1])


def explicit_rank2_perturbation(F):
    """The explicit rank-2 pencil [[0, s-1, 0], [0, 0, 0], [0, 0, 1]]."""
    return Pencil(F, [[0, -1, 0], [0, 0, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 0], [0, 0, 0]])


def no_witness_pair():
    F = GF(2)
    return diag_pencil(F, [1, -1, -1, -1], [0, 1, 1, 1]), diag_pencil(F, [1, -1, -1, 0], [0, 1, 1, 1])


def min_rank_three_structures(F):
    """phi = (1, 1, t, t^2, t^2) and psi = (1, 1, s-t, s-t, (s-t)^3)."""
    one = Poly.one(F)
    x = Poly(F, [-1, 1])
    phi = WeierstrassStructure((HomogPoly(one), HomogPoly(one), HomogPoly(one, 1),
                                HomogPoly(one, 2), HomogPoly(one, 2)))
    psi = WeierstrassStructure((HomogPoly(one), HomogPoly(one), HomogPoly(x), HomogPoly(x), HomogPoly(x ** 3)))
    return phi, psi


def entry_strategy(F):
    if F.is_finite:
        return st.integers(0, F.p - 1)
    return st.integers(-3, 3)


@st.composite
def pencils(draw, fields=FIELDS, min_n=1, max_n=3, regular=False):
    F = draw(st.sampled_from(fields))
    n = draw(st.integers(min_n, max_n))
    ent = entry_strategy(F)
    mat = st.lists(st.lists(ent, min_size=n, max_size=n), min_size=n, max_size=n)
    A = Pencil(F, draw(mat), draw(mat))
    if regular:
        assume(A.is_regular())
    return A


def random_pencil(F, n, rng, regular=True):
    while True:
        lo, hi = (0, F.p - 1) if F.is_finite else (-3, 3)
        G0 = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        G1 = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        A = Pencil(F, G0, G1)
        if not regular or A.is_regular():
            return A


def rng(seed=0):
    return random.Random(seed)

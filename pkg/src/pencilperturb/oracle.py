"""Exhaustive ground truth over small prime fields.

Every pencil of size n over GF(p) gets an index: the base-p digits of
(G0, G1) read row-major, G0 first, least significant digit first. A table
holds the normal rank and the Weierstrass structure of every pencil, so the
structures reachable from A by rank-r perturbations are

    { structure(C) : rank(C - A) = r, C regular },

which is a vectorized lookup once the table exists. ``enumerate_reachable``
takes an index range over the perturbations P so a sweep can be split into
independent chunks and merged by set union.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import GF, HomogPoly, Poly, PrimeField
from .pencilcore import NotRegularError, Pencil, WeierstrassStructure, normal_rank, weierstrass_structure
from .structure import applicability, interlace, sufficiency_applies

DEFAULT_BUDGET = 1 << 18


def check_budget(p: int, n: int, budget: int = DEFAULT_BUDGET) -> int:
    size = p ** (2 * n * n)
    if size > budget:
        raise ValueError(f"GF({p}) with n = {n} has {size} pencils, over the budget of {budget}")
    return size


def pencil_index(A: Pencil) -> int:
    p = A.F.p
    idx = 0
    for d in reversed([a for row in A.G0 for a in row] + [a for row in A.G1 for a in row]):
        idx = idx * p + int(d)
    return idx


def pencil_from_index(F: PrimeField, n: int, idx: int) -> Pencil:
    digits = []
    for _ in range(2 * n * n):
        idx, d = divmod(idx, F.p)
        digits.append(d)
    N = n * n
    G0 = [digits[i * n:(i + 1) * n] for i in range(n)]
    G1 = [digits[N + i * n:N + (i + 1) * n] for i in range(n)]
    return Pencil(F, G0, G1)


# ---------------------------------------------------------------------------
# GF(2) homogeneous minors on bit-encoded polynomials
#
# A homogeneous form of degree d is an int whose bit j is the coefficient of
# s^j t^(d-j); the same int read as a polynomial in s is its dehomogenization.


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _bmod(a: int, b: int) -> int:
    db = b.bit_length()
    while a and a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _bdiv(a: int, b: int) -> int:
    q = 0
    db = b.bit_length()
    while a and a.bit_length() >= db:
        sh = a.bit_length() - db
        q |= 1 << sh
        a ^= b << sh
    assert a == 0, "inexact division"
    return q


def _bgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _bmod(a, b)
    return a


def _gf2_minors(M, k):
    n = len(M)
    for rows in itertools.combinations(range(n), k):
        for cols in itertools.combinations(range(n), k):
            yield _gf2_det([[M[i][j] for j in cols] for i in rows])


def _gf2_det(M):
    k = len(M)
    if k == 1:
        return M[0][0]
    if k == 2:
        return _clmul(M[0][0], M[1][1]) ^ _clmul(M[0][1], M[1][0])
    out = 0
    for j in range(k):
        if M[0][j]:
            sub = [row[:j] + row[j + 1:] for row in M[1:]]
            out ^= _clmul(M[0][j], _gf2_det(sub))
    return out


def gf2_rank_and_key(n: int, idx: int):
    """(normal rank, structure key or None) for the GF(2) pencil with this index."""
    N = n * n
    M = [[((idx >> (i * n + j)) & 1) | (((idx >> (N + i * n + j)) & 1) << 1) for j in range(n)]
         for i in range(n)]
    prev_f, prev_m = 1, 0
    key = []
    for k in range(1, n + 1):
        f, m = 0, None
        for minor in _gf2_minors(M, k):
            if minor:
                f = _bgcd(f, minor) if f else minor
                mm = k - (minor.bit_length() - 1)
                m = mm if m is None else min(m, mm)
        if not f:
            return k - 1, None
        key.append((m - prev_m, _bdiv(f, prev_f)))
        prev_f, prev_m = f, m
    return n, tuple(key)


def _bits_to_poly(F, bits: int) -> Poly:
    return Poly(F, [(bits >> j) & 1 for j in range(bits.bit_length())])


def _gf2_structure(F, key) -> WeierstrassStructure:
    return WeierstrassStructure(tuple(HomogPoly(_bits_to_poly(F, f), m) for m, f in key))


# ---------------------------------------------------------------------------
# the table


@dataclass
class PencilTable:
    p: int
    n: int
    rank: np.ndarray
    struct_id: np.ndarray  # -1 for singular pencils
    structures: list[WeierstrassStructure]
    digits: np.ndarray | None = None  # only for p > 2

    @property
    def size(self) -> int:
        return len(self.rank)

    def sum_index(self, p_idx: np.ndarray, a_idx: int) -> np.ndarray:
        """Index of A + P for each P index."""
        if self.p == 2:
            return p_idx ^ a_idx
        p = self.p
        total = (self.digits[p_idx] + self.digits[a_idx]) % p
        weights = p ** np.arange(self.digits.shape[1], dtype=np.int64)
        return total @ weights


_TABLES: dict[tuple[int, int], PencilTable] = {}


def build_table(p: int, n: int, budget: int = DEFAULT_BUDGET) -> PencilTable:
    key = (p, n)
    if key in _TABLES:
        return _TABLES[key]
    size = check_budget(p, n, budget)
    F = GF(p)
    rank = np.zeros(size, dtype=np.int8)
    sid = np.full(size, -1, dtype=np.int32)
    interned: dict[tuple, int] = {}
    structures: list[WeierstrassStructure] = []
    if p == 2:
        for idx in range(size):
            rk, skey = gf2_rank_and_key(n, idx)
            rank[idx] = rk
            if skey is not None:
                if skey not in interned:
                    interned[skey] = len(structures)
                    structures.append(_gf2_structure(F, skey))
                sid[idx] = interned[skey]
        digits = None
    else:
        for idx in range(size):
            A = pencil_from_index(F, n, idx)
            rank[idx] = normal_rank(A.poly_matrix())
            if rank[idx] == n:
                S = weierstrass_structure(A)
                k = S.key()
                if k not in interned:
                    interned[k] = len(structures)
                    structures.append(S)
                sid[idx] = interned[k]
        idxs = np.arange(size, dtype=np.int64)
        digits = np.stack([(idxs // p ** j) % p for j in range(2 * n * n)], axis=1)
    table = PencilTable(p, n, rank, sid, structures, digits)
    _TABLES[key] = table
    return table


# ---------------------------------------------------------------------------
# reachability and comparison


def enumerate_reachable(A: Pencil, r: int, start: int = 0, stop: int | None = None,
                        budget: int = DEFAULT_BUDGET) -> set[WeierstrassStructure]:
    """Structures of A + P over perturbations P with index in [start, stop) and rank r."""
    F = A.F
    if not isinstance(F, PrimeField):
        raise ValueError("exhaustive enumeration needs a prime field")
    table = build_table(F.p, A.n, budget)
    stop = table.size if stop is None else min(stop, table.size)
    a_idx = pencil_index(A)
    p_idx = np.arange(start, stop, dtype=np.int64)
    p_idx = p_idx[table.rank[p_idx] == r]
    c_idx = table.sum_index(p_idx, a_idx)
    ids = table.struct_id[c_idx]
    return {table.structures[i] for i in np.unique(ids[ids >= 0])}


def structure_universe(F: PrimeField, n: int) -> set[WeierstrassStructure]:
    """All valid chains Gamma_1 | ... | Gamma_n of total degree n over F."""
    forms = []
    for d in range(n + 1):
        for m in range(d + 1):
            fd = d - m
            for tail in itertools.product(F.elements(), repeat=fd):
                forms.append(HomogPoly(Poly(F, list(tail) + [1]), m))
    out = set()

    def extend(chain, remaining, slots):
        if slots == 0:
            if remaining == 0:
                out.add(WeierstrassStructure(tuple(chain)))
            return
        last = chain[-1] if chain else None
        for h in forms:
            # every later factor is a multiple of h
            if h.degree * slots > remaining:
                continue
            if last is not None and not (last.m <= h.m and last.f.divides(h.f)):
                continue
            extend(chain + [h], remaining - h.degree, slots - 1)

    extend([], n, n)
    return out


def predicate_set(phi: WeierstrassStructure, r: int, universe=None) -> set[WeierstrassStructure]:
    universe = universe if universe is not None else structure_universe(phi.F, phi.n)
    return {psi for psi in universe if interlace(phi, psi, r).holds}


@dataclass
class ReachabilitySlice:
    p: int
    n: int
    A: Pencil
    r: int
    reachable: set
    predicate_set: set
    missing: set = field(default_factory=set)
    extra: set = field(default_factory=set)
    diagnostics: dict = field(default_factory=dict)


def compare(A: Pencil, r: int, chunks: int = 1, budget: int = DEFAULT_BUDGET) -> ReachabilitySlice:
    """Reachable structures against the interlacing predicate at rank r.

    ``extra`` (reachable but failing interlacing) must always be empty;
    ``missing`` entries carry whether a sufficiency result covers them.
    """
    if not A.is_regular():
        raise NotRegularError("A is not regular")
    F = A.F
    table = build_table(F.p, A.n, budget)
    bounds = np.linspace(0, table.size, chunks + 1).astype(np.int64)
    reach = set()
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        reach |= enumerate_reachable(A, r, int(lo), int(hi), budget)
    phi = weierstrass_structure(A)
    preds = predicate_set(phi, r)
    out = ReachabilitySlice(F.p, A.n, A, r, reach, preds, preds - reach, reach - preds)
    for psi in out.missing:
        out.diagnostics[psi] = {
            "sufficiency_applies": sufficiency_applies(phi, psi, r),
            "applicability": applicability(phi, psi),
        }
    return out


def regular_pencils(F: PrimeField, n: int, budget: int = DEFAULT_BUDGET):
    """Indices of every regular pencil of size n, ascending."""
    table = build_table(F.p, n, budget)
    return np.nonzero(table.struct_id >= 0)[0]

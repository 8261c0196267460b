"""Construction of fixed-rank perturbation pencils with verified certificates.

Given a regular pencil A(s), a target Weierstrass structure and a rank r,
:func:`synthesize` returns a pencil P(s) with rank P(s) = r and A(s) + P(s)
strictly equivalent to the target, or refuses with a machine-readable reason.

All work happens in monic coordinates sI + M (identity leading coefficient):
a Moebius change of variable moves a non-eigenvalue point to infinity, the
leading coefficient is cancelled on the left, and the result is mapped back.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg as la
from .algebra import INF, Field
from .pencilcore import (
    MobiusMap,
    Pencil,
    WeierstrassStructure,
    find_invertible_combination,
    find_strict_equivalence,
    mobius_pencil,
    normal_rank,
    schur_complement,
    smith_form,
    weierstrass_structure,
    weierstrass_structure_by_minors,
)
from .structure import applicability, canonical_pencil, interlace, min_rank


class Refusal(Exception):
    """The requested perturbation provably does not exist (or no theorem covers it)."""

    def __init__(self, reason: str, message: str, **details):
        super().__init__(message)
        self.reason = reason
        self.details = details


class BackendExhausted(Exception):
    """A bounded search gave up; says nothing about existence."""


class TheoremContradiction(Exception):
    """A complete search found nothing although a theorem guarantees a solution."""


@dataclass
class SynthCertificate:
    A: Pencil
    P: Pencil
    rank_P: int
    target: WeierstrassStructure
    achieved: WeierstrassStructure
    path: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def _is_monic(A: Pencil) -> bool:
    return A.G1 == la.freeze(la.identity(A.F, A.n))


# ---------------------------------------------------------------------------
# lemma constructions


def build_E_invertible(F: Field, n: int) -> list[list]:
    """E with E and I + E both invertible.

    Fields with more than two elements use cI for the first c not in {0, -1};
    GF(2) borders E_2 = [[1, 1], [1, 0]] one row and column at a time.
    """
    if F.size != 2:
        if n < 1:
            raise ValueError("n must be positive")
        c = next(c for c in F.candidates() if c != 0 and F.add(c, F.one) != 0)
        return la.scalar_matrix(F, n, c)
    if n < 2:
        raise ValueError("no 1 x 1 matrix E over GF(2) has E and 1 + E invertible")
    E = [[1, 1], [1, 0]]
    for p in range(2, n):
        Einv = la.inverse(F, E)
        R = la.sub(F, Einv, la.inverse(F, la.add(F, la.identity(F, p), E)))
        i, j = next((i, j) for i in range(p) for j in range(p) if R[i][j] != 0)
        w = F.add(F.neg(F.one), Einv[i][j])
        E = [row + [F.one if k == j else F.zero] for k, row in enumerate(E)]
        E.append([F.one if k == i else F.zero for k in range(p)] + [w])
    return E


def build_E_index_sets(F: Field, n: int, r1: int, r: int, I: Sequence[int], J: Sequence[int]) -> list[list]:
    """E with rank r - r1, I + E invertible, E(I, :) = 0 and E(:, J) = 0.

    Indices are 0-based. Chosen index lists are taken smallest-first.
    """
    I, J = sorted(set(I)), sorted(set(J))
    if not (0 <= r1 < r < n) or len(I) != r1 or len(J) != r1:
        raise ValueError(f"need 0 <= r1 < r < n and |I| = |J| = r1, got n={n} r1={r1} r={r} I={I} J={J}")
    Ic = [i for i in range(n) if i not in I]
    Jc = [j for j in range(n) if j not in J]
    X = [i for i in Ic if i in Jc]
    Y = [i for i in Ic if i not in X]
    Z = [j for j in Jc if j not in X]
    a, d = len(Y), r - r1
    if a >= d:
        R1, R2, S2 = [], Y[:d], Z[:d]
    elif d - a >= 2:
        R1, R2, S2 = X[:d - a], Y, Z
    elif a >= 1:
        R1, R2, S2 = X[:2], Y[:a - 1], Z[:a - 1]
    else:
        R1, R2, S2 = [], [X[0]], [X[1]]
    xp, ap = len(R1), len(R2)
    used = R1 + R2 + S2
    order = used + [i for i in range(n) if i not in used]
    Ebar = la.zeros(F, n)
    if xp:
        Ex = build_E_invertible(F, xp)
        for i in range(xp):
            for j in range(xp):
                Ebar[i][j] = Ex[i][j]
    for k in range(ap):
        Ebar[xp + k][xp + ap + k] = F.one
    E = la.zeros(F, n)
    for k, i in enumerate(order):
        for l, j in enumerate(order):
            E[i][j] = Ebar[k][l]
    assert la.rank(F, E) == d
    assert la.is_invertible(F, la.add(F, la.identity(F, n), E))
    assert all(E[i][j] == 0 for i in I for j in range(n))
    assert all(E[i][j] == 0 for i in range(n) for j in J)
    return E


def self_perturbation(F: Field, k: int, q: int) -> list[list] | None:
    """E of rank q with I_k + E invertible, or None when impossible."""
    if q == 0:
        return la.zeros(F, k)
    if q < k:
        return build_E_index_sets(F, k, 0, q, [], [])
    if q == k and (k >= 2 or F.size != 2):
        return build_E_invertible(F, k)
    return None


# ---------------------------------------------------------------------------
# monic-coordinate steps


def full_rank_perturb(A: Pencil, B: Pencil) -> Pencil:
    """P(s) = E s + (I + E) B0 - A0, so that A + P = (I + E) B."""
    F, n = A.F, A.n
    if n < 2:
        raise ValueError("full_rank_perturb needs n >= 2")
    if not (_is_monic(A) and _is_monic(B)):
        raise ValueError("pencils must have identity leading coefficient")
    E = build_E_invertible(F, n)
    IE = la.add(F, la.identity(F, n), E)
    P = Pencil(F, la.sub(F, la.matmul(F, IE, B.G0), A.G0), E)
    assert A + P == B.left_mul(IE)
    return P


def _lex_min_nonsingular_block(F: Field, P) -> tuple[list[int], list[int]]:
    rows = la.independent_rows(F, P)
    cols = la.rref(F, la.submatrix(P, rows, range(len(P[0]))))[1] if rows else []
    return rows, cols


def inflate_rank(A: Pencil, P: Sequence[Sequence], r: int) -> Pencil:
    """Raise a constant perturbation of rank r1 < r to a pencil of rank r.

    P(s) = P + E (sI + A0 + P) with E from :func:`build_E_index_sets`; then
    A + P(s) = (I + E)(A + P).
    """
    F, n = A.F, A.n
    if not _is_monic(A):
        raise ValueError("A must have identity leading coefficient")
    r1 = la.rank(F, P)
    if not r1 < r < n:
        raise ValueError(f"need rank(P) = {r1} < r = {r} < n = {n}")
    I, J = _lex_min_nonsingular_block(F, P)
    E = build_E_index_sets(F, n, r1, r, I, J)
    AP = A + Pencil.constant(F, P)
    Ps = Pencil.constant(F, P) + AP.left_mul(E)
    S = schur_complement(F, Ps.poly_matrix(), I, J)
    assert normal_rank(S) >= r - r1
    got = Ps.normal_rank()
    assert got == r, f"inflated rank {got} != {r}"
    return Ps


def _core_targets(M_B_options, F, n):
    seen = set()
    for M in M_B_options:
        key = la.freeze(M)
        if key not in seen:
            seen.add(key)
            yield M


def _same_finite_structure(F, M, target_factors) -> bool:
    return smith_form(Pencil.monic(F, M).poly_matrix()).invariant_factors == target_factors


def _kernel_candidates(F: Field, n: int, k: int, M_B, rng, random_tries: int):
    """n x k bases V for the common kernel: coordinate sets, random, then all subspaces."""
    combos = list(itertools.combinations(range(n), k))
    # coordinates feeding a companion chain (subdiagonal entry below) go first
    combos.sort(key=lambda S: -sum(1 for j in S if j + 1 < n and M_B[j + 1][j] != 0))
    for S in combos:
        yield [[F.one if i == j else F.zero for j in S] for i in range(n)]
    for _ in range(random_tries):
        yield [[F.random(rng, 2) for _ in range(k)] for _ in range(n)]
    if F.is_finite and F.size ** (k * (n - k)) <= 1 << 12:
        for R in _rref_forms(F, k, n):
            yield la.transpose(R)


def _sylvester_search(F, M_A, M_B, r, rng, tries, random_kernels):
    """Invertible T with T M_B v = M_A T v on an (n - r)-dimensional kernel.

    Then P = T M_B T^-1 - M_A vanishes on T(kernel), so rank(P) <= r. For a
    fixed kernel basis the condition is linear in the entries of T.
    """
    n = len(M_A)
    k = n - r
    for V in _kernel_candidates(F, n, k, M_B, rng, random_kernels):
        rows = []
        for c in range(k):
            v = [V[i][c] for i in range(n)]
            Bv = [F.red(sum((M_B[i][l] * v[l] for l in range(n)), F.zero)) for i in range(n)]
            for i in range(n):
                eq = [F.zero] * (n * n)
                for l in range(n):
                    if Bv[l] != 0:
                        eq[i * n + l] = F.add(eq[i * n + l], Bv[l])
                    if M_A[i][l] != 0:
                        for m in range(n):
                            if v[m] != 0:
                                eq[l * n + m] = F.sub(eq[l * n + m], F.mul(M_A[i][l], v[m]))
                rows.append(eq)
        basis = la.nullspace(F, rows, n * n)
        mats = [[b[i * n:(i + 1) * n] for i in range(n)] for b in basis]
        T = find_invertible_combination(F, mats, rng, tries=tries, enumerate_limit=1 << 10)
        if T is not None:
            P = la.sub(F, la.matmul(F, la.matmul(F, T, M_B), la.inverse(F, T)), M_A)
            if la.rank(F, P) <= r:
                return P
    return None


def _rref_forms(F: Field, k: int, n: int):
    """All k x n reduced row echelon matrices of rank k."""
    for piv in itertools.combinations(range(n), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in piv]
        for vals in itertools.product(F.elements(), repeat=len(free)):
            R = la.zeros(F, k, n)
            for i, j in enumerate(piv):
                R[i][j] = F.one
            for (i, j), v in zip(free, vals):
                R[i][j] = v
            yield R


def low_rank_matrices(F: Field, n: int, r: int):
    """Every n x n matrix of rank <= r over a finite field, by increasing rank.

    A rank-k matrix is U V with U^T in reduced row echelon form (one per
    column space) and V of full row rank, so each matrix appears once.
    """
    yield la.zeros(F, n)
    for k in range(1, r + 1):
        Vs = [V for V in la.all_matrices(F, k, n) if la.rank(F, V) == k]
        for Ut in _rref_forms(F, k, n):
            U = la.transpose(Ut)
            for V in Vs:
                yield la.matmul(F, U, V)


ENUMERATION_LIMIT = 1 << 24


@dataclass
class CoreResult:
    P: list | None
    method: str
    complete: bool


def _constant_core(A: Pencil, psi: WeierstrassStructure, r: int, hint=None,
                   rng: random.Random | None = None, q_cap: int = 4000) -> CoreResult:
    F, n = A.F, A.n
    rng = rng or random.Random(0)
    M_A = [list(row) for row in A.G0]
    target_factors = psi.finite
    phi = weierstrass_structure(A)
    if phi == psi:
        return CoreResult(la.zeros(F, n), "Zero", True)
    if r == 0:
        return CoreResult(None, "Zero", True)
    K = canonical_pencil(psi)
    M_K = [list(row) for row in K.G0]
    options = ([hint] if hint is not None else []) + [M_K, la.transpose(M_K)]
    for M_B in _core_targets(options, F, n):
        D = la.sub(F, M_B, M_A)
        if la.rank(F, D) <= r:
            return CoreResult(D, "Shortcut", True)
    # canonical-to-canonical differences, conjugated back onto A
    KA = canonical_pencil(phi)
    QR = find_strict_equivalence(A, KA, rng)
    if QR is not None:
        Q, R = QR
        D = la.sub(F, M_K, [list(row) for row in KA.G0])
        if la.rank(F, D) <= r:
            # A + Q D R = Q (KA + D) R
            P = la.matmul(F, la.matmul(F, Q, D), R)
            if _same_finite_structure(F, la.add(F, M_A, P), target_factors):
                return CoreResult(P, "Shortcut", True)
    for M_B in _core_targets(options, F, n):
        P = _sylvester_search(F, M_A, M_B, r, rng, tries=24 if F.is_finite else 6,
                              random_kernels=64)
        if P is not None and _same_finite_structure(F, la.add(F, M_A, P), target_factors):
            return CoreResult(P, "SearchBackend", True)
    if F.is_finite and F.size ** (n * n) <= ENUMERATION_LIMIT:
        for P in low_rank_matrices(F, n, r):
            if _same_finite_structure(F, la.add(F, M_A, P), target_factors):
                return CoreResult(P, "SearchBackend", True)
        return CoreResult(None, "SearchBackend", True)
    if not F.is_finite:
        for height in (1, 2):
            for _ in range(q_cap // 2):
                k = rng.randint(1, r)
                U = [[F(rng.randint(-height, height)) for _ in range(k)] for _ in range(n)]
                V = [[F(rng.randint(-height, height)) for _ in range(n)] for _ in range(k)]
                P = la.matmul(F, U, V)
                if _same_finite_structure(F, la.add(F, M_A, P), target_factors):
                    return CoreResult(P, "SearchBackend", False)
    return CoreResult(None, "SearchBackend", False)


def constant_core(A: Pencil, psi: WeierstrassStructure, r: int, hint=None,
                  rng: random.Random | None = None) -> list | None:
    """Constant P with rank(P) <= r and A + P strictly equivalent to psi's pencil.

    ``A`` must be sI + A0 and ``psi`` free of infinite elementary divisors.
    Returns None when the backends find nothing.
    """
    if not _is_monic(A):
        raise ValueError("A must have identity leading coefficient")
    if any(m for m in psi.inf_mults):
        raise ValueError("target has infinite elementary divisors")
    return _constant_core(A, psi, r, hint, rng).P


# ---------------------------------------------------------------------------
# verification


def certificate_problems(A: Pencil, P: Pencil, target: WeierstrassStructure, r: int) -> list[str]:
    """Independent re-check of a certificate; empty list means it holds."""
    problems = []
    rk = P.normal_rank()
    if rk != r:
        problems.append(f"rank P(s) = {rk}, claimed {r}")
    C = A + P
    if not C.is_regular():
        problems.append("A + P is not regular")
        return problems
    got = weierstrass_structure(C)
    if got != target:
        problems.append(f"A + P has structure {got}, target {target}")
    if C.n <= 4:
        alt = weierstrass_structure_by_minors(C)
        if alt != got:
            problems.append(f"engines disagree: elimination {got}, minors {alt}")
    return problems


def _certify(A, P, psi, r, path, **extra) -> SynthCertificate:
    problems = certificate_problems(A, P, psi, r)
    if problems:
        raise AssertionError("certificate failed re-verification: " + "; ".join(problems))
    return SynthCertificate(A, P, r, psi, weierstrass_structure(A + P), path, extra)


# ---------------------------------------------------------------------------
# dispatch


def _pencils_equal_scalar(a: Pencil, b: Pencil) -> bool:
    return a.G0 == b.G0 and a.G1 == b.G1


def scalar_synth(a: Pencil, b: Pencil, r: int) -> Pencil:
    """1 x 1 case: p = 0, p = c b - a, or (over GF(2)) p = b - a."""
    F = a.F
    if a.is_zero() or b.is_zero():
        raise ValueError("scalar pencils must be nonzero")
    same = weierstrass_structure(a) == weierstrass_structure(b)
    if r == 0:
        if not same:
            raise Refusal("interlacing_fails", "r = 0 needs equal structures", r0=1)
        return Pencil.zero(F, 1)
    if r != 1:
        raise Refusal("rank_out_of_range", f"r = {r} outside 0..1")
    if F.size == 2:
        if _pencils_equal_scalar(a, b):
            raise Refusal("scalar_exception", "over GF(2) a rank-one p exists only when a(s) != b(s)")
        return b - a
    for c in F.candidates():
        if c == 0:
            continue
        cb = Pencil(F, la.scale(F, c, b.G0), la.scale(F, c, b.G1))
        if not _pencils_equal_scalar(a, cb):
            return cb - a
    raise AssertionError("unreachable: a field with more than two elements")


def _resolve_target(A: Pencil, target) -> tuple[WeierstrassStructure, Pencil]:
    if isinstance(target, Pencil):
        if not target.is_regular():
            raise Refusal("not_regular", "target pencil is not regular")
        if target.n != A.n:
            raise Refusal("size_mismatch", f"target has size {target.n}, A has {A.n}")
        return weierstrass_structure(target), target
    target.validate(A.n)
    return target, canonical_pencil(target)


def synthesize(A: Pencil, target, r: int, rng: random.Random | None = None) -> SynthCertificate:
    """Find P(s) with rank r and A + P strictly equivalent to ``target``.

    ``target`` is a regular :class:`Pencil` or a :class:`WeierstrassStructure`.
    Raises :class:`Refusal` when interlacing fails or no sufficiency result
    applies, :class:`BackendExhausted` when a bounded search gives up, and
    :class:`TheoremContradiction` when a complete search comes back empty.
    """
    rng = rng or random.Random(0)
    if not A.is_regular():
        raise Refusal("not_regular", "A is not regular")
    n = A.n
    psi, B = _resolve_target(A, target)
    if not 0 <= r <= n:
        raise Refusal("rank_out_of_range", f"r = {r} outside 0..{n}")
    phi = weierstrass_structure(A)
    rep = interlace(phi, psi, r)
    if not rep.holds:
        r0 = min_rank(phi, psi)
        raise Refusal("interlacing_fails", f"interlacing fails at r = {r} (minimal rank r0 = {r0})",
                      r0=r0, violation=rep.first_violation)
    if n == 1:
        P = scalar_synth(A, B, r)
        return _certify(A, P, psi, r, ["Scalar"])
    if r == 0:
        return _certify(A, Pencil.zero(A.F, n), psi, 0, ["ConstantCore"])
    app = applicability(phi, psi)
    if app.witness_c is not None:
        return _witness_path(A, B, psi, r, app.witness_c, rng)
    if app.shared_multiplicity_lambda0 is not None:
        lam0 = app.shared_multiplicity_lambda0
        try:
            return _deflation_path(A, B, psi, r, lam0, rng)
        except (Refusal, BackendExhausted) as exc:
            return _orbit_path(A, B, psi, r, rng, f"deflation failed: {exc}")
    raise Refusal(
        "no_applicability_path",
        "every point of F and infinity is an eigenvalue of A or B and no shared multiplicity "
        "point exists; only the exhaustive oracle can decide this instance",
    )


def _witness_path(A, B, psi, r, c, rng) -> SynthCertificate:
    F = A.F
    path = []
    X = None
    if c is INF:
        A1, B1 = A, B
    else:
        X = MobiusMap.sending_to_infinity(F, c)
        A1, B1 = mobius_pencil(X, A), mobius_pencil(X, B)
        path.append(f"Mobius({F.dump(c)})")
    path.append("LeadingConjugate")
    LA = [list(row) for row in A1.G1]
    Ah = A1.left_mul(la.inverse(F, LA))
    Bh = B1.left_mul(la.inverse(F, [list(row) for row in B1.G1]))
    Ph = _monic_perturbation(Ah, Bh, r, rng, path)
    P1 = Ph.left_mul(LA)
    P = mobius_pencil(X.inverse(), P1) if X is not None else P1
    if X is not None:
        assert mobius_pencil(X, P) == P1
    return _certify(A, P, psi, r, path, witness_c=c)


def _monic_perturbation(Ah: Pencil, Bh: Pencil, r: int, rng, path: list[str]) -> Pencil:
    F, n = Ah.F, Ah.n
    if r == n:
        path.append("FullRank")
        return full_rank_perturb(Ah, Bh)
    psi_h = weierstrass_structure(Bh)
    res = _constant_core(Ah, psi_h, r, hint=[list(row) for row in Bh.G0], rng=rng)
    if res.P is None:
        if res.complete:
            raise TheoremContradiction(
                f"complete constant search over {F} found no rank <= {r} perturbation although "
                "the bounded-rank interlacing conditions hold")
        raise BackendExhausted(f"constant bounded-rank search over {F} exhausted its candidate cap")
    path.append("ConstantCore")
    if res.method == "SearchBackend":
        path.append("SearchBackend")
    P0 = res.P
    if la.rank(F, P0) < r:
        path.append("Inflate")
        return inflate_rank(Ah, P0, r)
    return Pencil.constant(F, P0)


def general_linear_order(F: Field, n: int) -> int:
    q = F.size
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


ORBIT_ENUMERATION_LIMIT = 1 << 16


def orbit_search(A: Pencil, B: Pencil, r: int, rng, tries: int = 400) -> tuple[Pencil | None, bool]:
    """P = Q B R - A of rank exactly r over invertible Q, R.

    Random pairs are tried first; over a finite field with
    |GL_n|^2 <= ORBIT_ENUMERATION_LIMIT every pair is then tried, and the
    second value reports whether the search was complete.
    """
    F, n = A.F, A.n
    points = list(F.elements()) if F.is_finite else [F(k) for k in range(-2, 3)]

    def attempt(Q, R):
        P = B.left_mul(Q).right_mul(R) - A
        # rank at a point bounds the normal rank from below
        if any(la.rank(F, P.at(c)) > r for c in points) or la.rank(F, P.G1) > r:
            return None
        return P if P.normal_rank() == r else None

    def random_invertible():
        while True:
            M = [[F.random(rng, 2) for _ in range(n)] for _ in range(n)]
            if la.is_invertible(F, M):
                return M

    for _ in range(tries):
        P = attempt(random_invertible(), random_invertible())
        if P is not None:
            return P, False
    if F.is_finite and general_linear_order(F, n) ** 2 <= ORBIT_ENUMERATION_LIMIT:
        gl = [M for M in la.all_matrices(F, n, n) if la.is_invertible(F, M)]
        for Q in gl:
            for R in gl:
                P = attempt(Q, R)
                if P is not None:
                    return P, True
        return None, True
    return None, False


def _orbit_path(A, B, psi, r, rng, why: str) -> SynthCertificate:
    P, complete = orbit_search(A, B, r, rng)
    if P is not None:
        return _certify(A, P, psi, r, ["SearchBackend"], note=why)
    if complete:
        raise TheoremContradiction(
            f"no Q B R - A of rank {r} exists although the interlacing conditions hold with a "
            f"shared multiplicity point ({why})")
    raise BackendExhausted(f"orbit search gave up ({why})")


def _split_candidates(nf: int, k: int, r: int):
    hi = min(r, nf)
    for rf in range(hi, -1, -1):
        rj = r - rf
        if rj <= k:
            yield rf, rj


def _deflation_path(A, B, psi, r, lam0, rng) -> SynthCertificate:
    F, n = A.F, A.n
    path = []
    X = None
    if lam0 is INF:
        A1, B1 = A, B
    else:
        X = MobiusMap.sending_to_infinity(F, lam0)
        A1, B1 = mobius_pencil(X, A), mobius_pencil(X, B)
        path.append(f"Mobius({F.dump(lam0)})")
    path.append(f"Deflate({'inf' if lam0 is INF else F.dump(lam0)})")
    phi1, psi1 = weierstrass_structure(A1), weierstrass_structure(B1)
    KA, KB = canonical_pencil(phi1), canonical_pencil(psi1)
    QR = find_strict_equivalence(A1, KA, rng)
    if QR is None:
        raise BackendExhausted("no strict equivalence transform to the canonical pencil was found")
    Q, R = QR
    nf = sum(h.f.degree for h in phi1.hfactors)
    k = n - nf
    fin, inf = list(range(nf)), list(range(nf, n))
    FA, FB = KA.submatrix(fin, fin), KB.submatrix(fin, fin)
    J = KA.submatrix(inf, inf)
    assert KB.submatrix(inf, inf) == J
    last_err = None
    for rf, rj in _split_candidates(nf, k, r):
        E = self_perturbation(F, k, rj) if k else None
        if k and E is None:
            continue
        try:
            if nf == 0:
                if rf:
                    continue
                Pf, sub_path = None, []
            else:
                cert = synthesize(FA, FB, rf, rng)
                Pf, sub_path = cert.P, cert.path
        except Refusal as exc:
            last_err = exc
            continue
        blocks = ([Pf] if Pf is not None else []) + ([J.left_mul(E)] if k else [])
        PK = Pencil.block_diag(F, blocks)
        P1 = PK.left_mul(Q).right_mul(R)
        P = mobius_pencil(X.inverse(), P1) if X is not None else P1
        return _certify(A, P, psi, r, path + [f"Split({rf},{rj})"] + sub_path, shared_lambda0=lam0)
    raise Refusal("no_applicability_path",
                  "shared-multiplicity deflation found no feasible rank split"
                  + (f" ({last_err})" if last_err else ""))

"""Decision predicates on Weierstrass structures and canonical realizations."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg as la
from .algebra import INF, Field, HomogPoly, Poly, homog_divides, roots_in_field
from .pencilcore import Pencil, WeierstrassStructure, weierstrass_structure


@dataclass(frozen=True)
class InterlaceReport:
    r: int
    holds: bool
    first_violation: tuple[int, str] | None = None


def interlace(phi: WeierstrassStructure, psi: WeierstrassStructure, r: int) -> InterlaceReport:
    """Check phi_{i-r} | psi_i | phi_{i+r} for i = 1..n."""
    if phi.n != psi.n:
        raise ValueError(f"structures of different length {phi.n} and {psi.n}")
    if not 0 <= r <= phi.n:
        raise ValueError(f"r = {r} outside 0..{phi.n}")
    for i in range(1, phi.n + 1):
        if not homog_divides(phi.gamma(i - r), psi.gamma(i)):
            return InterlaceReport(r, False, (i, "lower"))
        if not homog_divides(psi.gamma(i), phi.gamma(i + r)):
            return InterlaceReport(r, False, (i, "upper"))
    return InterlaceReport(r, True)


def min_rank(phi: WeierstrassStructure, psi: WeierstrassStructure) -> int:
    """Smallest r for which the interlacing conditions hold."""
    for r in range(phi.n + 1):
        if interlace(phi, psi, r).holds:
            return r
    raise AssertionError("interlacing must hold at r = n")


def const_rank_bound(A: Pencil, B: Pencil) -> int:
    """min over lambda in F of rank A(lambda) + rank B(lambda), capped at n.

    Only the base field is searched, so over a non-closed field this is
    informational. Both pencils must have identity leading coefficient.
    """
    F = A.F
    n = A.n
    ident = la.freeze(la.identity(F, n))
    if A.G1 != ident or B.G1 != ident:
        raise ValueError("const_rank_bound needs pencils with identity leading coefficient")
    best = n
    for lam in roots_in_field(A.det() * B.det()):
        best = min(best, la.rank(F, A.at(lam)) + la.rank(F, B.at(lam)))
    return best


@dataclass(frozen=True)
class ApplicabilityReport:
    joint_spectrum_covers_field: bool
    witness_c: object = None
    shared_multiplicity_lambda0: object = None
    scalar_exception: bool = False

    @property
    def has_path(self) -> bool:
        return self.witness_c is not None or self.shared_multiplicity_lambda0 is not None


def witness_candidates(F: Field):
    """INF, then 0, 1, 2, ... (exhausting F when finite)."""
    yield INF
    yield from F.candidates()


def _structure_of(X) -> WeierstrassStructure:
    return X if isinstance(X, WeierstrassStructure) else weierstrass_structure(X)


def applicability(A, B) -> ApplicabilityReport:
    """Which sufficiency hypothesis is available for the pair (A, B).

    Either argument may be a regular :class:`Pencil` or its structure;
    eigenvalue tests are done on the structures, which is equivalent to the
    determinant tests det A(c) != 0.
    """
    phi, psi = _structure_of(A), _structure_of(B)
    F = phi.F
    witness = None
    for c in witness_candidates(F):
        if not phi.has_eigenvalue(c) and not psi.has_eigenvalue(c):
            witness = c
            break
    covers = witness is None
    lam0 = None
    tested = [INF] + sorted(set(roots_in_field(phi.hfactors[-1].f)) | set(roots_in_field(psi.hfactors[-1].f)))
    for lam in tested:
        if phi.multiplicities(lam) == psi.multiplicities(lam):
            lam0 = lam
            break
    return ApplicabilityReport(
        joint_spectrum_covers_field=covers,
        witness_c=witness,
        shared_multiplicity_lambda0=lam0,
        scalar_exception=(phi.n == 1 and F.size == 2),
    )


def sufficiency_applies(phi: WeierstrassStructure, psi: WeierstrassStructure, r: int,
                        report: ApplicabilityReport | None = None) -> bool:
    """Whether the known sufficiency results cover (phi, psi, r).

    n = 1 uses the scalar rules; otherwise a witness point or a shared
    multiplicity point is needed.
    """
    if phi.n == 1:
        if r == 1 and phi.F.size == 2:
            return phi != psi
        return True
    report = report or applicability(phi, psi)
    return report.has_path


def companion(F: Field, f: Poly) -> list[list]:
    """Companion matrix C(f) with ones on the subdiagonal; det(sI - C) = f."""
    f = f.monic()
    d = f.degree
    C = la.zeros(F, d)
    for i in range(1, d):
        C[i][i - 1] = F.one
    for i in range(d):
        C[i][d - 1] = F.neg(f.coeff(i))
    return C


def nilpotent_block(F: Field, k: int) -> list[list]:
    N = la.zeros(F, k)
    for i in range(k - 1):
        N[i][i + 1] = F.one
    return N


def canonical_pencil(target: WeierstrassStructure) -> Pencil:
    """Block diagonal pencil realizing ``target``.

    Finite blocks sI - C(gamma_i) come first (ascending i), then infinite
    blocks I + sN of size m_i (ascending i). The result is re-checked.
    """
    target.validate()
    F = target.F
    blocks = []
    for h in target.hfactors:
        if h.f.degree > 0:
            C = companion(F, h.f)
            blocks.append(Pencil(F, la.scale(F, F.neg(F.one), C), la.identity(F, len(C))))
    for h in target.hfactors:
        if h.m > 0:
            blocks.append(Pencil(F, la.identity(F, h.m), nilpotent_block(F, h.m)))
    P = Pencil.block_diag(F, blocks)
    got = weierstrass_structure(P)
    if got != target:
        raise AssertionError(f"canonical pencil realizes {got}, expected {target}")
    return P


def finite_part(S: WeierstrassStructure) -> WeierstrassStructure:
    """Structure of the finite Weierstrass block, size n - mu_a(inf)."""
    nf = sum(h.f.degree for h in S.hfactors)
    fs = [h.f for h in S.hfactors][S.n - nf:] if nf else []
    return WeierstrassStructure(tuple(HomogPoly(f) for f in fs))


def interlace_finite(alpha: list[Poly], beta: list[Poly], r: int) -> bool:
    """beta_{i-r} | alpha_i | beta_{i+r} for ordinary invariant factor lists."""
    n = len(alpha)
    F = alpha[0].F

    def get(seq, i):
        if i < 1:
            return Poly.one(F)
        if i > n:
            return Poly.zero(F)
        return seq[i - 1]

    return all(get(beta, i - r).divides(get(alpha, i)) and get(alpha, i).divides(get(beta, i + r))
               for i in range(1, n + 1))


def structure_from_finite(F: Field, fs: list[Poly]) -> WeierstrassStructure:
    return WeierstrassStructure(tuple(HomogPoly(f) for f in fs))


"""Determinant placement under perturbations of prescribed rank.

Given a regular pencil A(s) and a target determinant, build P(s) of rank r
with det(A + P) equal to the target up to a nonzero scalar. The target is a
homogeneous polynomial of total degree n or an ordinary monic polynomial q
with deg q <= n (then the homogeneous target is t^(n - deg q) q(s/t)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import INF, HomogPoly, Poly, homog_divides, homogenize
from .pencilcore import Pencil, WeierstrassStructure, homogeneous_det, weierstrass_structure
from .structure import applicability
from .synth import Refusal, SynthCertificate, synthesize


@dataclass
class PlacementReport:
    r: int
    divisible: bool
    # the ordinary-polynomial form of the test; None for homogeneous targets
    finite_divides: bool | None = None
    infinite_degree_ok: bool | None = None
    applicability_witness: object = None
    shared_lambda0: object = None

    @property
    def feasible(self) -> bool:
        return self.divisible


def _leading_product(phi: WeierstrassStructure, k: int) -> HomogPoly:
    out = HomogPoly.one(phi.F)
    for h in phi.hfactors[:k]:
        out = out * h
    return out


def _check_degree(phi: WeierstrassStructure, Psi: HomogPoly) -> None:
    if Psi.is_zero() or Psi.degree != phi.n:
        raise ValueError(f"target must have total degree n = {phi.n}")


def placeable(A: Pencil | WeierstrassStructure, r: int, Psi: HomogPoly) -> bool:
    """phi_1 ... phi_{n-r} divides Psi."""
    phi = A if isinstance(A, WeierstrassStructure) else weierstrass_structure(A)
    _check_degree(phi, Psi)
    if not 0 <= r <= phi.n:
        raise ValueError(f"r = {r} outside 0..{phi.n}")
    return homog_divides(_leading_product(phi, phi.n - r), Psi)


def placeable_poly(A: Pencil | WeierstrassStructure, r: int, q: Poly) -> tuple[bool, bool]:
    """Ordinary-polynomial test: (alpha_1 ... alpha_{n-r} | q, sum of m_i(inf) <= n - deg q)."""
    phi = A if isinstance(A, WeierstrassStructure) else weierstrass_structure(A)
    n = phi.n
    if q.is_zero() or q.degree > n:
        raise ValueError(f"q must be nonzero of degree <= {n}")
    lead = phi.hfactors[:n - r]
    prod = Poly.one(phi.F)
    for h in lead:
        prod = prod * h.f
    return prod.divides(q), sum(h.m for h in lead) <= n - q.degree


def placement_report(A: Pencil, r: int, target) -> PlacementReport:
    phi = weierstrass_structure(A)
    if isinstance(target, Poly):
        fin, inf = placeable_poly(phi, r, target)
        Psi = homogenize(target.monic(), phi.n)
    else:
        fin = inf = None
        Psi = target
    div = placeable(phi, r, Psi)
    psi_for_app = WeierstrassStructure((HomogPoly.one(phi.F),) * (phi.n - 1) + (Psi,))
    app = applicability(phi, psi_for_app)
    return PlacementReport(r, div, fin, inf, app.witness_c, app.shared_multiplicity_lambda0)


def placement_chain(phi: WeierstrassStructure, r: int, Psi: HomogPoly) -> WeierstrassStructure:
    """psi_i = phi_{i-r} for i < n and psi_n = phi_{n-r} * Psi / (phi_1 ... phi_{n-r})."""
    n = phi.n
    gamma = Psi.exact_div(_leading_product(phi, n - r))
    hs = [phi.gamma(i - r) for i in range(1, n)]
    hs.append(phi.gamma(n - r) * gamma)
    psi = WeierstrassStructure(tuple(hs))
    psi.validate(n)
    return psi


def place(A: Pencil, r: int, target, rng: random.Random | None = None) -> SynthCertificate:
    """P(s) of rank r with det(A + P) = k * target, k != 0.

    ``target`` is a :class:`HomogPoly` of total degree n or a :class:`Poly`.
    Raises :class:`Refusal` naming the failed condition.
    """
    if not A.is_regular():
        raise Refusal("not_regular", "A is not regular")
    n = A.n
    if not 0 <= r <= n:
        raise Refusal("rank_out_of_range", f"r = {r} outside 0..{n}")
    phi = weierstrass_structure(A)
    if isinstance(target, Poly):
        if target.is_zero() or target.degree > n:
            raise ValueError(f"q must be nonzero of degree <= {n}")
        fin, inf = placeable_poly(phi, r, target)
        if not fin:
            raise Refusal("finite_divisibility_fails",
                          f"alpha_1 ... alpha_{n - r} does not divide q")
        if not inf:
            raise Refusal("infinite_degree_fails",
                          f"sum of the first {n - r} infinite multiplicities exceeds n - deg q = {n - target.degree}")
        Psi = homogenize(target.monic(), n)
    else:
        Psi = target
        if not placeable(phi, r, Psi):
            raise Refusal("divisibility_fails", f"phi_1 ... phi_{n - r} does not divide the target")
    psi = placement_chain(phi, r, Psi)
    cert = synthesize(A, psi, r, rng)
    k, got = homogeneous_det(A + cert.P)
    if got != Psi or k == 0:
        raise AssertionError(f"placement determinant {got} differs from target {Psi}")
    d = (A + cert.P).det()
    assert d.degree == n - cert.achieved.algebraic_multiplicity(INF)
    cert.extra.update(det_scalar=k, det_target=Psi)
    return cert

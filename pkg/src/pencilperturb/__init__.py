"""Fixed-rank perturbations of regular matrix pencils over Q and GF(p)."""

from .algebra import GF, INF, QQ, HomogPoly, Poly, field_from_name
from .pencilcore import Pencil, WeierstrassStructure, weierstrass_structure
from .structure import applicability, canonical_pencil, interlace, min_rank
from .synth import BackendExhausted, Refusal, SynthCertificate, TheoremContradiction, synthesize

__all__ = [
    "GF", "INF", "QQ", "HomogPoly", "Poly", "field_from_name",
    "Pencil", "WeierstrassStructure", "weierstrass_structure",
    "applicability", "canonical_pencil", "interlace", "min_rank",
    "BackendExhausted", "Refusal", "SynthCertificate", "TheoremContradiction", "synthesize",
]

"""JSON formats for pencils, structures, certificates and reports.

Field entries are ints; over Q a non-integral entry is the string "num/den".
Polynomials are coefficient lists, lowest degree first. Output is written
with sorted keys so files can be compared byte for byte.
"""

from __future__ import annotations

import json
from typing import Any

from .algebra import INF, Field, HomogPoly, Poly, field_from_name
from .pencilcore import Pencil, WeierstrassStructure


class InputError(ValueError):
    """Malformed input, with the offending location in the message."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_file(path: str) -> Any:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object")
    if key not in doc:
        raise InputError(f"{where}: missing field '{key}'")
    return doc[key]


def parse_field(doc: dict, where: str = "$") -> Field:
    name = need(doc, "field", where)
    try:
        return field_from_name(str(name))
    except ValueError as exc:
        raise InputError(f"{where}.field: {exc}") from exc


def entry(F: Field, tok, where: str):
    try:
        return F.parse(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _matrix(F: Field, rows, m: int, n: int, where: str) -> list[list]:
    if not isinstance(rows, list) or len(rows) != m:
        raise InputError(f"{where}: expected {m} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{where}[{i}]: expected {n} entries")
        out.append([entry(F, tok, f"{where}[{i}][{j}]") for j, tok in enumerate(row)])
    return out


def pencil_from_json(doc: dict, where: str = "$", F: Field | None = None) -> Pencil:
    F = F or parse_field(doc, where)
    m = need(doc, "m", where)
    n = need(doc, "n", where)
    if not (isinstance(m, int) and isinstance(n, int) and m > 0 and n > 0):
        raise InputError(f"{where}: m and n must be positive integers")
    G0 = _matrix(F, need(doc, "G0", where), m, n, f"{where}.G0")
    G1 = _matrix(F, need(doc, "G1", where), m, n, f"{where}.G1")
    return Pencil(F, G0, G1)


def pencil_to_json(A: Pencil) -> dict:
    F = A.F
    return {
        "field": F.name,
        "m": A.m,
        "n": A.n,
        "G0": [[F.dump(a) for a in row] for row in A.G0],
        "G1": [[F.dump(a) for a in row] for row in A.G1],
    }


def poly_to_json(f: Poly) -> list:
    return [f.F.dump(a) for a in f.c]


def poly_from_json(F: Field, coeffs, where: str) -> Poly:
    if not isinstance(coeffs, list) or not coeffs:
        raise InputError(f"{where}: expected a nonempty coefficient list")
    return Poly(F, [entry(F, tok, f"{where}[{k}]") for k, tok in enumerate(coeffs)])


def homog_to_json(h: HomogPoly) -> dict:
    return {"inf_mult": h.m, "finite": poly_to_json(h.f)}


def homog_from_json(F: Field, doc: dict, where: str) -> HomogPoly:
    m = need(doc, "inf_mult", where)
    if not isinstance(m, int) or m < 0:
        raise InputError(f"{where}.inf_mult: expected a nonnegative integer")
    f = poly_from_json(F, need(doc, "finite", where), f"{where}.finite")
    if f.is_zero():
        raise InputError(f"{where}.finite: zero polynomial")
    return HomogPoly(f, m)


def structure_to_json(S: WeierstrassStructure) -> dict:
    return {"field": S.F.name, "hfactors": [homog_to_json(h) for h in S.hfactors]}


def structure_from_json(doc: dict, where: str = "$", F: Field | None = None) -> WeierstrassStructure:
    F = F or parse_field(doc, where)
    hs = need(doc, "hfactors", where)
    if not isinstance(hs, list) or not hs:
        raise InputError(f"{where}.hfactors: expected a nonempty list")
    S = WeierstrassStructure(tuple(homog_from_json(F, h, f"{where}.hfactors[{i}]") for i, h in enumerate(hs)))
    try:
        S.validate()
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc
    return S


def point_to_json(F: Field, lam):
    return "inf" if lam is INF else F.dump(lam)


def pair_from_json(doc: dict) -> tuple[Pencil, Pencil | WeierstrassStructure]:
    """{"A": pencil, "B": pencil} or {"A": pencil, "target": structure}."""
    A = pencil_from_json(need(doc, "A", "$"), "$.A")
    if "B" in doc:
        B = pencil_from_json(doc["B"], "$.B")
        if B.F != A.F:
            raise InputError("$.B: field differs from $.A")
        return A, B
    if "target" in doc:
        return A, structure_from_json(doc["target"], "$.target", A.F)
    raise InputError("$: need field 'B' or 'target'")


def certificate_to_json(cert) -> dict:
    F = cert.A.F
    out = {
        "field": F.name,
        "rank": cert.rank_P,
        "P": pencil_to_json(cert.P),
        "path": list(cert.path),
        "achieved": structure_to_json(cert.achieved),
        "target": structure_to_json(cert.target),
    }
    if "det_target" in cert.extra:
        out["det"] = {"scalar": F.dump(cert.extra["det_scalar"]), "target": homog_to_json(cert.extra["det_target"])}
    return out

"""Versioned JSON serialization with exact rational payloads.

Every document carries a `schema` field; keys are emitted sorted so that
serialized output is byte-identical across runs.  Scalars travel as exact
rational strings ("3/2", "1/2+3/4*i"); nothing is ever converted to floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List

from .linalg import Mat
from .modules import ModuleWindow, Orbit
from .operators import Operator
from .poly import MultiPoly, UniPoly
from .scalars import Scalar

OPERATOR_SCHEMA = "intdiffops.operator/1"
POLY_SCHEMA = "intdiffops.polynomial/1"
MODULE_SCHEMA = "intdiffops.module/1"
REPORT_SCHEMA = "intdiffops.report/1"


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(", ", ": "))


# -- scalars ----------------------------------------------------------------


def scalar_to_str(c: Scalar) -> str:
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        return f"{c.im}*i" if abs(c.im) != 1 else ("i" if c.im > 0 else "-i")
    ims = f"{c.im}*i" if abs(c.im) != 1 else ("i" if c.im > 0 else "-i")
    sep = "+" if c.im > 0 else ""
    return f"{c.re}{sep}{ims}"


def scalar_from_str(text: str) -> Scalar:
    s = text.strip().replace(" ", "")
    if "i" not in s:
        return Scalar(Fraction(s))
    body = s.replace("*i", "i")
    # split off the trailing imaginary summand
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    if cut == -1:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
        if "i" not in im_part:  # pure imaginary like "-3/2i" has no split point
            re_part, im_part = "0", body
    im_part = im_part[:-1]  # drop the i
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    return Scalar(Fraction(re_part) if re_part else Fraction(0), im)


# -- matrices ---------------------------------------------------------------


def mat_to_json(m: Mat) -> List[List[str]]:
    return [[scalar_to_str(c) for c in row] for row in m.data]


def mat_from_json(rows: List[List[str]], cols_hint: int = 0) -> Mat:
    """Entries are scalar strings; bare JSON integers are also accepted."""
    if not rows:
        return Mat(0, cols_hint)
    data = [
        [scalar_from_str(c if isinstance(c, str) else str(c)) for c in row]
        for row in rows
    ]
    return Mat(len(data), len(data[0]), data)


# -- polynomials ------------------------------------------------------------


def unipoly_to_json(p: UniPoly) -> dict:
    terms = [
        {"coeff": scalar_to_str(c), "exp": d}
        for d, c in sorted(p.coeffs.items())
    ]
    return {"schema": POLY_SCHEMA, "terms": terms, "vars": 1}


def multipoly_to_json(p: MultiPoly) -> dict:
    terms = [
        {"coeff": scalar_to_str(c), "exp": list(e)}
        for e, c in p.terms_sorted()
    ]
    return {"schema": POLY_SCHEMA, "terms": terms, "vars": p.n}


# -- operators --------------------------------------------------------------


def _slot_to_json(slot) -> dict:
    kind = slot[0]
    if kind == "H":
        return {"k": slot[1], "kind": "H"}
    if kind in ("D", "I"):
        return {"i": slot[1], "k": slot[2], "kind": kind}
    return {"kind": "E", "s": slot[1], "t": slot[2]}


def _slot_from_json(d: dict):
    kind = d["kind"]
    if kind == "H":
        return ("H", d["k"])
    if kind in ("D", "I"):
        return (kind, d["i"], d["k"])
    return ("E", d["s"], d["t"])


def operator_to_json(a: Operator) -> dict:
    from .operators import term_sort_key

    terms = []
    for term in sorted(a.terms, key=term_sort_key):
        terms.append(
            {
                "coeff": scalar_to_str(a.terms[term]),
                "slots": [_slot_to_json(s) for s in term],
            }
        )
    return {"n": a.n, "schema": OPERATOR_SCHEMA, "terms": terms}


def operator_from_json(doc: dict) -> Operator:
    if doc.get("schema") != OPERATOR_SCHEMA:
        raise ValueError(f"unexpected operator schema {doc.get('schema')!r}")
    n = doc["n"]
    terms = {}
    for t in doc["terms"]:
        term = tuple(_slot_from_json(s) for s in t["slots"])
        terms[term] = scalar_from_str(t["coeff"])
    return Operator(n, terms)


# -- module windows ---------------------------------------------------------


def _point_key(p) -> str:
    return ",".join(str(x) for x in p)


def _point_from_key(key: str):
    return tuple(int(x) for x in key.split(","))


def orbit_to_json(orbit: Orbit) -> dict:
    return {
        "integer": list(orbit.integer),
        "reps": [scalar_to_str(r) for r in orbit.reps],
    }


def orbit_from_json(doc: dict) -> Orbit:
    return Orbit(
        [scalar_from_str(r) for r in doc["reps"]],
        [bool(b) for b in doc["integer"]],
    )


def module_to_json(m: ModuleWindow) -> dict:
    maps = []
    for (kind, slot, p) in sorted(m.maps):
        mat = m.maps[(kind, slot, p)]
        maps.append(
            {
                "kind": kind,
                "matrix": mat_to_json(mat),
                "point": list(p),
                "shape": list(mat.shape),
                "slot": slot,
            }
        )
    return {
        "maps": maps,
        "orbit": orbit_to_json(m.orbit),
        "schema": MODULE_SCHEMA,
        "side": m.side,
        "spaces": {_point_key(p): d for p, d in sorted(m.spaces.items())},
        "window": [list(iv) for iv in m.window],
    }


def module_from_json(doc: dict) -> ModuleWindow:
    if doc.get("schema") != MODULE_SCHEMA:
        raise ValueError(f"unexpected module schema {doc.get('schema')!r}")
    orbit = orbit_from_json(doc["orbit"])
    window = [tuple(iv) for iv in doc["window"]]
    spaces = {_point_from_key(k): d for k, d in doc["spaces"].items()}
    maps = {}
    for entry in doc["maps"]:
        rows, cols = entry["shape"]
        mat = mat_from_json(entry["matrix"], cols)
        if mat.shape != (rows, cols):
            raise ValueError("matrix payload does not match its declared shape")
        maps[(entry["kind"], entry["slot"], tuple(entry["point"]))] = mat
    return ModuleWindow(orbit, window, spaces, maps, side=doc.get("side", "left"))

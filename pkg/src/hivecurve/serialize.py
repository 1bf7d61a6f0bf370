"""JSON document schemas (versioned "hivecurve/1") and rational round-trips.

Rationals travel as "p/q" strings so documents are bit-stable; floats are
emitted through json's shortest-roundtrip repr.  Readers raise SchemaError on
malformed input so the CLI can map them to its schema exit code.
"""

import json
from fractions import Fraction

import numpy as np

from .asymptotics import LiftedFamily, RMatrixFamily
from .errors import SchemaError
from .hive import BoundarySpec, Hive, index_set
from .patchwork import SignedLifting
from .pencil import TernaryForm, gaussian_matrix
from .tropical import Lifting

SCHEMA = "hivecurve/1"


def rat_str(v):
    f = Fraction(v)
    return f"{f.numerator}/{f.denominator}"


def parse_rat(s):
    try:
        if isinstance(s, str):
            num, _, den = s.partition("/")
            return Fraction(int(num), int(den)) if den else Fraction(int(num))
        if isinstance(s, int):
            return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}") from exc
    raise SchemaError(f"bad rational {s!r}")


def parse_scalar(v):
    """Number or "p/q" string -> float or Fraction."""
    if isinstance(v, str):
        return parse_rat(v)
    if isinstance(v, (int, float)):
        return v
    raise SchemaError(f"bad scalar {v!r}")


def emit_scalar(v):
    if isinstance(v, Fraction):
        return rat_str(v)
    return float(v)


def _check(doc, keys):
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise SchemaError(f'missing or wrong "schema" (want {SCHEMA!r})')
    for k in keys:
        if k not in doc:
            raise SchemaError(f"missing key {k!r}")


def _value_items(doc, field="values"):
    n = doc["n"]
    out = {}
    for item in doc[field]:
        try:
            out[(item["i"], item["j"], item["k"])] = item
        except (TypeError, KeyError) as exc:
            raise SchemaError(f"bad grid entry {item!r}") from exc
    if set(out) != set(index_set(n)):
        raise SchemaError(f"entries do not cover the order-{n} grid")
    return out


def hive_to_doc(h):
    return {"schema": SCHEMA, "n": h.n,
            "values": [{"i": i, "j": j, "k": k, "v": rat_str(h.values[(i, j, k)])}
                       for (i, j, k) in index_set(h.n)]}


def hive_from_doc(doc):
    _check(doc, ("n", "values"))
    items = _value_items(doc)
    return Hive(doc["n"], {idx: parse_rat(it["v"]) for idx, it in items.items()})


def lifting_to_doc(l):
    return {"schema": SCHEMA, "n": l.n,
            "values": [{"i": i, "j": j, "k": k, "v": rat_str(l.exponents[(i, j, k)])}
                       for (i, j, k) in index_set(l.n)]}


def lifting_from_doc(doc):
    _check(doc, ("n", "values"))
    items = _value_items(doc)
    return Lifting(doc["n"], {idx: parse_rat(it["v"]) for idx, it in items.items()})


def signed_lifting_to_doc(sl):
    doc = lifting_to_doc(sl.lifting)
    doc["signs"] = [{"i": i, "j": j, "k": k,
                     "s": "+" if sl.signs[(i, j, k)] > 0 else "-"}
                    for (i, j, k) in index_set(sl.lifting.n)]
    return doc


def signed_lifting_from_doc(doc):
    lifting = lifting_from_doc(doc)
    if "signs" not in doc:
        raise SchemaError('missing key "signs"')
    signs = {}
    for item in doc["signs"]:
        if item.get("s") not in ("+", "-"):
            raise SchemaError(f"bad sign entry {item!r}")
        signs[(item["i"], item["j"], item["k"])] = 1 if item["s"] == "+" else -1
    if set(signs) != set(index_set(lifting.n)):
        raise SchemaError("sign entries do not cover the grid")
    return SignedLifting(lifting, signs)


def form_to_doc(form):
    return {"schema": SCHEMA, "n": form.n,
            "values": [{"i": i, "j": j, "k": k, "v": emit_scalar(form.coeffs[(i, j, k)])}
                       for (i, j, k) in index_set(form.n)]}


def form_from_doc(doc):
    _check(doc, ("n", "values"))
    items = _value_items(doc)
    return TernaryForm(doc["n"], {idx: parse_scalar(it["v"]) for idx, it in items.items()})


def boundary_to_doc(b):
    return {"schema": SCHEMA,
            "alpha": [emit_scalar(x) for x in b.alpha],
            "beta": [emit_scalar(x) for x in b.beta],
            "gamma": [emit_scalar(x) for x in b.gamma]}


def boundary_from_doc(doc):
    _check(doc, ("alpha", "beta", "gamma"))
    return BoundarySpec(tuple(parse_rat(x) for x in doc["alpha"]),
                        tuple(parse_rat(x) for x in doc["beta"]),
                        tuple(parse_rat(x) for x in doc["gamma"]))


def matrix_to_doc(m):
    m = np.asarray(m)
    if m.dtype == object:
        re = [[rat_str(m[i, j].re) for j in range(m.shape[1])] for i in range(m.shape[0])]
        im = [[rat_str(m[i, j].im) for j in range(m.shape[1])] for i in range(m.shape[0])]
    else:
        mc = m.astype(np.complex128)
        re = [[float(x) for x in row] for row in mc.real]
        im = [[float(x) for x in row] for row in mc.imag]
    return {"schema": SCHEMA, "n": int(m.shape[0]), "re": re, "im": im}


def matrix_from_doc(doc, mode="float"):
    _check(doc, ("n", "re", "im"))
    n = doc["n"]
    re, im = doc["re"], doc["im"]
    if len(re) != n or len(im) != n or any(len(r) != n for r in re + im):
        raise SchemaError("matrix parts must be n x n")
    if mode == "exact":
        return gaussian_matrix([[parse_rat(x) if isinstance(x, str) else Fraction(x)
                                 for x in row] for row in re],
                               [[parse_rat(x) if isinstance(x, str) else Fraction(x)
                                 for x in row] for row in im])
    def val(x):
        return float(parse_rat(x)) if isinstance(x, str) else float(x)
    return (np.array([[val(x) for x in row] for row in re])
            + 1j * np.array([[val(x) for x in row] for row in im]))


def triple_from_doc(doc, names, mode="float"):
    _check(doc, names)
    return tuple(matrix_from_doc(doc[k], mode=mode) for k in names)


def triple_to_doc(mats, names):
    out = {"schema": SCHEMA}
    for name, m in zip(names, mats):
        out[name] = matrix_to_doc(m)
    return out


def family_to_doc(fam):
    return {"schema": SCHEMA, "n": fam.n,
            "values": [{"i": i, "j": j, "k": k,
                        "c": emit_scalar(fam.coeff[(i, j, k)]),
                        "h": rat_str(fam.exponent[(i, j, k)])}
                       for (i, j, k) in index_set(fam.n)]}


def family_from_doc(doc):
    _check(doc, ("n", "values"))
    items = _value_items(doc)
    coeff = {idx: parse_scalar(it["c"]) for idx, it in items.items()}
    expo = {idx: parse_rat(it["h"]) for idx, it in items.items()}
    return LiftedFamily(doc["n"], coeff, expo)


def rmatrix_from_doc(doc):
    _check(doc, ("order", "matrices"))
    coeffs = []
    exps = []
    for entry in doc["matrices"]:
        if "coeff" not in entry or "exponent" not in entry:
            raise SchemaError("each family matrix needs coeff and exponent tables")
        coeffs.append(matrix_from_doc(entry["coeff"]))
        exps.append(np.array([[float(parse_scalar(x)) for x in row]
                              for row in entry["exponent"]]))
    return RMatrixFamily(doc["order"], tuple(coeffs), tuple(exps))


def subdivision_to_doc(sub, classification=None):
    cells = []
    for c in sub.cells:
        cells.append({"vertices": [list(v) for v in c.vertices],
                      "points": sorted(list(p) for p in c.points),
                      "functional": [rat_str(x) for x in c.functional]})
    doc = {"schema": SCHEMA, "n": sub.n, "cells": cells,
           "edges": [sorted(list(v) for v in e) for e in sub.edges]}
    if classification is not None:
        doc["classification"] = classification
    return doc


def curve_to_doc(curve):
    return {"schema": SCHEMA, "n": curve.n,
            "vertices": [[rat_str(x), rat_str(y)] for (x, y) in curve.vertices],
            "edges": [{"v1": v1, "v2": v2, "dir": list(d), "mult": m}
                      for (v1, v2, d, m) in curve.edges],
            "rays": [{"v": v, "dir": list(d), "mult": m, "side": side}
                     for (v, d, m, side) in curve.rays]}


def dump(doc, path=None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc

"""JSON documents in the ``wlskit-v1`` format and report encoding.

Every input document is an object with ``"format": "wlskit-v1"`` and a
``"type"`` naming its payload.  Integers outside the signed 64-bit range
are written as decimal strings and accepted as such on input.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

from .abelian import Morphism, Presentation, Subgroup
from .complexes import CochainComplex
from .matrix import IntMatrix, InvalidInput
from .rings import GradedRing, ring_from_dict
from .spectral import FilteredComplex

FORMAT = "wlskit-v1"
REPORT_SCHEMA = "wlskit-report-v1"
_INT64 = 2**63


def parse_int(v: Any, field: str) -> int:
    if isinstance(v, bool):
        raise InvalidInput(f"{field}: expected an integer, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise InvalidInput(f"{field}: expected an integer, got {v!r}")


def parse_rational(v: Any, field: str) -> Fraction:
    if isinstance(v, bool):
        raise InvalidInput(f"{field}: expected a rational number, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except ValueError:
            pass
    raise InvalidInput(f"{field}: expected an integer or a fraction string, got {v!r}")


def _obj(v: Any, field: str) -> dict:
    if not isinstance(v, dict):
        raise InvalidInput(f"{field}: expected an object")
    return v


def _get(obj: dict, key: str, field: str):
    if key not in obj:
        raise InvalidInput(f"{field}.{key}: missing")
    return obj[key]


# ---------------------------------------------------------------- decoding

def matrix_from_json(obj: Any, field: str = "matrix") -> IntMatrix:
    if isinstance(obj, list):
        rows = [[parse_int(x, f"{field}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(obj)]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise InvalidInput(f"{field}: rows of unequal length")
        return IntMatrix(len(rows), cols, rows)
    obj = _obj(obj, field)
    r = parse_int(_get(obj, "rows", field), f"{field}.rows")
    c = parse_int(_get(obj, "cols", field), f"{field}.cols")
    entries = _get(obj, "entries", field)
    if not isinstance(entries, list) or len(entries) != r:
        raise InvalidInput(f"{field}.entries: expected {r} rows")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != c:
            raise InvalidInput(f"{field}.entries[{i}]: expected {c} entries")
        rows.append([parse_int(x, f"{field}.entries[{i}][{j}]") for j, x in enumerate(row)])
    return IntMatrix(r, c, rows)


def group_from_json(obj: Any, field: str = "group") -> Presentation:
    obj = _obj(obj, field)
    n = parse_int(_get(obj, "generators", field), f"{field}.generators")
    if n < 0:
        raise InvalidInput(f"{field}.generators: must be nonnegative")
    rel = obj.get("relations")
    R = matrix_from_json(rel, f"{field}.relations") if rel is not None else IntMatrix(n, 0)
    if R.rows != n and not (R.rows == 0 and R.cols == 0):
        raise InvalidInput(f"{field}.relations: has {R.rows} rows for {n} generators")
    if R.rows == 0 and n:
        R = IntMatrix(n, 0)
    return Presentation(n, R)


def morphism_from_json(obj: Any, field: str = "morphism") -> Morphism:
    obj = _obj(obj, field)
    S = group_from_json(_get(obj, "source", field), f"{field}.source")
    T = group_from_json(_get(obj, "target", field), f"{field}.target")
    M = matrix_from_json(_get(obj, "matrix", field), f"{field}.matrix")
    if M.rows == 0 and M.cols == 0:
        M = IntMatrix(T.generators, S.generators)
    try:
        return Morphism(S, T, M)
    except InvalidInput as exc:
        raise InvalidInput(f"{field}.matrix: {exc}") from None


def vectors_from_json(obj: Any, length: int, field: str) -> list[list[int]]:
    if not isinstance(obj, list):
        raise InvalidInput(f"{field}: expected a list of vectors")
    out = []
    for i, v in enumerate(obj):
        if not isinstance(v, list) or len(v) != length:
            raise InvalidInput(f"{field}[{i}]: expected a vector of length {length}")
        out.append([parse_int(x, f"{field}[{i}][{j}]") for j, x in enumerate(v)])
    return out


def subgroup_from_json(obj: Any, field: str = "subgroup") -> Subgroup:
    obj = _obj(obj, field)
    G = group_from_json(_get(obj, "ambient", field), f"{field}.ambient")
    gens = vectors_from_json(_get(obj, "generators", field), G.generators, f"{field}.generators")
    return Subgroup(G, gens)


def complex_from_json(obj: Any, field: str = "complex") -> CochainComplex:
    obj = _obj(obj, field)
    degs = _get(obj, "degrees", field)
    if not isinstance(degs, list) or len(degs) != 2:
        raise InvalidInput(f"{field}.degrees: expected [kmin, kmax]")
    kmin, kmax = parse_int(degs[0], f"{field}.degrees[0]"), parse_int(degs[1], f"{field}.degrees[1]")
    if kmax < kmin:
        raise InvalidInput(f"{field}.degrees: kmax < kmin")
    groups_raw = _get(obj, "groups", field)
    if not isinstance(groups_raw, list) or len(groups_raw) != kmax - kmin + 1:
        raise InvalidInput(f"{field}.groups: expected {kmax - kmin + 1} groups")
    groups = [group_from_json(g, f"{field}.groups[{i}]") for i, g in enumerate(groups_raw)]
    diffs_raw = _get(obj, "differentials", field)
    if not isinstance(diffs_raw, list) or len(diffs_raw) != kmax - kmin:
        raise InvalidInput(f"{field}.differentials: expected {kmax - kmin} matrices")
    diffs = []
    for i, d in enumerate(diffs_raw):
        M = matrix_from_json(d, f"{field}.differentials[{i}]")
        if M.rows == 0 and M.cols == 0:
            M = IntMatrix(groups[i + 1].generators, groups[i].generators)
        try:
            diffs.append(Morphism(groups[i], groups[i + 1], M))
        except InvalidInput as exc:
            raise InvalidInput(f"{field}.differentials[{i}]: {exc}") from None
    try:
        return CochainComplex(kmin, groups, diffs)
    except InvalidInput as exc:
        raise InvalidInput(f"{field}.differentials: {exc}") from None


def filtered_from_json(obj: Any, field: str = "filtered_complex") -> FilteredComplex:
    """A complex plus ``"filtration"``: per degree, a list of matrices whose columns generate ``F^p``."""
    C = complex_from_json(obj, field)
    filt_raw = _get(obj, "filtration", field)
    if not isinstance(filt_raw, list) or len(filt_raw) != len(C.groups):
        raise InvalidInput(f"{field}.filtration: expected one list per degree")
    filtration = {}
    for i, steps in enumerate(filt_raw):
        k = C.kmin + i
        if not isinstance(steps, list):
            raise InvalidInput(f"{field}.filtration[{i}]: expected a list of generator matrices")
        n = C.group(k).generators
        gens = []
        for p, m in enumerate(steps):
            M = matrix_from_json(m, f"{field}.filtration[{i}][{p}]")
            if M.cols and M.rows != n:
                raise InvalidInput(f"{field}.filtration[{i}][{p}]: generators must have length {n}")
            gens.append([list(c) for c in M.columns()])
        filtration[k] = gens
    try:
        return FilteredComplex(C, filtration)
    except InvalidInput as exc:
        raise InvalidInput(f"{field}.{exc}") from None


def ring_from_json(obj: Any, field: str = "ring") -> GradedRing:
    obj = _obj(obj, field)
    try:
        return ring_from_dict(obj, field)
    except InvalidInput as exc:
        msg = str(exc)
        raise InvalidInput(msg if msg.startswith(field) else f"{field}.{msg}") from None


_DECODERS = {
    "matrix": matrix_from_json,
    "group": group_from_json,
    "morphism": morphism_from_json,
    "subgroup": subgroup_from_json,
    "complex": complex_from_json,
    "filtered_complex": filtered_from_json,
    "ring": ring_from_json,
}


def load_document(path: str | Path, expected: tuple[str, ...] | None = None) -> tuple[str, Any]:
    """Read a ``wlskit-v1`` document; returns ``(type, raw payload)``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"input: cannot read file ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"input: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise InvalidInput("input: top level must be an object")
    if doc.get("format") != FORMAT:
        raise InvalidInput(f"format: expected {FORMAT!r}, got {doc.get('format')!r}")
    kind = doc.get("type")
    if kind not in _DECODERS and kind not in ("subtype", "census"):
        raise InvalidInput(f"type: unknown document type {kind!r}")
    if expected and kind not in expected:
        raise InvalidInput(f"type: expected one of {list(expected)}, got {kind!r}")
    return kind, doc


def decode(kind: str, doc: dict):
    return _DECODERS[kind](doc, kind)


# ---------------------------------------------------------------- encoding

def matrix_to_json(M: IntMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": M.tolist()}


def group_to_json(P: Presentation) -> dict:
    return {"generators": P.generators, "relations": matrix_to_json(P.relations)}


def morphism_to_json(f: Morphism) -> dict:
    return {"source": group_to_json(f.source), "target": group_to_json(f.target), "matrix": matrix_to_json(f.matrix)}


def complex_to_json(C: CochainComplex) -> dict:
    return {
        "degrees": [C.kmin, C.kmax],
        "groups": [group_to_json(G) for G in C.groups],
        "differentials": [matrix_to_json(d.matrix) for d in C.differentials],
    }


def filtered_to_json(FC: FilteredComplex) -> dict:
    out = complex_to_json(FC.complex)
    filt = []
    for k in FC.complex.degrees:
        n = FC.complex.group(k).generators
        filt.append([matrix_to_json(IntMatrix.from_columns(FC.generators(p, k), n)) for p in range(FC.length + 1)])
    out["filtration"] = filt
    return out


def document(kind: str, payload: dict) -> dict:
    return {"format": FORMAT, "type": kind, **payload}


def encode(obj: Any) -> Any:
    """Plain JSON values: big ints and fractions as strings, infinity as ``"inf"``."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= _INT64 else obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf"
        raise TypeError("floating point values are not reported")
    if isinstance(obj, Fraction):
        return encode(obj.numerator) if obj.denominator == 1 else str(obj)
    if isinstance(obj, IntMatrix):
        return encode(matrix_to_json(obj))
    if isinstance(obj, Presentation):
        return {"rank": obj.rank, "torsion": encode(list(obj.torsion)), "text": str(obj)}
    if isinstance(obj, dict):
        return {(k if isinstance(k, str) else ",".join(map(str, k)) if isinstance(k, tuple) else str(k)): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return encode(obj.as_dict())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

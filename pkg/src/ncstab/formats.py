"""Reading and writing the exchange formats.

Algebras and flags travel as JSON.  An algebra document looks like

    {"field": {"type": "Fp", "p": 10007},
     "relations": [[[0, 1, 0], ...], ...]}

with three 3x3 coefficient matrices, one per relation; entry [i][a][b] is
the coefficient of x_a x_b in the i-th relation.  Over the rationals the
field block is {"type": "Q"} and entries may be integers or "p/q" strings.

A flag document either names the two nested subspaces directly,

    {"W": [[1, 0, 0], [0, 1, 0]], "l": 2, "U": [[1, 0, 0]], "m": 1}

with null standing for an absent level, or lists the levels one by one as

    {"levels": [{"basis": rows, "level": 1}, {"basis": rows, "level": 2}]}

covering every weight from 1 to the depth exactly once, in any order
(weight 0 is always the whole degree-one piece and is left implicit).

Dumps are canonical: keys sorted, no whitespace, scalars normalised.  Two
equal objects always produce byte-identical documents, which is what the
on-disk cache keys rely on.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .algebra import GENERATORS, QuadraticAlgebra
from .fields import GF, QQ, Field
from .linalg import Subspace
from .testconfig import Filtration, Flag, flag


class FormatError(ValueError):
    """A document does not match the expected shape."""


# --------------------------------------------------------------------------
# scalars
# --------------------------------------------------------------------------

def parse_scalar(value, field: Field):
    if isinstance(value, bool):
        raise FormatError("booleans are not scalars")
    if isinstance(value, int):
        return field.scalar(value)
    if isinstance(value, str):
        try:
            frac = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad scalar {value!r}") from exc
        if field.p is not None:
            if frac.denominator % field.p == 0:
                raise FormatError(f"{value!r} has no residue mod {field.p}")
            num = frac.numerator % field.p
            den = pow(frac.denominator % field.p, -1, field.p)
            return field.scalar(num * den)
        return field.scalar(frac)
    raise FormatError(f"bad scalar {value!r}")


def dump_scalar(value, field: Field):
    if field.p is not None:
        return int(value)
    frac = Fraction(value)
    if frac.denominator == 1:
        return int(frac)
    return f"{frac.numerator}/{frac.denominator}"


# --------------------------------------------------------------------------
# fields
# --------------------------------------------------------------------------

def parse_field(doc) -> Field:
    if not isinstance(doc, dict) or "type" not in doc:
        raise FormatError("field block must be an object with a type")
    kind = doc["type"]
    if kind == "Q":
        return QQ
    if kind == "Fp":
        p = doc.get("p")
        if not isinstance(p, int):
            raise FormatError("prime field needs an integer p")
        return GF(p)
    raise FormatError(f"unknown field type {kind!r}")


def dump_field(field: Field):
    if field.p is None:
        return {"type": "Q"}
    return {"type": "Fp", "p": field.p}


# --------------------------------------------------------------------------
# algebras
# --------------------------------------------------------------------------

def parse_algebra(doc, limit_dim: int | None = None) -> QuadraticAlgebra:
    if not isinstance(doc, dict):
        raise FormatError("algebra document must be an object")
    field = parse_field(doc.get("field"))
    rels = doc.get("relations")
    if (not isinstance(rels, list) or len(rels) != GENERATORS
            or any(not isinstance(m, list) or len(m) != GENERATORS
                   for m in rels)):
        raise FormatError("relations must be three 3x3 matrices")
    coeffs = []
    for matrix in rels:
        rows = []
        for row in matrix:
            if not isinstance(row, list) or len(row) != GENERATORS:
                raise FormatError("relations must be three 3x3 matrices")
            rows.append([parse_scalar(v, field) for v in row])
        coeffs.append(rows)
    return QuadraticAlgebra(field, coeffs, limit_dim=limit_dim)


def dump_algebra(algebra: QuadraticAlgebra):
    field = algebra.field
    coeffs = algebra.coefficients
    return {
        "field": dump_field(field),
        "relations": [[[dump_scalar(coeffs[i][a][b], field)
                        for b in range(GENERATORS)]
                       for a in range(GENERATORS)]
                      for i in range(GENERATORS)],
    }


# --------------------------------------------------------------------------
# flags and filtrations
# --------------------------------------------------------------------------

def _parse_rows(rows, field: Field, label: str):
    if rows is None:
        return None
    if not isinstance(rows, list) or not rows:
        raise FormatError(f"{label} must be a non-empty list of rows")
    for row in rows:
        if not isinstance(row, list) or len(row) != GENERATORS:
            raise FormatError(f"{label} rows must have {GENERATORS} entries")
    return field.array([[parse_scalar(v, field) for v in row]
                        for row in rows])


def parse_flag(doc, field: Field) -> Filtration:
    if not isinstance(doc, dict):
        raise FormatError("flag document must be an object")
    if "levels" in doc:
        level_docs = doc["levels"]
        if not isinstance(level_docs, list) or not level_docs:
            raise FormatError("levels must be a non-empty list")
        by_weight = {}
        for entry in level_docs:
            if not isinstance(entry, dict) or "basis" not in entry:
                raise FormatError('each level is {"basis": rows, "level": k}')
            weight = entry.get("level")
            if not isinstance(weight, int) or weight < 1:
                raise FormatError("level weights are integers >= 1")
            if weight in by_weight:
                raise FormatError(f"level {weight} given twice")
            parsed = _parse_rows(entry["basis"], field, f"level {weight}")
            if parsed is None:
                raise FormatError(f"level {weight} must be a list of rows")
            by_weight[weight] = Subspace.from_rows(field, GENERATORS, parsed)
        if sorted(by_weight) != list(range(1, len(by_weight) + 1)):
            raise FormatError("levels must cover 1..depth without gaps")
        levels = [Subspace.full(field, GENERATORS)]
        levels += [by_weight[k] for k in sorted(by_weight)]
        try:
            return Filtration(tuple(levels))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    w_rows = _parse_rows(doc.get("W"), field, "W")
    u_rows = _parse_rows(doc.get("U"), field, "U")
    l_weight = doc.get("l", 0)
    m_weight = doc.get("m", 0)
    for w in (l_weight, m_weight):
        if not isinstance(w, int) or w < 0:
            raise FormatError("flag weights are non-negative integers")
    try:
        return flag(w_rows, l_weight, u_rows, m_weight, field).filtration()
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dump_flag(fl: Flag, field: Field):
    def rows(space):
        if space is None:
            return None
        return [[dump_scalar(v, field) for v in row] for row in space.basis]

    return {"W": rows(fl.plane), "l": fl.plane_reps,
            "U": rows(fl.line), "m": fl.line_reps}


# --------------------------------------------------------------------------
# canonical text and digests
# --------------------------------------------------------------------------

def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc

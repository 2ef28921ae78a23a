"""On-disk cache for graded pieces.

Building the degree-n slice of an algebra means echelonizing the
relation ideal inside a 3^n-dimensional tensor space; that dominates
the runtime of every subcommand and the result is reusable, so the CLI
persists it.  Entries live under ``.ncstab-cache/<algebra digest>/`` as
one canonical JSON file per degree holding the echelonized ideal basis
and its pivot columns.

Writes go through a temporary file and ``os.replace`` so concurrent
invocations never see a half-written entry; unreadable or ill-shaped
entries are ignored and recomputed.  Degrees 0..2 are never stored —
their ideals are immediate from the relations.
"""

from __future__ import annotations

import json
import os
import tempfile

from .algebra import GENERATORS, GradedPiece, QuadraticAlgebra
from .formats import canonical_dumps, digest, dump_algebra, dump_scalar, \
    parse_scalar
from .linalg import Subspace

CACHE_DIR = ".ncstab-cache"
FORMAT = 1


def algebra_key(algebra: QuadraticAlgebra) -> str:
    return digest(dump_algebra(algebra))


def _entry_path(root: str, key: str, n: int) -> str:
    return os.path.join(root, key, f"degree-{n}.json")


def _load_entry(path: str, algebra: QuadraticAlgebra, n: int):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        return None
    pivots = doc.get("pivots")
    rows = doc.get("basis")
    ambient = GENERATORS**n
    if (not isinstance(pivots, list) or not isinstance(rows, list)
            or len(pivots) != len(rows)
            or any(not isinstance(p, int) or not 0 <= p < ambient
                   for p in pivots)
            or any(not isinstance(r, list) or len(r) != ambient
                   for r in rows)):
        return None
    field = algebra.field
    try:
        basis = field.array([[parse_scalar(v, field) for v in row]
                             for row in rows])
    except Exception:
        return None
    if rows:
        ideal = Subspace(field, ambient, basis, tuple(pivots),
                         _canonical=True)
    else:
        ideal = Subspace.zero(field, ambient)
    return GradedPiece(algebra, n, ideal)


def warm(algebra: QuadraticAlgebra, max_degree: int,
         root: str = CACHE_DIR) -> int:
    """Install cached graded pieces for degrees up to ``max_degree``.

    Returns how many pieces were loaded.  Anything missing or invalid
    is simply left to be recomputed.
    """
    key = algebra_key(algebra)
    loaded = 0
    for n in range(3, max_degree + 1):
        if n in algebra._graded or GENERATORS**n > algebra.limit_dim:
            continue
        piece = _load_entry(_entry_path(root, key, n), algebra, n)
        if piece is not None:
            algebra._graded[n] = piece
            loaded += 1
    return loaded


def persist(algebra: QuadraticAlgebra, root: str = CACHE_DIR) -> int:
    """Write every computed graded piece of degree >= 3 not yet on disk.

    Returns how many entries were written.  Each write lands atomically
    via a same-directory temporary file and ``os.replace``.
    """
    key = algebra_key(algebra)
    directory = os.path.join(root, key)
    written = 0
    for n, piece in sorted(algebra._graded.items()):
        if n < 3:
            continue
        path = _entry_path(root, key, n)
        if os.path.exists(path):
            continue
        os.makedirs(directory, exist_ok=True)
        field = algebra.field
        doc = {
            "format": FORMAT,
            "degree": n,
            "pivots": list(piece.ideal.pivots),
            "basis": [[dump_scalar(v, field) for v in row]
                      for row in piece.ideal.basis],
        }
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_dumps(doc))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        written += 1
    return written

"""Built-in algebra families and the packaged fixture set.

The builders construct the classical families directly from parameters.
The fixtures are JSON documents shipped with the package; each carries an
algebra together with the facts the test-suite pins down for it (verdict,
Hilbert series prefix, and friends), so they double as regression anchors
and as ready-made inputs for the command line.
"""

from __future__ import annotations

import json
from importlib import resources

from .algebra import GENERATORS, QuadraticAlgebra
from .fields import Field
from .formats import parse_algebra
from .linalg import Subspace


def sklyanin(a, b, c, field: Field) -> QuadraticAlgebra:
    """The three cyclic relations a x_{i+1} x_{i+2} + b x_{i+2} x_{i+1}
    + c x_i^2."""
    rel = []
    for i in range(GENERATORS):
        coeff = [[field.zero] * GENERATORS for _ in range(GENERATORS)]
        coeff[(i + 1) % 3][(i + 2) % 3] = field.scalar(a)
        coeff[(i + 2) % 3][(i + 1) % 3] = field.scalar(b)
        coeff[i][i] = field.scalar(c)
        rel.append(coeff)
    return QuadraticAlgebra(field, rel)


def quantum_plane(q1, q2, q3, field: Field) -> QuadraticAlgebra:
    """Relations x y = q1 y x, y z = q2 z y, z x = q3 x z."""
    rel = []
    for (i, j, r) in ((0, 1, q1), (1, 2, q2), (2, 0, q3)):
        coeff = [[field.zero] * GENERATORS for _ in range(GENERATORS)]
        coeff[i][j] = field.one
        coeff[j][i] = field.scalar(-1 * r)
        rel.append(coeff)
    return QuadraticAlgebra(field, rel)


def commutators(field: Field) -> QuadraticAlgebra:
    """The polynomial ring presented by the three commutation relations."""
    rel = []
    for (i, j) in ((0, 1), (1, 2), (2, 0)):
        coeff = [[field.zero] * GENERATORS for _ in range(GENERATORS)]
        coeff[i][j] = field.one
        coeff[j][i] = field.scalar(-1)
        rel.append(coeff)
    return QuadraticAlgebra(field, rel)


def swap_invariant_algebra(field: Field, rng, symmetric_dim: int
                           ) -> QuadraticAlgebra:
    """A random relation space split across the swap eigenspaces.

    Drawing `symmetric_dim` relations from the symmetric square and the
    rest from the alternating square keeps the left and right pencil
    determinants proportional, so the result is always semistandard.
    """
    if not 0 <= symmetric_dim <= GENERATORS:
        raise ValueError("symmetric_dim must be between 0 and 3")
    sym_basis = []
    for a in range(GENERATORS):
        for b in range(a, GENERATORS):
            m = [[field.zero] * GENERATORS for _ in range(GENERATORS)]
            m[a][b] = field.one
            m[b][a] = m[b][a] + field.one
            sym_basis.append(m)
    alt_basis = []
    for a in range(GENERATORS):
        for b in range(a + 1, GENERATORS):
            m = [[field.zero] * GENERATORS for _ in range(GENERATORS)]
            m[a][b] = field.one
            m[b][a] = field.scalar(-1)
            alt_basis.append(m)

    def draw(basis, count):
        out = []
        for _ in range(count):
            while True:
                coeffs = [rng.randrange(field.p) if field.p is not None
                          else rng.randint(-9, 9) for _ in basis]
                if any(coeffs):
                    break
            m = [[field.zero] * GENERATORS for _ in range(GENERATORS)]
            for c, base in zip(coeffs, basis):
                for a in range(GENERATORS):
                    for b in range(GENERATORS):
                        m[a][b] = field.scalar(
                            m[a][b] + field.scalar(c) * base[a][b])
            out.append(m)
        return out

    rel = draw(sym_basis, symmetric_dim) \
        + draw(alt_basis, GENERATORS - symmetric_dim)
    return QuadraticAlgebra(field, rel)


# --------------------------------------------------------------------------
# packaged fixtures
# --------------------------------------------------------------------------

def fixture_names() -> list[str]:
    root = resources.files(__package__) / "fixtures"
    return sorted(path.name[:-5] for path in root.iterdir()
                  if path.name.endswith(".json"))


def load_fixture(name: str):
    """The fixture's algebra and its recorded facts, as (algebra, doc)."""
    root = resources.files(__package__) / "fixtures"
    path = root / f"{name}.json"
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise KeyError(f"no fixture named {name!r}; "
                       f"known: {', '.join(fixture_names())}") from None
    return parse_algebra(doc["algebra"]), doc


def fixture_point(doc, key: str):
    """A projective point stored in a fixture document."""
    pt = doc.get(key)
    if pt is None:
        return None
    return tuple(int(v) for v in pt)


# --------------------------------------------------------------------------
# seeded fixture search
# --------------------------------------------------------------------------

class FixtureNotFound(LookupError):
    """No candidate in the search space satisfied the predicate."""


def random_relations(field: Field, rng) -> QuadraticAlgebra:
    """A uniformly random relation triple; degenerate draws are rejected
    so the relation space always has dimension 3."""
    while True:
        rel = [[[field.scalar(rng.randrange(field.p)) if field.p is not None
                 else field.scalar(rng.randint(-9, 9))
                 for _ in range(GENERATORS)]
                for _ in range(GENERATORS)]
               for _ in range(GENERATORS)]
        flat = field.array([[m[a][b] for a in range(GENERATORS)
                             for b in range(GENERATORS)] for m in rel])
        if Subspace.from_rows(field, GENERATORS ** 2, flat).dim == GENERATORS:
            return QuadraticAlgebra(field, rel)


def find_fixture(predicate, search_space, seed: int = 0, budget: int = 500):
    """First algebra in the search space whose geometric report satisfies
    the predicate, together with that report, as (algebra, report).

    ``search_space`` is either an iterable of candidate algebras or a
    Field, in which case ``budget`` seeded random relation triples over
    that field are drawn.  ``predicate`` receives the classification
    report of each candidate; candidates whose geometry cannot be set up
    at all (degenerate relation spaces, zero divisors) are skipped.

    This is a maintenance tool for growing the packaged fixture set; the
    shipped fixtures are committed files, not search results.
    """
    from random import Random

    from .pointscheme import (DegeneratePointError, SemistandardViolationError,
                              classify)

    if isinstance(search_space, Field):
        rng = Random(seed)
        field = search_space
        candidates = (random_relations(field, rng) for _ in range(budget))
    else:
        candidates = iter(search_space)
    tried = 0
    for algebra in candidates:
        tried += 1
        if tried > budget:
            break
        try:
            report = classify(algebra)
        except (ValueError, DegeneratePointError, SemistandardViolationError):
            continue
        if predicate(report):
            return algebra, report
    raise FixtureNotFound(f"no match among {tried} candidates")

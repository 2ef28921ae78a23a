"""Test configurations generated in degree one, and their weight data.

A filtration of the degree-one piece

    V = level(0)  >=  level(1)  >=  ...  >=  level(K)  >  0 = level(K+1)

with level(1) != V generates, in each degree n, the decreasing chain of
subspaces

    chain(n)[k] = sum over k_1 + ... + k_n = k of
                  level(k_1) * level(k_2) * ... * level(k_n)

Because the levels are nested, the exact-sum chain member equals the
sum-at-least-k member, so the chain is computed by one pass of dynamic
programming over the degree:

    chain(n)[k] = sum over runs of equal levels of
                  run.space * chain(n-1)[k - run.top]

The weight of degree n is w(n) = sum_{k>=1} dim chain(n)[k]; the Futaki
function is F(n) = w(n) / (n * dim A_n).  A flag configuration

    V  >  plane (plane_reps times)  >  line (line_reps times)  >  0

has F(1) = (2 * plane_reps + line_reps) / 3.

Two weight sequences matter: the chain inside the quotient algebra itself
("algebra" side), and its image in the quotient by a fixed graded ideal
("curve" side, used with the canonical central element's ideal).  Pass
``modulo`` to compute the latter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import QuadraticAlgebra
from .fields import Field
from .linalg import Subspace


class TrivialFiltrationError(ValueError):
    """The filtration has no proper level and generates nothing."""


@dataclass(frozen=True)
class Filtration:
    """Nested levels of the degree-one piece; ``levels[0]`` is all of V."""

    levels: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a filtration needs at least level 0")
        V = self.levels[0]
        if V.dim != 3:
            raise ValueError("level 0 must be the full degree-one piece")
        for k in range(1, len(self.levels)):
            if not self.levels[k - 1].contains(self.levels[k]):
                raise ValueError(f"level {k} is not contained in level {k - 1}")
            if self.levels[k].dim == 0:
                raise ValueError("drop zero levels; the filtration ends at its "
                                 "last nonzero level")
        if len(self.levels) > 1 and self.levels[1].dim == 3:
            raise TrivialFiltrationError("level 1 must be a proper subspace")

    @property
    def field(self) -> Field:
        return self.levels[0].field

    @property
    def depth(self) -> int:
        """Largest k with level(k) nonzero."""
        return len(self.levels) - 1

    def level(self, k: int) -> Subspace:
        if k < 0:
            raise ValueError("negative level")
        if k < len(self.levels):
            return self.levels[k]
        return Subspace.zero(self.field, 3)

    def runs(self) -> list[tuple[Subspace, int]]:
        """Maximal runs of equal consecutive levels, as (space, top level)."""
        out: list[tuple[Subspace, int]] = []
        for k, space in enumerate(self.levels):
            if out and out[-1][0] == space:
                out[-1] = (space, k)
            else:
                out.append((space, k))
        return out

    def is_trivial(self) -> bool:
        return self.depth == 0


@dataclass(frozen=True)
class Flag:
    """Two-step flag: the full degree-one piece, then a plane repeated
    ``plane_reps`` times, then a line repeated ``line_reps`` times."""

    plane: Subspace | None
    plane_reps: int
    line: Subspace | None
    line_reps: int

    def filtration(self) -> Filtration:
        if self.plane_reps < 0 or self.line_reps < 0:
            raise ValueError("multiplicities must be non-negative")
        if self.plane_reps + self.line_reps == 0:
            raise TrivialFiltrationError("flag with no repeated level is trivial")
        if self.plane_reps > 0:
            if self.plane is None or self.plane.dim != 2:
                raise ValueError("the plane level must be a 2-dimensional "
                                 "subspace when repeated")
        if self.line_reps > 0:
            if self.line is None or self.line.dim != 1:
                raise ValueError("the line level must be a 1-dimensional "
                                 "subspace when repeated")
        if (self.plane_reps > 0 and self.line_reps > 0
                and not self.plane.contains(self.line)):
            raise ValueError("the line must be contained in the plane")
        field = (self.plane or self.line).field
        levels = [Subspace.full(field, 3)]
        levels += [self.plane] * self.plane_reps
        levels += [self.line] * self.line_reps
        return Filtration(tuple(levels))

    def futaki_degree_one(self) -> Fraction:
        """F(1) = (2 * plane_reps + line_reps) / 3."""
        return Fraction(2 * self.plane_reps + self.line_reps, 3)


def flag(plane, plane_reps: int, line, line_reps: int,
         field: Field | None = None) -> Flag:
    """Convenience builder accepting raw rows for the plane and the line."""
    def as_subspace(obj):
        if obj is None or isinstance(obj, Subspace):
            return obj
        if field is None:
            raise ValueError("field required when passing raw rows")
        return Subspace.from_rows(field, 3, field.array(obj))
    return Flag(as_subspace(plane), plane_reps, as_subspace(line), line_reps)


def chain(algebra: QuadraticAlgebra, filt: Filtration, n: int) -> list[Subspace]:
    """The decreasing chain [chain(n)[0], chain(n)[1], ...] in degree-n
    quotient coordinates, truncated after the last nonzero member.

    chain(n)[0] is the full degree-n piece.
    """
    if n < 1:
        raise ValueError("degree must be at least 1")
    if filt.is_trivial():
        raise TrivialFiltrationError("trivial filtration generates nothing")
    runs = filt.runs()
    depth = filt.depth
    current: list[Subspace] = [filt.level(k) for k in range(depth + 1)]
    current = _trim(current)
    for deg in range(2, n + 1):
        target_dim = algebra.graded(deg).dim
        full = Subspace.full(algebra.field, target_dim)
        prev = current
        prev_top = len(prev) - 1
        nxt: list[Subspace] = [full]
        for k in range(1, deg * depth + 1):
            acc = Subspace.zero(algebra.field, target_dim)
            for space, top in runs:
                j = k - top
                if j > prev_top:
                    continue  # that chain member is already zero
                right = prev[max(j, 0)]
                if right.dim == 0:
                    continue
                acc = acc.add(algebra.multiply(space, 1, right, deg - 1))
            if acc.dim == 0:
                break
            nxt.append(acc)
        current = nxt
    return current


def _trim(members: list[Subspace]) -> list[Subspace]:
    last = 0
    for k, s in enumerate(members):
        if s.dim > 0:
            last = k
    return members[:last + 1]


@dataclass(frozen=True)
class WeightRow:
    degree: int
    dims: tuple[int, ...]          # dims of chain(n)[0], chain(n)[1], ...
    weight: int                    # sum of dims for k >= 1
    futaki: Fraction               # weight / (n * dim A_n)


@dataclass(frozen=True)
class WeightTable:
    side: str                      # "algebra" or "curve"
    rows: tuple[WeightRow, ...]

    def futaki(self, n: int) -> Fraction:
        for row in self.rows:
            if row.degree == n:
                return row.futaki
        raise KeyError(n)

    def weight(self, n: int) -> int:
        for row in self.rows:
            if row.degree == n:
                return row.weight
        raise KeyError(n)


def weight_table(algebra: QuadraticAlgebra, filt: Filtration, degrees,
                 modulo=None) -> WeightTable:
    """Weight/Futaki rows for the given degrees.

    ``modulo``: optional callable degree -> Subspace (in quotient
    coordinates); when given, every chain member is measured by the
    dimension of its image modulo that subspace ("curve" side).
    """
    rows = []
    for n in sorted(set(degrees)):
        members = chain(algebra, filt, n)
        if modulo is None:
            dims = tuple(s.dim for s in members)
            denom_dim = algebra.graded(n).dim
        else:
            quot = modulo(n)
            denom_dim = algebra.graded(n).dim - quot.dim
            dims = tuple(s.add(quot).dim - quot.dim for s in members)
        dims = _trim_dims(dims)
        w = sum(dims[1:])
        rows.append(WeightRow(n, dims, w, Fraction(w, n * denom_dim)))
    return WeightTable("algebra" if modulo is None else "curve", tuple(rows))


def _trim_dims(dims: tuple[int, ...]) -> tuple[int, ...]:
    last = 0
    for k, d in enumerate(dims):
        if d:
            last = k
    return dims[:last + 1]


def central_fiber_dims(algebra: QuadraticAlgebra, filt: Filtration, n: int,
                       modulo=None) -> list[int]:
    """Dimensions of the graded pieces chain[k]/chain[k+1] of the central
    fiber in degree n (k = 0, 1, ...).

    The identity  w(n) = sum_k k * dim(chain[k]/chain[k+1])  holds by
    telescoping and is asserted here.
    """
    members = chain(algebra, filt, n)
    if modulo is None:
        dims = [s.dim for s in members]
    else:
        quot = modulo(n)
        dims = [s.add(quot).dim - quot.dim for s in members]
    dims.append(0)
    graded_dims = [dims[k] - dims[k + 1] for k in range(len(dims) - 1)]
    if any(d < 0 for d in graded_dims):
        raise AssertionError("chain is not decreasing")
    w = sum(dims[1:])
    if w != sum(k * d for k, d in enumerate(graded_dims)):
        raise AssertionError("weight identity failed")
    return graded_dims


@dataclass(frozen=True)
class FlagVerdict:
    q: int
    futaki_q: Fraction
    futaki_one: Fraction
    verdict: str                   # "passes" | "marginal" | "destabilizing"

    @property
    def passes(self) -> bool:
        return self.verdict == "passes"


def flag_verdict(algebra: QuadraticAlgebra, filt: Filtration, q: int = 3,
                 modulo=None) -> FlagVerdict:
    """Exact comparison of F(q) against F(1) for one configuration."""
    if q < 2:
        raise ValueError("q must be at least 2")
    table = weight_table(algebra, filt, [1, q], modulo=modulo)
    fq, f1 = table.futaki(q), table.futaki(1)
    if fq > f1:
        verdict = "passes"
    elif fq == f1:
        verdict = "marginal"
    else:
        verdict = "destabilizing"
    return FlagVerdict(q, fq, f1, verdict)


def random_flag(field: Field, rng, plane_reps: int | None = None,
                line_reps: int | None = None) -> Flag:
    """Seeded random flag: a random plane and a random line inside it.

    ``rng`` is a ``random.Random``; multiplicities default to a random
    choice with plane_reps + line_reps >= 1.
    """
    roll_l, roll_m = plane_reps is None, line_reps is None
    if not roll_l and not roll_m and plane_reps + line_reps == 0:
        raise TrivialFiltrationError("flag with no repeated level is trivial")
    l, m = plane_reps, line_reps
    while roll_l or roll_m:
        cand_l = rng.randrange(0, 4) if roll_l else l
        cand_m = rng.randrange(0, 4) if roll_m else m
        if cand_l + cand_m >= 1:
            l, m = cand_l, cand_m
            break

    def rand_scalar():
        if field.p is not None:
            return rng.randrange(field.p)
        return rng.randrange(-9, 10)

    while True:
        rows = [[rand_scalar() for _ in range(3)] for _ in range(2)]
        W = Subspace.from_rows(field, 3, field.array(rows))
        if W.dim == 2:
            break
    while True:
        coeffs = [rand_scalar(), rand_scalar()]
        vec = [sum(field.scalar(coeffs[i]) * W.basis[i, j] for i in range(2))
               for j in range(3)]
        U = Subspace.from_rows(field, 3, field.array([vec]))
        if U.dim == 1:
            break
    return Flag(W, l, U, m)

"""The degree-3 normal element: construction and certificates.

Two independent constructions of the space of degree-3 tensors vanishing
on triples (P, s(P), s^2(P)) of the point map:

* sampling: evaluation rows at explicit point triples over a prime field,
  kernel of the resulting matrix;
* symbolic: the degree-7 polynomial identity T(x, adj-column of M(x),
  adj-column of M(adj-column of M(x))) = f * h, set up as an exact linear
  system in the 27 tensor unknowns and the 15 cofactor unknowns.

Both cut the same 18-dimensional space (the degree-3 ideal piece plus one
extra direction) when the algebra is regular; the extra direction, reduced
to quotient coordinates and lifted canonically, is the normal element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import polyutils as pu
from .algebra import QuadraticAlgebra
from .fields import Field
from .linalg import Subspace, nullspace
from .pointscheme import (DegeneratePointError, check_semistandard,
                          linear_components, normalize_point,
                          relation_tensors, sigma_point, tri_add,
                          tri_eval, tri_linear_raw, tri_mul, tri_scale)


class RankDeficientSampling(Exception):
    """Not enough independent point triples to cut the kernel down."""


class NotOneDimensional(Exception):
    """The vanishing tensors do not reduce to a single quotient direction."""


def monomials_of_degree(d):
    return [(i, j, d - i - j) for i in range(d, -1, -1)
            for j in range(d - i, -1, -1)]


# --------------------------------------------------------------------------
# sampling route
# --------------------------------------------------------------------------

def divisor_points(algebra: QuadraticAlgebra, count: int):
    """Up to ``count`` distinct rational points of the divisor, by sweeping
    the affine charts and solving the restricted cubic."""
    field = algebra.field
    if field.p is None:
        raise ValueError("point sweeps need a prime field")
    p = field.p
    cubic = check_semistandard(algebra)
    if not cubic:
        raise ValueError("the pencil determinant vanishes identically")
    found = []
    seen = set()

    def push(pt):
        q = normalize_point(tuple(field.scalar(v) for v in pt), field)
        key = tuple(int(v) for v in q)
        if key not in seen:
            seen.add(key)
            found.append(q)

    for y in range(p):
        if len(found) >= count:
            return found[:count]
        poly = [0, 0, 0, 0]   # the cubic restricted to (1 : y : z), in z
        for (i, j, k), c in cubic.items():
            poly[k] = (poly[k] + int(c) * pow(y, j, p)) % p
        if pu.trim(poly) == []:
            # the whole line lies on the divisor
            for z in range(p):
                push((1, y, z))
                if len(found) >= count:
                    break
            continue
        for z in pu.roots(poly, p):
            push((1, y, z))
    for z in range(p):
        if len(found) >= count:
            return found[:count]
        val = tri_eval(cubic, (field.zero, field.one, field.scalar(z)), field)
        if val == field.zero:
            push((0, 1, z))
    if tri_eval(cubic, (field.zero, field.zero, field.one), field) == field.zero:
        push((0, 0, 1))
    return found[:count]


def evaluation_rows(algebra: QuadraticAlgebra, points):
    """One 27-column row per usable point: entries P_a s(P)_b s^2(P)_c."""
    field = algebra.field
    left, _ = relation_tensors(algebra)
    rows = []
    for pt in points:
        try:
            s1 = sigma_point(left, pt, field)
            s2 = sigma_point(left, s1, field)
        except DegeneratePointError:
            continue
        row = [0] * 27
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    # plain ints: the triple product overflows int64 at
                    # the largest supported primes
                    v = int(pt[a]) * int(s1[b]) % field.p * int(s2[c])
                    row[9 * a + 3 * b + c] = v % field.p
        rows.append(row)
    return rows


def vanishing_tensors_sampled(algebra: QuadraticAlgebra, samples: int = 40,
                              rounds: int = 3) -> Subspace:
    """Kernel of the evaluation matrix, grown until it stabilizes at
    dimension 18 or the retry budget is exhausted."""
    field = algebra.field
    want = samples
    for attempt in range(rounds):
        pts = divisor_points(algebra, want)
        rows = evaluation_rows(algebra, pts)
        if rows:
            mat = field.array(rows)
            kernel = nullspace(mat, field)
            if kernel.dim <= 18:
                return kernel
        if field.p is not None and len(pts) < want:
            break  # the sweep is already exhaustive
        want *= 2
    raise RankDeficientSampling(
        f"kernel stuck above dimension 18 with {len(rows)} usable rows")


# --------------------------------------------------------------------------
# symbolic route
# --------------------------------------------------------------------------

def _adjugate_polynomial(rows, field):
    """Adjugate of a 3x3 matrix of polynomial entries (trivariate dicts)."""
    out = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            a = [r for r in range(3) if r != j]
            b = [c for c in range(3) if c != i]
            v = tri_add(
                tri_mul(rows[a[0]][b[0]], rows[a[1]][b[1]], field),
                tri_scale(tri_mul(rows[a[0]][b[1]], rows[a[1]][b[0]], field),
                          field.scalar(-1), field),
                field)
            if (i + j) % 2:
                v = tri_scale(v, field.scalar(-1), field)
            out[i][j] = v
    return out


def _nonzero_column(adj):
    for j in range(3):
        col = [adj[0][j], adj[1][j], adj[2][j]]
        if any(col):
            return col
    return None


def _tri_reduce(f, g, field):
    """Remainder of f under division by the single form g (graded lex)."""

    def order(m):
        return (sum(m), m)

    lead = max(g, key=order)
    lead_inv = field.inv(g[lead])
    f = dict(f)
    remainder = {}
    while f:
        mono = max(f, key=order)
        quot = tuple(mono[v] - lead[v] for v in range(3))
        if any(e < 0 for e in quot):
            remainder[mono] = f.pop(mono)
            continue
        if field.p is not None:
            c = (-int(f[mono]) * int(lead_inv)) % field.p
        else:
            c = -f[mono] * lead_inv
        f = tri_add(f, tri_mul({quot: field.scalar(c)}, g, field), field)
    return remainder


def _divisor_components(cubic, field):
    """The irreducible factors of the cubic, each reduced (no repeats)."""
    if field.p is not None:
        lines, residual = linear_components(cubic, field)
        for line, mult in lines:
            if mult > 1:
                raise ValueError("the divisor has a repeated component")
        parts = [tri_linear_raw(line) for line, _ in lines]
        if residual and sum(next(iter(residual))) > 0:
            parts.append(residual)
        return parts

    import sympy
    from fractions import Fraction
    xs = sympy.symbols("s0 s1 s2")
    expr = sympy.Integer(0)
    for (i, j, k), v in cubic.items():
        expr += sympy.Rational(v) * xs[0] ** i * xs[1] ** j * xs[2] ** k
    parts = []
    for fac, mult in sympy.factor_list(expr, *xs)[1]:
        if mult > 1:
            raise ValueError("the divisor has a repeated component")
        poly = sympy.Poly(fac, *xs)
        part = {}
        for monom, coeff in poly.terms():
            part[tuple(int(e) for e in monom)] = field.scalar(
                Fraction(int(coeff.p), int(coeff.q)))
        parts.append(part)
    return parts


def vanishing_tensors_symbolic(algebra: QuadraticAlgebra) -> Subspace:
    """Tensors T with T(x, s(x), s^2(x)) vanishing on the divisor, as an
    exact linear system over the base field.

    The point map is represented by adjugate columns.  A single column can
    die along a component the twist preserves, so each irreducible factor
    of the pencil determinant gets its own surviving column (first for the
    map, then for its square), and the vanishing condition is imposed
    factor by factor.  The common solutions across all factors are exactly
    the tensors vanishing on the full graph.
    """
    field = algebra.field
    cubic = check_semistandard(algebra)
    if not cubic:
        raise ValueError("the pencil determinant vanishes identically")
    left, _ = relation_tensors(algebra)
    components = _divisor_components(cubic, field)

    m_rows = [[tri_linear_raw([field.scalar(left[i, j, a]) for a in range(3)])
               for j in range(3)] for i in range(3)]
    adj = _adjugate_polynomial(m_rows, field)

    def surviving_column(mat_adj, part):
        for j in range(3):
            col = [mat_adj[0][j], mat_adj[1][j], mat_adj[2][j]]
            if any(e and _tri_reduce(e, part, field) for e in col):
                return col
        return None

    unit = [{(1, 0, 0): field.one}, {(0, 1, 0): field.one},
            {(0, 0, 1): field.one}]
    deg7 = monomials_of_degree(7)
    index = {m: i for i, m in enumerate(deg7)}
    t_columns = 27
    blocks = []
    h_sizes = []
    for part in components:
        sigma1 = surviving_column(adj, part)
        if sigma1 is None:
            raise ValueError("the point map dies along a divisor component")
        m2_rows = [[{} for _ in range(3)] for _ in range(3)]
        for i in range(3):
            for j in range(3):
                acc = {}
                for a in range(3):
                    acc = tri_add(acc, tri_scale(sigma1[a],
                                                 field.scalar(left[i, j, a]),
                                                 field), field)
                m2_rows[i][j] = acc
        sigma2 = surviving_column(_adjugate_polynomial(m2_rows, field), part)
        if sigma2 is None:
            raise ValueError(
                "the squared point map dies along a divisor component")
        products = []
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    products.append(tri_mul(tri_mul(unit[a], sigma1[b],
                                                    field),
                                            sigma2[c], field))
        degree = sum(next(iter(part)))
        h_monos = monomials_of_degree(7 - degree)
        shifts = [tri_mul(part, {m: field.scalar(-1)}, field)
                  for m in h_monos]
        blocks.append((products, shifts))
        h_sizes.append(len(h_monos))

    width = t_columns + sum(h_sizes)
    mat = field.zeros((len(deg7) * len(blocks), width))
    h_offset = t_columns
    for b, (products, shifts) in enumerate(blocks):
        row0 = b * len(deg7)
        for col, poly in enumerate(products):
            for mono, v in poly.items():
                mat[row0 + index[mono], col] = v
        for col, poly in enumerate(shifts):
            for mono, v in poly.items():
                mat[row0 + index[mono], h_offset + col] = v
        h_offset += len(shifts)
    kernel = nullspace(field.reduce(mat), field)
    tensor_part = [vec[:27] for vec in kernel.basis]
    return Subspace.from_rows(field, 27, field.array(tensor_part)
                              if tensor_part else field.zeros((0, 27)))


# --------------------------------------------------------------------------
# the normal element
# --------------------------------------------------------------------------

@dataclass
class NormalElement:
    algebra: QuadraticAlgebra
    tensor: np.ndarray          # canonical representative in V^{x3}
    quotient_vector: np.ndarray  # its image in the degree-3 quotient piece
    _images: dict = dc_field(default_factory=dict, repr=False)

    @property
    def span(self) -> Subspace:
        return Subspace.from_rows(self.algebra.field,
                                  self.algebra.graded(3).dim,
                                  self.algebra.field.array(
                                      [self.quotient_vector]))

    def commutes_with_generators(self) -> bool:
        one = self.algebra.graded(1).full_subspace()
        left = self.algebra.multiply(self.span, 3, one, 1)
        right = self.algebra.multiply(one, 1, self.span, 3)
        return left == right

    def image(self, n: int) -> Subspace:
        """The left ideal slice (element times degree n-3 piece) in degree n."""
        if n < 3:
            return Subspace.zero(self.algebra.field,
                                 self.algebra.graded(n).dim)
        if n not in self._images:
            rest = self.algebra.graded(n - 3).full_subspace()
            self._images[n] = self.algebra.multiply(self.span, 3, rest, n - 3)
        return self._images[n]

    def modulo(self, n: int) -> Subspace:
        """Callable form used for curve-side weight tables."""
        return self.image(n)

    def image_dimension_certificate(self, degrees) -> bool:
        """dim (element * A_{n-3}) = (n-1)(n-2)/2 in every listed degree."""
        return all(self.image(n).dim == (n - 1) * (n - 2) // 2
                   for n in degrees)

    def quotient_dimension_certificate(self, degrees) -> bool:
        """The quotient by the slice has dimension 3n in every listed degree."""
        return all(self.algebra.graded(n).dim - self.image(n).dim == 3 * n
                   for n in degrees)


def extract_normal_element(algebra: QuadraticAlgebra,
                           kernel: Subspace) -> NormalElement:
    """Reduce the vanishing tensors modulo the degree-3 ideal piece; demand
    a single direction and lift it canonically."""
    piece = algebra.graded(3)
    projected = piece.project_rows(kernel.basis)
    span = Subspace.from_rows(algebra.field, piece.dim, projected)
    if span.dim != 1:
        raise NotOneDimensional(
            f"vanishing tensors project to dimension {span.dim}, not 1")
    vec = span.basis[0]
    lifted = piece.lift_rows(algebra.field.array([vec]))[0]
    return NormalElement(algebra, lifted, vec)


def normal_element(algebra: QuadraticAlgebra,
                   method: str | None = None) -> NormalElement:
    """Construct the degree-3 normal element.

    method: "sampling" (prime fields), "symbolic" (any field), or None to
    pick sampling over a prime field and symbolic over the rationals.

    Automatic selection falls back to the symbolic route when sampling
    cannot pin the kernel down: the twist can hold every component of the
    divisor in place, and then no amount of point data separates the
    graph's ideal from the ideal of its rational points.
    """
    auto = method is None
    if auto:
        method = "sampling" if algebra.field.p is not None else "symbolic"
    if method == "sampling":
        try:
            kernel = vanishing_tensors_sampled(algebra)
        except RankDeficientSampling:
            if not auto:
                raise
            kernel = vanishing_tensors_symbolic(algebra)
    elif method == "symbolic":
        kernel = vanishing_tensors_symbolic(algebra)
    else:
        raise ValueError(f"unknown method {method!r}")
    return extract_normal_element(algebra, kernel)


# --------------------------------------------------------------------------
# membership helpers
# --------------------------------------------------------------------------

def plane_through_point(field: Field, point) -> Subspace:
    """The 2-dimensional space of degree-1 elements vanishing at a point."""
    mat = field.array([list(point)])
    return nullspace(mat, field)


def point_of_plane(plane: Subspace):
    """The common zero of a 2-dimensional space of degree-1 elements."""
    if plane.dim != 2:
        raise ValueError("need a 2-dimensional space of linear forms")
    u, v = plane.basis[0], plane.basis[1]
    field = plane.field
    pt = (u[1] * v[2] - u[2] * v[1],
          u[2] * v[0] - u[0] * v[2],
          u[0] * v[1] - u[1] * v[0])
    return normalize_point(tuple(field.scalar(x) for x in pt), field)


def quotient_membership(ne: NormalElement, space: Subspace) -> bool:
    """Whether the normal element lies in a degree-3 quotient subspace."""
    return space.contains_vector(ne.quotient_vector)


def chain_level(ne: NormalElement, filtration) -> int:
    """The highest filtration level of degree 3 containing the element."""
    from .testconfig import chain
    levels = chain(ne.algebra, filtration, 3)
    best = 0
    for k, level in enumerate(levels):
        if level.contains_vector(ne.quotient_vector):
            best = k
    return best


def word_pattern_space(algebra: QuadraticAlgebra, pattern: str,
                       plane: Subspace | None = None,
                       line: Subspace | None = None) -> Subspace:
    """The subspace spanned by a sum of words in degree-1 letters.

    ``pattern`` looks like ``"WWV+WVW+VWW"``: words of a common length
    joined by ``+``, each letter one of V (the whole degree-1 piece),
    W (the supplied plane), U (the supplied line).
    """
    words = [w.strip() for w in pattern.split("+")]
    if not words or any(not w for w in words):
        raise ValueError(f"bad pattern {pattern!r}")
    lengths = {len(w) for w in words}
    if len(lengths) != 1:
        raise ValueError(f"words in {pattern!r} have mixed lengths")
    letters = {"V": algebra.graded(1).full_subspace(),
               "W": plane, "U": line}
    total = Subspace.zero(algebra.field,
                          algebra.graded(lengths.pop()).dim)
    for word in words:
        factors = []
        for ch in word:
            if ch not in letters:
                raise ValueError(f"unknown letter {ch!r} in {pattern!r}")
            if letters[ch] is None:
                raise ValueError(f"pattern {pattern!r} needs a {ch} subspace")
            factors.append(letters[ch])
        total = total.add(algebra.word_space(factors))
    return total


def word_pattern_membership(ne: NormalElement, pattern: str,
                            plane: Subspace | None = None,
                            line: Subspace | None = None) -> bool:
    """Whether the normal element lies in a degree-3 word-pattern span."""
    space = word_pattern_space(ne.algebra, pattern, plane, line)
    if space.ambient != ne.algebra.graded(3).dim:
        raise ValueError("membership patterns must have degree-3 words")
    return space.contains_vector(ne.quotient_vector)


def membership_report(ne: NormalElement,
                      plane: Subspace | None = None,
                      line: Subspace | None = None) -> dict[str, bool]:
    """The standard membership table for a plane and/or line of interest."""
    patterns = []
    if plane is not None:
        patterns += ["WVV", "WVW", "WWV+WVW+VWW", "WWW"]
    if line is not None:
        patterns += ["UVV+VUV+VVU"]
    if plane is not None and line is not None:
        patterns += ["UWV+UVW+VUW+WUV+VWU+WVU"]
    return {pattern: word_pattern_membership(ne, pattern, plane, line)
            for pattern in patterns}


def curve_image_dimension(ne: NormalElement, space: Subspace,
                          n: int) -> int:
    """Exact dimension of the image of a degree-n subspace in the curve
    quotient (the degree-n piece modulo the normal element's slice)."""
    image = ne.image(n)
    if space.ambient != image.ambient:
        raise ValueError("subspace is not in degree-n quotient coordinates")
    return space.add(image).dim - image.dim

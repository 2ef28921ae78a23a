"""Degree-3 point geometry of a quadratic algebra and its stability verdict.

The three relations define two 3x3 matrices of linear forms,

    M(p)[i, b] = sum_a c[i][a][b] p_a,      N(q)[i, a] = sum_b c[i][a][b] q_b,

and a pair (p, q) satisfies all relations iff M(p) q = 0 iff N(q) p = 0.
The vanishing of det M cuts out a cubic divisor X; where M(p) has rank 2
the next point is the (unique projective) nonzero column of the adjugate
of M(p), which makes the point map computable by polynomial arithmetic
alone -- including at points with coordinates in an extension field
F_p[t]/(g), where we only ever need ring operations mod g.

The stability verdict follows the dichotomy: unstable iff some linear
component of X is preserved by the point map or some singular point of X
is fixed by it.  Fixedness of P is tested as the graph condition
M(P) P = 0, which is exactly "(P, P) lies on the incidence variety" and
agrees with sigma(P) = P wherever the point map is single-valued.

Everything here is exact.  Over a prime field the machinery is complete
except for a handful of genuinely degenerate situations, which are
reported as "Unresolved" rather than guessed at.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import polyutils as pu
from .algebra import QuadraticAlgebra
from .fields import Field
from .linalg import Subspace, rref

VERDICTS = ("StableSmooth", "StableTriangleCyclic", "Exceptional",
            "Unstable", "Linear", "Unresolved")


class DegeneratePointError(ValueError):
    """The relation matrix drops to rank <= 1 at this point, so the point
    map is not single-valued there."""


class SemistandardViolationError(RuntimeError):
    """det M and det N failed to be proportional; the two elimination
    orders disagree about the divisor, which should never happen."""


# --------------------------------------------------------------------------
# sparse trivariate forms: {(i, j, k): coeff} with i + j + k = degree
# --------------------------------------------------------------------------

def _fmul(field, a, b):
    v = a * b
    return v % field.p if field.p is not None else v


def tri_add(f, g, field):
    out = dict(f)
    for mono, c in g.items():
        v = out.get(mono, field.zero) + c
        if field.p is not None:
            v %= field.p
        if v == field.zero:
            out.pop(mono, None)
        else:
            out[mono] = v
    return out


def tri_scale(f, c, field):
    if c == field.zero:
        return {}
    return {m: _fmul(field, v, c) for m, v in f.items()}


def tri_mul(f, g, field):
    out = {}
    for (i1, j1, k1), a in f.items():
        for (i2, j2, k2), b in g.items():
            mono = (i1 + i2, j1 + j2, k1 + k2)
            v = out.get(mono, field.zero) + _fmul(field, a, b)
            if field.p is not None:
                v %= field.p
            out[mono] = v
    return {m: v for m, v in out.items() if v != field.zero}


def tri_linear(coeffs, field):
    out = {}
    for var, c in enumerate(coeffs):
        c = field.scalar(c) if not isinstance(c, (int, Fraction)) else c
        if c != field.zero:
            mono = tuple(1 if t == var else 0 for t in range(3))
            out[mono] = c
    return out


def tri_eval(f, point, field):
    acc = field.zero
    for (i, j, k), c in f.items():
        v = c
        for coord, e in zip(point, (i, j, k)):
            for _ in range(e):
                v = _fmul(field, v, coord)
        acc = acc + v
        if field.p is not None:
            acc %= field.p
    return acc


def tri_partial(f, var, field):
    out = {}
    for mono, c in f.items():
        e = mono[var]
        if e == 0:
            continue
        new = list(mono)
        new[var] = e - 1
        v = _fmul(field, c, field.scalar(e))
        if v != field.zero:
            out[tuple(new)] = v
    return out


def tri_divide_linear(f, line, field):
    """Exact quotient f / (a x + b y + c z), or None if not divisible."""
    pivot = next((v for v, c in enumerate(line) if c != field.zero), None)
    if pivot is None:
        raise ZeroDivisionError("zero linear form")
    inv = field.inv(line[pivot])
    rest = [(v, _fmul(field, line[v], inv)) for v in range(3)
            if v != pivot and line[v] != field.zero]
    # synthetic division in the pivot variable
    f = dict(f)
    quotient = {}
    while f:
        # highest pivot-degree term
        mono = max(f, key=lambda m: (m[pivot], m))
        if mono[pivot] == 0:
            return None
        c = _fmul(field, f[mono], inv)
        qm = list(mono)
        qm[pivot] -= 1
        quotient[tuple(qm)] = c
        # subtract c * qm * line
        term = {tuple(qm): c}
        f = tri_add(f, tri_scale(tri_mul(term, tri_linear_raw(line), field),
                                 field.scalar(-1), field), field)
    return quotient


def tri_linear_raw(coeffs):
    out = {}
    for var, c in enumerate(coeffs):
        if c != 0:
            out[tuple(1 if t == var else 0 for t in range(3))] = c
    return out


def tri_proportional(f, g, field):
    """True iff f and g span the same line of forms (both nonzero)."""
    if not f or not g:
        return not f and not g
    if set(f) != set(g):
        return False
    mono = next(iter(f))
    a, b = f[mono], g[mono]
    for m in f:
        lhs = _fmul(field, f[m], b)
        rhs = _fmul(field, g[m], a)
        if field.p is not None and (lhs - rhs) % field.p != 0:
            return False
        if field.p is None and lhs != rhs:
            return False
    return True


# --------------------------------------------------------------------------
# relation matrices and the cubic divisor
# --------------------------------------------------------------------------

def relation_tensors(algebra: QuadraticAlgebra):
    """(left tensor, right tensor): left[i][b][a] = right[i][a][b] = c_iab."""
    basis = algebra.relations.basis
    field = algebra.field
    left = np.empty((3, 3, 3), dtype=basis.dtype)
    right = np.empty((3, 3, 3), dtype=basis.dtype)
    for i in range(3):
        for a in range(3):
            for b in range(3):
                left[i, b, a] = basis[i, 3 * a + b]
                right[i, a, b] = basis[i, 3 * a + b]
    return left, right


def matrix_at(tensor, point, field):
    """3x3 matrix of the pencil evaluated at a point (exact)."""
    out = np.empty((3, 3), dtype=object)
    for i in range(3):
        for j in range(3):
            acc = field.zero
            for a in range(3):
                acc = acc + _fmul(field, tensor[i, j, a], point[a])
            out[i, j] = acc % field.p if field.p is not None else acc
    return out


def det3(m, field):
    pos = (m[0, 0] * m[1, 1] * m[2, 2] + m[0, 1] * m[1, 2] * m[2, 0]
           + m[0, 2] * m[1, 0] * m[2, 1])
    neg = (m[0, 2] * m[1, 1] * m[2, 0] + m[0, 1] * m[1, 0] * m[2, 2]
           + m[0, 0] * m[1, 2] * m[2, 1])
    v = pos - neg
    return v % field.p if field.p is not None else v


def adjugate3(m, field):
    out = np.empty((3, 3), dtype=object)
    for i in range(3):
        for j in range(3):
            a, b = [r for r in range(3) if r != j], [c for c in range(3) if c != i]
            v = m[a[0], b[0]] * m[a[1], b[1]] - m[a[0], b[1]] * m[a[1], b[0]]
            if (i + j) % 2:
                v = -v
            out[i, j] = v % field.p if field.p is not None else v
    return out


def pencil_determinant(tensor, field):
    """det of the 3x3 matrix of linear forms, as a ternary cubic."""
    rows = [[tri_linear_raw(list(tensor[i, j, :])) for j in range(3)]
            for i in range(3)]
    cubic = {}
    for perm in itertools.permutations(range(3)):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if perm[i] > perm[j]:
                    sign = -sign
        term = rows[0][perm[0]]
        term = tri_mul(term, rows[1][perm[1]], field)
        term = tri_mul(term, rows[2][perm[2]], field)
        cubic = tri_add(cubic, tri_scale(term, field.scalar(sign), field),
                        field)
    return cubic


def check_semistandard(algebra: QuadraticAlgebra):
    """det M and det N must cut out the same divisor."""
    left, right = relation_tensors(algebra)
    f = pencil_determinant(left, algebra.field)
    g = pencil_determinant(right, algebra.field)
    if not tri_proportional(f, g, algebra.field):
        raise SemistandardViolationError(
            "the two relation pencils have non-proportional determinants")
    return f


def normalize_point(pt, field):
    pivot = next((v for v in pt if v != field.zero), None)
    if pivot is None:
        raise ValueError("zero vector is not a point")
    inv = field.inv(pivot)
    return tuple(_fmul(field, v, inv) for v in pt)


def sigma_point(tensor, point, field):
    """Image of a divisor point under the point map (adjugate column)."""
    m = matrix_at(tensor, point, field)
    if det3(m, field) != field.zero:
        raise ValueError("point does not lie on the divisor")
    adj = adjugate3(m, field)
    for j in range(3):
        col = tuple(adj[i, j] for i in range(3))
        if any(v != field.zero for v in col):
            return normalize_point(col, field)
    raise DegeneratePointError("rank <= 1 at this point")


def graph_fixed(tensor, point, field):
    """(P, P) satisfies all relations: M(P) P = 0."""
    m = matrix_at(tensor, point, field)
    for i in range(3):
        acc = field.zero
        for j in range(3):
            acc = acc + _fmul(field, m[i, j], point[j])
        if field.p is not None:
            acc %= field.p
        if acc != field.zero:
            return False
    return True


# --------------------------------------------------------------------------
# conics over F_p as symmetric matrices (p != 2, 3 guaranteed by Field)
# --------------------------------------------------------------------------

def conic_matrix(conic, field):
    inv2 = field.inv(field.scalar(2))
    q = [[field.zero] * 3 for _ in range(3)]
    for (i, j, k), c in conic.items():
        exps = (i, j, k)
        vars_ = [v for v in range(3) for _ in range(exps[v])]
        a, b = vars_
        if a == b:
            q[a][a] = c
        else:
            half = _fmul(field, c, inv2)
            q[a][b] = half
            q[b][a] = half
    return q


def conic_rank(qmat, field):
    arr = field.array([[row[j] for j in range(3)] for row in qmat])
    _, piv = rref(arr, field)
    return len(piv)


def conic_kernel_point(qmat, field):
    arr = field.array([[row[j] for j in range(3)] for row in qmat])
    from .linalg import nullspace
    ker = nullspace(arr, field)
    if ker.dim != 1:
        raise ValueError("kernel is not a point")
    return normalize_point(tuple(ker.basis[0]), field)


def eval_conic(qmat, a, b, field):
    """Bilinear form value a^T Q b."""
    acc = field.zero
    for i in range(3):
        for j in range(3):
            acc = acc + _fmul(field, _fmul(field, a[i], qmat[i][j]), b[j])
    return acc % field.p if field.p is not None else acc


def rational_point_on_smooth_conic(qmat, field):
    """Deterministic sweep; a smooth conic over F_p always has points."""
    p = field.p
    for x0 in (1, 0):
        for y0 in range(p):
            # solve q(x0, y0, t) = 0 for t
            a = eval_conic(qmat, (0, 0, 1), (0, 0, 1), field)
            b = 2 * eval_conic(qmat, (x0, y0, 0), (0, 0, 1), field) % p
            c = eval_conic(qmat, (x0, y0, 0), (x0, y0, 0), field)
            poly = pu.trim([c % p, b % p, a % p])
            if not poly:
                if (x0, y0) != (0, 0):
                    return normalize_point((x0, y0, 0), field)
                continue
            rr = pu.roots(poly, p) if pu.degree(poly) >= 1 else []
            if rr:
                return normalize_point((x0, y0, rr[0]), field)
    raise RuntimeError("no rational point found on conic")  # unreachable


def parametrize_conic(qmat, base, field):
    """Rational parametrization through a point of a rank-3 conic.

    Returns (coords, infinity_point): coords is a triple of t-polynomials
    of degree <= 2 sweeping the conic, infinity_point covers the missing
    direction.
    """
    p = field.p
    # complete base to a basis with two standard vectors
    cols = [field.scalar(v) for v in base]
    choices = []
    for e in range(3):
        vec = tuple(field.one if i == e else field.zero for i in range(3))
        trial = field.array([list(base), list(vec)] +
                            [list(c) for c in choices])
        if len(rref(trial, field)[1]) == 2 + len(choices):
            choices.append(vec)
        if len(choices) == 2:
            break
    d0, d1 = choices

    def pt_from_direction(d):
        qd = eval_conic(qmat, d, d, field)
        bl = eval_conic(qmat, base, d, field)
        bl = 2 * bl % p
        return tuple((qd * base[i] - bl * d[i]) % p for i in range(3))

    # direction d0 + t d1: coordinates are quadratics in t
    coords = []
    for i in range(3):
        qd0 = eval_conic(qmat, d0, d0, field)
        qd1 = eval_conic(qmat, d1, d1, field)
        qcross = 2 * eval_conic(qmat, d0, d1, field) % p
        b0 = 2 * eval_conic(qmat, base, d0, field) % p
        b1 = 2 * eval_conic(qmat, base, d1, field) % p
        # q(d(t)) = qd0 + qcross t + qd1 t^2 ;  bl(t) = b0 + b1 t
        c0 = (qd0 * base[i] - b0 * d0[i]) % p
        c1 = (qcross * base[i] - b0 * d1[i] - b1 * d0[i]) % p
        c2 = (qd1 * base[i] - b1 * d1[i]) % p
        coords.append(pu.trim([c0, c1, c2]))
    infinity = pt_from_direction(d1)
    return coords, infinity


def conic_eval_on_coords(conic, coords, p):
    """Evaluate a trivariate conic on coordinate polynomials in t."""
    acc = []
    for (i, j, k), c in conic.items():
        term = [int(c) % p]
        for var, e in enumerate((i, j, k)):
            for _ in range(e):
                term = pu.mul(term, coords[var], p)
        acc = pu.add(acc, term, p)
    return acc


# --------------------------------------------------------------------------
# small-degree univariate factorization (for extension certificates)
# --------------------------------------------------------------------------

def factor_small(f, p):
    """Irreducible factors (monic, without multiplicity) of a squarefree
    polynomial of degree <= 4 over F_p."""
    f = pu.monic(list(f), p)
    out = []
    for r in pu.roots(f, p):
        out.append([(-r) % p, 1])
        f = pu.poly_divmod(f, [(-r) % p, 1], p)[0]
    d = pu.degree(f)
    if d <= 0:
        return out
    if d in (2, 3):
        out.append(f)  # no roots and degree <= 3 means irreducible
        return out
    # degree 4, no rational roots: either irreducible or two quadratics
    xp = pu.powmod([0, 1], p, f, p)
    xp2 = pu.powmod(xp, p, f, p)
    g = pu.gcd(pu.sub(xp2, [0, 1], p), f, p)
    if pu.degree(g) == 0:
        out.append(f)  # irreducible quartic
        return out
    if pu.degree(g) == 4:
        out.extend(_split_two_quadratics(f, p))
        return out
    out.append(pu.monic(g, p))
    rest = pu.poly_divmod(f, g, p)[0]
    if pu.degree(rest) > 0:
        out.append(pu.monic(rest, p))
    return out


def _split_two_quadratics(f, p):
    e = (p * p - 1) // 2
    for delta in range(6 * 20):
        shift = [delta % p, 1] if delta < 60 else [delta % p, 0, 1]
        ch = pu.powmod(shift, e, f, p)
        g = pu.gcd(pu.sub(ch, [1], p), f, p)
        if 0 < pu.degree(g) < 4:
            h = pu.poly_divmod(f, g, p)[0]
            parts = []
            for part in (g, h):
                if pu.degree(part) == 2:
                    parts.append(pu.monic(part, p))
                else:
                    parts.extend(factor_small(part, p))
            return parts
    raise RuntimeError("failed to split quartic into quadratics")


# --------------------------------------------------------------------------
# singular locus over F_p
# --------------------------------------------------------------------------

@dataclass
class ExtensionPoint:
    """A Galois orbit of singular points: coordinates are polynomials in
    t modulo the irreducible minimal polynomial."""
    minpoly: list
    coords: tuple          # three t-polynomials


@dataclass
class SingularLocus:
    rational: list         # normalized projective points
    extension: list        # ExtensionPoint orbits
    positive_dimensional: object = None   # a line's coefficients, if so
    complete: bool = True  # False when the analysis had to give up


def singular_points(cubic, field) -> SingularLocus:
    """Common zeros of the three partials (Euler: p does not divide 3,
    so these automatically lie on the cubic)."""
    p = field.p
    partials = [tri_partial(cubic, v, field) for v in range(3)]
    nonzero = [q for q in partials if q]
    if not nonzero:
        raise ValueError("zero cubic has no singular locus")

    if len(nonzero) == 1:
        # sing = the zero set of the only nonzero partial: a (double) line
        qmat = conic_matrix(nonzero[0], field)
        if conic_rank(qmat, field) == 1:
            line = _rank_one_line(qmat, field)
            return SingularLocus([], [], positive_dimensional=line)
        return SingularLocus([], [], complete=False)

    candidates, ext, posdim, complete = _partials_common_zeros(
        partials, nonzero, field)
    if posdim is not None:
        return SingularLocus([], [], positive_dimensional=posdim)

    rational = []
    seen = set()
    for pt in candidates:
        pt = normalize_point(pt, field)
        if pt in seen:
            continue
        seen.add(pt)
        if all(tri_eval(q, pt, field) == field.zero for q in partials):
            rational.append(pt)
    verified_ext = [
        orbit for orbit in ext
        if _extension_point_satisfies(partials, orbit, p)
    ]
    return SingularLocus(sorted(rational), verified_ext, complete=complete)


def _rank_one_line(qmat, field):
    for i in range(3):
        row = [qmat[i][j] for j in range(3)]
        if any(v != field.zero for v in row):
            return normalize_point(tuple(row), field)
    raise ValueError("zero conic")


def _partials_common_zeros(partials, nonzero, field):
    """Candidate common zeros of the partial conics.

    Returns (rational candidates, extension orbits, positive-dim line or
    None, completeness flag).  Candidates are a superset; the caller
    filters against all three partials.
    """
    p = field.p
    fallback = None
    for primary in nonzero:
        others = [q for q in partials if q and q is not primary]
        qmat = conic_matrix(primary, field)
        rank = conic_rank(qmat, field)
        if rank == 3:
            return _smooth_primary(qmat, others, field)
        if rank == 1:
            line = _rank_one_line(qmat, field)
            res = _line_meets_conics(line, others, field)
            if res is None:
                return [], [], line, True
            cand, ext = res
            return cand, ext, None, True
        # rank 2: directly useful only when it splits over F_p
        split = _split_rank_two(qmat, field)
        if split is not None:
            vertex, lines = split
            cand, ext = [vertex], []
            for line in lines:
                res = _line_meets_conics(line, others, field)
                if res is None:
                    return [], [], line, True
                more, ext_more = res
                cand.extend(more)
                ext.extend(ext_more)
            return cand, ext, None, True
        # conjugate line pair: the vertex is the only rational candidate;
        # try another partial as primary before giving up on completeness
        vertex = conic_kernel_point(qmat, field)
        if fallback is None:
            fallback = ([vertex], [], None, False)
    return fallback if fallback is not None else ([], [], None, False)


def _smooth_primary(qmat, others, field):
    p = field.p
    base = rational_point_on_smooth_conic(qmat, field)
    coords, infinity = parametrize_conic(qmat, base, field)
    restrictions = [conic_eval_on_coords(q, coords, p) for q in others]
    h = None
    for r in restrictions:
        h = r if h is None else pu.gcd(h, r, p)
        if pu.degree(h) == 0:
            break
    cand = [base, infinity]
    ext = []
    if h and pu.degree(h) >= 1:
        h = pu.squarefree_part(h, p)
        for factor in factor_small(h, p):
            if pu.degree(factor) == 1:
                t0 = (-factor[0]) % p
                pt = tuple(pu.evaluate(c, t0, p) for c in coords)
                if any(v != 0 for v in pt):
                    cand.append(pt)
            else:
                coords_mod = tuple(pu.poly_mod(c, factor, p) for c in coords)
                if any(c for c in coords_mod):
                    ext.append(ExtensionPoint(factor, coords_mod))
    elif h is None or not h:
        # a constraint restricted to the conic vanished identically:
        # the primary conic lies inside another partial, so the whole
        # conic consists of common zeros of those two; this only leaves
        # a finite singular set if the remaining partial cuts it down,
        # and the remaining partial was already in the gcd. Degenerate.
        return [base, infinity], [], None, False
    return cand, ext, None, True


def _split_rank_two(qmat, field):
    """Split a rank-2 conic into two rational lines if possible.

    Returns (vertex, [line1, line2]) or None if the lines are conjugate.
    """
    p = field.p
    vertex = conic_kernel_point(qmat, field)
    # pick two vectors completing the vertex to a basis
    basis = []
    for e in range(3):
        vec = tuple(field.one if i == e else field.zero for i in range(3))
        trial = field.array([list(vertex)] + [list(b) for b in basis] +
                            [list(vec)])
        if len(rref(trial, field)[1]) == len(basis) + 2:
            basis.append(vec)
        if len(basis) == 2:
            break
    d0, d1 = basis
    a = eval_conic(qmat, d1, d1, field)
    b = (2 * eval_conic(qmat, d0, d1, field)) % p
    c = eval_conic(qmat, d0, d0, field)
    poly = pu.trim([c, b, a])
    if not poly:
        raise ValueError("rank-2 conic vanished on a complement plane")
    rr = pu.roots(poly, p) if pu.degree(poly) >= 1 else []
    directions = []
    if pu.degree(poly) == 1:
        directions = [tuple((d0[i] + rr[0] * d1[i]) % p for i in range(3)),
                      d1]
    elif len(rr) == 2:
        directions = [tuple((d0[i] + t * d1[i]) % p for i in range(3))
                      for t in rr]
    elif len(rr) == 1 and pu.degree(poly) == 2:
        # double root would mean rank 1; a single simple root cannot
        # happen for a quadratic with distinct factored lines
        directions = [tuple((d0[i] + rr[0] * d1[i]) % p for i in range(3))]
    if len(directions) < 2:
        return None
    lines = []
    for d in directions[:2]:
        # the component line through vertex and the root direction:
        # its defining linear form is the cross product
        lines.append(_cross(vertex, d, field))
    return vertex, lines


def _cross(u, v, field):
    p = field.p
    out = (u[1] * v[2] - u[2] * v[1],
           u[2] * v[0] - u[0] * v[2],
           u[0] * v[1] - u[1] * v[0])
    out = tuple(x % p if p is not None else x for x in out)
    if all(x == field.zero for x in out):
        raise ValueError("colinear vectors have no cross product")
    return normalize_point(out, field)


def _line_points(line, field):
    """Two spanning points of the line a x + b y + c z = 0."""
    a, b, c = line
    if a != field.zero:
        raw = [(-b, a, 0), (-c, 0, a)]
    elif b != field.zero:
        raw = [(1, 0, 0), (0, -c, b)]
    else:
        raw = [(1, 0, 0), (0, 1, 0)]
    pts = []
    for r in raw:
        vec = tuple(field.scalar(x) for x in r)
        pts.append(normalize_point(vec, field))
    return pts


def _line_meets_conics(line, conics, field):
    """Candidates on a line that satisfy every given conic.

    Returns (rational candidates, extension orbits), or None when every
    conic vanishes identically on the line (positive-dimensional)."""
    p = field.p
    s0, s1 = _line_points(line, field)
    coords = [pu.trim([s0[i], s1[i]]) for i in range(3)]  # s0 + t s1
    h = None
    for q in conics:
        r = conic_eval_on_coords(q, coords, p)
        if r == []:
            continue  # vanishes on the whole line, no constraint
        h = r if h is None or h == [] else pu.gcd(h, r, p)
        if pu.degree(h) == 0:
            break
    if h is not None and pu.degree(h) == 0:
        # no common zeros at finite t; still check t = infinity
        cand = [s1] if all(tri_eval(q, s1, field) == field.zero
                           for q in conics) else []
        return cand, []
    if h is None or h == []:
        return None
    cand, ext = [], []
    h = pu.squarefree_part(h, p)
    for factor in factor_small(h, p):
        if pu.degree(factor) == 1:
            t0 = (-factor[0]) % p
            pt = tuple(pu.evaluate(c, t0, p) for c in coords)
            cand.append(pt)
        else:
            coords_mod = tuple(pu.poly_mod(c, factor, p) for c in coords)
            ext.append(ExtensionPoint(factor, coords_mod))
    if all(tri_eval(q, s1, field) == field.zero for q in conics):
        cand.append(s1)
    return cand, ext


def _extension_point_satisfies(forms, orbit: ExtensionPoint, p):
    g = orbit.minpoly
    for form in forms:
        acc = []
        for (i, j, k), c in form.items():
            term = [int(c) % p]
            for var, e in enumerate((i, j, k)):
                for _ in range(e):
                    term = pu.poly_mod(pu.mul(term, orbit.coords[var], p),
                                       g, p)
            acc = pu.add(acc, term, p)
        if acc:
            return False
    return True


def extension_graph_fixed(tensor, orbit: ExtensionPoint, field):
    """M(P) P = 0 with coordinates in F_p[t]/(minpoly)."""
    p = field.p
    g = orbit.minpoly
    for i in range(3):
        acc = []
        for a in range(3):
            for b in range(3):
                c = int(tensor[i, b, a]) % p
                if c == 0:
                    continue
                term = pu.scale(
                    pu.poly_mod(pu.mul(orbit.coords[a], orbit.coords[b], p),
                                g, p), c, p)
                acc = pu.add(acc, term, p)
        acc = pu.poly_mod(acc, g, p)
        if acc:
            return False
    return True


# --------------------------------------------------------------------------
# linear components over F_p
# --------------------------------------------------------------------------

def linear_components(cubic, field):
    """All rational linear factors with multiplicity, plus the residual.

    Returns (list of (line, multiplicity), residual form dict)."""
    g = dict(cubic)
    found = []

    def strip(line):
        nonlocal g
        mult = 0
        while True:
            q = tri_divide_linear(g, line, field)
            if q is None:
                break
            g = q
            mult += 1
        if mult:
            found.append((line, mult))

    # coordinate lines first (they dodge the generic candidate charts)
    for var in range(3):
        line = tuple(field.one if v == var else field.zero for v in range(3))
        strip(line)

    candidates = set()
    rest_x = _restriction_roots(g, 0, field)
    rest_y = _restriction_roots(g, 1, field)
    rest_z = _restriction_roots(g, 2, field)
    # forms x + beta y + gamma z
    for beta in rest_z:
        for gamma in rest_y:
            candidates.add((field.one, beta, gamma))
    # forms y + gamma z
    for gamma in rest_x:
        candidates.add((field.zero, field.one, gamma))
    for line in sorted(candidates):
        strip(line)
    return found, g


def _restriction_roots(g, kill_var, field):
    """Roots t of the restriction of g to {x_kill = 0}, reparametrized so
    that each root t corresponds to a linear factor of the restriction
    whose leading surviving variable has coefficient 1."""
    p = field.p
    keep = [v for v in range(3) if v != kill_var]
    # univariate u(t) = g(point with keep[0] = -t, keep[1] = 1)
    if p is None:
        raise NotImplementedError("rational restriction roots use sympy")
    coeffs: dict[int, int] = {}
    for mono, c in g.items():
        if mono[kill_var] != 0:
            continue
        d = mono[keep[0]]
        v = coeffs.get(d, 0) + (int(c) if d % 2 == 0 else -int(c))
        coeffs[d] = v % p
    if not coeffs:
        return []
    top = max(coeffs)
    poly = pu.trim([coeffs.get(i, 0) % p for i in range(top + 1)])
    if not poly or pu.degree(poly) < 1:
        return []
    return [field.scalar(r) for r in pu.roots(poly, p)]


# --------------------------------------------------------------------------
# component invariance under the point map
# --------------------------------------------------------------------------

MONOMIAL_ORDER = ((3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
                  (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3))


def cubic_coefficients(cubic, field):
    """The ten coefficients in the fixed monomial order."""
    return tuple(cubic.get(m, field.zero) for m in MONOMIAL_ORDER)


def line_invariant(tensor, cubic, line, field, samples=4):
    """Whether the point map sends the given component line into itself.

    True/False when decided by sampling; None when too few points of the
    line admit a single-valued image (rank everywhere <= 1)."""
    s0, s1 = _line_points(line, field)
    max_t = field.p if field.p is not None else 24
    candidates = [s1]
    t = 0
    while len(candidates) < max_t + 1 and t < max_t:
        pt = tuple(s0[i] + field.scalar(t) * s1[i] for i in range(3))
        if field.p is not None:
            pt = tuple(v % field.p for v in pt)
        candidates.append(pt)
        t += 1
    good = 0
    for pt in candidates:
        if tri_eval(cubic, pt, field) != field.zero:
            return False  # not even a component
        try:
            image = sigma_point(tensor, pt, field)
        except (DegeneratePointError, ValueError):
            continue
        value = sum((_fmul(field, line[i], image[i]) for i in range(3)),
                    start=field.zero)
        if field.p is not None:
            value %= field.p
        if value != field.zero:
            return False
        good += 1
        if good >= samples:
            return True
    return None


# --------------------------------------------------------------------------
# verdicts
# --------------------------------------------------------------------------

@dataclass
class GeometryReport:
    verdict: str
    witness: dict | None
    cubic: tuple
    lines: list
    singular_rational: list
    singular_extension_degrees: list
    notes: list = dc_field(default_factory=list)

    @property
    def stable(self):
        return self.verdict in ("StableSmooth", "StableTriangleCyclic")


def _fmt_scalar(v):
    return str(v)


def _fmt_point(pt):
    return tuple(_fmt_scalar(v) for v in pt)


def classify(algebra: QuadraticAlgebra) -> GeometryReport:
    """Full geometric stability classification of the algebra."""
    field = algebra.field
    cubic = check_semistandard(algebra)
    coeffs = cubic_coefficients(cubic, field)
    if not cubic:
        return GeometryReport("Linear", None, coeffs, [], [], [],
                              ["determinant of the relation pencil is zero"])
    if field.p is None:
        return _classify_rational(algebra, cubic, coeffs)
    return _classify_prime(algebra, cubic, coeffs)


def _classify_prime(algebra, cubic, coeffs):
    field = algebra.field
    left, _ = relation_tensors(algebra)
    notes = []

    lines, residual = linear_components(cubic, field)
    for line, mult in lines:
        if mult >= 2:
            return GeometryReport(
                "Unstable",
                {"type": "repeated_line", "line": _fmt_point(line)},
                coeffs, [_fmt_point(l) for l, _ in lines], [], [], notes)

    sing = singular_points(cubic, field)
    if sing.positive_dimensional is not None:
        return GeometryReport(
            "Unstable",
            {"type": "repeated_line",
             "line": _fmt_point(sing.positive_dimensional)},
            coeffs, [_fmt_point(l) for l, _ in lines], [], [], notes)

    line_strs = [_fmt_point(l) for l, _ in lines]
    sing_strs = [_fmt_point(pt) for pt in sing.rational]
    ext_degs = [pu.degree(o.minpoly) for o in sing.extension]

    for pt in sing.rational:
        if graph_fixed(left, pt, field):
            return GeometryReport(
                "Unstable",
                {"type": "fixed_singular_point", "point": _fmt_point(pt)},
                coeffs, line_strs, sing_strs, ext_degs, notes)
    for orbit in sing.extension:
        if extension_graph_fixed(left, orbit, field):
            return GeometryReport(
                "Unstable",
                {"type": "fixed_singular_orbit",
                 "minpoly": [int(c) for c in orbit.minpoly]},
                coeffs, line_strs, sing_strs, ext_degs, notes)

    undetermined = False
    for line, _ in lines:
        inv = line_invariant(left, cubic, line, field)
        if inv is True:
            return GeometryReport(
                "Unstable",
                {"type": "invariant_line", "line": _fmt_point(line)},
                coeffs, line_strs, sing_strs, ext_degs, notes)
        if inv is None:
            undetermined = True
            notes.append("line invariance undetermined by sampling")

    if undetermined or not sing.complete:
        if not sing.complete:
            notes.append("singular locus analysis incomplete")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    return _shape_verdict(cubic, coeffs, lines, residual, sing,
                          line_strs, sing_strs, ext_degs, notes, field)


def _shape_verdict(cubic, coeffs, lines, residual, sing,
                   line_strs, sing_strs, ext_degs, notes, field):
    nlines = len(lines)
    residual_deg = max((sum(m) for m in residual), default=0)

    if not sing.rational and not sing.extension:
        if nlines:
            notes.append("smooth but reducible: impossible, giving up")
            return GeometryReport("Unresolved", None, coeffs, line_strs,
                                  sing_strs, ext_degs, notes)
        return GeometryReport("StableSmooth", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    if nlines == 3:
        vertices = set()
        for (l1, _), (l2, _) in itertools.combinations(lines, 2):
            vertices.add(_cross(l1, l2, field))
        if len(vertices) == 3:
            return GeometryReport("StableTriangleCyclic", None, coeffs,
                                  line_strs, sing_strs, ext_degs, notes)
        notes.append("three concurrent lines with unfixed center")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    if nlines == 1 and residual_deg == 2:
        qmat = conic_matrix(residual, field)
        rank = conic_rank(qmat, field)
        if rank == 3:
            s0, s1 = _line_points(lines[0][0], field)
            a = eval_conic(qmat, s1, s1, field)
            b = (2 * eval_conic(qmat, s0, s1, field)) % field.p
            c = eval_conic(qmat, s0, s0, field)
            disc = (b * b - 4 * a * c) % field.p
            if disc == 0:
                notes.append("tangential line/conic contact with unfixed "
                             "tangency point")
                return GeometryReport("Unresolved", None, coeffs, line_strs,
                                      sing_strs, ext_degs, notes)
            return GeometryReport("Exceptional", None, coeffs, line_strs,
                                  sing_strs, ext_degs, notes)
        notes.append("degenerate residual conic beside a rational line")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    if nlines == 0 and residual_deg == 3:
        if (not sing.rational and len(sing.extension) == 1
                and pu.degree(sing.extension[0].minpoly) == 3):
            # three conjugate vertices, none fixed: a conjugate triangle
            # cyclically permuted
            return GeometryReport("StableTriangleCyclic", None, coeffs,
                                  line_strs, sing_strs, ext_degs, notes)
        notes.append("singular cubic without rational components and "
                     "without a fixed singularity: structure not certified")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    notes.append("unrecognized component structure")
    return GeometryReport("Unresolved", None, coeffs, line_strs,
                          sing_strs, ext_degs, notes)


# --------------------------------------------------------------------------
# rational field route
# --------------------------------------------------------------------------
#
# Over the rationals the factorization and elimination work is delegated to
# sympy; everything it certifies (irreducible factors, Groebner bases over Q)
# is exact.  Shapes whose singular data would need deeper extension-field
# work than degree 3 are reported as Unresolved rather than guessed.

def _sympy_setup(cubic):
    import sympy
    xs = sympy.symbols("s0 s1 s2")
    expr = sympy.Integer(0)
    for (i, j, k), v in cubic.items():
        expr += sympy.Rational(v) * xs[0] ** i * xs[1] ** j * xs[2] ** k
    return sympy, xs, expr


def _sympy_graph_fixed(sympy, left, coords, minpoly, t, field):
    """Graph-fixedness of a point with coordinates in Q[t]/(minpoly)."""
    for i in range(3):
        total = sympy.Integer(0)
        for b in range(3):
            for a in range(3):
                c = sympy.Rational(Fraction(left[i, b, a]))
                if c:
                    total += c * coords[a] * coords[b]
        if sympy.rem(sympy.expand(total), minpoly, t) != 0:
            return False
    return True


def _line_from_factor(sympy, fac, xs, field):
    vals = [fac.coeff(v) for v in xs]
    fracs = [Fraction(str(sympy.nsimplify(c))) if c else Fraction(0)
             for c in vals]
    return normalize_point(tuple(field.scalar(f) for f in fracs), field)


def _restriction_quadratic(sympy, expr, xs, s0, s1, t):
    subs = {xs[i]: Fraction(s0[i]) + t * Fraction(s1[i]) for i in range(3)}
    return sympy.Poly(sympy.expand(expr.subs(subs)), t)


def _classify_rational(algebra, cubic, coeffs):
    field = algebra.field
    left, _ = relation_tensors(algebra)
    sympy, xs, expr = _sympy_setup(cubic)
    t = sympy.symbols("t")
    notes = []

    _, factors = sympy.factor_list(sympy.Poly(expr, *xs))
    lines = []
    higher = []
    for fac, mult in factors:
        fp = sympy.Poly(fac, *xs)
        if fp.total_degree() == 1:
            lines.append((_line_from_factor(sympy, fac.as_expr(), xs, field),
                          mult))
        else:
            higher.append((fp, mult))

    line_strs = [_fmt_point(l) for l, _ in lines]
    for line, mult in lines:
        if mult >= 2:
            return GeometryReport(
                "Unstable", {"type": "repeated_line", "line": _fmt_point(line)},
                coeffs, line_strs, [], [], notes)

    # --- singular data, by component shape -------------------------------
    rational_sing = []
    extension_orbits = []   # (coords exprs in t, minpoly poly in t)
    complete = True

    if len(lines) == 3:
        for (l1, _), (l2, _) in itertools.combinations(lines, 2):
            rational_sing.append(normalize_point(_cross(l1, l2, field), field))
        rational_sing = list(dict.fromkeys(rational_sing))
    elif len(lines) == 1 and higher:
        quad = higher[0][0].as_expr()
        s0, s1 = _line_points(lines[0][0], field)
        restr = _restriction_quadratic(sympy, quad, xs, s0, s1, t)
        pieces = sympy.factor_list(restr)[1]
        for fac, _m in pieces:
            fp = sympy.Poly(fac, t)
            if fp.degree() == 1:
                root = sympy.Rational(-fp.nth(0), fp.nth(1))
                pt = tuple(field.scalar(Fraction(s0[i]) + Fraction(root)
                                        * Fraction(s1[i])) for i in range(3))
                rational_sing.append(normalize_point(pt, field))
            elif fp.degree() == 2:
                coords = tuple(sympy.Rational(Fraction(s0[i]))
                               + t * sympy.Rational(Fraction(s1[i]))
                               for i in range(3))
                extension_orbits.append((coords, fp.monic().as_expr()))
            else:
                complete = False
        if restr.degree() < 2:
            # line meets the conic at infinity of the parametrization
            rational_sing.append(normalize_point(s1, field))
        rational_sing = list(dict.fromkeys(rational_sing))
        # a degenerate (conjugate-pair) quadratic also has a rational vertex
        qmat = conic_matrix({m: field.scalar(Fraction(str(c)))
                             for m, c in sympy.Poly(quad, *xs).terms()},
                            field)
        if conic_rank(qmat, field) == 2:
            vertex = conic_kernel_point(qmat, field)
            if vertex is not None:
                rational_sing.append(normalize_point(vertex, field))
                rational_sing = list(dict.fromkeys(rational_sing))
    elif not lines and higher:
        got = _rational_cubic_singulars(sympy, expr, xs, t, field)
        rational_sing, extension_orbits, complete = got
    else:
        complete = False

    sing_strs = [_fmt_point(pt) for pt in rational_sing]
    ext_degs = [sympy.Poly(mp, t).degree() for _, mp in extension_orbits]

    # --- destabilizers ----------------------------------------------------
    for pt in rational_sing:
        if graph_fixed(left, pt, field):
            return GeometryReport(
                "Unstable",
                {"type": "fixed_singular_point", "point": _fmt_point(pt)},
                coeffs, line_strs, sing_strs, ext_degs, notes)
    for coords, minpoly in extension_orbits:
        if _sympy_graph_fixed(sympy, left, coords, minpoly, t, field):
            return GeometryReport(
                "Unstable",
                {"type": "fixed_singular_orbit", "minpoly": str(minpoly)},
                coeffs, line_strs, sing_strs, ext_degs, notes)

    undetermined = False
    for line, _ in lines:
        inv = line_invariant(left, cubic, line, field)
        if inv is True:
            return GeometryReport(
                "Unstable", {"type": "invariant_line", "line": _fmt_point(line)},
                coeffs, line_strs, sing_strs, ext_degs, notes)
        if inv is None:
            undetermined = True
            notes.append("line invariance undetermined by sampling")

    if undetermined or not complete:
        if not complete:
            notes.append("singular locus analysis incomplete")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    # --- shapes ------------------------------------------------------------
    if not rational_sing and not extension_orbits:
        if lines:
            notes.append("smooth but reducible: impossible, giving up")
            return GeometryReport("Unresolved", None, coeffs, line_strs,
                                  sing_strs, ext_degs, notes)
        return GeometryReport("StableSmooth", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    if len(lines) == 3:
        if len(rational_sing) == 3:
            return GeometryReport("StableTriangleCyclic", None, coeffs,
                                  line_strs, sing_strs, ext_degs, notes)
        notes.append("three concurrent lines with unfixed center")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    if len(lines) == 1 and higher:
        qmat = conic_matrix({m: field.scalar(Fraction(str(c)))
                             for m, c in higher[0][0].terms()}, field)
        if conic_rank(qmat, field) == 3:
            if len(rational_sing) + len(extension_orbits) >= 1 and all(
                    sympy.Poly(mp, t).degree() == 2
                    for _, mp in extension_orbits):
                tangent = (len(rational_sing) == 1
                           and not extension_orbits)
                if not tangent:
                    return GeometryReport("Exceptional", None, coeffs,
                                          line_strs, sing_strs, ext_degs,
                                          notes)
            notes.append("tangential line/conic contact with unfixed "
                         "tangency point")
            return GeometryReport("Unresolved", None, coeffs, line_strs,
                                  sing_strs, ext_degs, notes)
        notes.append("rational line beside a conjugate line pair, none "
                     "invariant: inconsistent sampling")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    if not lines:
        if (not rational_sing and len(extension_orbits) == 1
                and ext_degs == [3]):
            return GeometryReport("StableTriangleCyclic", None, coeffs,
                                  line_strs, sing_strs, ext_degs, notes)
        notes.append("singular cubic without rational components and "
                     "without a fixed singularity: structure not certified")
        return GeometryReport("Unresolved", None, coeffs, line_strs,
                              sing_strs, ext_degs, notes)

    notes.append("unrecognized component structure")
    return GeometryReport("Unresolved", None, coeffs, line_strs,
                          sing_strs, ext_degs, notes)


def _rational_cubic_singulars(sympy, expr, xs, t, field):
    """Singular points of an irreducible rational cubic, chart by chart."""
    rational = []
    orbits = []
    complete = True
    partials = [sympy.diff(expr, v) for v in xs]

    # chart s2 = 1
    polys = [p.subs(xs[2], 1) for p in partials]
    gb = sympy.groebner(polys, xs[0], xs[1], order="lex")
    exprs = list(gb.exprs)
    if exprs != [sympy.Integer(1)]:
        elim = [e for e in exprs if not e.has(xs[0])]
        in_x = [e for e in exprs if e.has(xs[0])]
        if not elim:
            complete = False
        else:
            ely = sympy.Poly(elim[0], xs[1])
            for fac, _m in sympy.factor_list(ely)[1]:
                fp = sympy.Poly(fac, xs[1])
                if fp.degree() == 1:
                    y0 = sympy.Rational(-fp.nth(0), fp.nth(1))
                    slices = [sympy.Poly(e.subs(xs[1], y0), xs[0])
                              for e in in_x]
                    g = slices[0]
                    for s in slices[1:]:
                        g = sympy.gcd(g, s)
                    for sub, _sm in sympy.factor_list(g)[1]:
                        sp = sympy.Poly(sub, xs[0])
                        if sp.degree() == 1:
                            x0 = sympy.Rational(-sp.nth(0), sp.nth(1))
                            pt = (field.scalar(Fraction(x0)),
                                  field.scalar(Fraction(y0)), field.one)
                            rational.append(normalize_point(pt, field))
                        elif sp.degree() >= 1:
                            coords = (t, sympy.Rational(Fraction(y0)),
                                      sympy.Integer(1))
                            orbits.append((coords, sp.monic().as_expr()))
                elif fp.degree() >= 2:
                    solved = None
                    for e in in_x:
                        pe = sympy.Poly(e, xs[0])
                        if pe.degree() == 1:
                            a = pe.nth(1)
                            b = pe.nth(0)
                            ainv = sympy.invert(sympy.Poly(a, xs[1]),
                                                sympy.Poly(fac, xs[1])) \
                                if sympy.rem(a, fac, xs[1]) != 0 else None
                            if ainv is not None:
                                xr = sympy.rem(sympy.expand(
                                    -b * ainv.as_expr()), fac, xs[1])
                                solved = xr
                                break
                    if solved is None:
                        complete = False
                    else:
                        coords = (solved.subs(xs[1], t), t, sympy.Integer(1))
                        orbits.append((coords, fac.subs(xs[1], t)))
    # chart s2 = 0, s1 = 1
    polys = [sympy.Poly(p.subs({xs[2]: 0, xs[1]: 1}), xs[0])
             for p in partials]
    g = polys[0]
    for s in polys[1:]:
        g = sympy.gcd(g, s)
    if g.degree() >= 1:
        for fac, _m in sympy.factor_list(g)[1]:
            fp = sympy.Poly(fac, xs[0])
            if fp.degree() == 1:
                x0 = sympy.Rational(-fp.nth(0), fp.nth(1))
                pt = (field.scalar(Fraction(x0)), field.one, field.zero)
                rational.append(normalize_point(pt, field))
            else:
                orbits.append(((t, sympy.Integer(1), sympy.Integer(0)),
                               fp.monic().as_expr()))
    # the point (1 : 0 : 0)
    if all(p.subs({xs[0]: 1, xs[1]: 0, xs[2]: 0}) == 0 for p in partials):
        rational.append((field.one, field.zero, field.zero))

    rational = list(dict.fromkeys(rational))
    return rational, orbits, complete

"""Cross-checks between the closed-form estimates and the engine.

Every inequality the estimate registry promises is exercised here
against honest weight tables computed by the linear-algebra layer on
catalog fixtures: curve-side tables dominate the per-degree bounds,
algebra-side tables dominate the bootstrap recursion, and the chain
level reaches the slope the registry demands.  Ladder claims land
inside the chain levels they point at, the word-span bounds hold in
the curve quotient, and the section-count formulas reproduce measured
pattern spans on the triangle fixture — exactly, not just one-sidedly,
where the tables below say so.
"""

import random

import pytest

from ncstab import estimates as est
from ncstab.catalog import load_fixture, swap_invariant_algebra
from ncstab.central import chain_level, normal_element, plane_through_point
from ncstab.fields import GF
from ncstab.linalg import Subspace
from ncstab.pointscheme import (check_semistandard, classify, graph_fixed,
                                relation_tensors, tri_eval)
from ncstab.testconfig import chain, flag, weight_table

DEGREES = range(1, 6)


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def word_span(algebra, pieces):
    """Span of all orderings of a product of degree-one subspaces with
    multiplicities, by dynamic programming over used-counts."""
    done = {tuple(0 for _ in pieces): None}

    def rec(used):
        if used in done:
            return done[used]
        deg = sum(used)
        acc = None
        for i, (piece, _) in enumerate(pieces):
            if used[i] == 0:
                continue
            prev = tuple(u - (1 if j == i else 0) for j, u in enumerate(used))
            left = rec(prev)
            out = piece if left is None \
                else algebra.multiply(left, deg - 1, piece, 1)
            acc = out if acc is None else acc.add(out)
        done[used] = acc
        return acc

    return rec(tuple(count for _, count in pieces))


def pattern_product(algebra, word):
    """Product of degree-one subspaces in the given order."""
    acc, deg = None, 0
    for piece in word:
        if acc is None:
            acc, deg = piece, 1
        else:
            acc = algebra.multiply(acc, deg, piece, 1)
            deg += 1
    return acc


def dim_in_curve_quotient(ne, space, n):
    image = ne.image(n)
    return space.add(image).dim - image.dim


def line_through(field, row):
    return Subspace.from_rows(field, 3, field.array([list(row)]))


def run_case(algebra, ne, case_name, build, l, m):
    """Compute the honest tables for one flag and check every registry
    promise; return (chain level, curve-side weights) for spot freezing."""
    case = est.case_named(case_name)
    assert case.applies(l, m), (case_name, l, m)
    filt = build(l, m).filtration()
    curve = weight_table(algebra, filt, DEGREES, modulo=ne.image)
    whole = weight_table(algebra, filt, DEGREES)
    level = chain_level(ne, filt)
    curve_w = {row.degree: row.weight for row in curve.rows}
    whole_w = {row.degree: row.weight for row in whole.rows}
    ambient = {k: est.ambient_dimension(k) for k in range(0, 6)}
    assert level >= case.q * l + case.s * m, (case_name, l, m, level)
    for n in DEGREES:
        bound = (l * (case.weight_pencil(n) if case.weight_pencil else 0)
                 + m * (case.weight_line(n) if case.weight_line else 0))
        assert curve_w[n] >= bound, (case_name, l, m, n, curve_w[n], bound)
        boot = est.bootstrap_bound(curve_w, level, ambient, n)
        assert whole_w[n] >= boot, (case_name, l, m, n, whole_w[n], boot)
    return level, [curve_w[n] for n in DEGREES]


# --------------------------------------------------------------------------
# fixtures
# --------------------------------------------------------------------------

@pytest.fixture(scope="module")
def smooth():
    algebra, _ = load_fixture("sklyanin-smooth-f10007")
    return algebra, normal_element(algebra)


@pytest.fixture(scope="module")
def triangle():
    algebra, _ = load_fixture("sklyanin-triangle-f13")
    return algebra, normal_element(algebra)


@pytest.fixture(scope="module")
def fixed_point_smooth():
    """A smooth stable algebra over GF(7) whose automorphism fixes a
    rational point of the divisor, found by seeded search in the
    swap-invariant family."""
    field = GF(7)
    points = [(1, a, b) for a in range(7) for b in range(7)] \
        + [(0, 1, b) for b in range(7)] + [(0, 0, 1)]
    rng = random.Random(20260819)
    for _ in range(50):
        try:
            candidate = swap_invariant_algebra(field, rng, 2)
            report = classify(candidate)
        except Exception:
            continue
        if report.verdict != "StableSmooth":
            continue
        cubic = check_semistandard(candidate)
        left, _ = relation_tensors(candidate)
        fixed = [p for p in points
                 if tri_eval(cubic, tuple(field.scalar(v) for v in p),
                             field) == 0
                 and graph_fixed(left, tuple(field.scalar(v) for v in p),
                                 field)]
        if fixed:
            # the seed pins the search; freeze what it finds
            assert fixed == [(1, 1, 2), (0, 0, 1)]
            return candidate, normal_element(candidate), fixed[0]
    raise AssertionError("seeded search found no fixed-point algebra")


# --------------------------------------------------------------------------
# weight tables honour the registry, fixture by fixture
# --------------------------------------------------------------------------

def test_point_off_divisor_weights(smooth):
    algebra, ne = smooth
    field = algebra.field
    plane = plane_through_point(
        field, (field.scalar(1), field.scalar(0), field.scalar(0)))
    line = line_through(field, plane.basis[0])

    def build(l, m):
        return flag(plane if l else None, l, line if m else None, m)

    level, curve_w = run_case(algebra, ne, "point-off-divisor", build, 1, 0)
    # a point off the divisor makes the chain level exactly twice the
    # plane repetitions
    assert level == 2
    assert curve_w == [2, 10, 26, 48, 75]
    level, _ = run_case(algebra, ne, "point-off-divisor", build, 2, 1)
    assert level == 5


def test_point_off_divisor_bootstrap_spots(smooth):
    algebra, ne = smooth
    field = algebra.field
    plane = plane_through_point(
        field, (field.scalar(1), field.scalar(0), field.scalar(0)))
    filt = flag(plane, 1, None, 0).filtration()
    curve = weight_table(algebra, filt, DEGREES, modulo=ne.image)
    whole = weight_table(algebra, filt, DEGREES)
    curve_w = {row.degree: row.weight for row in curve.rows}
    whole_w = [row.weight for row in whole.rows]
    ambient = {k: est.ambient_dimension(k) for k in range(0, 6)}
    boot = [est.bootstrap_bound(curve_w, 2, ambient, n) for n in DEGREES]
    assert boot == [2, 10, 28, 56, 97]
    assert whole_w == [2, 10, 28, 60, 105]


def test_point_generic_weights(smooth):
    algebra, ne = smooth
    field = algebra.field
    point = (field.scalar(1), field.scalar(0), field.scalar(10006))
    plane = plane_through_point(field, point)
    line = line_through(field, plane.basis[0])

    def build(l, m):
        return flag(plane if l else None, l, line if m else None, m)

    level, curve_w = run_case(
        algebra, ne, "point-generic-pencil-heavy", build, 1, 0)
    assert level == 3
    assert curve_w == [2, 10, 24, 44, 70]
    for l, m, expect in ((1, 1, 4), (2, 1, 7)):
        level, _ = run_case(
            algebra, ne, "point-generic-pencil-heavy", build, l, m)
        assert level == expect

    level, curve_w = run_case(
        algebra, ne, "point-generic-line-heavy", build, 0, 1)
    assert level == 1
    assert curve_w == [1, 6, 17, 34, 57]
    level, _ = run_case(algebra, ne, "point-generic-line-heavy", build, 1, 2)
    assert level == 5


def test_point_at_node_weights(triangle):
    algebra, ne = triangle
    field = algebra.field
    node = tuple(field.scalar(v) for v in (1, 1, 1))
    plane = plane_through_point(field, node)
    # a line through the node transverse to both branches
    line = line_through(field, (1, 6, 6))
    assert plane.contains(line)
    for edge in ((1, 1, 1), (1, 3, 9), (1, 9, 3)):
        proportional = all(
            (line.basis[0][i] * edge[(i + 1) % 3]
             - line.basis[0][(i + 1) % 3] * edge[i]) % 13 == 0
            for i in range(3))
        assert not proportional, edge

    def build(l, m):
        return flag(plane, l, line if m else None, m)

    level, curve_w = run_case(algebra, ne, "point-at-node", build, 1, 0)
    # at a node the chain level is exactly three per plane repetition
    assert level == 3
    assert curve_w == [2, 10, 24, 42, 66]
    for l, m, expect in ((1, 1, 4), (2, 1, 7)):
        level, _ = run_case(algebra, ne, "point-at-node", build, l, m)
        assert level == expect


def test_line_component_weights(triangle):
    algebra, ne = triangle
    field = algebra.field
    edge = line_through(field, (1, 1, 1))
    any_plane = Subspace.from_rows(
        field, 3, field.array([[1, 1, 1], [0, 1, 0]]))

    def build_only(l, m):
        return flag(any_plane if l else None, l, edge, m)

    level, curve_w = run_case(
        algebra, ne, "line-component-only", build_only, 0, 1)
    # a repeated component contributes three chain levels each
    assert level == 3
    assert curve_w == [1, 6, 15, 26, 41]
    # the lower bound is met with equality through degree three
    assert curve_w[:3] == [est.case_named("line-component-only")
                           .weight_line(n) for n in (1, 2, 3)]
    level, _ = run_case(algebra, ne, "line-component-only", build_only, 0, 2)
    assert level == 6

    point = tuple(field.scalar(v) for v in (0, 1, 12))
    mixed_plane = plane_through_point(field, point)
    assert mixed_plane.contains(edge)

    def build_mixed(l, m):
        return flag(mixed_plane, l, edge, m)

    for l, m, expect in ((1, 1, 6), (2, 1, 9), (1, 2, 9)):
        level, _ = run_case(
            algebra, ne, "line-component-mixed", build_mixed, l, m)
        assert level == expect


def test_point_smooth_fixed_weights(fixed_point_smooth):
    algebra, ne, point = fixed_point_smooth
    field = algebra.field
    plane = plane_through_point(
        field, tuple(field.scalar(v) for v in point))
    line = line_through(field, plane.basis[0])

    def build(l, m):
        return flag(plane, l, line if m else None, m)

    level, curve_w = run_case(algebra, ne, "point-smooth-fixed", build, 1, 0)
    assert level == 3
    # the fixed-point bound is sharp: the measured weights equal it
    assert curve_w == [2, 9, 21, 38, 60]
    assert curve_w == [est.case_named("point-smooth-fixed").weight_pencil(n)
                       for n in DEGREES]
    for l, m, expect in ((1, 1, 5), (2, 2, 10)):
        level, _ = run_case(algebra, ne, "point-smooth-fixed", build, l, m)
        assert level == expect


# --------------------------------------------------------------------------
# ladder claims land inside the engine's chain levels
# --------------------------------------------------------------------------

def test_ladder_claims_are_inside_chain_levels(smooth):
    algebra, ne = smooth
    field = algebra.field
    free = algebra.graded(1).full_subspace()
    point = (field.scalar(1), field.scalar(0), field.scalar(10006))
    plane = plane_through_point(field, point)
    line = line_through(field, plane.basis[0])
    for l, m in ((1, 0), (1, 1), (2, 1), (0, 1), (2, 0), (1, 2)):
        filt = flag(plane if l else None, l,
                    line if m else None, m).filtration()
        for n in range(1, 5):
            levels = chain(algebra, filt, n)
            generators = []
            if l >= 1:
                generators.append(est.plane_then_line_claims(l, m, n))
            if l >= 1 and m >= 1:
                generators.append(est.interleaved_claims(l, m, n))
            if m >= 1:
                generators.append(est.line_first_claims(l, m, n))
            for claims in generators:
                for k, (n_free, a, b) in claims:
                    pieces = []
                    if n_free:
                        pieces.append((free, n_free))
                    if a:
                        pieces.append((plane, a))
                    if b:
                        pieces.append((line, b))
                    span = word_span(algebra, pieces)
                    if k < len(levels):
                        level = levels[k]
                    else:
                        level = Subspace.zero(field, algebra.graded(n).dim)
                    assert level.contains(span), (l, m, n, k, n_free, a, b)


# --------------------------------------------------------------------------
# word-span bounds hold in the curve quotient
# --------------------------------------------------------------------------

def test_span_bounds_on_generic_data(smooth):
    algebra, ne = smooth
    field = algebra.field
    free = algebra.graded(1).full_subspace()
    point = (field.scalar(1), field.scalar(0), field.scalar(10006))
    plane = plane_through_point(field, point)
    line = line_through(field, plane.basis[0])
    for n in range(1, 5):
        for b in range(0, n + 1):
            pieces = ([(free, n - b)] if n > b else []) \
                + ([(line, b)] if b else [])
            got = dim_in_curve_quotient(ne, word_span(algebra, pieces), n)
            assert got >= est.span_dim_generic_line(n, b), (n, b, got)
        for b in range(1, n + 1):
            pieces = ([(free, n - b)] if n > b else []) + [(plane, 1)] \
                + ([(line, b - 1)] if b > 1 else [])
            got = dim_in_curve_quotient(ne, word_span(algebra, pieces), n)
            assert got >= est.span_dim_line_and_plane(n, b), (n, b, got)
        for a in range(0, n):
            for b in range(0, n - a):
                pieces = [(free, n - a - b)] \
                    + ([(plane, a)] if a else []) \
                    + ([(line, b)] if b else [])
                got = dim_in_curve_quotient(
                    ne, word_span(algebra, pieces), n)
                assert got >= est.word_dim_bound(n, a, b), (n, a, b, got)


def test_span_bounds_on_fixed_point_data(fixed_point_smooth):
    algebra, ne, point = fixed_point_smooth
    field = algebra.field
    plane = plane_through_point(
        field, tuple(field.scalar(v) for v in point))
    line = line_through(field, plane.basis[0])
    for n in range(1, 5):
        for b in range(0, n + 1):
            pieces = ([(plane, n - b)] if n > b else []) \
                + ([(line, b)] if b else [])
            got = dim_in_curve_quotient(ne, word_span(algebra, pieces), n)
            assert got >= est.span_dim_fixed_point_plane(n, b), (n, b, got)


# --------------------------------------------------------------------------
# section counts match measured pattern spans on the triangle
# --------------------------------------------------------------------------

def test_triangle_sections_match_pattern_spans(triangle):
    algebra, ne = triangle
    field = algebra.field
    free = algebra.graded(1).full_subspace()
    edge = line_through(field, (1, 1, 1))
    for n, beta in ((3, 1), (4, 1), (6, 2)):
        patterns = []
        for rotation in range(3):
            word = []
            for _ in range(beta):
                block = [free, free, free]
                block[rotation] = edge
                word += block
            word += [free] * (n - 3 * beta)
            patterns.append(pattern_product(algebra, word))
        single = est.triangle_sections((n, n, n), edge_orders=(beta, 0, 0))
        for pattern in patterns:
            assert dim_in_curve_quotient(ne, pattern, n) == single
        paired = est.triangle_sections((n, n, n), node_orders=(beta, 0, 0))
        for i, j in ((0, 1), (1, 2), (0, 2)):
            got = dim_in_curve_quotient(ne, patterns[i].add(patterns[j]), n)
            assert got == paired
        everything = patterns[0].add(patterns[1]).add(patterns[2])
        assert dim_in_curve_quotient(ne, everything, n) \
            == est.triangle_sections((n, n, n))

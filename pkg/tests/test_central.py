"""The degree-3 normal element: construction, certificates, memberships.

The vanishing-tensor space is found by two independent routes — point
sampling and the polynomial identity — and the tests cross-check them as
whole subspaces wherever both apply.  Dimension facts are frozen from the
geometry: the tensors vanishing on the graph form an 18-dimensional space
(27 minus the nine sections the graph curve supports), the image of the
normal element in degree n has dimension (n-1)(n-2)/2, and the quotient
keeps exactly 3n dimensions per degree.
"""

import random

import pytest

from ncstab import central as ce
from ncstab import testconfig as tc
from ncstab.catalog import load_fixture, quantum_plane, sklyanin
from ncstab.fields import GF, QQ
from ncstab.linalg import Subspace
from ncstab.pointscheme import (check_semistandard, graph_fixed,
                                relation_tensors, tri_eval)

F = GF(10007)
F13 = GF(13)


@pytest.fixture(scope="module")
def smooth():
    return sklyanin(1, 2, 3, F)


@pytest.fixture(scope="module")
def smooth_ne(smooth):
    return ce.normal_element(smooth)


@pytest.fixture(scope="module")
def triangle():
    return sklyanin(1, 2, 5, F13)


@pytest.fixture(scope="module")
def triangle_ne(triangle):
    return ce.normal_element(triangle)


@pytest.fixture(scope="module")
def qplane():
    return quantum_plane(2, 3, 5, F)


@pytest.fixture(scope="module")
def qplane_ne(qplane):
    return ce.normal_element(qplane)


# --------------------------------------------------------------------------
# the two routes
# --------------------------------------------------------------------------

def test_routes_agree_on_the_smooth_divisor(smooth):
    sampled = ce.vanishing_tensors_sampled(smooth)
    symbolic = ce.vanishing_tensors_symbolic(smooth)
    assert sampled.dim == 18
    assert symbolic.dim == 18
    assert sampled == symbolic


def test_routes_agree_on_the_cyclic_triangle(triangle):
    sampled = ce.vanishing_tensors_sampled(triangle)
    symbolic = ce.vanishing_tensors_symbolic(triangle)
    assert sampled.dim == 18
    assert symbolic.dim == 18
    assert sampled == symbolic


def test_sampling_fails_when_the_twist_fixes_components(qplane):
    # every side of the quantum plane's triangle maps to itself, so point
    # data cannot separate the graph's ideal from larger ones
    with pytest.raises(ce.RankDeficientSampling):
        ce.vanishing_tensors_sampled(qplane)
    # explicit method choice propagates the failure
    with pytest.raises(ce.RankDeficientSampling):
        ce.normal_element(qplane, method="sampling")
    # automatic selection falls back to the identity route
    assert ce.normal_element(qplane).commutes_with_generators()


def test_degenerate_family_member_is_refused():
    bad = sklyanin(1, 1, 1, F13)
    assert bad.hilbert(3) == [1, 3, 6, 12]  # not a regular member
    with pytest.raises(ValueError):
        ce.normal_element(bad)


def test_zero_pencil_is_refused():
    from ncstab.catalog import commutators
    with pytest.raises(ValueError):
        ce.vanishing_tensors_symbolic(commutators(QQ))


# --------------------------------------------------------------------------
# the element and its certificates
# --------------------------------------------------------------------------

def test_quantum_plane_element_is_the_coordinate_product(qplane, qplane_ne):
    # independent oracle: the class of the word x y z
    piece = qplane.graded(3)
    word = F.zeros((1, 27))
    word[0, 0 * 9 + 1 * 3 + 2] = F.one
    xyz = piece.project_rows(word)[0]
    span = Subspace.from_rows(F, piece.dim, F.array([xyz]))
    assert span.contains_vector(qplane_ne.quotient_vector)


def test_normality(smooth_ne, triangle_ne, qplane_ne):
    assert smooth_ne.commutes_with_generators()
    assert triangle_ne.commutes_with_generators()
    assert qplane_ne.commutes_with_generators()


def test_normality_over_the_rationals():
    ne = ce.normal_element(sklyanin(1, 2, 3, QQ))
    assert ne.commutes_with_generators()
    assert ne.quotient_dimension_certificate(range(1, 6))


def test_image_dimensions(smooth_ne):
    for n in range(3, 7):
        assert smooth_ne.image(n).dim == (n - 1) * (n - 2) // 2
    assert smooth_ne.image_dimension_certificate(range(3, 7))
    assert smooth_ne.image(2).dim == 0  # below the element's degree


def test_quotient_dimensions_shrink_to_three_per_degree(
        smooth, smooth_ne, triangle, triangle_ne, qplane, qplane_ne):
    for algebra, ne in ((smooth, smooth_ne), (triangle, triangle_ne),
                        (qplane, qplane_ne)):
        for n in range(1, 7):
            cut = ne.image(n).dim
            assert algebra.graded(n).dim - cut == 3 * n
        assert ne.quotient_dimension_certificate(range(1, 7))


def test_divisor_points_lie_on_the_divisor(smooth):
    cubic = check_semistandard(smooth)
    pts = ce.divisor_points(smooth, 12)
    assert len(pts) == 12
    assert len({tuple(int(v) for v in p) for p in pts}) == 12
    for p in pts:
        assert tri_eval(cubic, p, F) == F.zero


def test_divisor_points_need_a_prime_field():
    with pytest.raises(ValueError):
        ce.divisor_points(sklyanin(1, 2, 3, QQ), 4)


def test_plane_point_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        pt = ce.normalize_point(
            (F.scalar(rng.randrange(1, 10007)),
             F.scalar(rng.randrange(10007)),
             F.scalar(rng.randrange(10007))), F)
        plane = ce.plane_through_point(F, pt)
        assert plane.dim == 2
        assert ce.point_of_plane(plane) == pt


# --------------------------------------------------------------------------
# membership certificates
# --------------------------------------------------------------------------

def test_membership_for_points_on_the_divisor(smooth, smooth_ne):
    V1 = smooth.graded(1).full_subspace()
    for pt in ce.divisor_points(smooth, 6):
        W = ce.plane_through_point(F, pt)
        wvv = smooth.word_space([W, V1, V1])
        assert wvv.dim == 9  # drops from 10 exactly on the divisor
        assert ce.quotient_membership(smooth_ne, wvv)
        assert ce.quotient_membership(smooth_ne,
                                      smooth.word_space([W, W, W]))


def test_membership_fails_off_the_divisor(smooth, smooth_ne):
    cubic = check_semistandard(smooth)
    rng = random.Random(11)
    checked = 0
    while checked < 6:
        pt = (F.one, F.scalar(rng.randrange(10007)),
              F.scalar(rng.randrange(10007)))
        if tri_eval(cubic, pt, F) == F.zero:
            continue
        W = ce.plane_through_point(F, pt)
        assert smooth.word_space([W, smooth.graded(1).full_subspace(),
                                  smooth.graded(1).full_subspace()]).dim == 10
        assert not ce.quotient_membership(smooth_ne,
                                          smooth.word_space([W, W, W]))
        checked += 1


def test_membership_for_general_position_planes(smooth, smooth_ne):
    # twenty seeded 2-dimensional subspaces, no positional assumption
    V1 = smooth.graded(1).full_subspace()
    rng = random.Random(2026)
    planes = 0
    while planes < 20:
        rows = F.array([[rng.randrange(10007) for _ in range(3)]
                        for _ in range(2)])
        W = Subspace.from_rows(F, 3, rows)
        if W.dim != 2:
            continue
        space = smooth.symmetrized_word_space([W, W, V1])
        assert ce.quotient_membership(smooth_ne, space)
        planes += 1


def test_membership_at_moved_triangle_vertices(triangle, triangle_ne):
    left, _ = relation_tensors(triangle)
    _, doc = load_fixture("sklyanin-triangle-f13")
    for vertex in doc["vertices"]:
        pt = tuple(F13.scalar(v) for v in vertex)
        assert not graph_fixed(left, pt, F13)  # the twist cycles the sides
        W = ce.plane_through_point(F13, pt)
        www = triangle.word_space([W, W, W])
        assert www.dim == 7
        assert ce.quotient_membership(triangle_ne, www)


def test_membership_at_fixed_singular_vertices(qplane, qplane_ne):
    left, _ = relation_tensors(qplane)
    V1 = qplane.graded(1).full_subspace()
    for vertex in ((0, 0, 1), (0, 1, 0), (1, 0, 0)):
        pt = tuple(F.scalar(v) for v in vertex)
        assert graph_fixed(left, pt, F)
        W = ce.plane_through_point(F, pt)
        # the element never reaches the triple product at a fixed vertex...
        assert not ce.quotient_membership(qplane_ne,
                                          qplane.word_space([W, W, W]))
        # ...but it does lie in every two-letter refinement
        for word in ([W, W, V1], [W, V1, W], [V1, W, W],
                     [W, V1, V1], [V1, V1, W]):
            assert ce.quotient_membership(qplane_ne,
                                          qplane.word_space(word))


def test_membership_at_a_smooth_fixed_point():
    algebra, doc = load_fixture("quantum-plane-fixed-line-f10007")
    ne = ce.normal_element(algebra)
    left, _ = relation_tensors(algebra)
    pt = tuple(F.scalar(v) for v in doc["smooth_fixed_point"])
    assert graph_fixed(left, pt, F)
    singular = {tuple(v) for v in doc["vertices"]}
    assert tuple(int(v) for v in pt) not in singular
    W = ce.plane_through_point(F, pt)
    V1 = algebra.graded(1).full_subspace()
    assert ce.quotient_membership(ne, algebra.word_space([W, V1, W]))


def test_membership_for_invariant_lines(qplane, qplane_ne):
    V1 = qplane.graded(1).full_subspace()
    for covector in ([1, 0, 0], [0, 1, 0], [0, 0, 1]):
        U = Subspace.from_rows(F, 3, F.array([covector]))
        sym = qplane.symmetrized_word_space([U, V1, V1])
        assert ce.quotient_membership(qplane_ne, sym)
        # the stronger one-sided versions hold as well
        assert ce.quotient_membership(qplane_ne,
                                      qplane.word_space([U, V1, V1]))
        assert ce.quotient_membership(qplane_ne,
                                      qplane.word_space([V1, U, V1]))


# --------------------------------------------------------------------------
# filtration levels feeding the degree-lowering bound
# --------------------------------------------------------------------------

def test_chain_level_for_divisor_planes(smooth, smooth_ne):
    pt = ce.divisor_points(smooth, 1)[0]
    W = ce.plane_through_point(F, pt)
    for weight in (1, 2):
        filt = tc.flag(W.basis, weight, None, 0, F).filtration()
        assert ce.chain_level(smooth_ne, filt) >= 2 * weight


def test_chain_level_at_fixed_vertices_is_two_thirds(qplane, qplane_ne):
    W = ce.plane_through_point(F, (F.zero, F.zero, F.one))
    for weight in (1, 2):
        filt = tc.flag(W.basis, weight, None, 0, F).filtration()
        assert ce.chain_level(qplane_ne, filt) == 2 * weight


def test_chain_level_at_moved_vertices_is_full(triangle, triangle_ne):
    W = ce.plane_through_point(F13, (F13.one, F13.one, F13.one))
    for weight in (1, 2):
        filt = tc.flag(W.basis, weight, None, 0, F13).filtration()
        assert ce.chain_level(triangle_ne, filt) == 3 * weight

"""Graded quotient pieces: ideal recursion vs a direct spanning oracle."""

import random

import numpy as np
import pytest

from ncstab.algebra import (DegenerateRelationsError, QuadraticAlgebra,
                            ResourceLimitError, index_of_word, word_of_index)
from ncstab.fields import GF, QQ
from ncstab.linalg import Subspace

F = GF(10007)


def sklyanin(field, a, b, c, **kw):
    rel = []
    for i in range(3):
        coeff = [[0] * 3 for _ in range(3)]
        coeff[(i + 1) % 3][(i + 2) % 3] = a
        coeff[(i + 2) % 3][(i + 1) % 3] = b
        coeff[i][i] = c
        rel.append(coeff)
    return QuadraticAlgebra(field, rel, **kw)


def commutators(field):
    rel = []
    for (i, j) in [(1, 2), (2, 0), (0, 1)]:
        coeff = [[0] * 3 for _ in range(3)]
        coeff[i][j] = 1
        coeff[j][i] = -1
        rel.append(coeff)
    return QuadraticAlgebra(field, rel)


def ideal_degree_oracle(algebra, n):
    """Span of v_words * r * w_words over all positions -- no recursion."""
    rows = []
    rel = algebra.relations.basis  # 3 x 9, canonical
    for left in range(n - 1):
        right = n - 2 - left
        for lw in range(3 ** left):
            for rw in range(3 ** right):
                for r in rel:
                    row = algebra.field.zeros(3 ** n)
                    for pair in range(9):
                        idx = (lw * 9 + pair) * (3 ** right) + rw
                        row[idx] = r[pair]
                    rows.append(row)
    M = algebra.field.reduce(np.array(rows))
    return Subspace.from_rows(algebra.field, 3 ** n, M)


def test_word_index_roundtrip():
    for n in range(0, 5):
        for idx in range(3 ** n):
            w = word_of_index(idx, n)
            assert len(w) == n
            assert index_of_word(w) == idx


def test_relations_must_be_three_dimensional():
    rel = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    rel[0][0][1] = 1
    rel[1][0][1] = 2          # dependent on rel[0]
    rel[2][1][2] = 1
    with pytest.raises(DegenerateRelationsError):
        QuadraticAlgebra(F, rel)


def test_sklyanin_hilbert_series():
    A = sklyanin(F, 1, 2, 3)
    assert A.hilbert(6) == [1, 3, 6, 10, 15, 21, 28]
    assert A.is_hilbert_regular(6)


def test_commutators_hilbert_series_over_q():
    A = commutators(QQ)
    assert A.hilbert(5) == [1, 3, 6, 10, 15, 21]


def test_ideal_matches_direct_spanning_oracle():
    A = sklyanin(F, 1, 2, 3)
    for n in (2, 3, 4):
        assert A.graded(n).ideal == ideal_degree_oracle(A, n)
    assert ideal_degree_oracle(A, 4).dim == 66


def test_ideal_oracle_quantum_plane_over_q():
    rel = []
    for (i, j, r) in [(1, 2, 2), (2, 0, 3), (0, 1, 5)]:
        coeff = [[0] * 3 for _ in range(3)]
        coeff[i][j] = 1
        coeff[j][i] = -r
        rel.append(coeff)
    A = QuadraticAlgebra(QQ, rel)
    for n in (2, 3):
        assert A.graded(n).ideal == ideal_degree_oracle(A, n)
    assert A.hilbert(4) == [1, 3, 6, 10, 15]


def test_project_lift_roundtrip():
    A = sklyanin(F, 1, 2, 3)
    piece = A.graded(3)
    rng = random.Random(5)
    X = F.reduce(np.array([[rng.randrange(10007) for _ in range(27)]
                           for _ in range(4)], dtype=np.int64))
    coords = piece.project_rows(X)
    lifted = piece.lift_rows(coords)
    # lift is a section of project
    assert np.array_equal(piece.project_rows(lifted), coords)
    # X - lift(project(X)) lies in the ideal
    diff = F.reduce(X - lifted)
    for row in diff:
        assert piece.ideal.contains_vector(row)


def test_multiply_associative():
    A = sklyanin(F, 1, 2, 3)
    rng = random.Random(9)
    for _ in range(5):
        spaces = []
        for _ in range(3):
            row = [[rng.randrange(10007) for _ in range(3)]]
            spaces.append(Subspace.from_rows(F, 3, F.array(row)))
        X, Y, Z = spaces
        XY = A.multiply(X, 1, Y, 1)
        YZ = A.multiply(Y, 1, Z, 1)
        assert A.multiply(XY, 2, Z, 1) == A.multiply(X, 1, YZ, 2)


def test_multiply_degree_one_squares():
    # V * V = A_2 for any quadratic algebra with 3-dim relation space
    A = sklyanin(F, 1, 2, 3)
    V = Subspace.full(F, 3)
    assert A.multiply(V, 1, V, 1) == A.graded(2).full_subspace()


def coord_line(field, i):
    row = [[0, 0, 0]]
    row[0][i] = 1
    return Subspace.from_rows(field, 3, field.array(row))


def test_word_space_dimensions_commutative():
    A = commutators(QQ)
    x, y, z = (coord_line(QQ, i) for i in range(3))
    # in the polynomial ring xyz spans the same line as any rearrangement
    s1 = A.word_space([x, y, z])
    s2 = A.word_space([z, y, x])
    assert s1 == s2
    assert s1.dim == 1
    sym = A.symmetrized_word_space([x, y, z])
    assert sym == s1


def test_word_space_dimensions_quantum():
    A = sklyanin(F, 1, 2, 3)
    x, y = coord_line(F, 0), coord_line(F, 1)
    sym = A.symmetrized_word_space([x, x, y])
    assert 1 <= sym.dim <= 3


def test_limit_dim_guard():
    A = sklyanin(F, 1, 2, 3, limit_dim=27)
    A.graded(3)
    with pytest.raises(ResourceLimitError):
        A.graded(4)


def test_rational_default_limit_is_lower():
    A = commutators(QQ)
    with pytest.raises(ResourceLimitError):
        A.graded(6)

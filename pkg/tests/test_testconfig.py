"""Degree-one configurations: chain DP vs exhaustive enumeration."""

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from ncstab.algebra import QuadraticAlgebra
from ncstab.fields import GF, QQ
from ncstab.linalg import Subspace
from ncstab.testconfig import (Filtration, Flag, TrivialFiltrationError,
                               central_fiber_dims, chain, flag, flag_verdict,
                               random_flag, weight_table)

F = GF(10007)


def quantum_plane(field, r1, r2, r3):
    rel = []
    for (i, j, r) in [(1, 2, r1), (2, 0, r2), (0, 1, r3)]:
        coeff = [[0] * 3 for _ in range(3)]
        coeff[i][j] = 1
        coeff[j][i] = field.scalar(-1) * field.scalar(r) if field.p is None \
            else (-r) % field.p
        rel.append(coeff)
    return QuadraticAlgebra(field, rel)


def sklyanin(field, a, b, c):
    rel = []
    for i in range(3):
        coeff = [[0] * 3 for _ in range(3)]
        coeff[(i + 1) % 3][(i + 2) % 3] = a
        coeff[(i + 2) % 3][(i + 1) % 3] = b
        coeff[i][i] = c
        rel.append(coeff)
    return QuadraticAlgebra(field, rel)


def chain_oracle(algebra, filt, n):
    """Direct evaluation of the defining sum: for every composition
    (k_1, ..., k_n) with sum k, add the projected product of the level
    spaces.  Exponential in n; only for small cases."""
    depth = filt.depth
    piece = algebra.graded(n)
    members = []
    for k in range(n * depth + 1):
        acc = Subspace.zero(algebra.field, piece.dim)
        for combo in itertools.product(range(depth + 1), repeat=n):
            if sum(combo) != k:
                continue
            mat = filt.level(combo[0]).basis
            for ki in combo[1:]:
                mat = np.kron(mat, filt.level(ki).basis)
            rows = piece.project_rows(algebra.field.reduce(mat))
            acc = acc.add(Subspace.from_rows(algebra.field, piece.dim, rows))
        members.append(acc)
    while len(members) > 1 and members[-1].dim == 0:
        members.pop()
    return members


# ------------------------------------------------------------ validation

def test_filtration_rejects_non_nested():
    W = Subspace.from_rows(F, 3, F.array([[1, 0, 0], [0, 1, 0]]))
    U = Subspace.from_rows(F, 3, F.array([[0, 0, 1]]))
    with pytest.raises(ValueError):
        Filtration((Subspace.full(F, 3), W, U))


def test_filtration_rejects_trivial():
    with pytest.raises(TrivialFiltrationError):
        Filtration((Subspace.full(F, 3), Subspace.full(F, 3)))
    with pytest.raises(TrivialFiltrationError):
        flag(None, 0, None, 0).filtration()


def test_flag_validation():
    U = [[1, 0, 0]]
    with pytest.raises(ValueError):
        flag(U, 1, None, 0, field=F).filtration()      # W must be 2-dim
    W = [[1, 0, 0], [0, 1, 0]]
    bad_U = [[0, 0, 1]]
    with pytest.raises(ValueError):
        flag(W, 1, bad_U, 1, field=F).filtration()     # U not inside W


def test_runs_extraction():
    W = Subspace.from_rows(F, 3, F.array([[1, 0, 0], [0, 1, 0]]))
    U = Subspace.from_rows(F, 3, F.array([[1, 0, 0]]))
    filt = Flag(W, 2, U, 1).filtration()
    runs = filt.runs()
    assert [(s.dim, top) for s, top in runs] == [(3, 0), (2, 2), (1, 3)]


# ------------------------------------------------------------ chain DP

@pytest.mark.parametrize("l,m", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
def test_chain_matches_oracle_quantum_plane(l, m):
    A = quantum_plane(F, 2, 3, 5)
    rng = random.Random(100 * l + m)
    fl = random_flag(F, rng, plane_reps=l, line_reps=m)
    filt = fl.filtration()
    for n in (1, 2, 3):
        got = chain(A, filt, n)
        want = chain_oracle(A, filt, n)
        assert len(got) == len(want)
        for s, t in zip(got, want):
            assert s == t


def test_chain_matches_oracle_sklyanin():
    A = sklyanin(F, 1, 2, 3)
    rng = random.Random(42)
    fl = random_flag(F, rng, plane_reps=1, line_reps=1)
    filt = fl.filtration()
    for n in (2, 3):
        got = chain(A, filt, n)
        want = chain_oracle(A, filt, n)
        assert [s.dim for s in got] == [t.dim for t in want]
        assert all(s == t for s, t in zip(got, want))


def test_chain_is_decreasing_and_starts_full():
    A = sklyanin(F, 1, 2, 3)
    rng = random.Random(7)
    for _ in range(5):
        filt = random_flag(F, rng).filtration()
        for n in (2, 4):
            members = chain(A, filt, n)
            assert members[0] == A.graded(n).full_subspace()
            for a, b in zip(members, members[1:]):
                assert a.contains(b)
            assert members[-1].dim > 0


def test_top_chain_member_is_power_of_last_level():
    A = quantum_plane(F, 2, 3, 5)
    W = Subspace.from_rows(F, 3, F.array([[0, 1, 0], [0, 0, 1]]))
    filt = Flag(W, 1, None, 0).filtration()
    members = chain(A, filt, 3)
    www = A.multiply(A.multiply(W, 1, W, 1), 2, W, 1)
    assert members[-1] == www


# ------------------------------------------------------------ weights

def test_futaki_degree_one_formula():
    rng = random.Random(0)
    for _ in range(40):
        fl = random_flag(F, rng)
        tab = weight_table(quantum_plane(F, 2, 3, 5), fl.filtration(), [1])
        assert tab.futaki(1) == fl.futaki_degree_one()
        assert tab.futaki(1) == Fraction(2 * fl.plane_reps + fl.line_reps, 3)


def test_invariant_line_gives_constant_one_third():
    A = quantum_plane(F, 2, 3, 5)
    filt = flag(None, 0, [[1, 0, 0]], 1, field=F).filtration()
    tab = weight_table(A, filt, range(1, 7))
    assert all(r.futaki == Fraction(1, 3) for r in tab.rows)
    assert tab.weight(3) == 10


def test_fixed_singular_plane_gives_constant_futaki():
    # the plane of forms vanishing at a node the curve automorphism fixes
    A = quantum_plane(F, 2, 3, 5)
    filt = flag([[0, 1, 0], [0, 0, 1]], 1, None, 0, field=F).filtration()
    tab = weight_table(A, filt, range(1, 6))
    assert all(r.futaki == Fraction(2, 3) for r in tab.rows)
    assert tab.weight(2) == 8


def test_weight_identity_random_flags():
    A = sklyanin(F, 1, 2, 3)
    rng = random.Random(17)
    for _ in range(10):
        filt = random_flag(F, rng).filtration()
        for n in (1, 2, 3):
            dims = central_fiber_dims(A, filt, n)  # raises on violation
            assert sum(dims) == A.graded(n).dim


def test_weight_identity_over_q():
    A = quantum_plane(QQ, 1, 1, 1)
    rng = random.Random(23)
    for _ in range(5):
        filt = random_flag(QQ, rng).filtration()
        for n in (1, 2, 3):
            central_fiber_dims(A, filt, n)


# ------------------------------------------------------------ verdicts

def test_verdict_consistency():
    A = quantum_plane(F, 2, 3, 5)
    rng = random.Random(31)
    for _ in range(10):
        fl = random_flag(F, rng)
        v = flag_verdict(A, fl.filtration(), q=3)
        if v.futaki_q > v.futaki_one:
            assert v.verdict == "passes" and v.passes
        elif v.futaki_q == v.futaki_one:
            assert v.verdict == "marginal"
        else:
            assert v.verdict == "destabilizing"


def test_sklyanin_random_flags_pass():
    A = sklyanin(F, 1, 2, 3)
    rng = random.Random(12345)
    for _ in range(5):
        fl = random_flag(F, rng)
        v = flag_verdict(A, fl.filtration(), q=3)
        assert v.passes, (fl.plane_reps, fl.line_reps, v.futaki_q, v.futaki_one)


def test_quantum_plane_invariant_line_is_marginal():
    A = quantum_plane(F, 2, 3, 5)
    filt = flag(None, 0, [[1, 0, 0]], 1, field=F).filtration()
    assert flag_verdict(A, filt, q=3).verdict == "marginal"

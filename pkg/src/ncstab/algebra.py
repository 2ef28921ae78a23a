"""Quadratic graded algebras on three generators, by exact linear algebra.

An algebra is presented by three quadratic relations in the free algebra
on x1, x2, x3.  Degree-n data is computed inside the full tensor power
V^(x n) (dimension 3^n, columns indexed by words base-3, so lex order on
words = numeric order on columns):

* the degree-n piece of the two-sided relation ideal, via the recursion
      ideal(n) = V (x) ideal(n-1)  +  R (x) V^(x (n-2)),
* a monomial basis of the degree-n quotient piece: the non-pivot columns
  of the ideal's canonical form, in increasing (= length-then-lex) order,
* projection/lift maps between tensor coordinates and quotient
  coordinates.

Subspaces of a degree-n quotient piece are always carried in quotient
coordinates; ``multiply`` lifts, tensors, and re-projects.
"""

from __future__ import annotations

import threading
from itertools import permutations

import numpy as np

from .fields import Field
from .linalg import Subspace, dot

GENERATORS = 3

#: default ambient-dimension guards: degree 8 over a prime field, 5 over Q
DEFAULT_LIMIT_DIM_PRIME = GENERATORS**8
DEFAULT_LIMIT_DIM_RATIONAL = GENERATORS**5


class ResourceLimitError(RuntimeError):
    """Raised when a graded computation would exceed the configured guard."""


class DegenerateRelationsError(ValueError):
    """The given relations do not span a 3-dimensional space."""


def word_of_index(idx: int, n: int) -> tuple[int, ...]:
    """Column index -> word (tuple of generator indices 0/1/2, length n)."""
    digits = []
    for _ in range(n):
        digits.append(idx % GENERATORS)
        idx //= GENERATORS
    return tuple(reversed(digits))


def index_of_word(word) -> int:
    idx = 0
    for d in word:
        idx = idx * GENERATORS + d
    return idx


class GradedPiece:
    """Degree-n slice: relation-ideal subspace + quotient coordinates."""

    def __init__(self, algebra: "QuadraticAlgebra", n: int, ideal: Subspace):
        self.algebra = algebra
        self.n = n
        self.ideal = ideal
        full = GENERATORS**n
        pivset = set(ideal.pivots)
        self.monomials = tuple(c for c in range(full) if c not in pivset)
        self.dim = len(self.monomials)
        self.tensor_dim = full

    def project_rows(self, rows: np.ndarray) -> np.ndarray:
        """Tensor coordinates -> quotient coordinates (reduce mod ideal,
        keep the monomial columns)."""
        field = self.algebra.field
        X = np.asarray(rows, dtype=field.dtype)
        if field.p is not None:
            X = X % field.p
        mono = list(self.monomials)
        if self.ideal.dim == 0:
            return np.array(X[:, mono])
        P = list(self.ideal.pivots)
        upd = dot(X[:, P], self.ideal.basis[:, mono], field)
        out = X[:, mono] - upd
        if field.p is not None:
            out %= field.p
        return out

    def lift_rows(self, rows: np.ndarray) -> np.ndarray:
        """Quotient coordinates -> tensor coordinates (canonical lift onto
        the monomial columns)."""
        field = self.algebra.field
        Y = np.asarray(rows, dtype=field.dtype).reshape(-1, self.dim)
        Z = field.zeros((Y.shape[0], self.tensor_dim))
        Z[:, list(self.monomials)] = Y
        return Z

    def lift_subspace(self, sub: Subspace) -> Subspace:
        """Canonical lift of a subspace; the lift of a canonical basis is
        again canonical (pivot columns are monomial columns)."""
        if sub.ambient != self.dim:
            raise ValueError("subspace is not in this piece's coordinates")
        lifted = self.lift_rows(sub.basis)
        pivots = tuple(self.monomials[c] for c in sub.pivots)
        return Subspace(self.algebra.field, self.tensor_dim, lifted, pivots,
                        _canonical=True)

    def full_subspace(self) -> Subspace:
        return Subspace.full(self.algebra.field, self.dim)


class QuadraticAlgebra:
    """k<x1,x2,x3> modulo three independent quadratic relations.

    ``coefficients[i][a][b]`` is the coefficient of x_{a+1} x_{b+1} in the
    i-th relation.
    """

    def __init__(self, field: Field, coefficients, limit_dim: int | None = None):
        self.field = field
        coeffs = np.empty((3, 3, 3), dtype=field.dtype)
        for i in range(3):
            for a in range(3):
                for b in range(3):
                    coeffs[i, a, b] = field.scalar(coefficients[i][a][b])
        coeffs.setflags(write=False)
        self.coefficients = coeffs
        self.relations = Subspace.from_rows(field, 9, coeffs.reshape(3, 9))
        if self.relations.dim != 3:
            raise DegenerateRelationsError(
                f"relations span a space of dimension {self.relations.dim}, not 3")
        if limit_dim is None:
            limit_dim = (DEFAULT_LIMIT_DIM_PRIME if field.p is not None
                         else DEFAULT_LIMIT_DIM_RATIONAL)
        self.limit_dim = limit_dim
        self._graded: dict[int, GradedPiece] = {}
        self._lock = threading.Lock()

    # -- graded pieces -----------------------------------------------------

    def graded(self, n: int) -> GradedPiece:
        """Degree-n piece; memoized, at most one construction per degree."""
        if n < 0:
            raise ValueError("degree must be non-negative")
        piece = self._graded.get(n)
        if piece is not None:
            return piece
        if GENERATORS**n > self.limit_dim:
            raise ResourceLimitError(
                f"degree {n} needs ambient dimension {GENERATORS**n} > "
                f"limit {self.limit_dim}; raise limit_dim to override")
        with self._lock:
            return self._graded_locked(n)

    def _graded_locked(self, n: int) -> GradedPiece:
        piece = self._graded.get(n)
        if piece is not None:
            return piece
        if n <= 1:
            ideal = Subspace.zero(self.field, GENERATORS**n)
        elif n == 2:
            ideal = self.relations
        else:
            prev = self._graded_locked(n - 1).ideal
            shifted = Subspace.full(self.field, GENERATORS).kron(prev)
            tail = self.relations.kron(
                Subspace.full(self.field, GENERATORS**(n - 2)))
            ideal = shifted.add(tail)
        piece = GradedPiece(self, n, ideal)
        self._graded[n] = piece
        return piece

    def dimension(self, n: int) -> int:
        return self.graded(n).dim

    def hilbert(self, max_degree: int) -> list[int]:
        return [self.graded(n).dim for n in range(max_degree + 1)]

    def is_hilbert_regular(self, max_degree: int) -> bool:
        """dim A_n == (n+1)(n+2)/2 through the given degree."""
        return all(self.graded(n).dim == (n + 1) * (n + 2) // 2
                   for n in range(max_degree + 1))

    # -- multiplication ------------------------------------------------------

    def multiply(self, left: Subspace, m: int, right: Subspace, n: int) -> Subspace:
        """Image of (left x right) in the degree-(m+n) quotient piece.

        Both factors are given in quotient coordinates; the result does not
        depend on the choice of lifts because the ideal is two-sided.
        """
        target = self.graded(m + n)
        if left.dim == 0 or right.dim == 0:
            return Subspace.zero(self.field, target.dim)
        lifted = self.graded(m).lift_subspace(left).kron(
            self.graded(n).lift_subspace(right))
        projected = target.project_rows(lifted.basis)
        return Subspace.from_rows(self.field, target.dim, projected)

    def word_space(self, letters) -> Subspace:
        """Product S_1 S_2 ... S_n of degree-1 subspaces, in degree-n
        quotient coordinates."""
        letters = list(letters)
        n = len(letters)
        if n == 0:
            raise ValueError("empty word")
        target = self.graded(n)
        acc = letters[0]
        if any(s.dim == 0 for s in letters):
            return Subspace.zero(self.field, target.dim)
        for s in letters[1:]:
            acc = acc.kron(s)
        projected = target.project_rows(acc.basis)
        return Subspace.from_rows(self.field, target.dim, projected)

    def symmetrized_word_space(self, letters) -> Subspace:
        """Sum of the products over all distinct arrangements of the given
        multiset of degree-1 subspaces (the brace operation {..})."""
        letters = list(letters)
        n = len(letters)
        # label each letter by first occurrence so identical subspaces
        # produce identical symbols, then deduplicate arrangements
        symbols = []
        table: list[Subspace] = []
        for s in letters:
            for k, t in enumerate(table):
                if t == s:
                    symbols.append(k)
                    break
            else:
                symbols.append(len(table))
                table.append(s)
        total = Subspace.zero(self.field, self.graded(n).dim)
        for perm in sorted(set(permutations(symbols))):
            total = total.add(self.word_space([table[k] for k in perm]))
        return total

    # -- hashing ----------------------------------------------------------

    def canonical_coefficients(self) -> list:
        """Nested lists of canonical strings, stable across runs."""
        out = []
        for i in range(3):
            mat = []
            for a in range(3):
                mat.append([str(self.coefficients[i, a, b]) for b in range(3)])
            out.append(mat)
        return out

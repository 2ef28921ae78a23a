"""Dense exact linear algebra over Q and F_p.

The canonical form for a subspace is the reduced row echelon form (RREF)
of any spanning set: two subspaces are equal iff their canonical matrices
are identical, which makes subspace equality a plain array comparison.

Ambient dimensions here are small (at most 3^8 = 6561), so everything is
dense.  Over a prime field the arrays are int64 and the elimination steps
are vectorized; over Q they are object arrays of ``Fraction`` and numpy
merely provides the elementwise loops.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fields import Field


def _nonzero_indices(vec) -> np.ndarray:
    # works for both int64 and object (Fraction) vectors
    return np.flatnonzero(vec)


def rref(mat: np.ndarray, field: Field) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` has its zero rows dropped, each
    pivot entry is 1 and pivot columns are zero elsewhere.  ``R`` is the
    canonical matrix of the row space.
    """
    A = np.array(mat, dtype=field.dtype)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    m, n = A.shape
    p = field.p
    if p is not None:
        A %= p
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = _nonzero_indices(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = A[r, c]
        if p is not None:
            if piv != 1:
                A[r, c:] = A[r, c:] * pow(int(piv), -1, p) % p
        else:
            if piv != 1:
                A[r, c:] = A[r, c:] / piv
        col = A[:, c].copy()
        col[r] = field.zero
        nzr = _nonzero_indices(col)
        if nzr.size:
            upd = np.outer(col[nzr], A[r, c:])
            if p is not None:
                A[nzr, c:] = (A[nzr, c:] - upd) % p
            else:
                A[nzr, c:] = A[nzr, c:] - upd
        pivots.append(c)
        r += 1
    return np.ascontiguousarray(A[:r]), tuple(pivots)


def dot(A: np.ndarray, B: np.ndarray, field: Field) -> np.ndarray:
    """Exact matrix product, reduced mod p over a prime field.

    Over F_p the inner dimension is chunked so that int64 accumulation
    can never overflow.
    """
    p = field.p
    if p is None:
        return A.dot(B)
    # how many (p-1)^2 terms fit in a signed 64-bit accumulator
    chunk = max(1, (2**63 - 1) // ((p - 1) ** 2 or 1))
    inner = A.shape[-1]
    if inner <= chunk:
        return A.dot(B) % p
    acc = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for start in range(0, inner, chunk):
        acc = (acc + A[:, start:start + chunk].dot(B[start:start + chunk])) % p
    return acc


class Subspace:
    """A subspace of ``field^ambient``, stored as its canonical RREF basis."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, basis: np.ndarray,
                 pivots: tuple[int, ...], *, _canonical: bool = False):
        if not _canonical:
            basis, pivots = rref(basis, field)
        basis.setflags(write=False)
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, ambient: int, rows) -> "Subspace":
        arr = np.asarray(rows, dtype=field.dtype)
        if arr.size == 0:
            return cls.zero(field, ambient)
        arr = arr.reshape(-1, ambient)
        basis, pivots = rref(arr, field)
        return cls(field, ambient, basis, pivots, _canonical=True)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, field.zeros((0, ambient)), (), _canonical=True)

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        eye = field.zeros((ambient, ambient))
        for i in range(ambient):
            eye[i, i] = field.one
        return cls(field, ambient, eye, tuple(range(ambient)), _canonical=True)

    # -- basic queries --------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient == other.ambient
                and self.pivots == other.pivots
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        if self.field.p is not None:
            payload = self.basis.tobytes()
        else:
            payload = repr(self.basis.tolist()).encode()
        return hash((self.field, self.ambient, self.pivots, payload))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, field={self.field})"

    # -- reduction and membership ---------------------------------------------

    def reduce_rows(self, rows: np.ndarray) -> np.ndarray:
        """Eliminate this subspace's pivot columns from the given rows.

        The result is congruent to ``rows`` modulo the subspace and has
        zeros in every pivot column.
        """
        X = np.array(rows, dtype=self.field.dtype)
        if self.field.p is not None:
            X %= self.field.p
        if self.dim == 0 or X.size == 0:
            return X
        P = list(self.pivots)
        upd = dot(X[:, P], self.basis, self.field)
        if self.field.p is not None:
            return (X - upd) % self.field.p
        return X - upd

    def contains_vector(self, vec) -> bool:
        res = self.reduce_rows(np.asarray(vec, dtype=self.field.dtype).reshape(1, -1))
        return not _nonzero_indices(res[0]).size

    def contains(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        if other.dim > self.dim:
            return False
        res = self.reduce_rows(other.basis)
        return all(not _nonzero_indices(row).size for row in res)

    # -- lattice operations ----------------------------------------------------

    def add(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return Subspace.from_rows(self.field, self.ambient, stacked)

    __or__ = add

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: row-reduce [[S S],[T 0]]; rows with zero left half
        carry an intersection basis in their right half."""
        self._check_compatible(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        n = self.ambient
        top = np.concatenate([self.basis, self.basis], axis=1)
        bottom = np.concatenate([other.basis, self.field.zeros(other.basis.shape)], axis=1)
        R, piv = rref(np.concatenate([top, bottom], axis=0), self.field)
        keep = [i for i, row in enumerate(R) if not _nonzero_indices(row[:n]).size]
        if not keep:
            return Subspace.zero(self.field, n)
        return Subspace.from_rows(self.field, n, R[keep, n:])

    __and__ = intersect

    def kron(self, other: "Subspace") -> "Subspace":
        """Tensor product inside field^(ambient*ambient'), row-major pairing
        (i, j) -> i * ambient' + j.

        The Kronecker product of two canonical bases, rows ordered
        lexicographically, is itself canonical: the pivot of row (a, b)
        sits at pivot_a * ambient' + pivot_b and all the RREF conditions
        are inherited factorwise.  So no re-reduction is needed.
        """
        if self.field != other.field:
            raise ValueError("field mismatch in kron")
        ambient = self.ambient * other.ambient
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, ambient)
        prod = np.kron(self.basis, other.basis)
        if self.field.p is not None:
            prod %= self.field.p
        pivots = tuple(pa * other.ambient + pb
                       for pa in self.pivots for pb in other.pivots)
        return Subspace(self.field, ambient, prod, pivots, _canonical=True)

    def _check_compatible(self, other: "Subspace"):
        if self.field != other.field or self.ambient != other.ambient:
            raise ValueError("subspaces live in different ambient spaces")


def nullspace(mat: np.ndarray, field: Field) -> Subspace:
    """Right kernel of a matrix, as a canonical subspace of field^ncols."""
    A = np.asarray(mat, dtype=field.dtype)
    if A.ndim != 2:
        raise ValueError("nullspace expects a 2-D matrix")
    n = A.shape[1]
    R, pivots = rref(A, field)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return Subspace.zero(field, n)
    K = field.zeros((len(free), n))
    for i, f in enumerate(free):
        K[i, f] = field.one
        for j, pc in enumerate(pivots):
            val = R[j, f]
            if field.p is not None:
                K[i, pc] = (-int(val)) % field.p
            else:
                K[i, pc] = -val
    return Subspace.from_rows(field, n, K)


def solve_linear(A: np.ndarray, b, field: Field):
    """One exact solution of ``A x = b``, or ``None`` if inconsistent."""
    A = np.asarray(A, dtype=field.dtype)
    bcol = np.asarray(b, dtype=field.dtype).reshape(-1, 1)
    aug = np.concatenate([A, bcol], axis=1)
    R, pivots = rref(aug, field)
    n = A.shape[1]
    if n in pivots:  # pivot in the constant column: inconsistent
        return None
    x = field.zeros((n,))
    for j, pc in enumerate(pivots):
        x[pc] = R[j, n]
    return x

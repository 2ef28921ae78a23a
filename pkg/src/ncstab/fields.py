"""Exact coefficient fields: the rationals and prime fields F_p.

Everything downstream is exact.  A field is described by a small frozen
``Field`` object; matrix data lives in numpy arrays whose dtype depends on
the field:

* prime field  -> ``int64`` entries, always reduced into ``[0, p)``,
* rationals    -> ``object`` entries holding ``fractions.Fraction``.

With ``p`` bounded by ``MAX_PRIME`` every product of two reduced
representatives fits comfortably in an int64, so vectorized numpy
arithmetic followed by ``% p`` is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# (p-1)^2 * (a few thousand accumulated terms) must stay < 2^63 for the
# vectorized elimination steps; 2^25 leaves a huge margin.
MAX_PRIME = 1 << 25


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """The rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not is_prime(self.p):
                raise ValueError(f"modulus {self.p} is not prime")
            if self.p in (2, 3):
                raise ValueError("characteristic 2 and 3 are not supported")
            if self.p > MAX_PRIME:
                raise ValueError(f"modulus {self.p} exceeds the machine-word budget")

    # -- basic queries ----------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p if self.p is not None else 0

    def __str__(self):
        return f"F_{self.p}" if self.p is not None else "Q"

    # -- scalars -----------------------------------------------------------

    def scalar(self, value):
        """Coerce an int / Fraction / rational string into this field."""
        if self.p is None:
            return Fraction(value)
        f = Fraction(value)
        den = f.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {value} vanishes mod {self.p}")
        return f.numerator % self.p * pow(den, -1, self.p) % self.p

    def inv(self, a):
        if self.p is None:
            return Fraction(1) / a
        return pow(int(a), -1, self.p)

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    # -- arrays ------------------------------------------------------------

    @property
    def dtype(self):
        return np.int64 if self.p is not None else object

    def array(self, rows) -> np.ndarray:
        """Build a 2-D matrix over this field from nested scalars."""
        data = [[self.scalar(v) for v in row] for row in rows]
        ncols = len(data[0]) if data else 0
        out = np.empty((len(data), ncols), dtype=self.dtype)
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                out[i, j] = v
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.p is not None:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out[...] = Fraction(0)
        return out

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Normalize array entries (mod-p reduction; no-op over Q)."""
        if self.p is not None:
            return np.mod(arr, self.p)
        return arr


QQ = Field(None)


def GF(p: int) -> Field:
    return Field(p)

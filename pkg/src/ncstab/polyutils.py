"""Univariate polynomial arithmetic over a prime field.

Polynomials are plain Python lists of ints in [0, p), lowest degree
first, with no trailing zeros (the zero polynomial is the empty list).
Python integers never overflow, and every list here has single-digit
degree, so there is no reason to involve numpy.

The root finder is fully deterministic: after splitting off the
product of distinct linear factors with gcd(x^p - x, f), it separates
roots with the quadratic-character polynomials (x + d)^((p-1)/2) - 1
for d = 0, 1, 2, ...  Two distinct roots are separated by some d, so
the sweep terminates.
"""

from __future__ import annotations


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    for i, c in enumerate(f):
        if type(c) is not int:  # numpy scalars sneak in from callers
            f[i] = int(c)
    return f


def degree(f: list[int]) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(f) - 1


def add(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return trim(out)


def scale(f, c, p):
    c %= p
    return trim([a * c % p for a in f])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def poly_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    f = list(f)
    dg = degree(g)
    inv_lead = pow(int(g[-1]), -1, p)
    q = [0] * max(len(f) - dg, 0)
    while degree(f) >= dg:
        shift = degree(f) - dg
        c = f[-1] * inv_lead % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        trim(f)
    return trim(q), f


def poly_mod(f, g, p):
    return poly_divmod(f, g, p)[1]


def monic(f, p):
    if not f:
        return f
    return scale(f, pow(int(f[-1]), -1, p), p)


def gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, poly_mod(f, g, p)
    return monic(f, p)


def powmod(base, e, mod, p):
    """base^e reduced mod the polynomial ``mod``."""
    result = [1]
    base = poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = poly_mod(mul(result, base, p), mod, p)
        base = poly_mod(mul(base, base, p), mod, p)
        e >>= 1
    return result


def deriv(f, p):
    return trim([i * c % p for i, c in enumerate(f)][1:])


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def compose(f, g, p):
    """f(g(x))."""
    acc: list[int] = []
    for c in reversed(f):
        acc = add(mul(acc, g, p), [c % p] if c % p else [], p)
    return acc


def roots(f, p) -> list[int]:
    """Distinct roots of f in F_p, sorted increasingly."""
    f = monic(trim(list(f)), p)
    if not f:
        raise ValueError("the zero polynomial has every root")
    if degree(f) == 0:
        return []
    # product of the distinct linear factors: gcd(x^p - x, f)
    xp = powmod([0, 1], p, f, p)
    lin = gcd(sub(xp, [0, 1], p), f, p)
    out: list[int] = []
    if evaluate(lin, 0, p) == 0:
        out.append(0)
        lin = poly_divmod(lin, [0, 1], p)[0]
    _split(lin, p, 0, out)
    return sorted(out)


def _split(f, p, shift, out):
    """Roots of f, all of which lie in F_p and are distinct and nonzero
    after shifting; deterministic character split."""
    d = degree(f)
    if d <= 0:
        return
    if d == 1:
        out.append((-f[0]) * pow(int(f[1]), -1, p) % p)
        return
    e = (p - 1) // 2
    delta = shift
    while True:
        # gcd with (x + delta)^e - 1 picks out roots r with chi(r+delta)=1
        ch = powmod([delta % p, 1], e, f, p)
        g = gcd(sub(ch, [1], p), f, p)
        if 0 < degree(g) < d:
            _split(g, p, delta + 1, out)
            _split(poly_divmod(f, g, p)[0], p, delta + 1, out)
            return
        delta += 1
        if delta > shift + 4 * p:
            raise RuntimeError("character split failed to separate roots")


def squarefree_part(f, p):
    """f divided by gcd(f, f'); for p larger than deg f this removes
    exactly the repeated factors."""
    g = gcd(f, deriv(f, p), p)
    return poly_divmod(f, g, p)[0]


def distinct_root_count_info(f, p):
    """(number of distinct roots in F_p, degree of the squarefree part).

    The squarefree part splits into linear factors over extensions; the
    difference between its degree and the rational root count measures
    how much lives in proper extensions.
    """
    sf = squarefree_part(monic(f, p), p)
    xp = powmod([0, 1], p, sf, p)
    lin = gcd(sub(xp, [0, 1], p), sf, p)
    return degree(lin), degree(sf)


def frobenius(g, p):
    """t^p mod g: the Frobenius image of t in F_p[t]/(g)."""
    return powmod([0, 1], p, g, p)

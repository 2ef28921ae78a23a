"""Exact arithmetic behind the stability estimates.

Everything in this module is combinatorial: chain power sums and their
closed forms, the bootstrap lower bound for filtration weights, the
composition rules describing which word shapes span a filtration level,
dimension bounds for word spans in the curve ring, section counts on a
triangle of lines, and a registry of per-geometry estimate cases with
their weight and margin functions.

All values are exact (int / Fraction); nothing here touches a matrix.
The geometric content lives in the engine modules; this module only
transcribes the combinatorial side and makes it checkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

__all__ = [
    "ZetaTriple", "zeta", "amazing_check", "chain_degrees",
    "weight_normalizer", "ambient_dimension", "curve_dimension",
    "bootstrap_bound", "composition_conditions",
    "plane_then_line_claims", "interleaved_claims", "line_first_claims",
    "span_dim_generic_line", "span_dim_line_and_plane",
    "span_dim_fixed_point_plane", "word_dim_bound", "triangle_sections",
    "SignClaim", "EstimateCase", "CASES", "case_named", "cases_for",
    "case_g", "case_g_exact", "positivity_scan",
]


# -- chain power sums -------------------------------------------------------

def chain_degrees(n: int) -> range:
    """Degrees n, n-3, n-6, ... visited by the degree-3 descent."""
    return range(n, 0, -3)


def zeta(j: int, n: int) -> int:
    """Closed form of 3 * sum(d**j for d in chain_degrees(n)).

    Only the moments j = 0, 1, 2 are needed; each closed form is a
    polynomial plus a constant depending on n mod 3.
    """
    if n < 1:
        raise ValueError("chain power sums are defined for n >= 1")
    r = n % 3
    if j == 0:
        return n + (0, 2, 1)[r]
    if j == 1:
        return n * (n + 3) // 2 + (0, 1, 1)[r]
    if j == 2:
        num = n * (n + 3) * (2 * n + 3) + (0, -2, 2)[r]
        assert num % 6 == 0
        return num // 6
    raise ValueError("closed forms exist for moments 0, 1, 2 only")


@dataclass(frozen=True)
class ZetaTriple:
    """The three chain power sums of one degree, bundled."""
    n: int
    zeta0: int
    zeta1: int
    zeta2: int

    @classmethod
    def at(cls, n: int) -> "ZetaTriple":
        return cls(n, zeta(0, n), zeta(1, n), zeta(2, n))


def weight_normalizer(n: int) -> int:
    """n(n+1)(n+2): what one plane repetition must out-weigh at degree n
    (a line repetition must out-weigh half of it)."""
    return n * (n + 1) * (n + 2)


def amazing_check(n: int) -> bool:
    """The closed forms recombine exactly: 3*zeta2 - 3*zeta1 + 2*zeta0
    equals n(n+1)(n+2), whatever n mod 3 is."""
    return 3 * zeta(2, n) - 3 * zeta(1, n) + 2 * zeta(0, n) == weight_normalizer(n)


def ambient_dimension(n: int) -> int:
    """Dimension (n+1)(n+2)/2 of the degree-n piece of the full algebra."""
    return (n + 1) * (n + 2) // 2 if n >= 0 else 0


def curve_dimension(n: int) -> int:
    """Dimension of the degree-n piece of the curve quotient: 3n, and 1
    in degree zero."""
    if n < 0:
        return 0
    return 1 if n == 0 else 3 * n


# -- bootstrap --------------------------------------------------------------

def bootstrap_bound(w_values, p, a_values, n):
    """Lower bound for the algebra-side weight at degree n.

    The descent d -> d-3 passes through a multiple of the degree-3
    normal element, and everything below that multiple carries at least
    p extra weight units spread over a_values[d-3] dimensions.
    w_values[d] is the weight collected at stage d itself; both
    sequences are indexed by degree.  Degrees below 1 contribute
    nothing.
    """
    if n < 1:
        return 0
    total = 0
    for d in chain_degrees(n):
        total += w_values[d]
        if d >= 3:
            total += p * a_values[d - 3]
    return total


# -- composition of a filtration level --------------------------------------

def composition_conditions(plane_reps, line_reps, degree, level):
    """Exponent pairs (alpha, beta) whose word spans make up the given
    filtration level: alpha plane factors, beta line factors, the rest
    unconstrained.

    A pair participates iff the level can be split into alpha parts
    from 1..plane_reps and beta parts from plane_reps+1..plane_reps+line_reps.
    """
    l, m, n, k = plane_reps, line_reps, degree, level
    if min(l, m, n, k) < 0:
        raise ValueError("arguments must be non-negative")
    alphas = range(n + 1) if l > 0 else range(1)
    betas = range(n + 1) if m > 0 else range(1)
    pairs = set()
    for a in alphas:
        for b in betas:
            if a + b <= n and a + b * (l + 1) <= k <= a * l + b * (l + m):
                pairs.add((a, b))
    return pairs


# -- ladder claims -----------------------------------------------------------
#
# Each generator returns inclusion claims (level, (free, plane, line))
# meaning: the span of all words with those factor counts sits inside
# the filtration piece at that level.  Together the claims assign a word
# shape to every rung of the ladder 1 .. degree*(plane_reps+line_reps),
# which is exactly what the per-case weight counts add up.

def plane_then_line_claims(plane_reps, line_reps, degree):
    """Plane powers climb the first degree*plane_reps rungs, then
    plane/line words take over."""
    l, m, n = plane_reps, line_reps, degree
    if l < 1:
        raise ValueError("needs plane_reps >= 1")
    claims = []
    for a in range(1, n + 1):
        for k in range((a - 1) * l + 1, a * l + 1):
            claims.append((k, (n - a, a, 0)))
    for a in range(1, n + 1):
        for k in range(n * l + (a - 1) * m + 1, n * l + a * m + 1):
            claims.append((k, (0, n - a, a)))
    return claims


def interleaved_claims(plane_reps, line_reps, degree):
    """Ladder keeping one unconstrained factor in play until the very
    last rungs (needs both repetition counts positive)."""
    l, m, n = plane_reps, line_reps, degree
    if l < 1 or m < 1:
        raise ValueError("needs plane_reps >= 1 and line_reps >= 1")
    claims = []
    for i in range(1, n):
        for k in range((i - 1) * l + 1, i * l + 1):
            claims.append((k, (n - i, i, 0)))
    for i in range(1, n):
        start = (n - 1) * l + (i - 1) * m
        for k in range(start + 1, start + m + 1):
            claims.append((k, (1, n - 1 - i, i)))
    base = (n - 1) * (l + m)
    for k in range(base + 1, base + l + 1):
        claims.append((k, (0, 1, n - 1)))
    for k in range(base + l + 1, n * (l + m) + 1):
        claims.append((k, (0, 0, n)))
    return claims


def line_first_claims(plane_reps, line_reps, degree):
    """Ladder that spends line factors as early as possible; needs at
    least one line repetition."""
    l, m, n = plane_reps, line_reps, degree
    if m < 1:
        raise ValueError("needs line_reps >= 1")
    claims = []
    for i in range(1, n + 1):
        for k in range((i - 1) * (l + m) + 1, i * (l + m) - m + 1):
            claims.append((k, (n - i, 1, i - 1)))
        for k in range(i * (l + m) - m + 1, i * (l + m) + 1):
            claims.append((k, (n - i, 0, i)))
    return claims


# -- span dimension bounds in the curve ring ---------------------------------

def span_dim_generic_line(degree, line_factors):
    """Lower bound for the curve-ring span of words with the given
    number of line factors, all other factors free.  Valid when the
    line's zero locus is not contained in the point curve."""
    n, b = degree, line_factors
    if not 0 <= b <= n:
        raise ValueError("line factor count out of range")
    return 3 * n - 2 * b if 2 * b <= n else 4 * n - 4 * b


def span_dim_line_and_plane(degree, line_factors):
    """Same kind of bound with one plane factor replacing a line factor
    (so line_factors counts the plane factor as one of them)."""
    n, b = degree, line_factors
    if not 1 <= b <= n:
        raise ValueError("needs at least the plane factor")
    return 3 * n + 1 - 2 * b if 2 * b <= n + 1 else 4 * n + 2 - 4 * b


def span_dim_fixed_point_plane(degree, line_factors):
    """Bound for words in plane and line factors only, when the plane's
    dual point is a smooth fixed point of the curve automorphism."""
    n, b = degree, line_factors
    if not 0 <= b <= n:
        raise ValueError("line factor count out of range")
    return 2 * n - b if 2 * b <= n else 3 * n - 3 * b


def word_dim_bound(degree, plane_factors, line_factors):
    """Curve-ring dimension bound 3n - alpha - 3*beta for an ordered
    word with at least one free factor."""
    n, a, b = degree, plane_factors, line_factors
    if min(a, b) < 0 or n - a - b < 1:
        raise ValueError("needs at least one free factor")
    return 3 * n - a - 3 * b


# -- sections on a triangle of lines -----------------------------------------

def triangle_sections(degrees, edge_orders=(0, 0, 0), node_orders=(0, 0, 0)):
    """Dimension of the space of sections of a line bundle on a cycle of
    three lines, vanishing to the given orders.

    Conventions: edges are indexed 0, 1, 2 cyclically; node i is the
    intersection of edges i and i+1.  ``degrees`` are the three edge
    degrees.  Supported vanishing patterns (all orders in a pattern must
    be >= 1): nothing; one edge; two edges; one, two, or three nodes;
    one edge plus the node it does not meet.  Anything else raises
    ValueError, as does a pattern outside its validity range.
    """
    d = tuple(int(x) for x in degrees)
    eo = tuple(int(x) for x in edge_orders)
    no = tuple(int(x) for x in node_orders)
    if len(d) != 3 or len(eo) != 3 or len(no) != 3:
        raise ValueError("expected three degrees and three orders of each kind")
    if min(d) < 0 or min(eo) < 0 or min(no) < 0:
        raise ValueError("degrees and orders must be non-negative")
    edges = [i for i in range(3) if eo[i]]
    nodes = [i for i in range(3) if no[i]]
    total = sum(d)

    if not edges and not nodes:
        if total < 1:
            raise ValueError("needs positive total degree")
        return total

    if edges and nodes:
        if len(edges) == 1 and len(nodes) == 1:
            e, q = edges[0], nodes[0]
            if q != (e + 1) % 3:
                raise ValueError("edge plus a node on that edge is not supported")
            s = eo[e] + no[q]
            d1, d2 = d[(e + 1) % 3], d[(e + 2) % 3]
            if s > d1 + 1 or s > d2 + 1:
                raise ValueError("orders exceed the validity range")
            return d1 + d2 + 2 - 2 * s
        raise ValueError("unsupported mix of edge and node vanishing")

    if edges:
        if len(edges) == 1:
            e = edges[0]
            b = eo[e]
            d1, d2 = d[(e + 1) % 3], d[(e + 2) % 3]
            if 2 * b > d1 + d2 + 1:
                raise ValueError("order exceeds the validity range")
            return d1 + d2 + 1 - 2 * b
        if len(edges) == 2:
            rest = ({0, 1, 2} - set(edges)).pop()
            s = eo[edges[0]] + eo[edges[1]]
            if s > d[rest] + 1:
                raise ValueError("orders exceed the validity range")
            return d[rest] + 1 - s
        raise ValueError("vanishing on all three edges is not supported")

    if len(nodes) == 1:
        q = nodes[0]
        b = no[q]
        if 2 * b > total + 1:
            raise ValueError("order exceeds the validity range")
        return total + 1 - 2 * b
    if len(nodes) == 2:
        q1, q2 = nodes
        shared = 1 if (q1, q2) == (0, 1) else 2 if (q1, q2) == (1, 2) else 0
        s = no[q1] + no[q2]
        if s > d[shared] + 1 or s > total - d[shared] + 1:
            raise ValueError("orders exceed the validity range")
        return total + 2 - 2 * s
    # all three nodes: each pair of orders is limited by its shared edge
    a, b, g = no
    if a + b > d[1] + 1 or b + g > d[2] + 1 or a + g > d[0] + 1:
        raise ValueError("orders exceed the validity range")
    return total + 3 - 2 * (a + b + g)


# -- the estimate case registry ----------------------------------------------

@dataclass(frozen=True)
class SignClaim:
    """Sign behavior of one margin: zero exactly on ``zero_at``,
    strictly positive from ``positive_from`` on, or identically zero."""
    margin: str                      # "pencil", "line", or "total"
    positive_from: int | None = None
    zero_at: tuple[int, ...] = ()
    identically_zero: bool = False


@dataclass(frozen=True)
class EstimateCase:
    """One geometric situation and its transcribed weight estimates.

    weight_* give the per-degree weight collected on the curve quotient
    (pencil side per plane repetition, line side per line repetition);
    raw_weight_* are the pre-correction intermediates where the final
    value includes a refinement.  margin_* are the closed-form excesses
    over the degree-one slope; ``q`` and ``s`` say how deep the degree-3
    normal element sits in the filtration per plane / line repetition.
    The derivations behind raw_weight_* assume degree >= 2.
    """
    name: str
    summary: str
    q: int
    s: int
    condition: Callable[[int, int], bool]
    weight_pencil: Callable[[int], Fraction] | None = None
    weight_line: Callable[[int], Fraction] | None = None
    raw_weight_pencil: Callable[[int], Fraction] | None = None
    raw_weight_line: Callable[[int], Fraction] | None = None
    margin_pencil: Callable[[int], Fraction] | None = None
    margin_line: Callable[[int], Fraction] | None = None
    margin_total: Callable[[int], Fraction] | None = None
    claims: tuple[SignClaim, ...] = ()

    def applies(self, plane_reps: int, line_reps: int) -> bool:
        return bool(self.condition(plane_reps, line_reps))


# point off the curve

def _w_off_pencil(n):
    return Fraction(3 * n * n - 3 * n + 2)


def _w_off_line(n):
    return Fraction(3 * n * n - 3 * n + 2, 2)


def _m_off_pencil(n):
    return Fraction(zeta(2, n) - 3 * zeta(1, n) + 2 * zeta(0, n))


def _m_off_line(n):
    return Fraction(0)


# point on the curve, generic, plane side dominant

def _w_generic_pencil(n):
    return Fraction(11 * n * n, 4) - Fraction(5 * n, 2) + 2 - Fraction(n % 2, 4)


def _w_generic_line(n):
    return Fraction(n * n + n - 2)


def _m_generic_pencil(n):
    return (Fraction(3, 4) * zeta(2, n) - Fraction(5, 2) * zeta(1, n)
            + (2 - Fraction(n % 2, 4)) * zeta(0, n))


def _m_generic_line(n):
    return (-Fraction(1, 2) * zeta(2, n) + Fraction(5, 2) * zeta(1, n)
            - 3 * zeta(0, n))


def _m_generic_total(n):
    return Fraction(1, 4) * zeta(2, n) - (1 + Fraction(n % 2, 4)) * zeta(0, n)


# point on the curve, generic, line side dominant

def _w_heavy_pencil(n):
    return Fraction(7 * n * n, 4) + Fraction(n % 2, 4)


def _w_heavy_line(n):
    return Fraction(7 * n * n, 4) - Fraction(3 * n, 2) + 1 - Fraction(n % 2, 4)


def _m_heavy_pencil(n):
    return -Fraction(1, 4) * zeta(2, n) + Fraction(n % 2, 4) * zeta(0, n)


def _m_heavy_line(n):
    return Fraction(1, 4) * zeta(2, n) - Fraction(n % 2, 4) * zeta(0, n)


def _m_heavy_total(n):
    return Fraction(0)


# smooth fixed point of the automorphism

def _w_fixed_pencil(n):
    return Fraction(5 * n * n - n, 2)


def _w_fixed_line(n):
    return Fraction(5 * n * n, 4) - n + 1 - Fraction(n % 2, 4)


def _m_fixed_pencil(n):
    return Fraction(zeta(2, n) - zeta(1, n), 2)


def _m_fixed_line(n):
    return (-Fraction(1, 4) * zeta(2, n) + Fraction(1, 2) * zeta(1, n)
            - Fraction(n % 2, 4) * zeta(0, n))


def _m_fixed_total(n):
    return Fraction(1, 4) * zeta(2, n) - Fraction(n % 2, 4) * zeta(0, n)


# point at a node of the triangle

def _w_node_pencil_raw(n):
    return Fraction(5 * n * n - n, 2)


def _w_node_pencil(n):
    # the refinement (a pure plane word must involve a second node)
    # needs at least two factors, so no bump in degree one
    return _w_node_pencil_raw(n) + (1 if n >= 2 else 0)


def _w_node_line(n):
    return Fraction(n * n + n, 2)


def _m_node_pencil(n):
    return Fraction(zeta(2, n) - 2 * zeta(1, n) + 2 * zeta(0, n))


def _m_node_line(n):
    return Fraction(-zeta(2, n) + 2 * zeta(1, n) - zeta(0, n))


def _m_node_total(n):
    return Fraction(zeta(0, n))


# line of the flag is an edge of the triangle

def _w_edge_line_raw(n):
    return (Fraction(5 * n * n, 3),
            Fraction(5 * n * n - 4 * n - 1, 3),
            Fraction(5 * n * n - 8 * n - 4, 3))[n % 3]


def _w_edge_line(n):
    return (Fraction(5 * n * n, 3),
            Fraction(5 * n * n - 2 * n, 3),
            Fraction(5 * n * n - 4 * n + 6, 3))[n % 3]


def _m_edge_line(n):
    z0, z1, z2 = zeta(0, n), zeta(1, n), zeta(2, n)
    combo = (z2 + 9 * z1 - 6 * z0,
             z2 + 5 * z1 - 6 * z0,
             z2 + z1 + 6 * z0)[n % 3]
    return Fraction(combo, 6)


def _w_edge_pencil_raw(n):
    return (Fraction(5 * n * n + 6 * n - 9, 3),
            Fraction(5 * n * n + 2 * n - 16, 3),
            Fraction(5 * n * n + n - 4, 3))[n % 3]


def _w_edge_pencil(n):
    return (Fraction(5 * n * n + 6 * n - 9, 3),
            Fraction(5 * n * n + 5 * n - 4, 3),
            Fraction(5 * n * n + 4 * n - 1, 3))[n % 3]


def _m_edge_pencil(n):
    z0, z1, z2 = zeta(0, n), zeta(1, n), zeta(2, n)
    combo = (z2 + 3 * z1 - 12 * z0,
             z2 + z1 - 2 * z0,
             z2 - z1 + 4 * z0)[n % 3]
    return Fraction(combo, 6)


def _m_edge_total(n):
    return _m_edge_pencil(n) + _m_edge_line(n)


CASES: dict[str, EstimateCase] = {c.name: c for c in (
    EstimateCase(
        name="point-off-divisor",
        summary="the plane's dual point lies off the point curve",
        q=2, s=0,
        condition=lambda l, m: l >= 1 and m >= 0,
        weight_pencil=_w_off_pencil,
        weight_line=_w_off_line,
        margin_pencil=_m_off_pencil,
        margin_line=_m_off_line,
        margin_total=_m_off_pencil,
        claims=(
            SignClaim("pencil", positive_from=3, zero_at=(2,)),
            SignClaim("line", identically_zero=True),
            SignClaim("total", positive_from=3, zero_at=(2,)),
        ),
    ),
    EstimateCase(
        name="point-generic-pencil-heavy",
        summary="dual point on the curve, neither a node nor fixed; at "
                "least as many plane as line repetitions",
        q=2, s=0,
        condition=lambda l, m: l >= m >= 0 and l >= 1,
        weight_pencil=_w_generic_pencil,
        weight_line=_w_generic_line,
        margin_pencil=_m_generic_pencil,
        margin_line=_m_generic_line,
        margin_total=_m_generic_total,
        claims=(
            SignClaim("pencil", positive_from=3, zero_at=(2,)),
            SignClaim("total", positive_from=3, zero_at=(2,)),
        ),
    ),
    EstimateCase(
        name="point-generic-line-heavy",
        summary="dual point on the curve, neither a node nor fixed; more "
                "line than plane repetitions",
        q=2, s=0,
        condition=lambda l, m: m > l >= 0,
        weight_pencil=_w_heavy_pencil,
        weight_line=_w_heavy_line,
        margin_pencil=_m_heavy_pencil,
        margin_line=_m_heavy_line,
        margin_total=_m_heavy_total,
        claims=(
            SignClaim("line", positive_from=2),
            SignClaim("total", identically_zero=True),
        ),
    ),
    EstimateCase(
        name="point-smooth-fixed",
        summary="dual point is a smooth fixed point of the automorphism",
        q=2, s=0,
        condition=lambda l, m: l >= m >= 0 and l >= 1,
        weight_pencil=_w_fixed_pencil,
        weight_line=_w_fixed_line,
        margin_pencil=_m_fixed_pencil,
        margin_line=_m_fixed_line,
        margin_total=_m_fixed_total,
        claims=(
            SignClaim("pencil", positive_from=2),
            SignClaim("total", positive_from=2),
        ),
    ),
    EstimateCase(
        name="point-at-node",
        summary="dual point is a node of the triangle (never fixed when "
                "the automorphism rotates the edges)",
        q=3, s=0,
        condition=lambda l, m: l >= m >= 0 and l >= 1,
        weight_pencil=_w_node_pencil,
        raw_weight_pencil=_w_node_pencil_raw,
        weight_line=_w_node_line,
        margin_pencil=_m_node_pencil,
        margin_line=_m_node_line,
        margin_total=_m_node_total,
        claims=(
            SignClaim("pencil", positive_from=2),
            SignClaim("total", positive_from=2),
        ),
    ),
    EstimateCase(
        name="line-component-only",
        summary="the flag line cuts out an edge of the triangle; no plane "
                "repetitions",
        q=3, s=0,
        condition=lambda l, m: l == 0 and m >= 1,
        weight_line=_w_edge_line,
        raw_weight_line=_w_edge_line_raw,
        margin_line=_m_edge_line,
        margin_total=_m_edge_line,
        claims=(
            SignClaim("line", positive_from=2),
            SignClaim("total", positive_from=2),
        ),
    ),
    EstimateCase(
        name="line-component-mixed",
        summary="the flag line cuts out an edge of the triangle, plane "
                "repetitions present",
        q=3, s=0,
        condition=lambda l, m: l >= 1 and m >= 1,
        weight_pencil=_w_edge_pencil,
        raw_weight_pencil=_w_edge_pencil_raw,
        weight_line=_w_edge_line,
        raw_weight_line=_w_edge_line_raw,
        margin_pencil=_m_edge_pencil,
        margin_line=_m_edge_line,
        margin_total=_m_edge_total,
        claims=(
            SignClaim("pencil", positive_from=2),
            SignClaim("line", positive_from=2),
            SignClaim("total", positive_from=2),
        ),
    ),
)}


def case_named(name: str) -> EstimateCase:
    try:
        return CASES[name]
    except KeyError:
        raise ValueError(f"unknown estimate case {name!r}; "
                         f"choose from {', '.join(CASES)}") from None


def cases_for(plane_reps: int, line_reps: int) -> list[EstimateCase]:
    """All registry rows whose repetition-count condition is met (the
    geometry then picks the relevant one)."""
    return [c for c in CASES.values() if c.applies(plane_reps, line_reps)]


def _resolve(case) -> EstimateCase:
    return case_named(case) if isinstance(case, str) else case


def case_g(case, n: int) -> tuple[Fraction, Fraction]:
    """The case's closed-form margins (pencil, line) at degree n; a side
    the case does not estimate reports 0."""
    case = _resolve(case)
    gp = case.margin_pencil(n) if case.margin_pencil else Fraction(0)
    gl = case.margin_line(n) if case.margin_line else Fraction(0)
    return gp, gl


def case_g_exact(case, n: int):
    """Margins recomputed by summing the per-degree weights along the
    descent, with the q/s boosts.  This is the honest lower bound that
    the closed forms aggregate; the two agree except where a parity
    term rides along the descent.  Sides without a weight function
    report None.
    """
    case = _resolve(case)
    gp = gl = None
    if case.weight_pencil is not None:
        tot = sum(case.weight_pencil(d) + case.q * ambient_dimension(d - 3)
                  for d in chain_degrees(n))
        gp = 3 * tot - weight_normalizer(n)
    if case.weight_line is not None:
        tot = sum(case.weight_line(d) + case.s * ambient_dimension(d - 3)
                  for d in chain_degrees(n))
        gl = 3 * tot - Fraction(weight_normalizer(n), 2)
    return gp, gl


def positivity_scan(case, n_range, plane_reps: int, line_reps: int) -> dict:
    """Check the case's sign claims over n_range.

    Scans the closed-form margins against the case's claims, and the
    combined margin plane_reps*pencil + line_reps*line (both routes:
    closed-form and descent-summed) for strict positivity from degree 3
    on, allowing zero at degree 2.  Returns a report dict; violations
    empty means everything held.
    """
    case = _resolve(case)
    l, m = plane_reps, line_reps
    if not case.applies(l, m):
        raise ValueError(f"case {case.name!r} does not cover "
                         f"plane_reps={l}, line_reps={m}")
    ns = sorted(set(n_range))
    if any(n < 1 for n in ns):
        raise ValueError("degrees must be positive")
    margins = {"pencil": case.margin_pencil, "line": case.margin_line,
               "total": case.margin_total}
    violations = []
    zeros: dict[str, list[int]] = {}
    for claim in case.claims:
        fn = margins[claim.margin]
        found = []
        for n in ns:
            v = fn(n)
            if claim.identically_zero:
                if v != 0:
                    violations.append((claim.margin, n, str(v)))
                continue
            if v < 0:
                violations.append((claim.margin, n, str(v)))
            elif v == 0:
                found.append(n)
                if n not in claim.zero_at:
                    violations.append((claim.margin, n, "unexpected zero"))
        if not claim.identically_zero:
            zeros[claim.margin] = found
    for n in ns:
        gp, gl = case_g(case, n)
        ep, el = case_g_exact(case, n)
        combined = {
            "combined": l * gp + m * gl,
            "combined-exact": (l * (ep if ep is not None else 0)
                               + m * (el if el is not None else 0)),
        }
        for tag, v in combined.items():
            if v < 0 or (v == 0 and n >= 3):
                violations.append((tag, n, str(v)))
    return {"case": case.name, "plane_reps": l, "line_reps": m,
            "degrees": [ns[0], ns[-1]] if ns else [],
            "zeros": zeros, "violations": violations,
            "ok": not violations}

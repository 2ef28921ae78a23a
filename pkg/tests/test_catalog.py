"""The packaged fixtures keep the facts recorded next to them."""

import random

import pytest

from ncstab import catalog
from ncstab.fields import GF
from ncstab.pointscheme import check_semistandard, classify


def test_fixture_names_cover_the_catalog():
    names = catalog.fixture_names()
    assert "sklyanin-smooth-f10007" in names
    assert "sklyanin-triangle-f13" in names
    assert "quantum-plane-f10007" in names
    assert "line-conic-f7" in names
    assert "commutators-q" in names


def test_unknown_fixture_is_a_key_error():
    with pytest.raises(KeyError):
        catalog.load_fixture("no-such-fixture")


@pytest.mark.parametrize("name", catalog.fixture_names())
def test_fixture_facts_hold(name):
    algebra, doc = catalog.load_fixture(name)
    expected = doc["expected"]
    series = algebra.hilbert(len(expected["hilbert"]) - 1)
    assert series == expected["hilbert"]
    if expected["semistandard"]:
        check_semistandard(algebra)  # must not raise
    report = classify(algebra)
    assert report.verdict == expected["verdict"]


def test_triangle_fixture_vertices_match_report():
    algebra, doc = catalog.load_fixture("sklyanin-triangle-f13")
    report = classify(algebra)
    got = sorted(tuple(int(c) for c in v) for v in report.singular_rational)
    assert got == sorted(tuple(v) for v in doc["vertices"])


def test_swap_invariant_spans_are_semistandard():
    rng = random.Random(9)
    for _ in range(10):
        k = rng.choice([0, 1, 2, 3])
        algebra = catalog.swap_invariant_algebra(GF(13), rng, k)
        check_semistandard(algebra)  # never raises for swap-split spans


def test_builders_accept_rational_parameters():
    from fractions import Fraction
    from ncstab.fields import QQ
    A = catalog.sklyanin(Fraction(1, 2), 2, 3, QQ)
    assert A.hilbert(3) == [1, 3, 6, 10]

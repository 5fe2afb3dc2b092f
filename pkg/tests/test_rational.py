import pytest

from knotgraph.diagram import DiagramError, canonical_gauss, gauss_code, parse_pd
from knotgraph.rational import canonical_fraction, rational_diagram, twist_fraction

from conftest import FIGURE8_PD, TREFOIL_PD


def test_fraction_arithmetic():
    assert twist_fraction([3]) == 3
    assert twist_fraction([2, 2]).numerator == 5
    assert twist_fraction([3, 2]).numerator == 7
    assert twist_fraction([2, 1, 1, 2]).numerator == 13


def test_known_diagrams_match_tables():
    assert canonical_gauss(rational_diagram([3])) == canonical_gauss(parse_pd(TREFOIL_PD))
    assert canonical_gauss(rational_diagram([2, 2])) == canonical_gauss(parse_pd(FIGURE8_PD))


def test_even_numerator_is_link():
    with pytest.raises(DiagramError):
        rational_diagram([2, 1, 2])  # 8/3


def test_diagrams_are_alternating():
    for coeffs in ([4, 3], [2, 2, 3], [5, 1, 2]):
        d = rational_diagram(coeffs)
        kinds = [k for _, k, _ in gauss_code(d)]
        assert all(kinds[i] != kinds[(i + 1) % len(kinds)] for i in range(len(kinds)))


def test_crossing_count_is_twist_sum():
    for coeffs in ([3], [2, 2], [3, 1, 3], [2, 2, 2, 3]):
        assert rational_diagram(coeffs).n == sum(coeffs)


def test_canonical_fraction_identifies_equivalent_forms():
    # 5/2 and 5/3 are the same knot up to mirror; 5/1 is a different one
    assert canonical_fraction(5, 2) == canonical_fraction(5, 3)
    assert canonical_fraction(5, 1) != canonical_fraction(5, 2)


def test_fixture_covers_census(fixture_rows):
    by_n = {}
    for row in fixture_rows:
        by_n[int(row["crossing_number"])] = by_n.get(int(row["crossing_number"]), 0) + 1
    # 2-bridge knot counts per minimal crossing number
    assert by_n == {3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 12, 9: 24, 10: 45, 11: 91, 12: 176}

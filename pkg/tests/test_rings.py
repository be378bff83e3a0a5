from fractions import Fraction

import pytest

from oddcancel.errors import ContextError, DomainError, NotInvertibleError
from oddcancel.rings import Generator, GradedPoly, QSeries, Ring, SCALARS, format_fraction


@pytest.fixture
def ring():
    return Ring([Generator("x", 2), Generator("y", 4)], 8)


def test_generators_sorted_and_unique():
    r = Ring([Generator("y", 4), Generator("x", 2)], 4)
    assert r.names == ("x", "y")
    with pytest.raises(ValueError):
        Ring([Generator("x", 2), Generator("x", 4)], 4)


def test_truncation_at_construction(ring):
    x = ring.gen("x")
    assert (x ** 4).is_zero() is False
    assert (x ** 5).is_zero()
    assert (x ** 3 * ring.gen("y")).is_zero()


def test_arithmetic(ring):
    x, y = ring.gen("x"), ring.gen("y")
    p = (x + 1) * (x - 1)
    assert p == x * x - 1
    assert (p + 1) == x * x
    assert (x * 2).scale(Fraction(1, 2)) == x
    assert (x + y).degree_slice(4) == y
    assert p.scalar_part() == -1


def test_ring_mismatch_raises(ring):
    other = Ring([Generator("x", 2)], 8)
    with pytest.raises(ContextError):
        ring.gen("x") + other.gen("x")


def test_exp_log_inverse(ring):
    x = ring.gen("x")
    e = x.exp()
    assert e == 1 + x + x * x * Fraction(1, 2) + x ** 3 * Fraction(1, 6) + x ** 4 * Fraction(1, 24)
    assert e.log() == x
    assert (e * e.inverse()) == ring.one()
    with pytest.raises(DomainError):
        (x + 1).exp()
    with pytest.raises(DomainError):
        (x + 2).log()
    with pytest.raises(NotInvertibleError):
        x.inverse()


def test_text_and_json_roundtrip(ring):
    p = ring.gen("x").scale(Fraction(-3, 4)) + ring.gen("y") * 2 + 5
    assert p.to_text() == "5 - 3/4*x + 2*y"
    assert GradedPoly.from_json(ring, p.to_json()) == p


def test_format_fraction():
    assert format_fraction(Fraction(3, 1)) == "3"
    assert format_fraction(Fraction(-1, 8)) == "-1/8"


def test_qseries_product_and_truncation():
    s = QSeries.scalars(4, [1, 1])  # 1 + q^{1/2}
    sq = s * s
    assert sq.scalar_values() == [1, 2, 1, 0, 0]
    assert (s ** 4).scalar_values() == [1, 4, 6, 4, 1]
    assert s.truncate(K=1).K == 1
    assert s.shift(2).scalar_values() == [0, 0, 1, 1, 0]


def test_qseries_invert_exp_log():
    s = QSeries.scalars(6, [1, -1])
    inv = s.invert()
    assert inv.scalar_values() == [1] * 7
    ring = Ring([Generator("x", 2)], 6)
    a = QSeries(ring, 4, {0: ring.gen("x"), 1: ring.const(3), 2: ring.gen("x")})
    assert a.exp().log() == a


def test_qseries_text():
    s = QSeries.scalars(4, [Fraction(1, 4), 0, 6, 0, 6])
    assert s.to_text() == "1/4 + 6q + 6q^2 + O(q^(5/2))"
    assert QSeries.scalars(3, [0, -3, 1]).to_text() == "-3q^(1/2) + q + O(q^2)"


def test_qseries_json_roundtrip(ring):
    s = QSeries(ring, 3, {0: ring.gen("x"), 3: ring.gen("y").scale(Fraction(2, 3))})
    assert QSeries.from_json(s.to_json()) == s


def test_scalars_ring():
    assert SCALARS.max_degree == 0
    assert SCALARS.const(3).scalar_part() == 3

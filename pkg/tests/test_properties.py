"""Randomized algebraic laws, 1000 cases per property."""

from math import comb

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oddcancel.bundles import BundleContext, adams, chern_character, sym, trivial, wedge
from oddcancel.rings import QSeries

from strategies import RING, bundles, nilpotents, polys, qseries

CASES = settings(max_examples=1000, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
CTX = BundleContext(2, twisted=True)


def ch(b):
    return chern_character(b, CTX)


# ring axioms ---------------------------------------------------------------

@CASES
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + RING.zero() == a
    assert a * RING.one() == a
    assert (a - a).is_zero()


@CASES
@given(qseries(), qseries(), qseries())
def test_qseries_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * QSeries.one(RING, a.K) == a


# exp / log -----------------------------------------------------------------

@CASES
@given(nilpotents(), nilpotents())
def test_exp_log_roundtrip(x, y):
    assert x.exp().log() == x
    assert (1 + x).log().exp() == 1 + x
    assert (x + y).exp() == x.exp() * y.exp()
    assert x.exp() * (-x).exp() == RING.one()


@CASES
@given(qseries(K=4, max_terms=2))
def test_qseries_exp_log_roundtrip(a):
    a = QSeries(RING, a.K, [a[0] - a[0].degree_zero_part()] + list(a.coeffs[1:]))
    assert a.exp().log() == a


# truncation coherence ------------------------------------------------------

@CASES
@given(qseries(), qseries(), st.integers(0, 5), st.integers(0, 10))
def test_truncation_coherence(a, b, k, d):
    assert (a * b).truncate(K=k) == a.truncate(K=k) * b.truncate(K=k)
    assert (a + b).truncate(K=k) == a.truncate(K=k) + b.truncate(K=k)
    pa, pb = a[0], b[0]
    assert (pa * pb).truncate(d) == (pa.truncate(d) * pb.truncate(d)).truncate(d)


# lambda-ring laws ------------------------------------------------------------

@CASES
@given(bundles(), bundles())
def test_lambda_ring_laws(a, b):
    assert ch(a + b) == ch(a) + ch(b)
    assert ch(a * b) == ch(a) * ch(b)
    assert ch(wedge(2, a + b)) == ch(wedge(2, a)) + ch(a) * ch(b) + ch(wedge(2, b))
    assert ch(sym(2, a)) - ch(wedge(2, a)) == adams(ch(a), 2)
    # lambda_t(a) * sigma_{-t}(a) = 1, degree 3 part
    total = sum((ch(wedge(i, a)) * ch(sym(3 - i, a))).scale((-1) ** i) for i in range(4))
    assert total.is_zero()
    assert adams(ch(a) * ch(b), 3) == adams(ch(a), 3) * adams(ch(b), 3)


@CASES
@given(st.integers(0, 12), st.integers(0, 4))
def test_lambda_of_trivial(n, k):
    assert ch(wedge(k, trivial(n))) == CTX.ring.const(comb(n, k))
    multisets = comb(n + k - 1, k) if n else int(k == 0)
    assert ch(sym(k, trivial(n))) == CTX.ring.const(multisets)

"""Hypothesis strategies shared by the property suites."""

from hypothesis import strategies as st

from oddcancel.bundles import E, T, XI_C, trivial
from oddcancel.rings import Generator, GradedPoly, QSeries, Ring

RING = Ring([Generator("a", 2), Generator("b", 4), Generator("c", 6), Generator("n", 0)], 10)

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def polys(draw, ring=RING, max_terms=5, allow_degree_zero=True):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        mono = (
            draw(st.integers(0, 4)),
            draw(st.integers(0, 2)),
            draw(st.integers(0, 1)),
            draw(st.integers(0, 2)),
        )
        if not allow_degree_zero and ring.degree_of(mono) == 0:
            continue
        terms[mono] = draw(small_q)
    return GradedPoly(ring, terms)


@st.composite
def nilpotents(draw):
    # no degree-0 part: exp/log terminate
    return draw(polys(allow_degree_zero=False))


@st.composite
def qseries(draw, K=5, max_terms=3):
    coeffs = {}
    for k in range(K + 1):
        if draw(st.booleans()):
            coeffs[k] = draw(polys(max_terms=max_terms))
    return QSeries(RING, K, coeffs)


@st.composite
def bundles(draw):
    # integer combinations of the atoms and the trivial line
    a, b, c, d = (draw(st.integers(-3, 3)) for _ in range(4))
    return a * T + b * E + c * XI_C + trivial(d)


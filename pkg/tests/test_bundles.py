from fractions import Fraction

import pytest

from oddcancel.bundles import (
    CROSSCHECK_IDS,
    DELTA_E,
    E,
    ONE,
    T,
    THETA_SERIES,
    XI_C,
    BundleContext,
    NamedClasses,
    chern_character,
    crosscheck,
    expand_theta_bundle,
    odd_ch,
    rank,
    spinor,
    sym,
    theta_build,
    tilde,
    to_text,
    wedge,
)
from oddcancel.errors import ConfigurationError
from oddcancel.phi import a_hat, l_hat


@pytest.fixture(scope="module")
def ctx():
    return BundleContext(3)


def test_ranks_agree_with_degree_zero_ch():
    ctx = BundleContext(3, twisted=True)
    exprs = [T, E, XI_C, wedge(2, E), sym(2, T), T * E - 3 * XI_C, tilde(E), DELTA_E, spinor("TM"),
             wedge(3, T + E)]
    for b in exprs:
        assert chern_character(b, ctx).degree_zero_part() == rank(b, ctx).degree_zero_part()


def test_tilde_has_rank_zero(ctx):
    assert chern_character(tilde(T), ctx).degree_zero_part().is_zero()


def test_ch_tangent_low_degree(ctx):
    # ch(T_C M) = 4r - 1 + sum 2 cos(2 z_j) - 2, so the degree-4 part is -4 t1
    c = chern_character(T, ctx)
    assert c.scalar_part() == 11
    assert c.degree_slice(4) == ctx.ring.gen("t1").scale(-4)


def test_spinor_of_tangent_is_l_hat_ratio(ctx):
    # ch(Delta(TM)) * A-hat = L-hat in the model (Delta(TM) of rank 2^{2r-1})
    nc = NamedClasses(ctx)
    lhs = chern_character(spinor("TM"), ctx) * nc.a_hat
    assert lhs == nc.l_hat


def test_named_forms_match_phi_module(ctx):
    from oddcancel.phi import class_ring

    nc = NamedClasses(ctx)
    ring = class_ring(3, spinor=True)
    assert nc.a_hat == a_hat(ring)
    assert nc.l_hat == l_hat(ring).scale(2 ** 5)


def test_odd_ch_drops_e1(ctx):
    o = odd_ch(E, ctx)
    assert all(m[ctx.ring.index("e1")] == 0 for m in o.terms)
    assert not o.is_zero()


def test_to_text():
    assert to_text(T + 2 * E).count("E") == 1
    assert "L^2" in to_text(wedge(2, E))


@pytest.mark.parametrize("which", THETA_SERIES)
@pytest.mark.parametrize("twisted", [False, True])
def test_expansion_matches_theta_build(which, twisted):
    ctx = BundleContext(2, twisted)
    exp = expand_theta_bundle(which, 4, twisted).chern_character(ctx)
    assert exp == theta_build(which, ctx, 4)


def test_theta1_leading_terms():
    s = expand_theta_bundle("Theta1", 2)
    assert s[0] == ONE
    ctx = BundleContext(2)
    assert chern_character(s[2], ctx) == chern_character(2 * tilde(T), ctx)
    assert chern_character(s[1], ctx).is_zero()


def test_expansion_order_limit():
    with pytest.raises(ConfigurationError):
        expand_theta_bundle("Theta1", 5)
    with pytest.raises(ConfigurationError):
        expand_theta_bundle("Theta9", 2)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_engine_routes_agree(r):
    for i in CROSSCHECK_IDS:
        assert crosscheck(i, r).engine_agrees


@pytest.mark.parametrize("r", [2, 3, 4])
def test_printed_expansions_that_hold(r):
    for i in ("3.24", "4.8"):
        assert crosscheck(i, r).printed_agrees


def test_constant_term_of_theta1_printed_as_two():
    res = crosscheck("3.34", 3)
    assert list(res.printed_diff) == [0]
    assert res.notes


def test_q1_coefficient_of_theta1_q1():
    # odd part of the q^1 coefficient is 2 T~ (x) Delta(E) + Delta(E) (x) E~
    ctx = BundleContext(3)
    s = expand_theta_bundle("Theta1*Q1", 2).chern_character(ctx)
    expected = odd_ch(2 * (tilde(T) * DELTA_E) + DELTA_E * tilde(E), ctx)
    assert odd_ch_of(s[2]) == expected
    res = crosscheck("3.36", 3)
    assert not res.printed_agrees


def odd_ch_of(p):
    from oddcancel.phi import odd_part

    return odd_part(p)


def test_unknown_crosscheck_id():
    with pytest.raises(ConfigurationError):
        crosscheck("1.1", 2)


def test_concrete_rank_context():
    ctx = BundleContext(2, N=4)
    assert chern_character(E, ctx).scalar_part() == 4
    assert chern_character(DELTA_E, ctx).scalar_part() == 4
    assert rank(wedge(2, E), ctx).scalar_part() == Fraction(6)

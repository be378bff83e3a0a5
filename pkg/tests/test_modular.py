from fractions import Fraction

import pytest

from oddcancel.errors import CertificationError, ConfigurationError, ModularityViolation
from oddcancel.modular import (
    FAMILIES,
    basis_expansions,
    basis_oracle,
    derive,
    emit_identities,
    h2_structure,
    printed_check,
    solve_h,
    two_adic_exponent,
)
from oddcancel.phi import GeometrySpec, PhiKind, build_phi, top_slice
from oddcancel.prefactor import PowerOfTwo
from oddcancel.rings import QSeries
from oddcancel.theta import delta_eps


def gamma0_element(r, l, K):
    d1 = delta_eps("delta1", K).series.scale(8)
    e1 = delta_eps("eps1", K).series
    n = r - 2 * l
    p = d1 ** n if n >= 0 else (d1 ** (-n)).invert()
    return p * e1 ** l


@pytest.mark.parametrize("r", range(2, 7))
@pytest.mark.parametrize("l", [1, 2])
def test_basis_oracle(r, l):
    s = gamma0_element(r, l, 4)
    assert [s[k].scalar_part() for k in (0, 2, 4)] == basis_oracle(r, l)


def test_r2_l1_second_order_value():
    # 288*4 - 1536*2 + 2048 + 512 - 264*2 = 112
    s = gamma0_element(2, 1, 4)
    assert s[4].scalar_part() == Fraction(112, 16)
    assert basis_oracle(2, 1)[2] / basis_oracle(2, 1)[0] == 112


def test_basis_leading_coefficients():
    for r in range(1, 7):
        b = basis_expansions(r, r + 4)
        for l in range(b.size):
            assert b.upper[l].leading_index() == l
            assert b.leading(l) == (-1) ** r


def test_r1_empty():
    rep = derive(GeometrySpec(1))
    assert len(rep.h) == 1 and rep.h[0].is_zero()
    assert rep.phi_L_top.is_zero()
    assert all(i.verified for i in rep.identities)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
@pytest.mark.parametrize("twisted", [False, True])
def test_derive_certifies(r, twisted):
    rep = derive(GeometrySpec(r, twisted=twisted))
    assert rep.h[0].is_zero()
    assert rep.transport_verified
    assert rep.residual_max_order == Fraction(rep.spec.K, 2)
    assert all(i.verified for i in rep.identities)


def test_modularity_violation_detected():
    spec = GeometrySpec(3)
    top = top_slice(build_phi(spec, PhiKind.W))
    bad = top + QSeries.q_power(top.ring, top.K, 5, top.ring.gen("e3"))
    with pytest.raises(ModularityViolation):
        solve_h(bad, basis_expansions(3, spec.K), spec)


def test_nonzero_h0_rejected():
    spec = GeometrySpec(2)
    basis = basis_expansions(2, spec.K)
    top = top_slice(build_phi(spec, PhiKind.W))
    ring = top.ring
    extra = basis.upper[0].truncate(K=spec.K).embed(ring).scale(ring.gen("e2"))
    with pytest.raises(CertificationError):
        solve_h(top + extra, basis, spec)


def test_two_adic_exponents():
    for r in (2, 3, 4, 5):
        rep = derive(GeometrySpec(r))
        base = -1 if r % 2 == 0 else 2
        assert two_adic_exponent(rep, "3.20") == PowerOfTwo.spinor(base)
        assert two_adic_exponent(rep, "3.38") == PowerOfTwo.spinor(base + 5)
        assert two_adic_exponent(rep, "3.41") == PowerOfTwo.spinor(base + 10)


def test_emit_unknown_and_short_order():
    rep = derive(GeometrySpec(3))
    with pytest.raises(ConfigurationError):
        emit_identities(rep, "9.99")
    short = derive(GeometrySpec(3, K=1), families=["3.20"])
    with pytest.raises(ConfigurationError):
        emit_identities(short, "3.41")


def test_h1_named_form():
    for r in (2, 3, 4):
        assert printed_check("3.25", derive(GeometrySpec(r))).holds
        assert printed_check("4.9", derive(GeometrySpec(r, twisted=True))).holds


def test_h2_constant_engine_values():
    assert h2_structure(derive(GeometrySpec(4))) == (41, -1)
    assert h2_structure(derive(GeometrySpec(5))) == (-61, 1)
    assert h2_structure(derive(GeometrySpec(4, twisted=True))) == (47, -1)


def test_h2_sign_corrected_relation():
    # h_2 = (-1)^r [A ch~(B_2) + (8 + 24(r-2)) A ch(E)] with
    # ch~(B_2) = ch(wedge^2 E) - N ch(E) + (ch(T) - (4r-1)) ch(E)
    for r in (4, 5):
        a, b = h2_structure(derive(GeometrySpec(r)))
        sgn = (-1) ** r
        assert a == sgn * (-(4 * r - 1) + 8 + 24 * (r - 2))
        assert b == -sgn


def test_report_serialization_is_deterministic():
    a = derive(GeometrySpec(3)).dumps()
    b = derive(GeometrySpec(3)).dumps()
    assert a == b
    assert '"two_adic"' in a


def test_families_table():
    assert set(FAMILIES) == {"3.20", "3.38", "3.41"}

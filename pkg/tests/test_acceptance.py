"""Acceptance suite: one test and one summary line per criterion."""

import time
from fractions import Fraction

from oddcancel.bundles import CROSSCHECK_IDS, crosscheck
from oddcancel.modular import (
    basis_oracle,
    derive,
    h2_structure,
    printed_check,
    two_adic_exponent,
)
from oddcancel.phi import GeometrySpec
from oddcancel.prefactor import PowerOfTwo
from oddcancel.theta import delta_eps

import test_numeric
import test_properties


def test_criterion_01_delta_eps(criterion):
    t = time.perf_counter()
    displayed = {
        "delta1": {0: Fraction(1, 4), 2: 6, 4: 6},
        "eps1": {0: Fraction(1, 16), 2: -1, 4: 7},
        "delta2": {0: Fraction(-1, 8), 1: -3, 2: -3},
        "eps2": {0: 0, 1: 1, 2: 8},
    }
    ok = True
    for name, shown in displayed.items():
        vals = delta_eps(name, 10).series.scalar_values()
        ok &= all(vals[k] == v for k, v in shown.items())
        ok &= all(v.denominator == 1 for v in vals[1:])
    dt = time.perf_counter() - t
    ok &= dt < 1
    criterion(1, ok, f"displayed terms exact, integral through q^5, {dt:.3f}s")
    assert ok


def test_criterion_02_basis_oracle(criterion):
    t = time.perf_counter()
    ok = True
    for r in range(2, 7):
        for l in (1, 2):
            d1 = delta_eps("delta1", 4).series.scale(8)
            e1 = delta_eps("eps1", 4).series
            n = r - 2 * l
            s = (d1 ** n if n >= 0 else (d1 ** (-n)).invert()) * e1 ** l
            vals = s.scalar_values()
            ok &= [vals[0], vals[2], vals[4]] == basis_oracle(r, l)
            ok &= vals[1] == vals[3] == 0
    dt = time.perf_counter() - t
    ok &= dt < 5
    criterion(2, ok, f"r=2..6, l=1,2 match the closed form; r=2,l=1 q^2 factor is 112; {dt:.3f}s")
    assert ok


def test_criterion_03_dim11(criterion):
    t = time.perf_counter()
    rep = derive(GeometrySpec(3, K=7))
    ok = rep.h[0].is_zero()
    ok &= rep.residual_max_order == Fraction(7, 2)
    ok &= printed_check("3.25", rep).holds
    ok &= printed_check("3.32", rep).holds
    ok &= two_adic_exponent(rep, "3.20") == PowerOfTwo.spinor(2)
    dt = time.perf_counter() - t
    ok &= dt < 30
    criterion(3, ok, f"h_0 = 0, residual zero through q^7/2, h_1 named form and 2^(N/2+2) identity hold, {dt:.2f}s")
    assert ok


def test_criterion_04_dim15(criterion):
    t = time.perf_counter()
    rep = derive(GeometrySpec(4, K=8))
    h2 = printed_check("3.30", rep)
    ident = printed_check("3.33", rep)
    a, b = h2_structure(rep)
    dt = time.perf_counter() - t
    ok = h2.holds and ident.holds and dt < 120
    engine_family = all(i.verified for i in rep.identities)
    criterion(
        4, ok,
        f"displayed h_2 form holds: {h2.holds}; displayed -(113+N) identity holds: {ident.holds}; "
        f"engine h_2 constant {a}{'+' if b > 0 else '-'}N gives -(23+N); "
        f"q-series identities verified: {engine_family}; {dt:.2f}s",
    )
    assert h2.holds, f"h_2 structure: {h2.detail}"
    assert ident.holds, f"cancellation identity: {ident.detail}"


def test_criterion_05_higher(criterion):
    t = time.perf_counter()
    rep = derive(GeometrySpec(3, K=7))
    c42 = printed_check("3.42", rep)
    c43 = printed_check("3.43", rep)
    q_forms = all(i.verified for i in rep.identities if i.id in ("3.38", "3.41"))
    dt = time.perf_counter() - t
    ok = c42.holds and c43.holds and dt < 60
    criterion(
        5, ok,
        f"named 36 / 2^(7+N/2) form holds: {c42.holds}; named -149/-864/2^(12+N/2) form holds: "
        f"{c43.holds}; Phi_L q-coefficient forms verified: {q_forms}; {dt:.2f}s",
    )
    assert c42.holds and c43.holds


def test_criterion_06_twisted(criterion):
    t = time.perf_counter()
    r3 = derive(GeometrySpec(3, twisted=True, K=7))
    r4 = derive(GeometrySpec(4, twisted=True, K=8))
    c13 = printed_check("4.13", r3)
    c14 = printed_check("4.14", r4)
    c19 = printed_check("4.19", r3)
    dt = time.perf_counter() - t
    ok = c13.holds and c14.holds and c19.holds and dt < 180
    criterion(
        6, ok,
        f"r=3 identity holds: {c13.holds}; r=4 identity holds: {c14.holds} ({c14.detail}); "
        f"r=3 named q^1 form holds: {c19.holds}; {dt:.2f}s",
    )
    assert c13.holds and c14.holds and c19.holds


def test_criterion_07_crosschecks(criterion):
    failures = []
    engine_ok = True
    for i in CROSSCHECK_IDS:
        for r in (2, 3, 4):
            res = crosscheck(i, r)
            engine_ok &= res.engine_agrees
            if not res.passed:
                failures.append(f"{i}@r={r}")
    ok = not failures
    bad_ids = sorted({f.split("@")[0] for f in failures})
    criterion(
        7, ok,
        f"lambda-ring vs theta routes agree everywhere: {engine_ok}; "
        f"displayed expansions failing: {', '.join(bad_ids) or 'none'}",
    )
    assert ok, failures


def test_criterion_08_two_adic(criterion):
    ok = True
    for r in (2, 3, 4, 5):
        rep = derive(GeometrySpec(r))
        base = -1 if r % 2 == 0 else 2
        for fam, extra in (("3.20", 0), ("3.38", 5), ("3.41", 10)):
            ok &= two_adic_exponent(rep, fam) == PowerOfTwo.spinor(base + extra)
    criterion(8, ok, "N/2-1|N/2+2, N/2+4|N/2+7, N/2+9|N/2+12 for r=2..5")
    assert ok


def test_criterion_09_numeric(criterion):
    from oddcancel.numeric import LAWS, check_grid, check_phi_s_relation

    t = time.perf_counter()
    worst_law = max(r.residual for law in LAWS for r in check_grid(law))
    s_cases = [(1, 2, (0.11,), ()), (1, 2, (-0.09,), ()), (2, 4, (0.09, -0.13), (0.05,)),
               (2, 2, (0.1, 0.08), ())]
    worst_s = max(
        check_phi_s_relation(r, N, tm, e, tau).residual
        for r, N, tm, e in s_cases
        for tau in (0.3 + 1.1j, 1.2j, -0.2 + 0.8j)
    )
    # each helper asserts agreement below 1e-8
    sym_ok = True
    try:
        for q in test_numeric.QS:
            for kind in test_numeric.BLOCK_Z:
                test_numeric.test_blocks_vs_numeric(kind, q)
            for name in ("delta1", "eps1", "delta2", "eps2"):
                test_numeric.test_delta_eps_series_vs_numeric(name, q)
        for kind in test_numeric.BLOCK_Z:
            test_numeric.test_block_taylor_coefficients(kind)
    except AssertionError:
        sym_ok = False
    dt = time.perf_counter() - t
    ok = worst_law < 1e-9 and worst_s < 1e-6 and sym_ok and dt < 30
    criterion(9, ok, f"law residual {worst_law:.1e}, S-relation {worst_s:.1e}, "
                     f"symbolic vs numeric below 1e-8: {sym_ok}, {dt:.2f}s")
    assert ok


def test_criterion_10_properties(criterion):
    props = [
        test_properties.test_ring_axioms,
        test_properties.test_qseries_ring_axioms,
        test_properties.test_exp_log_roundtrip,
        test_properties.test_qseries_exp_log_roundtrip,
        test_properties.test_truncation_coherence,
        test_properties.test_lambda_ring_laws,
        test_properties.test_lambda_of_trivial,
    ]
    failed = []
    for p in props:
        try:
            p()
        except Exception as exc:  # noqa: BLE001
            failed.append(f"{p.__name__}: {type(exc).__name__}")
    ok = not failed
    criterion(10, ok, f"{len(props)} suites x 1000 cases, failures: {', '.join(failed) or 'none'}")
    assert ok

"""Exact q^{1/2}-expansions of Jacobi theta null values, the level-2 forms
delta/epsilon, and logarithms of the normalized theta quotients.

All expansions use the variable ``z = pi * x`` so that sin, cos and the
factors ``(1 - e^{+-2 pi i x} q^j)`` have rational Taylor coefficients.
Prefactors ``2 q^{1/8}`` and ``pi`` are carried separately (see
:class:`ThetaNull`) because only quotients and fourth powers are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .rings import SCALARS, Generator, GradedPoly, QSeries, Ring


class ThetaFlavor(Enum):
    THETA = "theta"
    THETA1 = "theta1"
    THETA2 = "theta2"
    THETA3 = "theta3"


def _product(K: int, factors) -> QSeries:
    """prod (1 + c * Q^m) over (c, m) pairs, Q = q^{1/2}, truncated at Q^K."""
    coeffs = [Fraction(0)] * (K + 1)
    coeffs[0] = Fraction(1)
    for c, m in factors:
        if m > K:
            continue
        for k in range(K, m - 1, -1):
            if coeffs[k - m]:
                coeffs[k] += c * coeffs[k - m]
    return QSeries.scalars(K, coeffs)


def _euler_factors(K):
    # (1 - q^j)
    return [(-1, 2 * j) for j in range(1, K // 2 + 1)]


@dataclass(frozen=True)
class ThetaNull:
    """``theta_f(0, tau) = scale * q^{q_eighths/8} * series``."""

    flavor: ThetaFlavor
    series: QSeries
    scale: Fraction
    q_eighths: int

    def fourth_power(self) -> QSeries:
        """``theta_f(0, tau)^4`` as an honest series in q^{1/2}."""
        shift = self.q_eighths  # (q^{e/8})^4 = q^{e/2}, i.e. index e
        return (self.series ** 4).shift(shift).scale(self.scale ** 4)


def theta_nullwert(flavor: ThetaFlavor | str, K: int) -> ThetaNull:
    """Theta null value ``theta_f(0, tau)`` through q^{K/2}."""
    flavor = ThetaFlavor(flavor)
    if K < 0:
        raise ValueError("K must be non-negative")
    euler = _euler_factors(K)
    if flavor is ThetaFlavor.THETA:
        return ThetaNull(flavor, QSeries.zero(SCALARS, K), Fraction(0), 1)
    if flavor is ThetaFlavor.THETA1:
        plus = [(1, 2 * j) for j in range(1, K // 2 + 1)]
        return ThetaNull(flavor, _product(K, euler + plus + plus), Fraction(2), 1)
    odd = [(2 * j - 1) for j in range(1, (K + 1) // 2 + 1)]
    sign = -1 if flavor is ThetaFlavor.THETA2 else 1
    half = [(sign, m) for m in odd]
    return ThetaNull(flavor, _product(K, euler + half + half), Fraction(1), 0)


def theta_prime_normalized(K: int) -> QSeries:
    """``theta'(0, tau) / (2 pi q^{1/8}) = prod (1 - q^j)^3``."""
    euler = _euler_factors(K)
    return _product(K, euler * 3)


def theta_sum_formula(flavor: ThetaFlavor | str, K: int) -> QSeries:
    """Normalized null value from the bilateral sum ``sum_n (+-1)^n q^{n^2/2}``.

    Independent of the product route; theta1 uses
    ``sum_{n>=0} q^{(n+1/2)^2/2} = q^{1/8} sum q^{n(n+1)/2}``.
    """
    flavor = ThetaFlavor(flavor)
    coeffs = [Fraction(0)] * (K + 1)
    if flavor is ThetaFlavor.THETA:
        return QSeries.scalars(K, coeffs)
    if flavor is ThetaFlavor.THETA1:
        n = 0
        while n * (n + 1) <= K:
            coeffs[n * (n + 1)] += 1
            n += 1
        return QSeries.scalars(K, coeffs)
    sign = -1 if flavor is ThetaFlavor.THETA2 else 1
    n = 0
    while n * n <= K:
        coeffs[n * n] += (1 if n == 0 else 2) * sign ** n
        n += 1
    return QSeries.scalars(K, coeffs)


# ---------------------------------------------------------------------------


GAMMA_0_2 = "Gamma_0(2)"
GAMMA0_2 = "Gamma^0(2)"


@dataclass(frozen=True)
class ModForm:
    name: str
    series: QSeries
    weight: int
    group: str


_FORMS = {
    "delta1": (2, GAMMA_0_2),
    "eps1": (4, GAMMA_0_2),
    "delta2": (2, GAMMA0_2),
    "eps2": (4, GAMMA0_2),
}


def delta_eps(which: str, K: int) -> ModForm:
    """One of ``delta1, eps1, delta2, eps2`` through q^{K/2}."""
    if which not in _FORMS:
        raise ValueError(f"unknown form {which!r}; choose from {sorted(_FORMS)}")
    weight, group = _FORMS[which]
    t1 = theta_nullwert(ThetaFlavor.THETA1, K).fourth_power()
    t2 = theta_nullwert(ThetaFlavor.THETA2, K).fourth_power()
    t3 = theta_nullwert(ThetaFlavor.THETA3, K).fourth_power()
    if which == "delta1":
        s = (t2 + t3).scale(Fraction(1, 8))
    elif which == "eps1":
        s = (t2 * t3).scale(Fraction(1, 16))
    elif which == "delta2":
        s = (t1 + t3).scale(Fraction(-1, 8))
    else:
        s = (t1 * t3).scale(Fraction(1, 16))
    return ModForm(which, s, weight, group)


# ---------------------------------------------------------------------------
# log blocks

Z = "z"
BLOCK_KINDS = ("witten", "b1", "b2", "b3", "inv_sq_b1", "inv_sq_b2", "inv_sq_b3")


def z_ring(D: int) -> Ring:
    return Ring([Generator(Z, 2)], D)


def _taylor(ring: Ring, coeffs) -> GradedPoly:
    """sum_k coeffs[k] z^{2k} in ``ring``."""
    return GradedPoly(ring, {(2 * k,): c for k, c in enumerate(coeffs)})


def log_z_over_sin(ring: Ring) -> GradedPoly:
    kmax = ring.max_degree // 4
    sinc = _taylor(ring, [Fraction((-1) ** n, math.factorial(2 * n + 1)) for n in range(kmax + 1)])
    return -sinc.log()


def log_cos(ring: Ring) -> GradedPoly:
    kmax = ring.max_degree // 4
    cos = _taylor(ring, [Fraction((-1) ** n, math.factorial(2 * n)) for n in range(kmax + 1)])
    return cos.log()


def cos2m_minus_one(ring: Ring, m: int) -> GradedPoly:
    """``cos(2 m z) - 1``."""
    kmax = ring.max_degree // 4
    return _taylor(
        ring,
        [Fraction(0)]
        + [Fraction((-1) ** k * (2 * m) ** (2 * k), math.factorial(2 * k)) for k in range(1, kmax + 1)],
    )


def _factor_terms(kind: str, K: int):
    """(q^{1/2}-exponent, weight, m) triples: weight * (cos 2mz - 1) * Q^e."""
    out = []
    if kind in ("witten", "b1"):
        for j in range(1, K // 2 + 1):
            for m in range(1, K // (2 * j) + 1):
                if kind == "witten":
                    w = Fraction(2, m)
                else:
                    w = Fraction(2 * (-1) ** (m + 1), m)
                out.append((2 * j * m, w, m))
    else:
        for j in range(1, (K + 1) // 2 + 1):
            for m in range(1, K // (2 * j - 1) + 1):
                if kind == "b2":
                    w = Fraction(-2, m)
                else:
                    w = Fraction(2 * (-1) ** (m + 1), m)
                out.append((m * (2 * j - 1), w, m))
    return out


@dataclass(frozen=True)
class LogBlock:
    """Log of a normalized theta quotient as a series in (z^2, q^{1/2}).

    ``witten``: log(x theta'(0)/theta(x)); ``b1, b2, b3``:
    log(theta_j(x)/theta_j(0)); ``inv_sq_bj = -2 * bj``.
    """

    kind: str
    series: QSeries

    @property
    def max_power(self) -> int:
        return self.series.ring.max_degree // 4

    def coefficient_series(self, k: int) -> QSeries:
        """Scalar series multiplying ``z^{2k}``."""
        vals = [c.coeff({Z: 2 * k}) for c in self.series.coeffs]
        return QSeries.scalars(self.series.K, vals)

    def over_power_sums(self, ring: Ring, power_sum, K: int | None = None) -> QSeries:
        """``sum_k c_k(q) * power_sum(k)``: the block summed over a root set.

        ``power_sum(k)`` returns the GradedPoly standing for ``sum z_j^{2k}``
        (or ``None`` to drop that power).
        """
        K = self.series.K if K is None else K
        out = QSeries.zero(ring, K)
        for k in range(1, self.max_power + 1):
            p = power_sum(k)
            if p is None or p.is_zero():
                continue
            c = self.coefficient_series(k).truncate(K=K).embed(ring)
            out = out + c.scale(p)
        return out


def log_block(kind: str, K: int, D: int) -> LogBlock:
    if kind not in BLOCK_KINDS:
        raise ValueError(f"unknown block {kind!r}; choose from {BLOCK_KINDS}")
    if kind.startswith("inv_sq_"):
        base = log_block(kind[len("inv_sq_"):], K, D)
        return LogBlock(kind, base.series.scale(-2))
    ring = z_ring(D)
    coeffs = {}
    if kind == "witten":
        coeffs[0] = log_z_over_sin(ring)
    elif kind == "b1":
        coeffs[0] = log_cos(ring)
    cache = {}
    for e, w, m in _factor_terms(kind, K):
        if m not in cache:
            cache[m] = cos2m_minus_one(ring, m)
        coeffs[e] = coeffs.get(e, ring.zero()) + cache[m].scale(w)
    return LogBlock(kind, QSeries(ring, K, coeffs))

"""Characteristic q-series Phi_L, Phi_W, Phi'_W over the class ring.

Class ring generators (all of cohomological degree ``4k`` for index ``k``):

``t1..tr``
    power sums ``sum_j z_j^{2k}`` of the tangent Chern roots (``z = pi x``).
``e1..er``
    power sums of the roots of ``E``.  The odd Chern character of ``E``
    enters only linearly (it is a transgression of a flat family), so a
    Phi series keeps exactly the part of total ``e``-degree one.  ``e1``
    is the class killed by the hypothesis ``c_3(E, g, d) = 0``.
``v``
    ``(pi u)^2`` for the rank-two bundle ``xi`` (twisted mode, degree 4).
``N``
    rank of ``E`` (degree 0) when it is kept symbolic.

The degree-``4r`` slice of this even model plays the role of the
degree-``(4r-1)`` component of the odd forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import ConfigurationError
from .prefactor import PowerOfTwo
from .rings import Generator, GradedPoly, QSeries, Ring
from .theta import LogBlock, log_block


class PhiKind(Enum):
    L = "phi_L"
    W = "phi_W"
    W_PRIME = "phi_W_prime"


# which theta_j appears with each kind, and the xi block (coefficient, flavor)
_TM_FLAVOR = {PhiKind.L: "b1", PhiKind.W: "b2", PhiKind.W_PRIME: "b3"}
_XI_BLOCKS = {
    PhiKind.L: ((-2, "b1"), (1, "b3"), (1, "b2")),
    PhiKind.W: ((-2, "b2"), (1, "b3"), (1, "b1")),
    PhiKind.W_PRIME: ((-2, "b3"), (1, "b1"), (1, "b2")),
}


def t_name(k: int) -> str:
    return f"t{k}"


def e_name(k: int) -> str:
    return f"e{k}"


XI = "v"
RANK_N = "N"
SPINOR_RANK = "S"  # stands for 2^{N/2}; only in bundle-algebra rings


def class_ring(r: int, twisted: bool = False, symbolic_n: bool = True, spinor: bool = False) -> Ring:
    gens = [Generator(t_name(k), 4 * k) for k in range(1, r + 1)]
    gens += [Generator(e_name(k), 4 * k) for k in range(1, r + 1)]
    if twisted:
        gens.append(Generator(XI, 4))
    if symbolic_n:
        gens.append(Generator(RANK_N, 0))
    if spinor:
        gens.append(Generator(SPINOR_RANK, 0))
    return Ring(gens, 4 * r)


@dataclass(frozen=True)
class GeometrySpec:
    r: int
    N: int | None = None  # None: symbolic rank
    twisted: bool = False
    K: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise ConfigurationError("r must be >= 1")
        if self.N is not None and (self.N < 2 or self.N % 2):
            raise ConfigurationError("concrete N must be even and >= 2")
        if self.K is None:
            object.__setattr__(self, "K", default_q_order(self.r))
        if self.K < 0:
            raise ConfigurationError("q-order must be non-negative")

    @property
    def dimension(self) -> int:
        return 4 * self.r - 1

    @property
    def D(self) -> int:
        return 4 * self.r

    @property
    def ring(self) -> Ring:
        return class_ring(self.r, self.twisted, self.N is None)

    def rank_n(self, ring: Ring | None = None) -> GradedPoly:
        ring = ring or self.ring
        return ring.gen(RANK_N) if self.N is None else ring.const(self.N)


def default_q_order(r: int) -> int:
    return 2 * math.ceil(r / 2) + 4


@dataclass(frozen=True)
class PhiSeries:
    kind: PhiKind
    twisted: bool
    series: QSeries
    prefactor: PowerOfTwo = field(default_factory=PowerOfTwo)
    spec: GeometrySpec | None = None


@lru_cache(maxsize=None)
def _block(kind: str, K: int, D: int) -> LogBlock:
    return log_block(kind, K, D)


def _tm_power_sum(ring):
    return lambda k: ring.gen(t_name(k))


def _e_power_sum(ring):
    # e1 is dropped: c_3(E, g, d) = 0
    return lambda k: ring.gen(e_name(k)) if k >= 2 else None


def _xi_power_sum(ring):
    v = ring.gen(XI)
    return lambda k: v ** k


def tm_exponent(spec: GeometrySpec, kind: PhiKind, ring: Ring | None = None) -> QSeries:
    """Sum over tangent roots (and xi) of the log blocks of ``kind``."""
    ring = ring or spec.ring
    K, D = spec.K, spec.D
    fl = _TM_FLAVOR[kind]
    tm = _block("witten", K, D).over_power_sums(ring, _tm_power_sum(ring))
    tm = tm + _block(fl, K, D).over_power_sums(ring, _tm_power_sum(ring))
    if spec.twisted:
        for coeff, name in _XI_BLOCKS[kind]:
            tm = tm + _block(name, K, D).over_power_sums(ring, _xi_power_sum(ring)).scale(coeff)
    return tm


def e_linear_part(spec: GeometrySpec, kind: PhiKind, ring: Ring | None = None) -> QSeries:
    """Odd Chern character model of ``Q_j(E)`` without the 2^{N/2} of Q_1."""
    ring = ring or spec.ring
    return _block(_TM_FLAVOR[kind], spec.K, spec.D).over_power_sums(ring, _e_power_sum(ring))


def build_phi(spec: GeometrySpec, kind: PhiKind | str) -> PhiSeries:
    """``exp(tangent and xi blocks) * (E block, linear part)``.

    Phi_L carries ``2^{2r-1} * 2^{N/2}`` as a separate prefactor record.
    """
    kind = PhiKind(kind)
    series = tm_exponent(spec, kind).exp() * e_linear_part(spec, kind)
    prefactor = PowerOfTwo.spinor(2 * spec.r - 1) if kind is PhiKind.L else PowerOfTwo()
    return PhiSeries(kind, spec.twisted, series, prefactor, spec)


def build_phi_product(spec: GeometrySpec, kind: PhiKind | str) -> QSeries:
    """Tangent/xi product part alone: ``exp`` of the blocks, no E factor."""
    return tm_exponent(spec, PhiKind(kind)).exp()


def top_slice(phi: PhiSeries | QSeries, degree: int | None = None) -> QSeries:
    series = phi.series if isinstance(phi, PhiSeries) else phi
    if degree is None:
        degree = series.ring.max_degree
    return series.degree_slice(degree)


def odd_part(p: GradedPoly) -> GradedPoly:
    """Keep the terms of total e-degree exactly one, dropping ``e1``."""
    ring = p.ring
    e_idx = [i for i, g in enumerate(ring.gens) if g.name.startswith("e") and g.name[1:].isdigit()]
    e1 = ring.index(e_name(1)) if ring.has(e_name(1)) else None
    out = {}
    for m, c in p.terms.items():
        if sum(m[i] for i in e_idx) == 1 and (e1 is None or m[e1] == 0):
            out[m] = c
    return GradedPoly(ring, out)


# named characteristic classes of the model ----------------------------------


def a_hat(ring: Ring) -> GradedPoly:
    """``prod z_j / sin z_j``."""
    b = _block("witten", 0, ring.max_degree)
    return b.over_power_sums(ring, _tm_power_sum(ring))[0].exp()


def l_hat(ring: Ring) -> GradedPoly:
    """``prod z_j / tan z_j``; the L-hat form is ``2^{2r-1}`` times this."""
    D = ring.max_degree
    s = _block("witten", 0, D).over_power_sums(ring, _tm_power_sum(ring))
    s = s + _block("b1", 0, D).over_power_sums(ring, _tm_power_sum(ring))
    return s[0].exp()


def cosh_half_c(ring: Ring) -> GradedPoly:
    """``cosh(c/2) = cos(pi u) = sum (-1)^n v^n / (2n)!``."""
    v = ring.gen(XI)
    out = ring.zero()
    for n in range(ring.max_degree // 4 + 1):
        out = out + (v ** n).scale(Fraction((-1) ** n, math.factorial(2 * n)))
    return out

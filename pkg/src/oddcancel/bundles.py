"""Virtual bundles, their low-order q-expansions and Chern characters.

Atoms are ``T`` (complexified tangent bundle, rank 4r-1), ``E`` (E_C,
rank N), ``xi`` (xi_C, rank 2), trivial bundles and the spinor bundles
``Delta(E)`` / ``Delta(TM)``.  Chern characters live in the class ring of
:mod:`oddcancel.phi` extended by a degree-0 generator ``S`` standing for
the spinor rank ``2^{N/2}``, so that powers of two depending on N stay
polynomial here.

Exterior and symmetric powers are computed through Adams operations and
Newton's identities; no Chern roots are ever enumerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ConfigurationError, UnsupportedExpression
from .phi import (
    RANK_N,
    SPINOR_RANK,
    XI,
    _block,
    class_ring,
    e_name,
    odd_part,
    t_name,
)
from .rings import GradedPoly, QSeries, Ring


# ---------------------------------------------------------------------------
# expression trees

_ATOMS = ("T", "E", "xi")


@dataclass(frozen=True)
class BundleExpr:
    op: str
    args: tuple = ()
    param: object = None

    # construction sugar
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scaled(other, self)
        return tensor(self, _lift(other))

    def __rmul__(self, other):
        if isinstance(other, int):
            return scaled(other, self)
        return tensor(_lift(other), self)

    def __neg__(self):
        return scaled(-1, self)

    def __str__(self):
        return to_text(self)


def _lift(x) -> BundleExpr:
    if isinstance(x, BundleExpr):
        return x
    if isinstance(x, int):
        return trivial(x)
    raise TypeError(f"cannot treat {x!r} as a bundle")


def atom(name: str) -> BundleExpr:
    if name not in _ATOMS:
        raise UnsupportedExpression(f"unknown atom {name!r}")
    return BundleExpr(name)


def trivial(k: int) -> BundleExpr:
    return BundleExpr("triv", (), int(k))


def spinor(of: str = "E") -> BundleExpr:
    if of not in ("E", "TM"):
        raise UnsupportedExpression("spinor bundles exist for E and TM only")
    return BundleExpr("spin", (), of)


def add(a, b):
    return BundleExpr("add", (a, b))


def sub(a, b):
    return BundleExpr("sub", (a, b))


def tensor(a, b):
    return BundleExpr("tensor", (a, b))


def scaled(n: int, a):
    return BundleExpr("scale", (a,), int(n))


def wedge(k: int, a):
    return BundleExpr("lambda", (a,), int(k))


def sym(k: int, a):
    return BundleExpr("sym", (a,), int(k))


def tilde(a):
    return BundleExpr("tilde", (a,))


T = atom("T")
E = atom("E")
XI_C = atom("xi")
DELTA_E = spinor("E")
ONE = trivial(1)
ZERO = trivial(0)


def to_text(b: BundleExpr) -> str:
    op = b.op
    if op in _ATOMS:
        return {"T": "T_C M", "E": "E_C", "xi": "xi_C"}[op]
    if op == "triv":
        return f"C^{b.param}" if b.param not in (0, 1) else str(b.param)
    if op == "spin":
        return f"Delta({b.param})"
    if op == "add":
        return f"({to_text(b.args[0])} + {to_text(b.args[1])})"
    if op == "sub":
        return f"({to_text(b.args[0])} - {to_text(b.args[1])})"
    if op == "tensor":
        return f"{to_text(b.args[0])} (x) {to_text(b.args[1])}"
    if op == "scale":
        return f"{b.param}*{to_text(b.args[0])}"
    if op == "lambda":
        return f"L^{b.param}({to_text(b.args[0])})"
    if op == "sym":
        return f"S^{b.param}({to_text(b.args[0])})"
    if op == "tilde":
        return f"~{to_text(b.args[0])}"
    raise UnsupportedExpression(f"unknown node {op!r}")


# ---------------------------------------------------------------------------
# Chern characters


@dataclass(frozen=True)
class BundleContext:
    """Where Chern characters are computed: class ring with the spinor rank."""

    r: int
    twisted: bool = False
    N: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise ConfigurationError("r must be >= 1")

    @property
    def ring(self) -> Ring:
        return _ctx_ring(self.r, self.twisted, self.N is None)

    @property
    def D(self) -> int:
        return 4 * self.r

    def rank_n(self) -> GradedPoly:
        return self.ring.gen(RANK_N) if self.N is None else self.ring.const(self.N)

    def spinor_rank(self) -> GradedPoly:
        if self.N is None:
            return self.ring.gen(SPINOR_RANK)
        return self.ring.const(2 ** (self.N // 2))


@lru_cache(maxsize=None)
def _ctx_ring(r, twisted, symbolic_n):
    return class_ring(r, twisted, symbolic_n, spinor=True)


def _cos_sum(ring: Ring, power, start: int = 1) -> GradedPoly:
    """``sum_k 2 (-4)^k p_k / (2k)!``: Chern character of a root set minus its rank."""
    out = ring.zero()
    for k in range(start, ring.max_degree // 4 + 1):
        out = out + power(k).scale(Fraction(2 * (-4) ** k, math.factorial(2 * k)))
    return out


def _log_cos_sum(ring: Ring, power) -> GradedPoly:
    lc = _block("b1", 0, ring.max_degree)
    return lc.over_power_sums(ring, power)[0]


def adams(p: GradedPoly, k: int) -> GradedPoly:
    """``psi^k`` on a Chern character: degree ``2d`` part times ``k^d``."""
    deg = p.ring.degree_of
    return GradedPoly(p.ring, {m: c * Fraction(k) ** (deg(m) // 2) for m, c in p.terms.items()})


def _newton(p: GradedPoly, k: int, sign: int) -> GradedPoly:
    # sign=-1: exterior powers, sign=+1: symmetric powers
    psi = [None] + [adams(p, j) for j in range(1, k + 1)]
    out = [p.ring.one()]
    for n in range(1, k + 1):
        acc = p.ring.zero()
        for j in range(1, n + 1):
            s = 1 if sign > 0 else (-1) ** (j - 1)
            acc = acc + (out[n - j] * psi[j]).scale(s)
        out.append(acc.scale(Fraction(1, n)))
    return out[k]


def chern_character(b: BundleExpr, ctx: BundleContext) -> GradedPoly:
    """Chern character of ``b`` as a polynomial in ``t_k, e_k, v, N, S``."""
    return _ch(b, ctx)


def _ch(b: BundleExpr, ctx: BundleContext) -> GradedPoly:
    ring = ctx.ring
    op = b.op
    if op == "T":
        return ring.const(4 * ctx.r - 1) + _cos_sum(ring, lambda k: ring.gen(t_name(k)))
    if op == "E":
        return ctx.rank_n() + _cos_sum(ring, lambda k: ring.gen(e_name(k)))
    if op == "xi":
        if not ring.has(XI):
            raise UnsupportedExpression("xi_C needs a twisted context")
        v = ring.gen(XI)
        return ring.const(2) + _cos_sum(ring, lambda k: v ** k)
    if op == "triv":
        return ring.const(b.param)
    if op == "spin":
        if b.param == "E":
            return ctx.spinor_rank() * _log_cos_sum(ring, lambda k: ring.gen(e_name(k))).exp()
        tm = _log_cos_sum(ring, lambda k: ring.gen(t_name(k))).exp()
        return tm.scale(2 ** (2 * ctx.r - 1))
    if op == "add":
        return _ch(b.args[0], ctx) + _ch(b.args[1], ctx)
    if op == "sub":
        return _ch(b.args[0], ctx) - _ch(b.args[1], ctx)
    if op == "tensor":
        return _ch(b.args[0], ctx) * _ch(b.args[1], ctx)
    if op == "scale":
        return _ch(b.args[0], ctx).scale(b.param)
    if op == "tilde":
        return _ch(b.args[0], ctx) - rank(b.args[0], ctx)
    if op in ("lambda", "sym"):
        k = b.param
        if k < 0:
            raise UnsupportedExpression("negative exterior/symmetric power")
        return _newton(_ch(b.args[0], ctx), k, -1 if op == "lambda" else 1)
    raise UnsupportedExpression(f"no Chern character for node {op!r}")


def _binom_poly(n: GradedPoly, k: int, sign: int) -> GradedPoly:
    # sign=-1: n(n-1).../k!, sign=+1: n(n+1).../k!
    out = n.ring.one()
    for j in range(k):
        out = out * (n + sign * j)
    return out.scale(Fraction(1, math.factorial(k)))


def rank(b: BundleExpr, ctx: BundleContext) -> GradedPoly:
    """Rank computed structurally (independent of :func:`chern_character`)."""
    ring = ctx.ring
    op = b.op
    if op == "T":
        return ring.const(4 * ctx.r - 1)
    if op == "E":
        return ctx.rank_n()
    if op == "xi":
        return ring.const(2)
    if op == "triv":
        return ring.const(b.param)
    if op == "spin":
        return ctx.spinor_rank() if b.param == "E" else ring.const(2 ** (2 * ctx.r - 1))
    if op == "add":
        return rank(b.args[0], ctx) + rank(b.args[1], ctx)
    if op == "sub":
        return rank(b.args[0], ctx) - rank(b.args[1], ctx)
    if op == "tensor":
        return rank(b.args[0], ctx) * rank(b.args[1], ctx)
    if op == "scale":
        return rank(b.args[0], ctx).scale(b.param)
    if op == "tilde":
        return ring.zero()
    if op == "lambda":
        return _binom_poly(rank(b.args[0], ctx), b.param, -1)
    if op == "sym":
        return _binom_poly(rank(b.args[0], ctx), b.param, 1)
    raise UnsupportedExpression(f"no rank for node {op!r}")


def odd_ch(b: BundleExpr, ctx: BundleContext) -> GradedPoly:
    """Odd Chern character model: the part linear in the E classes."""
    return odd_part(chern_character(b, ctx))


# ---------------------------------------------------------------------------
# q-series of bundles


class BundleQSeries:
    """Bundles indexed by q^{k/2}, k = 0..K; ``None`` marks a zero slot."""

    def __init__(self, K: int, coeffs=None):
        self.K = K
        cs = list(coeffs or [])
        cs += [None] * (K + 1 - len(cs))
        self.coeffs = tuple(cs[: K + 1])

    @classmethod
    def one(cls, K):
        return cls(K, [ONE])

    def __getitem__(self, k):
        c = self.coeffs[k]
        return ZERO if c is None else c

    def __add__(self, other):
        return BundleQSeries(self.K, [_plus(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        K = min(self.K, other.K)
        out = [None] * (K + 1)
        for i, a in enumerate(self.coeffs[: K + 1]):
            if a is None:
                continue
            for j, b in enumerate(other.coeffs[: K + 1 - i]):
                if b is None:
                    continue
                out[i + j] = _plus(out[i + j], _times(a, b))
        return BundleQSeries(K, out)

    def chern_character(self, ctx: BundleContext) -> QSeries:
        vals = [ctx.ring.zero() if c is None else chern_character(c, ctx) for c in self.coeffs]
        return QSeries(ctx.ring, self.K, vals)

    def to_text(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c is None:
                continue
            parts.append(f"[{to_text(c)}]" + ("" if k == 0 else f" q^({k}/2)"))
        return " + ".join(parts) if parts else "0"


def _plus(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return add(a, b)


def _times(a, b):
    if a == ONE:
        return b
    if b == ONE:
        return a
    return tensor(a, b)


def _lambda_factor(F: BundleExpr, sign: int, e: int, K: int, kind: str) -> BundleQSeries:
    """``Lambda_{sign q^{e/2}}(F)`` (or ``S_{...}``) through q^{K/2}."""
    out = [None] * (K + 1)
    out[0] = ONE
    k = 1
    while e * k <= K:
        node = wedge(k, F) if kind == "lambda" else sym(k, F)
        out[e * k] = node if sign ** k > 0 else scaled(-1, node)
        k += 1
    return BundleQSeries(K, out)


def _product(K, specs) -> BundleQSeries:
    """Tensor product over ``(F, sign, first, step, kind)`` families
    ``bigotimes_{m>=1} kind_{sign q^{(first + step(m-1))/2}}(F)``."""
    acc = BundleQSeries.one(K)
    for F, sign, first, step, kind in specs:
        e = first
        while e <= K:
            acc = acc * _lambda_factor(F, sign, e, K, kind)
            e += step
    return acc


def _virtual_lambda(pos: BundleExpr, neg_count: int, neg: BundleExpr, sign, first, step):
    # Lambda_t(A - n B) = Lambda_t(A) * S_{-t}(B)^n
    out = [(pos, sign, first, step, "lambda")]
    out += [(neg, -sign, first, step, "sym")] * neg_count
    return out


THETA_SERIES = ("Theta1", "Theta2", "Theta3", "Q1", "Q2", "Q3")
_MAX_K = 4


def expand_theta_bundle(which: str, K: int, twisted: bool = False) -> BundleQSeries:
    """Low-order expansion of one of the generating series, or a product
    ``"Theta2*Q2"`` of two of them."""
    if K > _MAX_K or K < 0:
        raise ConfigurationError(f"bundle expansions are supported for 0 <= K <= {_MAX_K}")
    if "*" in which:
        out = BundleQSeries.one(K)
        for name in which.split("*"):
            out = out * expand_theta_bundle(name.strip(), K, twisted)
        return out
    if which not in THETA_SERIES:
        raise ConfigurationError(f"unknown series {which!r}; choose from {THETA_SERIES}")
    Tt, Et, Xt = tilde(T), tilde(E), tilde(XI_C)
    if which.startswith("Q"):
        if which == "Q1":
            return BundleQSeries(K, [DELTA_E]) * _product(K, [(Et, 1, 2, 2, "lambda")])
        sign = -1 if which == "Q2" else 1
        return _product(K, [(Et, sign, 1, 2, "lambda")])
    specs = [(Tt, 1, 2, 2, "sym")]
    # (sign, first) of the T-lambda family, then the two xi families
    layout = {
        "Theta1": ((1, 2), ((1, 1), (-1, 1))),
        "Theta2": ((-1, 1), ((1, 1), (1, 2))),
        "Theta3": ((1, 1), ((1, 2), (-1, 1))),
    }[which]
    (sign, first), xi_fams = layout
    if not twisted:
        specs.append((Tt, sign, first, 2, "lambda"))
    else:
        specs += _virtual_lambda(Tt, 2, Xt, sign, first, 2)
        for s, f in xi_fams:
            specs.append((Xt, s, f, 2, "lambda"))
    return _product(K, specs)


# ---------------------------------------------------------------------------
# theta-quotient side of the cross-checks

_THETA_BLOCK = {"Theta1": "b1", "Theta2": "b2", "Theta3": "b3"}
_THETA_XI = {
    "Theta1": ((-2, "b1"), (1, "b3"), (1, "b2")),
    "Theta2": ((-2, "b2"), (1, "b3"), (1, "b1")),
    "Theta3": ((-2, "b3"), (1, "b1"), (1, "b2")),
}


def _drop_q0(s: QSeries) -> QSeries:
    c = list(s.coeffs)
    c[0] = s.ring.zero()
    return QSeries(s.ring, s.K, c)


def theta_build(which: str, ctx: BundleContext, K: int) -> QSeries:
    """Chern character of a generating series from the theta quotients."""
    if "*" in which:
        out = QSeries.one(ctx.ring, K)
        for name in which.split("*"):
            out = out * theta_build(name.strip(), ctx, K)
        return out
    ring, D = ctx.ring, ctx.D
    t = lambda k: ring.gen(t_name(k))  # noqa: E731
    e = lambda k: ring.gen(e_name(k))  # noqa: E731
    if which.startswith("Q"):
        blk = {"Q1": "b1", "Q2": "b2", "Q3": "b3"}[which]
        s = _block(blk, K, D).over_power_sums(ring, e).exp()
        return s.scale(ctx.spinor_rank()) if which == "Q1" else s
    expo = _block("witten", K, D).over_power_sums(ring, t)
    expo = expo + _block(_THETA_BLOCK[which], K, D).over_power_sums(ring, t)
    if ctx.twisted:
        v = ring.gen(XI)
        for c, name in _THETA_XI[which]:
            expo = expo + _block(name, K, D).over_power_sums(ring, lambda k: v ** k).scale(c)
    return _drop_q0(expo).exp()


# ---------------------------------------------------------------------------
# named classes


class NamedClasses:
    """Characteristic classes in the notation of the cancellation formulas.

    Odd classes of E (``ch(E, g, d)`` and friends) are the E-linear parts
    of the corresponding even Chern characters with ``e1`` dropped.
    """

    def __init__(self, ctx: BundleContext):
        self.ctx = ctx
        self.ring = ctx.ring
        ring = self.ring
        t = lambda k: ring.gen(t_name(k))  # noqa: E731
        D = ctx.D
        self.a_hat = _block("witten", 0, D).over_power_sums(ring, t)[0].exp()
        lhat = _block("witten", 0, D).over_power_sums(ring, t)
        lhat = lhat + _block("b1", 0, D).over_power_sums(ring, t)
        self.l_hat = lhat[0].exp().scale(2 ** (2 * ctx.r - 1))
        if ctx.twisted:
            v = ring.gen(XI)
            self.cosh_half_c = _log_cos_sum(ring, lambda k: v ** k).exp()
        else:
            self.cosh_half_c = ring.one()

    def ch(self, b: BundleExpr) -> GradedPoly:
        return chern_character(b, self.ctx)

    def odd(self, b: BundleExpr) -> GradedPoly:
        return odd_ch(b, self.ctx)

    def top(self, p: GradedPoly) -> GradedPoly:
        return p.degree_slice(self.ctx.D)

    @property
    def spin(self) -> GradedPoly:
        return self.ctx.spinor_rank()

    @property
    def a_side(self) -> GradedPoly:
        """Â, times cosh(c/2) in the twisted case."""
        return self.a_hat * self.cosh_half_c

    @property
    def l_side(self) -> GradedPoly:
        """L̂, divided by cosh^2(c/2) in the twisted case."""
        return self.l_hat * (self.cosh_half_c * self.cosh_half_c).inverse()


# ---------------------------------------------------------------------------
# cross-checks

CROSSCHECK_IDS = ("3.24", "3.34", "3.36", "4.8", "4.15")


def _printed(which_id: str, r: int):
    """(series, twisted, K, mode, {index: printed bundle}) as displayed."""
    Tt, Et, Xt = tilde(T), tilde(E), tilde(XI_C)
    rk = 4 * r - 1
    if which_id == "3.24":
        return "Theta2*Q2", False, 2, "full", {
            1: -(Tt + Et),
            2: Tt + wedge(2, Tt) + wedge(2, Et) + Tt * Et,
        }
    if which_id == "3.34":
        return "Theta1", False, 4, "full", {
            0: trivial(2),
            2: 2 * (T - rk),
            4: 2 * ((3 - 8 * r) * T + T * T + trivial(rk * (rk - 1))),
        }
    if which_id == "3.36":
        return "Theta1*Q1", False, 2, "odd", {2: 2 * (DELTA_E * E)}
    if which_id == "4.8":
        return "Theta2*Q2", True, 2, "full", {
            1: 3 * Xt - Tt - Et,
            2: -3 * (Xt * (Tt + Et))
            + (Tt + wedge(2, Tt) + wedge(2, Et) + Tt * Et)
            + (3 * (Xt * Xt) + 2 * sym(2, Xt) + wedge(2, Xt) + Xt),
        }
    if which_id == "4.15":
        return "Theta1*Q1", True, 2, "odd", {1: ZERO, 2: 2 * (DELTA_E * E)}
    raise ConfigurationError(f"unknown cross-check id {which_id!r}; choose from {CROSSCHECK_IDS}")


@dataclass
class CrosscheckResult:
    id: str
    r: int
    series: str
    twisted: bool
    engine_agrees: bool
    printed_agrees: bool
    engine_diff: dict
    printed_diff: dict
    notes: list

    @property
    def passed(self) -> bool:
        return self.engine_agrees and self.printed_agrees

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "r": self.r,
            "series": self.series,
            "twisted": self.twisted,
            "engine_agrees": self.engine_agrees,
            "printed_agrees": self.printed_agrees,
            "engine_diff": {str(k): v for k, v in self.engine_diff.items()},
            "printed_diff": {str(k): v for k, v in self.printed_diff.items()},
            "notes": list(self.notes),
        }


def crosscheck(which_id: str, r: int, K: int | None = None) -> CrosscheckResult:
    """Compare three things for one displayed expansion.

    1. Chern character of the lambda-ring expansion against the theta
       quotient build, every coefficient through q^{K/2}
       (``engine_agrees``).
    2. The printed coefficients against the lambda-ring expansion
       (``printed_agrees``), on the full Chern character or, for the
       ``ch~`` statements, on its odd part.
    """
    series, twisted, K_needed, mode, printed = _printed(which_id, r)
    K = K_needed if K is None else min(K, _MAX_K)
    ctx = BundleContext(r, twisted)
    expansion = expand_theta_bundle(series, K, twisted)
    ch_exp = expansion.chern_character(ctx)
    built = theta_build(series, ctx, K)
    engine_diff = {}
    for k in range(K + 1):
        d = ch_exp[k] - built[k]
        if not d.is_zero():
            engine_diff[k] = d.to_text()
    notes = []
    printed_diff = {}
    proj = odd_part if mode == "odd" else (lambda p: p)
    for k, b in sorted(printed.items()):
        if k > K:
            continue
        d = proj(chern_character(b, ctx)) - proj(ch_exp[k])
        if d.is_zero():
            continue
        if which_id == "3.34" and k == 0:
            notes.append("constant term printed as 2; the expansion starts with 1 "
                         "(the higher terms match without any factor 2)")
        printed_diff[k] = d.to_text()
    return CrosscheckResult(which_id, r, series, twisted, not engine_diff, not printed_diff,
                            engine_diff, printed_diff, notes)

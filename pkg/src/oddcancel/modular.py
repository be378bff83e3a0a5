"""Modular-basis decomposition of the top slice of Phi_W, certification,
transport to Phi_L and the resulting cancellation identities.

The basis of weight-2r forms over Gamma^0(2) is ``b_l = (8 delta2)^{r-2l}
eps2^l``; ``b_l`` starts at q^{l/2} with coefficient ``(-1)^r``, so the
coefficients ``h_l`` come out of a triangular solve on the first
``floor(r/2) + 1`` half-integer orders.  Every further computed order is a
certificate: it must cancel exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .bundles import DELTA_E, E, T, XI_C, BundleContext, NamedClasses, wedge
from .errors import CertificationError, ConfigurationError, ModularityViolation, VerificationFailure
from .phi import GeometrySpec, PhiKind, build_phi, top_slice
from .prefactor import PowerOfTwo
from .rings import GradedPoly, QSeries, Ring, format_fraction
from .theta import delta_eps

NORMALIZATION_NOTE = (
    "odd Chern characters of E are modelled by the E-linear part of the even "
    "Chern-root model with e1 removed; the degree-4r slice stands for the "
    "degree-(4r-1) component"
)


# ---------------------------------------------------------------------------
# bases


@dataclass(frozen=True)
class ModularBasis:
    r: int
    K: int
    upper: tuple  # (8 delta2)^{r-2l} eps2^l, Gamma^0(2)
    lower: tuple  # (8 delta1)^{r-2l} eps1^l, Gamma_0(2)

    @property
    def size(self) -> int:
        return len(self.upper)

    def leading(self, l: int) -> Fraction:
        return self.upper[l][l].scalar_part()


@lru_cache(maxsize=None)
def basis_expansions(r: int, K: int) -> ModularBasis:
    if r < 1:
        raise ConfigurationError("r must be >= 1")
    d1 = delta_eps("delta1", K).series.scale(8)
    e1 = delta_eps("eps1", K).series
    d2 = delta_eps("delta2", K).series.scale(8)
    e2 = delta_eps("eps2", K).series
    upper, lower = [], []
    for l in range(r // 2 + 1):
        upper.append(d2 ** (r - 2 * l) * e2 ** l)
        lower.append(d1 ** (r - 2 * l) * e1 ** l)
    return ModularBasis(r, K, tuple(upper), tuple(lower))


def basis_oracle(r: int, l: int) -> list:
    """Closed form of the first three q-coefficients of (8 delta1)^{r-2l} eps1^l
    at indices 0, 2, 4 (integer powers of q)."""
    lead = Fraction(2) ** (r - 6 * l)
    return [
        lead,
        lead * (24 * r - 64 * l),
        lead * (288 * r * r - 1536 * r * l + 2048 * l * l + 512 * l - 264 * r),
    ]


# ---------------------------------------------------------------------------
# reports


@dataclass
class Term:
    """``scalar * 2^{prefactor} * poly``; ``label`` is for humans only."""

    scalar: Fraction
    prefactor: PowerOfTwo
    label: str
    poly: GradedPoly

    def value(self, n_coeff: Fraction) -> GradedPoly:
        if self.prefactor.n_coeff != n_coeff:
            raise ConfigurationError("terms carry different N-dependent prefactors")
        return self.poly.scale(self.scalar * Fraction(2) ** self.prefactor.const)

    def to_json(self) -> dict:
        return {
            "scalar": format_fraction(self.scalar),
            "prefactor": self.prefactor.to_json(),
            "label": self.label,
            "poly": self.poly.to_text(),
        }

    def text(self) -> str:
        s = "" if self.scalar == 1 else ("-" if self.scalar == -1 else format_fraction(self.scalar) + "*")
        return f"{s}{self.prefactor}*{{{self.label}}}"

    def latex(self) -> str:
        s = self.scalar
        head = "" if s == 1 else ("-" if s == -1 else _latex_frac(s) + r"\,")
        return f"{head}{self.prefactor.latex()}\\left\\{{{self.label}\\right\\}}"


def _latex_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def _join(pieces) -> str:
    out = ""
    for p in pieces:
        if not out:
            out = p
        elif p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out or "0"


@dataclass
class Identity:
    id: str
    lhs: list
    rhs: list
    verified: bool = False
    diff: GradedPoly | None = None

    def sides(self):
        n_coeff = (self.lhs or self.rhs)[0].prefactor.n_coeff
        ring = (self.lhs or self.rhs)[0].poly.ring
        left = sum((t.value(n_coeff) for t in self.lhs), ring.zero())
        right = sum((t.value(n_coeff) for t in self.rhs), ring.zero())
        return left, right

    def verify(self) -> "Identity":
        left, right = self.sides()
        d = left - right
        self.verified = d.is_zero()
        self.diff = None if self.verified else d
        return self

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "lhs": [t.to_json() for t in self.lhs],
            "rhs": [t.to_json() for t in self.rhs],
            "verified": self.verified,
        }

    def text(self) -> str:
        lhs = _join(t.text() for t in self.lhs)
        rhs = _join(t.text() for t in self.rhs)
        return f"({self.id}) {lhs} = {rhs}   [{'verified' if self.verified else 'NOT verified'}]"

    def latex(self) -> str:
        lhs = _join(t.latex() for t in self.lhs)
        rhs = _join(t.latex() for t in self.rhs)
        return f"{lhs} = {rhs} \\tag{{{self.id}}}"


@dataclass
class FormulaReport:
    spec: GeometrySpec
    h: list
    residual_max_order: Fraction
    transport_verified: bool = False
    identities: list = field(default_factory=list)
    two_adic: dict = field(default_factory=dict)
    notes: list = field(default_factory=lambda: [NORMALIZATION_NOTE])
    phi_L_top: QSeries | None = None

    @property
    def r(self) -> int:
        return self.spec.r

    @property
    def twisted(self) -> bool:
        return self.spec.twisted

    def identity(self, which: str) -> Identity:
        for ident in self.identities:
            if ident.id == which:
                return ident
        raise KeyError(which)

    def to_json(self) -> dict:
        first = next(iter(self.two_adic.items()), None)
        return {
            "r": self.r,
            "twisted": self.twisted,
            "N": "symbolic" if self.spec.N is None else self.spec.N,
            "q_order": self.spec.K,
            "h": [{"l": l, "poly": p.to_text()} for l, p in enumerate(self.h)],
            "identities": [i.to_json() for i in self.identities],
            "residual_max_order": format_fraction(self.residual_max_order),
            "transport_verified": self.transport_verified,
            "two_adic": (
                {"family": first[0], "exponent": first[1].to_json()} if first else None
            ),
            "two_adic_all": [
                {"family": fam, "exponent": exp.to_json()} for fam, exp in self.two_adic.items()
            ],
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def latex(self) -> str:
        lines = [f"% r = {self.r}, twisted = {self.twisted}"]
        for l, p in enumerate(self.h):
            lines.append(f"h_{{{l}}} = {p.to_text()}")
        for ident in self.identities:
            lines.append(ident.latex())
        return "\n".join(lines) + "\n"

    def text(self) -> str:
        lines = [f"r = {self.r}  twisted = {self.twisted}  "
                 f"N = {'symbolic' if self.spec.N is None else self.spec.N}  q_order = {self.spec.K}"]
        for l, p in enumerate(self.h):
            lines.append(f"h_{l} = {p.to_text()}")
        lines.append(f"residual zero through q^{format_fraction(self.residual_max_order)}")
        lines.append(f"transport to Phi_L: {'verified' if self.transport_verified else 'FAILED'}")
        for ident in self.identities:
            lines.append(ident.text())
        for fam, exp in self.two_adic.items():
            lines.append(f"2-adic exponent ({fam}): {exp}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# solving


def solve_h(phi_top: QSeries, basis: ModularBasis, spec: GeometrySpec | None = None) -> FormulaReport:
    """Triangular solve for h_l plus residual certificate."""
    if phi_top.K > basis.K:
        raise ConfigurationError("basis is shorter than the series")
    ring = phi_top.ring
    K = phi_top.K
    residual = phi_top
    h = []
    for l in range(basis.size):
        if l > K:
            raise ConfigurationError("q-order too small for the triangular solve")
        b = basis.upper[l].truncate(K=K).embed(ring)
        c = residual[l].scale(1 / basis.leading(l))
        h.append(c)
        residual = residual - b.scale(c)
    bad = [k for k in range(K + 1) if not residual[k].is_zero()]
    if bad:
        raise ModularityViolation(
            f"residual nonzero at q^{format_fraction(Fraction(bad[0], 2))}: {residual[bad[0]].to_text()}"
        )
    if not h[0].is_zero():
        raise CertificationError(f"h_0 = {h[0].to_text()} is not zero")
    if spec is None:
        spec = GeometrySpec(basis.r, K=K)
    return FormulaReport(spec, h, Fraction(K, 2))


def solve_h_twisted(phi_top: QSeries, basis: ModularBasis, spec: GeometrySpec | None = None) -> FormulaReport:
    from .phi import XI

    if not phi_top.ring.has(XI):
        raise ConfigurationError("twisted solve needs the xi generator")
    if spec is None:
        spec = GeometrySpec(basis.r, twisted=True, K=phi_top.K)
    return solve_h(phi_top, basis, spec)


def check_transport(report: FormulaReport, phi_L_top: QSeries, basis: ModularBasis) -> bool:
    """``Phi_L`` top slice (prefactor removed) equals ``sum h_l (8 delta1)^{r-2l} eps1^l``."""
    ring = phi_L_top.ring
    K = phi_L_top.K
    rhs = QSeries.zero(ring, K)
    for l, hl in enumerate(report.h):
        rhs = rhs + basis.lower[l].truncate(K=K).embed(ring).scale(hl)
    return rhs == phi_L_top


def derive(spec: GeometrySpec, families=None) -> FormulaReport:
    """Full pipeline: build, solve, certify, transport, emit identities."""
    basis = basis_expansions(spec.r, spec.K)
    phi_w = top_slice(build_phi(spec, PhiKind.W))
    report = (solve_h_twisted if spec.twisted else solve_h)(phi_w, basis, spec)
    phi_l = top_slice(build_phi(spec, PhiKind.L))
    report.phi_L_top = phi_l
    report.transport_verified = check_transport(report, phi_l, basis)
    if not report.transport_verified:
        raise VerificationFailure("Phi_L does not match the transported decomposition")
    if families is None:
        families = [f for f in FAMILIES if FAMILIES[f][0] <= spec.K]
        if spec.twisted:
            back = {v: k for k, v in TWISTED_ALIASES.items()}
            families = [back.get(f, f) for f in families]
    for fam in families:
        report.identities.append(emit_identities(report, fam))
        report.two_adic[fam] = two_adic_exponent(report, fam)
    if spec.twisted:
        report.notes.append("Phi_W and Phi'_W are read with theta_2/Q_2 and theta_3/Q_3")
    return report


# ---------------------------------------------------------------------------
# identity families
#
# With P_j the q^j coefficient of Phi_L's top slice (prefactor removed) and
# X_m = 2^{3r-1} sum 2^{-6l} l^m h_l, expanding (8 delta1)^{r-2l} eps1^l to
# second order in q gives
#   P_0                                  =          X_0 / 2^{2r-1}
#   P_1/2 - 12 r P_0                     = -2^5     X_1 / 2^{2r-1}
#   P_2/2 + (4-12r) P_1 + (144r^2+36r)P_0 =  2^{10}  X_2 / 2^{2r-1}

FAMILIES = {
    # id: (q index needed, moment m, sign, extra 2-exponent)
    "3.20": (0, 0, 1, 0),
    "3.38": (2, 1, -1, 5),
    "3.41": (4, 2, 1, 10),
}
TWISTED_ALIASES = {"4.7": "3.20", "4.16": "3.38"}


def _family_key(which: str) -> str:
    return TWISTED_ALIASES.get(which, which)


def _lhs_terms(report: FormulaReport, fam: str) -> list:
    r = report.r
    P = report.phi_L_top
    pre = PowerOfTwo.spinor(2 * r - 1)
    lhat = "\\hat L ch(Delta(E))" if not report.twisted else "\\hat L/cosh^2(c/2) ch(Delta(E))"
    if fam == "3.20":
        return [Term(Fraction(1), pre, lhat, P[0])]
    if fam == "3.38":
        return [
            Term(Fraction(1, 2), pre, "Phi_L|q^1", P[2]),
            Term(Fraction(-12 * r), pre, lhat, P[0]),
        ]
    return [
        Term(Fraction(1, 2), pre, "Phi_L|q^2", P[4]),
        Term(Fraction(4 - 12 * r), pre, "Phi_L|q^1", P[2]),
        Term(Fraction(144 * r * r + 36 * r), pre, lhat, P[0]),
    ]


def emit_identities(report: FormulaReport, which: str) -> Identity:
    """Emit and verify one cancellation identity.

    Left side from the q-coefficients of Phi_L, right side from the h_l;
    raises :class:`VerificationFailure` with the difference on mismatch.
    """
    fam = _family_key(which)
    if fam not in FAMILIES:
        raise ConfigurationError(f"unknown identity {which!r}; choose from {sorted(FAMILIES)}")
    if report.phi_L_top is None:
        report.phi_L_top = top_slice(build_phi(report.spec, PhiKind.L))
    need, m, sign, extra = FAMILIES[fam]
    if report.spec.K < need:
        raise ConfigurationError(f"identity {which} needs q_order >= {need}")
    r = report.r
    rhs = []
    for l in range(1, len(report.h)):
        pre = PowerOfTwo.spinor(3 * r - 1 - 6 * l + extra)
        rhs.append(Term(Fraction(sign * l ** m), pre, f"h_{l}", report.h[l]))
    ident = Identity(which, _lhs_terms(report, fam), rhs)
    if not rhs:
        # r = 1: the right side is empty
        ring = report.phi_L_top.ring
        ident.rhs = [Term(Fraction(0), PowerOfTwo.spinor(0), "0", ring.zero())]
    ident.verify()
    if not ident.verified:
        raise VerificationFailure(f"identity {which} does not hold", ident.diff)
    return ident


def two_adic_exponent(report: FormulaReport, which: str) -> PowerOfTwo:
    """Smallest 2-exponent among the nonzero right-hand terms of a family."""
    fam = _family_key(which)
    _, _, _, extra = FAMILIES[fam]
    r = report.r
    exps = [3 * r - 1 - 6 * l + extra for l in range(1, len(report.h)) if not report.h[l].is_zero()]
    if not exps:
        return PowerOfTwo()
    return PowerOfTwo.spinor(min(exps))


# ---------------------------------------------------------------------------
# printed named-class statements


@dataclass
class PrintedCheck:
    id: str
    r: int
    twisted: bool
    holds: bool
    difference: str
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "r": self.r,
            "twisted": self.twisted,
            "holds": self.holds,
            "difference": self.difference,
            "detail": self.detail,
        }


def _h_in(ctx_ring: Ring, report: FormulaReport):
    return [p.embed(ctx_ring) for p in report.h]


def _named(report: FormulaReport):
    ctx = BundleContext(report.r, report.twisted, report.spec.N)
    return ctx, NamedClasses(ctx)


def _ch_t_side(nc: NamedClasses, twisted: bool) -> GradedPoly:
    """ch(T_C M), or ch(T_C M - 3 xi_C) in the twisted case."""
    return nc.ch(T - 3 * XI_C) if twisted else nc.ch(T)


def h2_structure(report: FormulaReport):
    """Write h_2 = (-1)^r [A ch(T') ch(E) + A ch(wedge^2 E)] + (a + b N) A ch(E).

    Returns ``(a, b)`` or ``None`` if no such decomposition exists.  ``A``
    is Â (times cosh(c/2) twisted) and ``T'`` is T_C M (minus 3 xi_C).
    """
    if len(report.h) < 3:
        return None
    ctx, nc = _named(report)
    h2 = report.h[2].embed(ctx.ring)
    sgn = (-1) ** report.r
    A = nc.a_side
    che = nc.odd(E)
    base = nc.top(A * _ch_t_side(nc, report.twisted) * che + A * nc.odd(wedge(2, E)))
    rest = h2 - base.scale(sgn)
    X = nc.top(A * che)
    n = ctx.rank_n()
    if report.spec.N is None:
        r0 = rest.filter(lambda m: m.get("N", 0) == 0)
        r1 = rest - r0
        r1 = GradedPoly(
            ctx.ring,
            {tuple(e - 1 if g.name == "N" else e for g, e in zip(ctx.ring.gens, mono)): c
             for mono, c in r1.terms.items()},
        )
    else:
        r0, r1 = rest, ctx.ring.zero()
    a = _ratio(r0, X)
    b = _ratio(r1, X)
    if a is None or b is None:
        return None
    if rest != X.scale(a) + (n * X).scale(b):
        return None
    return a, b


def _ratio(p: GradedPoly, x: GradedPoly):
    if p.is_zero():
        return Fraction(0)
    if x.is_zero():
        return None
    m, c = next(iter(x.terms.items()))
    ratio = p.terms.get(m, Fraction(0)) / c
    return ratio if p == x.scale(ratio) else None


PRINTED_IDS = ("3.20", "3.25", "3.26", "3.30", "3.32", "3.33", "3.38", "3.41", "3.42", "3.43",
               "4.7", "4.9", "4.10", "4.13", "4.14", "4.16", "4.19")
_FIXED_R = {"3.32": 3, "3.33": 4, "3.42": 3, "3.43": 3, "4.13": 3, "4.14": 4, "4.19": 3}
_TWISTED_IDS = {"4.7", "4.9", "4.10", "4.13", "4.14", "4.16", "4.19"}


def printed_check(which: str, report: FormulaReport) -> PrintedCheck:
    """Test a displayed named-class statement literally against the engine."""
    if which not in PRINTED_IDS:
        raise ConfigurationError(f"unknown printed statement {which!r}; choose from {PRINTED_IDS}")
    if which in _FIXED_R and report.r != _FIXED_R[which]:
        raise ConfigurationError(f"{which} is stated for r = {_FIXED_R[which]}")
    if (which in _TWISTED_IDS) != report.twisted:
        raise ConfigurationError(f"{which} needs twisted = {which in _TWISTED_IDS}")
    ctx, nc = _named(report)
    r = report.r
    h = _h_in(ctx.ring, report)
    top = nc.top
    A, L, S = nc.a_side, nc.l_side, nc.spin
    n = ctx.rank_n()
    che = nc.odd(E)
    sgn = (-1) ** r
    zero = ctx.ring.zero()
    two = lambda k: Fraction(2) ** k  # noqa: E731

    def hsum(m, extra):
        out = zero
        for l in range(1, len(h)):
            out = out + h[l].scale(two(3 * r - 1 - 6 * l + extra) * l ** m)
        return out * S

    if which in ("3.20", "4.7"):
        lhs, rhs = top(L * nc.odd(DELTA_E)), hsum(0, 0)
    elif which in ("3.38", "4.16"):
        lhs = top(L * nc.odd(DELTA_E * E) - (L * nc.odd(DELTA_E)).scale(12 * r))
        rhs = -hsum(1, 5)
    elif which == "3.41":
        lhs = top(L * (nc.odd(DELTA_E * E).scale(19 - 56 * r) - nc.odd(DELTA_E).scale(144 * (r * r - r))
                       + nc.ch(T) * nc.odd(DELTA_E * E) + nc.odd(DELTA_E * wedge(2, E))))
        rhs = hsum(2, 10)
    elif which in ("3.25", "4.9"):
        lhs, rhs = h[1] if len(h) > 1 else zero, top(A * che).scale(-sgn)
    elif which == "3.26":
        # ch~(B_2) = ch(wedge^2 ~E) + ch(~T) ch(E), with ch(wedge^2 ~E) = ch(wedge^2 E) - N ch(E)
        ch_b2 = nc.odd(wedge(2, E)) - n * che + (nc.ch(T) - (4 * r - 1)) * che
        lhs = h[2] if len(h) > 2 else zero
        rhs = top(A * ch_b2).scale(sgn) + (h[1] if len(h) > 1 else zero).scale(-8 + 24 * sgn * (r - 2))
    elif which in ("3.30", "4.10"):
        const = sgn * (7 - n - 4 * r) + (-24 * (r - 2) + 8 * sgn)
        lhs = h[2] if len(h) > 2 else zero
        rhs = top(A * _ch_t_side(nc, report.twisted) * che + A * nc.odd(wedge(2, E))).scale(sgn) \
            + top(A * che) * const
    elif which in ("3.32", "4.13"):
        lhs, rhs = top(L * nc.odd(DELTA_E)), top(A * che).scale(4) * S
    elif which in ("3.33", "4.14"):
        lhs = top(L * nc.odd(DELTA_E))
        rhs = top(A * che * (-(n + 113)) + A * _ch_t_side(nc, report.twisted) * che
                  + A * nc.odd(wedge(2, E))) * S.scale(Fraction(1, 2))
    elif which in ("3.42", "4.19"):
        lhs = top(L * nc.odd(DELTA_E * E) - (L * nc.odd(DELTA_E)).scale(36)) + top(A * che).scale(2 ** 7) * S
        rhs = zero
    elif which == "3.43":
        lhs = top(L * (nc.odd(DELTA_E * E).scale(-149) - nc.odd(DELTA_E).scale(864)
                       + nc.ch(T) * nc.odd(DELTA_E * E) + nc.odd(DELTA_E * wedge(2, E))))
        rhs = top(A * che).scale(2 ** 12) * S
    d = lhs - rhs
    detail = ""
    if which in ("3.26", "3.30", "4.10", "3.33", "4.14"):
        st = h2_structure(report)
        if st is not None:
            a, b = st
            nb = "N" if abs(b) == 1 else f"{format_fraction(abs(b))}*N"
            detail = f"engine: h_2 constant = {format_fraction(a)} {'+' if b >= 0 else '-'} {nb}"
            if report.twisted:
                detail += " with A = Ahat cosh(c/2) and ch(T_C M - 3 xi_C)"
            if which in ("3.33", "4.14"):
                c = -(a - 64) if b == -1 else None
                if c is not None:
                    detail += f"; cancellation coefficient = -({format_fraction(c)}+N)"
    return PrintedCheck(which, r, report.twisted, d.is_zero(), d.to_text(), detail)


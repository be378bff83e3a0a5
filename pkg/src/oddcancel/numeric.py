"""Floating-point theta functions and numerical checks of their
transformation laws, of the delta/epsilon S-relations and of the
S-relation between Phi_W and Phi_L.

Independent of the exact engine: only ``cmath`` products are used here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PrecisionError
from .theta import ThetaFlavor

MAX_FACTORS = 20000
PI = math.pi
MIN_IMAG_TAU = 0.1


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    error_bound: float
    factors: int


def _check_tau(tau: complex):
    if not tau.imag > 0:
        raise DomainError(f"tau must lie in the upper half plane, got {tau}")
    if tau.imag < MIN_IMAG_TAU:
        raise PrecisionError(f"Im(tau) = {tau.imag} is below {MIN_IMAG_TAU}; products converge too slowly")


def _q(tau):
    return cmath.exp(2j * PI * tau)


def _q8(tau):
    # q^{1/8} on the principal branch in tau
    return cmath.exp(2j * PI * tau / 8)


def theta_eval(flavor, v, tau, tol: float = 1e-16) -> ThetaValue:
    """Product formula evaluated until the factors are within ``tol`` of 1."""
    flavor = ThetaFlavor(flavor)
    v, tau = complex(v), complex(tau)
    _check_tau(tau)
    q = _q(tau)
    a = cmath.exp(2j * PI * v)
    qh = cmath.exp(1j * PI * tau)  # q^{1/2}
    prod = 1.0 + 0j
    j = 1
    if flavor in (ThetaFlavor.THETA, ThetaFlavor.THETA1):
        s = -1 if flavor is ThetaFlavor.THETA else 1
        while True:
            qj = q ** j
            f = (1 - qj) * (1 + s * a * qj) * (1 + s * qj / a)
            prod *= f
            dev = abs(f - 1)
            if dev < tol:
                break
            j += 1
            if j > MAX_FACTORS:
                raise PrecisionError("theta product did not converge")
        pre = 2 * _q8(tau) * (cmath.sin(PI * v) if s < 0 else cmath.cos(PI * v))
        val = pre * prod
    else:
        s = -1 if flavor is ThetaFlavor.THETA2 else 1
        while True:
            qj = q ** j
            qm = qh ** (2 * j - 1)
            f = (1 - qj) * (1 + s * a * qm) * (1 + s * qm / a)
            prod *= f
            dev = abs(f - 1)
            if dev < tol:
                break
            j += 1
            if j > MAX_FACTORS:
                raise PrecisionError("theta product did not converge")
        val = prod
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise PrecisionError("non-finite theta value")
    # the neglected tail is a product of factors 1 + O(|q|^j); bound its log
    aq = abs(q)
    tail = 4 * dev / max(1e-300, 1 - aq) if aq < 1 else float("inf")
    return ThetaValue(val, abs(val) * tail + 1e-16 * abs(val), j)


def theta(flavor, v, tau, tol: float = 1e-16) -> complex:
    return theta_eval(flavor, v, tau, tol).value


def theta_prime0(tau, tol: float = 1e-16) -> complex:
    """``d theta / dv`` at ``v = 0``: ``2 pi q^{1/8} prod (1 - q^j)^3``."""
    tau = complex(tau)
    _check_tau(tau)
    q = _q(tau)
    prod = 1.0 + 0j
    for j in range(1, MAX_FACTORS):
        f = (1 - q ** j) ** 3
        prod *= f
        if abs(f - 1) < tol:
            return 2 * PI * _q8(tau) * prod
    raise PrecisionError("theta' product did not converge")


def theta_prime(v, tau, tol: float = 1e-16) -> complex:
    """``d theta(v, tau) / dv`` via the logarithmic derivative of the product."""
    v, tau = complex(v), complex(tau)
    _check_tau(tau)
    q = _q(tau)
    a = cmath.exp(2j * PI * v)
    prod = 1.0 + 0j
    dlog = 0j
    for j in range(1, MAX_FACTORS):
        qj = q ** j
        f = (1 - qj) * (1 - a * qj) * (1 - qj / a)
        prod *= f
        dlog += -2j * PI * a * qj / (1 - a * qj) + 2j * PI * (qj / a) / (1 - qj / a)
        if abs(f - 1) < tol:
            break
    else:
        raise PrecisionError("theta' product did not converge")
    pre = 2 * _q8(tau)
    return pre * (PI * cmath.cos(PI * v) * prod + cmath.sin(PI * v) * prod * dlog)


def theta_sum(flavor, v, tau, terms: int = 60) -> complex:
    """Bilateral sums; an oracle for the product route."""
    flavor = ThetaFlavor(flavor)
    v, tau = complex(v), complex(tau)
    _check_tau(tau)
    total = 0j
    for n in range(-terms, terms + 1):
        if flavor is ThetaFlavor.THETA2:
            total += (-1) ** n * cmath.exp(1j * PI * tau * n * n + 2j * PI * n * v)
        elif flavor is ThetaFlavor.THETA3:
            total += cmath.exp(1j * PI * tau * n * n + 2j * PI * n * v)
        else:
            m = n + 0.5
            term = cmath.exp(1j * PI * tau * m * m)
            if flavor is ThetaFlavor.THETA:
                total += (-1) ** n * term * (-1j) * cmath.exp(2j * PI * m * v)
            else:
                total += term * cmath.exp(2j * PI * m * v)
    return total


# ---------------------------------------------------------------------------
# delta / epsilon

def delta_eps_value(which: str, tau) -> complex:
    t1, t2, t3 = (theta(f, 0, tau) ** 4 for f in ("theta1", "theta2", "theta3"))
    return {
        "delta1": (t2 + t3) / 8,
        "eps1": t2 * t3 / 16,
        "delta2": -(t1 + t3) / 8,
        "eps2": t1 * t3 / 16,
    }[which]


# ---------------------------------------------------------------------------
# transformation laws


def _sqrt_factor(tau):
    # principal branch of (tau / sqrt(-1))^{1/2}
    return cmath.sqrt(tau / 1j)


def _law_sides(law: str, v: complex, tau: complex):
    e8 = cmath.exp(1j * PI / 4)
    st = -1 / tau
    g = _sqrt_factor(tau) * cmath.exp(1j * PI * tau * v * v)
    if law == "2.11":
        return theta_prime0(tau), PI * theta("theta1", 0, tau) * theta("theta2", 0, tau) * theta("theta3", 0, tau)
    if law == "2.12T":
        return theta("theta", v, tau + 1), e8 * theta("theta", v, tau)
    if law == "2.12S":
        return theta("theta", v, st), g / 1j * theta("theta", tau * v, tau)
    if law == "2.13T":
        return theta("theta1", v, tau + 1), e8 * theta("theta1", v, tau)
    if law == "2.13S":
        return theta("theta1", v, st), g * theta("theta2", tau * v, tau)
    if law == "2.14T":
        return theta("theta2", v, tau + 1), theta("theta3", v, tau)
    if law == "2.14S":
        return theta("theta2", v, st), g * theta("theta1", tau * v, tau)
    if law == "2.15T":
        return theta("theta3", v, tau + 1), theta("theta2", v, tau)
    if law == "2.15S":
        return theta("theta3", v, st), g * theta("theta3", tau * v, tau)
    if law == "2.16T":
        return theta_prime(v, tau + 1), e8 * theta_prime(v, tau)
    if law == "2.16S":
        return theta_prime0(st), _sqrt_factor(tau) / 1j * tau * theta_prime0(tau)
    if law == "2.20d":
        return delta_eps_value("delta2", st), tau ** 2 * delta_eps_value("delta1", tau)
    if law == "2.20e":
        return delta_eps_value("eps2", st), tau ** 4 * delta_eps_value("eps1", tau)
    raise DomainError(f"unknown law {law!r}")


LAWS = ("2.11", "2.12T", "2.12S", "2.13T", "2.13S", "2.14T", "2.14S", "2.15T", "2.15S",
        "2.16T", "2.16S", "2.20d", "2.20e")


def expand_law(law: str) -> list:
    """``"2.14"`` means both its T and S parts."""
    if law in LAWS:
        return [law]
    parts = [x for x in LAWS if x.startswith(law + "T") or x.startswith(law + "S")
             or (law == "2.20" and x.startswith("2.20"))]
    if not parts:
        raise DomainError(f"unknown law {law!r}")
    return parts


@dataclass(frozen=True)
class LawResult:
    law: str
    v: complex
    tau: complex
    residual: float
    passed: bool


def check_transformation(law: str, v, tau, tol: float = 1e-9) -> LawResult:
    """Relative residual ``|lhs - rhs| / max(1, |lhs|)`` of one law."""
    v, tau = complex(v), complex(tau)
    _check_tau(tau)
    lhs, rhs = _law_sides(law, v, tau)
    res = abs(lhs - rhs) / max(1.0, abs(lhs))
    return LawResult(law, v, tau, res, res < tol)


DEFAULT_TAUS = (1.5j, 0.3 + 1.1j, -0.4 + 0.9j)
DEFAULT_VS = (0, 0.2 + 0.1j, -0.35 + 0.2j, 0.5, 0.1 - 0.3j, 0.25 + 0.4j)


def default_grid():
    return [(v, tau) for tau in DEFAULT_TAUS for v in DEFAULT_VS]


def check_grid(law: str, tol: float = 1e-9, grid=None):
    grid = default_grid() if grid is None else grid
    results = []
    for part in expand_law(law):
        for v, tau in grid:
            results.append(check_transformation(part, v, tau, tol))
    return results


# ---------------------------------------------------------------------------
# S-relation between Phi_W and Phi_L


def _log_quot(flavor, x, tau):
    return cmath.log(theta(flavor, x, tau) / theta(flavor, 0, tau))


def _witten(x, tau):
    if x == 0:
        return 1.0
    return x * theta_prime0(tau) / theta("theta", x, tau)


def _e_block(flavor, w, tau, h=1e-3):
    """``log theta_f(w)/theta_f(0)`` minus its ``w^2`` term.

    Removing the quadratic term is the numerical counterpart of dropping
    the degree-3 class of E.  The coefficient is extracted by Richardson
    extrapolation of ``f(h)/h^2``.
    """
    if w == 0:
        return 0j
    f1 = _log_quot(flavor, h, tau) / h ** 2
    f2 = _log_quot(flavor, 2 * h, tau) / (2 * h) ** 2
    c1 = (4 * f1 - f2) / 3
    return _log_quot(flavor, w, tau) - c1 * w * w


_TM_FLAVOR = {"L": "theta1", "W": "theta2"}
_E_FLAVOR = {"L": "theta1", "W": "theta2"}
# xi factors: (power, flavor)
_XI = {
    "L": ((-2, "theta1"), (1, "theta3"), (1, "theta2")),
    "W": ((-2, "theta2"), (1, "theta3"), (1, "theta1")),
}


def phi_scalar(kind: str, tm_roots, e_roots, tau, u=None) -> complex:
    """Theta-quotient product of Phi_W or Phi_L (without 2^{2r-1} 2^{N/2})
    at concrete roots: tangent product times the E-linear factor."""
    prod = 1.0 + 0j
    fl = _TM_FLAVOR[kind]
    for x in tm_roots:
        prod *= _witten(x, tau) * theta(fl, x, tau) / theta(fl, 0, tau)
    if u is not None and u != 0:
        for p, f in _XI[kind]:
            prod *= (theta(f, u, tau) / theta(f, 0, tau)) ** p
    lin = sum(_e_block(_E_FLAVOR[kind], w, tau) for w in e_roots)
    return prod * lin


def top_coefficient(fn, degree: int, radius: float = 1.0, points: int = 32) -> complex:
    """Coefficient of ``lam^degree`` of ``fn(lam)`` from samples on a circle
    (a Vandermonde system on roots of unity, solved by FFT)."""
    if points <= degree:
        raise PrecisionError("need more sample points than the degree")
    lams = radius * np.exp(2j * np.pi * np.arange(points) / points)
    vals = np.array([fn(complex(l)) for l in lams])
    coeffs = np.fft.fft(vals) / points
    c = coeffs[degree] / radius ** degree
    if not np.isfinite(c):
        raise PrecisionError("ill-conditioned coefficient extraction")
    return complex(c)


@dataclass(frozen=True)
class SRelationResult:
    r: int
    N: int
    tau: complex
    lhs: complex
    rhs: complex
    residual: float
    passed: bool


def check_phi_s_relation(r: int, N: int, tm_roots, e_roots, tau, u=None, tol: float = 1e-6,
                         radius: float = 1.0) -> SRelationResult:
    """``Phi_W(-1/tau)^top = tau^{2r} 2^{-(2r-1+N/2)} Phi_L(tau)^top``.

    Phi_L includes its ``2^{2r-1} 2^{N/2}``; the top component is the
    coefficient of ``lam^{2r}`` after scaling every root by ``lam``
    (E-free runs use the product alone, i.e. N = 0 and no E factor).
    """
    tau = complex(tau)
    _check_tau(tau)
    if len(e_roots) * 2 > N:
        raise DomainError("more E roots than N/2")
    st = -1 / tau
    deg = 2 * r

    def side(kind, t):
        def fn(lam):
            tm = [lam * x for x in tm_roots]
            uu = None if u is None else lam * u
            if not e_roots:
                prod = 1.0 + 0j
                for x in tm:
                    prod *= _witten(x, t) * theta(_TM_FLAVOR[kind], x, t) / theta(_TM_FLAVOR[kind], 0, t)
                if uu is not None:
                    for p, f in _XI[kind]:
                        prod *= (theta(f, uu, t) / theta(f, 0, t)) ** p
                return prod
            return phi_scalar(kind, tm, [lam * w for w in e_roots], t, uu)
        return top_coefficient(fn, deg, radius)

    lhs = side("W", st)
    pref = 2.0 ** (2 * r - 1) * (2.0 ** (N / 2) if e_roots else 1.0)
    phi_l = pref * side("L", tau)
    rhs = tau ** deg / pref * phi_l
    # the top coefficients are tiny for small roots: compare relatively
    res = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    return SRelationResult(r, N, tau, lhs, rhs, res, res < tol)


# ---------------------------------------------------------------------------
# symbolic versus numeric


_BLOCK_FLAVOR = {"b1": "theta1", "b2": "theta2", "b3": "theta3"}


def block_value(kind: str, z, tau) -> complex:
    """Numerical value of a named log block at ``z = pi x``."""
    z, tau = complex(z), complex(tau)
    x = z / PI
    if kind == "witten":
        return cmath.log(_witten(x, tau))
    if kind.startswith("inv_sq_"):
        return -2 * block_value(kind[len("inv_sq_"):], z, tau)
    if kind not in _BLOCK_FLAVOR:
        raise DomainError(f"unknown block {kind!r}")
    return _log_quot(_BLOCK_FLAVOR[kind], x, tau)


def evaluate_series(series, q_half: complex, z: complex = 0) -> complex:
    """Evaluate a scalar or one-variable (z) QSeries numerically."""
    total = 0j
    qp = 1 + 0j
    for c in series.coeffs:
        if c.terms:
            val = 0j
            for mono, coef in c.terms.items():
                term = complex(coef.numerator / coef.denominator)
                for e in mono:
                    term *= z ** e
                val += term
            total += val * qp
        qp *= q_half
    return total

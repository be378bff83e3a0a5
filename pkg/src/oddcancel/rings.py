"""Exact arithmetic tower used by every symbolic computation.

Three layers:

* rationals (:class:`fractions.Fraction`),
* :class:`GradedPoly`, a truncated commutative polynomial ring in named
  graded generators,
* :class:`QSeries`, truncated series in ``q^{1/2}`` with ``GradedPoly``
  coefficients.

A q-exponent ``k/2`` is stored as the integer index ``k``.  Pure modular
forms use :data:`SCALARS`, the ring with no generators.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ContextError, DomainError, NotInvertibleError

Monomial = tuple  # tuple of non-negative exponents, aligned with Ring.gens

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def format_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True, order=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ValueError(f"bad generator name {self.name!r}")
        if self.degree < 0 or self.degree % 2:
            raise ValueError(f"generator {self.name} needs a non-negative even degree")


class Ring:
    """Generator context plus total-degree cap ``max_degree``.

    Generators are kept sorted by name, which fixes the monomial order used
    for serialization.
    """

    __slots__ = ("gens", "max_degree", "_index", "_degrees", "_hash")

    def __init__(self, gens: Iterable[Generator] = (), max_degree: int = 0):
        gens = tuple(sorted(gens, key=lambda g: g.name))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        self.gens = gens
        self.max_degree = max_degree
        self._index = {g.name: i for i, g in enumerate(gens)}
        self._degrees = tuple(g.degree for g in gens)
        self._hash = hash((gens, max_degree))

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.gens == other.gens
            and self.max_degree == other.max_degree
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        gs = ", ".join(f"{g.name}:{g.degree}" for g in self.gens)
        return f"Ring([{gs}], D={self.max_degree})"

    @property
    def names(self) -> tuple:
        return tuple(g.name for g in self.gens)

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.gens)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ContextError(f"generator {name!r} not in {self!r}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    def degree_of(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self._degrees))

    def truncated(self, max_degree: int) -> "Ring":
        return Ring(self.gens, max_degree)

    def with_gens(self, extra: Iterable[Generator]) -> "Ring":
        return Ring(self.gens + tuple(extra), self.max_degree)

    # constructors -------------------------------------------------------

    def zero(self) -> "GradedPoly":
        return GradedPoly(self, {})

    def one(self) -> "GradedPoly":
        return self.const(1)

    def const(self, c) -> "GradedPoly":
        return GradedPoly(self, {self.unit_monomial: as_fraction(c)})

    def gen(self, name: str) -> "GradedPoly":
        return self.monomial({name: 1})

    def monomial(self, exps: Mapping[str, int], coeff=1) -> "GradedPoly":
        mono = [0] * len(self.gens)
        for name, e in exps.items():
            if e < 0:
                raise ValueError("negative exponent")
            mono[self.index(name)] += e
        return GradedPoly(self, {tuple(mono): as_fraction(coeff)})

    def mono_from_dict(self, exps: Mapping[str, int]) -> Monomial:
        mono = [0] * len(self.gens)
        for name, e in exps.items():
            mono[self.index(name)] = e
        return tuple(mono)

    def mono_to_dict(self, mono: Monomial) -> dict:
        return {g.name: e for g, e in zip(self.gens, mono) if e}


SCALARS = Ring((), 0)


def _check_same_ring(a: "GradedPoly", b: "GradedPoly"):
    if a.ring != b.ring:
        raise ContextError(f"ring mismatch: {a.ring!r} vs {b.ring!r}")


class GradedPoly:
    """Element of a truncated graded polynomial ring over Q.

    Immutable.  Monomials of total degree above ``ring.max_degree`` are
    dropped at construction, so every product is automatically truncated.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            D = ring.max_degree
            n = len(ring.gens)
            for mono, c in terms.items():
                if len(mono) != n:
                    raise ContextError("monomial length does not match ring")
                c = as_fraction(c)
                if c and ring.degree_of(mono) <= D:
                    clean[tuple(mono)] = clean.get(tuple(mono), 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "GradedPoly":
        # terms already reduced: Fraction values, nonzero, within degree
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # coercion -----------------------------------------------------------

    def _coerce(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedPoly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "GradedPoly":
        c = as_fraction(c)
        if not c:
            return self.ring.zero()
        return GradedPoly._raw(self.ring, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of GradedPoly by zero")
            return self.scale(1 / as_fraction(other))
        if isinstance(other, GradedPoly):
            return self * other.inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure ----------------------------------------------------------

    def degree_slice(self, d: int) -> "GradedPoly":
        """Terms of total degree exactly ``d``."""
        deg = self.ring.degree_of
        return GradedPoly._raw(
            self.ring, {m: c for m, c in self.terms.items() if deg(m) == d}
        )

    def degrees(self) -> set:
        return {self.ring.degree_of(m) for m in self.terms}

    def is_homogeneous(self, d: int) -> bool:
        return all(self.ring.degree_of(m) == d for m in self.terms)

    def scalar_part(self) -> Fraction:
        return self.terms.get(self.ring.unit_monomial, Fraction(0))

    def degree_zero_part(self) -> "GradedPoly":
        return self.degree_slice(0)

    def coeff(self, exps: Mapping[str, int] | None = None) -> Fraction:
        mono = self.ring.mono_from_dict(exps or {})
        return self.terms.get(mono, Fraction(0))

    def truncate(self, max_degree: int) -> "GradedPoly":
        if max_degree > self.ring.max_degree:
            raise ContextError("cannot raise the truncation degree")
        return GradedPoly(self.ring.truncated(max_degree), self.terms)

    def embed(self, ring: Ring) -> "GradedPoly":
        """Re-express in ``ring`` (matched by generator name)."""
        if ring == self.ring:
            return self
        idx = [ring.index(g.name) for g in self.ring.gens]
        for g in self.ring.gens:
            if ring.gens[ring.index(g.name)].degree != g.degree:
                raise ContextError(f"generator {g.name} changes degree under embedding")
        n = len(ring.gens)
        out = {}
        for m, c in self.terms.items():
            mono = [0] * n
            for i, e in zip(idx, m):
                mono[i] = e
            out[tuple(mono)] = c
        return GradedPoly(ring, out)

    def map_terms(self, f: Callable[[Monomial, Fraction], object]) -> "GradedPoly":
        return GradedPoly(self.ring, {m: f(m, c) for m, c in self.terms.items()})

    def filter(self, keep: Callable[[dict], bool]) -> "GradedPoly":
        to_dict = self.ring.mono_to_dict
        return GradedPoly._raw(
            self.ring, {m: c for m, c in self.terms.items() if keep(to_dict(m))}
        )

    def substitute(self, values: Mapping[str, "GradedPoly | int | Fraction"]) -> "GradedPoly":
        """Ring homomorphism sending the named generators to ``values``."""
        ring = self.ring
        subs = {}
        for name, v in values.items():
            i = ring.index(name)
            subs[i] = v if isinstance(v, GradedPoly) else ring.const(v)
        powers = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = subs[i] ** e
            return powers[key]

        result = ring.zero()
        for m, c in self.terms.items():
            kept = tuple(0 if i in subs else e for i, e in enumerate(m))
            term = GradedPoly._raw(ring, {kept: c})
            for i, e in enumerate(m):
                if i in subs and e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]):
        total = 0
        for m, c in self.terms.items():
            v = c
            for g, e in zip(self.ring.gens, m):
                if e:
                    v = v * values[g.name] ** e
            total = total + v
        return total

    # exp / log / inverse --------------------------------------------------

    def _nilpotent_powers(self, coeffs: Callable[[int], Fraction]) -> "GradedPoly":
        # sum_n coeffs(n) x^n for nilpotent x (no degree-0 part)
        if any(self.ring.degree_of(m) == 0 for m in self.terms):
            raise DomainError("argument has a degree-0 part; series would not terminate")
        result = self.ring.const(coeffs(0))
        power = self.ring.one()
        n = 0
        while True:
            n += 1
            power = power * self
            if power.is_zero():
                return result
            c = coeffs(n)
            if c:
                result = result + power.scale(c)

    def exp(self) -> "GradedPoly":
        return self._nilpotent_powers(lambda n: Fraction(1, math.factorial(n)))

    def log(self) -> "GradedPoly":
        if self.degree_zero_part() != 1:
            raise DomainError("log needs degree-0 part exactly 1")
        x = self - 1
        return x._nilpotent_powers(
            lambda n: Fraction((-1) ** (n + 1), n) if n else Fraction(0)
        )

    def inverse(self) -> "GradedPoly":
        d0 = self.degree_zero_part()
        c = d0.scalar_part()
        if d0 != c or not c:
            raise NotInvertibleError("degree-0 part must be a nonzero rational")
        x = (self - c).scale(1 / c)
        return x._nilpotent_powers(lambda n: Fraction((-1) ** n)).scale(1 / c)

    # serialization --------------------------------------------------------

    def sorted_terms(self) -> list:
        deg = self.ring.degree_of
        return sorted(self.terms.items(), key=lambda mc: (deg(mc[0]), tuple(-e for e in mc[0])))

    def monomial_text(self, mono: Monomial) -> str:
        parts = []
        for g, e in zip(self.ring.gens, mono):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono = self.monomial_text(m)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{format_fraction(mag)}*{mono}"
            else:
                body = format_fraction(mag)
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GradedPoly({self.to_text()})"

    def to_json(self) -> list:
        return [
            {"monomial": self.ring.mono_to_dict(m), "coeff": format_fraction(c)}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, ring: Ring, data: list) -> "GradedPoly":
        return cls(ring, {ring.mono_from_dict(t["monomial"]): Fraction(t["coeff"]) for t in data})


def poly_mul(a: GradedPoly, b: GradedPoly) -> GradedPoly:
    """Exact product of ``a`` and ``b`` truncated at the ring's degree cap."""
    _check_same_ring(a, b)
    ring = a.ring
    if not a.terms or not b.terms:
        return ring.zero()
    D = ring.max_degree
    deg = ring.degree_of
    bt = sorted(((deg(m), m, c) for m, c in b.terms.items()), key=lambda t: t[0])
    out: dict = {}
    for ma, ca in a.terms.items():
        room = D - deg(ma)
        for db, mb, cb in bt:
            if db > room:
                break
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                del out[m]
    return GradedPoly._raw(ring, out)


# ---------------------------------------------------------------------------


class QSeries:
    """Truncated series ``sum_k c_k q^{k/2}``, ``0 <= k <= K``.

    ``coeffs[k]`` is a :class:`GradedPoly` in ``ring``.  Everything of
    q-exponent above ``K/2`` is discarded.
    """

    __slots__ = ("ring", "K", "coeffs")

    def __init__(self, ring: Ring, K: int, coeffs: Sequence | Mapping | None = None):
        if K < 0:
            raise ValueError("q-order K must be non-negative")
        out = [ring.zero()] * (K + 1)
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs or ())
        for k, c in items:
            if k < 0:
                raise ValueError("negative q-exponents are not supported")
            if k > K:
                continue
            if isinstance(c, GradedPoly):
                if c.ring != ring:
                    raise ContextError("coefficient ring mismatch")
            else:
                c = ring.const(c)
            out[k] = c
        self.ring = ring
        self.K = K
        self.coeffs = tuple(out)

    @classmethod
    def _raw(cls, ring, K, coeffs):
        s = cls.__new__(cls)
        s.ring = ring
        s.K = K
        s.coeffs = tuple(coeffs)
        return s

    @classmethod
    def zero(cls, ring: Ring, K: int) -> "QSeries":
        return cls(ring, K)

    @classmethod
    def one(cls, ring: Ring, K: int) -> "QSeries":
        return cls(ring, K, {0: ring.one()})

    @classmethod
    def scalars(cls, K: int, values) -> "QSeries":
        return cls(SCALARS, K, values)

    @classmethod
    def q_power(cls, ring: Ring, K: int, k: int, coeff=1) -> "QSeries":
        """``coeff * q^{k/2}``."""
        c = coeff if isinstance(coeff, GradedPoly) else ring.const(coeff)
        return cls(ring, K, {k: c})

    def __getitem__(self, k: int) -> GradedPoly:
        return self.coeffs[k]

    def coefficient(self, exponent) -> GradedPoly:
        """Coefficient of ``q^exponent`` for a half-integer ``exponent``."""
        k = Fraction(exponent) * 2
        if k.denominator != 1:
            raise ValueError("exponent must be a half-integer")
        k = int(k)
        if not 0 <= k <= self.K:
            raise ValueError(f"exponent {exponent} outside 0..{self.K}/2")
        return self.coeffs[k]

    def __len__(self):
        return self.K + 1

    def _check(self, other: "QSeries"):
        if self.ring != other.ring or self.K != other.K:
            raise ContextError(
                f"series context mismatch: ({self.ring!r}, K={self.K}) vs ({other.ring!r}, K={other.K})"
            )

    def _coerce(self, other):
        if isinstance(other, QSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, GradedPoly)):
            return QSeries(self.ring, self.K, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSeries._raw(self.ring, self.K, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw(self.ring, self.K, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "QSeries":
        """Multiply every coefficient by a scalar or by a ``GradedPoly``."""
        if isinstance(c, GradedPoly):
            return QSeries._raw(self.ring, self.K, [a * c for a in self.coeffs])
        c = as_fraction(c)
        return QSeries._raw(self.ring, self.K, [a.scale(c) for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GradedPoly)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return qs_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        if isinstance(other, QSeries):
            return self * other.invert()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = QSeries.one(self.ring, self.K)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.ring == other.ring and self.K == other.K and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.K, self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def leading_index(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    # structural maps ------------------------------------------------------

    def map(self, f: Callable[[GradedPoly], GradedPoly]) -> "QSeries":
        return QSeries(self.ring, self.K, [f(c) for c in self.coeffs])

    def degree_slice(self, d: int) -> "QSeries":
        return QSeries._raw(self.ring, self.K, [c.degree_slice(d) for c in self.coeffs])

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``q^{k/2}``."""
        if k < 0:
            raise ValueError("negative shifts are not supported")
        zero = self.ring.zero()
        return QSeries._raw(self.ring, self.K, ([zero] * k + list(self.coeffs))[: self.K + 1])

    def truncate(self, max_degree: int | None = None, K: int | None = None) -> "QSeries":
        K = self.K if K is None else K
        if K > self.K:
            raise ContextError("cannot raise the q-order")
        if max_degree is None:
            return QSeries._raw(self.ring, K, self.coeffs[: K + 1])
        ring = self.ring.truncated(max_degree)
        return QSeries(ring, K, [c.truncate(max_degree) for c in self.coeffs[: K + 1]])

    def embed(self, ring: Ring) -> "QSeries":
        return QSeries._raw(ring, self.K, [c.embed(ring) for c in self.coeffs])

    def substitute(self, values) -> "QSeries":
        return QSeries._raw(self.ring, self.K, [c.substitute(values) for c in self.coeffs])

    def scalar_values(self) -> list:
        """Coefficients as Fractions; only for series over :data:`SCALARS`-like constants."""
        out = []
        for c in self.coeffs:
            if c.degree_zero_part() != c or c != c.scalar_part():
                raise ContextError("series has non-scalar coefficients")
            out.append(c.scalar_part())
        return out

    # exp / log / inverse --------------------------------------------------

    def invert(self) -> "QSeries":
        return qs_invert(self)

    def exp(self) -> "QSeries":
        return qs_exp(self)

    def log(self) -> "QSeries":
        return qs_log(self)

    # evaluation -----------------------------------------------------------

    def evaluate(self, q_half, values: Mapping[str, object] | None = None):
        """Numerical value at ``q^{1/2} = q_half`` (generators from ``values``)."""
        values = values or {}
        total = 0
        p = 1
        for c in self.coeffs:
            if c:
                total = total + complex(c.evaluate(values)) * p
            p = p * q_half
        return total

    # serialization --------------------------------------------------------

    @staticmethod
    def _q_text(k: int) -> str:
        if k == 0:
            return ""
        if k == 2:
            return "q"
        if k % 2 == 0:
            return f"q^{k // 2}"
        return f"q^({k}/2)"

    def to_text(self) -> str:
        pieces = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            qt = self._q_text(k)
            if len(c.terms) == 1 and not qt:
                pieces.append(c.to_text())
            elif c == c.scalar_part():
                v = c.scalar_part()
                if v == 1:
                    pieces.append(qt)
                elif v == -1:
                    pieces.append("-" + qt)
                elif v.denominator == 1 or not qt:
                    pieces.append(f"{format_fraction(v)}{qt}")
                else:
                    pieces.append(f"{format_fraction(v)}*{qt}")
            else:
                pieces.append(f"({c.to_text()})" + (f"*{qt}" if qt else ""))
        if not pieces:
            return "0"
        text = pieces[0]
        for p in pieces[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text + f" + O({self._q_text(self.K + 1)})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"QSeries(K={self.K}, {self.to_text()})"

    def to_json(self) -> dict:
        return {
            "q_order": self.K,
            "generators": [{"name": g.name, "degree": g.degree} for g in self.ring.gens],
            "max_degree": self.ring.max_degree,
            "coefficients": [
                {"q_exponent": format_fraction(Fraction(k, 2)), "poly": c.to_json()}
                for k, c in enumerate(self.coeffs)
                if c
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping) -> "QSeries":
        ring = Ring(
            [Generator(g["name"], g["degree"]) for g in data["generators"]], data["max_degree"]
        )
        coeffs = {}
        for item in data["coefficients"]:
            k = Fraction(item["q_exponent"]) * 2
            coeffs[int(k)] = GradedPoly.from_json(ring, item["poly"])
        return cls(ring, data["q_order"], coeffs)


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qs_scale(a: QSeries, c) -> QSeries:
    return a.scale(c)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product on half-integer exponents, truncated at ``K/2``."""
    a._check(b)
    K = a.K
    ring = a.ring
    nz_a = [(i, c) for i, c in enumerate(a.coeffs) if c]
    nz_b = [(j, c) for j, c in enumerate(b.coeffs) if c]
    out = [ring.zero()] * (K + 1)
    for i, ca in nz_a:
        for j, cb in nz_b:
            if i + j > K:
                break
            out[i + j] = out[i + j] + poly_mul(ca, cb)
    return QSeries._raw(ring, K, out)


def qs_invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; the q^0 coefficient must be a unit."""
    try:
        b0 = a.coeffs[0].inverse()
    except NotInvertibleError:
        raise NotInvertibleError("q^0 coefficient is not a unit") from None
    out = [b0]
    for k in range(1, a.K + 1):
        acc = a.ring.zero()
        for j in range(1, k + 1):
            if a.coeffs[j]:
                acc = acc + a.coeffs[j] * out[k - j]
        out.append(-(b0 * acc))
    return QSeries._raw(a.ring, a.K, out)


def qs_exp(a: QSeries) -> QSeries:
    """exp of a series whose q^0 coefficient has no degree-0 part.

    Uses ``k F_k = sum_{j=1..k} j A_j F_{k-j}`` (derivation in q^{1/2}).
    """
    if a.coeffs[0].degree_zero_part():
        raise DomainError("exp needs a q^0 coefficient without degree-0 part")
    f0 = a.coeffs[0].exp()
    out = [f0]
    for k in range(1, a.K + 1):
        acc = a.ring.zero()
        for j in range(1, k + 1):
            if a.coeffs[j]:
                acc = acc + (a.coeffs[j] * out[k - j]).scale(j)
        out.append(acc.scale(Fraction(1, k)))
    return QSeries._raw(a.ring, a.K, out)


def qs_log(a: QSeries) -> QSeries:
    """log of a series whose q^0 coefficient has degree-0 part exactly 1."""
    f0 = a.coeffs[0]
    if f0.degree_zero_part() != 1:
        raise DomainError("log needs a q^0 coefficient with degree-0 part 1")
    l0 = f0.log()
    inv0 = f0.inverse()
    out = [l0]
    for k in range(1, a.K + 1):
        acc = a.coeffs[k]
        for j in range(1, k):
            if out[j]:
                acc = acc - (out[j] * a.coeffs[k - j]).scale(Fraction(j, k))
        out.append(inv0 * acc)
    return QSeries._raw(a.ring, a.K, out)


def qs_sum(items: Iterable[QSeries], ring: Ring, K: int) -> QSeries:
    return reduce(lambda x, y: x + y, items, QSeries.zero(ring, K))

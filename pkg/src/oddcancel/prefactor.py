"""Powers of two whose exponent is affine in the symbolic rank N."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rings import format_fraction


@dataclass(frozen=True)
class PowerOfTwo:
    """``2 ** (const + n_coeff * N)``."""

    const: Fraction = Fraction(0)
    n_coeff: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "const", Fraction(self.const))
        object.__setattr__(self, "n_coeff", Fraction(self.n_coeff))

    @classmethod
    def spinor(cls, const=0) -> "PowerOfTwo":
        """``2^{const + N/2}``, the rank of the spinor bundle times ``2^const``."""
        return cls(Fraction(const), Fraction(1, 2))

    def __mul__(self, other: "PowerOfTwo") -> "PowerOfTwo":
        return PowerOfTwo(self.const + other.const, self.n_coeff + other.n_coeff)

    def __truediv__(self, other: "PowerOfTwo") -> "PowerOfTwo":
        return PowerOfTwo(self.const - other.const, self.n_coeff - other.n_coeff)

    def times(self, k) -> "PowerOfTwo":
        return PowerOfTwo(self.const + Fraction(k), self.n_coeff)

    def value(self, N: int | None = None) -> Fraction:
        e = self.const + self.n_coeff * (N or 0)
        if self.n_coeff and N is None:
            raise ValueError("symbolic exponent needs a concrete N")
        if e.denominator != 1:
            raise ValueError(f"non-integral exponent {e}")
        e = int(e)
        return Fraction(2) ** e

    def exponent_text(self) -> str:
        parts = []
        if self.n_coeff:
            if self.n_coeff == Fraction(1, 2):
                parts.append("N/2")
            else:
                parts.append(f"{format_fraction(self.n_coeff)}*N")
        if self.const or not parts:
            c = self.const
            if parts:
                parts.append(("+" if c > 0 else "-") + format_fraction(abs(c)))
            else:
                parts.append(format_fraction(c))
        return "".join(parts)

    def __str__(self):
        return f"2^({self.exponent_text()})"

    def latex(self) -> str:
        return "2^{" + self.exponent_text().replace("N/2", "\\frac{N}{2}") + "}"

    def to_json(self) -> dict:
        return {"const": format_fraction(self.const), "coeffN": format_fraction(self.n_coeff)}

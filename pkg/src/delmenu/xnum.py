"""Exact numbers of the form ``a + b*iota``.

``iota`` is a symbolic positive infinitesimal: smaller than every positive
rational, larger than zero.  A single infinitesimal level is enough to break
agent ties exactly, so an :class:`XNum` carries one rational standard part
(``std``) and one rational infinitesimal coefficient (``inf``).

The order is lexicographic: ``x < y`` iff ``x.std < y.std``, or the standard
parts are equal and ``x.inf < y.inf``.  Addition, negation, and multiplication
by a rational scalar act componentwise; the product of two XNums is not
defined (iota**2 never arises).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def as_fraction(x: Rational | str) -> Fraction:
    """Coerce an int, Fraction, or 'p/q' string to Fraction.

    Floats are rejected: they would silently smuggle binary rounding into a
    toolkit whose whole point is exact arithmetic.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


@dataclass(frozen=True)
class XNum:
    std: Fraction
    inf: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "std", as_fraction(self.std))
        object.__setattr__(self, "inf", as_fraction(self.inf))

    # -- arithmetic (componentwise / scalar-linear) --------------------------

    def __add__(self, other: XNum | Rational) -> XNum:
        other = _coerce(other)
        return XNum(self.std + other.std, self.inf + other.inf)

    __radd__ = __add__

    def __sub__(self, other: XNum | Rational) -> XNum:
        other = _coerce(other)
        return XNum(self.std - other.std, self.inf - other.inf)

    def __rsub__(self, other: XNum | Rational) -> XNum:
        return _coerce(other) - self

    def __neg__(self) -> XNum:
        return XNum(-self.std, -self.inf)

    def __mul__(self, scalar: Rational) -> XNum:
        if isinstance(scalar, XNum):
            raise TypeError("product of two XNums is not defined")
        k = as_fraction(scalar)
        return XNum(self.std * k, self.inf * k)

    __rmul__ = __mul__

    # -- lexicographic total order -------------------------------------------

    def _key(self) -> tuple[Fraction, Fraction]:
        return (self.std, self.inf)

    def __lt__(self, other: XNum | Rational) -> bool:
        return self._key() < _coerce(other)._key()

    def __le__(self, other: XNum | Rational) -> bool:
        return self._key() <= _coerce(other)._key()

    def __gt__(self, other: XNum | Rational) -> bool:
        return self._key() > _coerce(other)._key()

    def __ge__(self, other: XNum | Rational) -> bool:
        return self._key() >= _coerce(other)._key()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (XNum, int, Fraction)):
            return self._key() == _coerce(other)._key()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key())

    # -- rendering -------------------------------------------------------------

    def __str__(self) -> str:
        if self.inf == 0:
            return str(self.std)
        sign = "+" if self.inf > 0 else "-"
        return f"{self.std}{sign}{abs(self.inf)}i"

    def __repr__(self) -> str:
        return f"XNum({self.std!r}, {self.inf!r})"


def _coerce(x: XNum | Rational) -> XNum:
    if isinstance(x, XNum):
        return x
    return XNum(as_fraction(x))


def xnum(std: Rational | str, inf: Rational | str = 0) -> XNum:
    """Convenience constructor accepting ints, Fractions, or 'p/q' strings."""
    return XNum(as_fraction(std), as_fraction(inf))


ZERO = XNum(Fraction(0))
ONE = XNum(Fraction(1))
IOTA = XNum(Fraction(0), Fraction(1))


def xsum(terms) -> XNum:
    """Exact sum of XNums (empty sum is 0)."""
    total = ZERO
    for t in terms:
        total = total + t
    return total

"""Nonnegative exact rationals extended by +infinity.

Every summability exponent lives in ``[0, +inf]``. Formulas in this package are
written in terms of reciprocals (``1/p``, ``1/p*``, ...), which are ordinary
signed :class:`fractions.Fraction` values; :class:`ExtRational` is the carrier
for the exponents themselves.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DomainError

_RATIONAL_RE = re.compile(r"^\s*[+]?\d+(\s*/\s*\d+)?\s*$")
_DECIMAL_RE = re.compile(r"^\s*[+]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")
_INF_TOKENS = {"inf", "+inf", "infinity", "oo", "∞"}

Number = Union[int, Fraction, "ExtRational"]


class ExtRational:
    """A value in ``[0, +inf]`` with exact arithmetic.

    Construct from an int, a :class:`Fraction`, another ``ExtRational`` or a
    string (``"3"``, ``"3/2"``, ``"inf"``). Floats are rejected; use
    :meth:`from_float` when an exact binary expansion is really wanted.
    """

    __slots__ = ("_q",)

    def __init__(self, value: Number | str):
        if isinstance(value, ExtRational):
            self._q = value._q
            return
        if isinstance(value, str):
            value = _parse_text(value, allow_decimal=False)
            self._q = value._q
            return
        if isinstance(value, bool) or not isinstance(value, Rational):
            raise DomainError(f"ExtRational needs an exact rational, got {value!r}")
        q = Fraction(value)
        if q < 0:
            raise DomainError(f"exponents are nonnegative, got {q}")
        self._q = q

    # construction helpers -------------------------------------------------

    @classmethod
    def infinity(cls) -> ExtRational:
        obj = cls.__new__(cls)
        obj._q = None
        return obj

    @classmethod
    def parse(cls, text: str, allow_decimal: bool = False) -> ExtRational:
        return _parse_text(text, allow_decimal=allow_decimal)

    @classmethod
    def from_float(cls, x: float) -> ExtRational:
        if math.isinf(x) and x > 0:
            return INF
        if math.isnan(x):
            raise DomainError("NaN is not an exponent")
        return cls(Fraction(x))

    @classmethod
    def from_reciprocal(cls, inv: Fraction | int) -> ExtRational:
        """Return ``x`` with ``1/x == inv``; ``inv == 0`` gives ``INF``."""
        inv = Fraction(inv)
        if inv < 0:
            raise DomainError(f"reciprocal {inv} is negative")
        if inv == 0:
            return INF
        return cls(1 / inv)

    # inspection ------------------------------------------------------------

    @property
    def is_infinite(self) -> bool:
        return self._q is None

    @property
    def is_finite(self) -> bool:
        return self._q is not None

    @property
    def fraction(self) -> Fraction:
        if self._q is None:
            raise DomainError("INF has no finite value")
        return self._q

    def recip(self) -> Fraction:
        """``1/x`` as a Fraction, with ``1/INF == 0``. ``1/0`` is a domain error."""
        if self._q is None:
            return Fraction(0)
        if self._q == 0:
            raise DomainError("1/0 requested; use reciprocal() for the extended value")
        return 1 / self._q

    def reciprocal(self) -> ExtRational:
        """Extended reciprocal: ``0 -> INF``, ``INF -> 0``."""
        if self._q is None:
            return ExtRational(0)
        if self._q == 0:
            return INF
        return ExtRational(1 / self._q)

    # arithmetic ------------------------------------------------------------

    def __add__(self, other: Number) -> ExtRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._q is None or other._q is None:
            return INF
        return ExtRational(self._q + other._q)

    __radd__ = __add__

    def __sub__(self, other: Number) -> ExtRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other._q is None:
            raise DomainError("subtracting INF")
        if self._q is None:
            return INF
        return ExtRational(self._q - other._q)

    def __mul__(self, other: Number) -> ExtRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._q is None or other._q is None:
            if self._q == 0 or other._q == 0:
                raise DomainError("INF * 0 is undefined")
            return INF
        return ExtRational(self._q * other._q)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> ExtRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other._q is None:
            if self._q is None:
                raise DomainError("INF / INF is undefined")
            return ExtRational(0)
        if other._q == 0:
            raise ZeroDivisionError("division by zero; use reciprocal() for 1/0 = INF")
        if self._q is None:
            return INF
        return ExtRational(self._q / other._q)

    def __rtruediv__(self, other: Number) -> ExtRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    # ordering ----------------------------------------------------------------

    def _key(self):
        return (1, 0) if self._q is None else (0, self._q)

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._q == other._q

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() < other._key()

    def __le__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() <= other._key()

    def __gt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() > other._key()

    def __ge__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() >= other._key()

    def __hash__(self) -> int:
        return hash(math.inf) if self._q is None else hash(self._q)

    # conversion --------------------------------------------------------------

    def __float__(self) -> float:
        return math.inf if self._q is None else float(self._q)

    def __str__(self) -> str:
        if self._q is None:
            return "inf"
        if self._q.denominator == 1:
            return str(self._q.numerator)
        return f"{self._q.numerator}/{self._q.denominator}"

    def __repr__(self) -> str:
        return f"ExtRational('{self}')"


INF = ExtRational.infinity()
ZERO = ExtRational(0)
ONE = ExtRational(1)


def _coerce(x):
    if isinstance(x, ExtRational):
        return x
    if isinstance(x, Rational) and not isinstance(x, bool):
        if x < 0:
            return NotImplemented
        return ExtRational(x)
    return NotImplemented


def _parse_text(text: str, allow_decimal: bool) -> ExtRational:
    t = text.strip()
    if t.lower() in _INF_TOKENS:
        return INF
    if _RATIONAL_RE.match(t):
        num, _, den = t.replace(" ", "").lstrip("+").partition("/")
        if den and int(den) == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return ExtRational(Fraction(int(num), int(den) if den else 1))
    if _DECIMAL_RE.match(t):
        if not allow_decimal:
            raise DomainError(f"decimal {text!r} rejected: write exponents as a/b")
        return ExtRational(Fraction(t))
    raise DomainError(f"cannot parse {text!r} as a nonnegative rational or 'inf'")


def as_ext(x: Number | str) -> ExtRational:
    """Coerce ints, Fractions and strings; pass ExtRationals through."""
    return x if isinstance(x, ExtRational) else ExtRational(x)


def conjugate(p: Number | str) -> ExtRational:
    """Conjugate exponent ``p* = p/(p-1)``, with ``1* = INF`` and ``INF* = 1``."""
    p = as_ext(p)
    if p < 1:
        raise DomainError(f"conjugate exponent needs p >= 1, got {p}")
    if p.is_infinite:
        return ONE
    if p == 1:
        return INF
    q = p.fraction
    return ExtRational(q / (q - 1))


def dual_recip(p: Number | str) -> Fraction:
    """``1/p*`` computed as ``1 - 1/p``."""
    p = as_ext(p)
    if p < 1:
        raise DomainError(f"conjugate exponent needs p >= 1, got {p}")
    return 1 - p.recip()


def fmt(x) -> str:
    """Render a Fraction / ExtRational / int as ``a/b`` text."""
    if x is None:
        return "none"
    if isinstance(x, ExtRational):
        return str(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

"""Numbers of the form  rational * 2**a * pi**(b/2).

Every closed-form constant in this package at beta in {1, 2} reduces to
this shape, because Gamma at integer and half-integer arguments is a
rational multiple of 1 or sqrt(pi). ``a`` may be a half-integer so that
factors like ``(2*pi)**(1/2)`` stay exact.

Values that leave this class (general real alpha or beta) are carried as
float-only ExactValues with ``rational=None``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, float]


def _as_fraction(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _is_half_multiple(x: Fraction) -> bool:
    return x.denominator in (1, 2)


def _split_twos(n: int) -> tuple[int, int]:
    """Return (odd part, exponent of 2) of a nonzero integer."""
    k = (n & -n).bit_length() - 1
    return n >> k, k


def _float_value(r: Fraction, two_exp: Fraction, pi_half_exp: int) -> float:
    if r == 0:
        return 0.0
    whole = math.floor(two_exp)
    # scale num/den into [1/2, 2) first so huge rationals do not overflow
    num, den = r.numerator, r.denominator
    shift = abs(num).bit_length() - den.bit_length()
    if shift > 0:
        den <<= shift
    else:
        num <<= -shift
    try:
        out = math.ldexp(num / den, whole + shift)
    except OverflowError:
        return math.inf if num > 0 else -math.inf
    if two_exp != whole:
        out *= math.sqrt(2.0)
    if pi_half_exp:
        out *= math.pi ** (pi_half_exp // 2)
        if pi_half_exp % 2:
            out *= math.sqrt(math.pi)
    return out


@dataclass(frozen=True)
class ExactValue:
    rational: Fraction | None
    two_exp: Fraction = Fraction(0)
    pi_half_exp: int = 0
    float_value: float = field(default=math.nan, compare=False)

    @classmethod
    def make(cls, rational: Number, two_exp: Number = 0, pi_half_exp: int = 0) -> "ExactValue":
        r = _as_fraction(rational)
        a = _as_fraction(two_exp)
        if not _is_half_multiple(a):
            raise ValueError(f"power of 2 must be a multiple of 1/2, got {a}")
        if r == 0:
            return cls(Fraction(0), Fraction(0), 0, 0.0)
        num, kn = _split_twos(r.numerator)
        den, kd = _split_twos(r.denominator)
        r = Fraction(num, den)
        a = a + kn - kd
        return cls(r, a, int(pi_half_exp), _float_value(r, a, int(pi_half_exp)))

    @classmethod
    def inexact(cls, value: float) -> "ExactValue":
        return cls(None, Fraction(0), 0, float(value))

    @classmethod
    def one(cls) -> "ExactValue":
        return cls.make(1)

    @property
    def is_exact(self) -> bool:
        return self.rational is not None

    def __float__(self) -> float:
        return self.float_value

    def log(self) -> float:
        """Natural log, computed without forming the float (avoids overflow)."""
        if not self.is_exact:
            return math.log(self.float_value)
        r = self.rational
        if r <= 0:
            raise ValueError("log of a nonpositive value")
        return (
            math.log(r.numerator) - math.log(r.denominator)
            + float(self.two_exp) * math.log(2.0)
            + 0.5 * self.pi_half_exp * math.log(math.pi)
        )

    def __mul__(self, other: "ExactValue | Number") -> "ExactValue":
        if not isinstance(other, ExactValue):
            other = ExactValue.make(other) if not isinstance(other, float) else ExactValue.inexact(other)
        if self.is_exact and other.is_exact:
            return ExactValue.make(
                self.rational * other.rational,
                self.two_exp + other.two_exp,
                self.pi_half_exp + other.pi_half_exp,
            )
        return ExactValue.inexact(self.float_value * other.float_value)

    __rmul__ = __mul__

    def reciprocal(self) -> "ExactValue":
        if self.is_exact:
            if self.rational == 0:
                raise ZeroDivisionError("reciprocal of zero")
            return ExactValue.make(1 / self.rational, -self.two_exp, -self.pi_half_exp)
        return ExactValue.inexact(1.0 / self.float_value)

    def __truediv__(self, other: "ExactValue | Number") -> "ExactValue":
        if not isinstance(other, ExactValue):
            other = ExactValue.make(other) if not isinstance(other, float) else ExactValue.inexact(other)
        return self * other.reciprocal()

    def __rtruediv__(self, other: Number) -> "ExactValue":
        return self.reciprocal() * other

    def __pow__(self, k: int) -> "ExactValue":
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if self.is_exact:
            return ExactValue.make(self.rational**k, self.two_exp * k, self.pi_half_exp * k)
        return ExactValue.inexact(self.float_value**k)

    def same_value(self, other: "ExactValue") -> bool:
        """Exact equality when both are exact, float equality otherwise."""
        if self.is_exact and other.is_exact:
            return self == other
        return self.float_value == other.float_value

    def __str__(self) -> str:
        return self.to_string()

    def to_string(self) -> str:
        """Canonical text form such as ``35/pi``, ``pi^2/8`` or ``sqrt(2)*pi``.

        Integer powers of 2 are folded into the integers; a leftover
        half power appears as ``sqrt(2)`` in the numerator. Powers of pi
        are written ``pi``, ``pi^k`` or ``pi^(k/2)``.
        """
        if not self.is_exact:
            return repr(self.float_value)
        r = self.rational
        if r == 0:
            return "0"
        whole = math.floor(self.two_exp)
        r = r * Fraction(2) ** whole
        sign = "-" if r < 0 else ""
        r = abs(r)
        num: list[str] = []
        den: list[str] = []
        if r.numerator != 1:
            num.append(str(r.numerator))
        if r.denominator != 1:
            den.append(str(r.denominator))
        if self.two_exp != whole:
            num.append("sqrt(2)")
        b = self.pi_half_exp
        if b:
            (num if b > 0 else den).append(_pi_power(abs(b)))
        top = "*".join(num) if num else "1"
        if not den:
            return sign + top
        bottom = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
        return f"{sign}{top}/{bottom}"

    @classmethod
    def parse(cls, text: str) -> "ExactValue":
        """Inverse of :meth:`to_string` for exact values."""
        s = text.strip()
        sign = 1
        if s.startswith("-"):
            sign, s = -1, s[1:]
        depth, cut = 0, None
        for i, ch in enumerate(s):
            depth += (ch == "(") - (ch == ")")
            if ch == "/" and depth == 0:
                cut = i
                break
        top, bottom = (s, "") if cut is None else (s[:cut], s[cut + 1:])
        if bottom.startswith("(") and bottom.endswith(")"):
            bottom = bottom[1:-1]
        value = cls.make(sign)
        for tok in _split_top(top):
            value = value * _parse_factor(tok)
        for tok in _split_top(bottom) if bottom else []:
            value = value / _parse_factor(tok)
        return value


def _pi_power(b: int) -> str:
    if b == 2:
        return "pi"
    if b % 2 == 0:
        return f"pi^{b // 2}"
    return f"pi^({b}/2)"


def _split_top(s: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        depth += (ch == "(") - (ch == ")")
        if ch == "*" and depth == 0:
            parts.append(s[start:i])
            start = i + 1
    parts.append(s[start:])
    return parts


def _parse_factor(tok: str) -> ExactValue:
    tok = tok.strip()
    if tok == "sqrt(2)":
        return ExactValue.make(1, Fraction(1, 2))
    if tok == "pi":
        return ExactValue.make(1, 0, 2)
    m = re.fullmatch(r"pi\^(\d+)", tok)
    if m:
        return ExactValue.make(1, 0, 2 * int(m.group(1)))
    m = re.fullmatch(r"pi\^\((\d+)/2\)", tok)
    if m:
        return ExactValue.make(1, 0, int(m.group(1)))
    if re.fullmatch(r"\d+", tok):
        return ExactValue.make(int(tok))
    raise ValueError(f"bad factor {tok!r}")


def gamma_exact(x: Number) -> ExactValue:
    """Gamma(x) for positive integer or half-integer x, exactly.

    Other arguments fall back to a float-only value.
    """
    x = _as_fraction(x)
    if x <= 0 and x.denominator == 1:
        raise ValueError(f"Gamma has a pole at {x}")
    if x.denominator == 1:
        return ExactValue.make(math.factorial(int(x) - 1))
    if x.denominator == 2 and x > 0:
        m = int(x - Fraction(1, 2))
        # Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
        return ExactValue.make(Fraction(math.factorial(2 * m), math.factorial(m)), -2 * m, 1)
    return ExactValue.inexact(math.gamma(float(x)))


def pow_two(e: Number) -> ExactValue:
    e = _as_fraction(e)
    if _is_half_multiple(e):
        return ExactValue.make(1, e)
    return ExactValue.inexact(2.0 ** float(e))


def pow_pi(e: Number) -> ExactValue:
    e = _as_fraction(e)
    if _is_half_multiple(e):
        return ExactValue.make(1, 0, int(2 * e))
    return ExactValue.inexact(math.pi ** float(e))


def product(values) -> ExactValue:
    out = ExactValue.one()
    for v in values:
        out = out * v
    return out

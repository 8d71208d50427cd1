"""Exact coefficient rings, univariate polynomials and truncated power series.

Three kinds of coefficient ring are supported:

    >>> QQ("3/6")
    Fraction(1, 2)
    >>> Zmod(6)(-1)
    Residue(5, 6)

Values are plain Python objects (``int``, ``Fraction``, :class:`Residue`),
always stored in canonical form so that ``==`` is representation equality.
Structures built on top of them (:class:`Polynomial`, :class:`PowerSeries1`
and everything in the other modules) carry their :class:`Ring` explicitly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence, Union

__all__ = [
    "RingError",
    "RingMismatch",
    "CapabilityError",
    "Residue",
    "Ring",
    "ZZ",
    "QQ",
    "Zmod",
    "parse_ring",
    "Polynomial",
    "poly_arith",
    "poly_coeff",
    "PowerSeries1",
    "ps_arith",
]


class RingError(ValueError):
    """A value cannot be represented in the requested ring."""


class RingMismatch(RingError):
    """Operands live over different rings."""


class CapabilityError(RingError):
    """The ring lacks a capability (typically: it does not contain Q)."""


@dataclass(frozen=True)
class Residue:
    """An element of Z/mZ, with ``0 <= value < modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise RingError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise RingMismatch(f"Z/{self.modulus} vs Z/{other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue((self.value + o) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue((self.value - o) % self.modulus, self.modulus)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue((o - self.value) % self.modulus, self.modulus)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Residue((self.value * o) % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value % self.modulus, self.modulus)

    def __pow__(self, k: int):
        return Residue(pow(self.value, k, self.modulus), self.modulus)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


RingValue = Union[int, Fraction, Residue]


@dataclass(frozen=True)
class Ring:
    """Descriptor of a commutative unital coefficient ring.

    ``kind`` is one of ``"integers"``, ``"rationals"`` or ``"mod"``. Calling
    the ring coerces a Python value (int, Fraction, Residue or a literal
    string such as ``"-3/4"``) into its canonical representation.
    """

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in ("integers", "rationals", "mod"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if (self.kind == "mod") != (self.modulus is not None):
            raise ValueError("modulus is required exactly for mod rings")
        if self.kind == "mod" and self.modulus < 2:
            raise RingError(f"modulus must be >= 2, got {self.modulus}")

    @property
    def contains_rationals(self) -> bool:
        return self.kind == "rationals"

    @property
    def zero(self) -> RingValue:
        return self(0)

    @property
    def one(self) -> RingValue:
        return self(1)

    def __call__(self, value) -> RingValue:
        if isinstance(value, str):
            value = parse_scalar(value)
        if isinstance(value, bool):
            value = int(value)
        if self.kind == "rationals":
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
        elif isinstance(value, Residue):
            if self.kind == "mod" and value.modulus == self.modulus:
                return value
            raise RingMismatch(f"{value!r} is not an element of {self}")
        else:
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise RingError(f"{value} is not an element of {self}")
                value = value.numerator
            if isinstance(value, int):
                return value if self.kind == "integers" else Residue(value, self.modulus)
        raise RingError(f"cannot coerce {value!r} into {self}")

    def contains(self, value) -> bool:
        if self.kind == "integers":
            return isinstance(value, int) and not isinstance(value, bool)
        if self.kind == "rationals":
            return isinstance(value, Fraction)
        return isinstance(value, Residue) and value.modulus == self.modulus

    def inverse_of_integer(self, n: int) -> RingValue:
        """1/n, only available over the rationals."""
        self.require_rationals(f"1/{n}")
        return Fraction(1, n)

    def require_rationals(self, what: str = "this construction") -> None:
        if not self.contains_rationals:
            raise CapabilityError(f"{what} requires a ring containing Q, got {self}")

    def format(self, value: RingValue) -> str:
        return str(value)

    def __str__(self):
        if self.kind == "integers":
            return "Z"
        if self.kind == "rationals":
            return "Q"
        return f"Zmod:{self.modulus}"


ZZ = Ring("integers")
QQ = Ring("rationals")


def Zmod(m: int) -> Ring:
    return Ring("mod", m)


def parse_ring(text: str) -> Ring:
    """Parse ``Q``, ``Z`` or ``Zmod:m``."""
    t = text.strip()
    if t in ("Q", "QQ"):
        return QQ
    if t in ("Z", "ZZ"):
        return ZZ
    m = re.fullmatch(r"Zmod:(\d+)", t)
    if m:
        return Zmod(int(m.group(1)))
    raise ValueError(f"unknown ring {text!r} (expected Q, Z or Zmod:m)")


_SCALAR = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*")


def parse_scalar(text: str) -> int | Fraction:
    m = _SCALAR.fullmatch(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def _check_same(a: Ring, b: Ring) -> None:
    if a != b:
        raise RingMismatch(f"{a} vs {b}")


class Polynomial:
    """Element of R[x]; coefficients lowest degree first, trailing zeros trimmed."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: Iterable = ()):
        cs = [ring(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.ring = ring
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def _raw(cls, ring: Ring, cs: list) -> Polynomial:
        # cs already canonical ring values
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.ring = ring
        p.coeffs = tuple(cs)
        return p

    @classmethod
    def zero(cls, ring: Ring) -> Polynomial:
        return cls._raw(ring, [])

    @classmethod
    def constant(cls, ring: Ring, c) -> Polynomial:
        return cls(ring, [c])

    @classmethod
    def monomial(cls, ring: Ring, k: int, c=1) -> Polynomial:
        return cls(ring, [0] * k + [c])

    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.zero

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            _check_same(self.ring, other.ring)
            return other
        return Polynomial(self.ring, [other])

    def __add__(self, other):
        o = self._coerce(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return Polynomial._raw(self.ring, cs)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring(other)
            return Polynomial._raw(self.ring, [a * c for a in self.coeffs])
        _check_same(self.ring, other.ring)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero(self.ring)
        cs = [self.ring.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                cs[i + j] = cs[i + j] + ai * bj
        return Polynomial._raw(self.ring, cs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial.constant(self.ring, 1)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, k: int) -> Polynomial:
        """Multiply by x^k."""
        if not self.coeffs or k == 0:
            return self
        return Polynomial._raw(self.ring, [self.ring.zero] * k + list(self.coeffs))

    def __call__(self, value):
        acc = self.ring.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, ring: Ring, data: Sequence[str]) -> Polynomial:
        return cls(ring, [ring(str(c)) for c in data])

    def format(self, var: str = "x") -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            s = str(c)
            neg = s.startswith("-")
            mag = s[1:] if neg else s
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
            if not terms:
                terms.append(("-" if neg else "") + body)
            else:
                terms.append((" - " if neg else " + ") + body)
        return "".join(terms) if terms else "0"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.ring}, {self.format()!r})"

    @classmethod
    def parse(cls, ring: Ring, text: str, var: str = "x") -> Polynomial:
        """Parse ``"c0 + c1*x + ... + cd*x^d"`` with rational literals.

        Coefficients may be omitted (``x^2``), and the same power may repeat.
        """
        src = text.strip()
        if not src:
            raise ValueError("empty polynomial")
        v = re.escape(var)
        term = re.compile(
            rf"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)(?:\s*\*?\s*({v})(?:\^(\d+))?)?|({v})(?:\^(\d+))?)\s*"
        )
        pos, result = 0, cls.zero(ring)
        while pos < len(src):
            m = term.match(src, pos)
            if not m or m.end() == pos or (pos > 0 and not m.group(1)):
                raise ValueError(f"cannot parse polynomial {text!r} at column {pos + 1}")
            sign, num, v1, e1, v2, e2 = m.groups()
            coeff = parse_scalar(num) if num else 1
            if v1 or v2:
                exp_s = e1 if v1 else e2
                k = int(exp_s) if exp_s else 1
            else:
                k = 0
            if sign == "-":
                coeff = -coeff
            result = result + cls.monomial(ring, k, ring(coeff))
            pos = m.end()
        return result


def poly_arith(op: str, a: Polynomial, b) -> Polynomial:
    """Named entry point for polynomial arithmetic (``add``, ``mul``, ``scale``)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        if isinstance(b, Polynomial):
            raise TypeError("scale expects a ring value")
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_coeff(p: Polynomial, k: int):
    """Coefficient of x^k in p."""
    return p.coeff(k)


class PowerSeries1:
    """Truncated commutative power series c_0 + c_1 y + ... + c_N y^N.

    Binary operations truncate to the smaller of the two orders.
    """

    __slots__ = ("ring", "order", "coeffs")

    def __init__(self, ring: Ring, coeffs: Iterable, order: int | None = None):
        cs = [ring(c) for c in coeffs]
        if order is None:
            order = max(len(cs) - 1, 0)
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = cs[: order + 1]
        cs += [ring.zero] * (order + 1 - len(cs))
        self.ring = ring
        self.order = order
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> PowerSeries1:
        return cls(p.ring, p.coeffs, order)

    def __getitem__(self, k: int):
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> PowerSeries1:
        return PowerSeries1(self.ring, self.coeffs, min(order, self.order))

    def __eq__(self, other):
        if isinstance(other, PowerSeries1):
            return (self.ring, self.order, self.coeffs) == (other.ring, other.order, other.coeffs)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.order, self.coeffs))

    def _pair(self, other):
        if not isinstance(other, PowerSeries1):
            other = PowerSeries1(self.ring, [other], self.order)
        _check_same(self.ring, other.ring)
        return other, min(self.order, other.order)

    def __add__(self, other):
        o, n = self._pair(other)
        return PowerSeries1(self.ring, [self.coeffs[i] + o.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries1(self.ring, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        o, _ = self._pair(other)
        return self + (-o)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries1):
            c = self.ring(other)
            return PowerSeries1(self.ring, [a * c for a in self.coeffs], self.order)
        o, n = self._pair(other)
        cs = []
        for k in range(n + 1):
            acc = self.ring.zero
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * o.coeffs[k - i]
            cs.append(acc)
        return PowerSeries1(self.ring, cs, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = PowerSeries1(self.ring, [1], self.order)
        for _ in range(k):
            result = result * self
        return result

    def compose(self, inner: PowerSeries1) -> PowerSeries1:
        """self(inner(y)); requires inner(0) = 0."""
        _check_same(self.ring, inner.ring)
        if inner.coeffs[0]:
            raise ValueError("composition requires the inner series to vanish at 0")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        # Horner: a_0 + inner*(a_1 + inner*(...))
        acc = PowerSeries1(self.ring, [], n)
        for c in reversed(self.coeffs[: n + 1]):
            acc = acc * inner + c
        return acc

    def exp(self) -> PowerSeries1:
        """exp(self); requires self(0) = 0 and a ring containing Q."""
        self.ring.require_rationals("exp")
        if self.coeffs[0]:
            raise ValueError("exp requires a series vanishing at 0")
        n = self.order
        # E' = a' E, solved coefficientwise
        e = [self.ring.one] + [self.ring.zero] * n
        for k in range(1, n + 1):
            acc = self.ring.zero
            for j in range(1, k + 1):
                acc = acc + j * self.coeffs[j] * e[k - j]
            e[k] = acc / k
        return PowerSeries1(self.ring, e, n)

    def inverse(self) -> PowerSeries1:
        """Multiplicative inverse; the constant term must be invertible."""
        c0 = self.coeffs[0]
        if self.ring.contains_rationals:
            if not c0:
                raise ZeroDivisionError("series with zero constant term is not invertible")
            inv0 = 1 / c0
        elif self.ring.kind == "integers" and c0 in (1, -1):
            inv0 = c0
        else:
            raise CapabilityError(f"cannot invert {c0} in {self.ring}")
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = self.ring.zero
            for i in range(1, k + 1):
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-acc * inv0)
        return PowerSeries1(self.ring, out, self.order)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        body = Polynomial(self.ring, self.coeffs).format("y")
        return f"PowerSeries1({body} + O(y^{self.order + 1}))"


def ps_arith(op: str, a: PowerSeries1, b: PowerSeries1 | None = None) -> PowerSeries1:
    """Named entry point for truncated series arithmetic."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "compose":
        return a.compose(b)
    if op == "exp":
        return a.exp()
    raise ValueError(f"unknown series operation {op!r}")


def exp_series(ring: Ring, order: int) -> PowerSeries1:
    """exp(y) truncated at ``order``."""
    ring.require_rationals("exp")
    return PowerSeries1(ring, [Fraction(1, factorial(k)) for k in range(order + 1)], order)

"""The free module V = R^(N) with basis e_0, e_1, ..., and operators on it.

Vectors are finitely supported maps ``index -> coefficient``. Operators are
given by their basis images (an oracle ``n -> Vector``) and act on arbitrary
vectors by linearity; nothing is ever truncated until someone looks.

    >>> v = basis(0) + QQ("1/2") * basis(5)
    >>> str(raise_(v))
    'e1 + 1/2*e6'
    >>> str(lower(v))
    '1/2*e4'
"""

from __future__ import annotations

import json
import re
import threading
from typing import Callable, Iterable, Mapping

from .ring import QQ, Polynomial, Ring, RingMismatch, parse_scalar

__all__ = [
    "Vector",
    "basis",
    "vec_arith",
    "degree",
    "raise_",
    "lower",
    "mu",
    "mu_prime",
    "apply_poly",
    "to_poly",
    "from_poly",
    "Operator",
    "induction_morphism",
    "named_operator",
    "op_combine",
    "commutator",
]


class Vector:
    """Element of V, stored as ``{n: coefficient}`` without zero entries."""

    __slots__ = ("ring", "_coeffs", "_hash")

    def __init__(self, ring: Ring, coeffs: Mapping[int, object] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        d: dict[int, object] = {}
        for n, c in items:
            if n < 0:
                raise ValueError(f"negative basis index {n}")
            c = ring(c)
            if n in d:
                c = d[n] + c
            if c:
                d[n] = c
            else:
                d.pop(n, None)
        self.ring = ring
        self._coeffs = d
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, d: dict) -> Vector:
        v = object.__new__(cls)
        v.ring = ring
        v._coeffs = d
        v._hash = None
        return v

    @classmethod
    def zero(cls, ring: Ring = QQ) -> Vector:
        return cls._raw(ring, {})

    def coeff(self, n: int):
        return self._coeffs.get(n, self.ring.zero)

    def items(self):
        """(index, coefficient) pairs by increasing index."""
        return sorted(self._coeffs.items())

    @property
    def support(self) -> frozenset:
        return frozenset(self._coeffs)

    @property
    def degree(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, Vector):
            return self.ring == other.ring and self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._coeffs.items())))
        return self._hash

    def _check(self, other: Vector):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        self._check(other)
        d = dict(self._coeffs)
        for n, c in other._coeffs.items():
            s = d[n] + c if n in d else c
            if s:
                d[n] = s
            else:
                d.pop(n, None)
        return Vector._raw(self.ring, d)

    def __neg__(self):
        return Vector._raw(self.ring, {n: -c for n, c in self._coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self + (-other)

    def scale(self, alpha) -> Vector:
        a = self.ring(alpha)
        if not a:
            return Vector.zero(self.ring)
        d = {}
        for n, c in self._coeffs.items():
            p = a * c
            if p:
                d[n] = p
        return Vector._raw(self.ring, d)

    def __mul__(self, alpha):
        if isinstance(alpha, Vector):
            return NotImplemented
        return self.scale(alpha)

    __rmul__ = __mul__

    def shift(self, k: int) -> Vector:
        """U^k applied to self."""
        if k == 0:
            return self
        return Vector._raw(self.ring, {n + k: c for n, c in self._coeffs.items()})

    def unshift(self, k: int) -> Vector:
        """D^k applied to self."""
        if k == 0:
            return self
        return Vector._raw(self.ring, {n - k: c for n, c in self._coeffs.items() if n >= k})

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for n, c in self.items():
            s = str(c)
            neg = s.startswith("-")
            mag = s[1:] if neg else s
            body = f"e{n}" if mag == "1" else f"{mag}*e{n}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Vector({self.ring}, {str(self)!r})"

    def to_json(self) -> dict:
        return {"coeffs": {str(n): str(c) for n, c in self.items()}}

    @classmethod
    def from_json(cls, ring: Ring, data) -> Vector:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(ring, {int(n): ring(str(c)) for n, c in data["coeffs"].items()})

    @classmethod
    def parse(cls, ring: Ring, text: str) -> Vector:
        """Parse the text form ``"3*e0 + 1/2*e5 - e7"`` (``"0"`` is the zero vector)."""
        src = text.strip()
        if src == "0":
            return cls.zero(ring)
        term = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?e(\d+)\s*")
        pos, d = 0, []
        while pos < len(src):
            m = term.match(src, pos)
            if not m or (pos > 0 and not m.group(1)):
                raise ValueError(f"cannot parse vector {text!r} at column {pos + 1}")
            sign, num, idx = m.groups()
            c = parse_scalar(num) if num else 1
            d.append((int(idx), -c if sign == "-" else c))
            pos = m.end()
        if not d:
            raise ValueError(f"empty vector {text!r}")
        return cls(ring, d)


def basis(n: int, ring: Ring = QQ) -> Vector:
    """The basis vector e_n."""
    if n < 0:
        raise ValueError(f"negative basis index {n}")
    return Vector._raw(ring, {n: ring.one})


def vec_arith(op: str, a: Vector, b) -> Vector:
    if op == "add":
        return a + b
    if op == "scale":
        # scale(alpha, v) and scale(v, alpha) are both accepted
        return b.scale(a) if isinstance(b, Vector) else a.scale(b)
    raise ValueError(f"unknown vector operation {op!r}")


def degree(v: Vector) -> int | None:
    """Largest index with nonzero coefficient; ``None`` for the zero vector."""
    return v.degree


def raise_(v: Vector) -> Vector:
    """The raising operator U: e_n -> e_{n+1}."""
    return v.shift(1)


def lower(v: Vector) -> Vector:
    """The lowering operator D: e_0 -> 0, e_{n+1} -> e_n."""
    return v.unshift(1)


def _bilinear(a: Vector, b: Vector, index: Callable[[int, int], int]) -> Vector:
    a._check(b)
    acc: dict[int, object] = {}
    for m, c in a._coeffs.items():
        for n, d in b._coeffs.items():
            k = index(m, n)
            s = acc[k] + c * d if k in acc else c * d
            acc[k] = s
    return Vector._raw(a.ring, {k: c for k, c in acc.items() if c})


def mu(a: Vector, b: Vector) -> Vector:
    """Bilinear extension of e_m (x) e_n -> e_{m+n}."""
    return _bilinear(a, b, lambda m, n: m + n)


def mu_prime(a: Vector, b: Vector) -> Vector:
    """Bilinear extension of e_m (x) e_n -> e_{mn}; e_0 is not absorbing."""
    return _bilinear(a, b, lambda m, n: m * n)


def apply_poly(p: Polynomial, v: Vector) -> Vector:
    """P(U)(v) = sum_k <P|x^k> U^k(v)."""
    if p.ring != v.ring:
        raise RingMismatch(f"{p.ring} vs {v.ring}")
    return mu(from_poly(p), v)


def to_poly(v: Vector) -> Polynomial:
    """The isomorphism V -> R[x], e_n -> x^n."""
    d = v.degree
    if d is None:
        return Polynomial.zero(v.ring)
    return Polynomial(v.ring, [v.coeff(n) for n in range(d + 1)])


def from_poly(p: Polynomial) -> Vector:
    return Vector._raw(p.ring, {n: c for n, c in enumerate(p.coeffs) if c})


class Operator:
    """A linear endomorphism of V, known through its basis images.

    ``image(n)`` is memoized. The cache only ever receives the value the
    deterministic oracle produced, so concurrent fills are harmless;
    ``dict.setdefault`` makes the first stored value the published one.
    """

    def __init__(self, ring: Ring, oracle: Callable[[int], Vector], name: str | None = None):
        self.ring = ring
        self._oracle = oracle
        self._cache: dict[int, Vector] = {}
        self.name = name

    def image(self, n: int) -> Vector:
        try:
            return self._cache[n]
        except KeyError:
            pass
        v = self._oracle(n)
        if not isinstance(v, Vector) or v.ring != self.ring:
            raise TypeError(f"oracle of {self} returned {v!r} for e_{n}")
        return self._cache.setdefault(n, v)

    def __call__(self, v: Vector) -> Vector:
        if v.ring != self.ring:
            raise RingMismatch(f"{v.ring} vs {self.ring}")
        acc = Vector.zero(self.ring)
        for n, c in v.items():
            acc = acc + self.image(n).scale(c)
        return acc

    def images(self, upto: int) -> list[Vector]:
        return [self.image(n) for n in range(upto + 1)]

    def agrees_with(self, other: Operator, upto: int) -> bool:
        return all(self.image(n) == other.image(n) for n in range(upto + 1))

    def __add__(self, other: Operator) -> Operator:
        return op_combine("add", self, other)

    def __sub__(self, other: Operator) -> Operator:
        return op_combine("add", self, op_combine("scale", other, -1))

    def __neg__(self) -> Operator:
        return op_combine("scale", self, -1)

    def __rmul__(self, alpha) -> Operator:
        return op_combine("scale", self, alpha)

    def __matmul__(self, other: Operator) -> Operator:
        return op_combine("compose", self, other)

    def __pow__(self, k: int) -> Operator:
        return op_combine("power", self, k)

    def __repr__(self):
        return f"Operator({self.name or '<anonymous>'}, ring={self.ring})"


def induction_morphism(w: Vector, step: Operator) -> Operator:
    """The unique linear map phi with phi(e_0) = w and phi o U = step o phi.

    Iterates step^n(w) are memoized, so image(n) costs one step application
    once image(n-1) is known.
    """
    if w.ring != step.ring:
        raise RingMismatch(f"{w.ring} vs {step.ring}")
    iterates = [w]
    lock = threading.Lock()

    def oracle(n: int) -> Vector:
        with lock:
            while len(iterates) <= n:
                iterates.append(step(iterates[-1]))
            return iterates[n]

    return Operator(w.ring, oracle, name=f"ind({w}, {step.name})")


def _partial_image(ring: Ring, n: int) -> Vector:
    if n == 0:
        return Vector.zero(ring)
    return Vector._raw(ring, {n - 1: ring(n)}) if ring(n) else Vector.zero(ring)


def named_operator(name: str, ring: Ring = QQ) -> Operator:
    """One of ``U``, ``D``, ``id``, ``partial`` (d/dx) or ``integ`` (formal integral)."""
    if name == "U":
        return Operator(ring, lambda n: Vector._raw(ring, {n + 1: ring.one}), "U")
    if name == "D":
        return Operator(ring, lambda n: lower(basis(n, ring)), "D")
    if name in ("id", "I"):
        return Operator(ring, lambda n: basis(n, ring), "I")
    if name == "partial":
        return Operator(ring, lambda n: _partial_image(ring, n), "partial")
    if name == "integ":
        ring.require_rationals("integ")
        return Operator(ring, lambda n: Vector._raw(ring, {n + 1: ring.inverse_of_integer(n + 1)}), "integ")
    raise ValueError(f"unknown operator name {name!r}")


def op_combine(kind: str, *args) -> Operator:
    """Build ``add(f, g)``, ``scale(f, alpha)``, ``compose(f, g)`` (f o g),
    ``power(f, k)`` or ``commutator(f, g)`` (f o g - g o f)."""
    if kind == "add":
        f, g = args
        _same(f, g)
        return Operator(f.ring, lambda n: f.image(n) + g.image(n), f"({f.name} + {g.name})")
    if kind == "scale":
        f, alpha = args
        a = f.ring(alpha)
        return Operator(f.ring, lambda n: f.image(n).scale(a), f"{a}*{f.name}")
    if kind == "compose":
        f, g = args
        _same(f, g)
        return Operator(f.ring, lambda n: f(g.image(n)), f"{f.name} o {g.name}")
    if kind == "power":
        f, k = args
        if k < 0:
            raise ValueError("negative operator power")
        if k == 0:
            return named_operator("id", f.ring)

        def oracle(n: int) -> Vector:
            v = basis(n, f.ring)
            for _ in range(k):
                v = f(v)
            return v

        return Operator(f.ring, oracle, f"{f.name}^{k}")
    if kind == "commutator":
        f, g = args
        _same(f, g)
        return Operator(
            f.ring, lambda n: f(g.image(n)) - g(f.image(n)), f"[{f.name}, {g.name}]"
        )
    raise ValueError(f"unknown combination {kind!r}")


def commutator(f: Operator, g: Operator) -> Operator:
    return op_combine("commutator", f, g)


def _same(f: Operator, g: Operator) -> None:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring} vs {g.ring}")

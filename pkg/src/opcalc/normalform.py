"""Normal forms sum_n P_n(x) y^n of endomorphisms of V.

A :class:`NormalSeries` is a lazy, memoized coefficient oracle ``n -> P_n``.
It stands for the operator ``sum_n P_n(U) o D^n``; the sum is locally finite
because D^n kills every vector of degree below n, so every coefficient and
every application is computed exactly. Only observation (``coeffs``,
``eq_up_to``) ever talks about an order.

The other direction, :func:`normalize`, peels one coefficient at a time off
an arbitrary :class:`~opcalc.freemodule.Operator`:

    P_0(e)     = phi(e_0)
    P_{n+1}(e) = phi(e_{n+1}) - sum_{k<=n} P_k(U)(e_{n+1-k})
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .freemodule import Operator, Vector, apply_poly, basis, to_poly
from .ring import QQ, Polynomial, Ring, RingMismatch

__all__ = [
    "NormalSeries",
    "series_coeff",
    "apply_series",
    "to_operator",
    "normalize",
    "star",
    "umbral",
    "eq_up_to",
    "first_difference",
    "NormalWord",
    "word_nf",
    "word_apply",
    "GradedFamily",
    "WordSum",
    "FamilyVerdict",
    "NotSummable",
    "family_check",
    "family_to_series",
    "parse_family_pattern",
    "SeriesMatrix",
    "matrix_normalize",
]


class NormalSeries:
    """An element sum_n P_n(x) y^n of R<x,y>>.

    ``coeff_fn(n)`` must be deterministic. If ``bound`` is given, every
    coefficient past it is zero and ``coeff_fn`` is never consulted there.
    """

    def __init__(
        self,
        ring: Ring,
        coeff_fn: Callable[[int], Polynomial],
        bound: int | None = None,
        name: str | None = None,
    ):
        self.ring = ring
        self._fn = coeff_fn
        self.bound = bound
        self.name = name
        self._cache: dict[int, Polynomial] = {}

    @classmethod
    def from_polys(cls, ring: Ring, polys: Iterable, name: str | None = None) -> NormalSeries:
        """Finitely supported series with the given coefficients (Polynomial or coefficient lists)."""
        ps = [p if isinstance(p, Polynomial) else Polynomial(ring, p) for p in polys]
        for p in ps:
            if p.ring != ring:
                raise RingMismatch(f"{p.ring} vs {ring}")
        zero = Polynomial.zero(ring)
        return cls(ring, lambda n: ps[n] if n < len(ps) else zero, bound=len(ps) - 1, name=name)

    @classmethod
    def zero(cls, ring: Ring = QQ) -> NormalSeries:
        return cls.from_polys(ring, [], name="0")

    @classmethod
    def one(cls, ring: Ring = QQ) -> NormalSeries:
        return cls.from_polys(ring, [[1]], name="1")

    @classmethod
    def monomial(cls, ring: Ring, a: int, b: int, c=1) -> NormalSeries:
        """c * x^a y^b."""
        zero = Polynomial.zero(ring)
        return cls.from_polys(
            ring, [zero] * b + [Polynomial.monomial(ring, a, c)], name=f"x^{a} y^{b}"
        )

    @classmethod
    def diagonal(cls, ring: Ring = QQ) -> NormalSeries:
        """sum_n x^n y^n, the two-sided identity of the umbral product."""
        return cls(ring, lambda n: Polynomial.monomial(ring, n), name="sum x^n y^n")

    def coeff(self, n: int) -> Polynomial:
        if n < 0:
            raise IndexError(n)
        if self.bound is not None and n > self.bound:
            return Polynomial.zero(self.ring)
        try:
            return self._cache[n]
        except KeyError:
            pass
        p = self._fn(n)
        if not isinstance(p, Polynomial) or p.ring != self.ring:
            raise TypeError(f"coefficient {n} of {self.name} is {p!r}")
        return self._cache.setdefault(n, p)

    __getitem__ = coeff

    def coeffs(self, order: int) -> list[Polynomial]:
        return [self.coeff(n) for n in range(order + 1)]

    def apply(self, v: Vector) -> Vector:
        return apply_series(self, v)

    def __call__(self, v: Vector) -> Vector:
        return apply_series(self, v)

    def _check(self, other: NormalSeries):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: NormalSeries) -> NormalSeries:
        self._check(other)
        bound = None if self.bound is None or other.bound is None else max(self.bound, other.bound)
        return NormalSeries(
            self.ring, lambda n: self.coeff(n) + other.coeff(n), bound,
            f"({self.name} + {other.name})",
        )

    def __neg__(self) -> NormalSeries:
        return self.scale(-1)

    def __sub__(self, other: NormalSeries) -> NormalSeries:
        return self + (-other)

    def scale(self, alpha) -> NormalSeries:
        a = self.ring(alpha)
        return NormalSeries(self.ring, lambda n: self.coeff(n) * a, self.bound, f"{a}*{self.name}")

    def __rmul__(self, alpha) -> NormalSeries:
        return self.scale(alpha)

    def format(self, order: int) -> str:
        return ", ".join(f"P{n} = {p.format()}" for n, p in enumerate(self.coeffs(order)))

    def __repr__(self):
        return f"NormalSeries({self.name or '<anonymous>'}, ring={self.ring})"

    def to_json(self, order: int) -> dict:
        return {"order": order, "coeffs": [p.to_json() for p in self.coeffs(order)]}

    @classmethod
    def from_json(cls, ring: Ring, data) -> NormalSeries:
        """Read ``{"order": N, "coeffs": [...]}``; coefficients past N are taken as zero."""
        if isinstance(data, str):
            data = json.loads(data)
        polys = [Polynomial.from_json(ring, p) for p in data["coeffs"]]
        order = int(data.get("order", len(polys) - 1))
        if order != len(polys) - 1:
            raise ValueError(f"order {order} does not match {len(polys)} coefficients")
        return cls.from_polys(ring, polys)


def series_coeff(s: NormalSeries, n: int) -> Polynomial:
    return s.coeff(n)


def apply_series(s: NormalSeries, v: Vector) -> Vector:
    """(sum_n P_n(U) o D^n)(v), using coefficients 0..deg(v) only."""
    if v.ring != s.ring:
        raise RingMismatch(f"{v.ring} vs {s.ring}")
    d = v.degree
    acc = Vector.zero(s.ring)
    if d is None:
        return acc
    for n in range(d + 1):
        p = s.coeff(n)
        if p:
            acc = acc + apply_poly(p, v.unshift(n))
    return acc


def to_operator(s: NormalSeries) -> Operator:
    """The operator represented by a normal series."""
    return Operator(s.ring, lambda m: apply_series(s, basis(m, s.ring)), name=s.name)


def normalize(phi: Operator) -> NormalSeries:
    """The normal form of phi.

    Coefficients are produced in order and cached; asking for P_n computes
    P_0..P_n once. apply_series(normalize(phi), e_m) == phi(e_m) for all m.
    """
    ring = phi.ring
    done: list[Polynomial] = []
    lock = threading.Lock()

    def coeff(n: int) -> Polynomial:
        with lock:
            while len(done) <= n:
                m = len(done)
                r = to_poly(phi.image(m))
                for k, p in enumerate(done):
                    # P_k(U)(e_{m-k}) corresponds to x^{m-k} P_k(x)
                    if p:
                        r = r - p.shift(m - k)
                done.append(r)
            return done[n]

    return NormalSeries(ring, coeff, name=f"s({phi.name})")


def star(s: NormalSeries, t: NormalSeries) -> NormalSeries:
    """s * t, the normal form of to_operator(s) o to_operator(t)."""
    s._check(t)
    out = normalize(to_operator(s) @ to_operator(t))
    out.name = f"({s.name} * {t.name})"
    return out


def umbral(s: NormalSeries, t: NormalSeries) -> NormalSeries:
    """s # t: coefficient n is sum_k <P_n | x^k> Q_k(x)."""
    s._check(t)
    ring = s.ring

    def coeff(n: int) -> Polynomial:
        acc = Polynomial.zero(ring)
        for k, c in enumerate(s.coeff(n).coeffs):
            if c:
                acc = acc + t.coeff(k) * c
        return acc

    return NormalSeries(ring, coeff, bound=s.bound, name=f"({s.name} # {t.name})")


def first_difference(s: NormalSeries, t: NormalSeries, order: int) -> int | None:
    """Smallest n <= order with differing coefficients, or None."""
    s._check(t)
    for n in range(order + 1):
        if s.coeff(n) != t.coeff(n):
            return n
    return None


def eq_up_to(s: NormalSeries, t: NormalSeries, order: int) -> bool:
    return first_difference(s, t, order) is None


# ---------------------------------------------------------------------------
# words over {x, y}

_WORD = re.compile(r"[xy]*")


def _check_word(w: str) -> str:
    if not _WORD.fullmatch(w):
        raise ValueError(f"words are over the alphabet {{x, y}}, got {w!r}")
    return w


@dataclass(frozen=True)
class NormalWord:
    """The irreducible word x^a y^b."""

    a: int
    b: int

    @property
    def word(self) -> str:
        return "x" * self.a + "y" * self.b

    def to_json(self) -> dict:
        return {"x": self.a, "y": self.b}

    def series(self, ring: Ring = QQ) -> NormalSeries:
        return NormalSeries.monomial(ring, self.a, self.b)


def word_nf(w: str, strategy: str = "leftmost") -> NormalWord:
    """Rewrite every factor ``yx`` to the empty word until none is left.

    ``strategy`` picks which redex is contracted first (``leftmost`` or
    ``rightmost``); the system is confluent so both give the same result.
    """
    _check_word(w)
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    find = w.find if strategy == "leftmost" else w.rfind
    while True:
        i = find("yx")
        if i < 0:
            break
        w = w[:i] + w[i + 2:]
        find = w.find if strategy == "leftmost" else w.rfind
    a = len(w) - len(w.lstrip("x"))
    rest = w[a:]
    if rest.strip("y"):
        raise AssertionError(f"irreducible word {w!r} is not of the form x^a y^b")
    return NormalWord(a, len(rest))


def word_apply(w: str, v: Vector) -> Vector:
    """Image of v under the monoid morphism x -> U, y -> D.

    The word acts as a composition, so its last letter acts first.
    """
    for letter in reversed(_check_word(w)):
        v = v.shift(1) if letter == "x" else v.unshift(1)
    return v


def word_operator(w: str, ring: Ring = QQ) -> Operator:
    _check_word(w)
    return Operator(ring, lambda n: word_apply(w, basis(n, ring)), name=w or "1")


# ---------------------------------------------------------------------------
# summable families of words


class NotSummable(ValueError):
    """A family member breaks the grading ydeg(nf(w_n)) = n."""

    def __init__(self, index: int, ydeg: int):
        super().__init__(f"family member {index} has y-degree {ydeg} after rewriting")
        self.index = index
        self.ydeg = ydeg


@dataclass(frozen=True)
class FamilyVerdict:
    accepted: bool
    upto: int
    index: int | None = None
    ydeg: int | None = None

    def __str__(self):
        if self.accepted:
            return f"accepted up to n={self.upto}"
        return f"rejected at n={self.index} (ydeg {self.ydeg} != {self.index})"


class GradedFamily:
    """Family n -> (alpha_n, w_n) that must satisfy ydeg(nf(w_n)) = n.

    Such a family is summable: pi(w_n) = U^a D^n annihilates e_m for m < n,
    so only members 0..m contribute to the image of e_m. The grading is
    checked for each member as it is materialized.
    """

    def __init__(self, ring: Ring, generator: Callable[[int], tuple], name: str | None = None):
        self.ring = ring
        self._gen = generator
        self.name = name
        self._cache: dict[int, tuple] = {}

    def member(self, n: int) -> tuple:
        """(alpha_n, w_n, nf(w_n)), unchecked."""
        try:
            return self._cache[n]
        except KeyError:
            pass
        alpha, w = self._gen(n)
        entry = (self.ring(alpha), w, word_nf(w))
        return self._cache.setdefault(n, entry)

    def checked_member(self, n: int) -> tuple:
        entry = self.member(n)
        if entry[2].b != n:
            raise NotSummable(n, entry[2].b)
        return entry


class WordSum:
    """A finite linear combination of words; always summable."""

    def __init__(self, ring: Ring, terms: Iterable[tuple]):
        self.ring = ring
        self.terms = [(ring(a), _check_word(w)) for a, w in terms]

    @classmethod
    def word(cls, w: str, ring: Ring = QQ) -> WordSum:
        return cls(ring, [(1, w)])


def family_check(f: GradedFamily | WordSum, upto: int) -> FamilyVerdict:
    """Check the grading of members 0..upto; report the first violation."""
    if isinstance(f, WordSum):
        return FamilyVerdict(True, upto)
    for n in range(upto + 1):
        nf = f.member(n)[2]
        if nf.b != n:
            return FamilyVerdict(False, upto, n, nf.b)
    return FamilyVerdict(True, upto)


def family_operator(f: GradedFamily | WordSum) -> Operator:
    """The sum of the family alpha_n pi(w_n), as an operator."""
    ring = f.ring
    if isinstance(f, WordSum):

        def oracle(m: int) -> Vector:
            acc = Vector.zero(ring)
            for a, w in f.terms:
                acc = acc + word_apply(w, basis(m, ring)).scale(a)
            return acc

        return Operator(ring, oracle, name="word sum")

    def oracle(m: int) -> Vector:
        acc = Vector.zero(ring)
        e = basis(m, ring)
        for n in range(m + 1):
            alpha, w, _ = f.checked_member(n)
            if alpha:
                acc = acc + word_apply(w, e).scale(alpha)
        return acc

    return Operator(ring, oracle, name=f.name)


def family_to_series(f: GradedFamily | WordSum) -> NormalSeries:
    """Normalization of a summable family: s(sum_n alpha_n pi(w_n)).

    Coefficient n only looks at members 0..n. Raises :class:`NotSummable`
    when a materialized member breaks the grading.
    """
    out = normalize(family_operator(f))
    out.name = f"N({getattr(f, 'name', None) or 'family'})"
    return out


_BLOCK = re.compile(r"\s*([xy])(?:\^(?:\{([^}]*)\}|(\d+|n)))?\s*")
_AFFINE_TERM = re.compile(r"([+-]?)(\d*)\*?(n?)")


def _parse_affine(text: str) -> tuple[int, int]:
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty exponent")
    slope = const = 0
    pos = 0
    while pos < len(src):
        m = _AFFINE_TERM.match(src, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)) or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse exponent {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        k = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            slope += sign * k
        else:
            const += sign * k
        pos = m.end()
    return slope, const


def parse_family_pattern(text: str, ring: Ring = QQ) -> GradedFamily:
    """Parse ``"x^{a*n+b} y^{c*n+d} ..."`` into the family n -> (1, word).

    Exponents may be affine in n (in braces), plain integers or ``n``.
    """
    blocks = []
    pos = 0
    while pos < len(text):
        m = _BLOCK.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse pattern {text!r} at column {pos + 1}")
        letter, braced, plain = m.groups()
        if braced is not None:
            slope, const = _parse_affine(braced)
        elif plain == "n":
            slope, const = 1, 0
        elif plain is not None:
            slope, const = 0, int(plain)
        else:
            slope, const = 0, 1
        blocks.append((letter, slope, const))
        pos = m.end()
    if not blocks:
        raise ValueError("empty pattern")

    def gen(n: int) -> tuple:
        parts = []
        for letter, slope, const in blocks:
            e = slope * n + const
            if e < 0:
                raise ValueError(f"negative exponent {e} at n={n} in {text!r}")
            parts.append(letter * e)
        return 1, "".join(parts)

    return GradedFamily(ring, gen, name=text.strip())


# ---------------------------------------------------------------------------
# endomorphisms of V^k


class SeriesMatrix:
    """k x k matrix of normal series describing an endomorphism of V^k.

    Entry (i, j) is the component from input slot i to output slot j.
    """

    def __init__(self, entries: Sequence[Sequence[NormalSeries]]):
        k = len(entries)
        if any(len(row) != k for row in entries):
            raise ValueError("series matrix must be square")
        rings = {s.ring for row in entries for s in row}
        if len(rings) > 1:
            raise RingMismatch(f"mixed rings {rings}")
        self.k = k
        self.entries = [list(row) for row in entries]

    def __getitem__(self, ij: tuple[int, int]) -> NormalSeries:
        i, j = ij
        return self.entries[i][j]

    def apply(self, vectors: Sequence[Vector]) -> tuple[Vector, ...]:
        if len(vectors) != self.k:
            raise ValueError(f"expected {self.k} components, got {len(vectors)}")
        out = []
        for j in range(self.k):
            acc = Vector.zero(vectors[0].ring)
            for i in range(self.k):
                acc = acc + apply_series(self.entries[i][j], vectors[i])
            out.append(acc)
        return tuple(out)

    def to_json(self, order: int) -> dict:
        # row-major
        return {
            "k": self.k,
            "order": order,
            "entries": [[s.to_json(order)["coeffs"] for s in row] for row in self.entries],
        }


def matrix_normalize(
    k: int, phi: Callable[[int, int], Sequence[Vector]], ring: Ring = QQ
) -> SeriesMatrix:
    """Normal forms of the k*k component maps of an endomorphism of V^k.

    ``phi(i, n)`` is the k-tuple of output components for e_n in input slot i.
    """
    cache: dict[tuple[int, int], tuple] = {}

    def block(i: int, n: int) -> tuple:
        try:
            return cache[i, n]
        except KeyError:
            pass
        out = tuple(phi(i, n))
        if len(out) != k:
            raise ValueError(f"block oracle returned {len(out)} components, expected {k}")
        return cache.setdefault((i, n), out)

    def component(i: int, j: int) -> Operator:
        return Operator(ring, lambda n: block(i, n)[j], name=f"phi[{i},{j}]")

    return SeriesMatrix([[normalize(component(i, j)) for j in range(k)] for i in range(k)])

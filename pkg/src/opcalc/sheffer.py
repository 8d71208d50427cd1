"""Sheffer sequences and the series/operators built from them.

A pair (mu, sigma) of one-variable series with mu(0) != 0, sigma(0) = 0 and
sigma'(0) != 0 generates polynomials p_n through

    sum_n p_n(x) y^n / n! = mu(y) exp(x sigma(y)).

The Sheffer series of such a sequence is sum_n p_n(x)/n! y^n, i.e. the
1/n! stays inside the stored coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .normalform import NormalSeries, umbral
from .ring import QQ, Polynomial, PowerSeries1, Ring

__all__ = [
    "NotSheffer",
    "ShefferPair",
    "ShefferSequence",
    "sheffer_sequence",
    "laguerre",
    "sheffer_series",
    "recognize_sheffer",
    "is_sheffer",
    "GroupCheck",
    "umbral_group_check",
    "umbral_compose",
]


class NotSheffer(ValueError):
    """Raised by :func:`recognize_sheffer`; ``reason`` names the failed check."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class ShefferPair:
    mu: PowerSeries1
    sigma: PowerSeries1

    def __post_init__(self):
        if self.mu.ring != self.sigma.ring:
            raise ValueError("mu and sigma over different rings")
        if not self.mu[0]:
            raise ValueError("mu(0) must be nonzero")
        if self.sigma[0]:
            raise ValueError("sigma(0) must be zero")
        if self.sigma.order < 1 or not self.sigma[1]:
            raise ValueError("sigma'(0) must be nonzero")

    @property
    def ring(self) -> Ring:
        return self.mu.ring

    @property
    def order(self) -> int:
        return min(self.mu.order, self.sigma.order)

    def to_json(self) -> dict:
        n = self.order
        return {"mu": self.mu.truncate(n).to_json(), "sigma": self.sigma.truncate(n).to_json(), "order": n}

    @classmethod
    def from_json(cls, data, ring: Ring = QQ) -> ShefferPair:
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["order"])
        return cls(
            PowerSeries1(ring, [ring(str(c)) for c in data["mu"]], n),
            PowerSeries1(ring, [ring(str(c)) for c in data["sigma"]], n),
        )


class ShefferSequence:
    """Polynomials p_0..p_N with deg p_n = n."""

    def __init__(self, polys: Sequence[Polynomial]):
        polys = list(polys)
        if not polys:
            raise ValueError("empty sequence")
        for n, p in enumerate(polys):
            if p.degree != n:
                raise ValueError(f"p_{n} has degree {p.degree}, expected {n}")
        self.polys = polys
        self.ring = polys[0].ring

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n: int) -> Polynomial:
        return self.polys[n]

    def __len__(self):
        return len(self.polys)

    def __eq__(self, other):
        if isinstance(other, ShefferSequence):
            return self.polys == other.polys
        return NotImplemented

    def to_json(self) -> list:
        return [p.to_json() for p in self.polys]


def sheffer_sequence(pair: ShefferPair, order: int) -> ShefferSequence:
    """p_0..p_order from the generating function mu(y) exp(x sigma(y))."""
    ring = pair.ring
    ring.require_rationals("sheffer_sequence")
    if order > pair.order:
        raise ValueError(f"pair is only known to order {pair.order}")
    mu = pair.mu.truncate(order)
    sigma = pair.sigma.truncate(order)
    # rows[k] = mu * sigma^k / k!, the coefficient of x^k as a series in y
    rows = []
    power = PowerSeries1(ring, [1], order)
    for k in range(order + 1):
        rows.append(mu * power * Fraction(1, factorial(k)))
        power = power * sigma
    polys = []
    for n in range(order + 1):
        nf = factorial(n)
        polys.append(Polynomial(ring, [rows[k][n] * nf for k in range(n + 1)]))
    return ShefferSequence(polys)


def laguerre(n: int, ring: Ring = QQ) -> Polynomial:
    """L_n(x) = sum_k C(n, k) (-1)^k / k! x^k."""
    ring.require_rationals("laguerre")
    return Polynomial(ring, [Fraction((-1) ** k * comb(n, k), factorial(k)) for k in range(n + 1)])


def sheffer_series(seq: ShefferSequence) -> NormalSeries:
    """sum_n p_n(x)/n! y^n, finitely supported up to the sequence's order."""
    seq.ring.require_rationals("sheffer_series")
    return NormalSeries.from_polys(
        seq.ring,
        [p * Fraction(1, factorial(n)) for n, p in enumerate(seq.polys)],
        name="sheffer",
    )


def recognize_sheffer(s: NormalSeries, order: int) -> ShefferPair:
    """Recover (mu, sigma) from a normal series, checking every condition to ``order``.

    Sets p_n = n! * coeff(s, n), then reads mu off the constant terms and
    sigma off the linear terms, and verifies the whole generating identity.
    """
    ring = s.ring
    ring.require_rationals("is_sheffer")
    if order < 1:
        raise ValueError("order must be at least 1 to determine sigma")
    ps = [s.coeff(n) * factorial(n) for n in range(order + 1)]
    for n, p in enumerate(ps):
        if p.degree != n:
            raise NotSheffer(f"degree: p_{n} has degree {p.degree}, expected {n}")

    def row(k: int) -> PowerSeries1:
        return PowerSeries1(ring, [p.coeff(k) * Fraction(1, factorial(n)) for n, p in enumerate(ps)], order)

    mu = row(0)
    if not mu[0]:
        raise NotSheffer("mu(0) = 0")
    sigma = row(1) * mu.inverse()
    if sigma[0]:
        raise NotSheffer("sigma(0) != 0")
    if not sigma[1]:
        raise NotSheffer("sigma'(0) = 0")
    power = PowerSeries1(ring, [1], order)
    for k in range(order + 1):
        expected = mu * power * Fraction(1, factorial(k))
        if row(k) != expected:
            first = next(n for n in range(order + 1) if row(k)[n] != expected[n])
            raise NotSheffer(
                f"generating identity: coefficient of x^{k} y^{first} is "
                f"{row(k)[first]}, expected {expected[first]}"
            )
        power = power * sigma
    return ShefferPair(mu, sigma)


def is_sheffer(s: NormalSeries, order: int) -> bool:
    try:
        recognize_sheffer(s, order)
    except NotSheffer:
        return False
    return True


@dataclass(frozen=True)
class GroupCheck:
    closed: bool
    pair: ShefferPair | None
    reason: str | None
    product: NormalSeries

    def __str__(self):
        if self.closed:
            return f"closed: mu = {self.pair.mu}, sigma = {self.pair.sigma}"
        return f"not closed: {self.reason}"


def umbral_group_check(a: ShefferSequence, b: ShefferSequence, order: int) -> GroupCheck:
    """Run is_sheffer on sheffer_series(a) # sheffer_series(b)."""
    product = umbral(sheffer_series(a), sheffer_series(b))
    try:
        pair = recognize_sheffer(product, order)
    except NotSheffer as exc:
        return GroupCheck(False, None, exc.reason, product)
    return GroupCheck(True, pair, None, product)


def umbral_compose(a: ShefferSequence, b: ShefferSequence) -> ShefferSequence:
    """Classical umbral composition: a_n(b(x)) = sum_k <a_n | x^k> b_k(x).

    This is the # product applied to the unscaled series sum_n p_n(x) y^n.
    """
    n = min(a.order, b.order)
    polys = []
    for p in a.polys[: n + 1]:
        acc = Polynomial.zero(a.ring)
        for k, c in enumerate(p.coeffs):
            if c:
                acc = acc + b[k] * c
        polys.append(acc)
    return ShefferSequence(polys)

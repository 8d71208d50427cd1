"""Seeded random generators shared by the test modules."""

import random
from fractions import Fraction

from opcalc.freemodule import Operator, Vector
from opcalc.normalform import NormalSeries
from opcalc.ring import QQ, Polynomial


def small_value(rng: random.Random, ring):
    if ring == QQ:
        return Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return ring(rng.randint(-6, 6))


def sparse_vector(rng: random.Random, ring, max_index: int = 12, max_terms: int = 4) -> Vector:
    terms = [(rng.randint(0, max_index), small_value(rng, ring)) for _ in range(rng.randint(0, max_terms))]
    return Vector(ring, terms)


def random_polynomial(rng: random.Random, ring, max_degree: int = 4) -> Polynomial:
    return Polynomial(ring, [small_value(rng, ring) for _ in range(rng.randint(0, max_degree + 1))])


def random_operator(rng: random.Random, ring, max_index: int = 12) -> Operator:
    """Basis images e_0..e_max_index drawn at random, zero beyond."""
    table = [sparse_vector(rng, ring, max_index) for _ in range(max_index + 1)]
    return Operator(ring, lambda n: table[n] if n < len(table) else Vector.zero(ring), name="random")


def random_series(rng: random.Random, ring, order: int = 12, max_degree: int = 4) -> NormalSeries:
    return NormalSeries.from_polys(ring, [random_polynomial(rng, ring, max_degree) for _ in range(order + 1)])


def random_word(rng: random.Random, max_len: int = 12) -> str:
    return "".join(rng.choice("xy") for _ in range(rng.randint(0, max_len)))

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from opcalc.ring import (
    QQ,
    ZZ,
    CapabilityError,
    Polynomial,
    PowerSeries1,
    Residue,
    RingError,
    RingMismatch,
    Zmod,
    parse_ring,
    poly_arith,
    poly_coeff,
    ps_arith,
)

RINGS = [ZZ, QQ, Zmod(7), Zmod(12)]

rationals = st.builds(Fraction, st.integers(-200, 200), st.integers(1, 20))


def values(ring):
    if ring == QQ:
        return rationals.map(QQ)
    return st.integers(-500, 500).map(ring)


def polys(ring, max_degree=10):
    return st.lists(values(ring), max_size=max_degree + 1).map(lambda cs: Polynomial(ring, cs))


def naive_mul(a, b):
    # dense schoolbook convolution over dicts, no shared code with Polynomial
    out = {}
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            out[i + j] = out.get(i + j, 0) + x * y
    top = max(out, default=-1)
    return [out.get(k, 0) for k in range(top + 1)]


@pytest.mark.parametrize("ring", RINGS, ids=str)
@given(data=st.data())
def test_ring_axioms(ring, data):
    a, b, c = (data.draw(values(ring)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ring.zero == a and a * ring.one == a
    assert a + (-a) == ring.zero


def test_canonical_representations():
    assert QQ("2/4") == Fraction(1, 2) and QQ("2/4").denominator == 2
    assert QQ("-3") == Fraction(-3) and QQ(" 6 / 3 ") == 2
    assert Zmod(5)(-1) == Residue(4, 5)
    assert Zmod(5)(7).value == 2
    assert ZZ(Fraction(4, 2)) == 2 and type(ZZ(Fraction(4, 2))) is int


def test_coercion_errors():
    with pytest.raises(RingError):
        ZZ(Fraction(1, 2))
    with pytest.raises(RingMismatch):
        Zmod(5)(Residue(1, 7))
    with pytest.raises(RingMismatch):
        Residue(1, 5) + Residue(1, 7)
    with pytest.raises(RingError):
        Zmod(1)


def test_descriptor():
    assert QQ.contains_rationals and not ZZ.contains_rationals and not Zmod(3).contains_rationals
    assert parse_ring("Zmod:9") == Zmod(9) and parse_ring("Q") == QQ and parse_ring("Z") == ZZ
    with pytest.raises(ValueError):
        parse_ring("R")


def x(ring=QQ):
    return Polynomial.monomial(ring, 1)


def test_poly_examples():
    assert poly_arith("add", x() + 1, -1) == x()
    assert poly_arith("mul", x(), x()) == Polynomial(QQ, [0, 0, 1])
    assert poly_arith("mul", 1 - x(), 1 + x()) == Polynomial(QQ, [1, 0, -1])
    assert poly_arith("scale", x() + 1, 3) == Polynomial(QQ, [3, 3])
    assert naive_mul(1 - x(), 1 + x()) == [1, 0, -1]


def test_poly_coeff_examples():
    x2 = Polynomial.monomial(QQ, 2)
    assert poly_coeff(x2, 2) == 1
    assert poly_coeff(x2, 5) == 0
    assert poly_coeff(Polynomial(QQ, [1, -2]), 1) == -2


def test_poly_ring_mismatch():
    with pytest.raises(RingMismatch):
        x(QQ) + x(ZZ)
    with pytest.raises(RingMismatch):
        x(Zmod(3)) * x(Zmod(5))


def test_trimmed():
    p = Polynomial(QQ, [1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1
    assert Polynomial(QQ, [0, 0]).degree is None
    assert (x() - x()).coeffs == ()
    assert Polynomial(Zmod(3), [1, 3]).degree == 0


@pytest.mark.parametrize("ring", RINGS, ids=str)
@given(data=st.data())
def test_mul_matches_naive_convolution(ring, data):
    a, b = data.draw(polys(ring)), data.draw(polys(ring))
    assert (a * b) == Polynomial(ring, naive_mul(a, b))
    for k in range(len(a.coeffs) + len(b.coeffs)):
        expected = sum((a.coeff(i) * b.coeff(k - i) for i in range(k + 1)), ring.zero)
        assert poly_coeff(a * b, k) == expected


@given(polys(QQ, 6), polys(QQ, 6), st.integers(-5, 5))
def test_mul_agrees_with_evaluation(a, b, t):
    assert (a * b)(QQ(t)) == a(QQ(t)) * b(QQ(t))
    assert (a + b)(QQ(t)) == a(QQ(t)) + b(QQ(t))


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("1 - x", [1, -1]),
        ("x^2", [0, 0, 1]),
        ("1/2*x^3 - 2*x + 3", [3, -2, 0, Fraction(1, 2)]),
        ("-x", [0, -1]),
        ("0", []),
        ("x + x", [0, 2]),
    ],
)
def test_poly_parse(text, coeffs):
    assert Polynomial.parse(QQ, text) == Polynomial(QQ, coeffs)


@given(polys(QQ))
def test_poly_text_and_json_round_trip(p):
    assert Polynomial.parse(QQ, p.format()) == p
    assert Polynomial.from_json(QQ, p.to_json()) == p


def test_poly_parse_errors():
    for bad in ("", "x^", "1 +", "2 3", "y"):
        with pytest.raises(ValueError):
            Polynomial.parse(QQ, bad)


def ps(cs, order):
    return PowerSeries1(QQ, cs, order)


def test_exp_of_y():
    assert ps_arith("exp", ps([0, 1], 3)) == ps([1, 1, Fraction(1, 2), Fraction(1, 6)], 3)


def test_compose_example():
    # (y + y^2)^2 = y^2 + 2y^3 + y^4, truncated at order 3
    assert ps_arith("compose", ps([0, 0, 1], 3), ps([0, 1, 1], 3)) == ps([0, 0, 1, 2], 3)


def test_mul_unit():
    sigma = ps([0, 2, Fraction(1, 3), -1], 3)
    assert ps_arith("mul", ps([1], 3), sigma) == sigma


def test_orders_truncate_to_minimum():
    s = ps_arith("add", ps([1, 1, 1], 2), ps([1, 1, 1, 1, 1], 4))
    assert s.order == 2 and s.coeffs == (2, 2, 2)
    with pytest.raises(IndexError):
        s[3]


def test_series_errors():
    with pytest.raises(ValueError):
        ps([1], 2).compose(ps([1, 1], 2))
    with pytest.raises(ValueError):
        ps([1, 1], 2).exp()
    with pytest.raises(CapabilityError):
        PowerSeries1(ZZ, [0, 1], 3).exp()


@given(st.lists(rationals, min_size=1, max_size=7))
def test_exp_inverse(cs):
    a = ps([0] + cs, len(cs))
    assert a.exp() * (-a).exp() == ps([1], len(cs))


@given(st.lists(rationals, min_size=1, max_size=6), st.lists(rationals, min_size=1, max_size=6))
def test_compose_matches_sympy(outer, inner):
    import sympy as sp

    y = sp.symbols("y")
    n = min(len(outer), len(inner))
    f = sum(sp.Rational(c.numerator, c.denominator) * y**k for k, c in enumerate(outer))
    g = sum(sp.Rational(c.numerator, c.denominator) * y ** (k + 1) for k, c in enumerate(inner))
    expected = sp.Poly(sp.expand(f.subs(y, g)), y)
    got = ps(outer, n).compose(ps([0] + inner, n))
    for k in range(n + 1):
        c = expected.coeff_monomial(y**k)
        assert got[k] == Fraction(int(c.p), int(c.q))


@given(st.lists(rationals, min_size=1, max_size=7))
def test_inverse(cs):
    a = ps([1] + cs, len(cs))
    assert a * a.inverse() == ps([1], len(cs))

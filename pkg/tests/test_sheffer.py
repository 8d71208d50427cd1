import json
import random
from fractions import Fraction
from math import comb, factorial

import pytest
import sympy

from opcalc.normalform import NormalSeries, eq_up_to, umbral
from opcalc.ring import QQ, ZZ, CapabilityError, Polynomial, PowerSeries1
from opcalc.sheffer import (
    NotSheffer,
    ShefferPair,
    ShefferSequence,
    is_sheffer,
    laguerre,
    recognize_sheffer,
    sheffer_sequence,
    sheffer_series,
    umbral_compose,
    umbral_group_check,
)


def ps(coeffs, order):
    return PowerSeries1(QQ, coeffs, order)


def geometric(order):
    return ps([1, -1], order).inverse()


def x_pow(n, c=1):
    return Polynomial.monomial(QQ, n, c)


def scaled_laguerre(order):
    return ShefferSequence([laguerre(n) * factorial(n) for n in range(order + 1)])


def test_monomials_from_trivial_pair():
    seq = sheffer_sequence(ShefferPair(ps([1], 8), ps([0, 1], 8)), 8)
    assert seq.polys == [x_pow(n) for n in range(9)]


def test_geometric_mu_with_identity_sigma():
    seq = sheffer_sequence(ShefferPair(geometric(4), ps([0, 1], 4)), 4)
    expected = [Polynomial(QQ, [Fraction(factorial(n), factorial(k)) for k in range(n + 1)]) for n in range(5)]
    assert seq.polys == expected
    assert seq[2] == Polynomial(QQ, [2, 2, 1])


def test_sequence_against_symbolic_expansion():
    x, y = sympy.symbols("x y")
    order = 6
    gen = sympy.exp(x * (y + y**2 / 3)) * (2 - y) / (1 + y**2)
    expansion = sympy.series(gen, y, 0, order + 1).removeO()
    pair = ShefferPair(ps([2, -1], order) * ps([1, 0, 1], order).inverse(), ps([0, 1, Fraction(1, 3)], order))
    seq = sheffer_sequence(pair, order)
    for n in range(order + 1):
        pn = sympy.Poly(sympy.expand(expansion.coeff(y, n) * factorial(n)), x)
        coeffs = [Fraction(str(pn.coeff_monomial(x**k))) for k in range(n + 1)]
        assert seq[n] == Polynomial(QQ, coeffs)


def test_laguerre_small():
    assert laguerre(0) == Polynomial(QQ, [1])
    assert laguerre(1) == Polynomial(QQ, [1, -1])
    assert laguerre(2) == Polynomial(QQ, [1, -2, Fraction(1, 2)])


def test_laguerre_against_sympy():
    x = sympy.Symbol("x")
    for n in range(9):
        ref = sympy.Poly(sympy.laguerre(n, x), x)
        coeffs = [Fraction(str(ref.coeff_monomial(x**k))) for k in range(n + 1)]
        assert laguerre(n) == Polynomial(QQ, coeffs)


def test_laguerre_three_term_recurrence():
    x = Polynomial(QQ, [0, 1])
    for n in range(1, 10):
        lhs = laguerre(n + 1) * (n + 1)
        rhs = laguerre(n) * Polynomial(QQ, [2 * n + 1, -1]) - laguerre(n - 1) * n
        assert lhs == rhs
    assert x.degree == 1


def test_sheffer_series_coefficients():
    seq = sheffer_sequence(ShefferPair(geometric(4), ps([0, 1], 4)), 4)
    s = sheffer_series(seq)
    for n in range(5):
        assert s.coeff(n) * factorial(n) == seq[n]
    assert s.coeff(5).degree is None
    assert s.coeff(2) == Polynomial(QQ, [1, 1, Fraction(1, 2)])


def test_sequence_rejects_bad_degrees():
    with pytest.raises(ValueError):
        ShefferSequence([Polynomial(QQ, [1]), Polynomial(QQ, [1, 0])])
    with pytest.raises(ValueError):
        ShefferSequence([])


def test_pair_validation():
    with pytest.raises(ValueError):
        ShefferPair(ps([0, 1], 4), ps([0, 1], 4))
    with pytest.raises(ValueError):
        ShefferPair(ps([1], 4), ps([1, 1], 4))
    with pytest.raises(ValueError):
        ShefferPair(ps([1], 4), ps([0, 0, 1], 4))


def random_pair(rng, order):
    def val():
        return Fraction(rng.randint(-5, 5), rng.randint(1, 4))

    mu = [Fraction(rng.choice([-3, -1, 1, 2]), rng.randint(1, 3))] + [val() for _ in range(order)]
    sigma = [0, Fraction(rng.choice([-2, -1, 1, 3]), rng.randint(1, 3))] + [val() for _ in range(order - 1)]
    return ShefferPair(ps(mu, order), ps(sigma, order))


def test_recognize_round_trip():
    rng = random.Random(31)
    for _ in range(25):
        order = rng.randint(1, 7)
        pair = random_pair(rng, order)
        found = recognize_sheffer(sheffer_series(sheffer_sequence(pair, order)), order)
        assert found == pair


def test_recognize_reports_degree_failure():
    s = NormalSeries.from_polys(QQ, [Polynomial(QQ, [1]), Polynomial(QQ, [3])])
    with pytest.raises(NotSheffer) as info:
        recognize_sheffer(s, 1)
    assert info.value.reason.startswith("degree: p_1")
    assert not is_sheffer(s, 1)


def test_scaled_laguerre_is_sheffer():
    order = 8
    pair = recognize_sheffer(sheffer_series(scaled_laguerre(order)), order)
    assert pair.mu == geometric(order)
    assert pair.sigma == -(ps([0, 1], order) * geometric(order))


def test_unscaled_laguerre_fails_generating_identity():
    s = sheffer_series(ShefferSequence([laguerre(n) for n in range(9)]))
    with pytest.raises(NotSheffer) as info:
        recognize_sheffer(s, 8)
    assert "x^2 y^2" in info.value.reason
    assert "1/4" in info.value.reason and "expected 1/2" in info.value.reason


def test_classical_composition_is_closed():
    rng = random.Random(32)
    for _ in range(15):
        order = rng.randint(1, 6)
        a = sheffer_sequence(random_pair(rng, order), order)
        b = sheffer_sequence(random_pair(rng, order), order)
        assert is_sheffer(sheffer_series(umbral_compose(a, b)), order)


def test_scaled_laguerre_is_an_involution():
    lag = scaled_laguerre(8)
    assert umbral_compose(lag, lag).polys == [x_pow(n) for n in range(9)]


def test_composition_matches_umbral_product_on_unscaled_series():
    rng = random.Random(33)
    a = sheffer_sequence(random_pair(rng, 5), 5)
    b = sheffer_sequence(random_pair(rng, 5), 5)
    unscaled = lambda seq: NormalSeries.from_polys(QQ, seq.polys)
    assert eq_up_to(umbral(unscaled(a), unscaled(b)), unscaled(umbral_compose(a, b)), 5)


def test_umbral_product_of_scaled_series_leaves_the_group():
    mono = sheffer_sequence(ShefferPair(ps([1], 6), ps([0, 1], 6)), 6)
    check = umbral_group_check(mono, mono, 6)
    assert not check.closed
    assert check.product.coeff(2) == x_pow(2, Fraction(1, 4))
    assert check.reason.startswith("generating identity")
    assert str(check).startswith("not closed")


def test_umbral_identity_sequence():
    identity = ShefferSequence([x_pow(n, factorial(n)) for n in range(7)])
    assert eq_up_to(sheffer_series(identity), NormalSeries.diagonal(QQ), 6)
    a = sheffer_series(sheffer_sequence(random_pair(random.Random(34), 6), 6))
    assert eq_up_to(umbral(a, sheffer_series(identity)), a, 6)
    assert eq_up_to(umbral(sheffer_series(identity), a), a, 6)
    # the unit 1/(1 - xy) is not of the form mu(y) exp(x sigma(y))
    assert not is_sheffer(sheffer_series(identity), 6)


def test_pair_and_sequence_json():
    pair = ShefferPair(geometric(3), ps([0, 1, Fraction(1, 2)], 3))
    data = pair.to_json()
    assert data == {"mu": ["1", "1", "1", "1"], "sigma": ["0", "1", "1/2", "0"], "order": 3}
    assert ShefferPair.from_json(json.dumps(data)) == pair
    seq = sheffer_sequence(ShefferPair(ps([1], 2), ps([0, 1], 2)), 2)
    assert seq.to_json() == [p.to_json() for p in seq.polys]


def test_sequence_beyond_pair_order():
    with pytest.raises(ValueError):
        sheffer_sequence(ShefferPair(ps([1], 2), ps([0, 1], 2)), 3)


def test_integer_ring_lacks_factorial_division():
    with pytest.raises(CapabilityError):
        laguerre(3, ZZ)
    pair = ShefferPair(PowerSeries1(ZZ, [1], 3), PowerSeries1(ZZ, [0, 1], 3))
    with pytest.raises(CapabilityError):
        sheffer_sequence(pair, 3)
    with pytest.raises(CapabilityError):
        recognize_sheffer(NormalSeries.one(ZZ), 2)


def test_binomial_type_identity():
    # mu = 1 gives p_n(x + y) = sum C(n, k) p_k(x) p_{n-k}(y); check at integer points
    pair = ShefferPair(ps([1], 6), ps([0, 1, -1, Fraction(1, 2)], 6))
    seq = sheffer_sequence(pair, 6)
    for n in range(7):
        for a, b in [(1, 2), (-1, 3), (2, 2)]:
            lhs = seq[n](Fraction(a + b))
            rhs = sum(comb(n, k) * seq[k](Fraction(a)) * seq[n - k](Fraction(b)) for k in range(n + 1))
            assert lhs == rhs

import random
from fractions import Fraction

import pytest

from app.core.errors import NegativeK, NotBelow, NotDivisible
from app.services.cartan import Lattice, parse_type
from app.services.symalg import (
    CharPoly,
    FiniteChar,
    FiniteWeight,
    Monomial,
    SpectralParam,
    a_factorization,
    a_monomial,
    affine_degree,
    beta,
    beta_bar,
    height_v,
    is_below,
    is_dominant,
    is_j_dominant,
    is_right_negative,
    kr_highest,
    poly_div_exact,
)
from tests.helpers import z, zs


# ========== SPECTRAL PARAMETERS ==========

def test_negation_is_an_involution():
    s = SpectralParam(1, 0, 3)
    assert -s != s
    assert -(-s) == s
    assert (-s).phase == Fraction(1, 2)


def test_roots_multiply_back():
    s = SpectralParam(1, 0, 3)
    roots = s.roots(3)
    assert len(set(roots)) == 3
    assert all(r ** 3 == s for r in roots)
    assert roots[0] == SpectralParam(Fraction(1, 3), 0, 1)


def test_shift_and_product():
    s = SpectralParam(1, Fraction(1, 2), 2)
    assert s.shift(q=1) == SpectralParam(1, Fraction(1, 2), 3)
    assert s * s == SpectralParam(2, 0, 4)
    assert s / s == SpectralParam(0, 0, 0)


# ========== MONOMIALS ==========

def test_monomial_arithmetic_cancels():
    m = zs((0, 1, 0, 0), (1, 1, 0, 2, -1))
    assert (m * m.inverse()).is_one
    assert m ** 2 == zs((0, 1, 0, 0, 2), (1, 1, 0, 2, -2))
    assert m.exponent(1, SpectralParam(1, 0, 2)) == -1
    assert m.restrict(0) == z(0)
    assert m.without(0) == z(1, q=2, e=-1)


def test_order_is_total_and_multiplicative():
    one, x, y = Monomial.one(), z(0), z(0, q=2)
    assert one < x
    assert x.inverse() < one
    assert sorted([x * y, one, x, y]) == sorted([one, y, x, x * y])
    assert (x < y) == (x * y < y * y)


def test_dominance_predicates():
    m = zs((0, 1, 0, 0), (1, 1, 0, 2, -1))
    assert not is_dominant(m)
    assert is_j_dominant(m, [0])
    assert not is_j_dominant(m, [1])
    assert affine_degree(zs((0, 1, 0, 0, 2), (1, 1, 0, 0, -3))) == 2
    assert affine_degree(Monomial.one()) == 0


# ========== POLYNOMIALS ==========

def test_poly_arithmetic():
    x = CharPoly.of(z(0))
    one = CharPoly.one()
    assert (one + x) * (one - x) == one - x * x
    assert ((one + x) ** 2).dimension == 4
    assert (x - x) == CharPoly.zero()
    assert not CharPoly.zero()


def test_exact_division():
    x = CharPoly.of(z(0))
    one = CharPoly.one()
    quotient = poly_div_exact(one + x ** 3, one + x)
    assert quotient == one - x + x * x


def test_division_remainder_raises():
    x = CharPoly.of(z(0))
    one = CharPoly.one()
    with pytest.raises(NotDivisible):
        poly_div_exact(one + x * x, one + x)


def test_division_by_zero_raises():
    with pytest.raises(NotDivisible):
        poly_div_exact(CharPoly.one(), CharPoly.zero())


def random_poly(rng):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        m = Monomial.one()
        for _ in range(rng.randint(0, 3)):
            m = m * z(rng.randint(0, 2), q=rng.randint(-3, 3), e=rng.choice((-2, -1, 1, 2)))
        terms[m] = terms.get(m, 0) + rng.choice((-3, -2, -1, 1, 2, 3))
    P = CharPoly(terms)
    return P if P else CharPoly.one()


def test_division_undoes_multiplication():
    rng = random.Random(20)
    for _ in range(1000):
        P, D = random_poly(rng), random_poly(rng)
        assert poly_div_exact(P * D, D) == P


# ========== TYPE-DEPENDENT OPERATIONS ==========

def test_special_a_monomial(a2):
    A = a_monomial(a2, 0, SpectralParam())
    assert A == zs((0, 1, 0, 1), (0, 1, 0, -1), (0, 1, Fraction(1, 2), 0, -1))


def test_diag_a_monomial_uses_cube_roots(d4_3):
    s = SpectralParam(1, 0, 3)
    A = a_monomial(d4_3, 2, s)
    expected = zs((2, 1, 0, 6), (2, 1, 0, 0))
    for root in s.roots(3):
        expected = expected * Monomial.var(1, root, -1)
    assert A == expected


def test_free_a_monomial_next_to_fixed_node(d4_3):
    s = SpectralParam()
    A = a_monomial(d4_3, 1, s)
    assert A == zs((1, 1, 0, 1), (1, 1, 0, -1), (2, 3, 0, 0, -1))


def test_kr_highest(a2, d4_3):
    s = SpectralParam()
    assert kr_highest(a2, 0, 2, s) == zs((0, 1, 0, 0), (0, 1, 0, 2))
    assert kr_highest(d4_3, 2, 2, s) == zs((2, 1, 0, 0), (2, 1, 0, 6))
    assert kr_highest(a2, 0, 0, s).is_one
    with pytest.raises(NegativeK):
        kr_highest(a2, 0, -1, s)


def test_right_negative(a2):
    assert is_right_negative(a2, zs((0, 1, 0, 0), (0, 1, 0, 2, -1)))
    assert not is_right_negative(a2, z(0))
    assert not is_right_negative(a2, Monomial.one())


def test_partial_order(a2):
    s = SpectralParam()
    top = z(0)
    lower = top * a_monomial(a2, 0, s.shift(q=1)).inverse()
    assert is_below(a2, lower, top)
    assert not is_below(a2, top, lower)
    assert height_v(a2, lower, top) == 1
    assert a_factorization(a2, top, top) == []
    with pytest.raises(NotBelow):
        height_v(a2, top, lower)


# ========== RESTRICTION ==========

def test_restriction_weights(a4):
    m = zs((0, 1, 0, 0), (1, 1, 0, 2, -1))
    assert beta(a4, m) == FiniteWeight(Lattice.TILDE, (-1, 1))
    assert beta_bar(a4, m) == FiniteWeight(Lattice.BAR, (2, -1))


def test_finite_char_arithmetic():
    x = FiniteChar.of(FiniteWeight(Lattice.BAR, (1,)))
    y = FiniteChar.of(FiniteWeight(Lattice.BAR, (-1,)))
    one = FiniteChar.one(Lattice.BAR, 1)
    assert (x + y) * (x + y) == x * x + one.scale(2) + y * y
    assert x.shift((-1,)) == one
    assert (x + y).dimension == 2

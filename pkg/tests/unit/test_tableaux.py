from fractions import Fraction

import pytest

from app.core.errors import UnknownLetter, UnsupportedNode
from app.services.cartan import parse_type
from app.services.qchar_engine import Engine, fm_expand, kr_poly
from app.services.symalg import Monomial, SpectralParam, affine_degree
from app.services.tableaux import (
    box,
    d_box,
    d_leq,
    d_rank,
    enumerate_tableaux,
    letter_text,
    minuscule_char,
    spin_column,
    supports,
    tableau_monomial,
    tableaux_char,
    theta_equivalence_check,
)
from tests.helpers import z, zs

A = SpectralParam()
HALF = Fraction(1, 2)


# ========== BOXES ==========

def test_a2_boxes(a2):
    assert box(a2, 1) == z(0)
    assert box(a2, 2) == zs((0, 1, 0, 2, -1), (0, 1, HALF, 1))
    assert box(a2, 3) == z(0, phase=HALF, q=3, e=-1)


def test_a3_barred_side_box(a3):
    assert box(a3, 4) == z(1, phase=HALF, q=4, e=-1)


def test_d4_3_boxes(d4_3):
    assert box(d4_3, 2) == zs((1, 1, 0, 2, -1), (2, 3, 0, 3))
    assert box(d4_3, 1) * box(d4_3, -1) == zs((1, 1, 0, 0), (1, 1, 0, 6, -1))


def test_unknown_letters(a2):
    with pytest.raises(UnknownLetter):
        box(a2, 4)
    with pytest.raises(UnknownLetter):
        d_box(4, 0, A)
    with pytest.raises(UnknownLetter):
        d_box(4, -5, A)


def test_d_order():
    assert d_rank(4, 4) == d_rank(4, -4) == 4
    assert not d_leq(4, 4, -4)
    assert not d_leq(4, -4, 4)
    assert d_leq(4, 3, -3)
    assert not d_leq(4, -1, 1)
    assert letter_text(-3) == "3̄"


# ========== ENUMERATION ==========

@pytest.mark.parametrize("label,node,k,count", [
    ("A2-2", 0, 1, 3),
    ("A2-2", 0, 3, 10),
    ("A4-2", 1, 1, 5),
    ("A4-2", 0, 1, 10),
    ("A3-2", 2, 1, 6),
    ("D4-3", 1, 1, 8),
    ("D4-3", 1, 2, 35),
    ("D4-3", 2, 1, 29),
    ("D3-2", 2, 1, 4),
    ("D5-2", 4, 1, 16),
])
def test_tableau_counts(label, node, k, count):
    assert len(list(enumerate_tableaux(parse_type(label), node, k))) == count


def test_tableaux_are_distinct(d4_3):
    tableaux = list(enumerate_tableaux(d4_3, 2, 2))
    assert len(set(tableaux)) == len(tableaux)


def test_first_tableau(a2):
    first = next(enumerate_tableaux(a2, 0, 2))
    assert first.rows == ((1, 1),)
    assert str(first) == "1 1"
    assert tableau_monomial(a2, first) == zs((0, 1, 0, 0), (0, 1, 0, 2))


@pytest.mark.parametrize("label,node,k", [("A2-2", 0, 3), ("A4-2", 0, 2), ("A4-2", 1, 2)])
def test_monomials_are_distinct(label, node, k):
    t = parse_type(label)
    P = tableaux_char(t, node, k)
    assert len(P) == len(list(enumerate_tableaux(t, node, k)))


@pytest.mark.parametrize("label,node,dim", [
    ("untwisted:A2", 1, 3),
    ("untwisted:A3", 2, 6),
    ("untwisted:D4", 3, 8),
    ("untwisted:D5", 5, 16),
    ("untwisted:E6", 1, 27),
])
def test_minuscule_char_dimensions(label, node, dim):
    P = minuscule_char(parse_type(label), node, A)
    assert P.dimension == dim
    assert len(P) == dim


def test_minuscule_char_matches_fm():
    t = parse_type("untwisted:A2")
    assert minuscule_char(t, 1, A) == fm_expand(t, Monomial.var(1, A))


def test_spin_column_monomials():
    assert spin_column(4, (1, 2, 3, 4), A) == z(4)
    assert spin_column(4, (1, 2, -4, -3), A) == zs((2, 1, 0, 1), (4, 1, 0, 2, -1))
    assert spin_column(4, (2, 4, -3, -1), A) == zs((1, 1, 0, 4, -1), (2, 1, 0, 3), (3, 1, 0, 4, -1))
    assert spin_column(4, (-4, -3, -2, -1), A) == z(4, q=6, e=-1)
    assert spin_column(4, (1, 2, 4, -3), A) == zs((2, 1, 0, 1), (3, 1, 0, 2, -1))


def test_spin_column_rejects_non_columns():
    with pytest.raises(UnknownLetter):
        spin_column(4, (1, 2, 3), A)
    with pytest.raises(UnknownLetter):
        spin_column(4, (1, 1, 3, 4), A)


def test_spin_columns_are_increasing():
    t = parse_type("D5-2")
    for T in enumerate_tableaux(t, 4, 1):
        column = T.rows[0]
        assert all(d_rank(5, a) < d_rank(5, b) for a, b in zip(column, column[1:]))
        assert sum(1 for x in column if x < 0) % 2 == 1


@pytest.mark.parametrize("label,node", [
    ("untwisted:D4", 3),
    ("untwisted:D4", 4),
    ("untwisted:D5", 4),
    ("untwisted:D5", 5),
    ("untwisted:D6", 6),
])
def test_spin_tableaux_match_minuscule_walk(label, node):
    t = parse_type(label)
    assert tableaux_char(t, node, 1) == minuscule_char(t, node, A)


def test_unsupported(e6):
    assert not supports(e6, 1, 1)
    assert not supports(parse_type("untwisted:D5"), 2, 2)
    assert supports(parse_type("D4-3"), 1, 5)
    with pytest.raises(UnsupportedNode):
        list(enumerate_tableaux(e6, 1, 1))


# ========== AGREEMENT WITH THE ENGINES ==========

@pytest.mark.parametrize("label,node,k", [
    ("A2-2", 0, 1),
    ("A2-2", 0, 2),
    ("A2-2", 0, 3),
    ("A4-2", 0, 2),
    ("A4-2", 1, 2),
    ("A3-2", 1, 2),
    ("A3-2", 2, 1),
    ("D4-3", 1, 2),
    ("D4-3", 2, 1),
    ("D3-2", 2, 1),
    ("D4-2", 1, 1),
    ("D4-2", 2, 1),
    ("D4-2", 3, 1),
    ("D5-2", 4, 1),
    ("untwisted:D4", 2, 1),
])
def test_tableaux_match_folding(label, node, k):
    t = parse_type(label)
    assert tableaux_char(t, node, k) == kr_poly(t, node, k, A, Engine.FOLD)


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3])
def test_d4_3_adjoint_node(d4_3, k):
    assert tableaux_char(d4_3, 2, k) == kr_poly(d4_3, 2, k, A, Engine.TSYS)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_d4_3_vector_node_is_thin(d4_3, k):
    assert affine_degree(tableaux_char(d4_3, 1, k)) == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_theta_rules_agree(k):
    assert theta_equivalence_check(k)


@pytest.mark.slow
@pytest.mark.parametrize("k", [4, 5])
def test_theta_rules_agree_longer(k):
    assert theta_equivalence_check(k)

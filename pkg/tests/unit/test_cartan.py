from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import IllegalRank, UnknownNode, UnknownType
from app.services.cartan import (
    Family,
    Lattice,
    NodeKind,
    bar_factor,
    build_type,
    finite_type,
    height_vector,
    inverse_cartan,
    parse_type,
    supported_types,
    tilde_type,
    untwisted_parent,
    weight_projection,
)


def test_a2_has_one_special_node(a2):
    assert a2.family == Family.A2N
    assert a2.nodes == (0,)
    assert a2.M == 2
    assert a2.kind[0] == NodeKind.SPECIAL
    assert a2.d[0] == Fraction(1, 2)


def test_a4_nodes(a4):
    assert a4.nodes == (0, 1)
    assert a4.kind == {0: NodeKind.SPECIAL, 1: NodeKind.FREE}
    assert a4.adj == {0: (1,), 1: (0,)}


def test_d4_3_nodes(d4_3):
    assert d4_3.M == 3
    assert d4_3.kind == {1: NodeKind.FREE, 2: NodeKind.DIAG}
    assert d4_3.d[2] == 3
    assert d4_3.fixed == {1: False, 2: True}


def test_e6_nodes(e6):
    assert e6.nodes == (1, 2, 3, 4)
    assert [e6.kind[i] for i in e6.nodes] == [NodeKind.FREE, NodeKind.FREE, NodeKind.DIAG, NodeKind.DIAG]


def test_untwisted_parent_of_a4(a4):
    parent, rep = untwisted_parent(a4)
    assert parent.name == "untwisted:A4"
    assert rep == {0: 2, 1: 1}


def test_untwisted_parent_of_untwisted_is_identity():
    t = parse_type("untwisted:D4")
    parent, rep = untwisted_parent(t)
    assert parent is t
    assert rep == {1: 1, 2: 2, 3: 3, 4: 4}


@pytest.mark.parametrize("label,family,rank", [
    ("A2-2", Family.A2N, 1),
    ("A6-2", Family.A2N, 3),
    ("A2n-2:4", Family.A2N, 4),
    ("A3-2", Family.A2N_1, 2),
    ("A2n-1-2:3", Family.A2N_1, 3),
    ("D4-2", Family.DN_1, 3),
    ("Dn1-2:2", Family.DN_1, 2),
    ("E6-2", Family.E6, 4),
    ("D4-3", Family.D4_3, 2),
])
def test_parse_type(label, family, rank):
    t = parse_type(label)
    assert t.family == family
    assert t.rank == rank


def test_parse_type_round_trips_names():
    for t in supported_types(4):
        assert parse_type(t.name) is t


@pytest.mark.parametrize("label", ["X9-2", "A2-3", "untwisted:B3", "A2n-2:x", "E7-2"])
def test_unknown_types(label):
    with pytest.raises(UnknownType):
        parse_type(label)


@pytest.mark.parametrize("label", ["A2n-2:0", "A2n-1-2:1", "Dn1-2:1", "untwisted:D2", "untwisted:E7"])
def test_illegal_ranks(label):
    with pytest.raises(IllegalRank):
        parse_type(label)


def test_unknown_node(a2):
    with pytest.raises(UnknownNode):
        a2.check_node(1)


def test_build_type_is_cached():
    assert build_type(Family.A2N, 2) is build_type(Family.A2N, 2)


@pytest.mark.parametrize("label,name", [
    ("A2-2", "A_1"),
    ("A4-2", "B_2"),
    ("A3-2", "C_2"),
    ("D4-2", "B_3"),
    ("E6-2", "F_4"),
    ("D4-3", "G_2"),
])
def test_finite_names(label, name):
    assert finite_type(parse_type(label)).name == name


def test_g2_cartan_has_short_node_one(d4_3):
    fc = finite_type(d4_3)
    assert np.array_equal(fc.matrix, np.array([[2, -3], [-1, 2]]))
    assert fc.lattice == Lattice.BAR


def test_tilde_side_of_a4(a4):
    fc = tilde_type(a4)
    assert fc.name == "C_2"
    assert fc.nodes == (1, 2)
    assert np.array_equal(fc.matrix, np.array([[2, -2], [-1, 2]]))


def test_a2n_projections(a4):
    assert bar_factor(a4, 0) == 2
    assert bar_factor(a4, 1) == 1
    assert weight_projection(a4, Lattice.TILDE) == {0: (1, 1), 1: (0, 1)}
    assert weight_projection(a4, Lattice.BAR) == {0: (0, 2), 1: (1, 1)}


def test_supported_types():
    names = [t.name for t in supported_types(3)]
    assert names == ["A2-2", "A4-2", "A6-2", "A3-2", "A5-2", "D3-2", "D4-2", "E6-2", "D4-3"]


def test_inverse_cartan_of_a2():
    fc = finite_type(parse_type("untwisted:A2"))
    third = Fraction(1, 3)
    assert inverse_cartan(fc) == ((2 * third, third), (third, 2 * third))
    assert height_vector(fc) == (Fraction(1), Fraction(1))


def test_height_vector_of_a1(a2):
    assert height_vector(tilde_type(a2)) == (Fraction(1, 2),)

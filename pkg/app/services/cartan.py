"""
Registry of twisted affine type data and their simply-laced parents
"""
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy

from app.core.errors import IllegalRank, UnknownNode, UnknownType


class Family(str, Enum):
    A2N = "A2n^(2)"
    A2N_1 = "A2n-1^(2)"
    DN_1 = "Dn+1^(2)"
    E6 = "E6^(2)"
    D4_3 = "D4^(3)"
    UNTWISTED = "untwisted"


class NodeKind(str, Enum):
    DIAG = "DIAG"
    FREE = "FREE"
    SPECIAL = "SPECIAL"


class Lattice(str, Enum):
    TILDE = "tilde"
    BAR = "bar"


@dataclass(frozen=True, eq=False)
class FiniteCartan:
    """Cartan data of a finite type, alpha_j = sum_i matrix[i, j] Lambda_i"""
    name: str
    nodes: Tuple[int, ...]
    matrix: np.ndarray
    lattice: Lattice = Lattice.BAR

    def index(self, node: int) -> int:
        return self.nodes.index(node)

    @property
    def rank(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class ParentData:
    """Simply-laced parent with sigma, orbit representatives and the node fold map"""
    spec: "TypeSpec"
    sigma: Dict[int, int]
    rep: Dict[int, int]
    fold: Dict[int, Tuple[int, int]]  # parent node -> (twisted node, power of sigma)


@dataclass(frozen=True, eq=False)
class TypeSpec:
    family: Family
    rank: int
    M: int
    nodes: Tuple[int, ...]
    d: Dict[int, Fraction]
    eps: Dict[int, int]
    kind: Dict[int, NodeKind]
    adj: Dict[int, Tuple[int, ...]]
    fixed: Dict[int, bool]
    letter: str = ""
    cartan: Optional[np.ndarray] = None  # untwisted only
    parent: Optional[ParentData] = field(default=None, repr=False)

    @property
    def is_twisted(self) -> bool:
        return self.M > 1

    @property
    def is_a2n(self) -> bool:
        return self.family == Family.A2N

    @property
    def name(self) -> str:
        """CLI label of the type"""
        n = self.rank
        if self.family == Family.A2N:
            return f"A{2 * n}-2"
        if self.family == Family.A2N_1:
            return f"A{2 * n - 1}-2"
        if self.family == Family.DN_1:
            return f"D{n + 1}-2"
        if self.family == Family.E6:
            return "E6-2"
        if self.family == Family.D4_3:
            return "D4-3"
        return f"untwisted:{self.letter}{n}"

    def check_node(self, i: int) -> int:
        if i not in self.nodes:
            raise UnknownNode(f"node {i} is not a node of {self.name}")
        return i

    def step(self, i: int) -> Fraction:
        """q-exponent of rho_i: d_i, or 1 on A2n^(2)"""
        if self.is_a2n or not self.is_twisted:
            return Fraction(1)
        return self.d[i]

    def __repr__(self) -> str:
        return f"TypeSpec({self.name})"


# ========== SIMPLY-LACED CARTAN MATRICES ==========

def ade_edges(letter: str, n: int) -> List[Tuple[int, int]]:
    """Edges of the A_n, D_n or E_6 Dynkin diagram (Bourbaki labels)"""
    if letter == "A":
        return [(i, i + 1) for i in range(1, n)]
    if letter == "D":
        edges = [(i, i + 1) for i in range(1, n - 2)]
        return edges + [(n - 2, n - 1), (n - 2, n)]
    if letter == "E":
        return [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]
    raise UnknownType(f"unknown simply-laced letter {letter}")


def ade_cartan(letter: str, n: int) -> np.ndarray:
    matrix = 2 * np.eye(n, dtype=np.int64)
    for i, j in ade_edges(letter, n):
        matrix[i - 1, j - 1] = -1
        matrix[j - 1, i - 1] = -1
    return matrix


def _untwisted(letter: str, n: int) -> TypeSpec:
    if letter == "A" and n < 1 or letter == "D" and n < 3 or letter == "E" and n != 6:
        raise IllegalRank(f"{letter}{n} is not a supported untwisted type")
    if letter not in "ADE":
        raise UnknownType(f"unknown simply-laced letter {letter}")
    matrix = ade_cartan(letter, n)
    nodes = tuple(range(1, n + 1))
    adj = {
        i: tuple(j for j in nodes if j != i and matrix[i - 1, j - 1] != 0)
        for i in nodes
    }
    return TypeSpec(
        family=Family.UNTWISTED,
        rank=n,
        M=1,
        nodes=nodes,
        d={i: Fraction(1) for i in nodes},
        eps={i: 1 for i in nodes},
        kind={i: NodeKind.FREE for i in nodes},
        adj=adj,
        fixed={i: True for i in nodes},
        letter=letter,
        cartan=matrix,
    )


# ========== TWISTED TYPES ==========

def _fold_map(family: Family, n: int) -> Tuple[str, int, int, Dict[int, Tuple[int, int]]]:
    """(parent letter, parent rank, M, parent node -> (twisted node, p))"""
    if family == Family.A2N:
        fold = {x: (n - x, 0) for x in range(1, n + 1)}
        fold.update({x: (x - n - 1, 1) for x in range(n + 1, 2 * n + 1)})
        return "A", 2 * n, 2, fold
    if family == Family.A2N_1:
        fold = {x: (x, 0) for x in range(1, n + 1)}
        fold.update({x: (2 * n - x, 1) for x in range(n + 1, 2 * n)})
        return "A", 2 * n - 1, 2, fold
    if family == Family.DN_1:
        fold = {x: (x, 0) for x in range(1, n + 1)}
        fold[n + 1] = (n, 1)
        return "D", n + 1, 2, fold
    if family == Family.E6:
        fold = {1: (1, 0), 6: (1, 1), 3: (2, 0), 5: (2, 1), 4: (3, 0), 2: (4, 0)}
        return "E", 6, 2, fold
    fold = {1: (1, 0), 4: (1, 1), 3: (1, 2), 2: (2, 0)}
    return "D", 4, 3, fold


_MIN_RANK = {Family.A2N: 1, Family.A2N_1: 2, Family.DN_1: 2}


def _twisted(family: Family, n: int) -> TypeSpec:
    if family in _MIN_RANK and n < _MIN_RANK[family]:
        raise IllegalRank(f"{family.value} needs n >= {_MIN_RANK[family]}, got {n}")
    if family == Family.E6:
        n = 4
    elif family == Family.D4_3:
        n = 2
    letter, N, M, fold = _fold_map(family, n)
    parent = _untwisted(letter, N)
    matrix = parent.cartan

    orbits: Dict[int, List[int]] = {}
    for x in sorted(fold, key=lambda y: fold[y][1]):
        orbits.setdefault(fold[x][0], []).append(x)
    rep = {i: orbit[0] for i, orbit in orbits.items()}
    sigma = {}
    for x, (i, p) in fold.items():
        size = len(orbits[i])
        sigma[x] = orbits[i][(p + 1) % size]

    nodes = tuple(sorted(orbits))
    kind, d, eps, fixed = {}, {}, {}, {}
    for i in nodes:
        orbit = orbits[i]
        if len(orbit) == 1:
            kind[i], d[i], eps[i], fixed[i] = NodeKind.DIAG, Fraction(M), M, True
        elif matrix[orbit[0] - 1, orbit[1] - 1] == -1:
            kind[i], d[i], eps[i], fixed[i] = NodeKind.SPECIAL, Fraction(1, 2), 1, False
        else:
            kind[i], d[i], eps[i], fixed[i] = NodeKind.FREE, Fraction(1), 1, False

    adj = {}
    for i in nodes:
        adj[i] = tuple(
            j for j in nodes
            if j != i and any(matrix[x - 1, y - 1] == -1 for x in orbits[i] for y in orbits[j])
        )

    spec = TypeSpec(
        family=family,
        rank=n,
        M=M,
        nodes=nodes,
        d=d,
        eps=eps,
        kind=kind,
        adj=adj,
        fixed=fixed,
        parent=ParentData(spec=parent, sigma=sigma, rep=rep, fold=fold),
    )
    return spec


@lru_cache(maxsize=None)
def build_type(family: Family, n: int = 0, letter: str = "") -> TypeSpec:
    """
    Build the type data of a family

    Args:
        family: twisted family or UNTWISTED
        n: rank parameter (ignored for E6^(2) and D4^(3))
        letter: A, D or E for untwisted types

    Returns:
        Immutable TypeSpec
    """
    family = Family(family)
    if family == Family.UNTWISTED:
        return _untwisted(letter, n)
    return _twisted(family, n)


_SHORT = re.compile(r"^([ADE])(\d+)-([23])$")


def parse_type(label: str) -> TypeSpec:
    """Resolve a CLI type selector (A2-2, A2n-2:<n>, Dn1-2:<n>, untwisted:D4, A4-2, ...)"""
    label = label.strip()
    if label.startswith("untwisted:"):
        body = label.split(":", 1)[1]
        if not re.match(r"^[ADE]\d+$", body):
            raise UnknownType(f"bad untwisted type {label}")
        return build_type(Family.UNTWISTED, int(body[1:]), body[0])
    for prefix, family in (("A2n-1-2:", Family.A2N_1), ("A2n-2:", Family.A2N), ("Dn1-2:", Family.DN_1)):
        if label.startswith(prefix):
            rank = label[len(prefix):]
            if not rank.isdigit():
                raise UnknownType(f"bad rank in {label}")
            return build_type(family, int(rank))
    if label == "E6-2":
        return build_type(Family.E6)
    if label == "D4-3":
        return build_type(Family.D4_3)
    match = _SHORT.match(label)
    if match and match.group(3) == "2":
        letter, N = match.group(1), int(match.group(2))
        if letter == "A":
            if N % 2 == 0:
                return build_type(Family.A2N, N // 2)
            return build_type(Family.A2N_1, (N + 1) // 2)
        if letter == "D":
            return build_type(Family.DN_1, N - 1)
    raise UnknownType(f"unknown type {label}")


def untwisted_parent(t: TypeSpec) -> Tuple[TypeSpec, Dict[int, int]]:
    """Parent type and representative map I_sigma -> I (identity for untwisted types)"""
    if not t.is_twisted:
        return t, {i: i for i in t.nodes}
    return t.parent.spec, dict(t.parent.rep)


# ========== FINITE TYPES ==========

def _finite_name(t: TypeSpec) -> str:
    n = t.rank
    if t.family == Family.A2N:
        return "A_1" if n == 1 else f"B_{n}"
    if t.family == Family.A2N_1:
        return f"C_{n}"
    if t.family == Family.DN_1:
        return f"B_{n}"
    if t.family == Family.E6:
        return "F_4"
    if t.family == Family.D4_3:
        return "G_2"
    return f"{t.letter}_{n}"


def bar_factor(t: TypeSpec, i: int) -> int:
    """Exponent of z_i in the BAR image of Z_i (z_0 squared on A2n^(2))"""
    return 2 if t.is_a2n and i == 0 else 1


@lru_cache(maxsize=None)
def finite_type(t: TypeSpec) -> FiniteCartan:
    """
    Cartan data of g^sigma in BAR coordinates

    Column i holds the BAR image of A_i: diagonal 2, and for a neighbor j the
    number of node-j variables removed by A_i (M on moved neighbors of a
    sigma-fixed node), times the BAR factor of j.
    """
    if not t.is_twisted:
        return FiniteCartan(_finite_name(t), t.nodes, t.cartan.copy(), Lattice.BAR)
    size = len(t.nodes)
    matrix = 2 * np.eye(size, dtype=np.int64)
    for a, i in enumerate(t.nodes):
        for j in t.adj[i]:
            b = t.nodes.index(j)
            count = t.M if t.kind[i] == NodeKind.DIAG and not t.fixed[j] else 1
            matrix[b, a] = -count * bar_factor(t, j)
    return FiniteCartan(_finite_name(t), t.nodes, matrix, Lattice.BAR)


@lru_cache(maxsize=None)
def tilde_type(t: TypeSpec) -> FiniteCartan:
    """Cartan data of the TILDE target (C_n over z_1..z_n for A2n^(2), BAR data otherwise)"""
    if not t.is_a2n:
        base = finite_type(t)
        return FiniteCartan(base.name, base.nodes, base.matrix, Lattice.TILDE)
    n = t.rank
    matrix = 2 * np.eye(n, dtype=np.int64)
    for j in range(n - 1):
        matrix[j, j + 1] = -1
        matrix[j + 1, j] = -1
    if n >= 2:
        matrix[n - 2, n - 1] = -2
    name = "A_1" if n == 1 else f"C_{n}"
    return FiniteCartan(name, tuple(range(1, n + 1)), matrix, Lattice.TILDE)


def lattice_type(t: TypeSpec, side: Lattice) -> FiniteCartan:
    return tilde_type(t) if Lattice(side) == Lattice.TILDE else finite_type(t)


def weight_projection(t: TypeSpec, side: Lattice) -> Dict[int, Tuple[int, int]]:
    """node -> (coordinate position, multiplicity) of the restriction map beta / beta-bar"""
    target = lattice_type(t, side)
    if t.is_a2n and Lattice(side) == Lattice.TILDE:
        return {i: (target.index(t.rank - i), 1) for i in t.nodes}
    return {i: (target.index(i), bar_factor(t, i)) for i in t.nodes}


def parent_weight_projection(t: TypeSpec, side: Lattice) -> Dict[int, Tuple[int, int]]:
    """parent node -> (coordinate position, multiplicity) of pi / pi-bar on weights"""
    projection = weight_projection(t, side)
    if not t.is_twisted:
        return projection
    return {x: projection[i] for x, (i, _) in t.parent.fold.items()}


def supported_types(max_rank: int = 6) -> List[TypeSpec]:
    """Every family/rank pair up to max_rank"""
    types = [build_type(Family.A2N, n) for n in range(1, max_rank + 1)]
    types += [build_type(Family.A2N_1, n) for n in range(2, max_rank + 1)]
    types += [build_type(Family.DN_1, n) for n in range(2, max_rank + 1)]
    types += [build_type(Family.E6), build_type(Family.D4_3)]
    return types


@lru_cache(maxsize=None)
def inverse_cartan(fc: FiniteCartan) -> Tuple[Tuple[Fraction, ...], ...]:
    """Exact inverse of the finite Cartan matrix (rows/columns in fc.nodes order)"""
    inverse = sympy.Matrix(fc.matrix.tolist()).inv()
    return tuple(
        tuple(Fraction(str(entry)) for entry in inverse.row(r))
        for r in range(fc.rank)
    )


@lru_cache(maxsize=None)
def height_vector(fc: FiniteCartan) -> Tuple[Fraction, ...]:
    """h with height(w) = sum_i h_i w_i, i.e. the pairing with the sum of fundamental coweights"""
    inverse = inverse_cartan(fc)
    return tuple(sum((inverse[j][i] for j in range(fc.rank)), Fraction(0)) for i in range(fc.rank))

"""
Finite-type characters of the fixed-point algebra: root data, Freudenthal
multiplicities, branching of restricted q-characters and the Q-system
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.console import progress
from app.core.errors import NegativeResidue, NotDominant, UnsupportedNode
from app.services.cartan import (
    Family,
    FiniteCartan,
    Lattice,
    TypeSpec,
    bar_factor,
    height_vector,
    inverse_cartan,
    lattice_type,
)
from app.services.qchar_engine import Engine, kr_poly, s_term
from app.services.symalg import FiniteChar, FiniteWeight, SpectralParam, beta_char

Weight = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class RootData:
    """Root system of a finite Cartan matrix, weights in fundamental-weight coordinates"""
    cartan: FiniteCartan
    symmetrizer: Tuple[Fraction, ...]
    positive_roots: Tuple[Weight, ...]  # simple-root coordinates

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def lattice(self) -> Lattice:
        return self.cartan.lattice

    @property
    def rho(self) -> Weight:
        return (1,) * self.rank

    def root_weight(self, coords: Sequence[int]) -> Weight:
        """Fundamental-weight coordinates of sum_j coords[j] alpha_j"""
        C = self.cartan.matrix
        return tuple(int(sum(int(C[i, j]) * coords[j] for j in range(self.rank))) for i in range(self.rank))

    def root_coords(self, w: Sequence[int]) -> Tuple[Fraction, ...]:
        inverse = inverse_cartan(self.cartan)
        return tuple(sum((inverse[j][i] * w[i] for i in range(self.rank)), Fraction(0)) for j in range(self.rank))

    def form(self, mu: Sequence[int], nu: Sequence[int]) -> Fraction:
        """Invariant form with (Lambda_i, alpha_j) = delta_ij D_j"""
        c = self.root_coords(nu)
        return sum((mu[j] * self.symmetrizer[j] * c[j] for j in range(self.rank)), Fraction(0))

    def reflect(self, w: Sequence[int], i: int) -> Weight:
        alpha = self.cartan.matrix[:, i]
        return tuple(int(w[r] - w[i] * alpha[r]) for r in range(self.rank))

    def is_dominant(self, w: Sequence[int]) -> bool:
        return all(x >= 0 for x in w)

    def dominant_rep(self, w: Sequence[int]) -> Weight:
        w = tuple(w)
        while True:
            negative = next((i for i, x in enumerate(w) if x < 0), None)
            if negative is None:
                return w
            w = self.reflect(w, negative)

    def orbit(self, w: Sequence[int]) -> List[Weight]:
        """Weyl orbit of a dominant weight, walking down by simple reflections"""
        start = tuple(w)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for i, x in enumerate(v):
                    if x > 0:
                        u = self.reflect(v, i)
                        if u not in seen:
                            seen.add(u)
                            nxt.append(u)
            frontier = nxt
        return sorted(seen, reverse=True)

    def height(self, w: Sequence[int]) -> Fraction:
        h = height_vector(self.cartan)
        return sum((h[i] * w[i] for i in range(self.rank)), Fraction(0))


def _symmetrizer(fc: FiniteCartan) -> Tuple[Fraction, ...]:
    """D with D_i C_ij = D_j C_ji, normalized to smallest entry 1"""
    C = fc.matrix
    D: Dict[int, Fraction] = {0: Fraction(1)}
    queue = [0]
    while queue:
        i = queue.pop()
        for j in range(fc.rank):
            if j not in D and C[i, j] != 0:
                D[j] = D[i] * Fraction(int(C[i, j]), int(C[j, i]))
                queue.append(j)
    smallest = min(D.values())
    return tuple(D[i] / smallest for i in range(fc.rank))


def _positive_roots(fc: FiniteCartan) -> Tuple[Weight, ...]:
    """Positive roots by the root-string algorithm, in simple-root coordinates"""
    C = fc.matrix
    r = fc.rank
    unit = [tuple(int(a == b) for b in range(r)) for a in range(r)]
    roots = set(unit)
    layer = list(unit)
    while layer:
        nxt = []
        for root in layer:
            w = [int(sum(int(C[i, j]) * root[j] for j in range(r))) for i in range(r)]
            for i in range(r):
                p = 0
                while tuple(x - (p + 1) * unit[i][idx] for idx, x in enumerate(root)) in roots:
                    p += 1
                if p - w[i] > 0:
                    up = tuple(x + unit[i][idx] for idx, x in enumerate(root))
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return tuple(sorted(roots, key=lambda root: (sum(root), root)))


@lru_cache(maxsize=None)
def root_data(fc: FiniteCartan) -> RootData:
    return RootData(cartan=fc, symmetrizer=_symmetrizer(fc), positive_roots=_positive_roots(fc))


def type_root_data(t: TypeSpec, side: Lattice = Lattice.TILDE) -> RootData:
    return root_data(lattice_type(t, side))


# ========== IRREDUCIBLE CHARACTERS ==========

def dominant_weights(rd: RootData, lam: Sequence[int]) -> List[Weight]:
    """Dominant weights below lam, highest first"""
    lam = tuple(lam)
    alphas = [rd.root_weight(root) for root in rd.positive_roots]
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for alpha in alphas:
                nu = tuple(a - b for a, b in zip(mu, alpha))
                if rd.is_dominant(nu) and nu not in seen:
                    seen.add(nu)
                    nxt.append(nu)
        frontier = nxt
    return sorted(seen, key=lambda w: (rd.height(w), w), reverse=True)


def _dominant_multiplicities(rd: RootData, lam: Weight) -> Dict[Weight, int]:
    """Freudenthal recursion over the dominant weights of V(lam)"""
    dominants = dominant_weights(rd, lam)
    alphas = [rd.root_weight(root) for root in rd.positive_roots]
    top = tuple(a + b for a, b in zip(lam, rd.rho))
    norm_top = rd.form(top, top)
    mult: Dict[Weight, int] = {lam: 1}
    for mu in dominants[1:]:
        total = Fraction(0)
        for alpha in alphas:
            step = 1
            while True:
                nu = tuple(m + step * a for m, a in zip(mu, alpha))
                m_nu = mult.get(rd.dominant_rep(nu), 0)
                if not m_nu:
                    break
                total += m_nu * rd.form(nu, alpha)
                step += 1
        shifted = tuple(a + b for a, b in zip(mu, rd.rho))
        value = 2 * total / (norm_top - rd.form(shifted, shifted))
        if value.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity {value} at {mu}")
        if value:
            mult[mu] = int(value)
    return mult


def irr_char(rd: RootData, lam: Sequence[int]) -> FiniteChar:
    """Character of the simple module V(lam)"""
    lam = tuple(int(x) for x in lam)
    if not rd.is_dominant(lam):
        raise NotDominant(f"{list(lam)} is not dominant")
    terms: Dict[Weight, int] = {}
    for mu, m in _dominant_multiplicities(rd, lam).items():
        for w in rd.orbit(mu):
            terms[w] = m
    return FiniteChar(rd.lattice, rd.rank, terms)


def weyl_dimension(rd: RootData, lam: Sequence[int]) -> int:
    shifted = tuple(a + b for a, b in zip(lam, rd.rho))
    value = Fraction(1)
    for root in rd.positive_roots:
        alpha = rd.root_weight(root)
        value *= rd.form(shifted, alpha) / rd.form(rd.rho, alpha)
    return int(value)


def is_weyl_invariant(rd: RootData, chi: FiniteChar) -> bool:
    return all(
        chi.terms.get(rd.reflect(w, i), 0) == c
        for w, c in chi.terms.items()
        for i in range(rd.rank)
    )


# ========== BRANCHING ==========

def branch(rd: RootData, chi: FiniteChar) -> List[Tuple[FiniteWeight, int]]:
    """
    Decompose a Weyl-symmetric character into simple characters

    Repeatedly peels off the highest remaining weight.

    Raises:
        NegativeResidue: chi is not the character of a module
    """
    remainder = FiniteChar(chi.lattice, chi.rank, dict(chi.terms))
    parts: List[Tuple[FiniteWeight, int]] = []
    while remainder:
        top = max(remainder.terms, key=lambda w: (rd.height(w), w))
        c = remainder.terms[top]
        if c < 0 or not rd.is_dominant(top):
            raise NegativeResidue(f"coefficient {c} at {list(top)} while branching")
        parts.append((FiniteWeight(chi.lattice, top), c))
        remainder = remainder - irr_char(rd, top).scale(c)
    return sorted(parts, key=lambda item: item[0].coords, reverse=True)


def restricted_char(
    t: TypeSpec,
    i: int,
    k: int,
    side: Lattice = Lattice.TILDE,
    engine: Optional[Engine] = None,
    budget: Optional[int] = None,
) -> FiniteChar:
    """Q_k^{(i)}: the restriction of the KR character to the finite algebra"""
    return beta_char(t, kr_poly(t, i, k, SpectralParam(), engine, budget), side)


def _weight(fc: FiniteCartan, coeffs: Dict[int, int]) -> Weight:
    """Weight sum_l coeffs[l] Lambda_l; Lambda_0 is zero"""
    w = [0] * fc.rank
    for node, c in coeffs.items():
        if node:
            w[fc.index(node)] += c
    return tuple(w)


def _bounded(count: int, total: int, exact: bool = False):
    for m in product(range(total + 1), repeat=count):
        if sum(m) == total or (not exact and sum(m) <= total):
            yield m


_E6_FUNDAMENTALS = {
    1: {(1, 0, 0, 0): 1, (0, 0, 0, 0): 1},
    2: {(0, 1, 0, 0): 1, (0, 0, 0, 1): 1, (1, 0, 0, 0): 2, (0, 0, 0, 0): 1},
    3: {
        (0, 0, 1, 0): 1, (1, 0, 0, 1): 1, (2, 0, 0, 0): 1, (0, 1, 0, 0): 3,
        (0, 0, 0, 1): 3, (1, 0, 0, 0): 4, (0, 0, 0, 0): 2,
    },
    4: {(0, 0, 0, 1): 1, (1, 0, 0, 0): 1, (0, 0, 0, 0): 1},
}


def published_branching(t: TypeSpec, i: int, k: int, side: Lattice = Lattice.TILDE) -> List[Tuple[Weight, int]]:
    """
    Closed decomposition of the restricted KR module W^{(i)}_k

    Node 3 of E6^(2) is the conjectural fundamental decomposition.
    """
    t.check_node(i)
    side = Lattice(side)
    fc = lattice_type(t, side)
    found: Dict[Weight, int] = {}

    def add(coeffs: Dict[int, int], mult: int = 1) -> None:
        w = _weight(fc, coeffs)
        found[w] = found.get(w, 0) + mult

    if t.family == Family.A2N and side == Lattice.BAR:
        # m_j = k delta_ij mod 2 over the nodes i..n-1; Lambda_0 enters doubled
        labels = list(range(i, t.rank))
        for m in _bounded(len(labels), k):
            if all(mj % 2 == (k if j == i else 0) % 2 for j, mj in zip(labels, m)):
                w = [0] * fc.rank
                for j, mj in zip(labels, m):
                    w[fc.index(j)] += mj * bar_factor(t, j)
                found[tuple(w)] = found.get(tuple(w), 0) + 1
    elif t.family == Family.A2N:
        top = t.rank - i
        for m in _bounded(top, k):
            add({l + 1: m[l] for l in range(top)})
    elif t.family == Family.A2N_1:
        labels = list(range(i % 2, i + 1, 2))
        for m in _bounded(len(labels), k, exact=True):
            add(dict(zip(labels, m)))
    elif t.family == Family.DN_1:
        if i == t.rank:
            add({i: k})
        else:
            for m in _bounded(i, k):
                add({l + 1: m[l] for l in range(i)})
    elif t.family == Family.D4_3:
        if i == 1:
            for m in range(k + 1):
                add({1: m})
        else:
            for m1, m2 in _bounded(2, k):
                add({1: m1, 2: m2}, (m1 + 1) * min(1 + m2, 1 + k - m1 - m2))
    elif t.family == Family.E6 and k == 1:
        for w, mult in _E6_FUNDAMENTALS[i].items():
            add({node: c for node, c in zip(t.nodes, w)}, mult)
    else:
        raise UnsupportedNode(f"no closed decomposition for node {i}, k={k} of {t.name}")
    return sorted(found.items(), reverse=True)


@dataclass
class BranchingCheck:
    ok: bool
    computed: List[Tuple[Weight, int]]
    published: List[Tuple[Weight, int]]


def check_branching(
    t: TypeSpec, i: int, k: int, side: Lattice = Lattice.TILDE, engine: Optional[Engine] = None
) -> BranchingCheck:
    rd = type_root_data(t, side)
    progress(f"🔄 Branching W({i}, k={k}) of {t.name} on the {Lattice(side).value} side")
    computed = [(w.coords, c) for w, c in branch(rd, restricted_char(t, i, k, side, engine))]
    published = published_branching(t, i, k, side)
    return BranchingCheck(ok=computed == published, computed=computed, published=published)


# ========== Q-SYSTEM ==========

def r_term(
    t: TypeSpec,
    i: int,
    k: int,
    side: Lattice = Lattice.TILDE,
    engine: Optional[Engine] = None,
    budget: Optional[int] = None,
) -> FiniteChar:
    """Restriction of the T-system correction term"""
    char = lambda j, kk, c: kr_poly(t, j, kk, c, engine, budget)  # noqa: E731
    return beta_char(t, s_term(t, i, k, SpectralParam(), char), side)


@dataclass
class QSystemResult:
    ok: bool
    residual: FiniteChar


def check_qsystem(
    t: TypeSpec,
    i: int,
    k: int,
    side: Lattice = Lattice.TILDE,
    engine: Optional[Engine] = None,
    budget: Optional[int] = None,
) -> QSystemResult:
    """(Q_k)^2 = Q_{k+1} Q_{k-1} + R_k on restricted characters"""
    Q = {kk: restricted_char(t, i, kk, side, engine, budget) for kk in (k - 1, k, k + 1)}
    residual = Q[k] * Q[k] - Q[k + 1] * Q[k - 1] - r_term(t, i, k, side, engine, budget)
    return QSystemResult(ok=not residual, residual=residual)

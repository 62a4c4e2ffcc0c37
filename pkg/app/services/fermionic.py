"""
Fermionic formulas and the KR identity checker

Sums run over the nodes of the simply-laced parent; weights are pushed to
the finite lattice of the twisted type through pi.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy

from app.core.config import settings
from app.core.console import progress
from app.core.errors import Budget, ParseError, TruncationUnsound, UnknownNode
from app.services.cartan import (
    FiniteCartan,
    Lattice,
    TypeSpec,
    finite_type,
    height_vector,
    lattice_type,
    parent_weight_projection,
    untwisted_parent,
)
from app.services.finitechar import irr_char, root_data
from app.services.qchar_engine import Engine, kr_poly
from app.services.symalg import FiniteChar, SpectralParam, beta, beta_char, kr_highest

NuVector = Dict[Tuple[int, int], int]  # (node, k) -> count
NVector = Dict[Tuple[int, int], int]  # (parent node, k) -> N


class Mode(str, Enum):
    UNRESTRICTED = "unrestricted"
    RESTRICTED = "restricted"
    AUTO = "auto"


class RootProduct(str, Enum):
    PARENT = "parent"
    FINITE = "finite"


def gen_binomial(a: int, b: int, classical: bool = False) -> int:
    """
    Binomial coefficient with integer top

    Args:
        a: top, any integer
        b: bottom, b >= 0
        classical: zero unless 0 <= b <= a; otherwise the falling factorial a(a-1)...(a-b+1)/b!
    """
    if b < 0:
        raise ValueError(f"bottom must be nonnegative, got {b}")
    if classical and not 0 <= b <= a:
        return 0
    return int(sympy.ff(a, b) / sympy.factorial(b))


def parse_nu(entries: Sequence[str]) -> NuVector:
    """Read node:k:count triples"""
    nu: NuVector = {}
    for entry in entries:
        parts = entry.split(":")
        if len(parts) != 3 or not all(p.strip().lstrip("-").isdigit() for p in parts):
            raise ParseError(f"nu entries are node:k:count, got {entry!r}")
        node, k, count = (int(p) for p in parts)
        if k < 1 or count < 0:
            raise ParseError(f"nu entry {entry!r} needs k >= 1 and count >= 0")
        nu[(node, k)] = nu.get((node, k), 0) + count
    return nu


def lift_nu(t: TypeSpec, nu: NuVector) -> NuVector:
    """Move nu onto the orbit representatives of the parent"""
    _, rep = untwisted_parent(t)
    lifted: NuVector = {}
    for (i, k), count in nu.items():
        if i not in rep:
            raise UnknownNode(f"node {i} is not a node of {t.name}")
        if count:
            lifted[(rep[i], k)] = lifted.get((rep[i], k), 0) + count
    return lifted


def _parent(t: TypeSpec) -> TypeSpec:
    return untwisted_parent(t)[0]


def vacancy(t: TypeSpec, nu: NuVector, N: NVector, x: int, k: int) -> int:
    """Vacancy number P_k^{(x)} at parent node x"""
    parent = _parent(t)
    C = parent.cartan
    lifted = lift_nu(t, nu)
    value = sum(count * min(k, l) for (y, l), count in lifted.items() if y == x)
    value -= sum(int(C[x - 1, y - 1]) * min(k, l) * n for (y, l), n in N.items())
    return value


def _coefficient(t: TypeSpec, nu: NuVector, N: NVector, classical: bool) -> int:
    c = 1
    for (x, k), n in N.items():
        if n:
            c *= gen_binomial(vacancy(t, nu, N, x, k) + n, n, classical)
            if not c:
                return 0
    return c


def _occupations(variables: List[Tuple[Tuple[int, int], Fraction]], bound: Fraction, budget: int) -> Iterator[NVector]:
    """Every N over the given variables with total grade <= bound"""
    count = 0
    current: NVector = {}

    def walk(idx: int, remaining: Fraction) -> Iterator[NVector]:
        nonlocal count
        if idx == len(variables):
            count += 1
            if count > budget:
                raise Budget(f"more than {budget} occupation vectors")
            yield dict(current)
            return
        key, grade = variables[idx]
        n = 0
        while n * grade <= remaining:
            if n:
                current[key] = n
            yield from walk(idx + 1, remaining - n * grade)
            n += 1
        current.pop(key, None)

    yield from walk(0, bound)


# ========== UNRESTRICTED SUM ==========

def root_images(t: TypeSpec, side: Lattice = Lattice.TILDE) -> Dict[int, Tuple[int, ...]]:
    """pi(alpha_x) in the finite lattice, for every parent node x"""
    parent = _parent(t)
    projection = parent_weight_projection(t, side)
    rank = lattice_type(t, side).rank
    images = {}
    for x in parent.nodes:
        coords = [0] * rank
        for y in parent.nodes:
            position, factor = projection[y]
            coords[position] += int(parent.cartan[y - 1, x - 1]) * factor
        images[x] = tuple(coords)
    return images


def _grade(fc: FiniteCartan, w) -> Fraction:
    h = height_vector(fc)
    return -sum((h[i] * c for i, c in enumerate(w)), Fraction(0))


def fermionic_F(
    t: TypeSpec,
    nu: NuVector,
    side: Lattice = Lattice.TILDE,
    max_grade: Optional[Fraction] = None,
    margin: Optional[int] = None,
    classical: bool = False,
) -> FiniteChar:
    """
    Unrestricted fermionic sum, truncated at max_grade

    The sum is enumerated up to max_grade + margin; any nonzero aggregate
    coefficient above max_grade raises TruncationUnsound.
    """
    side = Lattice(side)
    fc = lattice_type(t, side)
    margin = settings.QCHAR_FERMIONIC_MARGIN if margin is None else margin
    if max_grade is None:
        max_grade = max((_grade(fc, w) for w in kr_lhs(t, nu, side).terms), default=Fraction(0))
    images = root_images(t, side)
    grades = {x: -_grade(fc, w) for x, w in images.items()}
    if any(g <= 0 for g in grades.values()):
        raise ArithmeticError(f"non-positive root grade on {t.name}")
    bound = Fraction(max_grade) + margin
    variables = [
        ((x, k), k * g)
        for x, g in sorted(grades.items())
        for k in range(1, int(bound / g) + 1)
    ]
    progress(f"🔄 Fermionic sum on {t.name}: {len(variables)} occupation variables, grade <= {bound}")
    terms: Dict[Tuple[int, ...], int] = {}
    for N in _occupations(variables, bound, settings.QCHAR_FERMIONIC_ENUM_BUDGET):
        c = _coefficient(t, nu, N, classical)
        if not c:
            continue
        w = [0] * fc.rank
        for (x, k), n in N.items():
            for p, a in enumerate(images[x]):
                w[p] -= k * n * a
        key = tuple(w)
        terms[key] = terms.get(key, 0) + c
    full = FiniteChar(side, fc.rank, terms)
    spill = {w: c for w, c in full.terms.items() if _grade(fc, w) > max_grade}
    if spill:
        raise TruncationUnsound(f"{len(spill)} nonzero terms above grade {max_grade}")
    return full


def _root_product(t: TypeSpec, side: Lattice, delta: RootProduct) -> FiniteChar:
    fc = lattice_type(t, side)
    result = FiniteChar.one(side, fc.rank)
    if RootProduct(delta) == RootProduct.PARENT:
        parent = _parent(t)
        prd = root_data(finite_type(parent))
        projection = parent_weight_projection(t, side)
        for root in prd.positive_roots:
            w = [0] * fc.rank
            for y, c in enumerate(prd.root_weight(root), start=1):
                position, factor = projection[y]
                w[position] -= c * factor
            result = result * FiniteChar(side, fc.rank, {(0,) * fc.rank: 1, tuple(w): -1})
    else:
        rd = root_data(fc)
        for root in rd.positive_roots:
            w = tuple(-c for c in rd.root_weight(root))
            result = result * FiniteChar(side, fc.rank, {(0,) * fc.rank: 1, w: -1})
    return result


def q_nu(t: TypeSpec, nu: NuVector, side: Lattice = Lattice.TILDE, engine: Optional[Engine] = None, normalized: bool = True) -> FiniteChar:
    """Product of restricted KR characters, optionally divided by its highest weight"""
    side = Lattice(side)
    rank = lattice_type(t, side).rank
    result = FiniteChar.one(side, rank)
    for (i, k), count in sorted(nu.items()):
        Q = beta_char(t, kr_poly(t, i, k, SpectralParam(), engine), side)
        if normalized:
            top = beta(t, kr_highest(t, i, k, SpectralParam()), side).coords
            Q = Q.shift([-c for c in top])
        result = result * Q ** count
    return result


def kr_lhs(
    t: TypeSpec,
    nu: NuVector,
    side: Lattice = Lattice.TILDE,
    delta: RootProduct = RootProduct.PARENT,
    engine: Optional[Engine] = None,
) -> FiniteChar:
    return q_nu(t, nu, side, engine) * _root_product(t, side, delta)


# ========== RESTRICTED SUM ==========

def fermionic_multiplicities(t: TypeSpec, nu: NuVector) -> Dict[Tuple[int, ...], int]:
    """Multiplicities of parent simple modules: the sum over N with all vacancies nonnegative"""
    parent = _parent(t)
    pfc = finite_type(parent)
    lifted = lift_nu(t, nu)
    top = [0] * parent.rank
    for (x, k), count in lifted.items():
        top[x - 1] += k * count
    h = height_vector(pfc)
    bound = sum((h[i] * c for i, c in enumerate(top)), Fraction(0))
    variables = [((x, k), Fraction(k)) for x in parent.nodes for k in range(1, int(bound) + 1)]
    kmax = max([k for _, k in lifted] + [1])
    found: Dict[Tuple[int, ...], int] = {}
    for N in _occupations(variables, bound, settings.QCHAR_FERMIONIC_ENUM_BUDGET):
        horizon = max([kmax] + [k for _, k in N])
        if any(vacancy(t, nu, N, x, k) < 0 for x in parent.nodes for k in range(1, horizon + 1)):
            continue
        c = _coefficient(t, nu, N, classical=True)
        if not c:
            continue
        w = list(top)
        for (x, k), n in N.items():
            for y in parent.nodes:
                w[y - 1] -= k * n * int(parent.cartan[y - 1, x - 1])
        key = tuple(w)
        found[key] = found.get(key, 0) + c
    return dict(sorted(found.items(), reverse=True))


def project_parent_char(t: TypeSpec, chi: FiniteChar, side: Lattice = Lattice.TILDE) -> FiniteChar:
    """pi on characters of the parent finite algebra"""
    side = Lattice(side)
    projection = parent_weight_projection(t, side)
    rank = lattice_type(t, side).rank
    terms: Dict[Tuple[int, ...], int] = {}
    for w, c in chi.terms.items():
        coords = [0] * rank
        for y, value in enumerate(w, start=1):
            position, factor = projection[y]
            coords[position] += factor * value
        key = tuple(coords)
        terms[key] = terms.get(key, 0) + c
    return FiniteChar(side, rank, terms)


# ========== IDENTITY CHECK ==========

@dataclass
class FermionicCheck:
    ok: bool
    mode: Mode
    residual: FiniteChar
    multiplicities: Dict[Tuple[int, ...], int] = field(default_factory=dict)


def check_kr(
    t: TypeSpec,
    nu: NuVector,
    side: Lattice = Lattice.TILDE,
    mode: Mode = Mode.AUTO,
    delta: RootProduct = RootProduct.PARENT,
    engine: Optional[Engine] = None,
    classical: bool = False,
) -> FermionicCheck:
    """
    Compare the normalized KR product with the fermionic formula

    Args:
        mode: unrestricted compares Q_nu * prod(1 - e^{-pi alpha}) with the full sum;
              restricted compares Q_nu with pi of the parent decomposition;
              auto tries unrestricted and falls back when the enumeration is over budget
    """
    side, mode = Lattice(side), Mode(mode)
    if mode != Mode.RESTRICTED:
        try:
            lhs = kr_lhs(t, nu, side, delta, engine)
            fc = lattice_type(t, side)
            max_grade = max((_grade(fc, w) for w in lhs.terms), default=Fraction(0))
            rhs = fermionic_F(t, nu, side, max_grade=max_grade, classical=classical)
            residual = lhs - rhs
            return FermionicCheck(ok=not residual, mode=Mode.UNRESTRICTED, residual=residual)
        except Budget:
            if mode == Mode.UNRESTRICTED:
                raise
            progress("⚠️ Unrestricted enumeration over budget, using the restricted sum")
    multiplicities = fermionic_multiplicities(t, nu)
    prd = root_data(finite_type(_parent(t)))
    parent_char = FiniteChar(prd.lattice, prd.rank)
    for w, m in multiplicities.items():
        parent_char = parent_char + irr_char(prd, w).scale(m)
    residual = q_nu(t, nu, side, engine, normalized=False) - project_parent_char(t, parent_char, side)
    return FermionicCheck(ok=not residual, mode=Mode.RESTRICTED, residual=residual, multiplicities=multiplicities)

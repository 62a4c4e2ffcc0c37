"""
Exact symbolic arithmetic: spectral parameters, monomials in Z_{i,a},
Laurent polynomials with integer coefficients and finite characters
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.errors import Budget, NegativeK, NotBelow, NotDivisible
from app.services.cartan import (
    Lattice,
    NodeKind,
    TypeSpec,
    finite_type,
    height_vector,
    lattice_type,
    weight_projection,
)

Rational = Union[int, Fraction]


def _frac_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ========== SPECTRAL PARAMETERS ==========

class SpectralParam:
    """a^{aPow} e^{2 pi i phase} q^{qPow}, all exponents exact rationals, phase mod 1"""

    __slots__ = ("a", "phase", "q", "_key")

    def __init__(self, a: Rational = 1, phase: Rational = 0, q: Rational = 0):
        self.a = Fraction(a)
        self.phase = Fraction(phase) % 1
        self.q = Fraction(q)
        self._key = (self.a, self.phase, self.q)

    @property
    def key(self) -> Tuple[Fraction, Fraction, Fraction]:
        return self._key

    def __mul__(self, other: "SpectralParam") -> "SpectralParam":
        return SpectralParam(self.a + other.a, self.phase + other.phase, self.q + other.q)

    def __truediv__(self, other: "SpectralParam") -> "SpectralParam":
        return SpectralParam(self.a - other.a, self.phase - other.phase, self.q - other.q)

    def __pow__(self, r: Rational) -> "SpectralParam":
        """Principal value of the r-th power"""
        r = Fraction(r)
        return SpectralParam(self.a * r, self.phase * r, self.q * r)

    def __neg__(self) -> "SpectralParam":
        return SpectralParam(self.a, self.phase + Fraction(1, 2), self.q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpectralParam) and self._key == other._key

    def __lt__(self, other: "SpectralParam") -> bool:
        return self._key < other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def shift(self, q: Rational = 0, phase: Rational = 0) -> "SpectralParam":
        return SpectralParam(self.a, self.phase + Fraction(phase), self.q + Fraction(q))

    def roots(self, M: int) -> List["SpectralParam"]:
        """The M parameters b with b^M = self, principal branch first"""
        return [
            SpectralParam(self.a / M, (self.phase + k) / M, self.q / M)
            for k in range(M)
        ]

    def __repr__(self) -> str:
        return f"a^{{{_frac_text(self.a)}}} w^{{{_frac_text(self.phase)}}} q^{{{_frac_text(self.q)}}}"

    def latex(self) -> str:
        parts = []
        if self.phase == Fraction(1, 2):
            parts.append("-")
        elif self.phase:
            parts.append(f"e^{{2\\pi i {_frac_text(self.phase)}}}")
        if self.a == 1:
            parts.append("a")
        elif self.a:
            parts.append(f"a^{{{_frac_text(self.a)}}}")
        if self.q == 1:
            parts.append("q")
        elif self.q:
            parts.append(f"q^{{{_frac_text(self.q)}}}")
        body = "".join(parts)
        return body if body and body != "-" else body + "1"


A = SpectralParam(1, 0, 0)


# ========== MONOMIALS ==========

Variable = Tuple[int, SpectralParam]


def _var_key(var: Variable) -> Tuple:
    return (var[0],) + var[1].key


@total_ordering
class Monomial:
    """
    Laurent monomial in the variables Z_{i,s}

    Variables are kept sorted by (node, aPow, phase, qPow); comparison is the
    lexicographic order on exponent vectors over that variable order, which is
    a total order compatible with multiplication.
    """

    __slots__ = ("_items", "_keys", "_hash")

    def __init__(self, exps: Optional[Dict[Variable, int]] = None):
        items = sorted(
            ((var, e) for var, e in (exps or {}).items() if e),
            key=lambda item: _var_key(item[0]),
        )
        self._items: Tuple[Tuple[Variable, int], ...] = tuple(items)
        self._keys = tuple(_var_key(var) for var, _ in items)
        self._hash = hash(tuple(zip(self._keys, (e for _, e in items))))

    @classmethod
    def one(cls) -> "Monomial":
        return cls()

    @classmethod
    def var(cls, node: int, s: SpectralParam, e: int = 1) -> "Monomial":
        return cls({(node, s): e})

    def items(self) -> Tuple[Tuple[Variable, int], ...]:
        return self._items

    def as_dict(self) -> Dict[Variable, int]:
        return dict(self._items)

    def exponent(self, node: int, s: SpectralParam) -> int:
        return self.as_dict().get((node, s), 0)

    @property
    def is_one(self) -> bool:
        return not self._items

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(sorted({var[0] for var, _ in self._items}))

    def restrict(self, node: int) -> "Monomial":
        """m^{(j)}: keep only the variables of one node"""
        return Monomial({var: e for var, e in self._items if var[0] == node})

    def without(self, node: int) -> "Monomial":
        return Monomial({var: e for var, e in self._items if var[0] != node})

    def map_variables(self, f) -> "Monomial":
        """Apply f: Variable -> Monomial variable-wise"""
        result = Monomial.one()
        for var, e in self._items:
            result = result * (f(var) ** e)
        return result

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other._items:
            return self
        if not self._items:
            return other
        exps = dict(self._items)
        for var, e in other._items:
            exps[var] = exps.get(var, 0) + e
        return Monomial(exps)

    def inverse(self) -> "Monomial":
        return Monomial({var: -e for var, e in self._items})

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def __pow__(self, n: int) -> "Monomial":
        if n == 1:
            return self
        return Monomial({var: e * n for var, e in self._items})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._hash == other._hash and self._keys == other._keys and all(
            a[1] == b[1] for a, b in zip(self._items, other._items)
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Monomial") -> bool:
        a, b = self._items, other._items
        ka, kb = self._keys, other._keys
        i = j = 0
        while i < len(a) or j < len(b):
            if j >= len(b) or (i < len(a) and ka[i] < kb[j]):
                return a[i][1] < 0
            if i >= len(a) or kb[j] < ka[i]:
                return b[j][1] > 0
            if a[i][1] != b[j][1]:
                return a[i][1] < b[j][1]
            i += 1
            j += 1
        return False

    def __repr__(self) -> str:
        if not self._items:
            return "1"
        return " ".join(f"Z[{node}; {s!r}]^{e}" for (node, s), e in self._items)

    def latex(self) -> str:
        if not self._items:
            return "1"
        out = []
        for (node, s), e in self._items:
            token = f"Z_{{{node},{s.latex()}}}"
            out.append(token if e == 1 else f"{token}^{{{e}}}")
        return "".join(out)


# ========== CHARACTER POLYNOMIALS ==========

class CharPoly:
    """Finite Z-linear combination of monomials, exact arithmetic"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, int]] = None):
        self.terms: Dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def one(cls) -> "CharPoly":
        return cls({Monomial.one(): 1})

    @classmethod
    def zero(cls) -> "CharPoly":
        return cls()

    @classmethod
    def of(cls, m: Monomial, c: int = 1) -> "CharPoly":
        return cls({m: c})

    @classmethod
    def sum_of(cls, monomials: Iterable[Monomial]) -> "CharPoly":
        terms: Dict[Monomial, int] = {}
        for m in monomials:
            terms[m] = terms.get(m, 0) + 1
        return cls(terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms)

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    def items_sorted(self) -> List[Tuple[Monomial, int]]:
        """Terms in descending canonical order"""
        return sorted(self.terms.items(), key=lambda item: item[0], reverse=True)

    @property
    def dimension(self) -> int:
        return sum(self.terms.values())

    def __add__(self, other: "CharPoly") -> "CharPoly":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return CharPoly(terms)

    def __sub__(self, other: "CharPoly") -> "CharPoly":
        return self + other.scale(-1)

    def __neg__(self) -> "CharPoly":
        return self.scale(-1)

    def scale(self, c: int) -> "CharPoly":
        return CharPoly({m: c * v for m, v in self.terms.items()})

    def times_monomial(self, m: Monomial) -> "CharPoly":
        return CharPoly({m * n: c for n, c in self.terms.items()})

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        if len(other.terms) > len(self.terms):
            return other * self
        terms: Dict[Monomial, int] = {}
        for n, d in other.terms.items():
            for m, c in self.terms.items():
                key = m * n
                terms[key] = terms.get(key, 0) + c * d
        return CharPoly(terms)

    def __pow__(self, n: int) -> "CharPoly":
        result = CharPoly.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CharPoly) and self.terms == other.terms

    def map_monomials(self, f) -> "CharPoly":
        terms: Dict[Monomial, int] = {}
        for m, c in self.terms.items():
            key = f(m)
            terms[key] = terms.get(key, 0) + c
        return CharPoly(terms)

    def leading(self) -> Tuple[Monomial, int]:
        m = max(self.terms)
        return m, self.terms[m]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            repr(m) if c == 1 else f"{c}*{m!r}" for m, c in self.items_sorted()
        )

    def latex(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.items_sorted():
            body = m.latex()
            out.append(body if c == 1 else f"{c}{body}")
        return " + ".join(out)


def poly_add(P: CharPoly, Q: CharPoly) -> CharPoly:
    return P + Q


def poly_sub(P: CharPoly, Q: CharPoly) -> CharPoly:
    return P - Q


def poly_mul(P: CharPoly, Q: CharPoly) -> CharPoly:
    return P * Q


class _Desc:
    """Heap entry giving max-heap behaviour on monomials"""

    __slots__ = ("m",)

    def __init__(self, m: Monomial):
        self.m = m

    def __lt__(self, other: "_Desc") -> bool:
        return other.m < self.m


def poly_div_exact(P: CharPoly, D: CharPoly, budget: Optional[int] = None) -> CharPoly:
    """
    Exact quotient P / D by repeated cancellation of leading terms

    Raises NotDivisible as soon as a remainder term cannot be cancelled.
    """
    if not D:
        raise NotDivisible("division by zero polynomial")
    if not P:
        return CharPoly.zero()
    budget = budget or settings.QCHAR_BUDGET
    lead_m, lead_c = D.leading()
    lowest = min(P.terms) / min(D.terms)
    remainder = dict(P.terms)
    heap = [_Desc(m) for m in remainder]
    heapq.heapify(heap)
    quotient: Dict[Monomial, int] = {}
    while remainder:
        top = heapq.heappop(heap).m
        c = remainder.get(top)
        if not c:
            continue
        t = top / lead_m
        if t < lowest or c % lead_c:
            raise NotDivisible(f"remainder term {top!r} cannot be cancelled")
        factor = c // lead_c
        quotient[t] = quotient.get(t, 0) + factor
        if len(quotient) > budget:
            raise Budget(f"quotient exceeded {budget} monomials")
        for m, d in D.terms.items():
            key = t * m
            value = remainder.get(key, 0) - factor * d
            if value:
                if key not in remainder:
                    heapq.heappush(heap, _Desc(key))
                remainder[key] = value
            else:
                remainder.pop(key, None)
    return CharPoly(quotient)


# ========== FINITE WEIGHTS AND CHARACTERS ==========

class FiniteWeight:
    __slots__ = ("lattice", "coords")

    def __init__(self, lattice: Lattice, coords: Sequence[int]):
        self.lattice = Lattice(lattice)
        self.coords = tuple(int(c) for c in coords)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteWeight) and (self.lattice, self.coords) == (other.lattice, other.coords)

    def __hash__(self) -> int:
        return hash((self.lattice, self.coords))

    def __add__(self, other: "FiniteWeight") -> "FiniteWeight":
        return FiniteWeight(self.lattice, [a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "FiniteWeight":
        return FiniteWeight(self.lattice, [-a for a in self.coords])

    def __repr__(self) -> str:
        return f"{self.lattice.value}{list(self.coords)}"


class FiniteChar:
    """Z-linear combination of weights of one lattice, keyed by coordinate tuples"""

    __slots__ = ("lattice", "rank", "terms")

    def __init__(self, lattice: Lattice, rank: int, terms: Optional[Dict[Tuple[int, ...], int]] = None):
        self.lattice = Lattice(lattice)
        self.rank = rank
        self.terms: Dict[Tuple[int, ...], int] = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, lattice: Lattice, rank: int) -> "FiniteChar":
        return cls(lattice, rank, {(0,) * rank: 1})

    @classmethod
    def of(cls, weight: FiniteWeight, c: int = 1) -> "FiniteChar":
        return cls(weight.lattice, len(weight.coords), {weight.coords: c})

    def weights(self) -> List[Tuple[FiniteWeight, int]]:
        return [(FiniteWeight(self.lattice, w), c) for w, c in sorted(self.terms.items(), reverse=True)]

    @property
    def dimension(self) -> int:
        return sum(self.terms.values())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "FiniteChar") -> "FiniteChar":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return FiniteChar(self.lattice, self.rank, terms)

    def scale(self, c: int) -> "FiniteChar":
        return FiniteChar(self.lattice, self.rank, {w: c * v for w, v in self.terms.items()})

    def __sub__(self, other: "FiniteChar") -> "FiniteChar":
        return self + other.scale(-1)

    def __mul__(self, other: "FiniteChar") -> "FiniteChar":
        terms: Dict[Tuple[int, ...], int] = {}
        for w, c in self.terms.items():
            for v, d in other.terms.items():
                key = tuple(a + b for a, b in zip(w, v))
                terms[key] = terms.get(key, 0) + c * d
        return FiniteChar(self.lattice, self.rank, terms)

    def __pow__(self, n: int) -> "FiniteChar":
        result = FiniteChar.one(self.lattice, self.rank)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, weight: Sequence[int]) -> "FiniteChar":
        """Multiply by e^{weight}"""
        return FiniteChar(
            self.lattice, self.rank,
            {tuple(a + b for a, b in zip(w, weight)): c for w, c in self.terms.items()},
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteChar)
            and self.lattice == other.lattice
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        return " + ".join(f"{c}*e{list(w)}" for w, c in sorted(self.terms.items(), reverse=True)) or "0"


# ========== TYPE-DEPENDENT OPERATIONS ==========

def z_var(t: TypeSpec, i: int, s: SpectralParam) -> Monomial:
    t.check_node(i)
    return Monomial.var(i, s)


def a_monomial(t: TypeSpec, i: int, s: SpectralParam) -> Monomial:
    """The simple-root monomial A_{i,s}"""
    t.check_node(i)
    kind = t.kind[i]
    if kind == NodeKind.DIAG:
        exps = {(i, s.shift(q=t.M)): 1, (i, s.shift(q=-t.M)): 1}
    else:
        exps = {(i, s.shift(q=1)): 1, (i, s.shift(q=-1)): 1}
    if kind == NodeKind.SPECIAL:
        exps[(i, -s)] = -1
    for j in t.adj[i]:
        if kind == NodeKind.DIAG and not t.fixed[j]:
            for root in s.roots(t.M):
                exps[(j, root)] = exps.get((j, root), 0) - 1
        elif kind == NodeKind.FREE and t.fixed[j] and t.is_twisted:
            exps[(j, s ** t.M)] = exps.get((j, s ** t.M), 0) - 1
        else:
            exps[(j, s)] = exps.get((j, s), 0) - 1
    return Monomial(exps)


def kr_highest(t: TypeSpec, i: int, k: int, s: SpectralParam) -> Monomial:
    """Highest monomial of W_{k,s}^{(i)}: a q_i^2-string (q^2 on A2n^(2)) of length k"""
    t.check_node(i)
    if k < 0:
        raise NegativeK(f"k must be nonnegative, got {k}")
    step = 2 * t.step(i)
    return Monomial({(i, s.shift(q=step * r)): 1 for r in range(k)})


def is_j_dominant(m: Monomial, J: Iterable[int]) -> bool:
    J = set(J)
    return all(e >= 0 for (node, _), e in m.items() if node in J)


def is_dominant(m: Monomial) -> bool:
    return all(e >= 0 for _, e in m.items())


def _class_and_level(t: TypeSpec, node: int, s: SpectralParam) -> Tuple[Tuple, Fraction]:
    if t.is_a2n:
        return (s.a, s.phase % Fraction(1, 2), s.q % 1), s.q
    d = t.d[node]
    level = s.q / d
    return (s.a / d, (s.phase / d) % Fraction(1, t.M), level % 1), level


def is_right_negative(t: TypeSpec, m: Monomial) -> bool:
    """In every class a*omega^Z*q^Z, the variables of maximal q-level carry negative exponents"""
    if m.is_one:
        return False
    top: Dict[Tuple, Tuple[Fraction, bool]] = {}
    for (node, s), e in m.items():
        key, level = _class_and_level(t, node, s)
        current = top.get(key)
        if current is None or level > current[0]:
            top[key] = (level, e < 0)
        elif level == current[0]:
            top[key] = (level, current[1] and e < 0)
    return all(negative for _, negative in top.values())


def affine_degree(x: Union[Monomial, CharPoly]) -> int:
    """Largest positive exponent (of a monomial, or over all monomials of a polynomial)"""
    if isinstance(x, CharPoly):
        return max((affine_degree(m) for m in x.terms), default=0)
    return max((e for _, e in x.items() if e > 0), default=0)


# ========== RESTRICTION AND THE PARTIAL ORDER ==========

def beta(t: TypeSpec, m: Monomial, side: Lattice = Lattice.TILDE) -> FiniteWeight:
    """Restriction weight of a monomial: beta (TILDE) or beta-bar (BAR)"""
    projection = weight_projection(t, side)
    coords = [0] * lattice_type(t, side).rank
    for (node, _), e in m.items():
        position, factor = projection[node]
        coords[position] += factor * e
    return FiniteWeight(side, coords)


def beta_bar(t: TypeSpec, m: Monomial) -> FiniteWeight:
    return beta(t, m, Lattice.BAR)


def beta_char(t: TypeSpec, P: CharPoly, side: Lattice = Lattice.TILDE) -> FiniteChar:
    rank = lattice_type(t, side).rank
    terms: Dict[Tuple[int, ...], int] = {}
    for m, c in P.terms.items():
        w = beta(t, m, side).coords
        terms[w] = terms.get(w, 0) + c
    return FiniteChar(side, rank, terms)


def weight_height(t: TypeSpec, m: Monomial) -> Fraction:
    """Height of beta-bar(m): pairing with the sum of fundamental coweights"""
    h = height_vector(finite_type(t))
    return sum((h[i] * c for i, c in enumerate(beta_bar(t, m).coords)), Fraction(0))


def lowering_step(t: TypeSpec, i: int) -> Fraction:
    """q-offset between A_{i,c} and its top variable Z_{i,c q^step}"""
    return Fraction(t.M) if t.kind[i] == NodeKind.DIAG else Fraction(1)


def _level(t: TypeSpec, node: int, s: SpectralParam) -> Fraction:
    if t.is_a2n or not t.is_twisted:
        return s.q
    return s.q / t.d[node]


def a_factorization(t: TypeSpec, m: Monomial, m_plus: Monomial) -> Optional[List[Tuple[int, SpectralParam, int]]]:
    """
    Write m_plus / m as a product of A_{i,c} with positive exponents

    Returns the factors (i, c, multiplicity), or None when m is not below m_plus.
    Each A_{i,c} has a unique variable of maximal level, so factors are
    peeled from the top level down.
    """
    gap = weight_height(t, m_plus) - weight_height(t, m)
    if gap < 0 or gap.denominator != 1:
        return None
    rest = m_plus / m
    factors: List[Tuple[int, SpectralParam, int]] = []
    used = 0
    while not rest.is_one:
        levels = [(_level(t, node, s), node, s, e) for (node, s), e in rest.items()]
        top = max(level for level, *_ in levels)
        tops = [(node, s, e) for level, node, s, e in levels if level == top]
        if any(e < 0 for _, _, e in tops):
            return None
        for node, s, e in tops:
            c = s.shift(q=-lowering_step(t, node))
            factors.append((node, c, e))
            rest = rest / (a_monomial(t, node, c) ** e)
            used += e
        if used > gap:
            return None
    return factors if used == gap else None


def is_below(t: TypeSpec, m: Monomial, m_plus: Monomial) -> bool:
    """m <= m_plus in the partial order"""
    return a_factorization(t, m, m_plus) is not None


def height_v(t: TypeSpec, m: Monomial, m_plus: Monomial) -> int:
    """Number of A^{-1} factors in m / m_plus"""
    factors = a_factorization(t, m, m_plus)
    if factors is None:
        raise NotBelow(f"{m!r} is not below {m_plus!r}")
    return sum(e for _, _, e in factors)

"""
Character engines for Kirillov-Reshetikhin modules

FM:       Frenkel-Mukhin style saturation directly on the given type
FOLD:     saturation on the simply-laced parent, then the folding map pi
TSYS:     fundamentals by FOLD, higher k by the T-system and exact division
TABLEAUX: closed tableau sums (see app.services.tableaux)
"""
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from app.core.config import settings
from app.core.console import progress
from app.core.errors import (
    Budget,
    DirectionConflict,
    EngineDisagreement,
    NotDominant,
    NotInKernel,
    NotSpecial,
    TypeMismatch,
    UnsupportedNode,
)
from app.services.cartan import NodeKind, TypeSpec
from app.services.elementary import lift_corrections, screen
from app.services.symalg import (
    CharPoly,
    Monomial,
    SpectralParam,
    a_monomial,
    is_below,
    is_dominant,
    is_right_negative,
    kr_highest,
    poly_div_exact,
    weight_height,
)


class Engine(str, Enum):
    FM = "fm"
    FOLD = "fold"
    TSYS = "tsys"
    TABLEAUX = "tableaux"
    ALL = "all"


@dataclass
class EngineReport:
    character: CharPoly
    engine: Engine
    dominant_list: List[Tuple[Monomial, int]] = field(default_factory=list)
    special: bool = False
    dimension: int = 0
    distinct_monomials: int = 0

    @classmethod
    def build(cls, t: TypeSpec, P: CharPoly, engine: Engine) -> "EngineReport":
        dominant = dominant_monomials(P, t)
        return cls(
            character=P,
            engine=engine,
            dominant_list=dominant,
            special=is_special(P),
            dimension=P.dimension,
            distinct_monomials=len(P),
        )


@dataclass
class TSystemResult:
    ok: bool
    residual: CharPoly


# ========== DOMINANT MONOMIALS ==========

def dominant_monomials(P: CharPoly, t: Optional[TypeSpec] = None) -> List[Tuple[Monomial, int]]:
    """Dominant monomials with multiplicities, highest first"""
    found = [(m, c) for m, c in P.terms.items() if is_dominant(m)]
    if t is None:
        return sorted(found, key=lambda item: item[0], reverse=True)
    return sorted(found, key=lambda item: (weight_height(t, item[0]), item[0]), reverse=True)


def is_special(P: CharPoly) -> bool:
    found = [c for m, c in P.terms.items() if is_dominant(m)]
    return found == [1]


# ========== FRENKEL-MUKHIN SATURATION ==========

def fm_expand(t: TypeSpec, m_plus: Monomial, budget: Optional[int] = None, verify: bool = False) -> CharPoly:
    """
    Unique element of the screening intersection with single dominant monomial m_plus

    Monomials are processed by increasing number of A^{-1} factors (canonical
    order inside a level). Each processed monomial pushes its local lift in every
    direction where it is locally dominant; a non-highest monomial gets its
    coefficient from the directions where it is not locally dominant, which
    must all agree.
    """
    if not is_dominant(m_plus):
        raise NotDominant(f"{m_plus!r} is not dominant")
    budget = budget or settings.QCHAR_BUDGET
    nodes = t.nodes
    coeff: Dict[Monomial, int] = {}
    received: Dict[Monomial, Dict[int, int]] = defaultdict(dict)
    levels: Dict[int, set] = defaultdict(set)
    levels[0].add(m_plus)
    depth = 0
    while levels:
        bucket = levels.pop(depth, None)
        if bucket is None:
            depth += 1
            continue
        for m in sorted(bucket):
            got = received.pop(m, {})
            negative = {node for (node, _), e in m.items() if e < 0}
            if m == m_plus:
                c = 1
            else:
                if not negative:
                    raise NotSpecial(f"second dominant monomial {m!r} below {m_plus!r}")
                values = {got.get(j, 0) for j in negative}
                if len(values) > 1:
                    raise DirectionConflict(f"directions disagree at {m!r}: {sorted(values)}")
                c = values.pop()
            for j in nodes:
                if j not in negative and got.get(j, 0) > c:
                    raise DirectionConflict(f"direction {j} over-counts {m!r}")
            if not c:
                continue
            coeff[m] = c
            if len(coeff) > budget:
                raise Budget(f"expansion exceeded {budget} monomials")
            for j in nodes:
                if j in negative:
                    continue
                mult = c - got.get(j, 0)
                if not mult:
                    continue
                for corr, d, extra in lift_corrections(t, j, m.restrict(j)):
                    if not extra:
                        continue
                    n = m * corr
                    slot = received[n]
                    slot[j] = slot.get(j, 0) + mult * d
                    levels[depth + extra].add(n)
        depth += 1
    result = CharPoly(coeff)
    if verify:
        _postconditions(t, result)
    return result


def _postconditions(t: TypeSpec, P: CharPoly) -> None:
    if not is_special(P):
        raise NotSpecial("result has more than one dominant monomial")
    if not screen(t, P):
        raise NotInKernel("result fails screening")


# ========== FOLDING ==========

def fold_param(t: TypeSpec, x: int, b: SpectralParam) -> Tuple[int, SpectralParam]:
    """Image of the parent variable Y_{x,b}: (twisted node, spectral parameter)"""
    if x not in t.parent.fold:
        raise TypeMismatch(f"node {x} is not a node of the parent of {t.name}")
    i, p = t.parent.fold[x]
    if t.is_a2n:
        return i, b.shift(phase=Fraction(p, 2))
    return i, b.shift(phase=Fraction(p, t.M)) ** t.d[i]


def fold_monomial(t: TypeSpec, m: Monomial) -> Monomial:
    if not t.is_twisted:
        return m
    exps: Dict[Tuple[int, SpectralParam], int] = {}
    for (x, b), e in m.items():
        var = fold_param(t, x, b)
        exps[var] = exps.get(var, 0) + e
    return Monomial(exps)


def fold_pi(t: TypeSpec, P: CharPoly) -> CharPoly:
    """Apply pi variable-wise to a character of the parent type"""
    return P.map_monomials(lambda m: fold_monomial(t, m))


def parent_param(t: TypeSpec, i: int, s: SpectralParam) -> Tuple[int, SpectralParam]:
    """Parent node and parameter whose KR module folds onto W^{(i)} at s"""
    if not t.is_twisted:
        return i, s
    x = t.parent.rep[i]
    if t.is_a2n:
        return x, s
    return x, s.roots(int(t.d[i]))[0]


# ========== KR CHARACTERS ==========

@lru_cache(maxsize=512)
def _fm_char(t: TypeSpec, i: int, k: int, s: SpectralParam, budget: int) -> CharPoly:
    progress(f"🔄 FM expansion of W({i}, k={k}) on {t.name}")
    return fm_expand(t, kr_highest(t, i, k, s), budget)


def _fold_char(t: TypeSpec, i: int, k: int, s: SpectralParam, budget: int) -> CharPoly:
    if not t.is_twisted:
        return _fm_char(t, i, k, s, budget)
    x, c = parent_param(t, i, s)
    return fold_pi(t, _fm_char(t.parent.spec, x, k, c, budget))


class _Bootstrap:
    """T-system bootstrap with a per-run memo"""

    def __init__(self, t: TypeSpec, budget: int):
        self.t = t
        self.budget = budget
        self.memo: Dict[Tuple[int, int, SpectralParam], CharPoly] = {}

    def char(self, i: int, k: int, s: SpectralParam) -> CharPoly:
        key = (i, k, s)
        if key in self.memo:
            return self.memo[key]
        if k == 0:
            value = CharPoly.one()
        elif k == 1:
            value = _fold_char(self.t, i, 1, s, self.budget)
        else:
            shifted = s.shift(q=2 * self.t.step(i))
            numerator = self.char(i, k - 1, s) * self.char(i, k - 1, shifted)
            numerator = numerator - s_term(self.t, i, k - 1, s, self.char)
            value = poly_div_exact(numerator, self.char(i, k - 2, shifted), self.budget)
        self.memo[key] = value
        return value


def s_term(t: TypeSpec, i: int, k: int, s: SpectralParam, char=None) -> CharPoly:
    """
    Correction term S_{k,s}^{(i)} of the T-system

    Args:
        char: callable (node, k, param) -> CharPoly used for the factors;
              defaults to the FOLD engine
    """
    t.check_node(i)
    if char is None:
        budget = settings.QCHAR_BUDGET
        char = lambda j, kk, c: _fold_char(t, j, kk, c, budget)  # noqa: E731
    kind = t.kind[i]
    result = CharPoly.one()
    if kind == NodeKind.SPECIAL:
        result = char(i, k, (-s).shift(q=1))
    for j in t.adj[i]:
        if kind == NodeKind.DIAG:
            shifted = s.shift(q=t.d[i])
            if t.fixed[j]:
                result = result * char(j, k, shifted)
            else:
                for root in shifted.roots(t.M):
                    result = result * char(j, k, root)
        elif kind == NodeKind.FREE and t.fixed[j] and t.is_twisted:
            result = result * char(j, k, s.shift(q=1) ** t.M)
        else:
            result = result * char(j, k, s.shift(q=1))
    return result


def kr_poly(t: TypeSpec, i: int, k: int, s: SpectralParam, engine: Engine = None, budget: Optional[int] = None) -> CharPoly:
    """Character of W_{k,s}^{(i)} from one engine, without postconditions"""
    t.check_node(i)
    kr_highest(t, i, k, s)
    engine = Engine(engine or settings.QCHAR_DEFAULT_ENGINE)
    budget = budget or settings.QCHAR_BUDGET
    if k == 0:
        return CharPoly.one()
    if engine == Engine.FM:
        return _fm_char(t, i, k, s, budget)
    if engine == Engine.FOLD:
        return _fold_char(t, i, k, s, budget)
    if engine == Engine.TSYS:
        return _Bootstrap(t, budget).char(i, k, s)
    if engine == Engine.TABLEAUX:
        from app.services.tableaux import tableaux_char

        return tableaux_char(t, i, k, s)
    return _all_engines(t, i, k, s, budget)


def _all_engines(t: TypeSpec, i: int, k: int, s: SpectralParam, budget: int) -> CharPoly:
    results: Dict[Engine, CharPoly] = {}
    for engine in (Engine.FOLD, Engine.TSYS, Engine.FM, Engine.TABLEAUX):
        try:
            results[engine] = kr_poly(t, i, k, s, engine, budget)
        except UnsupportedNode:
            continue
    reference = results[Engine.FOLD]
    for engine, P in results.items():
        if P != reference:
            raise EngineDisagreement(f"{engine.value} disagrees with fold on W({i}, k={k}) of {t.name}")
    progress(f"✅ {len(results)} engines agree on W({i}, k={k}) of {t.name}")
    return reference


def kr_char(
    t: TypeSpec,
    i: int,
    k: int,
    s: SpectralParam = SpectralParam(),
    engine: Engine = None,
    budget: Optional[int] = None,
    verify: bool = True,
) -> EngineReport:
    """
    Twisted q-character of the KR module W_{k,s}^{(i)}

    Returns:
        EngineReport; postconditions (highest monomial, special, screening)
        are checked when verify is set
    """
    engine = Engine(engine or settings.QCHAR_DEFAULT_ENGINE)
    P = kr_poly(t, i, k, s, engine, budget)
    report = EngineReport.build(t, P, engine)
    if verify:
        top = kr_highest(t, i, k, s)
        if report.dominant_list != [(top, 1)]:
            raise NotSpecial(f"W({i}, k={k}) of {t.name} does not have the single dominant monomial {top!r}")
        if not screen(t, P):
            raise NotInKernel(f"W({i}, k={k}) of {t.name} fails screening")
    return report


# ========== T-SYSTEM CHECKS ==========

def check_tsystem(
    t: TypeSpec,
    i: int,
    k: int,
    s: SpectralParam = SpectralParam(),
    engine: Engine = Engine.FOLD,
    budget: Optional[int] = None,
) -> TSystemResult:
    """W_k(s) W_k(s rho^2) = W_{k+1}(s) W_{k-1}(s rho^2) + S_k(s), computed with a non-bootstrap engine"""
    shifted = s.shift(q=2 * t.step(i))
    char = lambda j, kk, c: kr_poly(t, j, kk, c, engine, budget)  # noqa: E731
    lhs = char(i, k, s) * char(i, k, shifted)
    rhs = char(i, k + 1, s) * char(i, k - 1, shifted) + s_term(t, i, k, s, char)
    residual = lhs - rhs
    return TSystemResult(ok=not residual, residual=residual)


def ladder_monomials(t: TypeSpec, i: int, k: int, s: SpectralParam = SpectralParam()) -> List[Monomial]:
    """The k+1 dominant monomials of W_k(s) W_k(s rho^2), from the product of highest monomials down"""
    step = t.step(i)
    current = kr_highest(t, i, k, s) * kr_highest(t, i, k, s.shift(q=2 * step))
    ladder = [current]
    for u in range(1, k + 1):
        current = current * a_monomial(t, i, s.shift(q=step * (2 * k + 1 - 2 * u))).inverse()
        ladder.append(current)
    return ladder


def lowering_bound_holds(t: TypeSpec, i: int, k: int, s: SpectralParam, P: CharPoly) -> bool:
    """Every non-highest monomial is right-negative and below m_+ A^{-1}_{i, s q_i^{2k-1}}"""
    top = kr_highest(t, i, k, s)
    bound = top * a_monomial(t, i, s.shift(q=t.step(i) * (2 * k - 1))).inverse()
    for m in P.terms:
        if m == top:
            continue
        if not is_right_negative(t, m) or not is_below(t, m, bound):
            return False
    return True

"""
Node-local building blocks: string expansions, normal factorization of
locally dominant monomials and the direction decomposition behind screening
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from app.core.errors import NotInKernel, NotLocallyDominant, TypeMismatch
from app.services.cartan import NodeKind, TypeSpec
from app.services.symalg import (
    CharPoly,
    Monomial,
    SpectralParam,
    a_monomial,
    is_dominant,
    is_j_dominant,
    kr_highest,
    lowering_step,
    weight_height,
)


@dataclass(frozen=True)
class LocalString:
    node: int
    k: int
    s: SpectralParam

    def params(self, t: TypeSpec) -> List[SpectralParam]:
        spacing = 2 * t.step(self.node)
        return [self.s.shift(q=spacing * r) for r in range(self.k)]


# ========== STRING EXPANSIONS ==========

@lru_cache(maxsize=4096)
def string_corrections(t: TypeSpec, st: LocalString) -> Tuple[Tuple[Monomial, int], ...]:
    """(product of A^{-1} factors, depth) for every term of the string expansion"""
    i, k, s = st.node, st.k, st.s
    if t.kind[i] == NodeKind.SPECIAL:
        plus = [a_monomial(t, i, s.shift(q=2 * k + 1 - 2 * r)).inverse() for r in range(1, k + 1)]
        minus = [a_monomial(t, i, (-s).shift(q=2 * k + 2 - 2 * r)).inverse() for r in range(1, k + 1)]
        out = []
        left = Monomial.one()
        for R in range(k + 1):
            if R:
                left = left * plus[R - 1]
            right = Monomial.one()
            for Rp in range(R + 1):
                if Rp:
                    right = right * minus[Rp - 1]
                out.append((left * right, R + Rp))
        return tuple(out)
    step = lowering_step(t, i)
    out = [(Monomial.one(), 0)]
    current = Monomial.one()
    for u in range(1, k + 1):
        current = current * a_monomial(t, i, s.shift(q=step * (2 * k - 2 * u + 1))).inverse()
        out.append((current, u))
    return tuple(out)


def string_expand(t: TypeSpec, st: LocalString) -> CharPoly:
    """Character of the KR string: highest monomial times the nested A^{-1} ladder"""
    t.check_node(st.node)
    top = kr_highest(t, st.node, st.k, st.s)
    return CharPoly.sum_of(top * corr for corr, _ in string_corrections(t, st))


# ========== NORMAL FACTORIZATION ==========

def _runs(positions: Dict[Fraction, int], spacing: Fraction) -> List[Tuple[Fraction, int]]:
    """Peel maximal runs off a multiset of q-exponents: (start, length) pairs"""
    remaining = dict(positions)
    runs = []
    while remaining:
        support = sorted(remaining)
        start, length = support[0], 1
        for previous, current in zip(support, support[1:]):
            if current == previous + spacing:
                length += 1
            else:
                runs.append((start, length))
                start, length = current, 1
        runs.append((start, length))
        for q in support:
            remaining[q] -= 1
            if not remaining[q]:
                del remaining[q]
    return runs


def in_special_position(t: TypeSpec, first: LocalString, second: LocalString) -> bool:
    """True when the exponent-wise maximum of the two strings is a longer string"""
    a, b = set(first.params(t)), set(second.params(t))
    if a <= b or b <= a:
        return False
    merged = sorted(a | b)
    spacing = 2 * t.step(first.node)
    head = merged[0]
    return all(
        p.a == head.a and p.phase == head.phase and p.q == head.q + spacing * r
        for r, p in enumerate(merged)
    )


def _special_class(s: SpectralParam) -> Tuple:
    """b q^{2Z} and -b q^{2Z+1} share a class on the SPECIAL node"""
    parity = Fraction(int(s.q // 1) % 2, 2)
    return (s.a, (s.phase + parity) % 1, s.q % 1)


def _local_char(t: TypeSpec, st: LocalString) -> CharPoly:
    return string_expand(t, st).map_monomials(lambda m: m.restrict(st.node))


@lru_cache(maxsize=65536)
def normal_factorization(t: TypeSpec, i: int, mloc: Monomial) -> Tuple[LocalString, ...]:
    """
    Strings in general position whose highest monomials multiply to mloc

    Args:
        t: type data
        i: node carrying the local monomial
        mloc: i-dominant monomial supported on node i

    Returns:
        Strings in canonical order
    """
    if any(node != i for node in mloc.nodes):
        raise TypeMismatch(f"local monomial {mloc!r} has variables off node {i}")
    if not is_dominant(mloc):
        raise NotLocallyDominant(f"{mloc!r} is not dominant at node {i}")
    spacing = 2 * t.step(i)
    lines: Dict[Tuple, Dict[Fraction, int]] = {}
    for (_, s), e in mloc.items():
        key = (s.a, s.phase, s.q % spacing)
        lines.setdefault(key, {})[s.q] = e

    strings: List[LocalString] = []
    for (a, phase, _), positions in sorted(lines.items()):
        for start, length in _runs(positions, spacing):
            strings.append(LocalString(i, length, SpectralParam(a, phase, start)))

    if t.kind[i] == NodeKind.SPECIAL:
        classes: Dict[Tuple, List[LocalString]] = {}
        for st in strings:
            classes.setdefault(_special_class(st.s), []).append(st)
        for members in classes.values():
            if len({st.s.q % 2 for st in members}) > 1:
                _check_unique_local_dominant(t, i, members)
    else:
        for x in range(len(strings)):
            for y in range(x + 1, len(strings)):
                if in_special_position(t, strings[x], strings[y]):
                    raise NotLocallyDominant(f"strings of {mloc!r} are in special position")
    return tuple(strings)


def _check_unique_local_dominant(t: TypeSpec, i: int, members: List[LocalString]) -> None:
    product = CharPoly.one()
    for st in members:
        product = product * _local_char(t, st)
    dominant = [(m, c) for m, c in product.terms.items() if is_dominant(m)]
    if len(dominant) != 1 or dominant[0][1] != 1:
        raise NotLocallyDominant(f"strings on node {i} mixing sign lines are not in general position")


# ========== LOCAL LIFTS AND DIRECTION DECOMPOSITION ==========

@lru_cache(maxsize=65536)
def lift_corrections(t: TypeSpec, j: int, mloc: Monomial) -> Tuple[Tuple[Monomial, int, int], ...]:
    """(A^{-1} product, coefficient, depth) of L_j(m) / m, depending only on m^{(j)}"""
    terms: Dict[Monomial, Tuple[int, int]] = {Monomial.one(): (1, 0)}
    for st in normal_factorization(t, j, mloc):
        nxt: Dict[Monomial, Tuple[int, int]] = {}
        for corr, (c, depth) in terms.items():
            for piece, extra in string_corrections(t, st):
                key = corr * piece
                old = nxt.get(key, (0, depth + extra))
                nxt[key] = (old[0] + c, depth + extra)
        terms = nxt
    return tuple((m, c, depth) for m, (c, depth) in terms.items())


def local_lift(t: TypeSpec, j: int, m: Monomial) -> CharPoly:
    """L_j(m) for a j-dominant monomial m"""
    t.check_node(j)
    if not is_j_dominant(m, [j]):
        raise NotLocallyDominant(f"{m!r} is not {j}-dominant")
    return CharPoly({m * corr: c for corr, c, _ in lift_corrections(t, j, m.restrict(j))})


def decompose_direction(t: TypeSpec, P: CharPoly, j: int) -> List[Tuple[Monomial, int]]:
    """
    Write P as a positive combination of local lifts L_j(m')

    Raises NotInKernel when P is not in the j-th screening ring.
    """
    t.check_node(j)
    remainder = dict(P.terms)
    candidates = sorted(
        (m for m in remainder if is_j_dominant(m, [j])),
        key=lambda m: (weight_height(t, m), m),
        reverse=True,
    )
    blocks: List[Tuple[Monomial, int]] = []
    for m in candidates:
        c = remainder.get(m, 0)
        if not c:
            continue
        if c < 0:
            raise NotInKernel(f"negative coefficient {c} at {m!r} in direction {j}")
        blocks.append((m, c))
        for corr, d, _ in lift_corrections(t, j, m.restrict(j)):
            key = m * corr
            value = remainder.get(key, 0) - c * d
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    if remainder:
        raise NotInKernel(f"{len(remainder)} terms left in direction {j}")
    return blocks


def screen(t: TypeSpec, P: CharPoly) -> bool:
    """Membership in the intersection of all screening rings"""
    for j in t.nodes:
        try:
            decompose_direction(t, P, j)
        except (NotInKernel, NotLocallyDominant):
            return False
    return True

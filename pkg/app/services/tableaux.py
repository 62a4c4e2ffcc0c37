"""
Tableau formulas for KR characters

Boxes are monomials of the simply-laced parent; twisted characters are the
images of the parent sums under the folding map.
"""
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from app.core.errors import UnknownLetter, UnsupportedNode
from app.services.cartan import Family, TypeSpec
from app.services.qchar_engine import fold_monomial, parent_param
from app.services.symalg import CharPoly, Monomial, SpectralParam, a_monomial

Letter = int  # i for the letter i, -i for the barred letter


def letter_text(x: Letter) -> str:
    return str(x) if x > 0 else f"{-x}̄"


@dataclass(frozen=True)
class Tableau:
    rows: Tuple[Tuple[Letter, ...], ...]
    family: str
    node: int
    k: int

    def __str__(self) -> str:
        return " / ".join(" ".join(letter_text(x) for x in row) for row in self.rows)


# ========== PARENT BOXES ==========

def _y(node: int, c: SpectralParam, q: int, e: int) -> Dict:
    return {(node, c.shift(q=q)): e}


def a_box(N: int, x: Letter, c: SpectralParam) -> Monomial:
    """Box of the vector representation of A_N: Y_{x-1, cq^x}^{-1} Y_{x, cq^{x-1}}"""
    if not 1 <= x <= N + 1:
        raise UnknownLetter(f"letter {x} not in 1..{N + 1}")
    exps = {}
    if x - 1 >= 1:
        exps.update(_y(x - 1, c, x, -1))
    if x <= N:
        exps.update(_y(x, c, x - 1, 1))
    return Monomial(exps)


def d_box(N: int, x: Letter, c: SpectralParam) -> Monomial:
    """Box of the vector representation of D_N, letters 1..N and their bars"""
    if x == 0 or abs(x) > N:
        raise UnknownLetter(f"letter {x} not in the D_{N} alphabet")
    exps: Dict = {}

    def put(node: int, q: int, e: int) -> None:
        if node >= 1:
            exps[(node, c.shift(q=q))] = exps.get((node, c.shift(q=q)), 0) + e

    if 1 <= x <= N - 2:
        put(x - 1, x, -1)
        put(x, x - 1, 1)
    elif x == N - 1:
        put(N - 2, N - 1, -1)
        put(N - 1, N - 2, 1)
        put(N, N - 2, 1)
    elif x == N:
        put(N - 1, N, -1)
        put(N, N - 2, 1)
    elif x == -N:
        put(N, N, -1)
        put(N - 1, N - 2, 1)
    elif x == -(N - 1):
        put(N - 1, N, -1)
        put(N, N, -1)
        put(N - 2, N - 1, 1)
    else:
        i = -x
        put(i, 2 * N - 1 - i, -1)
        put(i - 1, 2 * N - 2 - i, 1)
    return Monomial(exps)


def d_rank(N: int, x: Letter) -> int:
    """Position in 1 < ... < N-1 < {N, N-bar} < (N-1)-bar < ... < 1-bar"""
    if x > 0:
        return x
    return N if x == -N else 2 * N + x


def d_leq(N: int, x: Letter, y: Letter) -> bool:
    return x == y or d_rank(N, x) < d_rank(N, y)


def d_alphabet(N: int) -> List[Letter]:
    return list(range(1, N + 1)) + [-i for i in range(N, 0, -1)]


# ========== PLANS ==========

@dataclass(frozen=True)
class _Plan:
    parent: TypeSpec
    x: int
    shape: str  # "A", "Drow", "Dcol", "D4two", "spin"
    rows: int
    cols: int
    relabel: Tuple[Tuple[int, int], ...] = ()

    def box(self, letter: Letter, c: SpectralParam) -> Monomial:
        N = self.parent.rank
        m = a_box(N, letter, c) if self.shape == "A" else d_box(N, letter, c)
        if not self.relabel:
            return m
        swap = dict(self.relabel)
        return Monomial({(swap.get(node, node), s): e for (node, s), e in m.items()})


def _untwisted_plan(parent: TypeSpec, x: int, k: int) -> _Plan:
    N = parent.rank
    if parent.letter == "A":
        return _Plan(parent, x, "A", x, k)
    if parent.letter != "D":
        raise UnsupportedNode(f"no tableau formula for {parent.name}")
    if x == 1:
        return _Plan(parent, x, "Drow", 1, k)
    if N == 4 and x == 2:
        return _Plan(parent, x, "D4two", 2, k)
    if N == 4 and x in (3, 4):
        return _Plan(parent, x, "Drow", 1, k, relabel=((1, x), (x, 1)))
    if x <= N - 2 and k == 1:
        return _Plan(parent, x, "Dcol", x, 1)
    if x >= N - 1 and k == 1:
        return _Plan(parent, x, "spin", 1, 1)
    raise UnsupportedNode(f"no tableau formula for node {x}, k={k} of {parent.name}")


def _plan(t: TypeSpec, i: int, k: int) -> _Plan:
    t.check_node(i)
    if t.family == Family.E6:
        raise UnsupportedNode("no tableau formula for E6^(2)")
    if not t.is_twisted:
        return _untwisted_plan(t, i, k)
    return _untwisted_plan(t.parent.spec, t.parent.rep[i], k)


def supports(t: TypeSpec, i: int, k: int) -> bool:
    try:
        _plan(t, i, k)
    except UnsupportedNode:
        return False
    return True


# ========== ENUMERATION ==========

def _theta_two_column(top: Sequence[Letter], bottom: Sequence[Letter], j: int) -> bool:
    """True when column j together with an earlier column forms a forbidden pair"""
    for jp in range(j):
        if top[jp] == 3 and bottom[jp] == 4 and top[j] == 4 and bottom[j] == -3:
            return True
        if top[jp] == 3 and bottom[jp] == -4 and top[j] == -4 and bottom[j] == -3:
            return True
    return False


def _fill(
    rows: int,
    cols: int,
    letters: Sequence[Letter],
    row_ok: Callable[[Letter, Letter], bool],
    col_ok: Callable[[Letter, Letter], bool],
    column_done: Optional[Callable[[List[List[Letter]], int], bool]] = None,
) -> Iterator[Tuple[Tuple[Letter, ...], ...]]:
    """Column-by-column backtracking over rows x cols arrays"""
    grid: List[List[Letter]] = [[0] * cols for _ in range(rows)]

    def place(cell: int) -> Iterator[Tuple[Tuple[Letter, ...], ...]]:
        if cell == rows * cols:
            yield tuple(tuple(row) for row in grid)
            return
        j, r = divmod(cell, rows)
        for x in letters:
            if j and not row_ok(grid[r][j - 1], x):
                continue
            if r and not col_ok(grid[r - 1][j], x):
                continue
            grid[r][j] = x
            if r == rows - 1 and column_done is not None and not column_done(grid, j):
                continue
            yield from place(cell + 1)

    yield from place(0)


def _spin_columns(N: int, x: int) -> Iterator[Tuple[Letter, ...]]:
    """Columns i_1 < ... < i_N holding one of p, p-bar each; the barred count is even for node N, odd for N-1"""
    parity = 1 if x == N - 1 else 0
    for signs in product((1, -1), repeat=N):
        if sum(1 for s in signs if s < 0) % 2 == parity:
            letters = (s * (p + 1) for p, s in enumerate(signs))
            yield tuple(sorted(letters, key=lambda y: d_rank(N, y)))


def _arrays(plan: _Plan) -> Iterator[Tuple[Tuple[Letter, ...], ...]]:
    N = plan.parent.rank
    if plan.shape == "A":
        yield from _fill(plan.rows, plan.cols, range(1, N + 2), lambda a, b: a <= b, lambda a, b: a < b)
    elif plan.shape == "Drow":
        yield from _fill(1, plan.cols, d_alphabet(N), lambda a, b: d_leq(N, a, b), lambda a, b: True)
    elif plan.shape == "Dcol":
        yield from _fill(plan.rows, 1, d_alphabet(N), lambda a, b: True, lambda a, b: not d_leq(N, b, a))
    elif plan.shape == "D4two":
        yield from _fill(
            2, plan.cols, d_alphabet(4),
            lambda a, b: d_leq(4, a, b),
            lambda a, b: not d_leq(4, b, a),
            lambda grid, j: not _theta_two_column(grid[0], grid[1], j),
        )
    else:
        for column in _spin_columns(N, plan.x):
            yield (column,)


def enumerate_tableaux(t: TypeSpec, node: int, k: int) -> Iterator[Tableau]:
    """Admissible tableaux of W^{(node)}_k, each once, in a fixed order"""
    plan = _plan(t, node, k)
    for rows in _arrays(plan):
        yield Tableau(rows=rows, family=t.name, node=node, k=k)


# ========== MONOMIALS AND CHARACTERS ==========

def minuscule_char(parent: TypeSpec, node: int, c: SpectralParam) -> CharPoly:
    """
    q-character of a minuscule fundamental module of an untwisted type

    Walks down from Y_{node,c}: every variable Y_{j,b} with exponent 1 is
    lowered by A^{-1}_{j,bq}. Each monomial appears once.
    """
    parent.check_node(node)
    start = Monomial.var(node, c)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for (j, b), e in m.items():
                if e == 1:
                    n = m * a_monomial(parent, j, b.shift(q=1)).inverse()
                    if n not in seen:
                        seen.add(n)
                        nxt.append(n)
        frontier = nxt
    return CharPoly.sum_of(seen)


def spin_column(N: int, signs: Sequence[Letter], c: SpectralParam) -> Monomial:
    """
    Monomial of a D_N spin column, given as one letter of each pair {p, p-bar}

    Half boxes telescope into one variable per node: the sign pair at
    positions (j, j+1) gives Y_j^{+1} for (+, -) and Y_j^{-1} for (-, +), the
    pair at (N-1, N) gives Y_N^{+1} for (+, +) and Y_N^{-1} for (-, -). A node
    j <= N-2 sits at c q^{N-1-j+2u}, nodes N-1 and N at c q^{2u}, where u
    counts the barred letters among the first min(j, N-1) positions.
    """
    if len(signs) != N or sorted(abs(x) for x in signs) != list(range(1, N + 1)):
        raise UnknownLetter(f"{[letter_text(x) for x in signs]} is not a spin column of D_{N}")
    plus = [x > 0 for x in sorted(signs, key=abs)]
    barred = [0]
    for p in plus:
        barred.append(barred[-1] + (not p))
    exps: Dict = {}
    for j in range(1, N):
        e = int(plus[j - 1]) - int(plus[j])
        if e:
            q = N - 1 - j + 2 * barred[j] if j <= N - 2 else 2 * barred[N - 1]
            exps[(j, c.shift(q=q))] = e
    if plus[N - 2] == plus[N - 1]:
        exps[(N, c.shift(q=2 * barred[N - 1]))] = 1 if plus[N - 1] else -1
    return Monomial(exps)


def parent_monomial(plan: _Plan, T: Tableau, c: SpectralParam) -> Monomial:
    if plan.shape == "spin":
        return spin_column(plan.parent.rank, T.rows[0], c)
    result = Monomial.one()
    r = plan.rows
    for rho, row in enumerate(T.rows, start=1):
        for j, letter in enumerate(row, start=1):
            result = result * plan.box(letter, c.shift(q=r - 1 + 2 * (j - rho)))
    return result


def tableau_monomial(t: TypeSpec, T: Tableau, s: SpectralParam = SpectralParam()) -> Monomial:
    plan = _plan(t, T.node, T.k)
    _, c = parent_param(t, T.node, s)
    return fold_monomial(t, parent_monomial(plan, T, c))


def tableaux_char(t: TypeSpec, node: int, k: int, s: SpectralParam = SpectralParam()) -> CharPoly:
    """Sum of tableau monomials for W^{(node)}_{k,s}"""
    if k == 0:
        return CharPoly.one()
    plan = _plan(t, node, k)
    _, c = parent_param(t, node, s)
    return CharPoly.sum_of(
        fold_monomial(t, parent_monomial(plan, T, c)) for T in enumerate_tableaux(t, node, k)
    )


def box(t: TypeSpec, letter: Letter, s: SpectralParam = SpectralParam(), node: Optional[int] = None) -> Monomial:
    """
    Published box monomial of a letter

    Args:
        t: type; the alphabet is the one used for `node`
        letter: i or -i (barred)
        s: box parameter, given on the parent side
        node: node whose tableau family fixes the alphabet (default: first node)
    """
    node = t.nodes[0] if node is None else node
    plan = _plan(t, node, 1)
    if plan.shape == "spin":
        raise UnknownLetter("spin columns are not built from boxes")
    return fold_monomial(t, plan.box(letter, s))


# ========== EXCLUSION RULES ==========

def _theta_window(top: Sequence[Letter], bottom: Sequence[Letter]) -> bool:
    """Windowed form: columns j..j' reading (3..3,4 over 4,3b..3b) or with 4b"""
    k = len(top)
    for j in range(k):
        for jp in range(j + 1, k):
            for four in (4, -4):
                if (
                    all(top[x] == 3 for x in range(j, jp)) and top[jp] == four
                    and bottom[j] == four and all(bottom[x] == -3 for x in range(j + 1, jp + 1))
                ):
                    return True
    return False


def theta_equivalence_check(k: int) -> bool:
    """Windowed and two-column exclusion rules select the same two-row D4 arrays"""
    base = list(_fill(2, k, d_alphabet(4), lambda a, b: d_leq(4, a, b), lambda a, b: not d_leq(4, b, a)))
    windowed = {T for T in base if not _theta_window(T[0], T[1])}
    two_column = {
        T for T in base
        if not any(_theta_two_column(T[0], T[1], j) for j in range(k))
    }
    return windowed == two_column

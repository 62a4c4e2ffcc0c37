"""
Command line interface

Usage:
    python -m app.cli qchar --type A2-2 --node 0 --k 2
    python -m app.cli tsystem --type D4-3 --node 2 --k 1
    python -m app.cli fermionic --type A4-2 --nu 1:1:1
"""
import functools
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import click

from app.core.config import settings
from app.core.console import progress
from app.core.errors import ParseError, QCharError, UnsupportedNode
from app.schemas.finite import BranchDocument, DimensionRow, DimensionTable, FermionicDocument, QSystemDocument
from app.schemas.qchar import (
    DominantsDocument,
    EngineReportDocument,
    SweepDocument,
    TableauListDocument,
    VerdictDocument,
)
from app.services import codec
from app.services.cartan import Lattice, TypeSpec, parse_type, supported_types
from app.services.elementary import screen
from app.services.fermionic import Mode, RootProduct, check_kr, parse_nu
from app.services.finitechar import (
    branch,
    check_qsystem,
    published_branching,
    restricted_char,
    type_root_data,
    weyl_dimension,
)
from app.services.qchar_engine import (
    Engine,
    check_tsystem,
    dominant_monomials,
    kr_char,
    kr_poly,
    ladder_monomials,
)
from app.services.symalg import SpectralParam
from app.services.tableaux import enumerate_tableaux, tableaux_char

EXIT_FAILED = 1


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}")


def spectral(shift: str, phase: str) -> SpectralParam:
    """s = a e^{2 pi i phase} q^{shift}; shift may be written q^<p/q>"""
    body = shift.strip()
    if body.startswith("q^"):
        body = body[2:]
    return SpectralParam(1, parse_rational(phase), parse_rational(body))


def guarded(command: Callable) -> Callable:
    """Map engine errors to exit codes"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except QCharError as e:
            click.echo(f"❌ {e.__class__.__name__}: {e.message}", err=True)
            sys.exit(e.exit_code)

    return wrapper


def job_options(command: Callable) -> Callable:
    options = [
        click.option("--type", "type_label", required=True, help="A2-2, A2n-2:<n>, A2n-1-2:<n>, Dn1-2:<n>, E6-2, D4-3, untwisted:<X><n>"),
        click.option("--node", type=int, default=None, help="Node id (default: first node)"),
        click.option("--k", type=int, default=1, show_default=True, help="KR length"),
        click.option("--shift", default="0", show_default=True, help="q-power of s, e.g. q^3/2"),
        click.option("--phase", default="0", show_default=True, help="Phase of s as a fraction of a turn"),
        click.option("--engine", type=click.Choice(settings.ENGINE_CHOICES), default=None, help="Character engine"),
        click.option("--format", "fmt", type=click.Choice([f.value for f in codec.Format]), default="text", show_default=True),
        click.option("--budget", type=int, default=None, help="Monomial cap (overrides QCHAR_BUDGET)"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def side_option(command: Callable) -> Callable:
    return click.option("--side", type=click.Choice([s.value for s in Lattice]), default="tilde", show_default=True)(command)


def _setup(type_label: str, node: Optional[int]) -> Tuple[TypeSpec, int]:
    t = parse_type(type_label)
    node = t.nodes[0] if node is None else t.check_node(node)
    return t, node


def _emit(doc, fmt: str, text: str, latex: Optional[str] = None) -> None:
    click.echo(codec.emit(doc, fmt, text=text, latex=latex))


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Progress lines on stderr")
def cli(verbose: bool) -> None:
    """Twisted q-characters of Kirillov-Reshetikhin modules"""
    if verbose:
        settings.QCHAR_VERBOSE = True


# ========== CHARACTER COMMANDS ==========

@cli.command()
@job_options
@guarded
def qchar(type_label, node, k, shift, phase, engine, fmt, budget):
    """q-character of W^{(node)}_{k,s}"""
    t, node = _setup(type_label, node)
    report = kr_char(t, node, k, spectral(shift, phase), engine, budget)
    doc = EngineReportDocument(
        type=t.name,
        node=node,
        k=k,
        engine=report.engine.value,
        dimension=report.dimension,
        distinct_monomials=report.distinct_monomials,
        special=report.special,
        dominant=codec.char_terms(report.dominant_list),
        character=codec.char_document(report.character),
    )
    text = "\n".join([
        f"{t.name} node {node} k={k} engine={report.engine.value}",
        f"dimension {report.dimension}, {report.distinct_monomials} distinct monomials",
        repr(report.character),
    ])
    _emit(doc, fmt, text, report.character.latex())


@cli.command()
@job_options
@click.option("--chars", is_flag=True, help="Emit the summed character instead of the tableau list")
@guarded
def tableaux(type_label, node, k, shift, phase, engine, fmt, budget, chars):
    """Tableaux of W^{(node)}_k or their character"""
    t, node = _setup(type_label, node)
    if chars:
        P = tableaux_char(t, node, k, spectral(shift, phase))
        _emit(codec.char_document(P), fmt, repr(P), P.latex())
        return
    found = list(enumerate_tableaux(t, node, k))
    doc = TableauListDocument(
        type=t.name, node=node, k=k, count=len(found),
        tableaux=[codec.tableau_document(T) for T in found],
    )
    text = "\n".join([f"{len(found)} tableaux"] + [str(T) for T in found])
    latex = "\n".join(codec.tableau_latex(T) for T in found)
    _emit(doc, fmt, text, latex)


def _tsystem_verdict(t: TypeSpec, node: int, k: int, s: SpectralParam, engine: Engine, budget: Optional[int]) -> VerdictDocument:
    result = check_tsystem(t, node, k, s, engine, budget)
    return VerdictDocument(
        ok=result.ok, check="tsystem", type=t.name, node=node, k=k,
        residual=codec.char_document(result.residual),
    )


def _tsystem_job(label: str, node: int, k: int, shift: str, phase: str, engine: str, budget: Optional[int]) -> VerdictDocument:
    return _tsystem_verdict(parse_type(label), node, k, spectral(shift, phase), Engine(engine), budget)


@cli.command()
@job_options
@click.option("--sweep", is_flag=True, help="Check every node for k = 1..K")
@guarded
def tsystem(type_label, node, k, shift, phase, engine, fmt, budget, sweep):
    """T-system identity for W^{(node)}_k"""
    t, node = _setup(type_label, node)
    engine = Engine(engine or Engine.FOLD)
    if sweep:
        job = functools.partial(_tsystem_job, t.name, shift=shift, phase=phase, engine=engine.value, budget=budget)
        pairs = [(i, kk) for i in t.nodes for kk in range(1, k + 1)]
        if settings.QCHAR_WORKERS > 1:
            with ProcessPoolExecutor(max_workers=settings.QCHAR_WORKERS) as executor:
                results = list(executor.map(job, *zip(*pairs)))
        else:
            results = [job(i, kk) for i, kk in pairs]
        doc = SweepDocument(ok=all(r.ok for r in results), check="tsystem", type=t.name, results=results)
        text = "\n".join(f"{'✅' if r.ok else '❌'} node {r.node} k={r.k}" for r in results)
        _emit(doc, fmt, text)
        if not doc.ok:
            sys.exit(EXIT_FAILED)
        return
    doc = _tsystem_verdict(t, node, k, spectral(shift, phase), engine, budget)
    text = "✅ T-system holds" if doc.ok else f"❌ residual: {codec.char_from_document(doc.residual)!r}"
    _emit(doc, fmt, text)
    if not doc.ok:
        sys.exit(EXIT_FAILED)


@cli.command()
@job_options
@guarded
def dominants(type_label, node, k, shift, phase, engine, fmt, budget):
    """Dominant monomials of W_k(s) W_k(s rho^2) against the ladder"""
    t, node = _setup(type_label, node)
    s = spectral(shift, phase)
    shifted = s.shift(q=2 * t.step(node))
    product = kr_poly(t, node, k, s, engine, budget) * kr_poly(t, node, k, shifted, engine, budget)
    found = dominant_monomials(product, t)
    ladder = ladder_monomials(t, node, k, s)
    matches = sorted(found) == sorted((m, 1) for m in ladder)
    doc = DominantsDocument(
        type=t.name, node=node, k=k,
        dominant=codec.char_terms(found),
        ladder=codec.char_terms((m, 1) for m in ladder),
        matches_ladder=matches,
    )
    text = "\n".join([f"{c} * {m!r}" for m, c in found] + ["✅ matches the ladder" if matches else "❌ differs from the ladder"])
    _emit(doc, fmt, text)
    if not matches:
        sys.exit(EXIT_FAILED)


@cli.command("screen")
@click.option("--type", "type_label", required=True)
@click.option("--input", "source", type=click.File("r"), default="-", help="JSON character document (default stdin)")
@guarded
def screen_command(type_label, source):
    """Screening test of a character document"""
    t = parse_type(type_label)
    P = codec.parse_char(source.read())
    ok = screen(t, P)
    click.echo("✅ in every screening kernel" if ok else "❌ screening failed")
    if not ok:
        sys.exit(EXIT_FAILED)


# ========== FINITE-TYPE COMMANDS ==========

@cli.command()
@job_options
@side_option
@guarded
def qsystem(type_label, node, k, shift, phase, engine, fmt, budget, side):
    """Q-system identity on restricted characters"""
    t, node = _setup(type_label, node)
    result = check_qsystem(t, node, k, Lattice(side), engine, budget)
    doc = QSystemDocument(
        ok=result.ok, type=t.name, node=node, k=k, side=side,
        residual=codec.finite_char_document(result.residual),
    )
    _emit(doc, fmt, "✅ Q-system holds" if result.ok else f"❌ residual: {result.residual!r}")
    if not result.ok:
        sys.exit(EXIT_FAILED)


@cli.command("branch")
@job_options
@side_option
@guarded
def branch_command(type_label, node, k, shift, phase, engine, fmt, budget, side):
    """Decompose the restricted KR character into simple modules"""
    t, node = _setup(type_label, node)
    side = Lattice(side)
    rd = type_root_data(t, side)
    computed = [(w.coords, c) for w, c in branch(rd, restricted_char(t, node, k, side, engine, budget))]
    try:
        published = published_branching(t, node, k, side)
    except UnsupportedNode:
        published = None
    ok = None if published is None else computed == published
    doc = BranchDocument(
        type=t.name, node=node, k=k, side=side.value,
        computed=codec.weight_terms(computed),
        published=None if published is None else codec.weight_terms(published),
        ok=ok,
    )
    lines = [f"{c} x V{list(w)}" for w, c in computed]
    if ok is not None:
        lines.append("✅ matches the closed decomposition" if ok else "❌ differs from the closed decomposition")
    _emit(doc, fmt, "\n".join(lines))
    if ok is False:
        sys.exit(EXIT_FAILED)


@cli.command()
@click.option("--type", "type_label", required=True)
@click.option("--nu", multiple=True, required=True, help="node:k:count, repeatable")
@click.option("--mode", type=click.Choice([m.value for m in Mode]), default="auto", show_default=True)
@click.option("--delta", type=click.Choice([d.value for d in RootProduct]), default="parent", show_default=True)
@click.option("--classical", is_flag=True, help="Binomials vanish outside 0 <= b <= a")
@click.option("--engine", type=click.Choice(settings.ENGINE_CHOICES), default=None)
@click.option("--format", "fmt", type=click.Choice([f.value for f in codec.Format]), default="text")
@side_option
@guarded
def fermionic(type_label, nu, mode, delta, classical, engine, fmt, side):
    """Fermionic identity for a product of KR modules"""
    t = parse_type(type_label)
    nu_vector = parse_nu(nu)
    result = check_kr(t, nu_vector, Lattice(side), Mode(mode), RootProduct(delta), engine, classical)
    doc = FermionicDocument(
        ok=result.ok, type=t.name,
        nu=[[i, k, c] for (i, k), c in sorted(nu_vector.items())],
        side=side, mode=result.mode.value,
        residual=codec.finite_char_document(result.residual),
        multiplicities=codec.weight_terms(result.multiplicities.items()),
    )
    text = f"{'✅' if result.ok else '❌'} fermionic identity ({result.mode.value})"
    _emit(doc, fmt, text)
    if not result.ok:
        sys.exit(EXIT_FAILED)


def expected_dimension(t: TypeSpec, node: int) -> Optional[int]:
    """Dimension of the fundamental module from its closed decomposition"""
    try:
        parts = published_branching(t, node, 1)
    except UnsupportedNode:
        return None
    rd = type_root_data(t)
    return sum(c * weyl_dimension(rd, w) for w, c in parts)


@cli.command()
@click.option("--max-rank", type=int, default=3, show_default=True)
@click.option("--engine", type=click.Choice(settings.ENGINE_CHOICES), default=None)
@click.option("--format", "fmt", type=click.Choice([f.value for f in codec.Format]), default="text")
@guarded
def dims(max_rank, engine, fmt):
    """Dimension table of all fundamental modules"""
    rows: List[DimensionRow] = []
    for t in supported_types(max_rank):
        for i in t.nodes:
            progress(f"🔄 {t.name} node {i}")
            dimension = kr_poly(t, i, 1, SpectralParam(), engine).dimension
            rows.append(DimensionRow(type=t.name, node=i, dimension=dimension, expected=expected_dimension(t, i)))
    text = "\n".join(
        f"{row.type:>8} node {row.node}: {row.dimension}"
        + ("" if row.expected is None else f" (expected {row.expected})")
        for row in rows
    )
    _emit(DimensionTable(rows=rows), fmt, text)
    if any(row.expected is not None and row.expected != row.dimension for row in rows):
        sys.exit(EXIT_FAILED)


if __name__ == "__main__":
    cli()

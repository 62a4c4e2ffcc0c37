"""
Conversion between engine values and wire documents (text, json, latex)
"""
from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ValidationError

from app.core.errors import ParseError
from app.schemas.finite import FiniteCharDocument, WeightTerm
from app.schemas.qchar import CharacterDocument, CharTerm, MonomialFactor, TableauDocument
from app.services.cartan import Lattice
from app.services.symalg import CharPoly, FiniteChar, Monomial, SpectralParam
from app.services.tableaux import Tableau


class Format(str, Enum):
    TEXT = "text"
    JSON = "json"
    LATEX = "latex"


def _pair(x: Fraction) -> List[int]:
    return [x.numerator, x.denominator]


def _frac(pair: List[int]) -> Fraction:
    if pair[1] == 0:
        raise ParseError(f"zero denominator in {pair}")
    return Fraction(pair[0], pair[1])


# ========== CHARACTERS ==========

def monomial_factors(m: Monomial) -> List[MonomialFactor]:
    return [
        MonomialFactor(node=node, a=_pair(s.a), phase=_pair(s.phase), q=_pair(s.q), exp=e)
        for (node, s), e in m.items()
    ]


def monomial_from(factors: List[MonomialFactor]) -> Monomial:
    exps = {}
    for f in factors:
        var = (f.node, SpectralParam(_frac(f.a), _frac(f.phase), _frac(f.q)))
        exps[var] = exps.get(var, 0) + f.exp
    return Monomial(exps)


def char_terms(pairs) -> List[CharTerm]:
    return [CharTerm(coeff=str(c), monomial=monomial_factors(m)) for m, c in pairs]


def char_document(P: CharPoly) -> CharacterDocument:
    return CharacterDocument(terms=char_terms(P.items_sorted()))


def char_from_document(doc: CharacterDocument) -> CharPoly:
    terms = {}
    for term in doc.terms:
        try:
            c = int(term.coeff)
        except ValueError:
            raise ParseError(f"bad coefficient {term.coeff!r}")
        m = monomial_from(term.monomial)
        terms[m] = terms.get(m, 0) + c
    return CharPoly(terms)


def parse_char(payload: str) -> CharPoly:
    """Read a character from its JSON document"""
    try:
        doc = CharacterDocument.model_validate_json(payload)
    except ValidationError as e:
        raise ParseError(f"invalid character document: {e.error_count()} errors")
    return char_from_document(doc)


# ========== FINITE CHARACTERS ==========

def weight_terms(pairs) -> List[WeightTerm]:
    return [WeightTerm(weight=list(w), coeff=str(c)) for w, c in pairs]


def finite_char_document(chi: FiniteChar) -> FiniteCharDocument:
    return FiniteCharDocument(
        lattice=chi.lattice.value,
        rank=chi.rank,
        terms=weight_terms(sorted(chi.terms.items(), reverse=True)),
    )


def parse_finite_char(payload: str) -> FiniteChar:
    try:
        doc = FiniteCharDocument.model_validate_json(payload)
        lattice = Lattice(doc.lattice)
        terms = {}
        for term in doc.terms:
            if len(term.weight) != doc.rank:
                raise ParseError(f"weight {term.weight} does not have rank {doc.rank}")
            key = tuple(term.weight)
            terms[key] = terms.get(key, 0) + int(term.coeff)
    except (ValidationError, ValueError) as e:
        raise ParseError(f"invalid finite character document: {e}")
    return FiniteChar(lattice, doc.rank, terms)


# ========== TABLEAUX ==========

def tableau_document(T: Tableau) -> TableauDocument:
    return TableauDocument(rows=[list(row) for row in T.rows], family=T.family, node=T.node, k=T.k)


def parse_tableau(payload: str) -> Tableau:
    try:
        doc = TableauDocument.model_validate_json(payload)
    except ValidationError as e:
        raise ParseError(f"invalid tableau document: {e.error_count()} errors")
    return Tableau(rows=tuple(tuple(row) for row in doc.rows), family=doc.family, node=doc.node, k=doc.k)


def tableau_latex(T: Tableau) -> str:
    def cell(x: int) -> str:
        return str(x) if x > 0 else f"\\bar{{{-x}}}"

    body = " \\\\ ".join(" & ".join(cell(x) for x in row) for row in T.rows)
    return f"\\begin{{array}}{{{'c' * len(T.rows[0])}}} {body} \\end{{array}}"


# ========== EMISSION ==========

def emit(doc: BaseModel, fmt: Format, text: Optional[str] = None, latex: Optional[str] = None) -> str:
    """
    Serialize a document

    Args:
        doc: pydantic document, used for json
        fmt: output format
        text: human-readable rendering
        latex: latex rendering (falls back to text)
    """
    fmt = Format(fmt)
    if fmt == Format.JSON:
        return doc.model_dump_json(indent=2)
    if fmt == Format.LATEX and latex is not None:
        return latex
    return text if text is not None else doc.model_dump_json(indent=2)

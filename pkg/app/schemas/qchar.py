"""
Wire documents for q-characters and engine reports
"""
from pydantic import BaseModel, Field
from typing import List, Optional


class MonomialFactor(BaseModel):
    node: int
    a: List[int] = Field(..., min_length=2, max_length=2, description="Exponent of a as [p, q]")
    phase: List[int] = Field(..., min_length=2, max_length=2, description="Phase mod 1 as [p, q]")
    q: List[int] = Field(..., min_length=2, max_length=2, description="Exponent of q as [p, q]")
    exp: int


class CharTerm(BaseModel):
    coeff: str  # decimal string
    monomial: List[MonomialFactor] = Field(default_factory=list)


class CharacterDocument(BaseModel):
    terms: List[CharTerm] = Field(default_factory=list)


class EngineReportDocument(BaseModel):
    type: str
    node: int
    k: int
    engine: str
    dimension: int
    distinct_monomials: int
    special: bool
    dominant: List[CharTerm] = Field(default_factory=list)
    character: CharacterDocument


class VerdictDocument(BaseModel):
    ok: bool
    check: str
    type: str
    node: Optional[int] = None
    k: Optional[int] = None
    residual: CharacterDocument = Field(default_factory=CharacterDocument)


class DominantsDocument(BaseModel):
    type: str
    node: int
    k: int
    dominant: List[CharTerm]
    ladder: List[CharTerm]
    matches_ladder: bool


class TableauDocument(BaseModel):
    rows: List[List[int]]
    family: str
    node: int
    k: int


class TableauListDocument(BaseModel):
    type: str
    node: int
    k: int
    count: int
    tableaux: List[TableauDocument]


class SweepDocument(BaseModel):
    ok: bool
    check: str
    type: str
    results: List[VerdictDocument] = Field(default_factory=list)

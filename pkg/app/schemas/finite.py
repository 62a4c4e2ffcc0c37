"""
Wire documents for finite characters, branching and fermionic checks
"""
from pydantic import BaseModel, Field
from typing import List, Optional


class WeightTerm(BaseModel):
    weight: List[int]
    coeff: str  # decimal string


class FiniteCharDocument(BaseModel):
    lattice: str
    rank: int
    terms: List[WeightTerm] = Field(default_factory=list)


class BranchDocument(BaseModel):
    type: str
    node: int
    k: int
    side: str
    computed: List[WeightTerm]
    published: Optional[List[WeightTerm]] = None
    ok: Optional[bool] = None


class QSystemDocument(BaseModel):
    ok: bool
    type: str
    node: int
    k: int
    side: str
    residual: FiniteCharDocument


class FermionicDocument(BaseModel):
    ok: bool
    type: str
    nu: List[List[int]] = Field(..., description="[node, k, count] triples")
    side: str
    mode: str
    residual: FiniteCharDocument
    multiplicities: List[WeightTerm] = Field(default_factory=list)


class DimensionRow(BaseModel):
    type: str
    node: int
    dimension: int
    expected: Optional[int] = None


class DimensionTable(BaseModel):
    rows: List[DimensionRow]

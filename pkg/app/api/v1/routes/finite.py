"""
API routes for finite-type checks: branching, Q-system and fermionic formulas
"""
from fastapi import APIRouter, Depends, Query
from typing import List, Optional

from app.api.dependencies import get_type, resolve_node
from app.core.errors import UnsupportedNode
from app.schemas.finite import BranchDocument, FermionicDocument, QSystemDocument
from app.services import codec
from app.services.cartan import Lattice, TypeSpec
from app.services.fermionic import Mode, RootProduct, check_kr, parse_nu
from app.services.finitechar import branch, check_qsystem, published_branching, restricted_char, type_root_data


router = APIRouter(prefix="/finite", tags=["Finite characters"])


# ========== BRANCHING ENDPOINTS ==========

@router.get("/branch", response_model=BranchDocument)
def get_branch(
    t: TypeSpec = Depends(get_type),
    node: Optional[int] = Query(None),
    k: int = Query(1, ge=0),
    side: Lattice = Query(Lattice.TILDE, description="tilde | bar"),
):
    """Decomposition of the restricted KR character"""
    node = resolve_node(t, node)
    computed = [(w.coords, c) for w, c in branch(type_root_data(t, side), restricted_char(t, node, k, side))]
    try:
        published = published_branching(t, node, k, side)
    except UnsupportedNode:
        published = None
    return BranchDocument(
        type=t.name, node=node, k=k, side=side.value,
        computed=codec.weight_terms(computed),
        published=None if published is None else codec.weight_terms(published),
        ok=None if published is None else computed == published,
    )


@router.get("/qsystem", response_model=QSystemDocument)
def get_qsystem(
    t: TypeSpec = Depends(get_type),
    node: Optional[int] = Query(None),
    k: int = Query(1, ge=1),
    side: Lattice = Query(Lattice.TILDE),
):
    node = resolve_node(t, node)
    result = check_qsystem(t, node, k, side)
    return QSystemDocument(
        ok=result.ok, type=t.name, node=node, k=k, side=side.value,
        residual=codec.finite_char_document(result.residual),
    )


# ========== FERMIONIC ENDPOINTS ==========

@router.get("/fermionic", response_model=FermionicDocument)
def get_fermionic(
    t: TypeSpec = Depends(get_type),
    nu: List[str] = Query(..., description="node:k:count, repeatable"),
    side: Lattice = Query(Lattice.TILDE),
    mode: Mode = Query(Mode.AUTO),
    delta: RootProduct = Query(RootProduct.PARENT),
):
    """Fermionic identity for a product of KR modules"""
    nu_vector = parse_nu(tuple(nu))
    result = check_kr(t, nu_vector, side, mode, delta)
    return FermionicDocument(
        ok=result.ok, type=t.name,
        nu=[[i, k, c] for (i, k), c in sorted(nu_vector.items())],
        side=side.value, mode=result.mode.value,
        residual=codec.finite_char_document(result.residual),
        multiplicities=codec.weight_terms(result.multiplicities.items()),
    )

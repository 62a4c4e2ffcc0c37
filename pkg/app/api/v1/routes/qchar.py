"""
API routes for q-characters, T-system checks and dominant monomials
"""
from fastapi import APIRouter, Depends, HTTPException, Query
from typing import Optional

from app.api.dependencies import get_type, resolve_node
from app.core.config import settings
from app.schemas.qchar import DominantsDocument, EngineReportDocument, VerdictDocument
from app.services import codec
from app.services.cartan import TypeSpec
from app.services.qchar_engine import (
    Engine,
    check_tsystem,
    dominant_monomials,
    kr_char,
    kr_poly,
    ladder_monomials,
)
from app.services.symalg import SpectralParam


router = APIRouter(prefix="/qchar", tags=["q-characters"])


def _engine(engine: Optional[str]) -> Optional[Engine]:
    if engine is None:
        return None
    if engine not in settings.ENGINE_CHOICES:
        raise HTTPException(status_code=400, detail=f"Unknown engine {engine}")
    return Engine(engine)


# ========== CHARACTER ENDPOINTS ==========

@router.get("/character", response_model=EngineReportDocument)
def get_character(
    t: TypeSpec = Depends(get_type),
    node: Optional[int] = Query(None, description="Node id (default: first node)"),
    k: int = Query(1, ge=0, description="KR length"),
    engine: Optional[str] = Query(None, description="fold | tsys | fm | tableaux | all"),
):
    """q-character of W^{(node)}_k at s = a"""
    node = resolve_node(t, node)
    report = kr_char(t, node, k, SpectralParam(), _engine(engine))
    return EngineReportDocument(
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


@router.get("/tsystem", response_model=VerdictDocument)
def get_tsystem(
    t: TypeSpec = Depends(get_type),
    node: Optional[int] = Query(None),
    k: int = Query(1, ge=1),
):
    """T-system identity, checked with the fold engine"""
    node = resolve_node(t, node)
    result = check_tsystem(t, node, k)
    return VerdictDocument(
        ok=result.ok, check="tsystem", type=t.name, node=node, k=k,
        residual=codec.char_document(result.residual),
    )


@router.get("/dominants", response_model=DominantsDocument)
def get_dominants(
    t: TypeSpec = Depends(get_type),
    node: Optional[int] = Query(None),
    k: int = Query(1, ge=1),
):
    """Dominant monomials of W_k(a) W_k(a rho^2) and the expected ladder"""
    node = resolve_node(t, node)
    s = SpectralParam()
    product = kr_poly(t, node, k, s) * kr_poly(t, node, k, s.shift(q=2 * t.step(node)))
    found = dominant_monomials(product, t)
    ladder = ladder_monomials(t, node, k, s)
    return DominantsDocument(
        type=t.name, node=node, k=k,
        dominant=codec.char_terms(found),
        ladder=codec.char_terms((m, 1) for m in ladder),
        matches_ladder=sorted(found) == sorted((m, 1) for m in ladder),
    )

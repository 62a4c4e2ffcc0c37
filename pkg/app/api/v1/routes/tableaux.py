"""
API routes for tableau formulas
"""
from fastapi import APIRouter, Depends, Query
from typing import Optional

from app.api.dependencies import get_type, resolve_node
from app.schemas.qchar import TableauListDocument
from app.services import codec
from app.services.cartan import TypeSpec
from app.services.tableaux import enumerate_tableaux


router = APIRouter(prefix="/tableaux", tags=["Tableaux"])


@router.get("", response_model=TableauListDocument)
def list_tableaux(
    t: TypeSpec = Depends(get_type),
    node: Optional[int] = Query(None),
    k: int = Query(1, ge=1),
):
    """Admissible tableaux of W^{(node)}_k"""
    node = resolve_node(t, node)
    found = [codec.tableau_document(T) for T in enumerate_tableaux(t, node, k)]
    return TableauListDocument(type=t.name, node=node, k=k, count=len(found), tableaux=found)

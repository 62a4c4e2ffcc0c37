"""
Shared dependencies for the API routes
"""
from fastapi import HTTPException, Query

from app.core.errors import QCharError
from app.services.cartan import TypeSpec, parse_type


def get_type(type: str = Query(..., description="Type selector, e.g. A2-2, D4-3, untwisted:A2")) -> TypeSpec:
    """Resolve the type selector of a request"""
    try:
        return parse_type(type)
    except QCharError as e:
        raise HTTPException(status_code=e.http_status, detail=e.message)


def resolve_node(t: TypeSpec, node: int = None) -> int:
    if node is None:
        return t.nodes[0]
    try:
        return t.check_node(node)
    except QCharError as e:
        raise HTTPException(status_code=e.http_status, detail=e.message)

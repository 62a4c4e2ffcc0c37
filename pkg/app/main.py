from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.api.v1.routes import finite, qchar, tableaux
from app.core.config import settings
from app.core.errors import QCharError
from app.core.startup import self_check

app = FastAPI(
    title="Twisted q-Character Service",
    description="q-characters, T-/Q-systems, tableaux and fermionic formulas for twisted quantum affine algebras",
    version="1.0.0"
)

# Include API routes
app.include_router(qchar.router, prefix="/api/v1")
app.include_router(finite.router, prefix="/api/v1")
app.include_router(tableaux.router, prefix="/api/v1")

startup_report = {"ok": None, "phases": {}}


@app.on_event("startup")
async def startup_self_check():
    """Run the character self-check on startup"""
    if settings.SELF_CHECK_ON_STARTUP:
        startup_report.update(self_check())


@app.exception_handler(QCharError)
async def qchar_error_handler(request: Request, exc: QCharError):
    return JSONResponse(
        status_code=exc.http_status,
        content={"detail": exc.message, "error": exc.__class__.__name__},
    )


@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "message": "Twisted q-Character Service",
        "version": "1.0.0",
        "docs": "/docs",
        "endpoints": {
            "health": "/health",
            "character": "/api/v1/qchar/character",
            "tsystem": "/api/v1/qchar/tsystem",
            "dominants": "/api/v1/qchar/dominants",
            "branch": "/api/v1/finite/branch",
            "qsystem": "/api/v1/finite/qsystem",
            "fermionic": "/api/v1/finite/fermionic",
            "tableaux": "/api/v1/tableaux"
        }
    }


@app.get("/health")
async def health_check():
    return {
        "status": "healthy",
        "service": "Twisted q-Character Service",
        "environment": settings.ENVIRONMENT,
        "budget": settings.QCHAR_BUDGET,
        "self_check": startup_report["ok"]
    }

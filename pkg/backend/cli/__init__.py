"""
HTTP service for LeibnizPairs

The same pipelines as the batch CLI, with the document sent inline.
Document errors answer 400, domain failures 422 and broken internal
contracts 500.
"""
import logging
from typing import Any, Dict, Optional

import uvicorn
from fastapi import FastAPI, Request, status
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from leibnizpairs import __version__
from leibnizpairs.bicomplex import LEIBNIZ
from leibnizpairs.config import API_CONFIG, DEFAULT_LIFT_ORDER, DEFAULT_MAX_DEGREE
from leibnizpairs.document import InputDocument, parse_document
from leibnizpairs.errors import (BranchError, ContractViolation, DocumentError, LeibnizPairsError,
                                 ObstructionPreconditionError)
from leibnizpairs.pipelines import PipelineResult, run_cohomology, run_deform_check, run_deform_lift, run_validate

logger = logging.getLogger(__name__)

app = FastAPI(title="LeibnizPairs", version=__version__)


class DocumentRequest(BaseModel):
    document: Dict[str, Any]


class CohomologyRequest(DocumentRequest):
    pair: str
    module: Optional[str] = None
    max_degree: int = Field(DEFAULT_MAX_DEGREE, ge=0, le=API_CONFIG["max_degree_limit"])
    branch: str = Field(LEIBNIZ, pattern="^(leibniz|poisson)$")
    representatives: bool = False
    whitehead: bool = False
    semisimple: bool = False


class DeformRequest(DocumentRequest):
    jet: str


class LiftRequest(DeformRequest):
    order: int = Field(DEFAULT_LIFT_ORDER, ge=1, le=API_CONFIG["max_degree_limit"] + 3)


def _respond(result: PipelineResult) -> JSONResponse:
    code = status.HTTP_200_OK if result.ok else status.HTTP_422_UNPROCESSABLE_ENTITY
    return JSONResponse(status_code=code, content=result.payload)


def _document(body: DocumentRequest) -> InputDocument:
    return parse_document(body.document, source="<request>")


@app.exception_handler(BranchError)
async def branch_error_handler(request: Request, exc: BranchError):
    return JSONResponse(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                        content={"error": str(exc), "location": exc.location})


@app.exception_handler(DocumentError)
async def document_error_handler(request: Request, exc: DocumentError):
    return JSONResponse(status_code=status.HTTP_400_BAD_REQUEST,
                        content={"error": str(exc), "location": exc.location})


@app.exception_handler(ObstructionPreconditionError)
async def precondition_error_handler(request: Request, exc: ObstructionPreconditionError):
    return JSONResponse(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
                        content={"error": str(exc), "order": exc.order})


@app.exception_handler(ContractViolation)
async def contract_violation_handler(request: Request, exc: ContractViolation):
    logger.error(f"contract violation on {request.url.path}: {exc}")
    return JSONResponse(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
                        content={"error": str(exc)})


@app.exception_handler(LeibnizPairsError)
async def domain_error_handler(request: Request, exc: LeibnizPairsError):
    return JSONResponse(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, content={"error": str(exc)})


@app.get("/health")
async def health():
    return {"status": "ok", "version": __version__}


@app.post("/validate")
async def validate(body: DocumentRequest):
    doc = _document(body)
    return _respond(await run_in_threadpool(run_validate, doc))


@app.post("/cohomology")
async def cohomology(body: CohomologyRequest):
    doc = _document(body)
    result = await run_in_threadpool(
        run_cohomology, doc, body.pair, body.max_degree, body.branch, body.module,
        body.representatives, body.whitehead, body.semisimple)
    return _respond(result)


@app.post("/deform/check")
async def deform_check(body: DeformRequest):
    doc = _document(body)
    return _respond(await run_in_threadpool(run_deform_check, doc, body.jet))


@app.post("/deform/lift")
async def deform_lift(body: LiftRequest):
    doc = _document(body)
    return _respond(await run_in_threadpool(run_deform_lift, doc, body.jet, body.order))


if __name__ == "__main__":
    uvicorn.run(app, host=API_CONFIG["host"], port=API_CONFIG["port"])

"""FastAPI wiring over the operations layer."""

from __future__ import annotations

import json

from fastapi import FastAPI
from fastapi.responses import JSONResponse, StreamingResponse

from ..errors import DomainError
from . import ops
from .models import (
    ClassifyRequest,
    ClassifyResponse,
    ConfigCheckRequest,
    ConfigCheckResponse,
    EnumerateRequest,
    EWindowRequest,
    RepresentRequest,
    RepresentResponse,
    RTableRequest,
    ScanRequest,
    TheoremARequest,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(title="minbasis", version="0.1.0")


@app.exception_handler(DomainError)
async def _domain_error(request, exc: DomainError):
    return JSONResponse(status_code=400, content=exc.payload())


@app.exception_handler(ValueError)
async def _value_error(request, exc: ValueError):
    return JSONResponse(status_code=400, content={"error": "bad_request", "message": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "service": "minbasis", "version": "0.1.0"}


@app.post("/config/validate", response_model=ConfigCheckResponse, response_model_exclude_none=True)
def config_validate(req: ConfigCheckRequest) -> ConfigCheckResponse:
    return ops.op_config_check(req)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest) -> ClassifyResponse:
    return ops.op_classify(req)


@app.post("/represent", response_model=RepresentResponse, response_model_exclude_none=True)
def represent(req: RepresentRequest) -> RepresentResponse:
    return ops.op_represent(req)


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    return ops.op_verify(req)


@app.post("/scan")
def scan(req: ScanRequest) -> StreamingResponse:
    def lines():
        for record in ops.op_scan(req):
            yield json.dumps(record, separators=(",", ":")) + "\n"

    return StreamingResponse(lines(), media_type="application/x-ndjson")


@app.post("/oracle/enumerate")
def oracle_enumerate(req: EnumerateRequest) -> dict:
    return ops.op_enumerate(req)


@app.post("/oracle/rtable")
def oracle_rtable(req: RTableRequest) -> dict:
    return ops.op_rtable(req)


@app.post("/oracle/ewindow")
def oracle_ewindow(req: EWindowRequest) -> dict:
    return ops.op_ewindow(req)


@app.post("/oracle/theorem-a")
def oracle_theorem_a(req: TheoremARequest) -> dict:
    return ops.op_theorem_a(req)

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel
import uuid
import logging

from config import configure_logging, get_settings
from errors import StabilizerError

# Initialize logging first; get_settings() also loads .env for local development
configure_logging()
logger = logging.getLogger(__name__)

from tableau import parse_stab, format_stab
from synth import basis_norm_circuit
from gates import format_qc
from metric import inner_product
from geometry import nearest_neighbors, generators_text
from oracle import matrix_to_state
from frames import parse_frame, frame_inner_product

app = FastAPI(title="stabkit")


class StateRequest(BaseModel):
    stab: str


class PairRequest(BaseModel):
    a: str
    b: str


class NeighborsRequest(BaseModel):
    stab: str
    list: bool = False


def _error_response(request_id: str, e: Exception) -> JSONResponse:
    if isinstance(e, StabilizerError):
        logger.warning(f"[API] request_id={request_id} {type(e).__name__}: {e.detail}")
        return JSONResponse(
            status_code=e.status_code,
            content={"error": type(e).__name__, "detail": e.detail, "request_id": request_id},
        )
    logger.exception(f"[API] request_id={request_id} unexpected failure")
    return JSONResponse(
        status_code=500,
        content={"error": "Internal error", "detail": str(e), "request_id": request_id},
    )


@app.get("/health")
async def health():
    settings = get_settings()
    return {
        "status": "ok",
        "oracle_max_qubits": settings.oracle_max_qubits,
        "enumerate_max_qubits": settings.enumerate_max_qubits,
    }


@app.post("/canon")
async def canon(request: StateRequest):
    """Canonical form of a .stab matrix."""
    request_id = str(uuid.uuid4())
    try:
        m = parse_stab(request.stab)
        log = m.canonicalize()
        logger.info(f"[API] request_id={request_id} canon n={m.n} row_ops={len(log)}")
        return {"request_id": request_id, "stab": format_stab(m), "row_ops": len(log)}
    except Exception as e:
        return _error_response(request_id, e)


@app.post("/synth")
async def synth(request: StateRequest):
    """Basis-normalization circuit (.qc text) and the basis bits it reaches."""
    request_id = str(uuid.uuid4())
    try:
        circuit, bits = basis_norm_circuit(parse_stab(request.stab))
        logger.info(f"[API] request_id={request_id} synth n={circuit.n} gates={len(circuit)}")
        return {
            "request_id": request_id,
            "qc": format_qc(circuit),
            "gate_count": len(circuit),
            "bits": "".join(map(str, bits)),
        }
    except Exception as e:
        return _error_response(request_id, e)


@app.post("/ip")
async def ip(request: PairRequest):
    request_id = str(uuid.uuid4())
    try:
        result = inner_product(parse_stab(request.a), parse_stab(request.b))
        return {
            "request_id": request_id,
            "magnitude": result.magnitude,
            "s_exponent": result.s_exponent,
            "orthogonal": result.orthogonal,
            "expression": result.expression,
        }
    except Exception as e:
        return _error_response(request_id, e)


@app.post("/neighbors")
async def neighbors(request: NeighborsRequest):
    request_id = str(uuid.uuid4())
    try:
        neighbor_set = nearest_neighbors(parse_stab(request.stab))
        content = {"request_id": request_id, "count": len(neighbor_set)}
        if request.list:
            content["neighbors"] = [generators_text(s) for s in neighbor_set.neighbors]
        return content
    except Exception as e:
        return _error_response(request_id, e)


@app.post("/amps")
async def amps(request: StateRequest):
    request_id = str(uuid.uuid4())
    try:
        state = matrix_to_state(parse_stab(request.stab))
        return {
            "request_id": request_id,
            "n": state.n,
            "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
        }
    except Exception as e:
        return _error_response(request_id, e)


@app.post("/frame-ip")
async def frame_ip(request: PairRequest):
    request_id = str(uuid.uuid4())
    try:
        value = frame_inner_product(parse_frame(request.a), parse_frame(request.b))
        return {"request_id": request_id, "value": value}
    except Exception as e:
        return _error_response(request_id, e)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)

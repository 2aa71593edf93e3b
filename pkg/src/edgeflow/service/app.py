"""FastAPI application exposing the group engines and the walk laboratory.

POST each command's request model to /v1/<command>; the response carries
the rendered primary output verbatim plus the manifest that replays it.
Budget violations map to HTTP 422 with a budget marker so thin clients can
translate them to their exit-code convention.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import BudgetExceededError
from ..words import WordError
from . import handlers
from .models import (
    EntropyRequest,
    EqRequest,
    EvalRequest,
    ExpectedFlowRequest,
    FinalConfigRequest,
    GreenRequest,
    GrowthRequest,
    InequalityRequest,
    InvRequest,
    MinlenRequest,
    MulRequest,
    RecurrenceRequest,
    RunResponse,
    StableFlowRequest,
    WalkRequest,
)

app = FastAPI(
    title="edgeflow",
    version=__version__,
    description="Word problem, normal forms and random-walk experiments "
    "for free metabelian groups and their quotients.",
)


def _guard(fn, req) -> RunResponse:
    try:
        return fn(req)
    except BudgetExceededError as exc:
        raise HTTPException(status_code=422, detail={"budget_exceeded": str(exc)})
    except WordError as exc:
        raise HTTPException(
            status_code=422, detail={"word_error": str(exc), "offset": exc.offset}
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail={"value_error": str(exc)})


@app.get("/v1/version")
def version():
    return {"name": "edgeflow", "version": __version__}


@app.post("/v1/eval", response_model=RunResponse)
def eval_word(req: EvalRequest):
    return _guard(handlers.run_eval, req)


@app.post("/v1/eq", response_model=RunResponse)
def eq_words(req: EqRequest):
    return _guard(handlers.run_eq, req)


@app.post("/v1/mul", response_model=RunResponse)
def mul_words(req: MulRequest):
    return _guard(handlers.run_mul, req)


@app.post("/v1/inv", response_model=RunResponse)
def inv_word(req: InvRequest):
    return _guard(handlers.run_inv, req)


@app.post("/v1/minlen", response_model=RunResponse)
def minlen(req: MinlenRequest):
    return _guard(handlers.run_minlen, req)


@app.post("/v1/walk", response_model=RunResponse)
def walk(req: WalkRequest):
    return _guard(handlers.run_walk, req)


@app.post("/v1/growth", response_model=RunResponse)
def growth(req: GrowthRequest):
    return _guard(handlers.run_growth, req)


@app.post("/v1/entropy", response_model=RunResponse)
def entropy(req: EntropyRequest):
    return _guard(handlers.run_entropy, req)


@app.post("/v1/inequality", response_model=RunResponse)
def inequality(req: InequalityRequest):
    return _guard(handlers.run_inequality, req)


@app.post("/v1/boundary/stable-flow", response_model=RunResponse)
def stable_flow(req: StableFlowRequest):
    return _guard(handlers.run_stable_flow, req)


@app.post("/v1/boundary/green", response_model=RunResponse)
def green(req: GreenRequest):
    return _guard(handlers.run_green, req)


@app.post("/v1/boundary/expected-flow", response_model=RunResponse)
def expected_flow(req: ExpectedFlowRequest):
    return _guard(handlers.run_expected_flow, req)


@app.post("/v1/boundary/recurrence", response_model=RunResponse)
def recurrence(req: RecurrenceRequest):
    return _guard(handlers.run_recurrence, req)


@app.post("/v1/boundary/final-config", response_model=RunResponse)
def final_config(req: FinalConfigRequest):
    return _guard(handlers.run_final_config, req)

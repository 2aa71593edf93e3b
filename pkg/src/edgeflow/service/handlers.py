"""Command implementations shared by the HTTP routes and the CLI client.

Each handler turns a request model into the primary output text plus its
manifest.  The handlers are pure given the request, so replaying a
manifest's config byte-reproduces the output regardless of transport or
worker threads.
"""

from __future__ import annotations

import hashlib
from typing import Callable, Dict, Tuple

from .. import __version__
from ..boundary import (
    final_config_stability,
    limit_flow,
    recurrence_probe,
    window_edges,
)
from ..errors import BudgetExceededError
from ..geodesic import length_bounds
from ..greens import expected_flow, green_monte_carlo, green_numeric
from ..metabelian import mb_eval
from ..render import csv_table, json_line, ndjson
from ..walks import (
    WalkConfig,
    drift_estimate,
    entropy_series,
    inequality_report,
    simulate,
    sphere_sizes,
)
from ..words import Word, format_word, parse_word
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
    Manifest,
    MinlenRequest,
    MulRequest,
    RecurrenceRequest,
    RunResponse,
    StableFlowRequest,
    WalkRequest,
)

import numpy as np


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _respond(command: str, req, output: str) -> RunResponse:
    manifest = Manifest(
        command=command,
        config=req.model_dump(),
        version=__version__,
        output_digest=_digest(output),
    )
    return RunResponse(output=output, manifest=manifest)


def _engine_and_word(req, text: str):
    cfg = WalkConfig(req.variety, req.d, req.m)
    engine = cfg.engine()
    word = parse_word(text, cfg.n_generators, lamp_alias=req.variety == "lamplighter")
    return engine, word


def run_eval(req: EvalRequest) -> RunResponse:
    engine, word = _engine_and_word(req, req.word)
    elem = engine.eval(word)
    return _respond("eval", req, json_line(engine.to_json(elem)) + "\n")


def _difference_witness(engine, a, b) -> dict:
    ja, jb = engine.to_json(a), engine.to_json(b)
    for field in ja:
        if ja[field] != jb[field]:
            return {"field": field, "left": ja[field], "right": jb[field]}
    return {}


def run_eq(req: EqRequest) -> RunResponse:
    engine, w1 = _engine_and_word(req, req.word1)
    _, w2 = _engine_and_word(req, req.word2)
    a, b = engine.eval(w1), engine.eval(w2)
    equal = engine.key(a) == engine.key(b)
    obj = {"equal": equal}
    if not equal:
        obj["witness"] = _difference_witness(engine, a, b)
    return _respond("eq", req, json_line(obj) + "\n")


def run_mul(req: MulRequest) -> RunResponse:
    cfg = WalkConfig(req.variety, req.d, req.m)
    engine = cfg.engine()
    acc = engine.identity()
    for text in req.words:
        word = parse_word(text, cfg.n_generators, lamp_alias=req.variety == "lamplighter")
        acc = engine.mul(acc, engine.eval(word))
    return _respond("mul", req, json_line(engine.to_json(acc)) + "\n")


def run_inv(req: InvRequest) -> RunResponse:
    engine, word = _engine_and_word(req, req.word)
    return _respond("inv", req, json_line(engine.to_json(engine.inv(engine.eval(word)))) + "\n")


def run_minlen(req: MinlenRequest) -> RunResponse:
    word = parse_word(req.word, req.d)
    g = mb_eval(word)
    bounds = length_bounds(g, budget=req.budget)
    obj = {
        "lower": bounds.lower,
        "exact": bounds.exact,
        "upper": bounds.upper,
        "witness": format_word(bounds.witness),
    }
    return _respond("minlen", req, json_line(obj) + "\n")


def run_walk(req: WalkRequest) -> RunResponse:
    cfg = WalkConfig(req.variety, req.d, req.m)
    stats = drift_estimate(cfg, req.Ns, req.samples, req.seed, req.exact_budget)
    if req.format == "csv":
        rows = []
        for r in stats.rows:
            rows.append(
                (r.N, "drift_lower", r.lower_mean, r.lower_mean - r.lower_halfwidth,
                 r.lower_mean + r.lower_halfwidth)
            )
            rows.append(
                (r.N, "drift_upper", r.upper_mean, r.upper_mean - r.upper_halfwidth,
                 r.upper_mean + r.upper_halfwidth)
            )
            if r.exact_mean is not None:
                rows.append((r.N, "drift_exact", r.exact_mean, r.exact_mean, r.exact_mean))
        output = csv_table(["N", "quantity", "value", "ci_low", "ci_high"], rows)
    else:
        output = ndjson(r.to_json() for r in stats.rows)
    return _respond("walk", req, output)


def run_growth(req: GrowthRequest) -> RunResponse:
    cfg = WalkConfig(req.variety, req.d, req.m)
    stats = sphere_sizes(cfg, req.n_max, req.max_elements)
    if req.format == "csv":
        rows = [
            (n, sz, sz, sz) for n, sz in enumerate(stats.ball_sizes)
        ]
        output = csv_table(["N", "value", "ci_low", "ci_high"], rows)
        if stats.truncated:
            output += "# truncated: element budget reached\n"
    else:
        output = json_line(stats.to_json()) + "\n"
    return _respond("growth", req, output)


def run_entropy(req: EntropyRequest) -> RunResponse:
    cfg = WalkConfig(req.variety, req.d, req.m)
    stats = entropy_series(cfg, req.n_max, req.budget)
    if req.format == "csv":
        rows = [(n + 1, h, h, h) for n, h in enumerate(stats.entropies)]
        output = csv_table(["N", "value", "ci_low", "ci_high"], rows)
    else:
        output = json_line(stats.to_json()) + "\n"
    return _respond("entropy", req, output)


def run_inequality(req: InequalityRequest) -> RunResponse:
    cfg = WalkConfig(req.variety, req.d, req.m)
    rep = inequality_report(
        cfg,
        seed=req.seed,
        entropy_n=req.entropy_n,
        growth_n=req.growth_n,
        drift_n=req.drift_n,
        drift_samples=req.drift_samples,
    )
    if req.format == "csv":
        obj = rep.to_json()
        rows = [
            ("h_upper", obj["h_upper"], obj["h_upper"], obj["h_upper"]),
            ("c", (obj["c_lower"] + obj["c_upper"]) / 2, obj["c_lower"], obj["c_upper"]),
            ("v_upper", obj["v_upper"], obj["v_upper"], obj["v_upper"]),
            ("product_cv", obj["product_cv"], obj["product_cv"], obj["product_cv"]),
            ("holds", int(obj["holds"]), int(obj["holds"]), int(obj["holds"])),
            ("gap", obj["gap"], obj["gap"], obj["gap"]),
        ]
        output = csv_table(["quantity", "value", "ci_low", "ci_high"], rows)
    else:
        output = json_line(rep.to_json()) + "\n"
    return _respond("inequality", req, output)


def run_stable_flow(req: StableFlowRequest) -> RunResponse:
    cfg = WalkConfig("metabelian", req.d)
    edges = window_edges(req.d, req.window)

    def one(stream: int):
        traj = simulate(cfg, req.seed, req.N, stream=stream)
        return limit_flow(traj, req.N, req.window)

    if req.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=req.threads) as pool:
            reports = list(pool.map(one, range(req.seeds)))
    else:
        reports = [one(s) for s in range(req.seeds)]
    # reduction in seed order: results do not depend on the thread count
    mean_vals = np.zeros(len(edges))
    stab = np.zeros(len(edges))
    for report in reports:
        mean_vals += report.values_full
        stab += report.stabilized
    mean_vals /= req.seeds
    stab /= req.seeds
    if req.format == "csv":
        rows = [
            (" ".join(str(c) for c in base), axis, mean_vals[i], stab[i])
            for i, (base, axis) in enumerate(edges)
        ]
        output = csv_table(["base", "axis", "value", "stabilized"], rows)
    else:
        output = ndjson(
            {
                "base": list(base),
                "axis": axis,
                "value": mean_vals[i],
                "stabilized": stab[i],
            }
            for i, (base, axis) in enumerate(edges)
        )
    return _respond("stable-flow", req, output)


def run_green(req: GreenRequest) -> RunResponse:
    values = [(p, green_numeric(p, req.d, req.tol)) for p in map(tuple, req.points)]
    if req.format == "csv":
        rows = [(" ".join(str(c) for c in p), v) for p, v in values]
        output = csv_table(["x", "G"], rows)
    else:
        output = ndjson({"x": list(p), "G": v} for p, v in values)
    return _respond("green", req, output)


def run_expected_flow(req: ExpectedFlowRequest) -> RunResponse:
    values = [
        ((tuple(e.base), e.axis), expected_flow((tuple(e.base), e.axis), req.d, req.tol))
        for e in req.edges
    ]
    if req.format == "csv":
        rows = [
            (" ".join(str(c) for c in base), axis, v) for (base, axis), v in values
        ]
        output = csv_table(["base", "axis", "value"], rows)
    else:
        output = ndjson(
            {"base": list(base), "axis": axis, "value": v}
            for (base, axis), v in values
        )
    return _respond("expected-flow", req, output)


def run_recurrence(req: RecurrenceRequest) -> RunResponse:
    rep = recurrence_probe(req.d, req.checkpoints, req.seeds, req.seed)
    if req.format == "csv":
        rows = [
            (n, rep.medians[i], rep.mean_counts[i])
            for i, n in enumerate(rep.checkpoints)
        ]
        output = csv_table(["N", "median", "mean"], rows)
    else:
        output = json_line(rep.to_json()) + "\n"
    return _respond("recurrence", req, output)


def run_final_config(req: FinalConfigRequest) -> RunResponse:
    rep = final_config_stability(
        req.d, req.m, req.Ns, req.window, req.seeds, req.seed, threads=req.threads
    )
    if req.format == "csv":
        rows = [
            (n, rep.whole_window_fraction[i], rep.node_mean_fraction[i])
            for i, n in enumerate(rep.Ns)
        ]
        output = csv_table(["N", "whole_window_stabilized", "node_mean_stabilized"], rows)
    else:
        output = json_line(rep.to_json()) + "\n"
    return _respond("final-config", req, output)


HANDLERS: Dict[str, Tuple[Callable, type]] = {
    "eval": (run_eval, EvalRequest),
    "eq": (run_eq, EqRequest),
    "mul": (run_mul, MulRequest),
    "inv": (run_inv, InvRequest),
    "minlen": (run_minlen, MinlenRequest),
    "walk": (run_walk, WalkRequest),
    "growth": (run_growth, GrowthRequest),
    "entropy": (run_entropy, EntropyRequest),
    "inequality": (run_inequality, InequalityRequest),
    "stable-flow": (run_stable_flow, StableFlowRequest),
    "green": (run_green, GreenRequest),
    "expected-flow": (run_expected_flow, ExpectedFlowRequest),
    "recurrence": (run_recurrence, RecurrenceRequest),
    "final-config": (run_final_config, FinalConfigRequest),
}


def dispatch(command: str, config: dict) -> RunResponse:
    """Run a command from its manifest-style config dict."""
    if command not in HANDLERS:
        raise KeyError(f"unknown command {command!r}")
    handler, model = HANDLERS[command]
    return handler(model(**config))

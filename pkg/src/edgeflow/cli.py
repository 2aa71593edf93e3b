"""Thin command-line client for the edgeflow service.

Every subcommand marshals its flags into the service request model and
either runs the handler in-process (default) or POSTs it to a running
server given with --server.  The primary output goes to stdout or --out
byte-for-byte as the service rendered it; the experiment manifest goes to
--manifest when given, next to --out otherwise, or to stderr.  Exit codes:
0 success, 2 usage or word-syntax error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceededError
from .words import WordError

USAGE_EXIT = 2
BUDGET_EXIT = 3

_BOUNDARY = {"stable-flow", "green", "expected-flow", "recurrence", "final-config"}


def _endpoint(command: str) -> str:
    if command in _BOUNDARY:
        return f"/v1/boundary/{command}"
    return f"/v1/{command}"


def _run(command: str, config: dict, server: str | None):
    if server:
        import httpx

        resp = httpx.post(server.rstrip("/") + _endpoint(command), json=config, timeout=None)
        if resp.status_code == 422:
            detail = resp.json().get("detail", {})
            if isinstance(detail, dict) and "budget_exceeded" in detail:
                raise BudgetExceededError(detail["budget_exceeded"])
            raise SystemExit_from_detail(detail)
        resp.raise_for_status()
        payload = resp.json()
        return payload["output"], payload["manifest"]
    from .service.handlers import dispatch

    resp = dispatch(command, config)
    return resp.output, resp.manifest.model_dump()


def SystemExit_from_detail(detail):
    print(f"error: {detail}", file=sys.stderr)
    return SystemExit(USAGE_EXIT)


def _emit(args, output: str, manifest: dict):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    manifest_text = json.dumps(manifest, indent=2, sort_keys=True)
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(manifest_text + "\n")
    elif args.out:
        with open(args.out + ".manifest.json", "w") as fh:
            fh.write(manifest_text + "\n")
    else:
        print(manifest_text, file=sys.stderr)


def _common_output_flags(p):
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help="output format (default per subcommand)")
    p.add_argument("--out", help="write primary output to this file instead of stdout")
    p.add_argument("--manifest", help="write the experiment manifest to this file")
    p.add_argument("--server", help="POST to a running edgeflow server instead of in-process")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for seed loops; outputs are independent of it")


def _group_flags(p, varieties=True):
    if varieties:
        p.add_argument("--variety", required=True,
                       choices=("abelian", "free", "nilpotent2", "metabelian", "lamplighter"))
    p.add_argument("--d", type=int, required=True, help="lattice dimension")
    p.add_argument("--m", type=int, default=None,
                   help="lamp modulus for the lamplighter variety (0 = integer lamps)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="edgeflow", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a word to its normal form")
    _group_flags(p)
    p.add_argument("word")
    _common_output_flags(p)

    p = sub.add_parser("eq", help="decide equality of two words")
    _group_flags(p)
    p.add_argument("word1")
    p.add_argument("word2")
    _common_output_flags(p)

    p = sub.add_parser("mul", help="multiply several words left to right")
    _group_flags(p)
    p.add_argument("words", nargs="+")
    _common_output_flags(p)

    p = sub.add_parser("inv", help="invert a word's element")
    _group_flags(p)
    p.add_argument("word")
    _common_output_flags(p)

    p = sub.add_parser("minlen", help="minimal word length bounds (metabelian)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("word")
    p.add_argument("--budget", type=int, default=None,
                   help="run the exact solver up to this length")
    _common_output_flags(p)

    p = sub.add_parser("walk", help="drift bracket of the simple random walk")
    _group_flags(p)
    p.add_argument("--N", type=int, action="append", required=True, dest="Ns")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exact-budget", type=int, default=8)
    _common_output_flags(p)

    p = sub.add_parser("growth", help="exact ball sizes |W_<=N|")
    _group_flags(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--max-elements", type=int, default=5_000_000)
    _common_output_flags(p)

    p = sub.add_parser("entropy", help="exact entropies H(mu^{*N})")
    _group_flags(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--budget", type=int, default=20_000_000)
    _common_output_flags(p)

    p = sub.add_parser("inequality", help="fundamental inequality report")
    _group_flags(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--entropy-n", type=int, required=True)
    p.add_argument("--growth-n", type=int, required=True)
    p.add_argument("--drift-n", type=int, required=True)
    p.add_argument("--drift-samples", type=int, required=True)
    _common_output_flags(p)

    pb = sub.add_parser("boundary", help="boundary laboratory experiments")
    bsub = pb.add_subparsers(dest="boundary_command", required=True)

    p = bsub.add_parser("stable-flow", help="window edge flows at N/2 vs N")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--seed", type=int, required=True)
    _common_output_flags(p)

    p = bsub.add_parser("green", help="lattice Green function values")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x", action="append", required=True, dest="points",
                   help="point as comma-separated ints; repeatable")
    p.add_argument("--tol", type=float, default=1e-3)
    _common_output_flags(p)

    p = bsub.add_parser("expected-flow", help="Green differences across edges / 2d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--edge", action="append", required=True, dest="edges",
                   help="edge as base-csv:axis, e.g. 0,0,0:1; repeatable")
    p.add_argument("--tol", type=float, default=1e-3)
    _common_output_flags(p)

    p = bsub.add_parser("recurrence", help="traversal counts of the origin edge")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--checkpoint", type=int, action="append", required=True,
                   dest="checkpoints")
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _common_output_flags(p)

    p = bsub.add_parser("final-config", help="lamplighter window configurations")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--N", type=int, action="append", required=True, dest="Ns")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _common_output_flags(p)

    p = sub.add_parser("replay", help="re-run a manifest and verify its digest")
    p.add_argument("manifest_file")
    p.add_argument("--out", help="write replayed output to this file")
    p.add_argument("--manifest", help=argparse.SUPPRESS)
    p.add_argument("--server", help="replay against a running server")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8417)

    return ap


def _config_from_args(args) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "boundary":
        cmd = args.boundary_command
    cfg: dict = {}
    group = {
        "eval": ["variety", "d", "m", "word"],
        "eq": ["variety", "d", "m", "word1", "word2"],
        "mul": ["variety", "d", "m", "words"],
        "inv": ["variety", "d", "m", "word"],
        "minlen": ["d", "word", "budget"],
        "walk": ["variety", "d", "m", "Ns", "samples", "seed"],
        "growth": ["variety", "d", "m"],
        "entropy": ["variety", "d", "m", "budget"],
        "inequality": ["variety", "d", "m", "seed"],
        "stable-flow": ["d", "N", "seeds", "window", "seed", "threads"],
        "green": ["d", "tol"],
        "expected-flow": ["d", "tol"],
        "recurrence": ["d", "checkpoints", "seeds", "seed"],
        "final-config": ["d", "m", "Ns", "window", "seeds", "seed", "threads"],
    }[cmd]
    for name in group:
        cfg[name] = getattr(args, name)
    if cmd == "walk":
        cfg["exact_budget"] = args.exact_budget
        cfg["threads"] = args.threads
    if cmd == "growth":
        cfg["n_max"] = args.n_max
        cfg["max_elements"] = args.max_elements
    if cmd == "entropy":
        cfg["n_max"] = args.n_max
    if cmd == "inequality":
        cfg.update(
            entropy_n=args.entropy_n,
            growth_n=args.growth_n,
            drift_n=args.drift_n,
            drift_samples=args.drift_samples,
        )
    if cmd == "green":
        cfg["points"] = [[int(c) for c in p.split(",")] for p in args.points]
    if cmd == "expected-flow":
        edges = []
        for spec in args.edges:
            base, axis = spec.split(":")
            edges.append({"base": [int(c) for c in base.split(",")], "axis": int(axis)})
        cfg["edges"] = edges
    if cmd == "final-config" and cfg.get("m") is None:
        cfg["m"] = 0
    if args.format:
        cfg["format"] = args.format
    if cfg.get("m") is None:
        cfg.pop("m", None)
    return cmd, cfg


def _cmd_replay(args) -> int:
    with open(args.manifest_file) as fh:
        manifest = json.load(fh)
    command, config = manifest["command"], manifest["config"]
    output, new_manifest = _run(command, config, args.server)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    ok = new_manifest["output_digest"] == manifest["output_digest"]
    print(
        f"replay {'matches' if ok else 'DIFFERS FROM'} recorded digest "
        f"{manifest['output_digest']}",
        file=sys.stderr,
    )
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    if args.command == "replay":
        return _cmd_replay(args)
    command, config = _config_from_args(args)
    try:
        output, manifest = _run(command, config, args.server)
    except WordError as exc:
        print(f"word error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_EXIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    _emit(args, output, manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())

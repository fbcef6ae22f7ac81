"""Command-line surface: stable file formats, audit reports, run manifests.

Every output file wraps its payload as ``{"payload": ..., "manifest": ...}``;
the manifest echoes the command, configuration, seed, toolkit version,
input digests and the payload digest, so reruns with identical inputs are
checkable byte-for-byte on the payload section.

Exit codes: 0 success, 1 numerical check failure, 2 input error.
The dense-storage guard n <= 4 can be overridden with the environment
variable ``UICHAN_MAX_N``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, bell, channels, linalg, models, seesaw, serialize
from .errors import (DimensionMismatchError, DomainError, InconsistentChannelError,
                     InvalidModelError, PipelineInconsistencyError)
from .serialize import SchemaError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _max_n() -> int:
    return int(os.environ.get("UICHAN_MAX_N", channels.DEFAULT_MAX_N))


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "payload" in doc:
        return doc["payload"]
    return doc


def _emit(args, payload: dict, inputs: dict[str, str], t0: float) -> None:
    indent = args.json_indent if args.json_indent >= 0 else None
    config = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    manifest = {
        "command": args.command,
        "version": __version__,
        "seed": getattr(args, "seed", None),
        "config": config,
        "inputs": {name: {"path": path, "sha256": serialize.sha256_file(path)}
                   for name, path in inputs.items()},
        "payload_sha256": serialize.sha256_text(serialize.dumps(payload, indent)),
        "wall_ms": round((time.perf_counter() - t0) * 1000.0, 3),
    }
    text = serialize.dumps({"payload": payload, "manifest": manifest}, indent)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_functional(args) -> tuple[np.ndarray, dict[str, str]]:
    if getattr(args, "preset", None) == "chsh":
        return bell.chsh_functional(), {}
    if not getattr(args, "functional", None):
        raise SchemaError("provide -f FUNCTIONAL or --preset chsh")
    return serialize.table_from_json(_read_json(args.functional)), {"functional": args.functional}


def _load_strategy(args) -> tuple[tuple, dict[str, str]]:
    if getattr(args, "preset", None) == "chsh":
        return bell.chsh_optimal_strategy(), {}
    if not getattr(args, "input", None):
        raise SchemaError("provide -i STRATEGY or --preset chsh")
    return serialize.strategy_from_json(_read_json(args.input)), {"strategy": args.input}


def cmd_gen(args) -> int:
    t0 = time.perf_counter()
    model = models.random_model(args.kind, args.n, args.m, args.dA, args.dB,
                                state=args.state, seed=args.seed)
    _emit(args, serialize.model_to_json(model), {}, t0)
    return EXIT_OK


def cmd_channel(args) -> int:
    t0 = time.perf_counter()
    model = serialize.model_from_json(_read_json(args.input))
    if args.method == "direct":
        channel = channels.channel_direct(model, max_n=_max_n())
    else:
        channel = channels.channel_from_moments(channels.moment_table(model, max_n=_max_n()),
                                                max_n=_max_n())
    _emit(args, serialize.channel_to_json(channel), {"model": args.input}, t0)
    if args.audit:
        report = channels.cptp_report(channel)
        print(serialize.dumps({
            "min_choi_eigenvalue": report.min_choi_eigenvalue,
            "trace_defect": report.trace_defect,
            "completely_positive": report.completely_positive,
            "trace_preserving": report.trace_preserving,
            "pass": report.accepted,
        }, args.json_indent if args.json_indent >= 0 else None))
        if not report.accepted:
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    model = serialize.model_from_json(_read_json(args.input))
    checks = []

    def add(name: str, defect: float, tolerance: float) -> None:
        tolerance = args.tol if args.tol is not None else tolerance
        checks.append({"name": name, "defect": float(defect), "tolerance": tolerance,
                       "pass": bool(defect <= tolerance)})

    defects = model.defects()
    dim = model.n * (model.dA if isinstance(model, models.TensorModel) else model.d)
    add("unitarity", defects["unitarity"], linalg.tol(dim))
    add("state", defects["state"], linalg.tol(dim))
    if isinstance(model, models.CommutingModel):
        rep = models.validate_commuting(model)
        add("commutation", rep.max_commutator, rep.tolerance)

    # channel-level checks only make sense on a numerically valid model
    skipped = []
    if all(c["pass"] for c in checks):
        direct = channels.channel_direct(model, max_n=_max_n())
        via_moments = channels.channel_from_moments(channels.moment_table(model, max_n=_max_n()),
                                                    max_n=_max_n())
        dual = max(float(np.max(np.abs(direct.supers[x][y] - via_moments.supers[x][y])))
                   for x in range(model.m) for y in range(model.m))
        add("dual_formula", dual, 1e-10)
        report = channels.cptp_report(direct)
        add("choi_psd", max(0.0, -report.min_choi_eigenvalue), 1e-9)
        add("trace_preserving", report.trace_defect, 1e-10)
        if isinstance(model, models.TensorModel):
            embedded = channels.channel_direct(models.embed_tensor_as_commuting(model),
                                               max_n=_max_n())
            emb = max(float(np.max(np.abs(direct.supers[x][y] - embedded.supers[x][y])))
                      for x in range(model.m) for y in range(model.m))
            add("embedding_invariance", emb, 1e-12)
    else:
        skipped = ["dual_formula", "choi_psd", "trace_preserving", "embedding_invariance"]

    all_pass = all(c["pass"] for c in checks) and not skipped
    payload = {"checks": checks, "skipped": skipped, "pass": all_pass}
    _emit(args, payload, {"model": args.input}, t0)
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def _write_behaviour_csv(path: str, behaviour) -> None:
    """Diff-able CSV with 1-based labels; tiny negatives are clamped here only."""
    lines = ["a,b,x,y,p"]
    for x in range(behaviour.m):
        for y in range(behaviour.m):
            for a in range(behaviour.n):
                for b in range(behaviour.n):
                    value = max(0.0, float(behaviour.p[a, b, x, y]))
                    lines.append(f"{a + 1},{b + 1},{x + 1},{y + 1},{value!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_bell(args) -> int:
    t0 = time.perf_counter()
    channel = serialize.channel_from_json(_read_json(args.input))
    behaviour = bell.behaviour_from_channel(channel)
    _emit(args, serialize.behaviour_to_json(behaviour), {"channel": args.input}, t0)
    if args.csv:
        _write_behaviour_csv(args.csv, behaviour)
    return EXIT_OK


def cmd_bell_direct(args) -> int:
    t0 = time.perf_counter()
    (alice, bob, state), inputs = _load_strategy(args)
    behaviour = bell.behaviour_direct(alice, bob, state)
    _emit(args, serialize.behaviour_to_json(behaviour), inputs, t0)
    if args.csv:
        _write_behaviour_csv(args.csv, behaviour)
    return EXIT_OK


def cmd_seesaw(args) -> int:
    t0 = time.perf_counter()
    f, inputs = _load_functional(args)
    n, m = f.shape[0], f.shape[2]
    cfg = seesaw.SeesawConfig(dA=args.dA, dB=args.dB, n=n, m=m,
                              max_iters=args.max_iters, rel_tol=args.rel_tol,
                              restarts=args.restarts, seed=args.seed)
    result = seesaw.optimize_bell(f, cfg)
    verification = seesaw.lift_and_verify(result, f)
    payload = {
        "value": result.value,
        "trace": list(result.trace),
        "restart_index": result.restart_index,
        "exact_updates": result.exact_updates,
        "strategy": serialize.strategy_to_json(result.alice, result.bob, result.state),
        "lifted": serialize.model_to_json(result.lifted),
        "verification": {
            "lifted_value": verification.lifted_value,
            "deviation": verification.deviation,
            "pass": verification.ok,
        },
    }
    _emit(args, payload, inputs, t0)
    return EXIT_OK if verification.ok else EXIT_CHECK_FAILED


def cmd_pipeline(args) -> int:
    t0 = time.perf_counter()
    (alice, bob, state), inputs = _load_strategy(args)
    f, f_inputs = _load_functional(args)
    inputs.update(f_inputs)
    lifted = models.diagonal_fourier_lift(alice, bob, state)
    channel = channels.channel_direct(lifted, max_n=_max_n())
    extracted = bell.behaviour_from_channel(channel)
    direct = bell.behaviour_direct(alice, bob, state)
    deviation = float(np.max(np.abs(extracted.p - direct.p)))
    tol = args.tol if args.tol is not None else 1e-8
    payload = {
        "value_lifted": bell.bell_value(extracted, f),
        "value_direct": bell.bell_value(direct, f),
        "max_deviation": deviation,
        "tolerance": tol,
        "pass": bool(deviation <= tol),
        "behaviour_lifted": serialize.behaviour_to_json(extracted),
        "behaviour_direct": serialize.behaviour_to_json(direct),
    }
    _emit(args, payload, inputs, t0)
    return EXIT_OK if deviation <= tol else EXIT_CHECK_FAILED


def cmd_swap_demo(args) -> int:
    t0 = time.perf_counter()
    if args.n not in (2, 3, 4):
        raise DomainError(f"swap-demo supports n in {{2, 3, 4}}, got {args.n}")
    n = args.n
    rng = linalg.rng_from_seed(args.seed)
    rho_target = linalg.wishart_density(rng, n * n)
    swap = linalg.swap_matrix(n, n)
    model = models.TensorModel(n=n, m=1, dA=n, dB=n, state=rho_target,
                               U=(swap,), V=(swap,))
    channel = channels.channel_direct(model, max_n=max(_max_n(), n))
    defect = 0.0
    for _ in range(10):
        rho_in = linalg.wishart_density(rng, n * n)
        out = channel.apply_to(rho_in, 0, 0)
        defect = max(defect, float(np.max(np.abs(out - rho_target))))
    tol = args.tol if args.tol is not None else 1e-12
    ok = defect <= tol
    payload = {"n": n, "inputs_tested": 10, "max_defect": defect, "tolerance": tol,
               "pass": bool(ok)}
    _emit(args, payload, {}, t0)
    print(f"{'PASS' if ok else 'FAIL'} swap constant-channel demo: "
          f"max defect {defect:.3e} (tolerance {tol:.1e})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _add_common(p: argparse.ArgumentParser, output: bool = True) -> None:
    if output:
        p.add_argument("-o", "--output", help="output JSON path (default: stdout)")
    p.add_argument("--tol", type=float, default=None,
                   help="override the command's pass/fail tolerance")
    p.add_argument("--json-indent", type=int, default=2,
                   help="JSON indent for outputs; negative for compact")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uichan",
        description="Unitary-induced channel families: generation, audits, "
                    "behaviour extraction and see-saw optimization.",
    )
    parser.add_argument("--version", action="version", version=f"uichan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random model")
    p.add_argument("--kind", choices=("tensor", "commuting"), default="tensor")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--dA", type=int, default=2)
    p.add_argument("--dB", type=int, default=2)
    p.add_argument("--state", choices=("vector", "density"), default="vector")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("channel", help="compute the channel family of a model")
    p.add_argument("-i", "--input", required=True, help="model JSON")
    p.add_argument("--method", choices=("direct", "moments"), default="direct")
    p.add_argument("--audit", action="store_true", help="print a CPTP audit report")
    _add_common(p)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("verify", help="run all validity checks on a model")
    p.add_argument("-i", "--input", required=True, help="model JSON")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bell", help="extract a behaviour from a channel family")
    p.add_argument("-i", "--input", required=True, help="channel JSON")
    p.add_argument("--csv", help="also export the behaviour table as CSV")
    _add_common(p)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("bell-direct", help="Born-rule behaviour of a PVM strategy")
    p.add_argument("-i", "--input", help="strategy JSON")
    p.add_argument("--preset", choices=("chsh",), help="built-in strategy")
    p.add_argument("--csv", help="also export the behaviour table as CSV")
    _add_common(p)
    p.set_defaults(func=cmd_bell_direct)

    p = sub.add_parser("seesaw", help="maximize a Bell functional over strategies")
    p.add_argument("-f", "--functional", help="functional JSON (nested-real table)")
    p.add_argument("--preset", choices=("chsh",), help="built-in functional")
    p.add_argument("--dA", type=int, default=2)
    p.add_argument("--dB", type=int, default=2)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_seesaw)

    p = sub.add_parser("pipeline", help="strategy -> lift -> channel -> behaviour, vs Born rule")
    p.add_argument("-i", "--input", help="strategy JSON")
    p.add_argument("-f", "--functional", help="functional JSON")
    p.add_argument("--preset", choices=("chsh",), help="built-in strategy and functional")
    _add_common(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("swap-demo", help="constant-channel identity from swap couplings")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_swap_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, json.JSONDecodeError, OSError,
            DimensionMismatchError, DomainError, InvalidModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (InconsistentChannelError, PipelineInconsistencyError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())

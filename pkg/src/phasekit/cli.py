"""Command-line front end: verification suites, demos, a gadget probe, benchmarks.

Reports are JSON with sorted keys written to stdout (or --out); a short
human summary goes to stderr unless --json is given.  Identical invocations
with identical seeds produce byte-identical JSON apart from wall_time
fields.  Exit codes: 0 all checks passed, 1 verification failure, 2
usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time

import numpy as np

from . import __version__, backend, verify
from .apps import CKParams, ck_single_query, deutsch_jozsa, grover
from .gadget import (
    GadgetPlan,
    GadgetVariant,
    apply_gadget,
    eigen_ancilla,
    phase_transform,
)
from .oracles import (
    FunctionTable,
    OracleCounter,
    TableParseError,
    load_table,
)
from .state import (
    RegisterLayout,
    StateVector,
    basis_state,
    equal_up_to_global_phase,
    random_density,
    random_state,
)
from .transforms import omega

DEFAULT_MEM_BUDGET = 1 << 24
VARIANT_NAMES = [v.value for v in GadgetVariant]


def mem_budget(flag_value: int | None = None) -> int:
    """Amplitude budget: --budget flag beats PHASEKIT_MEM_BUDGET beats 2**24."""
    if flag_value is not None:
        if flag_value < 1:
            raise ValueError(f"budget must be positive, got {flag_value}")
        return flag_value
    raw = os.environ.get("PHASEKIT_MEM_BUDGET", "")
    if not raw:
        return DEFAULT_MEM_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"PHASEKIT_MEM_BUDGET={raw!r} is not an integer") from None
    if value < 1:
        raise ValueError(f"PHASEKIT_MEM_BUDGET must be positive, got {value}")
    return value


def parse_angle(text: str) -> float:
    """Angles in radians; 'pi' tokens like pi, -pi, pi/2, 0.5pi are accepted."""
    try:
        return float(text)
    except ValueError:
        pass
    m = re.fullmatch(r"([+-]?)(\d*\.?\d*)\s*pi\s*(?:/\s*(\d*\.?\d+))?", text.strip())
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    sign = -1.0 if m.group(1) == "-" else 1.0
    coef = float(m.group(2)) if m.group(2) else 1.0
    denom = float(m.group(3)) if m.group(3) else 1.0
    return sign * coef * math.pi / denom


def parse_tolerances(pairs) -> dict:
    known = set()
    for names in verify.DEFAULT_TOLERANCES.values():
        known |= set(names)
    overrides = {}
    for pair in pairs or []:
        key, sep, raw = pair.partition("=")
        if not sep:
            raise ValueError(f"--tol expects KEY=VALUE, got {pair!r}")
        key = key.strip()
        plain = key.split(".", 1)[1] if "." in key else key
        if "." in key and key.split(".", 1)[0] not in verify.DEFAULT_TOLERANCES:
            raise ValueError(f"--tol {pair!r}: unknown suite {key.split('.', 1)[0]!r}")
        if plain not in known:
            raise ValueError(f"--tol {pair!r}: unknown tolerance name {plain!r}")
        try:
            overrides[key] = float(raw)
        except ValueError:
            raise ValueError(f"--tol {pair!r}: bad float {raw!r}") from None
    return overrides


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def emit_json(payload, args) -> None:
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def note(args, message: str) -> None:
    if not args.json:
        print(message, file=sys.stderr)


# ------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    overrides = parse_tolerances(args.tol)
    names = list(verify.SUITE_NAMES) if args.suite == "all" else [args.suite]
    start = time.perf_counter()
    payload = verify.run_verification(names, args.seed, overrides)
    payload["wall_time"] = time.perf_counter() - start
    emit_json(payload, args)
    for suite in payload["suites"]:
        status = "ok" if suite["passed"] else "FAIL"
        note(
            args,
            f"{suite['suite']}: {status} "
            f"({suite['counts']['total']} cases, {suite['counts']['failed']} failed)",
        )
    note(args, f"verify: {'ok' if payload['passed'] else 'FAIL'}")
    return 0 if payload["passed"] else 1


# --------------------------------------------------------------------- demo


def _generated_table(args, app: str) -> FunctionTable:
    n = 1 << args.n
    if app == "dj":
        vals = np.zeros(n, dtype=np.int64)
        if args.pattern == "constant1":
            vals[:] = 1
        elif args.pattern == "balanced":
            # parity of the bit expansion: balanced for every n >= 1
            vals = np.array([bin(x).count("1") % 2 for x in range(n)], dtype=np.int64)
        return FunctionTable(n, 2, vals)
    if app == "grover":
        if args.target is None:
            raise ValueError("grover generator needs --target (or use --table)")
        if not 0 <= args.target < n:
            raise ValueError(f"--target {args.target} outside range({n})")
        vals = np.zeros(n, dtype=np.int64)
        vals[args.target] = 1
        return FunctionTable(n, 2, vals)
    if not 0 <= args.solutions <= n:
        raise ValueError(f"--solutions {args.solutions} outside 0..{n}")
    vals = np.zeros(n, dtype=np.int64)
    vals[: args.solutions] = 1
    return FunctionTable(n, 2, vals)


def _demo_table(args, app: str) -> FunctionTable:
    if args.table:
        table = load_table(args.table)
        if not isinstance(table, FunctionTable):
            raise ValueError(f"{args.table}: demo {app} needs an integer table")
        if table.modulus != 2:
            raise ValueError(
                f"{args.table}: demo {app} needs modulus 2, got {table.modulus}"
            )
        return table
    return _generated_table(args, app)


def _demo_ancilla(kind: str, dim: int, seed: int):
    if kind == "random":
        return random_state(dim, seed, label="a")
    if kind == "zero":
        return basis_state(RegisterLayout((("a", dim),)), (0,))
    if kind == "minus":
        return eigen_ancilla(dim, 1)
    return random_density(dim, dim, seed)


def _check_budget(total_amps: int, budget: int) -> None:
    if total_amps > budget:
        raise ValueError(
            f"joint register needs {total_amps} amplitudes, over the budget of "
            f"{budget}; raise PHASEKIT_MEM_BUDGET or shrink the instance"
        )


def _finish_demo(args, app: str, params: dict, result_dict: dict, fidelity: float, start: float) -> int:
    payload = {
        "command": "demo",
        "app": app,
        "seed": args.seed,
        "params": params,
        "result": result_dict,
        "ancilla_restoration_fidelity": fidelity,
        "versions": verify.versions(),
        "wall_time": time.perf_counter() - start,
    }
    emit_json(payload, args)
    restored = fidelity >= 1.0 - 1e-9
    if not restored:
        note(args, f"demo {app}: ancilla NOT restored (fidelity {fidelity!r})")
    return 0 if restored else 1


def cmd_demo_dj(args) -> int:
    start = time.perf_counter()
    table = _demo_table(args, "dj")
    ref_dim = 2 if args.ancilla == "mixed" else 1
    _check_budget(table.domain_size * 2 * ref_dim, mem_budget())
    ancilla = _demo_ancilla(args.ancilla, 2, args.seed)
    verdict = deutsch_jozsa(table, ancilla, args.k, variant=GadgetVariant(args.variant))
    result = {
        "verdict": verdict.verdict,
        "p_zero": verdict.p_zero,
        "outcome_distribution": verdict.outcome_distribution,
        "oracle_calls": verdict.oracle_calls,
    }
    params = {
        "domain_size": table.domain_size,
        "ancilla": args.ancilla,
        "k": args.k,
        "variant": args.variant,
        "table": args.table or args.pattern,
    }
    note(args, f"demo dj: verdict {verdict.verdict} (p_zero {verdict.p_zero:.6g})")
    return _finish_demo(args, "dj", params, result, verdict.ancilla_fidelity, start)


def _search_result_dict(res) -> dict:
    return {
        "success_probability": res.success_probability,
        "iterations": res.iterations,
        "probabilities": res.probabilities,
        "solutions": list(res.solutions),
        "oracle_calls_marking": res.oracle_calls_marking,
        "oracle_calls_diffusion": res.oracle_calls_diffusion,
        "note": res.note,
    }


def cmd_demo_grover(args) -> int:
    start = time.perf_counter()
    table = _demo_table(args, "grover")
    ref_dim = 2 if args.ancilla == "mixed" else 1
    _check_budget(table.domain_size * 2 * ref_dim, mem_budget())
    ancilla = _demo_ancilla(args.ancilla, 2, args.seed)
    res = grover(
        table, args.iters, seed=args.seed, ancilla=ancilla,
        variant=GadgetVariant(args.variant),
    )
    params = {
        "domain_size": table.domain_size,
        "iterations": args.iters,
        "ancilla": args.ancilla,
        "variant": args.variant,
        "table": args.table or f"target={args.target}",
    }
    note(args, f"demo grover: success {res.success_probability:.6g} after {args.iters} iterations")
    return _finish_demo(args, "grover", params, _search_result_dict(res), res.ancilla_fidelity, start)


def cmd_demo_ck(args) -> int:
    start = time.perf_counter()
    table = _demo_table(args, "ck")
    gamma = parse_angle(args.gamma)
    beta = parse_angle(args.beta)
    modulus = 1 << args.mbits
    ref_dim = modulus if args.ancilla == "mixed" else 1
    _check_budget(table.domain_size * modulus * ref_dim, mem_budget())
    ancilla = _demo_ancilla(args.ancilla, modulus, args.seed)
    params_obj = CKParams(gamma=gamma, beta=beta, l=args.l)
    res = ck_single_query(
        table, params_obj, args.mbits, seed=args.seed, ancilla=ancilla,
        variant=GadgetVariant(args.variant),
    )
    params = {
        "domain_size": table.domain_size,
        "gamma": gamma,
        "beta": beta,
        "l": args.l,
        "m_bits": args.mbits,
        "ancilla": args.ancilla,
        "variant": args.variant,
        "table": args.table or f"solutions={args.solutions}",
    }
    note(args, f"demo ck: success {res.success_probability:.6g} with one query pair")
    return _finish_demo(args, "ck", params, _search_result_dict(res), res.ancilla_fidelity, start)


# ------------------------------------------------------------------- gadget


def cmd_gadget(args) -> int:
    start = time.perf_counter()
    if args.m < 1:
        raise ValueError(f"--m must be positive, got {args.m}")
    plan = GadgetPlan(GadgetVariant(args.variant), args.k, args.m)
    state = random_state(args.m, args.seed, label="a")
    out = apply_gadget(state, "a", plan, args.z)
    match = equal_up_to_global_phase(state, out)
    expected = float(np.angle(omega(args.m, args.k * args.z)))
    # compare on the circle so -pi and pi do not read as a mismatch
    error = abs(omega(args.m, args.k * args.z) - np.exp(1j * match.phase))
    payload = {
        "command": "gadget",
        "modulus": args.m,
        "k": args.k,
        "z": args.z,
        "variant": args.variant,
        "seed": args.seed,
        "measured_phase": match.phase,
        "expected_phase": expected,
        "phase_error": float(error),
        "global_phase_only": match.equal,
        "versions": verify.versions(),
        "wall_time": time.perf_counter() - start,
    }
    emit_json(payload, args)
    ok = match.equal and error <= 1e-10
    note(
        args,
        f"gadget: measured phase {match.phase:.6g}, expected {expected:.6g} "
        f"({'ok' if ok else 'FAIL'})",
    )
    return 0 if ok else 1


# -------------------------------------------------------------------- bench


def cmd_bench(args) -> int:
    budget = mem_budget(args.budget)
    if args.max_n < 1 or args.max_m < 1:
        raise ValueError("--max-n and --max-m must be at least 1")
    if args.reps < 1:
        raise ValueError(f"--reps must be at least 1, got {args.reps}")
    worst = 1 << (args.max_n + args.max_m)
    if worst > budget:
        raise ValueError(
            f"largest size needs 2^{args.max_n + args.max_m} amplitudes, over the "
            f"budget of {budget}; lower --max-n/--max-m or raise the budget"
        )
    backends = backend.available_backends() if args.backend == "all" else [args.backend]
    lines = []
    previous = backend.active_backend()
    try:
        for name in backends:
            backend.set_backend(name)
            for n in range(1, args.max_n + 1):
                for m in range(1, args.max_m + 1):
                    record = _bench_one(n, m, args.reps, args.seed)
                    record["backend"] = name
                    lines.append(json.dumps(_jsonable(record), sort_keys=True))
    finally:
        backend.set_backend(previous)
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    note(args, f"bench: {len(lines)} records ({', '.join(backends)})")
    return 0


def _bench_one(n_bits: int, m_bits: int, reps: int, seed: int) -> dict:
    n, m = 1 << n_bits, 1 << m_bits
    rng = np.random.default_rng((seed, n_bits, m_bits))
    table = FunctionTable(n, m, rng.integers(0, m, size=n))
    ctl = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    anc = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    amps = np.kron(ctl / np.linalg.norm(ctl), anc / np.linalg.norm(anc))
    joint = StateVector(RegisterLayout((("c", n), ("a", m))), amps)
    plan = GadgetPlan(GadgetVariant.COMM_A, 1, m)
    best = math.inf
    counter = None
    for _ in range(reps):
        counter = OracleCounter()
        t0 = time.perf_counter()
        phase_transform(joint, "c", "a", table, plan, counter)
        best = min(best, time.perf_counter() - t0)
    return {
        "operation": "phase-transform",
        "n_bits": n_bits,
        "m_bits": m_bits,
        "N": n,
        "M": m,
        "r": 1,
        "reps": reps,
        "wall_time": best,
        "oracle_calls": counter.calls,
    }


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasekit",
        description="Value-level register simulator around the two-call phase transform.",
    )
    parser.add_argument("--version", action="version", version=f"phasekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1, help="PRNG seed (PCG64)")
    common.add_argument("--out", help="write the JSON report to this file instead of stdout")
    common.add_argument("--json", action="store_true", help="suppress the stderr summary")

    p_verify = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p_verify.add_argument(
        "--suite", default="all", choices=list(verify.SUITE_NAMES) + ["all"]
    )
    p_verify.add_argument(
        "--tol", action="append", metavar="KEY=VALUE",
        help="override a tolerance (e.g. gadget.identity=1e-8); repeatable",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_demo = sub.add_parser("demo", help="run one of the demo applications")
    demo_sub = p_demo.add_subparsers(dest="app", required=True)

    demo_common = argparse.ArgumentParser(add_help=False, parents=[common])
    demo_common.add_argument("--table", help="table file (overrides generator flags)")
    demo_common.add_argument(
        "--ancilla", default="random", choices=["random", "zero", "minus", "mixed"]
    )
    demo_common.add_argument(
        "--variant", default="comm-a", choices=VARIANT_NAMES
    )

    p_dj = demo_sub.add_parser("dj", parents=[demo_common], help="constant vs balanced")
    p_dj.add_argument("--n", type=int, default=2, help="control size in bits")
    p_dj.add_argument(
        "--pattern", default="balanced", choices=["balanced", "constant0", "constant1"],
        help="generated table when no --table is given",
    )
    p_dj.add_argument("--k", type=int, default=1, help="phase multiplier")
    p_dj.set_defaults(func=cmd_demo_dj)

    p_grover = demo_sub.add_parser("grover", parents=[demo_common], help="iterated search")
    p_grover.add_argument("--n", type=int, default=2, help="control size in bits")
    p_grover.add_argument("--target", type=int, help="marked item for the generated table")
    p_grover.add_argument("--iters", type=int, default=1, help="iteration count")
    p_grover.set_defaults(func=cmd_demo_grover)

    p_ck = demo_sub.add_parser("ck", parents=[demo_common], help="single-query search")
    p_ck.add_argument("--n", type=int, default=2, help="control size in bits")
    p_ck.add_argument(
        "--solutions", type=int, default=1,
        help="generated table marks this many items (indices 0..count-1)",
    )
    p_ck.add_argument("--gamma", default="pi", help="marking angle; accepts pi tokens")
    p_ck.add_argument("--beta", default="pi", help="diffusion angle; accepts pi tokens")
    p_ck.add_argument("--l", type=int, default=0, help="diffusion pivot item")
    p_ck.add_argument("--mbits", type=int, default=4, help="phase quantization bits")
    p_ck.set_defaults(func=cmd_demo_ck)

    p_gadget = sub.add_parser(
        "gadget", parents=[common], help="apply the gadget to a random state"
    )
    p_gadget.add_argument("--m", type=int, required=True, help="segment modulus M")
    p_gadget.add_argument("--k", type=int, default=1, help="phase multiplier")
    p_gadget.add_argument("--z", type=int, default=1, help="translation shift")
    p_gadget.add_argument("--variant", default="comm-a", choices=VARIANT_NAMES)
    p_gadget.set_defaults(func=cmd_gadget)

    p_bench = sub.add_parser(
        "bench", parents=[common], help="time the transform across sizes and backends"
    )
    p_bench.add_argument("--max-n", type=int, default=10, help="largest control size in bits")
    p_bench.add_argument("--max-m", type=int, default=4, help="largest ancilla size in bits")
    p_bench.add_argument("--reps", type=int, default=3, help="wall_time is the min of this many runs")
    p_bench.add_argument(
        "--backend", default="all", choices=["all"] + backend.available_backends()
    )
    p_bench.add_argument(
        "--budget", type=int, default=None,
        help=f"amplitude budget (default PHASEKIT_MEM_BUDGET or {DEFAULT_MEM_BUDGET})",
    )
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TableParseError as exc:
        target = getattr(args, "table", None)
        prefix = f"{target}: " if target else ""
        print(f"error: {prefix}{exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

"""Command-line front end.

Subcommands map one-to-one onto the library pipelines and emit JSON (CSV for
bench). Exit codes: 0 success, 1 runtime failure (capacity, divergence,
missing file), 2 usage error. Primary output is deterministic for fixed
arguments and seeds; the timestamp lives in a "_meta" field that --no-meta
removes (bench timing columns are the documented exception).
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import __version__, approximator, backend, boolean, circuits, entanglement
from . import interference, statevec
from .errors import QunipError

PROG = "qunip"


@dataclass
class CommandPlan:
    subcommand: str
    parameters: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    format: str = "json"


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _bitstring(text: str) -> str:
    if not text or any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"expected a bitstring of 0s and 1s, got {text!r}")
    return text


def _tol(text: str) -> float:
    value = _positive_float(text)
    if not value < 1:
        raise argparse.ArgumentTypeError(f"tolerance must be in (0, 1), got {value}")
    return value


def _b_list(text: str) -> list:
    """Comma-separated barrier counts; 'lo-hi' expands to an inclusive range."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            lo, hi = _positive_int(lo), _positive_int(hi)
            if hi < lo:
                raise argparse.ArgumentTypeError(f"range {part!r} is descending")
            values.extend(range(lo, hi + 1))
        elif part:
            values.append(_positive_int(part))
    if not values:
        raise argparse.ArgumentTypeError(f"no barrier counts in {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="State-vector algorithm runs, entanglement audits, "
        "interference amplitudes, and interference-neuron fitting.",
    )
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, shots=False):
        p.add_argument("-o", "--output", metavar="PATH", help="write primary output here")
        p.add_argument("--no-meta", action="store_true", help="omit the _meta field")
        p.add_argument("--seed", type=_nonneg_int, default=0, help="RNG seed where applicable")
        p.add_argument("--threads", type=_positive_int, help="worker count hint (numba backend)")
        if shots:
            p.add_argument(
                "--shots",
                type=_positive_int,
                help="also sample this many outcomes from the exact distribution",
            )

    p = sub.add_parser("bv", help="single-query hidden-string recovery")
    p.add_argument("--d", type=_positive_int, required=True, help="register width")
    p.add_argument("--a", type=_bitstring, required=True, help="hidden string, d bits")
    common(p, shots=True)

    p = sub.add_parser("dj", help="constant-vs-balanced decision with entanglement audit")
    p.add_argument("--table", required=True, help="truth table file (one line of 2^d bits)")
    common(p, shots=True)

    p = sub.add_parser("grover", help="amplitude-amplification search")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--marked", type=_nonneg_int, required=True, help="marked basis label")
    p.add_argument("--iterations", type=_nonneg_int, help="default: floor(pi/4 sqrt(2^d))")
    common(p, shots=True)

    p = sub.add_parser("db", help="pattern-database load plus one-query lookup")
    p.add_argument("--table", required=True, help="truth table file")
    p.add_argument("--a", type=_bitstring, required=True, help="queried stimulus, d bits")
    p.add_argument("--patterns", help="restrict the database to this pattern file")
    p.add_argument("--save-state", metavar="PATH", help="also dump the final state as JSON")
    common(p, shots=True)

    p = sub.add_parser("entangle", help="factorization report for a state dump")
    p.add_argument("--state", required=True, help="state dump JSON file")
    p.add_argument("--tol", type=_tol, default=entanglement.DEFAULT_TOL)
    common(p)

    p = sub.add_parser("interfere", help="detector amplitude of a slit lattice")
    p.add_argument("--lattice", required=True, help="lattice JSON file")
    p.add_argument("--bruteforce", action="store_true", help="enumerate paths instead")
    common(p)

    p = sub.add_parser("bench", help="exponential-vs-linear scaling sweep (CSV)")
    p.add_argument("--b", type=_b_list, required=True, metavar="LIST", help="e.g. 1-7 or 2,4,8")
    p.add_argument("--n", type=_positive_int, required=True, help="slits per barrier")
    p.add_argument("--compare", action="store_true", help="also run brute force per b")
    common(p)

    p = sub.add_parser("fit", help="train an interference neuron on CSV data")
    p.add_argument("--data", required=True, help="training CSV (features then target, header)")
    p.add_argument("--k", type=_positive_int, required=True, help="path count")
    p.add_argument("--lr", type=_positive_float, default=0.05)
    p.add_argument("--epochs", type=_positive_int, default=2000)
    common(p)

    return parser


def parse_args(argv) -> CommandPlan:
    parser = build_parser()
    ns = parser.parse_args(argv)
    params = vars(ns).copy()
    subcommand = params.pop("subcommand")
    output_path = params.pop("output", None)
    if subcommand == "bv" and len(ns.a) != ns.d:
        parser.error(f"--a must be exactly {ns.d} bits, got {len(ns.a)}")
    if subcommand == "grover" and ns.marked >= (1 << ns.d):
        parser.error(f"--marked {ns.marked} outside [0, 2^{ns.d})")
    return CommandPlan(
        subcommand=subcommand,
        parameters=params,
        output_path=output_path,
        format="csv" if subcommand == "bench" else "json",
    )


# -- result assembly ----------------------------------------------------------


def _dist_dict(dist: dict) -> dict:
    return {k: v for k, v in sorted(dist.items())}


def _steps_summary(run: circuits.AuditedRun) -> list:
    return [
        {
            "label": label,
            "is_product": audit.is_product,
            "ranks": list(audit.prefix_schmidt_ranks),
            "residual": audit.residual,
        }
        for (label, _), audit in zip(run.trace.steps, run.audits)
    ]


def _sample_shots(dist: dict, shots: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    outcomes = sorted(dist)
    weights = np.array([dist[o] for o in outcomes])
    weights = weights / weights.sum()
    counts = rng.multinomial(shots, weights)
    return {o: int(c) for o, c in zip(outcomes, counts) if c}


def _run_bv(params: dict) -> dict:
    d = params["d"]
    a = int(params["a"], 2)
    recovered, run = circuits.bernstein_vazirani(d, a)
    dist = circuits.measure_distribution(run.trace.steps[-1][1], range(1, d + 1))
    result = {
        "d": d,
        "a": params["a"],
        "recovered": format(recovered, f"0{d}b"),
        "oracle_calls": run.trace.oracle_calls,
        "prep_steps": run.trace.prep_step_count,
        "distribution": _dist_dict(dist),
        "steps": _steps_summary(run),
    }
    if params.get("shots"):
        result["shots"] = _sample_shots(dist, params["shots"], params["seed"])
    return result


def _run_dj(params: dict) -> dict:
    table = boolean.load_truth_table(params["table"])
    verdict, run = circuits.deutsch_jozsa(table)
    dist = circuits.measure_distribution(run.trace.steps[-1][1], range(1, table.d + 1))
    result = {
        "d": table.d,
        "verdict": verdict.value,
        "oracle_calls": run.trace.oracle_calls,
        "distribution": _dist_dict(dist),
        "steps": _steps_summary(run),
    }
    if params.get("shots"):
        result["shots"] = _sample_shots(dist, params["shots"], params["seed"])
    return result


def _run_grover(params: dict) -> dict:
    d = params["d"]
    iterations = params.get("iterations")
    if iterations is None:
        iterations = circuits.optimal_grover_iterations(d)
    success, run = circuits.grover(d, params["marked"], iterations)
    final = run.trace.steps[-1][1]
    dist = circuits.measure_distribution(final, range(1, d + 1))
    result = {
        "d": d,
        "marked": params["marked"],
        "iterations": iterations,
        "success_probability": success,
        "analytic_success_probability": circuits.grover_success_probability(d, iterations),
        "oracle_calls": run.trace.oracle_calls,
        "distribution": _dist_dict(dist),
        "steps": _steps_summary(run),
    }
    if d == 2 and iterations >= 1:
        result["post_oracle_tangle"] = entanglement.two_qubit_tangle(run.trace.steps[1][1])
    if params.get("shots"):
        result["shots"] = _sample_shots(dist, params["shots"], params["seed"])
    return result


def _run_db(params: dict) -> dict:
    table = boolean.load_truth_table(params["table"])
    if params.get("patterns"):
        patterns = boolean.load_patterns(params["patterns"])
        if patterns.d != table.d:
            raise QunipError(
                f"db: pattern width {patterns.d} != table width {table.d}"
            )
        for x, b in patterns.pairs:
            if b != table(x):
                raise QunipError(
                    f"db: pattern ({format(x, f'0{table.d}b')}, {b}) contradicts the table"
                )
    else:
        patterns = boolean.full_pattern_set(table)
    a_bits = params["a"]
    if len(a_bits) != table.d:
        raise QunipError(f"db: --a must be exactly {table.d} bits, got {len(a_bits)}")
    res = circuits.database_query(patterns, int(a_bits, 2))
    if params.get("save_state"):
        statevec.save_state(res.final, params["save_state"])
    result = {
        "d": table.d,
        "a": a_bits,
        "patterns_loaded": len(patterns.pairs),
        "prep_steps": res.trace.trace.prep_step_count,
        "oracle_calls": res.trace.trace.oracle_calls,
        "first_register": _dist_dict(res.first_register),
        "conditional_b": None if res.conditional_b is None else _dist_dict(res.conditional_b),
        "conditioning_failed": res.conditioning_failed,
        "steps": _steps_summary(res.trace),
    }
    if params.get("shots"):
        result["shots"] = _sample_shots(res.first_register, params["shots"], params["seed"])
    return result


def _run_entangle(params: dict) -> dict:
    state = statevec.load_state(params["state"])
    report = entanglement.factor_product(state, tol=params["tol"])
    result = {"d": state.num_qubits, "tol": params["tol"]}
    result.update(report.as_dict())
    return result


def _run_interfere(params: dict) -> dict:
    lattice = interference.load_lattice(params["lattice"])
    if params.get("bruteforce"):
        res = interference.amplitude_bruteforce(lattice)
        method = "bruteforce"
    else:
        res = interference.amplitude_imbedded(lattice)
        method = "imbedded"
    family, legs = interference.parameter_count(lattice)
    result = {
        "method": method,
        "barriers": lattice.barriers,
        "slits": list(lattice.slits),
        "family_size": family,
        "leg_count": legs,
    }
    result.update(res.as_dict())
    return result


def bench_sweep(b_values, n: int, seed: int, compare: bool) -> list:
    """One row per (barrier count, method) over random uniform-width lattices."""
    warm = interference.random_lattice([2, 2], np.random.default_rng(0))
    interference.amplitude_imbedded(warm)  # keep jit compilation out of the timings
    interference.amplitude_bruteforce(warm)
    rows = []
    rng = np.random.default_rng(seed)
    for b in b_values:
        lattice = interference.random_lattice([n] * b, rng)
        if compare and lattice.path_count() > interference.BRUTE_FORCE_PATH_GUARD:
            raise QunipError(
                f"bench: {n}^{b} paths exceed the brute-force guard; drop --compare"
            )
        methods = [("imbedded", interference.amplitude_imbedded)]
        if compare:
            methods.append(("bruteforce", interference.amplitude_bruteforce))
        for name, fn in methods:
            start = time.perf_counter_ns()
            res = fn(lattice)
            elapsed = time.perf_counter_ns() - start
            rows.append(
                {
                    "b": b,
                    "N": n,
                    "method": name,
                    "multiply_adds": res.multiply_add_count,
                    "paths": res.paths_enumerated,
                    "nanoseconds": elapsed,
                    "amp_re": res.amplitude.real,
                    "amp_im": res.amplitude.imag,
                }
            )
    return rows


def _run_fit(params: dict) -> dict:
    data = approximator.load_training_csv(params["data"])
    start = approximator.init_neuron(params["k"], data.inputs.shape[1], params["seed"])
    fitted, history = approximator.train(start, data, lr=params["lr"], epochs=params["epochs"])
    rmse = float(
        np.sqrt(np.mean((approximator.predict_batch(fitted, data.inputs) - data.targets) ** 2))
    )
    result = approximator.model_to_dict(fitted)
    result.update(
        {
            "samples": data.size,
            "lr": params["lr"],
            "epochs": params["epochs"],
            "seed": params["seed"],
            "initial_loss": history[0],
            "final_loss": history[-1],
            "rmse": rmse,
        }
    )
    return result


_RUNNERS = {
    "bv": _run_bv,
    "dj": _run_dj,
    "grover": _run_grover,
    "db": _run_db,
    "entangle": _run_entangle,
    "interfere": _run_interfere,
    "fit": _run_fit,
}

_BENCH_COLUMNS = ["b", "N", "method", "multiply_adds", "paths", "nanoseconds", "amp_re", "amp_im"]


def _meta() -> dict:
    return {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "backend": backend.active_backend(),
        "version": __version__,
    }


def _csv_cell(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def _render_csv(rows, with_meta: bool) -> str:
    lines = [",".join(_BENCH_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[col]) for col in _BENCH_COLUMNS))
    if with_meta:
        meta = _meta()
        lines.append(f"# generated_at={meta['generated_at']} backend={meta['backend']}")
    return "\n".join(lines) + "\n"


def _emit(plan: CommandPlan, text: str) -> None:
    if plan.output_path:
        with open(plan.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def execute(plan: CommandPlan) -> int:
    """Run a validated plan; returns the process exit code."""
    params = plan.parameters
    if params.get("threads") and backend.active_backend() == "numba":
        import warnings

        import numba

        with warnings.catch_warnings():
            # threading-layer probing may warn about unavailable backends
            warnings.simplefilter("ignore")
            numba.set_num_threads(params["threads"])
    try:
        if plan.subcommand == "bench":
            rows = bench_sweep(params["b"], params["n"], params["seed"], params["compare"])
            _emit(plan, _render_csv(rows, with_meta=not params["no_meta"]))
        else:
            result = _RUNNERS[plan.subcommand](params)
            if not params["no_meta"]:
                result["_meta"] = _meta()
            _emit(plan, json.dumps(result, indent=2) + "\n")
    except QunipError as exc:
        print(f"{PROG} {plan.subcommand}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, TypeError) as exc:
        # unreadable or malformed input files
        print(f"{PROG} {plan.subcommand}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    plan = parse_args(sys.argv[1:] if argv is None else argv)
    return execute(plan)


if __name__ == "__main__":
    sys.exit(main())

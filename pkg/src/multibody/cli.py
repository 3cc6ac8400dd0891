"""Command-line front end: one seeded, reproducible batch command per workflow."""
import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from .circuit import (
    CircuitParams,
    coupling_prefactor,
    extract_effective_couplings,
    second_order_couplings,
    truncation_spurious_scale,
)
from .errors import MultibodyError, UsageError
from .gadget import (
    KINDS,
    N_LOCAL,
    GadgetSpec,
    gadget_from_spec,
    spectral_margin,
    validity_margin,
    verify_gadget,
)
from .log import configure_logging
from .parity import (
    LogicalProblem,
    compile_problem,
    roundtrip_validate,
    unit_cell_layout,
)
from .report import BUILD_ID, Payload, RunReport, emit_report
from .robustness import (
    CONVENTIONS,
    DEFAULT_THREE_BODY,
    J_N_SMALL,
    ThreeBodyOptions,
    correctability_bound,
    critical_sigmas,
    default_threads,
    three_body_tolerance,
    yield_curve,
)
from .schema import (
    CircuitParamsModel,
    GadgetSpecModel,
    LogicalProblemModel,
    load_config,
    parse_document,
    read_document,
)
from .spin import (
    AnnealSchedule,
    IsingHamiltonian,
    enumerate_spectrum,
    geometric_ladder,
    read_hamiltonian,
    simulated_anneal,
    write_hamiltonian,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Namespace keys that steer how a command runs, never what it computes.
RUNTIME_KEYS = {"command", "config", "output", "verbose", "log_file", "threads", "hamiltonian_out"}
STOCHASTIC = {"yield-sim", "critical-sigma", "anneal"}
DEFAULT_SIGMAS = [round(0.005 * k, 3) for k in range(21)]

Options = Dict[str, Any]
Handler = Callable[[Options, int], Tuple[Payload, bool]]


@dataclass
class CommandSpec:
    command: str
    options: Options = field(default_factory=dict)
    output: Optional[Path] = None
    threads: int = 1
    hamiltonian_out: Optional[Path] = None


def _add_gadget_options(p: argparse.ArgumentParser, J_N: float = 0.0):
    p.add_argument("--spec", type=Path, default=None, help="GadgetSpec JSON document (overrides the flags below)")
    p.add_argument("--kind", choices=KINDS, default=N_LOCAL)
    p.add_argument("--N", dest="N", type=int, default=4, help="logical spin count")
    p.add_argument("--Ja", dest="J_a", type=float, default=1.0, help="ancilla coupling strength")
    p.add_argument("--q0", dest="q_0", type=float, default=0.5, help="ancilla bias offset")
    p.add_argument("--JN", dest="J_N", type=float, default=J_N, help="target multi-body coupling")
    p.add_argument("--f", dest="f", type=float, nargs="+", default=None,
                   help="sector energies f(0..N) for the symmetric kind")


def _add_hamiltonian_source(p: argparse.ArgumentParser):
    p.add_argument("--hamiltonian", type=Path, default=None,
                   help="Hamiltonian in the text format; defaults to the gadget from the flags")
    _add_gadget_options(p)


def _add_problem_options(p: argparse.ArgumentParser):
    p.add_argument("--problem", type=Path, default=None, help="LogicalProblem JSON document")
    p.add_argument("--M", dest="M", type=int, default=4, help="logical spins of a random problem")
    p.add_argument("--seed", type=int, default=None, help="seed for random problems")
    p.add_argument("--C", dest="C", type=float, default=None, help="constraint strength (default 1 + sum|J|)")


def _add_circuit_options(p: argparse.ArgumentParser):
    p.add_argument("--circuit", type=Path, default=None, help="CircuitParams JSON document")
    p.add_argument("--n", dest="n", type=int, default=8, help="attached circuits of a uniform coupler")
    p.add_argument("--L", dest="L", type=float, default=1.0)
    p.add_argument("--M", dest="M", type=float, default=0.1)
    p.add_argument("--E", dest="E", type=float, default=1.0)
    p.add_argument("--Lc", dest="L_c", type=float, default=1.0)
    p.add_argument("--Ec", dest="E_c", type=float, default=1.0)
    p.add_argument("--phi-cx", dest="phi_cx", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.1, help="phase displacement of the two-level reduction")
    p.add_argument("--method", choices=("extracted", "second-order"), default="extracted")


def build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="multibody",
                                     description="Build, verify and stress-test multi-body coupler gadgets.")
    parser.add_argument("--version", action="version", version=BUILD_ID)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--log-file", type=Path, default=None)
    parser.add_argument("--config", type=Path, default=None, help="JSON file of option values; flags win")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default $MULTIBODY_THREADS or 1)")
    parser.add_argument("-o", "--output", type=Path, default=None, help="output file, .csv or .json")
    sub = parser.add_subparsers(dest="command", required=True)
    commands: Dict[str, argparse.ArgumentParser] = {}

    def add(name: str, help: str) -> argparse.ArgumentParser:
        commands[name] = sub.add_parser(name, help=help)
        return commands[name]

    p = add("gadget-verify", "check a gadget's effective spectrum and counting")
    _add_gadget_options(p)

    p = add("gadget-build", "build a gadget Hamiltonian")
    _add_gadget_options(p)
    p.add_argument("--hamiltonian-out", type=Path, default=None, help="also write the text format here")

    p = add("circuit-couplings", "effective couplings of a coupler circuit")
    _add_circuit_options(p)

    p = add("three-body-tolerance", "largest tolerable |E3/E2|")
    _add_gadget_options(p, J_N=J_N_SMALL)
    p.add_argument("--sign", choices=("same", "opposite", "both"), default="both")
    p.add_argument("--convention", choices=CONVENTIONS, default=DEFAULT_THREE_BODY.convention)

    p = add("yield-sim", "Monte Carlo yield versus relative mismatch")
    _add_gadget_options(p, J_N=J_N_SMALL)
    p.add_argument("--sigmas", type=float, nargs="+", default=DEFAULT_SIGMAS)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--uncorrected", action="store_true", help="skip the ancilla field correction")

    p = add("critical-sigma", "per-sample critical relative mismatch")
    _add_gadget_options(p, J_N=J_N_SMALL)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--uncorrected", action="store_true")

    p = add("bound", "analytic correctability bound")
    p.add_argument("--N", dest="N", type=int, default=4)
    p.add_argument("--Ja", dest="J_a", type=float, default=1.0)
    p.add_argument("--q0", dest="q_0", type=float, default=0.5)
    p.add_argument("--JN", dest="J_N", type=float, default=0.0)

    p = add("lhz-compile", "compile a pair problem into the parity layout")
    _add_problem_options(p)
    p.add_argument("--hamiltonian-out", type=Path, default=None)

    p = add("lhz-validate", "round-trip check of the parity embedding by enumeration")
    _add_problem_options(p)
    p.add_argument("--instances", type=int, default=1, help="random instances (ignored with --problem)")

    p = add("anneal", "simulated annealing of a Hamiltonian")
    _add_hamiltonian_source(p)
    p.add_argument("--sweeps", type=int, default=20)
    p.add_argument("--t-hot", dest="t_hot", type=float, default=5.0)
    p.add_argument("--t-cold", dest="t_cold", type=float, default=0.05)
    p.add_argument("--rungs", type=int, default=24)
    p.add_argument("--seed", type=int, default=None)

    p = add("spectrum", "exhaustive spectrum of a Hamiltonian")
    _add_hamiltonian_source(p)
    p.add_argument("--limit", type=int, default=None, help="keep only the lowest entries")
    return parser, commands


def command_defaults(command: str) -> Options:
    _, commands = build_parser()
    if command not in commands:
        raise UsageError("command", f"unknown subcommand {command!r}")
    defaults = vars(commands[command].parse_args([]))
    return {k: v for k, v in defaults.items() if k not in RUNTIME_KEYS}


def _gadget(o: Options) -> GadgetSpec:
    if o.get("spec") is not None:
        return read_document(GadgetSpecModel, o["spec"]).to_spec()
    document = {k: o[k] for k in ("kind", "N", "J_N", "J_a", "q_0", "f")}
    return parse_document(GadgetSpecModel, document).to_spec()


def _circuit(o: Options) -> CircuitParams:
    if o.get("circuit") is not None:
        return read_document(CircuitParamsModel, o["circuit"]).to_params()
    n = o["n"]
    document = {"L_c": o["L_c"], "L": [o["L"]] * n, "M": [o["M"]] * n,
                "E_c": o["E_c"], "E": [o["E"]] * n, "phi_cx": o["phi_cx"]}
    return parse_document(CircuitParamsModel, document).to_params()


def _problems(o: Options) -> List[LogicalProblem]:
    if o.get("problem") is not None:
        return [read_document(LogicalProblemModel, o["problem"]).to_problem()]
    if o.get("seed") is None:
        raise UsageError("seed", "required for random problems (or pass --problem)")
    return [LogicalProblem.random(o["M"], o["seed"], i) for i in range(o.get("instances", 1))]


def _hamiltonian(o: Options) -> IsingHamiltonian:
    if o.get("hamiltonian") is not None:
        return read_hamiltonian(o["hamiltonian"])
    return gadget_from_spec(_gadget(o))


def _positive(o: Options, key: str):
    if o[key] < 1:
        raise UsageError(key, f"must be >= 1, got {o[key]}")


def _gadget_verify(o: Options, threads: int) -> Tuple[Payload, bool]:
    spec = _gadget(o)
    report = verify_gadget(gadget_from_spec(spec), spec)
    table = pd.DataFrame([vars(row) for row in report.sectors],
                         columns=["n_up", "multiplicity", "energy", "target", "ancilla", "counting"])
    summary = {"deviation": report.deviation,
               "offset": report.offset,
               "counting_correct": report.counting_correct,
               "passed": report.passed,
               "validity_margin": validity_margin(spec),
               "spectral_margin": spectral_margin(spec)}
    return Payload(summary, table), report.passed


def _terms(h: IsingHamiltonian) -> List[Any]:
    return [[list(support), w] for support, w in h.terms]


def _gadget_build(o: Options, threads: int) -> Tuple[Payload, bool]:
    spec = _gadget(o)
    h = gadget_from_spec(spec)
    summary = {"n": h.n, "logical": list(spec.logical), "ancilla": list(spec.ancilla),
               "constant": h.constant, "terms": _terms(h)}
    return Payload(summary), True


def _circuit_couplings(o: Options, threads: int) -> Tuple[Payload, bool]:
    p = _circuit(o)
    if o["method"] == "extracted":
        matrix = extract_effective_couplings(p, o["delta"])
    else:
        matrix = second_order_couplings(p)
    e2, e3 = truncation_spurious_scale(p, o["delta"])
    summary = {"prefactor": coupling_prefactor(p), "E2": e2, "E3": e3}
    return Payload(summary, matrix.to_frame()), True


def _three_body(o: Options, threads: int) -> Tuple[Payload, bool]:
    spec = _gadget(o)
    options = ThreeBodyOptions(convention=o["convention"])
    summary: Options = {"convention": options.convention}
    if o["sign"] in ("same", "both"):
        summary["same_sign"] = three_body_tolerance(spec, True, options)
    if o["sign"] in ("opposite", "both"):
        summary["opposite_sign"] = three_body_tolerance(spec, False, options)
    return Payload(summary), True


def _yield_sim(o: Options, threads: int) -> Tuple[Payload, bool]:
    _positive(o, "samples")
    spec = _gadget(o)
    points = yield_curve(spec, o["sigmas"], o["samples"], o["seed"], not o["uncorrected"], threads)
    table = pd.DataFrame([(pt.sigma, pt.samples, pt.passes, pt.yield_, pt.ci_low, pt.ci_high) for pt in points],
                         columns=["sigma", "samples", "passes", "yield", "ci_low", "ci_high"])
    return Payload({"corrected": not o["uncorrected"]}, table), True


def _critical_sigma(o: Options, threads: int) -> Tuple[Payload, bool]:
    _positive(o, "samples")
    spec = _gadget(o)
    sigmas = critical_sigmas(spec, o["samples"], o["seed"], not o["uncorrected"], threads)
    table = pd.DataFrame({"index": np.arange(len(sigmas)), "critical_sigma": sigmas})
    summary: Options = {"minimum": float(sigmas.min()), "corrected": not o["uncorrected"]}
    if spec.kind == N_LOCAL:
        summary["bound"] = correctability_bound(spec.N, spec.J_a, spec.q_0, spec.J_N)
    return Payload(summary, table), True


def _bound(o: Options, threads: int) -> Tuple[Payload, bool]:
    return Payload({"bound": correctability_bound(o["N"], o["J_a"], o["q_0"], o["J_N"])}), True


def _lhz_compile(o: Options, threads: int) -> Tuple[Payload, bool]:
    p = _problems(o)[0]
    e, h = compile_problem(p, o["C"])
    cells = unit_cell_layout(e)
    summary = {
        "M": e.M,
        "K": e.K,
        "C": e.C,
        "labels": [list(label) for label in e.labels],
        "plaquettes": [{"spins": [list(s) for s in cell.spins], "fixed": list(cell.fixed)}
                       for cell in e.plaquettes],
        "fixed": list(e.fixed),
        "fields": list(e.fields),
        "cells": [{"row": c.location.row, "col": c.location.col,
                   "x": cells.result.nodes[k].x, "y": cells.result.nodes[k].y}
                  for k, c in enumerate(cells.cells)],
        "adjacency": [[a, b, [list(s) for s in data["shared"]]]
                      for a, b, data in sorted(cells.graph.edges(data=True))],
        "terms": _terms(h),
    }
    return Payload(summary), True


def _lhz_validate(o: Options, threads: int) -> Tuple[Payload, bool]:
    rows = []
    for index, p in enumerate(_problems(o)):
        r = roundtrip_validate(p, o["C"])
        rows.append({"instance": index, "M": r.M, "C": r.C, "passed": r.passed,
                     "plaquettes": r.plaquette_count, "valid_sector": r.valid_sector_size,
                     "ground_degeneracy": r.ground_degeneracy, "offset": r.offset,
                     "offset_error": r.offset_error, "failures": "; ".join(r.failures)})
        for failure in r.failures:
            logger.warning("instance %d: %s", index, failure)
    table = pd.DataFrame(rows, columns=["instance", "M", "C", "passed", "plaquettes", "valid_sector",
                                        "ground_degeneracy", "offset", "offset_error", "failures"])
    passed = bool(table["passed"].all())
    return Payload({"instances": len(rows), "passed": passed}, table), passed


def _anneal(o: Options, threads: int) -> Tuple[Payload, bool]:
    h = _hamiltonian(o)
    ladder = geometric_ladder(o["t_hot"], o["t_cold"], o["rungs"])
    schedule = AnnealSchedule(sweeps=o["sweeps"], temperatures=ladder, seed=o["seed"])
    config, energy = simulated_anneal(h, schedule)
    return Payload({"configuration": str(config), "bits": config.bits, "energy": energy}), True


def _spectrum(o: Options, threads: int) -> Tuple[Payload, bool]:
    h = _hamiltonian(o)
    spectrum = enumerate_spectrum(h)
    count = len(spectrum) if o["limit"] is None else min(o["limit"], len(spectrum))
    rows = [(rank, spectrum[rank][0].bits, str(spectrum[rank][0]), spectrum[rank][1]) for rank in range(count)]
    table = pd.DataFrame(rows, columns=["rank", "bits", "configuration", "energy"])
    return Payload({"n": h.n, "minimum": spectrum.minimum}, table), True


HANDLERS: Dict[str, Handler] = {
    "gadget-verify": _gadget_verify,
    "gadget-build": _gadget_build,
    "circuit-couplings": _circuit_couplings,
    "three-body-tolerance": _three_body,
    "yield-sim": _yield_sim,
    "critical-sigma": _critical_sigma,
    "bound": _bound,
    "lhz-compile": _lhz_compile,
    "lhz-validate": _lhz_validate,
    "anneal": _anneal,
    "spectrum": _spectrum,
}


def run(spec: CommandSpec) -> Tuple[RunReport, bool]:
    """Execute one command; the report's ``config`` is enough to repeat it exactly."""
    handler = HANDLERS.get(spec.command)
    if handler is None:
        raise UsageError("command", f"unknown subcommand {spec.command!r}")
    options = command_defaults(spec.command)
    for key in spec.options:
        if key not in options:
            raise UsageError(key, f"not an option of {spec.command}")
    options.update(spec.options)
    if spec.command in STOCHASTIC and options.get("seed") is None:
        raise UsageError("seed", f"{spec.command} is stochastic and needs an explicit seed")

    start = time.perf_counter()
    payload, passed = handler(options, spec.threads)
    duration = time.perf_counter() - start
    if spec.hamiltonian_out is not None:
        if spec.command == "gadget-build":
            write_hamiltonian(gadget_from_spec(_gadget(options)), spec.hamiltonian_out)
        elif spec.command == "lhz-compile":
            write_hamiltonian(compile_problem(_problems(options)[0], options["C"])[1], spec.hamiltonian_out)
    logger.info("%s finished in %.3f s", spec.command, duration)
    return RunReport(spec.command, options, payload, duration), passed


def parse(argv: Optional[List[str]] = None) -> Tuple[argparse.Namespace, CommandSpec]:
    parser, commands = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config is not None:
        known = command_defaults(pre.command)
        commands[pre.command].set_defaults(**load_config(pre.config, known))
    args = parser.parse_args(argv)
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        raise UsageError("threads", f"must be >= 1, got {threads}")
    options = {k: v for k, v in vars(args).items() if k not in RUNTIME_KEYS}
    spec = CommandSpec(args.command, options, args.output, threads, getattr(args, "hamiltonian_out", None))
    return args, spec


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args, spec = parse(argv)
    except SystemExit as exc:
        if not exc.code:
            return EXIT_OK
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except MultibodyError as exc:
        print(f"multibody: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        log_handle = args.log_file.open("a", encoding="utf-8") if args.log_file else None
    except OSError as exc:
        print(f"multibody: error: log_file: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE
    handler = configure_logging(args.verbose, log_handle)
    try:
        report, passed = run(spec)
        emit_report(report, spec.output)
        if not passed:
            logger.warning("%s: verification failed", spec.command)
            return EXIT_FAILED
        return EXIT_OK
    except (MultibodyError, ValueError) as exc:
        logger.debug("%s aborted", spec.command, exc_info=True)
        print(f"multibody: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        logging.getLogger("multibody").removeHandler(handler)
        if log_handle:
            log_handle.close()

"""Command-line front end.

`pulsecc compile <file.qasm>` compiles an assembly file; `pulsecc bench
<name>` generates and compiles a named benchmark circuit.

Exit codes: 0 success, 2 parse error, 3 mapping/routing error,
4 pulse-optimizer non-convergence, 5 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .asm import ParseError, parse_asm
from .bench import BENCH_NAMES, make_bench
from .gates import Circuit, GateError
from .mapper import MappingError, Topology
from .optctrl import ConvergenceError
from .pipeline import (STRATEGIES, CompileOptions, PipelineError,
                       compile_circuit, write_artifacts)
from .scheduler import ScheduleError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ROUTING = 3
EXIT_OPTIMIZER = 4
EXIT_VERIFY = 5


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--strategy", choices=STRATEGIES, default="cls+agg")
    p.add_argument("--topology", default=None,
                   help="grid:RxC (default: line with one site per qubit)")
    p.add_argument("--max-width", type=int, default=4,
                   help="aggregated-instruction qubit limit")
    p.add_argument("--latency", choices=("table", "oracle"), default="oracle")
    p.add_argument("--dt", type=float, default=0.5, help="pulse step (ns)")
    p.add_argument("--mu-max", type=float, default=0.02,
                   help="coupling amplitude bound (GHz)")
    p.add_argument("--fidelity", type=float, default=0.999)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-iters", type=int, default=600)
    p.add_argument("--out", default=None, help="artifact output directory")
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pulsecc",
        description="pulse-level quantum circuit compiler")
    sub = ap.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compile", help="compile an assembly file")
    pc.add_argument("file", help="circuit assembly file")
    _add_common(pc)

    pb = sub.add_parser("bench", help="compile a generated benchmark")
    pb.add_argument("name", choices=BENCH_NAMES)
    pb.add_argument("--n", type=int, default=None, help="qubit count")
    _add_common(pb)
    return ap


def _options(args) -> CompileOptions:
    topo = Topology.parse(args.topology) if args.topology else None
    return CompileOptions(
        strategy=args.strategy, topology=topo, max_width=args.max_width,
        latency_mode=args.latency, dt=args.dt, mu_max=args.mu_max,
        fidelity=args.fidelity, seed=args.seed, max_iters=args.max_iters)


def _report(result, args):
    m = result.manifest
    if args.out:
        write_artifacts(result, args.out)
    if args.quiet:
        return
    print(f"circuit:   {m['name'] or m['input_digest']}")
    print(f"strategy:  {m['strategy']}  topology: {m['topology']}  "
          f"latency: {m['latency_mode']}")
    print(f"stages:    " + "  ".join(
        f"{k}={v['nodes']}n/{v['depth']}d" for k, v in m["stages"].items()))
    print(f"swaps:     {m['swap_count']}")
    print(f"makespan:  {m['makespan_ns']:.1f} ns "
          f"(baseline {m['baseline_makespan_ns']:.1f} ns, "
          f"speedup {m['speedup']:.2f}x)")
    if result.report is not None:
        print(result.report.summary())
    if args.out:
        print(f"artifacts: {Path(args.out).resolve()}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compile":
            text = Path(args.file).read_text()
            circuit = parse_asm(text)
            circuit.name = Path(args.file).stem
        else:
            circuit = make_bench(args.name, n=args.n)
        result = compile_circuit(circuit, _options(args))
    except (MappingError, ScheduleError, PipelineError) as e:
        print(f"routing error: {e}", file=sys.stderr)
        return EXIT_ROUTING
    except ConvergenceError as e:
        print(f"optimizer error: {e}", file=sys.stderr)
        return EXIT_OPTIMIZER
    except (ParseError, GateError, FileNotFoundError, ValueError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE

    _report(result, args)
    if result.report is not None and not result.report.passed:
        print("verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

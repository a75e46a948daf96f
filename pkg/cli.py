#!/usr/bin/env python3
"""
Command-line front end.

    python cli.py canon state.stab
    python cli.py synth state.stab
    python cli.py ip a.stab b.stab
    python cli.py neighbors state.stab [--list]
    python cli.py enumerate --n 2 [--csv out.csv]
    python cli.py amps state.stab
    python cli.py frame-ip a.frame b.frame
    python cli.py bench --n 20 40 --beta 0.6 1.2 --seed 0 --trials 3 --csv out.csv

Exit codes: 0 ok, 1 other errors, 2 parse errors, 3 dimension mismatch,
4 invariant violation in the input.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from config import configure_logging, get_settings
from errors import StabilizerError

logger = logging.getLogger(__name__)


def _cmd_canon(args) -> int:
    from tableau import format_stab, read_stab

    m = read_stab(args.file)
    m.canonicalize()
    sys.stdout.write(format_stab(m))
    return 0


def _cmd_synth(args) -> int:
    from gates import format_qc
    from synth import basis_norm_circuit
    from tableau import read_stab

    circuit, bits = basis_norm_circuit(read_stab(args.file))
    sys.stdout.write(format_qc(circuit))
    print(f"# basis {''.join(map(str, bits))}")
    return 0


def _cmd_ip(args) -> int:
    from metric import inner_product
    from tableau import read_stab

    result = inner_product(read_stab(args.a), read_stab(args.b))
    if result.orthogonal:
        print(f"0 ≈ {0.0:.8f} (orthogonal)")
        print("s = orthogonal")
    else:
        print(result.format())
        print(f"s = {result.s_exponent}")
    return 0


def _cmd_neighbors(args) -> int:
    from geometry import generators_text, nearest_neighbors
    from tableau import read_stab

    neighbor_set = nearest_neighbors(read_stab(args.file))
    print(len(neighbor_set))
    if args.list:
        for state in neighbor_set.neighbors:
            print(generators_text(state))
    return 0


def _cmd_enumerate(args) -> int:
    from geometry import enumerate_states, states_report

    report = states_report(enumerate_states(args.n))
    for row in report.itertuples(index=False):
        print(f"{row.amplitudes} | {row.generators} | {row.angle_label}")
    if args.csv:
        report.to_csv(args.csv, index=False)
        logger.info(f"[CLI] wrote {len(report)} states to {args.csv}")
    return 0


def _cmd_amps(args) -> int:
    from oracle import matrix_to_state
    from tableau import read_stab

    state = matrix_to_state(read_stab(args.file))
    for index, amplitude in enumerate(state.amplitudes):
        bits = format(index, f"0{state.n}b")
        print(f"{bits} {amplitude.real:+.8f} {amplitude.imag:+.8f}")
    return 0


def _cmd_frame_ip(args) -> int:
    from frames import frame_inner_product, read_frame

    value = frame_inner_product(read_frame(args.a), read_frame(args.b))
    print(f"{value:.8f}")
    return 0


def _cmd_bench(args) -> int:
    from bench import BenchConfig, loglog_slope, quadratic_fit, run_sweep, write_csv

    cfg = BenchConfig(
        n_values=args.n,
        betas=args.beta,
        trials=args.trials,
        seed=args.seed if args.seed is not None else get_settings().default_seed,
        special_cases=not args.no_special,
    )
    result = run_sweep(cfg)
    print(result.summary.to_string(index=False))
    if len(cfg.n_values) > 1:
        for beta in cfg.betas:
            print(f"beta={beta}: log-log slope {loglog_slope(result.summary, beta):.3f}")
        c, r_squared = quadratic_fit(result.summary)
        print(f"gate count ~ {c:.4f} n^2 (R^2 = {r_squared:.4f})")
    if args.csv:
        write_csv(result.trials, args.csv)
        logger.info(f"[CLI] wrote {len(result.trials)} trials to {args.csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabkit", description="Stabilizer-state geometry toolkit.")
    parser.add_argument("--log-level", default=None, help="Logging level (default from STABKIT_LOG_LEVEL).")
    sub = parser.add_subparsers(dest="command", required=True)

    canon = sub.add_parser("canon", help="Print the canonical form of a .stab file.")
    canon.add_argument("file")
    canon.set_defaults(handler=_cmd_canon)

    synth = sub.add_parser("synth", help="Print the basis-normalization circuit and basis bits.")
    synth.add_argument("file")
    synth.set_defaults(handler=_cmd_synth)

    ip = sub.add_parser("ip", help="Inner-product magnitude of two .stab files.")
    ip.add_argument("a")
    ip.add_argument("b")
    ip.set_defaults(handler=_cmd_ip)

    neighbors = sub.add_parser("neighbors", help="Count (and optionally list) nearest neighbours.")
    neighbors.add_argument("file")
    neighbors.add_argument("--list", action="store_true")
    neighbors.set_defaults(handler=_cmd_neighbors)

    enumerate_ = sub.add_parser("enumerate", help="List every n-qubit stabilizer state with its angle to |0...0>.")
    enumerate_.add_argument("--n", type=int, required=True)
    enumerate_.add_argument("--csv", default=None)
    enumerate_.set_defaults(handler=_cmd_enumerate)

    amps = sub.add_parser("amps", help="Dense amplitudes of a .stab file.")
    amps.add_argument("file")
    amps.set_defaults(handler=_cmd_amps)

    frame_ip = sub.add_parser("frame-ip", help="Frame inner product of two .frame files.")
    frame_ip.add_argument("a")
    frame_ip.add_argument("b")
    frame_ip.set_defaults(handler=_cmd_frame_ip)

    bench = sub.add_parser("bench", help="Time inner products on random states.")
    bench.add_argument("--n", type=int, nargs="+", required=True)
    bench.add_argument("--beta", type=float, nargs="+", default=[0.6])
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--csv", default=None)
    bench.add_argument("--no-special", action="store_true", help="Skip the |0...0> and GHZ sweeps.")
    bench.set_defaults(handler=_cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except StabilizerError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

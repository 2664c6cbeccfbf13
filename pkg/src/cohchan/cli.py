"""Command-line interface: ``cohchan {sweep,figure,verify,coeffs,report}``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from cohchan import closedform
from cohchan.channel import ChannelKind, CorrelatedChannel, evolve
from cohchan.coherence import maximally_coherent_state, report
from cohchan.errors import CohchanError
from cohchan.sweep import SweepConfig, reproduce_figure, run_sweep, write_output
from cohchan.verify import verify

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default; invalid usage must exit 1 here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(x: float) -> str:
    # round away sub-1e-12 noise so the text is stable; +0.0 turns -0.0 into 0
    return format(round(float(x), 12) + 0.0, ".12g")


def format_report(kind: ChannelKind, n: int, p: float, mu: float, rep) -> str:
    lines = [
        f"kind={kind.value}",
        f"n={n}",
        f"p={_fmt(p)}",
        f"mu={_fmt(mu)}",
        f"c_l1={_fmt(rep.c_l1)}",
        f"c_re={_fmt(rep.c_re)}",
        f"c_l1_norm={_fmt(rep.c_l1_normalized)}",
        f"c_re_norm={_fmt(rep.c_re_normalized)}",
        f"local_c_re={','.join(_fmt(v) for v in rep.local_c_re)}",
        f"uqc={_fmt(rep.uqc)}",
        f"mutual_info={_fmt(rep.mutual_information)}",
    ]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cohchan", description="Coherence of multiqubit states in correlated Pauli channels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    p_sweep.add_argument("--config", required=True, help="JSON file with the sweep fields")
    p_sweep.add_argument("--out", help="output path (default: config 'output' or stdout)")
    p_sweep.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel grid workers")

    p_fig = sub.add_parser("figure", help="emit the data behind a coherence figure")
    p_fig.add_argument("--id", type=int, required=True, choices=(1, 2, 3), dest="fig_id")
    p_fig.add_argument("--panel", choices=("a", "b", "c", "d"))
    p_fig.add_argument("--out", help="output path (default stdout)")
    p_fig.add_argument("--format", choices=("csv", "json"), default="csv")

    p_ver = sub.add_parser("verify", help="cross-check closed forms against brute force")
    p_ver.add_argument("--n-max", type=int, default=5, help="largest qubit count checked (1-7)")

    p_coef = sub.add_parser("coeffs", help="print an l1 closed-form coefficient table")
    p_coef.add_argument("--family", required=True, choices=closedform.FAMILIES)
    p_coef.add_argument("--n", type=int, required=True)

    p_rep = sub.add_parser("report", help="coherence report of the channel output for the maximally coherent input")
    p_rep.add_argument("--channel", required=True, help="phaseflip, bitflip, bitphaseflip or depolarizing")
    p_rep.add_argument("--p", type=float, required=True)
    p_rep.add_argument("--mu", type=float, required=True)
    p_rep.add_argument("--n", type=int, required=True)
    return parser


def _cmd_sweep(args) -> int:
    config = SweepConfig.from_json(args.config)
    result = run_sweep(config, workers=max(1, args.workers))
    write_output(result, args.format or config.format, args.out or config.output)
    return EXIT_OK


def _cmd_figure(args) -> int:
    result = reproduce_figure(args.fig_id, args.panel)
    write_output(result, args.format, args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    rep = verify(args.n_max)
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAILED


def _cmd_coeffs(args) -> int:
    table = closedform.coefficients(args.family, args.n)
    print(" ".join(str(v) for v in table.values))
    return EXIT_OK


def _cmd_report(args) -> int:
    channel = CorrelatedChannel(args.channel, args.p, args.mu, args.n)
    rep = report(evolve(maximally_coherent_state(args.n), channel))
    sys.stdout.write(format_report(channel.kind, args.n, args.p, args.mu, rep))
    return EXIT_OK


COMMANDS = {
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "verify": _cmd_verify,
    "coeffs": _cmd_coeffs,
    "report": _cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except (CohchanError, OSError) as exc:
        print(f"cohchan {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

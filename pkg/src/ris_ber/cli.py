"""Command-line front end.

    ris-ber sweep -N 4 -L 3 --snr-db 0:30:2 --method exact_chf --method mc_semi
    ris-ber point -N 2 -L 4 --snr-db 20
    ris-ber fig1 --out fig1.csv
    ris-ber validate --level quick

Every subcommand except ``validate`` writes CSV; ``validate`` writes one
JSON record per check.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from typing import Iterator, Sequence, TextIO

from .channel import RisConfig
from .errors import DomainError
from .specfun import Tolerance
from .sweep import BerPoint, Method, SweepRequest, parse_snr_range, run_sweep, write_csv
from .validate import LEVELS, run_validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ARGS = 2
EXIT_ALL_FAILED = 3

FIG1_LEVELS = (2, 3, 4)
FIG1_METHODS = (Method.EXACT_CHF, Method.ASYM, Method.MC_SEMI)
FIG2_PAIRS = ((2, 3), (2, 4), (4, 3), (4, 4), (6, 3), (6, 4))
FIG2_METHODS = (Method.EXACT_CHF, Method.ASYM)

log = logging.getLogger("ris_ber")


class _ArgError(Exception):
    pass


def _snr(text: str) -> tuple[float, float, float]:
    try:
        return parse_snr_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pairs(text: str) -> tuple[tuple[int, int], ...]:
    # "2x3,4x4" -> ((2, 3), (4, 4))
    try:
        out = []
        for item in text.split(","):
            n, l = item.lower().split("x")
            out.append((int(n), int(l)))
        return tuple(out)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad pair list {text!r}; expected e.g. 2x3,4x4") from None


def _add_common(p: argparse.ArgumentParser, *, config: bool, snr: str | None, methods: bool) -> None:
    if config:
        p.add_argument("-N", "--elements", type=int, required=True, help="number of RIS elements")
        p.add_argument("-L", "--levels", type=int, required=True, help="phase quantization levels (>= 2)")
    p.add_argument("--snr-db", type=_snr, default=_snr(snr) if snr else None, required=snr is None,
                   help="SNR in dB as start:stop:step or a single value")
    if methods:
        p.add_argument("--method", action="append", choices=[m.value for m in Method],
                       help="BER method; repeat for several (default exact_chf)")
    p.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples per point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gcq-nodes", type=int, default=20, help="nodes for the exact_chf_gcq method")
    p.add_argument("--tol", type=float, default=Tolerance().rel_tol, help="relative tolerance of the CHF inversion")
    p.add_argument("--out", default="-", help="output path or '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ris-ber", description="BER of RIS-assisted BPSK with quantized phases.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="BER over an SNR range")
    _add_common(p, config=True, snr=None, methods=True)

    p = sub.add_parser("point", help="BER at a single SNR")
    _add_common(p, config=True, snr=None, methods=True)

    p = sub.add_parser("fig1", help="N=5, L in {2,3,4}, 0-30 dB")
    _add_common(p, config=False, snr="0:30:1", methods=False)

    p = sub.add_parser("fig2", help="several (N, L) pairs, 0-40 dB")
    _add_common(p, config=False, snr="0:40:2", methods=False)
    p.add_argument("--pairs", type=_pairs, default=FIG2_PAIRS, help="comma-separated NxL pairs, e.g. 2x3,4x4")

    p = sub.add_parser("validate", help="run the self-check suite")
    p.add_argument("--level", choices=LEVELS, default="quick")
    p.add_argument("--out", default="-", help="output path or '-' for stdout")
    return parser


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _request(args, n: int, l: int, methods: Sequence[Method]) -> SweepRequest:
    start, stop, step = args.snr_db
    try:
        return SweepRequest(
            config=RisConfig(n, l),
            rho_db_start=start,
            rho_db_stop=stop,
            rho_db_step=step,
            methods=tuple(methods),
            n_samples=args.samples,
            seed=args.seed,
            gcq_nodes=args.gcq_nodes,
            tol=Tolerance(rel_tol=args.tol),
        )
    except (DomainError, ValueError) as exc:
        raise _ArgError(str(exc)) from None


def _requests(args) -> list[SweepRequest]:
    if args.command == "fig1":
        return [_request(args, 5, l, FIG1_METHODS) for l in FIG1_LEVELS]
    if args.command == "fig2":
        return [_request(args, n, l, FIG2_METHODS) for n, l in args.pairs]
    if args.command == "point" and args.snr_db[0] != args.snr_db[1]:
        raise _ArgError("point takes a single SNR value")
    methods = [Method(m) for m in args.method] if args.method else [Method.EXACT_CHF]
    return [_request(args, args.elements, args.levels, methods)]


def _check_args(args) -> None:
    if args.samples < 1:
        raise _ArgError("--samples must be positive")
    if args.gcq_nodes < 1:
        raise _ArgError("--gcq-nodes must be positive")


def _run_curves(args) -> int:
    _check_args(args)
    requests = _requests(args)
    points: list[BerPoint] = []
    with _open_out(args.out) as out:
        write_csv([], out)
        for req in requests:
            batch = run_sweep(req)
            write_csv(batch, out, header=False)
            out.flush()
            points.extend(batch)
    if points and all(p.failed for p in points):
        log.error("every point failed to converge")
        return EXIT_ALL_FAILED
    return EXIT_OK


def _run_validate(args) -> int:
    failed = 0
    with _open_out(args.out) as out:
        for res in run_validate(args.level):
            out.write(res.to_json() + "\n")
            out.flush()
            if not res.passed:
                failed += 1
                log.warning("check failed: %s (measured %.3g, allowed %.3g)", res.name, res.measured, res.allowed)
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "validate":
            return _run_validate(args)
        return _run_curves(args)
    except _ArgError as exc:
        parser.error(str(exc))  # exits with status 2
    except OSError as exc:
        print(f"ris-ber: {exc}", file=sys.stderr)
        return EXIT_ARGS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

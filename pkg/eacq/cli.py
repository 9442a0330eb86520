"""
Command-line interface: ``eacq <command> ...``.

Commands::

    validate  <file>                          parse, build, print bracket and dimension checks
    info      <code>                          S_Q and S_C generators as Pauli strings
    distance  <code> --max-weight W           distance search report
    table     <code> -t T -o FILE             build and write a decoder table
    simulate  <code> --table FILE --p P ...   Monte Carlo trials, CSV on stdout
    transform <code> --enhance I J | --strip | --drop-classical
    catalog                                   list built-in codes

``<code>`` is an ``eacq v1`` file or ``catalog:<name>``.  Exit status is 0
on success, 1 on a domain error (message on stderr) and 2 on a usage
error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from eacq import __version__
from eacq.catalog import default_registry
from eacq.code import (
    EacqCode,
    drop_classical,
    enhance,
    generator_kinds,
    readout_generators,
    stabilizer_generators,
    strip,
)
from eacq.codefile import dump_code, read_code_file
from eacq.config import DEFAULT_SETTINGS, EacqSettings, load_settings_from_yaml
from eacq.correction import (
    UncorrectableErrorSet,
    build_decoder,
    distance,
    read_decode_table,
    write_decode_table,
)
from eacq.journal import RunJournal
from eacq.models import ChannelSpec
from eacq.pauli import format_pauli
from eacq.simulator import run_trials, write_trials_csv

CATALOG_PREFIX = "catalog:"

DOMAIN_ERRORS = (ValueError, KeyError, FileNotFoundError, RuntimeError, UncorrectableErrorSet)


def _resolve_code(source: str, journal: Optional[RunJournal]) -> EacqCode:
    if source.startswith(CATALOG_PREFIX):
        return default_registry().get(source[len(CATALOG_PREFIX):]).code
    return read_code_file(source, journal=journal)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    code = _resolve_code(args.code, journal)
    print(code.bracket())
    print(f"  s = {code.s}  e = {code.e}  c1 = {code.c1}  c2 = {code.c2}")
    print(f"  q = n - s - e = {code.n} - {code.s} - {code.e} = {code.q}")
    print(f"  c = c1 + 2 c2 = {code.c}")
    print(f"  rows(h_quantum) = s + 2e = {code.r}")
    print(f"  rows(h_classical) = s + 2e - c = {code.num_checks}")
    print(f"  S_Q: {code.s - code.c1} isotropic, {code.e - code.c2} symplectic pairs")
    return 0


def cmd_info(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    code = _resolve_code(args.code, journal)
    print(code.bracket())
    print("S_Q generators:")
    for j, (op, kind) in enumerate(zip(stabilizer_generators(code), generator_kinds(code)), start=1):
        label = "S_Q,I" if kind == "I" else "S_Q,S"
        print(f"  g{j:<3} {format_pauli(op):<{code.n + 2}} {label}")
    print("S_C readout generators:")
    for j, op in enumerate(readout_generators(code), start=1):
        print(f"  g'{j:<2} {format_pauli(op)}")
    return 0


def cmd_distance(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    code = _resolve_code(args.code, journal)
    threads = args.threads if args.threads is not None else settings.distance.threads
    report = distance(
        code,
        args.max_weight,
        threads=threads,
        direct_limit=settings.distance.direct_enumeration_limit,
        journal=journal,
    )
    print(report.summary())
    if report.witness is not None:
        print(f"witness: {report.witness}")
    print(f"strategy: {report.strategy.value}  candidates: {report.candidates}")
    return 0


def cmd_table(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    code = _resolve_code(args.code, journal)
    t = args.t if args.t is not None else settings.decoder.t
    table = build_decoder(code, t, journal=journal)
    write_decode_table(table, args.output)
    print(f"wrote {len(table)} syndromes (t = {t}) to {args.output}")
    return 0


def cmd_simulate(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    code = _resolve_code(args.code, journal)
    table = read_decode_table(args.table, code, journal=journal)
    sim = settings.simulation
    trials = args.trials if args.trials is not None else sim.trials
    seed = args.seed if args.seed is not None else sim.seed
    threads = args.threads if args.threads is not None else sim.threads
    summaries = [
        run_trials(
            code,
            table,
            ChannelSpec(model=sim.channel, p=p, seed=seed),
            trials,
            threads=threads,
            journal=journal,
        )
        for p in args.p
    ]
    write_trials_csv(summaries, sys.stdout)
    return 0


def cmd_transform(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    code = _resolve_code(args.code, journal)
    if args.enhance is not None:
        result = enhance(code, args.enhance[0], args.enhance[1], journal=journal)
    elif args.strip:
        result = strip(code, journal=journal)
    else:
        result = drop_classical(code, journal=journal)
    _emit(f"# {result.bracket()} from {args.code}\n" + dump_code(result), args.output)
    return 0


def cmd_catalog(args, settings: EacqSettings, journal: Optional[RunJournal]) -> int:
    registry = default_registry()
    for entry in registry.list_entries(journal=journal):
        print(f"{entry.name:<18} {entry.params.bracket():<22} {entry.provenance}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eacq",
        description="Entanglement-assisted, classically enhanced quantum codes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML settings file (top-level 'eacq' key)")
    parser.add_argument("--journal", help="write a hash-chained run journal (JSON) here")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="parse and build a code file")
    p.add_argument("code")
    p.set_defaults(handler=cmd_validate)

    p = commands.add_parser("info", help="print stabilizer and readout generators")
    p.add_argument("code")
    p.set_defaults(handler=cmd_info)

    p = commands.add_parser("distance", help="search for the code distance")
    p.add_argument("code")
    p.add_argument("--max-weight", type=int, required=True)
    p.add_argument("--threads", type=int)
    p.set_defaults(handler=cmd_distance)

    p = commands.add_parser("table", help="build a syndrome decoder table")
    p.add_argument("code")
    p.add_argument("-t", type=int, help="largest error weight covered")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_table)

    p = commands.add_parser("simulate", help="Monte Carlo trials under depolarizing noise")
    p.add_argument("code")
    p.add_argument("--table", required=True)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.set_defaults(handler=cmd_simulate)

    p = commands.add_parser("transform", help="enhance, strip or drop the classical part")
    p.add_argument("code")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--enhance", type=int, nargs=2, metavar=("I", "J"))
    mode.add_argument("--strip", action="store_true")
    mode.add_argument("--drop-classical", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_transform)

    p = commands.add_parser("catalog", help="list built-in codes")
    p.set_defaults(handler=cmd_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    journal = RunJournal() if args.journal else None
    try:
        settings = load_settings_from_yaml(args.config) if args.config else DEFAULT_SETTINGS
        return args.handler(args, settings, journal)
    except DOMAIN_ERRORS as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 1
    finally:
        if journal is not None:
            journal.write_json(args.journal)

"""Command-line interface.

    qsreal check      file.qs [...]   # class + preservation + realizability
    qsreal extract    file.qs [...]   # Hamiltonian and coupling, if realizable
    qsreal explain    file.qs [...]   # every condition residual, block layout
    qsreal synthesize file.qs [...]   # oscillator (H, L) -> system description

Exit codes: 0 all checks passed / success, 1 some check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .oracle import OracleReport, run_oracle
from .parser import ParseError, SystemDescription, parse_description, print_description
from .realizability import RealizabilityReport, build_report, synthesize
from .reports import render_explain, render_json, render_text, report_to_dict
from .scalars import ScalarError
from .systems import double_up

__all__ = ["main"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _parse_params(text: str) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    if not text:
        return out
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ValueError(f"bad parameter assignment {piece!r} "
                             "(expected name=value)")
        name, _, value = piece.partition("=")
        try:
            out[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad value for {name.strip()!r}: {value.strip()!r}") from exc
    return out


def _parse_nbar(text: str):
    if text in ("graded", "literal"):
        return text
    try:
        value = int(text)
    except ValueError:
        raise ValueError("--nbar takes 'graded', 'literal' or an integer")
    if value <= 0:
        raise ValueError("--nbar integer must be positive")
    return value


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("files", nargs="+", help=".qs description files")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--nbar", default=None, metavar="MODE",
                     help="graded (default), literal, or an explicit integer")
    sub.add_argument("--theta-bar", choices=("physical", "paper"), default=None,
                     help="doubled commutation matrix convention")
    sub.add_argument("--allow-multi-generator", action="store_true",
                     help="tolerate multi-generator monomials in the class check")
    sub.add_argument("--oracle-check", type=int, default=None, metavar="CUTOFF",
                     help="numerically re-verify conditions at this Fock cutoff")
    sub.add_argument("--params", default="", metavar="ASSIGNMENTS",
                     help="exact parameter values for the oracle, e.g. 'b1=2,chi=1/3'")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="numeric oracle tolerance (default 1e-9)")


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qsreal",
        description="Symbolic realizability checks for quantum stochastic models")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("check", "run class membership, preservation and realizability checks"),
        ("extract", "extract the Hamiltonian and coupling operator"),
        ("explain", "print every condition residual in block layout"),
    ):
        _add_common(sub.add_parser(name, help=doc))
    syn = sub.add_parser("synthesize",
                         help="derive the QSDE system of an oscillator (H, L)")
    syn.add_argument("files", nargs="+", help=".qs oscillator descriptions")
    syn.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _load(path: str) -> SystemDescription:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", 0, 0, "input")
    return parse_description(source, filename=path)


def _report_for(desc: SystemDescription, args) -> tuple[RealizabilityReport, OracleReport | None]:
    if desc.kind == "oscillator":
        system = synthesize(desc.to_oscillator())
        name = desc.name + " (synthesized)"
    else:
        system = desc.to_qsystem()
        name = desc.name
    nbar_mode = _parse_nbar(args.nbar) if args.nbar else desc.nbar_mode()
    theta_convention = args.theta_bar or desc.theta_convention()
    report = build_report(
        system, name, nbar_mode=nbar_mode, theta_convention=theta_convention,
        strict_shape=not args.allow_multi_generator)
    oracle = None
    if args.oracle_check is not None:
        sigma = _parse_params(args.params)
        d = double_up(system, theta_convention)
        oracle = run_oracle(d, report.extraction, args.oracle_check, sigma,
                            tol=args.tol)
    return report, oracle


def _run_report_command(args, out) -> int:
    worst = EXIT_OK
    for path in args.files:
        desc = _load(path)
        report, oracle = _report_for(desc, args)
        if args.format == "json":
            doc = report_to_dict(report, args.command, desc.mode_names,
                                 oracle=oracle)
            out.write(render_json(doc))
        elif args.command == "explain":
            out.write(render_explain(report, desc.mode_names))
            if oracle is not None:
                for c in oracle.checks:
                    out.write(f"oracle {c.name}: max_error={c.max_error:.3e} "
                              f"{'PASS' if c.passed else 'FAIL'}\n")
        else:
            out.write(render_text(report, args.command, desc.mode_names,
                                  oracle=oracle))
        ok = report.realizable and (oracle is None or oracle.passed)
        worst = max(worst, EXIT_OK if ok else EXIT_CHECK_FAILED)
    return worst


def _run_synthesize(args, out) -> int:
    for path in args.files:
        desc = _load(path)
        if desc.kind != "oscillator":
            raise ParseError(
                f"{path}: synthesize needs an oscillator description "
                "(H = ..., L[j] = ...)", 0, 0, "input")
        system = synthesize(desc.to_oscillator())
        from dataclasses import replace

        out_desc = replace(
            desc, kind="system", hamiltonian=None, coupling=None,
            A=system.A, B=system.B, C=system.C, D=system.D)
        text = print_description(out_desc)
        if args.format == "json":
            out.write(render_json({
                "schema": 1,
                "system": desc.name,
                "command": "synthesize",
                "description": text,
            }))
        else:
            out.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "synthesize":
            return _run_synthesize(args, out)
        return _run_report_command(args, out)
    except ParseError as exc:
        print(f"qsreal: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (ScalarError, ValueError) as exc:
        print(f"qsreal: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())

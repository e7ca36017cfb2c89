"""Report rendering: human-readable text and the versioned structured format.

The structured form is plain JSON with a ``schema: 1`` marker; it is built
from ordered dicts of JSON-native values only, so serializing is
deterministic (byte-identical for identical inputs) and parsing it back
yields the same document.
"""

from __future__ import annotations

import json
from typing import Sequence

from .matrices import OpMatrix, OpVector
from .ops import OpPoly, format_op_poly
from .oracle import OracleReport
from .realizability import RealizabilityReport
from .systems import ConditionResidual

__all__ = [
    "render_explain",
    "render_json",
    "render_text",
    "report_to_dict",
]


def _residual_json(residual, names: Sequence[str] | None):
    if isinstance(residual, OpPoly):
        return format_op_poly(residual, names)
    if isinstance(residual, OpVector):
        return [format_op_poly(e, names) for e in residual]
    if isinstance(residual, OpMatrix):
        return [[format_op_poly(e, names) for e in row] for row in residual.entries]
    raise TypeError(f"unexpected residual type {type(residual)!r}")


def _condition_json(cond: ConditionResidual, names, include_residual: bool) -> dict:
    out = {"name": cond.name, "passed": cond.passed}
    if cond.note:
        out["note"] = cond.note
    if include_residual and not cond.passed:
        out["residual"] = _residual_json(cond.residual, names)
    return out


def report_to_dict(report: RealizabilityReport, command: str,
                   mode_names: Sequence[str] | None = None,
                   oracle: OracleReport | None = None,
                   include_residuals: bool = True) -> dict:
    """The versioned structured report (JSON-native values only)."""
    names = tuple(mode_names) if mode_names else None
    cls = report.class_report
    doc: dict = {
        "schema": 1,
        "system": report.system_name,
        "command": command,
        "conventions": {
            "theta_bar": report.theta_convention,
            "extraction_mode": report.nbar_mode
            if isinstance(report.nbar_mode, (str, int)) else str(report.nbar_mode),
        },
        "nbar": {
            "literal": cls.nbar_literal,
            "graded": list(cls.nbar_graded),
        },
        "class": {
            "passed": cls.passed,
            "conditions": [
                _condition_json(c, names, include_residuals)
                for c in cls.conditions
            ],
        },
        "preservation": [
            _condition_json(c, names, include_residuals)
            for c in report.preservation
        ],
        "realizability": [
            _condition_json(c, names, include_residuals)
            for c in report.realizability
        ],
    }
    if report.hamiltonian is not None:
        doc["hamiltonian"] = format_op_poly(report.hamiltonian, names)
        doc["coupling"] = [format_op_poly(e, names) for e in report.coupling]
        doc["advisory"] = None
    else:
        doc["hamiltonian"] = None
        doc["coupling"] = None
        if report.extraction is not None:
            doc["advisory"] = {
                "hamiltonian": format_op_poly(report.extraction.hamiltonian, names),
                "self_adjoint": report.extraction.self_adjoint,
                "reproduces_generator": report.extraction.reproduces_generator,
                "reproduction_residual": [
                    format_op_poly(e, names)
                    for e in report.extraction.reproduction_residual
                ],
            }
        else:
            doc["advisory"] = {"error": report.extraction_error}
    if oracle is not None:
        doc["oracle"] = {
            "cutoff": oracle.cutoff,
            "tolerance": oracle.tolerance,
            "passed": oracle.passed,
            "checks": [
                {"name": c.name, "max_error": c.max_error, "passed": c.passed}
                for c in oracle.checks
            ],
        }
    doc["verdict"] = "realizable" if report.realizable else "not-realizable"
    return doc


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _status(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def render_text(report: RealizabilityReport, command: str,
                mode_names: Sequence[str] | None = None,
                oracle: OracleReport | None = None) -> str:
    names = tuple(mode_names) if mode_names else None
    cls = report.class_report
    lines = [f"== {report.system_name}: {command} =="]
    lines.append(
        f"conventions: theta_bar={report.theta_convention}, "
        f"extraction={report.nbar_mode}")
    graded = ",".join(str(d) for d in cls.nbar_graded) or "-"
    lines.append(
        f"degree bound: literal={cls.nbar_literal if cls.nbar_literal is not None else '-'}"
        f" graded={{{graded}}}")
    lines.append(f"class membership: {_status(cls.passed)}")
    for c in cls.conditions:
        note = f"  ({c.note})" if c.note else ""
        lines.append(f"  [{_status(c.passed)}] {c.name}{note}")
    lines.append(f"commutation preservation: {_status(report.preserves_commutation)}")
    for c in report.preservation:
        lines.append(f"  [{_status(c.passed)}] {c.name}")
    lines.append(f"physical realizability: {_status(report.realizable)}")
    for c in report.realizability:
        note = f"  ({c.note})" if c.note else ""
        lines.append(f"  [{_status(c.passed)}] {c.name}{note}")
    if report.hamiltonian is not None:
        lines.append(f"hamiltonian: {format_op_poly(report.hamiltonian, names)}")
        lines.append("coupling:")
        for idx, entry in enumerate(report.coupling):
            lines.append(f"  L[{idx + 1}] = {format_op_poly(entry, names)}")
    elif report.extraction is not None:
        lines.append("advisory extraction (checks failed):")
        lines.append(
            f"  hamiltonian candidate: "
            f"{format_op_poly(report.extraction.hamiltonian, names)}")
        lines.append(
            f"  reproduces generator: {report.extraction.reproduces_generator}")
    else:
        lines.append(f"extraction failed: {report.extraction_error}")
    if oracle is not None:
        lines.append(f"numeric oracle (cutoff {oracle.cutoff}): "
                     f"{_status(oracle.passed)}")
        for c in oracle.checks:
            lines.append(f"  [{_status(c.passed)}] {c.name}"
                         f"  max_error={c.max_error:.3e}")
    lines.append(f"verdict: {'realizable' if report.realizable else 'not-realizable'}")
    return "\n".join(lines) + "\n"


def _format_block(residual, names) -> list[str]:
    if isinstance(residual, OpPoly):
        return ["  " + format_op_poly(residual, names)]
    if isinstance(residual, OpVector):
        return [f"  [{format_op_poly(e, names)}]" for e in residual]
    if isinstance(residual, OpMatrix):
        cells = [[format_op_poly(e, names) for e in row] for row in residual.entries]
        if not cells or not cells[0]:
            return ["  (empty)"]
        widths = [max(len(cells[i][j]) for i in range(len(cells)))
                  for j in range(len(cells[0]))]
        out = []
        for row in cells:
            padded = [cell.ljust(w) for cell, w in zip(row, widths)]
            out.append("  [ " + " | ".join(padded) + " ]")
        return out
    return [f"  {residual!r}"]


def render_explain(report: RealizabilityReport,
                   mode_names: Sequence[str] | None = None) -> str:
    """Every condition with its residual printed as a block matrix."""
    names = tuple(mode_names) if mode_names else None
    lines = [f"== {report.system_name}: condition residuals =="]
    sections = [
        ("class membership", report.class_report.conditions),
        ("commutation preservation (system noise table)", report.preservation),
        ("physical realizability (signature noise table)", report.realizability),
    ]
    for title, conditions in sections:
        lines.append(f"-- {title} --")
        for c in conditions:
            note = f"  ({c.note})" if c.note else ""
            lines.append(f"[{_status(c.passed)}] {c.name}{note}")
            lines.extend(_format_block(c.residual, names))
    if report.extraction is not None:
        lines.append("-- extraction --")
        lines.append(f"hamiltonian candidate ({report.extraction.mode}):")
        lines.append("  " + format_op_poly(report.extraction.hamiltonian, names))
        lines.append(f"self-adjoint: {report.extraction.self_adjoint}")
        lines.append("generator-reproduction residual:")
        lines.extend(_format_block(report.extraction.reproduction_residual, names))
    elif report.extraction_error:
        lines.append(f"-- extraction failed: {report.extraction_error} --")
    lines.append(
        f"verdict: {'realizable' if report.realizable else 'not-realizable'}")
    return "\n".join(lines) + "\n"

"""Machine-readable output: JSON reports and delimited tables.

Every JSON document the command line emits is validated against the schema
shipped at schemas/report.schema.json before it reaches the output stream.
The schema is the public contract for downstream consumers; a validation
failure here is a bug in this package, not in the caller's input, so it
propagates as-is.
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources

import numpy as np
from jsonschema import Draft202012Validator

from .mi import MiEstimate
from .rbtest import RbTestResult, window_fraction
from .simulate import SIMULATION_COLUMNS, CellSummary

_VERDICT_TOKENS = {
    "EVIDENCE_FOR": "evidence_for",
    "EVIDENCE_AGAINST": "evidence_against",
    "NEUTRAL": "neutral",
}


def report_schema() -> dict:
    """The JSON schema shipped with the package, parsed."""
    path = resources.files("bnpmi").joinpath("schemas/report.schema.json")
    with path.open(encoding="utf-8") as handle:
        return json.load(handle)


def validate_report(doc: dict) -> dict:
    """Check a report against the shipped schema; returns the document."""
    Draft202012Validator(report_schema()).validate(doc)
    return doc


def config_echo(**fields) -> dict:
    """Configuration block for a report; None-valued entries are dropped."""
    return {key: value for key, value in fields.items() if value is not None}


def draws_summary(draws) -> dict:
    """Five-number summary plus mean of a Monte Carlo draw set."""
    values = draws.values
    qs = np.quantile(values, [0.25, 0.5, 0.75])
    return {
        "provenance": draws.provenance,
        "count": int(values.size),
        "min": float(values.min()),
        "q1": float(qs[0]),
        "median": float(qs[1]),
        "q3": float(qs[2]),
        "max": float(values.max()),
        "mean": float(values.mean()),
    }


def estimate_report(estimate: MiEstimate, config: dict, seed: int,
                    wall_time_s: float) -> dict:
    return validate_report({
        "kind": "estimate",
        "point": float(estimate.point),
        "q1": float(estimate.q1),
        "q3": float(estimate.q3),
        "draws": draws_summary(estimate.draws),
        "config": config,
        "seed": int(seed),
        "wall_time_s": float(wall_time_s),
    })


def test_report(result: RbTestResult, config: dict, seed: int,
                wall_time_s: float) -> dict:
    c = result.config.c
    return validate_report({
        "kind": "test",
        "rb": float(result.rb),
        "strength": float(result.strength),
        "verdict": _VERDICT_TOKENS[result.verdict.name],
        "verdict_text": result.verdict.value,
        "window": {
            "c": float(c),
            "prior_mass": window_fraction(result.prior_draws, c),
            "posterior_mass": window_fraction(result.posterior_draws, c),
        },
        "prior_draws": draws_summary(result.prior_draws),
        "posterior_draws": draws_summary(result.posterior_draws),
        "config": config,
        "seed": int(seed),
        "wall_time_s": float(wall_time_s),
    })


def elicit_report(chosen_a: float, profile, config: dict, seed: int,
                  wall_time_s: float, target: float = 0.5) -> dict:
    return validate_report({
        "kind": "elicit",
        "chosen_a": float(chosen_a),
        "target": float(target),
        "profile": [{"a": float(a), "probability": float(p)} for a, p in profile],
        "config": config,
        "seed": int(seed),
        "wall_time_s": float(wall_time_s),
    })


def simulate_report(summaries, config: dict, seed: int,
                    wall_time_s: float) -> dict:
    rows = []
    for summary in summaries:
        row = dict(zip(SIMULATION_COLUMNS, summary.row()))
        for key in ("true_mi", "mi_mean", "mse", "rb_mean", "str_mean"):
            row[key] = None if row[key] is None else float(row[key])
        rows.append(row)
    return validate_report({
        "kind": "simulate",
        "columns": list(SIMULATION_COLUMNS),
        "rows": rows,
        "config": config,
        "seed": int(seed),
        "wall_time_s": float(wall_time_s),
    })


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def format_cell(value) -> str:
    """One table cell: full float precision, empty string for missing."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_table(rows, columns=SIMULATION_COLUMNS) -> str:
    """Comma-separated table with a header row and a fixed column order.

    Cells containing the delimiter (distribution labels do) are quoted.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = row.row() if isinstance(row, CellSummary) else row
        writer.writerow([format_cell(cell) for cell in cells])
    return out.getvalue()

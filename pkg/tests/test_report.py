"""JSON report builders, schema gate, and table rendering."""

import json

import numpy as np
import pytest
from jsonschema import Draft202012Validator, ValidationError

from bnpmi import (MiConfig, MiDraws, RbConfig, RbTestResult, Verdict,
                   mi_point_estimate)
from bnpmi.dp import POSTERIOR, PRIOR
from bnpmi.report import (config_echo, draws_summary, elicit_report,
                          estimate_report, format_cell, render_json,
                          render_table, report_schema, simulate_report,
                          validate_report)
from bnpmi.report import test_report as build_test_report
from bnpmi.simulate import CellSummary

_CFG = MiConfig()


def _draws(values, provenance=PRIOR):
    return MiDraws(np.asarray(values, dtype=float), provenance, _CFG)


def test_shipped_schema_is_itself_valid():
    Draft202012Validator.check_schema(report_schema())


def test_config_echo_drops_missing_fields():
    echo = config_echo(a=0.05, k=3, n_atoms=500, draws=10, input=None)
    assert echo == {"a": 0.05, "k": 3, "n_atoms": 500, "draws": 10}


def test_draws_summary_matches_numpy_quantiles():
    values = np.array([0.0, 0.3, 0.1, 0.9, 0.4])
    summary = draws_summary(_draws(values))
    assert summary["provenance"] == "prior"
    assert summary["count"] == 5
    assert summary["min"] == 0.0 and summary["max"] == 0.9
    for key, q in (("q1", 0.25), ("median", 0.5), ("q3", 0.75)):
        assert summary[key] == float(np.quantile(values, q))
    assert summary["mean"] == pytest.approx(values.mean())


def test_estimate_report_is_schema_valid():
    estimate = mi_point_estimate(_draws([0.0, 1.0, 2.0, 3.0], POSTERIOR))
    config = config_echo(a=0.05, k=3, n_atoms=500, draws=4)
    doc = estimate_report(estimate, config, seed=7, wall_time_s=0.25)
    assert doc["kind"] == "estimate"
    assert doc["point"] == 1.5 and doc["q1"] == 0.75 and doc["q3"] == 2.25
    assert doc["draws"]["provenance"] == "posterior"
    validate_report(doc)


def test_schema_gate_rejects_bad_documents():
    with pytest.raises(ValidationError):
        validate_report({"kind": "estimate"})
    estimate = mi_point_estimate(_draws([0.0, 1.0, 2.0, 3.0], POSTERIOR))
    with pytest.raises(ValidationError):
        # config echo must carry the draw budget and atom count
        estimate_report(estimate, {"a": 0.05}, seed=7, wall_time_s=0.1)
    with pytest.raises(ValidationError):
        estimate_report(estimate, config_echo(n_atoms=500, draws=4, extra=1),
                        seed=7, wall_time_s=0.1)


def test_test_report_window_and_verdict():
    prior = _draws([0.0, 0.02, 0.1, 0.2])
    posterior = _draws([0.0, 0.01, 0.02, 0.3], POSTERIOR)
    result = RbTestResult(rb=1.5, strength=0.2, verdict=Verdict.EVIDENCE_FOR,
                          prior_draws=prior, posterior_draws=posterior,
                          config=RbConfig(draws=4))
    doc = build_test_report(result, config_echo(n_atoms=500, draws=4), seed=1,
                            wall_time_s=0.5)
    assert doc["verdict"] == "evidence_for"
    assert doc["verdict_text"] == "evidence for independence"
    assert doc["window"] == {"c": 0.05, "prior_mass": 0.5,
                             "posterior_mass": 0.75}


def test_elicit_report_round_trips_profile():
    profile = [(0.05, 0.2), (1.0, 0.46)]
    doc = elicit_report(1.0, profile, config_echo(n_atoms=500, draws=10),
                        seed=3, wall_time_s=1.0)
    assert doc["chosen_a"] == 1.0 and doc["target"] == 0.5
    assert doc["profile"] == [{"a": 0.05, "probability": 0.2},
                              {"a": 1.0, "probability": 0.46}]


def test_simulate_report_keeps_nulls():
    rows = [CellSummary("ubd(circle)", 50, 3, 2, None, 0.1, None, None, None)]
    doc = simulate_report(rows, config_echo(n_atoms=500, draws=10),
                          seed=5, wall_time_s=2.0)
    assert doc["rows"][0]["true_mi"] is None
    assert doc["rows"][0]["mi_mean"] == 0.1


def test_render_json_round_trips():
    doc = {"kind": "x", "value": 0.1}
    text = render_json(doc)
    assert text.endswith("\n") and json.loads(text) == doc


def test_cell_formatting():
    assert format_cell(None) == ""
    assert format_cell(0.1) == repr(0.1)
    assert format_cell(12) == "12"


def test_render_table_handles_summaries_and_tuples():
    summary = CellSummary("normal(d=2)", 50, 3, 2, None, 0.25, None, None, None)
    text = render_table([summary, ("x", 1, 2, 3, 0.5, 0.5, 0.0, 1.0, 0.1)])
    lines = text.splitlines()
    assert lines[0] == "distribution,n,k,r,true_mi,mi_mean,mse,rb_mean,str_mean"
    assert lines[1] == "normal(d=2),50,3,2,,0.25,,,"
    assert lines[2] == "x,1,2,3,0.5,0.5,0.0,1.0,0.1"


def test_render_table_quotes_cells_containing_the_delimiter():
    summary = CellSummary("t(df=3,d=4)", 50, 3, 2, None, 0.25, None, None, None)
    lines = render_table([summary]).splitlines()
    assert lines[1].startswith('"t(df=3,d=4)",50,')

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from adaptive_ic.cli import main
from adaptive_ic.errors import ConfigurationError
from adaptive_ic.harness import (
    CSV_HEADER, ExperimentConfig, ReportRow, classify, config_from_dict, config_to_dict,
    default_threshold, format_nr, is_suite_failure, parse_adversary, read_csv, run_experiment,
    toggle_matrix, write_csv,
)
from adaptive_ic.adversaries import enumerate_patterns
from adaptive_ic.channel import ABORT


def test_format_nr():
    assert format_nr(Fraction(1, 3)) == "0.333333"
    assert format_nr(Fraction(2, 3)) == "0.666667"
    assert format_nr(0) == "0.000000"
    assert format_nr(math.inf) == "inf"
    # half-even at the sixth digit
    assert format_nr(Fraction(1, 2_000_000)) == "0.000000"
    assert format_nr(Fraction(3, 2_000_000)) == "0.000002"


def test_parse_adversary():
    assert parse_adversary("none") == ("none", None)
    assert parse_adversary("random:0.25") == ("random", 0.25)
    assert parse_adversary("enumerate:3") == ("enumerate", 3)
    for bad in ("random", "random:x", "random:2", "enumerate:-1", "midpoint:1", "chaos"):
        with pytest.raises(ConfigurationError):
            parse_adversary(bad)


def test_default_thresholds():
    assert default_threshold("one_third", 0.1) == Fraction(7, 30)
    assert default_threshold("two_thirds", None) < Fraction(2, 3)
    assert default_threshold("br_half", 0.2) == Fraction(3, 10)
    assert default_threshold("shared_rand", 0.25) == Fraction(3, 4)


def test_classify():
    assert classify(((1, 2), (1, 2)), ((1, 2), (1, 2))) == "correct"
    assert classify((ABORT, (1, 2)), ((1, 2), (1, 2))) == "abort"
    assert classify((ABORT, (1, 3)), ((1, 2), (1, 2))) == "wrong"


def test_config_validation():
    with pytest.raises(ConfigurationError):
        ExperimentConfig("nope")
    with pytest.raises(ConfigurationError):
        ExperimentConfig("one_third", model="adp")
    with pytest.raises(ConfigurationError):
        ExperimentConfig("one_third", trials=0)
    with pytest.raises(ConfigurationError):
        config_from_dict({"protocol": "one_third", "bogus": 1})
    cfg = ExperimentConfig("one_third")
    assert (cfg.model, cfg.epsilon, cfg.n) == ("term", 0.1, 4)
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_toggle_matrix_matches_enumeration():
    rows = [m for chunk in toggle_matrix(7, 3, chunk=10) for m in chunk]
    pats = list(enumerate_patterns(7, 3))
    assert len(rows) == len(pats)
    for m, p in zip(rows, pats):
        assert sorted(int(i) for i in m.nonzero()[0]) == [s for s, _ in p]


def test_run_is_deterministic_and_trials_are_isolated():
    cfg = ExperimentConfig("one_third", adversary="random:0.1", trials=6, seed=7)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert [(r.seed, r.cc, r.nc, r.outcome) for r in a] == [(r.seed, r.cc, r.nc, r.outcome) for r in b]
    more = run_experiment(ExperimentConfig("one_third", adversary="random:0.1", trials=9, seed=7))
    assert [(r.seed, r.nc) for r in more[:6]] == [(r.seed, r.nc) for r in a]
    other = run_experiment(ExperimentConfig("one_third", adversary="random:0.1", trials=6, seed=8))
    assert [r.seed for r in other] != [r.seed for r in a]


def test_csv_round_trip(tmp_path):
    cfg = ExperimentConfig("two_thirds", adversary="enumerate:2", trials=4)
    rows = run_experiment(cfg)
    assert len(rows) == 4 * (1 + 36 + 630)
    path = tmp_path / "runs.csv"
    counts = write_csv(rows, path)
    assert counts["rows"] == len(rows) and counts["suite_failures"] == 0
    text = path.read_text().splitlines()
    assert text[0] == ",".join(CSV_HEADER)
    back = read_csv(path)
    assert [(r.trial, r.cc, r.nc, r.nr, r.outcome, r.within_budget) for r in back] == [
        (r.trial, r.cc, r.nc, r.nr, r.outcome, r.within_budget) for r in rows
    ]


def test_enumeration_refuses_term_protocols():
    with pytest.raises(ConfigurationError):
        run_experiment(ExperimentConfig("one_third", adversary="enumerate:1"))


def test_suite_failure_rule():
    row = ReportRow("p", "a", 0, 0, 10, 1, Fraction(1, 10), 5, "wrong", True)
    assert is_suite_failure(row)
    row.within_budget = False
    assert not is_suite_failure(row)


@settings(max_examples=50, deadline=None)
@given(nc=st.integers(0, 500), cc=st.integers(0, 500))
def test_format_nr_is_six_decimals(nc, cc):
    s = format_nr(Fraction(nc, cc) if cc else (0 if nc == 0 else math.inf))
    if cc:
        assert len(s.split(".")[1]) == 6
        assert abs(float(s) - nc / cc) <= 5e-7
    else:
        assert s == ("0.000000" if nc == 0 else "inf")


# ---------------------------------------------------------------- CLI


def test_cli_missing_protocol(capsys):
    assert main([]) == 2
    assert "--protocol" in capsys.readouterr().err


def test_cli_bad_flag_and_bad_value(capsys):
    assert main(["--protocol", "one_third", "--frobnicate"]) == 2
    assert main(["--protocol", "one_third", "--adversary", "random:7"]) == 2
    assert main(["--protocol", "one_third", "--trials", "x"]) == 2


def test_cli_summary_and_csv(tmp_path, capsys):
    out = tmp_path / "o.csv"
    code = main(["--protocol", "one_third", "--adversary", "random:0.05", "--trials", "5", "--out", str(out),
                 "--summary"])
    assert code == 0
    printed = capsys.readouterr().out
    assert "rows=5" in printed and printed.strip().endswith("PASS")
    assert len(read_csv(out)) == 5


def test_cli_config_overrides_flags(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"protocol": "two_thirds", "adversary": "enumerate:1", "trials": 2}))
    out = tmp_path / "o.csv"
    code = main(["--protocol", "one_third", "--trials", "50", "--config", str(conf), "--out", str(out)])
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 2 * 37 and {r.protocol for r in rows} == {"two_thirds"}
    conf.write_text("[1, 2]")
    assert main(["--config", str(conf)]) == 2
    assert main(["--config", str(tmp_path / "missing.json")]) == 2


def test_cli_reports_suite_failure(capsys):
    # the rolling attack beats the sample protocol at a low noise rate
    assert main(["--protocol", "full_exchange", "--adversary", "rolling", "--trials", "4", "--summary"]) == 1
    text = capsys.readouterr().out
    assert "wrong=4" in text and text.strip().endswith("FAIL")

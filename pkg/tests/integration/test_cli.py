import json

import pytest
from click.testing import CliRunner

from app.cli import cli, expected_dimension, spectral
from app.core.config import settings
from app.core.errors import ParseError
from app.services.cartan import parse_type
from app.services.symalg import SpectralParam


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.setattr(settings, "QCHAR_WORKERS", 1)
    return CliRunner()


def test_spectral_parameter():
    assert spectral("q^3/2", "1/2") == SpectralParam(1, "1/2", "3/2")
    assert spectral("2", "0") == SpectralParam(1, 0, 2)
    with pytest.raises(ParseError):
        spectral("q^x", "0")


# ========== CHARACTERS ==========

def test_qchar_json(runner):
    result = runner.invoke(cli, ["qchar", "--type", "A2-2", "--node", "0", "--k", "2", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["dimension"] == 6
    assert doc["special"] is True
    assert len(doc["character"]["terms"]) == 6


def test_qchar_text(runner):
    result = runner.invoke(cli, ["qchar", "--type", "D4-3", "--node", "1"])
    assert result.exit_code == 0
    assert "dimension 8" in result.stdout


def test_qchar_latex(runner):
    result = runner.invoke(cli, ["qchar", "--type", "A2-2", "--format", "latex"])
    assert result.exit_code == 0
    assert "Z_{0,a}" in result.stdout


@pytest.mark.parametrize("args", [
    ["qchar", "--type", "B3-2"],
    ["qchar", "--type", "A2-2", "--node", "4"],
    ["qchar", "--type", "A2-2", "--k", "-1"],
    ["qchar", "--type", "A2n-2:0"],
])
def test_usage_errors(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2


def test_budget_exceeded(runner):
    result = runner.invoke(cli, ["qchar", "--type", "E6-2", "--node", "3", "--engine", "fold", "--budget", "10"])
    assert result.exit_code == 3
    assert "Budget" in result.output


def test_budget_stays_with_its_invocation(runner):
    before = settings.QCHAR_BUDGET
    capped = runner.invoke(cli, ["qchar", "--type", "A2-2", "--k", "2", "--engine", "fm", "--budget", "2"])
    assert capped.exit_code == 3
    assert settings.QCHAR_BUDGET == before
    result = runner.invoke(cli, ["qchar", "--type", "A2-2", "--k", "2", "--engine", "fm"])
    assert result.exit_code == 0


def test_tableaux_list(runner):
    result = runner.invoke(cli, ["tableaux", "--type", "D4-3", "--node", "1", "--k", "2", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["count"] == 35
    assert doc["tableaux"][0]["rows"] == [[1, 1]]


def test_tableaux_character(runner):
    result = runner.invoke(cli, ["tableaux", "--type", "A4-2", "--node", "1", "--chars", "--format", "json"])
    assert result.exit_code == 0
    assert len(json.loads(result.stdout)["terms"]) == 5


def test_tableaux_unsupported(runner):
    result = runner.invoke(cli, ["tableaux", "--type", "E6-2", "--node", "1"])
    assert result.exit_code == 2


# ========== IDENTITIES ==========

def test_tsystem(runner):
    result = runner.invoke(cli, ["tsystem", "--type", "D4-3", "--node", "2", "--k", "1", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["ok"] is True
    assert doc["residual"] == {"terms": []}


def test_tsystem_sweep(runner):
    result = runner.invoke(cli, ["tsystem", "--type", "A4-2", "--k", "2", "--sweep"])
    assert result.exit_code == 0
    assert result.stdout.count("✅") == 4


def test_tsystem_sweep_json_at_a_shift(runner):
    args = ["tsystem", "--type", "D4-3", "--k", "1", "--sweep", "--shift", "q^3/2", "--phase", "1/2", "--format", "json"]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["ok"] is True
    assert [(r["node"], r["k"]) for r in doc["results"]] == [(1, 1), (2, 1)]


def test_tsystem_sweep_passes_the_budget(runner):
    result = runner.invoke(cli, ["tsystem", "--type", "A2-2", "--k", "1", "--sweep", "--budget", "2"])
    assert result.exit_code == 3
    assert "Budget" in result.output


def test_tsystem_sweep_budget_reaches_workers(runner, monkeypatch):
    monkeypatch.setattr(settings, "QCHAR_WORKERS", 2)
    result = runner.invoke(cli, ["tsystem", "--type", "A4-2", "--k", "1", "--sweep", "--budget", "2"])
    assert result.exit_code == 3
    assert "Budget" in result.output


def test_dominants(runner):
    result = runner.invoke(cli, ["dominants", "--type", "A2-2", "--k", "2", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["matches_ladder"] is True
    assert len(doc["ladder"]) == 3


def test_screen_accepts_a_character(runner):
    produced = runner.invoke(cli, ["qchar", "--type", "A2-2", "--format", "json"])
    character = json.dumps(json.loads(produced.stdout)["character"])
    result = runner.invoke(cli, ["screen", "--type", "A2-2"], input=character)
    assert result.exit_code == 0


def test_screen_rejects_a_lone_monomial(runner):
    payload = '{"terms": [{"coeff": "1", "monomial": [{"node": 0, "a": [1, 1], "phase": [0, 1], "q": [0, 1], "exp": 1}]}]}'
    result = runner.invoke(cli, ["screen", "--type", "A2-2"], input=payload)
    assert result.exit_code == 1


def test_screen_rejects_bad_json(runner):
    result = runner.invoke(cli, ["screen", "--type", "A2-2"], input="[")
    assert result.exit_code == 2


def test_qsystem(runner):
    result = runner.invoke(cli, ["qsystem", "--type", "A2-2", "--k", "2"])
    assert result.exit_code == 0


def test_branch(runner):
    result = runner.invoke(cli, ["branch", "--type", "D4-3", "--node", "2", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["ok"] is True
    assert [term["weight"] for term in doc["computed"]] == [[1, 0], [0, 1], [0, 0]]


def test_branch_on_the_bar_side(runner):
    result = runner.invoke(cli, ["branch", "--type", "A2-2", "--k", "2", "--side", "bar", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["ok"] is True
    assert [term["weight"] for term in doc["computed"]] == [[4], [0]]


def test_branch_without_closed_form(runner):
    result = runner.invoke(cli, ["branch", "--type", "E6-2", "--node", "1", "--k", "2", "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["ok"] is None



def test_fermionic(runner):
    result = runner.invoke(cli, ["fermionic", "--type", "untwisted:A2", "--nu", "1:1:1", "--mode", "unrestricted"])
    assert result.exit_code == 0
    assert "unrestricted" in result.stdout


def test_fermionic_restricted_json(runner):
    result = runner.invoke(cli, ["fermionic", "--type", "D4-3", "--nu", "1:1:1", "--mode", "restricted", "--format", "json"])
    assert result.exit_code == 0
    doc = json.loads(result.stdout)
    assert doc["ok"] is True
    assert doc["multiplicities"] == [{"weight": [1, 0, 0, 0], "coeff": "1"}]


def test_fermionic_bad_nu(runner):
    result = runner.invoke(cli, ["fermionic", "--type", "A2-2", "--nu", "0:1"])
    assert result.exit_code == 2


def test_expected_dimensions():
    assert expected_dimension(parse_type("A4-2"), 0) == 10
    assert expected_dimension(parse_type("D4-3"), 2) == 29
    assert expected_dimension(parse_type("E6-2"), 3) == 3732


@pytest.mark.slow
def test_dimension_table(runner):
    result = runner.invoke(cli, ["dims", "--max-rank", "2", "--format", "json"])
    assert result.exit_code == 0
    rows = json.loads(result.stdout)["rows"]
    assert all(row["expected"] in (None, row["dimension"]) for row in rows)

"""
Integration tests for the command-line front end.

Tests cover:
- entails / explain in text and JSON, single queries and query files
- prototypes
- check-postulates, including the default generator profile
- JSON output is byte-identical across runs
- Exit codes: 0 entailed, 1 not entailed, 2 input error, 3 node budget
"""

from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from dln.cli import main

pytestmark = pytest.mark.integration


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def kb_path(data_dir):
    return lambda name: str(data_dir / name)


class TestEntails:
    def test_entailed(self, runner, kb_path):
        result = runner.invoke(
            main, ["entails", "--kb", kb_path("situs_inversus.kb"), "--query", "N(Human) <= some has_heart.LH"]
        )
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "ENTAILED: N(Human) <= some has_heart.LH"
        assert lines[1] == "Sigma: {N(Human)}"

    def test_not_entailed(self, runner, kb_path):
        result = runner.invoke(
            main, ["entails", "--kb", kb_path("situs_inversus.kb"), "--query", "N(SI) <= some has_heart.LH"]
        )
        assert result.exit_code == 1
        assert result.output.startswith("NOT ENTAILED: N(SI) <= some has_heart.LH")
        assert "Overridden:" in result.output

    def test_json(self, runner, kb_path):
        result = runner.invoke(
            main,
            [
                "entails", "--kb", kb_path("situs_inversus.kb"),
                "--query", "N(Human) <= some has_heart.LH", "--format", "json",
            ],
        )
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["entailed"] is True
        assert report["sigma"] == ["N(Human)"]
        assert report["overridden"] == []
        assert report["stats"] == {"consistency_checks": 1, "subsumption_checks": 1}

    def test_query_file(self, runner, kb_path, data_dir):
        result = runner.invoke(
            main,
            [
                "entails", "--kb", kb_path("situs_inversus.kb"),
                "--query-file", str(data_dir / "queries.txt"), "--format", "json",
            ],
        )
        assert result.exit_code == 1
        reports = json.loads(result.stdout)
        assert [r["entailed"] for r in reports] == [True, True, False]

    def test_workers_keep_order(self, runner, kb_path, data_dir):
        args = ["entails", "--kb", kb_path("situs_inversus.kb"), "--query-file", str(data_dir / "queries.txt"),
                "--format", "json"]
        serial = runner.invoke(main, args)
        pooled = runner.invoke(main, [*args, "--workers", "3"])
        assert json.loads(serial.stdout) == json.loads(pooled.stdout)

    def test_json_is_byte_identical_across_runs(self, runner, kb_path, data_dir):
        args = ["entails", "--kb", kb_path("situs_inversus.kb"), "--query-file", str(data_dir / "queries.txt"),
                "--format", "json"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.stdout
        assert first.stdout == second.stdout

    def test_rank_priority(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["entails", "--kb", kb_path("ranked.kb"), "--query", "N(Penguin) <= not Flies", "--priority", "rank"],
        )
        assert result.exit_code == 0

    def test_unicode(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["entails", "--kb", kb_path("situs_inversus.kb"), "--query", "N(Human) <= some has_heart.LH",
             "--unicode"],
        )
        assert result.exit_code == 0
        assert "∃has_heart.LH" in result.output

    def test_nonempty_prototypes(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["entails", "--kb", kb_path("situs_inversus.kb"), "--query", "N(SI) <= Bot",
             "--assume-nonempty-prototypes"],
        )
        assert result.exit_code == 1


class TestInputErrors:
    def test_missing_kb(self, runner, tmp_path):
        result = runner.invoke(main, ["entails", "--kb", str(tmp_path / "nope.kb"), "--query", "A <= B"])
        assert result.exit_code == 2

    def test_kb_parse_error(self, runner, kb_path):
        result = runner.invoke(main, ["entails", "--kb", kb_path("broken.kb"), "--query", "A <= B"])
        assert result.exit_code == 2
        assert "error:" in result.output
        assert "broken.kb" in result.output
        assert "Traceback" not in result.output

    def test_query_parse_error(self, runner, kb_path):
        result = runner.invoke(main, ["entails", "--kb", kb_path("nixon.kb"), "--query", "N(Quaker) <="])
        assert result.exit_code == 2
        assert "error: 1:" in result.output

    def test_query_and_query_file(self, runner, kb_path, data_dir):
        result = runner.invoke(
            main,
            ["entails", "--kb", kb_path("nixon.kb"), "--query", "A <= B", "--query-file",
             str(data_dir / "queries.txt")],
        )
        assert result.exit_code == 2

    def test_no_query(self, runner, kb_path):
        assert runner.invoke(main, ["entails", "--kb", kb_path("nixon.kb")]).exit_code == 2

    def test_missing_rank(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["entails", "--kb", kb_path("situs_inversus.kb"), "--query", "N(SI) <= SI", "--priority", "rank"],
        )
        assert result.exit_code == 2
        assert "rank" in result.output

    def test_namespace_clash(self, runner, tmp_path):
        path = tmp_path / "clash.kb"
        path.write_text("A <= some A.B\n")
        result = runner.invoke(main, ["entails", "--kb", str(path), "--query", "A <= A"])
        assert result.exit_code == 2

    def test_node_budget(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["entails", "--kb", kb_path("situs_inversus.kb"), "--query", "N(Human) <= some has_heart.LH",
             "--node-budget", "1"],
        )
        assert result.exit_code == 3
        assert "node budget" in result.output


class TestExplain:
    def test_text(self, runner, kb_path):
        result = runner.invoke(
            main, ["explain", "--kb", kb_path("situs_inversus.kb"), "--query", "N(SI) <= some has_heart.RH"]
        )
        assert result.exit_code == 0
        assert "Linearization:" in result.output
        assert "  1. Human <~ some has_heart.LH" in result.output
        assert "OVERRIDDEN" in result.output
        assert "N(SI) <= Bot follows from" in result.output
        assert "Checks: 1 consistency, 1 subsumption" in result.output

    def test_json(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["explain", "--kb", kb_path("reservist.kb"), "--query", "N(MinorMaleCitizen) <= Reservist",
             "--format", "json"],
        )
        assert result.exit_code == 1
        report = json.loads(result.stdout)
        assert [d["status"] for d in report["decisions"]] == ["kept", "overridden"]
        assert report["decisions"][1]["di"] == "MaleCitizen <~ HasMilitaryTraining"
        assert report["decisions"][1]["reason"]


class TestPrototypes:
    def test_nixon(self, runner, kb_path):
        result = runner.invoke(main, ["prototypes", "--kb", kb_path("nixon.kb")])
        assert result.exit_code == 1
        assert "INCONSISTENT: N(RepQuaker)" in result.output
        assert "consistent: N(Quaker)" in result.output

    def test_candidates(self, runner, kb_path):
        result = runner.invoke(main, ["prototypes", "--kb", kb_path("nixon.kb"), "--candidates", "Quaker, Republican"])
        assert result.exit_code == 0
        assert result.output.splitlines() == ["consistent: N(Quaker)", "consistent: N(Republican)"]

    def test_json(self, runner, kb_path):
        result = runner.invoke(main, ["prototypes", "--kb", kb_path("nixon.kb"), "--format", "json"])
        summary = json.loads(result.stdout)
        assert summary["conflicts"] == ["N(RepQuaker)"]
        assert summary["unsatisfiable"] == []

    def test_clean_kb(self, runner, kb_path):
        assert runner.invoke(main, ["prototypes", "--kb", kb_path("situs_inversus.kb")]).exit_code == 0


class TestCheckPostulates:
    def test_ref(self, runner):
        result = runner.invoke(main, ["check-postulates", "REF", "--seeds", "5"])
        assert result.exit_code == 0
        assert result.output.startswith("REF: 0 failures in ")

    def test_json(self, runner):
        result = runner.invoke(
            main, ["check-postulates", "REF_N", "--seeds", "3", "--max-instances", "2", "--format", "json"]
        )
        assert result.exit_code == 0
        report = json.loads(result.stdout)
        assert report["rule"] == "REF_N"
        assert report["failures"] == 0
        assert report["counterexample"] is None

    def test_default_profile_within_budget(self, runner):
        result = runner.invoke(main, ["check-postulates", "CT", "--seeds", "10", "--max-instances", "3"])
        assert result.exit_code == 0
        assert result.output.startswith("CT: 0 failures in ")

    def test_json_is_byte_identical_across_runs(self, runner):
        args = ["check-postulates", "CM", "--seeds", "4", "--max-instances", "2", "--format", "json"]
        assert runner.invoke(main, args).stdout == runner.invoke(main, args).stdout

    def test_restricted_rule_with_normality(self, runner):
        result = runner.invoke(main, ["check-postulates", "CT_N", "--seeds", "2", "--profile-normality"])
        assert result.exit_code == 2
        assert "error:" in result.output

    def test_profile_out_of_bounds(self, runner):
        result = runner.invoke(main, ["check-postulates", "REF", "--profile-concepts", "9"])
        assert result.exit_code == 2

    def test_unknown_rule(self, runner):
        assert runner.invoke(main, ["check-postulates", "OR"]).exit_code == 2


class TestGroup:
    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert result.output.strip()

    def test_log_level(self, runner, kb_path):
        result = runner.invoke(
            main,
            ["--log-level", "error", "entails", "--kb", kb_path("nixon.kb"), "--query", "N(Quaker) <= Pacifist"],
        )
        assert result.exit_code == 0

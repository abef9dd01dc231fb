"""CLI: subcommand behaviour, exit code contract, JSON completeness."""

import json

import pytest

from conftest import fixture_path
from eventstruct.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    def test_non_jump_free_exits_one(self, capsys):
        code, out, _ = run(capsys, "check", fixture_path("altcauses.ses"))
        assert code == 1
        assert "jump-free: no" in out
        assert "bridged by" in out

    def test_clean_structure_exits_zero(self, capsys):
        code, out, _ = run(capsys, "check", fixture_path("twocells.es"))
        assert code == 0
        assert "jump-free: yes" in out
        assert "confusion: no" in out

    def test_json_contains_every_human_field(self, capsys):
        code, human, _ = run(capsys, "check", fixture_path("altcauses.ses"))
        code2, machine, _ = run(capsys, "check", "--json", fixture_path("altcauses.ses"))
        assert code == code2 == 1
        data = json.loads(machine)
        for line in human.splitlines():
            key = line.split(":", 1)[0]
            assert key in data

    def test_net_refused(self, capsys):
        code, _, err = run(capsys, "check", fixture_path("choice.net"))
        assert code == 2
        assert "unfold" in err


class TestProb:
    def test_uniform_two_cells(self, capsys):
        code, out, _ = run(
            capsys, "prob", fixture_path("twocells.es"), "--uniform", "--config", "a1,b2"
        )
        assert code == 0
        assert "likelihood: 0.25" in out

    def test_dist_file_and_measure(self, capsys):
        code, out, _ = run(
            capsys,
            "prob",
            fixture_path("confusion.es"),
            "--dist",
            fixture_path("confusion.prob"),
            "--config",
            "b",
            "--measure",
        )
        assert code == 0
        assert "likelihood: 0.4" in out and "shadow: 0.4" in out

    def test_non_r_stopped_exits_one(self, capsys):
        code, out, _ = run(
            capsys, "prob", fixture_path("confusion.es"), "--uniform", "--config", "a"
        )
        assert code == 1
        assert "shadow: 0.5" in out

    def test_flag_validation(self, capsys):
        code, _, err = run(
            capsys, "prob", fixture_path("confusion.es"), "--config", "a"
        )
        assert code == 2


class TestSample:
    def test_counts_deterministic(self, capsys):
        args = (
            "sample",
            fixture_path("confusion.es"),
            "--runs",
            "200",
            "--seed",
            "77",
            "--dist",
            fixture_path("confusion.prob"),
        )
        code, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code == code2 == 0
        assert out1 == out2
        assert "{b}" in out1


class TestTranslate:
    def test_emits_seven_event_document(self, capsys, tmp_path):
        out_file = tmp_path / "out.es"
        code, out, _ = run(
            capsys, "translate", fixture_path("altcauses.ses"), "-o", str(out_file)
        )
        assert code == 0
        text = out_file.read_text()
        assert text.startswith("es altcauses_es")
        from eventstruct.formats import parse_document

        es = parse_document(text)
        assert len(es.events) == 7

    def test_ternary_fails_with_witness(self, capsys):
        code, out, _ = run(capsys, "translate", fixture_path("ternary.ses"))
        assert code == 1
        assert "witness" in out

    def test_stdout_document(self, capsys):
        code, out, _ = run(capsys, "translate", fixture_path("chain.ses"))
        assert code == 0
        assert out.startswith("es chain_es")


class TestCellsAndCover:
    def test_cells_default_empty(self, capsys):
        code, out, _ = run(capsys, "cells", fixture_path("twocells.es"))
        assert code == 0
        assert "{a1,a2}" in out and "{b1,b2}" in out

    def test_cells_at(self, capsys):
        code, out, _ = run(
            capsys, "cells", fixture_path("altcauses.ses"), "--at", "e1,e3"
        )
        assert code == 0
        assert "{ea,eb}" in out

    def test_cells_not_r_stopped(self, capsys):
        code, out, _ = run(capsys, "cells", fixture_path("confusion.es"), "--at", "a")
        assert code == 1

    def test_cover_success_and_failure(self, capsys):
        code, out, _ = run(
            capsys, "cover", fixture_path("twocells.es"), "--config", "a1,b2"
        )
        assert code == 0 and "r-stopped: yes" in out
        code, out, _ = run(capsys, "cover", fixture_path("confusion.es"), "--config", "a")
        assert code == 1 and "r-stopped: no" in out


class TestUnfoldAndDot:
    def test_unfold_then_check_reports_confusion(self, capsys, tmp_path):
        out_file = tmp_path / "choice.es"
        code, out, _ = run(
            capsys,
            "unfold",
            fixture_path("choice.net"),
            "--max-events",
            "10",
            "-o",
            str(out_file),
        )
        assert code == 0 and "events: 7" in out and "truncated: no" in out
        code, out, _ = run(capsys, "check", str(out_file))
        assert "confusion: yes" in out

    def test_unfold_truncation_reported(self, capsys, tmp_path):
        out_file = tmp_path / "loops.es"
        code, out, _ = run(
            capsys,
            "unfold",
            fixture_path("loops.net"),
            "--max-events",
            "6",
            "-o",
            str(out_file),
        )
        assert code == 0 and "truncated: yes" in out
        code, _, err = run(
            capsys, "prob", str(out_file), "--uniform", "--config", ""
        )
        assert code == 2 and "truncated" in err
        code, out, _ = run(
            capsys,
            "prob",
            str(out_file),
            "--uniform",
            "--allow-truncated",
            "--config",
            "",
        )
        assert code == 0

    def test_dot(self, capsys, tmp_path):
        code, out, _ = run(capsys, "dot", fixture_path("pair.es"))
        assert code == 0 and out.startswith("digraph")
        out_file = tmp_path / "g.dot"
        code, out, _ = run(
            capsys, "dot", fixture_path("twocells.es"), "--at", "", "-o", str(out_file)
        )
        assert code == 0
        assert out_file.read_text().count("subgraph") == 2


class TestErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "no_such_file.es")
        assert code == 2

    def test_parse_error_location(self, capsys, tmp_path):
        bad = tmp_path / "bad.es"
        bad.write_text("es X\nevents a b\nconflict a a\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 2 and "line 3" in err

    def test_unknown_subcommand_exits_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

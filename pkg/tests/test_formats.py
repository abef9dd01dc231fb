"""Text formats: parsing, errors with locations, round trips, DOT."""

import pytest

from conftest import fixture_path
from eventstruct import fixtures as fx
from eventstruct.errors import NotRStoppedError, ParseError
from eventstruct.formats import export_dot, parse_document, parse_path, serialize
from eventstruct.nets import unfold_net

ALL_STRUCTURES = (
    list(fx.all_prime_fixtures().values())
    + list(fx.all_stable_fixtures().values())
    + [fx.choice_net(), fx.loop_net(), fx.tiny_net()]
)


class TestParse:
    def test_round_trip_identity(self):
        for obj in ALL_STRUCTURES:
            text = serialize(obj)
            again = parse_document(text)
            assert again == obj
            assert serialize(again) == text

    def test_fixture_files_match_programmatic(self):
        pairs = [
            ("pair.es", fx.pair()),
            ("confusion.es", fx.confusion()),
            ("twocells.es", fx.two_cells()),
            ("jump.es", fx.jump()),
            ("altcauses.es", fx.alt_causes_es()),
            ("empty.es", fx.empty_es()),
            ("altcauses.ses", fx.alt_causes()),
            ("altcauses_relaxed.ses", fx.alt_causes_relaxed()),
            ("chain.ses", fx.chain()),
            ("unreachable_pair.ses", fx.unreachable_pair()),
            ("ternary.ses", fx.ternary()),
            ("ctx_conflict.ses", fx.ctx_conflict()),
            ("choice.net", fx.choice_net()),
            ("loops.net", fx.loop_net()),
            ("tiny.net", fx.tiny_net()),
        ]
        for name, obj in pairs:
            assert parse_path(fixture_path(name)) == obj

    def test_prob_table(self):
        table = parse_path(fixture_path("confusion.prob"))
        assert table == {
            frozenset({"a", "b", "c"}): {
                frozenset({"a", "c"}): 0.6,
                frozenset({"b"}): 0.4,
            }
        }
        assert parse_document(serialize(table)) == table

    def test_self_conflict_location(self):
        with pytest.raises(ParseError) as err:
            parse_document("es X\nevents a b\nconflict a a\n")
        assert err.value.line == 3

    def test_missing_header(self):
        with pytest.raises(ParseError, match="missing header"):
            parse_document("// nothing here\n")

    def test_unknown_header(self):
        with pytest.raises(ParseError, match="unknown header"):
            parse_document("graph X\n")

    def test_bad_directives(self):
        with pytest.raises(ParseError):
            parse_document("es X\ncause a b\n")
        with pytest.raises(ParseError):
            parse_document("ses X\nevents a\nenabling { a |- a\n")
        with pytest.raises(ParseError, match="bad weight"):
            parse_document("cell { a }\n  config { a } much\n")
        with pytest.raises(ParseError, match="outside"):
            parse_document("cell { a }\nconfig { a } 1.0\n")

    def test_comments_ignored(self):
        es = parse_document("es X // a structure\nevents a b // two\n// done\n")
        assert es.events == ("a", "b")

    def test_truncation_marker_round_trips(self):
        es = unfold_net(fx.loop_net(), 4).es
        assert es.truncated
        text = serialize(es)
        assert "// meta truncated" in text
        again = parse_document(text)
        assert again.truncated and again == es
        assert serialize(again) == text


class TestDot:
    def test_pair_has_one_dashed_edge(self):
        dot = export_dot(fx.pair())
        assert dot.count("style=dashed") == 1

    def test_alt_causes_counts(self):
        dot = export_dot(fx.alt_causes_es())
        solid = [l for l in dot.splitlines() if "->" in l and "dashed" not in l]
        dashed = [l for l in dot.splitlines() if "dashed" in l]
        assert len(solid) == 3  # reduced causality
        assert len(dashed) == 4  # immediate conflicts
        assert dot.count('"') % 2 == 0

    def test_two_cells_clusters(self):
        dot = export_dot(fx.two_cells(), at=frozenset())
        assert dot.count("subgraph cluster_") == 2

    def test_cluster_requires_r_stopped(self):
        with pytest.raises(NotRStoppedError):
            export_dot(fx.confusion(), at=frozenset({"a"}))

    def test_deterministic(self):
        for obj in ALL_STRUCTURES:
            assert export_dot(obj) == export_dot(obj)

    def test_ses_forbidden_rendering(self):
        dot = export_dot(fx.alt_causes())
        assert "shape=diamond" in dot  # the ternary forbidden set
        assert dot.count("style=dashed") >= 3

    def test_net_rendering(self):
        dot = export_dot(fx.choice_net())
        assert "shape=ellipse" in dot and "shape=box" in dot
        assert "p1 •" in dot

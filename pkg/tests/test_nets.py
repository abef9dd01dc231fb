"""Safe nets: validation, reachability safety, bounded unfolding."""

import pytest

from eventstruct import fixtures as fx
from eventstruct.cells import check_confusion, check_jump_free
from eventstruct.errors import UnsafeNetError, ValidationError
from eventstruct.nets import reachable_markings, unfold_net, validate_net
from eventstruct.prime import configurations, validate_prime


class TestValidation:
    def test_bipartite_enforced(self):
        with pytest.raises(ValidationError, match="bipartite"):
            validate_net("x", ["p"], ["t"], [("p", "p")], ["p"])

    def test_marking_checked(self):
        with pytest.raises(ValidationError, match="marking"):
            validate_net("x", ["p"], ["t"], [("p", "t")], ["q"])

    def test_sort_clash(self):
        with pytest.raises(ValidationError):
            validate_net("x", ["p"], ["p"], [], [])


class TestSafety:
    def test_fixtures_are_safe(self):
        for net in (fx.choice_net(), fx.loop_net(), fx.tiny_net()):
            reachable_markings(net)

    def test_unsafe_witnessed(self):
        net = validate_net(
            "unsafe",
            ["p", "r", "q"],
            ["t", "u"],
            [("p", "t"), ("t", "q"), ("r", "u"), ("u", "q")],
            ["p", "r"],
        )
        with pytest.raises(UnsafeNetError) as err:
            reachable_markings(net)
        seq = err.value.firing_sequence
        assert len(seq) == 2 and set(seq) == {"t", "u"}
        with pytest.raises(UnsafeNetError):
            unfold_net(net, 10)


class TestUnfold:
    def test_tiny(self):
        r = unfold_net(fx.tiny_net(), 5)
        assert r.es.events == ("t.1",)
        assert not r.truncated

    def test_choice_net_shape(self):
        r = unfold_net(fx.choice_net(), 10)
        assert len(r.es.events) == 7
        assert not r.truncated
        # ta occurs once per alternative token source
        assert sorted(r.transition_of.values()).count("ta") == 2
        assert check_jump_free(r.es).jump_free
        assert check_confusion(r.es).confusion

    def test_loop_net_truncates(self):
        r = unfold_net(fx.loop_net(), 6)
        assert r.truncated
        assert len(r.es.events) == 6
        assert r.es.truncated

    def test_unfolding_is_valid_prime(self):
        for net, bound in ((fx.choice_net(), 10), (fx.loop_net(), 6), (fx.tiny_net(), 3)):
            es = unfold_net(net, bound).es
            again = validate_prime(es.name, es.events, es.causality, [tuple(sorted(p)) for p in es.conflict])
            assert again.causality == es.causality
            assert again.conflict == es.conflict

    def test_deterministic(self):
        a = unfold_net(fx.choice_net(), 10)
        b = unfold_net(fx.choice_net(), 10)
        assert a.es == b.es and a.event_transition == b.event_transition

    def test_configurations_match_firing_semantics(self):
        # every configuration of the unfolding replays as a firing
        # sequence of the net (1-safe interleaving oracle)
        net = fx.choice_net()
        r = unfold_net(net, 10)
        tr = r.transition_of
        for v in configurations(r.es):
            # greedy replay: fire any event whose causes are already fired
            fired: set[str] = set()
            marking = set(net.marking)
            progress = True
            while progress and fired != set(v):
                progress = False
                for e in sorted(v - fired):
                    causes = {a for (a, b) in r.es.causality if b == e}
                    if causes <= fired and net.preset(tr[e]) <= marking:
                        marking = (marking - net.preset(tr[e])) | net.postset(tr[e])
                        fired.add(e)
                        progress = True
            assert fired == set(v)

    def test_max_events_positive(self):
        with pytest.raises(ValidationError):
            unfold_net(fx.tiny_net(), 0)

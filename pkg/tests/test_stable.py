"""Stable structures: validation, histories, conflicts, sensibility.

Oracles: naive subset enumeration with set-based securing, intersection
over enumerated sub-configurations for histories, direct forbidden-set
scans for conflicts.
"""

import itertools
import random

import pytest

from eventstruct import fixtures as fx
from eventstruct.errors import UnknownEventError, ValidationError
from eventstruct.stable import (
    as_stable,
    check_conflict_driven,
    check_sensible,
    configurations_ses,
    conflict,
    enables,
    future_ses,
    histories_of,
    immediate_conflict_ses,
    is_consistent,
    local_history,
    resolvable_immediate_conflict,
    star_histories,
    validate_stable,
)
from strgen import random_prime, random_stable


def oracle_configurations(ses):
    """Set-based enumeration, independent of the bitmask kernel."""
    events = ses.events

    def consistent(xs):
        return not any(f <= xs for f in ses.forbidden)

    def secured(xs):
        built = set()
        while True:
            added = False
            for e in xs - built:
                for r in ses.rules_for(e):
                    if r.premise <= built:
                        built.add(e)
                        added = True
                        break
            if not added:
                return built == set(xs)

    out = set()
    for r in range(len(events) + 1):
        for combo in itertools.combinations(events, r):
            xs = frozenset(combo)
            if consistent(xs) and secured(xs):
                out.add(xs)
    return out


class TestValidation:
    def test_alt_causes_valid(self):
        ses = fx.alt_causes()
        assert len(ses.events) == 6
        assert not ses.dead_events

    def test_stability_violation(self):
        with pytest.raises(ValidationError, match="stability"):
            validate_stable(
                "x",
                ["a", "b", "c"],
                [([], "a"), ([], "b"), (["a"], "c"), (["b"], "c")],
                [],
            )

    def test_inconsistent_rule(self):
        with pytest.raises(ValidationError, match="inconsistent rule"):
            validate_stable("x", ["a", "b"], [([], "a"), (["a"], "b")], [["a", "b"]])

    def test_unknown_event(self):
        with pytest.raises(UnknownEventError):
            validate_stable("x", ["a"], [(["zz"], "a")], [])
        with pytest.raises(UnknownEventError):
            validate_stable("x", ["a", "b"], [([], "a")], [["a", "zz"]])

    def test_small_forbidden_rejected(self):
        with pytest.raises(ValidationError):
            validate_stable("x", ["a"], [([], "a")], [["a"]])

    def test_empty_valid(self):
        assert fx.empty_ses().events == ()

    def test_dead_event_is_warning(self):
        # b has no rule at all: dead, but the structure is accepted
        ses = validate_stable("x", ["a", "b"], [([], "a")], [])
        assert ses.dead_events == ("b",)


class TestConsistencyAndConfigurations:
    def test_consistency_scan(self):
        ses = fx.alt_causes()
        assert is_consistent(ses, {"e1", "e3"})
        assert not is_consistent(ses, {"e1", "e2"})
        assert is_consistent(ses, frozenset())

    def test_configurations_oracle(self):
        for ses in fx.all_stable_fixtures().values():
            assert set(configurations_ses(ses)) == oracle_configurations(ses)

    def test_alt_causes_membership(self):
        cfgs = set(configurations_ses(fx.alt_causes()))
        assert frozenset({"e1", "e3", "ea"}) in cfgs
        assert frozenset({"e1", "e3", "eb"}) in cfgs
        assert frozenset({"e1", "ea", "eb"}) not in cfgs

    def test_empty_and_singleton(self):
        assert configurations_ses(fx.empty_ses()) == (frozenset(),)
        one = validate_stable("one", ["a"], [([], "a")], [])
        assert set(configurations_ses(one)) == {frozenset(), frozenset("a")}

    def test_random_agrees_with_oracle(self):
        rng = random.Random(23)
        for _ in range(25):
            ses = random_stable(rng, max_events=6)
            assert set(configurations_ses(ses)) == oracle_configurations(ses)


class TestLocalHistories:
    def test_alt_causes_histories(self):
        ses = fx.alt_causes()
        assert local_history(ses, "ea", {"e1", "e3", "ea"}).history == {"e1", "ea"}
        assert local_history(ses, "ea", {"e2", "e4", "ea"}).history == {"e2", "ea"}

    def test_initial_history_is_singleton(self):
        ses = fx.alt_causes()
        assert local_history(ses, "e1", {"e1"}).history == {"e1"}

    def test_oracle_intersection(self):
        ses = fx.alt_causes()
        cfgs = set(configurations_ses(ses))
        for u in cfgs:
            for e in u:
                holding = [v for v in cfgs if v <= u and e in v]
                expect = frozenset.intersection(*holding)
                assert local_history(ses, e, u).history == expect

    def test_errors(self):
        ses = fx.alt_causes()
        with pytest.raises(ValidationError):
            local_history(ses, "ea", {"e1", "e3"})
        with pytest.raises(ValidationError):
            local_history(ses, "e1", {"e1", "e2"})

    def test_histories_of(self):
        ses = fx.alt_causes()
        assert set(histories_of(ses, "ea")) == {
            frozenset({"e1", "ea"}),
            frozenset({"e2", "ea"}),
        }


class TestConflict:
    def test_forbidden_pair_everywhere(self):
        ses = fx.alt_causes()
        assert conflict(ses, "e1", "e2", frozenset())
        assert conflict(ses, "e1", "e2")

    def test_context_dependence(self):
        ses = fx.alt_causes()
        assert conflict(ses, "ea", "eb", {"e1"})
        assert not conflict(ses, "ea", "eb", {"e2"})
        assert not conflict(ses, "ea", "eb")

    def test_oracle_scan(self):
        ses = fx.alt_causes()
        for v in configurations_ses(ses):
            for a, b in itertools.combinations(ses.events, 2):
                expect = any(f <= (v | {a, b}) for f in ses.forbidden)
                assert conflict(ses, a, b, v) == expect


class TestImmediateConflict:
    def test_examples(self):
        ses = fx.alt_causes()
        assert immediate_conflict_ses(ses, "ea", "eb", {"e1", "e3"})
        assert immediate_conflict_ses(ses, "e1", "e2", frozenset())
        assert not immediate_conflict_ses(ses, "e2", "e4", frozenset())

    def test_implies_conflict_under_v(self):
        for ses in fx.all_stable_fixtures().values():
            for v in configurations_ses(ses):
                for a, b in itertools.combinations(ses.events, 2):
                    if immediate_conflict_ses(ses, a, b, v):
                        assert conflict(ses, a, b, v)

    def test_global_form(self):
        ses = fx.alt_causes()
        assert immediate_conflict_ses(ses, "e1", "e2")
        assert not immediate_conflict_ses(ses, "ea", "eb")

    def test_resolvable_requires_occurrence(self):
        ses = fx.alt_causes()
        # e2 cannot occur at {e1,e3}, so the plain predicate fires but
        # the occurrence-restricted one does not
        assert immediate_conflict_ses(ses, "e2", "e4", {"e1", "e3"})
        assert not resolvable_immediate_conflict(ses, "e2", "e4", {"e1", "e3"})
        assert resolvable_immediate_conflict(ses, "ea", "eb", {"e1", "e3"})


class TestStarHistories:
    def test_single_event(self):
        ses = fx.alt_causes()
        assert star_histories(ses, {"ea"}) == frozenset(
            {
                frozenset({frozenset({"e1", "ea"})}),
                frozenset({frozenset({"e2", "ea"})}),
            }
        )

    def test_empty(self):
        assert star_histories(fx.alt_causes(), frozenset()) == frozenset({frozenset()})

    def test_product(self):
        sels = star_histories(fx.alt_causes(), {"ea", "eb"})
        assert len(sels) == 2
        for sel in sels:
            assert frozenset({"e3", "eb"}) in sel


class TestSensible:
    def test_unreachable_pair(self):
        rep = check_sensible(fx.unreachable_pair())
        assert not rep.sensible
        assert frozenset({"e2", "e4"}) in rep.pruned
        assert set(rep.pruned) == {
            frozenset({"e1", "e4"}),
            frozenset({"e2", "e3"}),
            frozenset({"e2", "e4"}),
        }

    def test_alt_causes_not_sensible(self):
        rep = check_sensible(fx.alt_causes())
        assert not rep.sensible
        assert set(rep.pruned) == {
            frozenset({"e2", "eb"}),
            frozenset({"e4", "eb"}),
            frozenset({"ea", "eb"}),
        }

    def test_empty_sensible(self):
        assert check_sensible(fx.empty_ses()).sensible

    def test_pruning_preserves_configurations_and_is_idempotent(self):
        rng = random.Random(31)
        structures = list(fx.all_stable_fixtures().values()) + [
            random_stable(rng, 6) for _ in range(15)
        ]
        for ses in structures:
            rep = check_sensible(ses)
            assert set(configurations_ses(rep.result)) == set(configurations_ses(ses))
            again = check_sensible(rep.result)
            assert again.sensible
            assert again.result == rep.result

    def test_oracle_exhaustive(self):
        for ses in fx.all_stable_fixtures().values():
            cfgs = set(configurations_ses(ses))
            expect = True
            for r in range(len(ses.events) + 1):
                for combo in itertools.combinations(ses.events, r):
                    xs = frozenset(combo)
                    if is_consistent(ses, xs) and not any(xs <= v for v in cfgs):
                        expect = False
            assert check_sensible(ses).sensible == expect


class TestConflictDriven:
    def test_alt_causes_fails(self):
        rep = check_conflict_driven(fx.alt_causes())
        assert not rep.conflict_driven
        assert not rep.sensible
        assert not rep.traced
        assert rep.persistence_witness == ("ea", "eb", frozenset({"e1", "e3"}))

    def test_unreachable_pair_fails_sensibility(self):
        rep = check_conflict_driven(fx.unreachable_pair())
        assert not rep.conflict_driven and not rep.sensible

    def test_ctx_conflict_fails_persistence(self):
        rep = check_conflict_driven(fx.ctx_conflict())
        assert rep.sensible
        assert not rep.persistent
        assert rep.persistence_witness == ("a", "b", frozenset({"q"}))

    def test_positive_fixtures(self):
        for ses in (fx.chain(), fx.alt_causes_relaxed(), fx.empty_ses()):
            assert check_conflict_driven(ses).conflict_driven

    def test_prime_images_are_conflict_driven(self):
        rng = random.Random(37)
        for _ in range(20):
            ses = as_stable(random_prime(rng))
            assert check_conflict_driven(ses).conflict_driven

    def test_traced_consequence(self):
        # on conflict-driven structures every inconsistent set yields a
        # globally conflicting pair inside every history selection
        for ses in (fx.alt_causes_relaxed(), as_stable(fx.confusion())):
            assert check_conflict_driven(ses).conflict_driven
            for f in ses.forbidden:
                for sel in star_histories(ses, f):
                    union = frozenset().union(*sel)
                    assert any(
                        conflict(ses, a, b)
                        for a, b in itertools.combinations(sorted(union), 2)
                    )


class TestDerivedStructures:
    def test_as_stable_preserves_configurations(self):
        rng = random.Random(41)
        for _ in range(20):
            es = random_prime(rng)
            from eventstruct.prime import configurations

            assert set(configurations(es)) == set(configurations_ses(as_stable(es)))

    def test_future_configs_are_differences(self):
        rng = random.Random(43)
        structures = [fx.alt_causes(), fx.alt_causes_relaxed()] + [
            random_stable(rng, 6) for _ in range(10)
        ]
        for ses in structures:
            cfgs = set(configurations_ses(ses))
            for v in cfgs:
                f = future_ses(ses, v)
                assert set(configurations_ses(f)) == {w - v for w in cfgs if v <= w}

    def test_future_keeps_consistent_dead_events(self):
        f = future_ses(fx.alt_causes(), {"e2", "e4"})
        assert f.events == ("ea", "eb")
        assert f.dead_events == ("eb",)

    def test_compatible_families_closed_under_intersection(self):
        for ses in fx.all_stable_fixtures().values():
            cfgs = set(configurations_ses(ses))
            for v1, v2 in itertools.combinations(cfgs, 2):
                if any(v1 <= w and v2 <= w for w in cfgs):
                    assert v1 & v2 in cfgs

    def test_enables_monotone(self):
        ses = fx.alt_causes()
        assert enables(ses, {"e1"}, "ea")
        assert enables(ses, {"e1", "e4"}, "ea")
        assert not enables(ses, frozenset(), "ea")

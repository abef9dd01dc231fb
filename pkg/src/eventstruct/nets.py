"""Safe Petri nets and their bounded occurrence-net unfolding.

Nets here are input fixtures: places, transitions, directed arcs
between the two sorts, and an initial marking.  The unfolding builds
the usual occurrence-net prefix (every event is one occurrence of a
transition consuming a set of condition occurrences) and maps it to a
binary-conflict event structure: causality is the flow order between
events, direct conflict is competition for a shared input condition,
and the validation pass closes conflicts under inheritance.

1-safety is assumed and checked: the reachability scan aborts with a
witness firing sequence if any transition would produce a token into a
still-marked place.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from eventstruct.errors import UnsafeNetError, ValidationError
from eventstruct.prime import PrimeES, validate_prime

__all__ = ["SafeNet", "UnfoldResult", "validate_net", "unfold_net", "reachable_markings"]


@dataclass(frozen=True)
class SafeNet:
    name: str
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    arcs: frozenset[tuple[str, str]]
    marking: frozenset[str]

    def preset(self, t: str) -> frozenset[str]:
        return frozenset(p for (p, x) in self.arcs if x == t)

    def postset(self, t: str) -> frozenset[str]:
        return frozenset(p for (x, p) in self.arcs if x == t)


def validate_net(name, places, transitions, arcs, marking) -> SafeNet:
    places = tuple(sorted(set(places)))
    transitions = tuple(sorted(set(transitions)))
    pset, tset = set(places), set(transitions)
    if pset & tset:
        raise ValidationError(f"ids used as both place and transition: {sorted(pset & tset)}")
    for ident in itertools.chain(places, transitions):
        if not ident or any(c.isspace() for c in ident):
            raise ValidationError(f"bad id {ident!r}")
    norm_arcs = set()
    for a, b in arcs:
        if a in pset and b in tset:
            pass
        elif a in tset and b in pset:
            pass
        else:
            raise ValidationError(f"arc {a!r} -> {b!r} is not place-transition bipartite")
        norm_arcs.add((a, b))
    marking = frozenset(marking)
    if not marking <= pset:
        raise ValidationError(f"marking mentions unknown places: {sorted(marking - pset)}")
    return SafeNet(name, places, transitions, frozenset(norm_arcs), marking)


@lru_cache(maxsize=None)
def reachable_markings(net: SafeNet) -> frozenset[frozenset[str]]:
    """All reachable markings; raises on a 1-safety violation."""
    seen = {net.marking}
    frontier = [(net.marking, ())]
    while frontier:
        marking, trail = frontier.pop()
        for t in net.transitions:
            pre, post = net.preset(t), net.postset(t)
            if not pre <= marking:
                continue
            left = marking - pre
            if left & post:
                raise UnsafeNetError(
                    f"net {net.name!r} is not 1-safe: firing {t!r} puts a second"
                    f" token into {sorted(left & post)}",
                    firing_sequence=trail + (t,),
                )
            nxt = left | post
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, trail + (t,)))
    return frozenset(seen)


@dataclass(frozen=True)
class _Condition:
    place: str
    producer: str | None  # event name, None for initial conditions
    slot: int  # disambiguates equal (place, producer) outputs


@dataclass(frozen=True)
class UnfoldResult:
    es: PrimeES
    truncated: bool
    event_transition: tuple[tuple[str, str], ...]  # event id -> transition id

    @property
    def transition_of(self) -> dict[str, str]:
        return dict(self.event_transition)


def unfold_net(net: SafeNet, max_events: int) -> UnfoldResult:
    """The occurrence-net prefix with at most max_events events, as an ES.

    Possible extensions are explored breadth-first in a canonical order
    (history size, then transition name, then consumed conditions), so
    the prefix is deterministic.  The result is flagged truncated when
    an extension existed beyond the budget.
    """
    if max_events <= 0:
        raise ValidationError("max_events must be positive")
    reachable_markings(net)  # 1-safety gate

    conditions: list[_Condition] = [_Condition(p, None, 0) for p in sorted(net.marking)]
    events: list[str] = []
    history: dict[str, frozenset[str]] = {}  # event -> its causal history (events, incl. itself)
    consumed_by: dict[_Condition, set[str]] = {c: set() for c in conditions}
    produced: dict[str, list[_Condition]] = {}
    event_transition: list[tuple[str, str]] = []
    direct_conflict: set[tuple[str, str]] = set()
    per_transition_count: dict[str, int] = {}
    known_presets: set[frozenset[_Condition]] = set()

    def cond_history(c: _Condition) -> frozenset[str]:
        return history[c.producer] if c.producer is not None else frozenset()

    def conflict_free(evs: frozenset[str]) -> bool:
        return not any(
            (a, b) in direct_conflict or _inherited(a, b)
            for a, b in itertools.combinations(sorted(evs), 2)
        )

    def _inherited(a: str, b: str) -> bool:
        for x in history[a]:
            for y in history[b]:
                if x != y and ((x, y) in direct_conflict or (y, x) in direct_conflict):
                    return True
        return False

    def coset_ok(conds: tuple[_Condition, ...]) -> bool:
        hist = frozenset().union(*(cond_history(c) for c in conds)) if conds else frozenset()
        if not conflict_free(hist):
            return False
        # no condition may already be consumed inside the joint history
        for c in conds:
            if any(e in hist for e in consumed_by[c]):
                return False
        return True

    truncated = False
    while True:
        extensions = []
        by_place: dict[str, list[_Condition]] = {}
        for c in conditions:
            by_place.setdefault(c.place, []).append(c)
        for t in net.transitions:
            pre = sorted(net.preset(t))
            pools = [by_place.get(p, []) for p in pre]
            if any(not pool for pool in pools):
                continue
            for combo in itertools.product(*pools):
                key = frozenset(combo)
                if key in known_presets:
                    continue
                if not coset_ok(combo):
                    continue
                hist = (
                    frozenset().union(*(cond_history(c) for c in combo))
                    if combo
                    else frozenset()
                )
                extensions.append((len(hist), t, tuple(sorted((c.place, c.producer or "", c.slot) for c in combo)), combo))
        if not extensions:
            break
        if len(events) >= max_events:
            truncated = True
            break
        extensions.sort(key=lambda x: x[:3])
        _, t, _, combo = extensions[0]
        k = per_transition_count.get(t, 0) + 1
        per_transition_count[t] = k
        name = f"{t}.{k}"
        events.append(name)
        event_transition.append((name, t))
        hist = frozenset().union(*(cond_history(c) for c in combo)) if combo else frozenset()
        history[name] = hist | {name}
        known_presets.add(frozenset(combo))
        for c in combo:
            for rival in consumed_by[c]:
                direct_conflict.add((rival, name))
            consumed_by[c].add(name)
        outs = []
        for i, p in enumerate(sorted(net.postset(t))):
            nc = _Condition(p, name, i)
            conditions.append(nc)
            consumed_by[nc] = set()
            outs.append(nc)
        produced[name] = outs

    causality = [
        (a, b) for b in events for a in history[b] if a != b
    ]
    conflicts = [(a, b) for (a, b) in direct_conflict]
    es = validate_prime(f"{net.name}_unfolded", events, causality, conflicts)
    if truncated:
        es = PrimeES(
            name=es.name,
            events=es.events,
            causality=es.causality,
            conflict=es.conflict,
            added_conflicts=es.added_conflicts,
            added_causality=es.added_causality,
            truncated=True,
        )
    return UnfoldResult(es=es, truncated=truncated, event_transition=tuple(event_transition))

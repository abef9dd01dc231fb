"""Event structures with binary conflict.

A structure couples a finite event set with a strict causality order
(stored transitively closed) and a symmetric, irreflexive conflict
relation closed under inheritance: a conflict of an event is a conflict
of everything causally above it.  Configurations, the possible partial
runs, are the cause-closed, conflict-free subsets.

All values are immutable after validation and every operation here is a
pure function, so concurrent use needs no synchronisation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from eventstruct import kernels
from eventstruct.errors import UnknownEventError, ValidationError

__all__ = [
    "PrimeES",
    "validate_prime",
    "configurations",
    "maximal_configurations",
    "future",
    "immediate_conflict",
    "immediate_conflict_pairs",
    "enabled_events",
    "is_configuration",
    "down_closure",
    "restrict",
    "check_event_ids",
]


@dataclass(frozen=True)
class PrimeES:
    """A validated event structure with binary conflict.

    causality holds the full strict order (transitively closed);
    conflict holds unordered pairs, inheritance-closed.  The added_*
    fields report what validation had to add and do not take part in
    equality, so a structure round-trips through serialisation.
    """

    name: str
    events: tuple[str, ...]
    causality: frozenset[tuple[str, str]]
    conflict: frozenset[frozenset[str]]
    added_conflicts: frozenset[frozenset[str]] = field(default=frozenset(), compare=False)
    added_causality: frozenset[tuple[str, str]] = field(default=frozenset(), compare=False)
    truncated: bool = False

    def __repr__(self) -> str:  # keep test output readable
        return f"PrimeES({self.name!r}, {len(self.events)} events)"

    def has_event(self, e: str) -> bool:
        return e in self._event_set

    @property
    def _event_set(self) -> frozenset[str]:
        return frozenset(self.events)

    def precedes(self, a: str, b: str) -> bool:
        """Strict causal order a < b."""
        return (a, b) in self.causality

    def in_conflict(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.conflict

    def causes(self, e: str) -> frozenset[str]:
        """Strict causes of e (down-closure minus e itself)."""
        return frozenset(a for (a, b) in self.causality if b == e)


def check_event_ids(events) -> tuple[str, ...]:
    """Validate and canonicalise an event id collection (sorted tuple)."""
    seen = set()
    for e in events:
        if not isinstance(e, str) or not e or any(c.isspace() for c in e):
            raise ValidationError(f"bad event id {e!r}: must be nonempty without whitespace")
        if e in seen:
            raise ValidationError(f"duplicate event id {e!r}")
        seen.add(e)
    return tuple(sorted(seen))


def _transitive_closure(events, pairs):
    succ = {e: set() for e in events}
    for a, b in pairs:
        succ[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in events:
            extra = set()
            for b in succ[a]:
                extra |= succ[b] - succ[a]
            if extra:
                succ[a] |= extra
                changed = True
    return {(a, b) for a in events for b in succ[a]}


def validate_prime(name, events, causality, conflicts) -> PrimeES:
    """Normalise raw input into a structure, closing both relations.

    Causality is transitively closed (a cycle is an error); conflict is
    symmetrised and closed under inheritance through the order.  A
    conflict between causally comparable events would force an event
    into conflict with itself, so it is rejected like a self-conflict.
    Every pair the closures added is reported on the result.
    """
    evs = check_event_ids(events)
    evset = set(evs)

    raw_causality = set()
    for a, b in causality:
        for x in (a, b):
            if x not in evset:
                raise UnknownEventError(f"unknown event {x!r} in causality")
        if a == b:
            raise ValidationError(f"cycle in causality: {a!r} < {a!r}")
        raw_causality.add((a, b))

    closed = _transitive_closure(evs, raw_causality)
    for e in evs:
        if (e, e) in closed:
            raise ValidationError(f"cycle in causality through {e!r}")

    raw_conflict = set()
    for a, b in conflicts:
        for x in (a, b):
            if x not in evset:
                raise UnknownEventError(f"unknown event {x!r} in conflict")
        if a == b:
            raise ValidationError(f"self-conflict on {a!r}")
        raw_conflict.add(frozenset((a, b)))

    # Inheritance closure: a # b and b < c gives a # c.
    conflict = set(raw_conflict)
    changed = True
    while changed:
        changed = False
        for pair in list(conflict):
            a, b = sorted(pair)
            for x, y in ((a, b), (b, a)):
                for c in evs:
                    if (y, c) in closed:
                        new = frozenset((x, c))
                        if x == c:
                            raise ValidationError(
                                f"conflict {a!r} # {b!r} lies under causality and"
                                f" would put {x!r} in conflict with itself"
                            )
                        if new not in conflict:
                            conflict.add(new)
                            changed = True
    for pair in conflict:
        a, b = sorted(pair)
        if (a, b) in closed or (b, a) in closed:
            raise ValidationError(
                f"conflict between causally ordered events {a!r} and {b!r}"
            )

    return PrimeES(
        name=name,
        events=evs,
        causality=frozenset(closed),
        conflict=frozenset(conflict),
        added_conflicts=frozenset(conflict - raw_conflict),
        added_causality=frozenset(closed - raw_causality),
    )


def _require_events(es: PrimeES, xs) -> None:
    for x in xs:
        if not es.has_event(x):
            raise UnknownEventError(f"unknown event {x!r} in {es.name!r}")


@lru_cache(maxsize=None)
def _index(es: PrimeES):
    pos = {e: i for i, e in enumerate(es.events)}
    n = len(es.events)
    cause_masks = [0] * n
    conflict_masks = [0] * n
    for a, b in es.causality:
        cause_masks[pos[b]] |= 1 << pos[a]
    for pair in es.conflict:
        a, b = tuple(pair)
        conflict_masks[pos[a]] |= 1 << pos[b]
        conflict_masks[pos[b]] |= 1 << pos[a]
    return pos, cause_masks, conflict_masks


def mask_of(es, xs) -> int:
    pos = _index(es)[0]
    m = 0
    for x in xs:
        m |= 1 << pos[x]
    return m


def set_of(es, mask: int) -> frozenset[str]:
    return frozenset(e for i, e in enumerate(es.events) if mask >> i & 1)


def _canonical(es, masks) -> tuple[frozenset[str], ...]:
    sets = [set_of(es, m) for m in masks]
    return tuple(sorted(sets, key=lambda s: (len(s), tuple(sorted(s)))))


@lru_cache(maxsize=None)
def _config_masks(es: PrimeES) -> frozenset[int]:
    _, cause_masks, conflict_masks = _index(es)
    return frozenset(kernels.prime_configurations(len(es.events), cause_masks, conflict_masks))


def configurations(es: PrimeES) -> tuple[frozenset[str], ...]:
    """Every configuration, in canonical (size, then lexicographic) order."""
    return _canonical(es, _config_masks(es))


def maximal_configurations(es: PrimeES) -> tuple[frozenset[str], ...]:
    """The inclusion-maximal configurations (complete runs)."""
    return _canonical(es, kernels.maximal_masks(sorted(_config_masks(es))))


def is_configuration(es: PrimeES, v) -> bool:
    _require_events(es, v)
    return mask_of(es, v) in _config_masks(es)


def down_closure(es: PrimeES, xs) -> frozenset[str]:
    """The events of xs together with all their causes."""
    _require_events(es, xs)
    out = set(xs)
    for e in xs:
        out |= es.causes(e)
    return frozenset(out)


def future(es: PrimeES, v) -> PrimeES:
    """The sub-structure of events that can still happen after v.

    Keeps exactly the events outside v whose causes joined with v form a
    configuration, with both relations restricted.  The configurations
    of the result are the w - v for configurations w extending v.
    """
    vset = frozenset(v)
    if not is_configuration(es, vset):
        raise ValidationError(f"{sorted(vset)} is not a configuration of {es.name!r}")
    keep = frozenset(
        e
        for e in es.events
        if e not in vset and mask_of(es, down_closure(es, [e]) | vset) in _config_masks(es)
    )
    return restrict(es, keep, name=f"{es.name}^{{{','.join(sorted(vset))}}}")


def restrict(es: PrimeES, keep, name=None) -> PrimeES:
    """The sub-structure induced by an event subset (relations restricted)."""
    keep = frozenset(keep)
    _require_events(es, keep)
    return PrimeES(
        name=name if name is not None else f"{es.name}|{len(keep)}",
        events=tuple(sorted(keep)),
        causality=frozenset((a, b) for (a, b) in es.causality if a in keep and b in keep),
        conflict=frozenset(p for p in es.conflict if p <= keep),
        truncated=es.truncated,
    )


def immediate_conflict(es: PrimeES, a: str, b: str) -> bool:
    """Conflict not inherited from conflicting causes.

    True when the only conflicting pair among the two causal histories
    is (a, b) itself.
    """
    _require_events(es, (a, b))
    if a == b or not es.in_conflict(a, b):
        return False
    ha = down_closure(es, [a])
    hb = down_closure(es, [b])
    for x, y in itertools.product(ha, hb):
        if es.in_conflict(x, y) and frozenset((x, y)) != frozenset((a, b)):
            return False
    return True


@lru_cache(maxsize=None)
def immediate_conflict_pairs(es: PrimeES) -> frozenset[frozenset[str]]:
    """All immediate-conflict pairs of the structure."""
    return frozenset(p for p in es.conflict if immediate_conflict(es, *sorted(p)))


def enabled_events(es: PrimeES, v) -> frozenset[str]:
    """Events that can individually extend the configuration v."""
    vset = frozenset(v)
    if not is_configuration(es, vset):
        raise ValidationError(f"{sorted(vset)} is not a configuration of {es.name!r}")
    cfgs = _config_masks(es)
    return frozenset(
        e for e in es.events if e not in vset and mask_of(es, vset | {e}) in cfgs
    )

"""Stable event structures: consistency families and enabling rules.

Consistency is represented by its minimal forbidden sets, so the
predicate "X is consistent" (no forbidden set inside X) is non-empty
and subset-closed by construction.  Enabling is the monotone closure of
finitely many rules: X enables e when X is consistent and some rule
premise for e lies inside X.  Stability (every enabled event has a
unique minimal cause set inside any enabling configuration) is checked
pairwise over rules at validation.

There is no global causal order here; each configuration u carries its
own, induced by the local histories: the least sub-configuration of u
containing an event.

Everything is immutable and every function is pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from eventstruct import kernels
from eventstruct.errors import UnknownEventError, ValidationError
from eventstruct.prime import PrimeES, check_event_ids

__all__ = [
    "Rule",
    "StableES",
    "LocalHistory",
    "SensibleReport",
    "ConflictDrivenReport",
    "validate_stable",
    "is_consistent",
    "configurations_ses",
    "maximal_configurations_ses",
    "is_configuration_ses",
    "enables",
    "local_history",
    "history_at",
    "histories_of",
    "conflict",
    "immediate_conflict_ses",
    "resolvable_immediate_conflict",
    "star_histories",
    "check_sensible",
    "check_conflict_driven",
    "as_stable",
    "future_ses",
    "restrict_ses",
    "enabled_events_ses",
]


@dataclass(frozen=True)
class Rule:
    """One enabling rule: premise set entails the conclusion event."""

    premise: frozenset[str]
    conclusion: str

    def key(self):
        return (self.conclusion, len(self.premise), tuple(sorted(self.premise)))


@dataclass(frozen=True)
class StableES:
    """A validated stable event structure.

    dead_events lists events that occur in no configuration (a rule
    premise can never be assembled); they are a warning, not an error,
    because pruning experiments legitimately create them.
    """

    name: str
    events: tuple[str, ...]
    rules: tuple[Rule, ...]
    forbidden: frozenset[frozenset[str]]
    dead_events: tuple[str, ...] = field(default=(), compare=False)

    def __repr__(self) -> str:
        return f"StableES({self.name!r}, {len(self.events)} events)"

    def has_event(self, e: str) -> bool:
        return e in self._event_set

    @property
    def _event_set(self) -> frozenset[str]:
        return frozenset(self.events)

    def rules_for(self, e: str) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.conclusion == e)


@dataclass(frozen=True)
class LocalHistory:
    """The least configuration inside `within` that contains `event`."""

    event: str
    within: frozenset[str]
    history: frozenset[str]


def _require_events(ses: StableES, xs) -> None:
    for x in xs:
        if not ses.has_event(x):
            raise UnknownEventError(f"unknown event {x!r} in {ses.name!r}")


def _minimalize(sets):
    """Drop every set that contains another one of the family."""
    out = []
    for s in sets:
        if not any(o < s for o in sets):
            out.append(s)
    return frozenset(out)


def _build(name, events, rules, forbidden, *, keep_redundant_rules=False) -> StableES:
    """Assemble a structure from checked parts: normalise and find dead events."""
    rules = {Rule(frozenset(p), c) for (p, c) in rules}
    if not keep_redundant_rules:
        slim = set()
        for r in rules:
            if not any(
                o.conclusion == r.conclusion and o.premise < r.premise for o in rules
            ):
                slim.add(r)
        rules = slim
    ses = StableES(
        name=name,
        events=tuple(sorted(events)),
        rules=tuple(sorted(rules, key=Rule.key)),
        forbidden=_minimalize(frozenset(frozenset(f) for f in forbidden)),
    )
    live = set()
    for c in configurations_ses(ses):
        live |= c
    dead = tuple(sorted(set(events) - live))
    if dead:
        ses = StableES(ses.name, ses.events, ses.rules, ses.forbidden, dead_events=dead)
    return ses


def validate_stable(name, events, rules, forbidden) -> StableES:
    """Validate raw input: id hygiene, rule consistency, stability.

    rules is an iterable of (premise, conclusion) pairs; forbidden an
    iterable of event sets with at least two members each.  Stability
    fails when two rules for the same conclusion have premises that are
    jointly consistent with it but no rule covers their intersection;
    the offending rule pair is reported.
    """
    evs = check_event_ids(events)
    evset = set(evs)

    norm_rules = []
    for premise, conclusion in rules:
        premise = frozenset(premise)
        _bad = [x for x in premise | {conclusion} if x not in evset]
        if _bad:
            raise UnknownEventError(f"unknown event {_bad[0]!r} in rule")
        if conclusion in premise:
            raise ValidationError(f"rule for {conclusion!r} lists it in its own premise")
        norm_rules.append((premise, conclusion))

    norm_forbidden = []
    for f in forbidden:
        f = frozenset(f)
        _bad = [x for x in f if x not in evset]
        if _bad:
            raise UnknownEventError(f"unknown event {_bad[0]!r} in forbidden set")
        if len(f) < 2:
            raise ValidationError(f"forbidden set {sorted(f)} needs at least two events")
        norm_forbidden.append(f)

    def consistent(xs):
        return not any(f <= xs for f in norm_forbidden)

    for premise, conclusion in norm_rules:
        if not consistent(premise | {conclusion}):
            raise ValidationError(
                f"inconsistent rule: premise {sorted(premise)} together with"
                f" {conclusion!r} contains a forbidden set"
            )

    by_conclusion: dict[str, list[frozenset[str]]] = {}
    for premise, conclusion in norm_rules:
        by_conclusion.setdefault(conclusion, []).append(premise)
    for conclusion, premises in by_conclusion.items():
        for p1, p2 in itertools.combinations(premises, 2):
            if consistent(p1 | p2 | {conclusion}):
                if not any(p0 <= (p1 & p2) for p0 in premises):
                    raise ValidationError(
                        f"stability violation for {conclusion!r}: premises"
                        f" {sorted(p1)} and {sorted(p2)} are compatible but no"
                        f" rule covers their intersection"
                    )

    return _build(name, evs, norm_rules, norm_forbidden)


# ---------------------------------------------------------------------------
# mask index and enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _index(ses: StableES):
    pos = {e: i for i, e in enumerate(ses.events)}
    forb = sorted(sum(1 << pos[x] for x in f) for f in ses.forbidden)
    premises = [[] for _ in ses.events]
    for r in ses.rules:
        premises[pos[r.conclusion]].append(sum(1 << pos[x] for x in r.premise))
    return pos, forb, premises


def _mask(ses, xs) -> int:
    pos = _index(ses)[0]
    m = 0
    for x in xs:
        m |= 1 << pos[x]
    return m


def _set(ses, mask: int) -> frozenset[str]:
    return frozenset(e for i, e in enumerate(ses.events) if mask >> i & 1)


@lru_cache(maxsize=None)
def _config_masks(ses: StableES) -> frozenset[int]:
    _, forb, premises = _index(ses)
    return frozenset(kernels.stable_configurations(len(ses.events), forb, premises))


def _consistent_mask(ses, m: int) -> bool:
    for f in _index(ses)[1]:
        if f & m == f:
            return False
    return True


def _canonical(ses, masks) -> tuple[frozenset[str], ...]:
    sets = [_set(ses, m) for m in masks]
    return tuple(sorted(sets, key=lambda s: (len(s), tuple(sorted(s)))))


def configurations_ses(ses: StableES) -> tuple[frozenset[str], ...]:
    """Every configuration: consistent and securable, canonical order."""
    return _canonical(ses, _config_masks(ses))


def maximal_configurations_ses(ses: StableES) -> tuple[frozenset[str], ...]:
    return _canonical(ses, kernels.maximal_masks(sorted(_config_masks(ses))))


def is_configuration_ses(ses: StableES, v) -> bool:
    _require_events(ses, v)
    return _mask(ses, v) in _config_masks(ses)


def is_consistent(ses: StableES, xs) -> bool:
    """True when xs contains no forbidden set."""
    _require_events(ses, xs)
    return _consistent_mask(ses, _mask(ses, xs))


def enables(ses: StableES, xs, e: str) -> bool:
    """Monotone enabling: xs is consistent and covers some premise for e."""
    _require_events(ses, xs)
    _require_events(ses, [e])
    m = _mask(ses, xs)
    if not _consistent_mask(ses, m):
        return False
    pos = _index(ses)[0]
    return any(p & ~m == 0 for p in _index(ses)[2][pos[e]])


def enabled_events_ses(ses: StableES, v) -> frozenset[str]:
    """Events that can individually extend the configuration v."""
    vset = frozenset(v)
    if not is_configuration_ses(ses, vset):
        raise ValidationError(f"{sorted(vset)} is not a configuration of {ses.name!r}")
    cfgs = _config_masks(ses)
    vm = _mask(ses, vset)
    pos = _index(ses)[0]
    return frozenset(
        e for e in ses.events if not vm >> pos[e] & 1 and vm | 1 << pos[e] in cfgs
    )


# ---------------------------------------------------------------------------
# local histories
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _history_mask(ses: StableES, ebit: int, vmask: int):
    """Least configuration containing the event `ebit` inside vmask|ebit.

    None when no such configuration exists, or when there is no least
    one (only possible when the extended set is itself inconsistent).
    """
    target = vmask | ebit
    cands = [c for c in _config_masks(ses) if c & ebit and c & ~target == 0]
    if not cands:
        return None
    inter = cands[0]
    for c in cands[1:]:
        inter &= c
    return inter if inter in _config_masks(ses) and inter & ebit else None


def history_at(ses: StableES, e: str, v) -> frozenset[str] | None:
    """The local history of e at v: least configuration in v+e holding e."""
    _require_events(ses, [e])
    _require_events(ses, v)
    pos = _index(ses)[0]
    h = _history_mask(ses, 1 << pos[e], _mask(ses, v))
    return None if h is None else _set(ses, h)


def local_history(ses: StableES, e: str, u) -> LocalHistory:
    """The history of an event inside a configuration containing it."""
    uset = frozenset(u)
    _require_events(ses, [e])
    if e not in uset:
        raise ValidationError(f"event {e!r} not in the given configuration")
    if not is_configuration_ses(ses, uset):
        raise ValidationError(f"{sorted(uset)} is not a configuration of {ses.name!r}")
    h = history_at(ses, e, uset)
    if h is None:
        raise ValidationError(
            f"no least configuration for {e!r} inside {sorted(uset)}; structure not stable"
        )
    return LocalHistory(event=e, within=uset, history=h)


@lru_cache(maxsize=None)
def histories_of(ses: StableES, e: str) -> tuple[frozenset[str], ...]:
    """All distinct local histories of e across configurations, canonical order."""
    _require_events(ses, [e])
    pos = _index(ses)[0]
    ebit = 1 << pos[e]
    out = set()
    for c in _config_masks(ses):
        if c & ebit:
            h = _history_mask(ses, ebit, c)
            if h is not None:
                out.add(h)
    return _canonical(ses, out)


def local_order(ses: StableES, u) -> frozenset[tuple[str, str]]:
    """The strict causal order that the configuration u induces on itself."""
    uset = frozenset(u)
    pairs = set()
    hist = {e: local_history(ses, e, uset).history for e in uset}
    for a, b in itertools.permutations(uset, 2):
        if hist[a] < hist[b]:
            pairs.add((a, b))
    return frozenset(pairs)


# ---------------------------------------------------------------------------
# conflict predicates
# ---------------------------------------------------------------------------


def conflict(ses: StableES, e: str, ep: str, v=None) -> bool:
    """Conflict of two events, under a configuration or globally.

    With v: e and e' conflict under v when {e, e'} with v is
    inconsistent.  Without v: they conflict under every configuration.
    """
    _require_events(ses, [e, ep])
    if v is not None:
        _require_events(ses, v)
        m = _mask(ses, v) | _mask(ses, [e, ep])
        return not _consistent_mask(ses, m)
    pair = _mask(ses, [e, ep])
    return all(not _consistent_mask(ses, c | pair) for c in _config_masks(ses))


def _local_immediate(ses: StableES, e: str, ep: str, vmask: int) -> bool:
    pos = _index(ses)[0]
    eb, epb = 1 << pos[e], 1 << pos[ep]
    if eb == epb:
        return False
    premises = _index(ses)[2]
    if not any(p & ~vmask == 0 for p in premises[pos[e]]):
        return False
    if not any(p & ~vmask == 0 for p in premises[pos[ep]]):
        return False
    if _consistent_mask(ses, vmask | eb | epb):
        return False
    he = _history_mask(ses, eb, vmask)
    hep = _history_mask(ses, epb, vmask)
    if he is None or hep is None:
        return False
    for x in _bits(he):
        for y in _bits(hep):
            if (x, y) == (eb, epb):
                continue
            if not _consistent_mask(ses, vmask | x | y):
                return False
    return True


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def immediate_conflict_ses(ses: StableES, e: str, ep: str, v=None) -> bool:
    """First-hand conflict between two events.

    With v (a configuration): v enables both events, {e, e'} with v is
    inconsistent, and the only conflicting pair under v among the two
    local histories is (e, e') itself.  Without v: for every pair of
    configurations enabling e and e' respectively, some configuration
    inside their union witnesses the immediate conflict (vacuously
    false when either event is nowhere enabled).
    """
    _require_events(ses, [e, ep])
    if v is not None:
        vset = frozenset(v)
        if not is_configuration_ses(ses, vset):
            raise ValidationError(f"{sorted(vset)} is not a configuration of {ses.name!r}")
        return _local_immediate(ses, e, ep, _mask(ses, vset))
    return _global_immediate(ses, e, ep)


@lru_cache(maxsize=None)
def _global_immediate(ses: StableES, e: str, ep: str) -> bool:
    pos, _, premises = _index(ses)
    cfgs = sorted(_config_masks(ses))

    def enabling(x):
        ps = premises[pos[x]]
        return [c for c in cfgs if any(p & ~c == 0 for p in ps)]

    en_e, en_ep = enabling(e), enabling(ep)
    if not en_e or not en_ep:
        return False
    witnesses = [c for c in cfgs if _local_immediate(ses, e, ep, c)]
    if not witnesses:
        return False
    if witnesses[0] == 0:
        return True
    for v in en_e:
        for vp in en_ep:
            u = v | vp
            if not any(w & ~u == 0 for w in witnesses):
                return False
    return True


def resolvable_immediate_conflict(ses: StableES, e: str, ep: str, v) -> bool:
    """Immediate conflict at v between events that can each occur at v.

    Strengthens the plain v-indexed predicate by requiring v+e and v+e'
    to be configurations, i.e. the conflict is between two genuinely
    available continuations of v.
    """
    vset = frozenset(v)
    _require_events(ses, [e, ep])
    cfgs = _config_masks(ses)
    vm = _mask(ses, vset)
    pos = _index(ses)[0]
    if vm | 1 << pos[e] not in cfgs or vm | 1 << pos[ep] not in cfgs:
        return False
    return _local_immediate(ses, e, ep, vm)


def star_histories(ses: StableES, xs) -> frozenset[frozenset[frozenset[str]]]:
    """All ways of choosing one local history per event of xs.

    Each member picks, for every event of xs, one of its histories over
    all configurations containing it.  Empty xs gives the single empty
    selection; an event with no history (a dead event) gives no
    selections at all.
    """
    xs = frozenset(xs)
    _require_events(ses, xs)
    if not xs:
        return frozenset({frozenset()})
    choices = [histories_of(ses, e) for e in sorted(xs)]
    if any(not c for c in choices):
        return frozenset()
    return frozenset(frozenset(sel) for sel in itertools.product(*choices))


# ---------------------------------------------------------------------------
# sensibility and conflict-drivenness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SensibleReport:
    """Outcome of the consistency-matches-reachability check."""

    sensible: bool
    pruned: tuple[frozenset[str], ...]
    removed_events: tuple[str, ...]
    result: StableES


def check_sensible(ses: StableES) -> SensibleReport:
    """Check that every consistent set lies inside some configuration.

    When not, return an equivalent structure (same configurations) that
    additionally forbids every minimal consistent-but-unreachable set.
    Dead events are unreachable as singletons, which a forbidden set of
    two or more events cannot express, so they are removed outright
    together with the rules and forbidden sets that mention them.
    Pruning is idempotent.
    """
    cfg_masks = sorted(_config_masks(ses))
    dead = set(ses.dead_events)
    live = [e for e in ses.events if e not in dead]
    pos = _index(ses)[0]
    live_mask = sum(1 << pos[e] for e in live)

    unreachable = []
    for m in range(1 << len(ses.events)):
        if m & ~live_mask:
            continue
        if not _consistent_mask(ses, m):
            continue
        if not any(m & ~c == 0 for c in cfg_masks):
            unreachable.append(m)
    minimal = [
        m for m in unreachable if not any(o != m and o & m == o for o in unreachable)
    ]
    pruned_sets = _canonical(ses, minimal)

    if not dead and not pruned_sets:
        return SensibleReport(True, (), (), ses)

    live_set = frozenset(live)
    rules = [
        (r.premise, r.conclusion)
        for r in ses.rules
        if r.conclusion in live_set and r.premise <= live_set
    ]
    forbidden = [f for f in ses.forbidden if f <= live_set]
    result = _build(ses.name, live, rules, list(forbidden) + [set(s) for s in pruned_sets])
    return SensibleReport(False, pruned_sets, tuple(sorted(dead)), result)


@dataclass(frozen=True)
class ConflictDrivenReport:
    """Outcome of the three conflict-drivenness conditions.

    1. sensible: consistency coincides with reachability;
    2. traced: every minimal inconsistent set, under every choice of
       local histories, contains a pair in global immediate conflict;
    3. persistent: an immediate conflict at a configuration between two
       events that can both occur there is a conflict under every
       configuration.
    """

    conflict_driven: bool
    sensible: bool
    unreachable_witness: frozenset[str] | None
    traced: bool
    trace_witness: tuple | None
    persistent: bool
    persistence_witness: tuple | None


def check_conflict_driven(ses: StableES) -> ConflictDrivenReport:
    sens = check_sensible(ses)
    unreachable_witness = None
    if not sens.sensible:
        if sens.pruned:
            unreachable_witness = sens.pruned[0]
        else:
            unreachable_witness = frozenset(sens.removed_events[:1])

    traced = True
    trace_witness = None
    for f in sorted(ses.forbidden, key=lambda s: (len(s), tuple(sorted(s)))):
        for sel in sorted(
            star_histories(ses, f), key=lambda t: sorted(tuple(sorted(h)) for h in t)
        ):
            union = frozenset().union(*sel) if sel else frozenset()
            if not any(
                _global_immediate(ses, a, b)
                for a, b in itertools.combinations(sorted(union), 2)
            ):
                traced = False
                trace_witness = (f, frozenset(sel))
                break
        if not traced:
            break

    persistent = True
    persistence_witness = None
    for v in configurations_ses(ses):
        for a, b in itertools.combinations(ses.events, 2):
            if resolvable_immediate_conflict(ses, a, b, v) and not conflict(ses, a, b):
                persistent = False
                persistence_witness = (a, b, v)
                break
        if not persistent:
            break

    return ConflictDrivenReport(
        conflict_driven=sens.sensible and traced and persistent,
        sensible=sens.sensible,
        unreachable_witness=unreachable_witness,
        traced=traced,
        trace_witness=trace_witness,
        persistent=persistent,
        persistence_witness=persistence_witness,
    )


# ---------------------------------------------------------------------------
# derived structures
# ---------------------------------------------------------------------------


def as_stable(es: PrimeES) -> StableES:
    """View a binary-conflict structure as a stable one.

    Each event is enabled exactly by its strict causes; the forbidden
    sets are the conflict pairs.  Configurations coincide.
    """
    rules = [(es.causes(e), e) for e in es.events]
    return _build(es.name, es.events, rules, [set(p) for p in es.conflict])


def future_ses(ses: StableES, v) -> StableES:
    """The stable structure of what can still happen after v.

    Events outside v that are individually consistent with it; rules
    and forbidden sets are restricted relative to v (premises lose
    their v-part, forbidden sets their v-part; anything mentioning an
    impossible event disappears).  Configurations of the result are the
    w - v for configurations w extending v.
    """
    vset = frozenset(v)
    if not is_configuration_ses(ses, vset):
        raise ValidationError(f"{sorted(vset)} is not a configuration of {ses.name!r}")
    keep = frozenset(
        e for e in ses.events if e not in vset and is_consistent(ses, vset | {e})
    )
    scope = keep | vset
    rules = []
    for r in ses.rules:
        if r.conclusion in keep and r.premise <= scope:
            if is_consistent(ses, r.premise | {r.conclusion} | vset):
                rules.append((r.premise - vset, r.conclusion))
    forbidden = [f - vset for f in ses.forbidden if f <= scope and not f <= vset]
    name = f"{ses.name}^{{{','.join(sorted(vset))}}}"
    return _build(name, keep, rules, forbidden)


def restrict_ses(ses: StableES, keep, name=None) -> StableES:
    """The sub-structure induced by an event subset.

    Rules whose premise leaves the subset are dropped, so this matches
    the host's configurations only on prefixes (where every event keeps
    an enabling inside).
    """
    keep = frozenset(keep)
    _require_events(ses, keep)
    rules = [
        (r.premise, r.conclusion)
        for r in ses.rules
        if r.conclusion in keep and r.premise <= keep
    ]
    forbidden = [f for f in ses.forbidden if f <= keep]
    return _build(
        name if name is not None else f"{ses.name}|{len(keep)}", keep, rules, forbidden
    )

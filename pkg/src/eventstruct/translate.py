"""Renaming stable structures into prime ones via local histories.

Every way an event can occur, that is, each of its local histories
across configurations, becomes an event of the derived structure; inclusion of histories is
the global causal order, and a finite set of histories counts as
consistent when their union is still a configuration of the source.
The configuration domains of source and result are isomorphic, and the
map sending each history back to its top event (the counit) witnesses
that.

When the derived consistency is generated by a binary relation (which
holds for conflict-driven sources), the result embeds into a plain
binary-conflict structure: the associated ES.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from eventstruct.errors import NotGenerableError, ValidationError
from eventstruct.prime import PrimeES, configurations, validate_prime
from eventstruct.stable import (
    StableES,
    configurations_ses,
    enables,
    histories_of,
    local_history,
)

__all__ = [
    "Morphism",
    "HistoryStructure",
    "ThetaResult",
    "theta",
    "theta_event_name",
    "binary_conflict_generable",
    "GenerabilityReport",
    "associated_es",
    "domains_isomorphic",
    "configs_of",
    "is_morphism",
]


def theta_event_name(event: str, history: frozenset[str]) -> str:
    """Canonical name of a history event: "e@{sorted history}"."""
    return f"{event}@{{{','.join(sorted(history))}}}"


@dataclass(frozen=True, eq=False)
class Morphism:
    """A partial event map between structures.

    Must send consistent sets to consistent sets, be injective on
    consistent pairs, and preserve enabling.  `mapping` takes a source
    event to a target event; absent keys are undefined.
    """

    source: object
    target: object
    mapping: dict

    @property
    def total(self) -> bool:
        return all(e in self.mapping for e in _events_of(self.source))

    def apply(self, e: str) -> str | None:
        return self.mapping.get(e)

    def apply_config(self, v) -> frozenset[str]:
        return frozenset(self.mapping[e] for e in v if e in self.mapping)


class HistoryStructure:
    """The prime structure over local histories of a stable source.

    Events are the distinct histories, ordered by inclusion; a finite
    set of them is consistent when the union of the histories is a
    configuration of the source.  Not necessarily generated by a binary
    conflict relation; see binary_conflict_generable.
    """

    def __init__(self, name: str, source: StableES):
        self.name = name
        self.source = source
        hist: dict[str, frozenset[str]] = {}
        top: dict[str, str] = {}
        for e in source.events:
            for h in histories_of(source, e):
                n = theta_event_name(e, h)
                if n in hist:
                    raise ValidationError(f"duplicate history event {n!r}")
                hist[n] = h
                top[n] = e
        # distinct events never share a history set (coincidence-freeness)
        if len(set(hist.values())) != len(hist):
            raise ValidationError("two events share one history set; source not stable")
        self.events: tuple[str, ...] = tuple(sorted(hist))
        self.history: dict[str, frozenset[str]] = hist
        self.event_of: dict[str, str] = top
        self._source_configs = frozenset(configurations_ses(source))

    def __repr__(self) -> str:
        return f"HistoryStructure({self.name!r}, {len(self.events)} events)"

    def precedes(self, p: str, q: str) -> bool:
        return self.history[p] < self.history[q]

    def order_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (p, q)
            for p, q in itertools.permutations(self.events, 2)
            if self.precedes(p, q)
        )

    def consistent(self, xs) -> bool:
        """Joint compatibility: the union of histories is a configuration."""
        xs = frozenset(xs)
        union = frozenset().union(*(self.history[p] for p in xs)) if xs else frozenset()
        return union in self._source_configs

    def config_image(self, v) -> frozenset[str]:
        """The history-event set corresponding to a source configuration."""
        return frozenset(
            theta_event_name(e, local_history(self.source, e, frozenset(v)).history)
            for e in v
        )

    def configurations(self) -> tuple[frozenset[str], ...]:
        """Down-closed, finitely consistent subsets, canonical order.

        Computed directly as the images of the source configurations;
        that this equals the definitional enumeration is a tested
        property.
        """
        out = {self.config_image(v) for v in self._source_configs}
        return tuple(sorted(out, key=lambda s: (len(s), tuple(sorted(s)))))

    def configurations_by_definition(self) -> tuple[frozenset[str], ...]:
        """Definitional enumeration (independent of config_image)."""
        out = []
        for r in range(len(self.events) + 1):
            for combo in itertools.combinations(self.events, r):
                xs = frozenset(combo)
                if not self.consistent(xs):
                    continue
                if all(
                    q in xs
                    for p in xs
                    for q in self.events
                    if self.history[q] < self.history[p]
                ):
                    out.append(xs)
        return tuple(sorted(out, key=lambda s: (len(s), tuple(sorted(s)))))


@dataclass(frozen=True, eq=False)
class ThetaResult:
    pes: HistoryStructure
    counit: Morphism = field(repr=False)


@lru_cache(maxsize=None)
def theta(ses: StableES) -> ThetaResult:
    """Translate a stable structure into its history-event prime form."""
    hp = HistoryStructure(f"theta({ses.name})", ses)
    counit = Morphism(source=hp, target=ses, mapping=dict(hp.event_of))
    return ThetaResult(pes=hp, counit=counit)


@dataclass(frozen=True)
class GenerabilityReport:
    generable: bool
    conflict_pairs: frozenset[frozenset[str]]
    witness: frozenset[str] | None


def binary_conflict_generable(tr: ThetaResult | HistoryStructure) -> GenerabilityReport:
    """Can the derived consistency be generated from pairwise conflicts?

    Defines p # q as {p, q} inconsistent and scans every finite event
    set: consistency must coincide with pairwise non-conflict.  Returns
    the binary relation on success, or a smallest counterexample set
    (pairwise consistent yet jointly inconsistent) on failure.
    """
    hp = tr.pes if isinstance(tr, ThetaResult) else tr
    pairs = frozenset(
        frozenset((p, q))
        for p, q in itertools.combinations(hp.events, 2)
        if not hp.consistent({p, q})
    )
    for r in range(3, len(hp.events) + 1):
        for combo in itertools.combinations(hp.events, r):
            xs = frozenset(combo)
            pairwise_ok = not any(
                frozenset((p, q)) in pairs for p, q in itertools.combinations(combo, 2)
            )
            if pairwise_ok and not hp.consistent(xs):
                return GenerabilityReport(False, pairs, xs)
    return GenerabilityReport(True, pairs, None)


def associated_es(ses: StableES) -> tuple[PrimeES, Morphism]:
    """The binary-conflict structure behind a generable translation.

    History events with inclusion order and the generated binary
    conflict, plus the morphism collapsing each history event back to
    its source event.  Raises when consistency is genuinely not binary,
    carrying the counterexample set.
    """
    tr = theta(ses)
    rep = binary_conflict_generable(tr)
    if not rep.generable:
        raise NotGenerableError(
            f"consistency of theta({ses.name}) is not generated by a binary"
            f" conflict relation; witness {sorted(rep.witness)}",
            witness=rep.witness,
        )
    hp = tr.pes
    es = validate_prime(
        f"{ses.name}_es",
        hp.events,
        [(p, q) for (p, q) in hp.order_pairs()],
        [tuple(sorted(pr)) for pr in rep.conflict_pairs],
    )
    return es, Morphism(source=es, target=ses, mapping=dict(hp.event_of))


def configs_of(obj) -> tuple[frozenset[str], ...]:
    """Configurations of any structure kind, canonical order."""
    if isinstance(obj, PrimeES):
        return configurations(obj)
    if isinstance(obj, StableES):
        return configurations_ses(obj)
    if isinstance(obj, HistoryStructure):
        return obj.configurations()
    if isinstance(obj, ThetaResult):
        return obj.pes.configurations()
    raise TypeError(f"no configurations for {type(obj).__name__}")


def _events_of(obj) -> tuple[str, ...]:
    if isinstance(obj, ThetaResult):
        return obj.pes.events
    return obj.events


def domains_isomorphic(a, b, f: Morphism) -> bool:
    """Is v -> f(v) an order isomorphism between configuration domains?

    Requires f total on the events of a; checks the image map is a
    bijection between the configuration sets and preserves and reflects
    inclusion.
    """
    if not all(e in f.mapping for e in _events_of(a)):
        raise ValidationError("morphism must be total on the source events")
    ca = configs_of(a)
    cb = set(configs_of(b))
    image = {}
    for v in ca:
        w = f.apply_config(v)
        if w not in cb or len(w) != len(v):
            return False
        image[v] = w
    if len(set(image.values())) != len(ca) or set(image.values()) != cb:
        return False
    for v1, v2 in itertools.product(ca, repeat=2):
        if (v1 <= v2) != (image[v1] <= image[v2]):
            return False
    return True


def _consistent_sets(obj):
    evs = _events_of(obj)
    if isinstance(obj, PrimeES):
        def ok(xs):
            return not any(
                obj.in_conflict(x, y) for x, y in itertools.combinations(xs, 2)
            )
    elif isinstance(obj, StableES):
        from eventstruct.stable import is_consistent

        def ok(xs):
            return is_consistent(obj, xs)
    else:
        def ok(xs):
            return obj.consistent(xs)
    for r in range(len(evs) + 1):
        for combo in itertools.combinations(evs, r):
            if ok(frozenset(combo)):
                yield frozenset(combo)


def _enables(obj, xs, e) -> bool:
    if isinstance(obj, StableES):
        return enables(obj, xs, e)
    if isinstance(obj, PrimeES):
        return obj.causes(e) <= frozenset(xs)
    hist = obj.history[e]
    return frozenset(p for p in obj.events if obj.history[p] < hist) <= frozenset(xs)


def is_morphism(m: Morphism) -> tuple[bool, str | None]:
    """Check the three morphism axioms by finite enumeration.

    Consistency preservation, injectivity on consistent pairs, and
    enabling preservation; returns (ok, description of first failure).
    """
    tgt_consistent = set(_consistent_sets(m.target))
    for xs in _consistent_sets(m.source):
        img = m.apply_config(xs)
        if img not in tgt_consistent:
            return False, f"image of consistent {sorted(xs)} is inconsistent"
        defined = [e for e in xs if e in m.mapping]
        if len({m.mapping[e] for e in defined}) != len(defined):
            return False, f"not injective on the consistent set {sorted(xs)}"
        for e in defined:
            if _enables(m.source, xs, e) and not _enables(m.target, img, m.mapping[e]):
                return False, f"enabling of {e!r} by {sorted(xs)} not preserved"
    return True, None

"""Stopping prefixes, branching cells, coverings and structural checks.

A stopping prefix is a cause-closed subset that also keeps every
immediate conflict of its members inside; a branching cell enabled by a
configuration v is a minimal nonempty stopping prefix of the future at
v, the unit inside which one probabilistic choice is resolved.  A
finite configuration is R-stopped when it can be tiled by such cells,
each step choosing a maximal configuration of one enabled cell; the
cell set so collected (the covering) does not depend on the order.

For binary-conflict hosts the minimal prefixes come from single-event
closures under causes and immediate conflict; for stable hosts no such
canonical closure exists, so candidates are enumerated exhaustively
over the future's subsets and filtered for minimality.

An Analyzer instance memoises futures, cells and decompositions for one
host; it must not be shared across concurrent calls, but distinct
instances are independent and all results are immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from eventstruct import prime as P
from eventstruct import stable as S
from eventstruct.errors import NotRStoppedError, PreconditionError, ValidationError
from eventstruct.prime import PrimeES
from eventstruct.stable import StableES

__all__ = [
    "StoppingPrefix",
    "BranchingCell",
    "Covering",
    "DecompositionFailure",
    "Analyzer",
    "is_stopping_prefix",
    "stopping_prefixes",
    "minimal_stopping_prefix",
    "enabled_cells",
    "valid_decomposition",
    "covering",
    "r_stopped_configurations",
    "is_r_stopped",
    "check_pre_regular",
    "check_locally_finite",
    "check_jump_free",
    "check_cells_flat",
    "check_cell_isomorphism",
    "PreRegularReport",
    "LocallyFiniteReport",
    "JumpFreeReport",
    "JumpWitness",
    "FlatReport",
    "CellIsoReport",
]


@dataclass(frozen=True)
class StoppingPrefix:
    events: frozenset[str]
    host: object = field(compare=False)


@dataclass(frozen=True)
class BranchingCell:
    """A minimal nonempty stopping prefix of the future at enabled_at.

    omega lists the maximal configurations available inside the cell,
    in canonical order.  Cells compare by event set and omega, so equal
    choices arising at different configurations coincide.
    """

    events: frozenset[str]
    omega: tuple[frozenset[str], ...]
    enabled_at: frozenset[str] = field(compare=False)

    def __repr__(self) -> str:
        return f"BranchingCell({{{','.join(sorted(self.events))}}})"


@dataclass(frozen=True)
class Covering:
    configuration: frozenset[str]
    steps: tuple[tuple[BranchingCell, frozenset[str]], ...]

    @property
    def cells(self) -> frozenset[BranchingCell]:
        return frozenset(c for c, _ in self.steps)


@dataclass(frozen=True)
class DecompositionFailure:
    """Why no cell-step sequence reaches the configuration."""

    configuration: frozenset[str]
    reached: frozenset[str]
    blocked: tuple[tuple[BranchingCell, frozenset[str]], ...]  # (cell, v cut to cell)

    def describe(self) -> str:
        parts = []
        for cell, part in self.blocked:
            omega = " ".join("{" + ",".join(sorted(w)) + "}" for w in cell.omega)
            parts.append(
                f"cell {{{','.join(sorted(cell.events))}}}: holds"
                f" {{{','.join(sorted(part))}}}, maximal are {omega}"
            )
        at = ",".join(sorted(self.reached))
        return f"stuck at {{{at}}}: " + ("; ".join(parts) if parts else "no enabled cell")


def _canonical_sets(sets):
    return tuple(sorted(sets, key=lambda s: (len(s), tuple(sorted(s)))))


# ---------------------------------------------------------------------------
# stopping prefixes
# ---------------------------------------------------------------------------


def _prime_prefix_closed(es: PrimeES, b: frozenset[str]) -> bool:
    return all(es.causes(e) <= b for e in b)


def _prime_mu_closed(es: PrimeES, b: frozenset[str]) -> bool:
    mu = P.immediate_conflict_pairs(es)
    for pair in mu:
        x, y = tuple(pair)
        if (x in b) != (y in b):
            return False
    return True


@lru_cache(maxsize=None)
def _ses_mu_demands(ses: StableES) -> tuple[tuple[frozenset[str], str], ...]:
    """Closure obligations for stable stopping prefixes.

    One pair (history, partner) per immediate conflict between two
    events that can both occur at some configuration: whenever the
    first event's local history there lies inside a candidate prefix,
    the partner must lie inside too.  Quantifying the context over all
    configurations (rather than only those inside the candidate) is
    what keeps these prefixes aligned with the stopping prefixes of the
    associated binary-conflict structure, where immediate conflict is
    context-free; a context confined to the candidate would let a cell
    silently drop a conflict partner whose enabling lives outside it.
    """
    cfgs = set(S.configurations_ses(ses))
    out = set()
    for v in cfgs:
        for e in ses.events:
            if (v | {e}) not in cfgs:
                continue
            he = S.history_at(ses, e, v)
            for ep in ses.events:
                if ep == e or (v | {ep}) not in cfgs:
                    continue
                if S.immediate_conflict_ses(ses, e, ep, v):
                    out.add((he, ep))
    return tuple(sorted(out, key=lambda p: (tuple(sorted(p[0])), p[1])))


def _ses_is_prefix(ses: StableES, b: frozenset[str]) -> bool:
    return all(
        any(r.premise <= b and S.is_consistent(ses, r.premise) for r in ses.rules_for(e))
        for e in b
    )


def _ses_stopping(ses: StableES, b: frozenset[str]) -> bool:
    if not _ses_is_prefix(ses, b):
        return False
    for history, partner in _ses_mu_demands(ses):
        if history <= b and partner not in b:
            return False
    return True


def is_stopping_prefix(host, b) -> bool:
    """Prefix-ness plus the host's immediate-conflict closure condition."""
    b = frozenset(b)
    if isinstance(host, PrimeES):
        for e in b:
            if not host.has_event(e):
                raise ValidationError(f"unknown event {e!r}")
        return _prime_prefix_closed(host, b) and _prime_mu_closed(host, b)
    if isinstance(host, StableES):
        for e in b:
            if not host.has_event(e):
                raise ValidationError(f"unknown event {e!r}")
        return _ses_stopping(host, b)
    raise TypeError(f"no stopping prefixes for {type(host).__name__}")


def stopping_prefixes(host) -> tuple[frozenset[str], ...]:
    """Every stopping prefix, by exhaustive subset enumeration."""
    evs = host.events
    out = []
    for r in range(len(evs) + 1):
        for combo in itertools.combinations(evs, r):
            b = frozenset(combo)
            if is_stopping_prefix(host, b):
                out.append(b)
    return _canonical_sets(out)


def minimal_stopping_prefix(es: PrimeES, xs) -> StoppingPrefix:
    """Least stopping prefix containing xs: close under causes and
    immediate conflict.  Only binary-conflict hosts admit a canonical
    least one; stable hosts raise."""
    if isinstance(es, StableES):
        raise ValidationError(
            "a least stopping prefix is not canonical for stable structures"
        )
    xs = frozenset(xs)
    for e in xs:
        if not es.has_event(e):
            raise ValidationError(f"unknown event {e!r}")
    mu = P.immediate_conflict_pairs(es)
    out = set(xs)
    changed = True
    while changed:
        changed = False
        for e in list(out):
            for c in es.causes(e):
                if c not in out:
                    out.add(c)
                    changed = True
            for pair in mu:
                if e in pair:
                    (other,) = pair - {e} if len(pair) == 2 else (e,)
                    if other not in out:
                        out.add(other)
                        changed = True
    return StoppingPrefix(events=frozenset(out), host=es)


def _initial_prefixes_prime(es: PrimeES) -> tuple[frozenset[str], ...]:
    closures = {minimal_stopping_prefix(es, [e]).events for e in es.events}
    minimal = [c for c in closures if not any(o < c for o in closures)]
    return _canonical_sets(minimal)


def _initial_prefixes_stable(ses: StableES) -> tuple[frozenset[str], ...]:
    prefixes = [b for b in stopping_prefixes(ses) if b]
    minimal = [b for b in prefixes if not any(o and o < b for o in prefixes)]
    return _canonical_sets(minimal)


# ---------------------------------------------------------------------------
# analyzer: futures, cells, decompositions
# ---------------------------------------------------------------------------


class Analyzer:
    """Memoised cell analysis for one host structure."""

    def __init__(self, host):
        if not isinstance(host, (PrimeES, StableES)):
            raise TypeError(f"cannot analyse {type(host).__name__}")
        self.host = host
        self._futures: dict[frozenset[str], object] = {}
        self._cells: dict[frozenset[str], tuple[BranchingCell, ...]] = {}
        self._rstopped: frozenset[frozenset[str]] | None = None
        self._coverings: dict[frozenset[str], frozenset[BranchingCell]] = {}
        self.warnings: list[str] = []

    # -- plumbing over the two host kinds --

    def configurations(self) -> tuple[frozenset[str], ...]:
        if isinstance(self.host, PrimeES):
            return P.configurations(self.host)
        return S.configurations_ses(self.host)

    def maximal_configurations(self) -> tuple[frozenset[str], ...]:
        if isinstance(self.host, PrimeES):
            return P.maximal_configurations(self.host)
        return S.maximal_configurations_ses(self.host)

    def is_configuration(self, v) -> bool:
        if isinstance(self.host, PrimeES):
            return P.is_configuration(self.host, v)
        return S.is_configuration_ses(self.host, v)

    def future(self, v):
        v = frozenset(v)
        if v not in self._futures:
            if isinstance(self.host, PrimeES):
                self._futures[v] = P.future(self.host, v)
            else:
                self._futures[v] = S.future_ses(self.host, v)
        return self._futures[v]

    def _future_configs(self, fut) -> tuple[frozenset[str], ...]:
        if isinstance(fut, PrimeES):
            return P.configurations(fut)
        return S.configurations_ses(fut)

    # -- cells --

    def cells_at(self, v) -> tuple[BranchingCell, ...]:
        """Branching cells of the future at v (no R-stopped check)."""
        v = frozenset(v)
        if v in self._cells:
            return self._cells[v]
        if not self.is_configuration(v):
            raise ValidationError(f"{sorted(v)} is not a configuration of {self.host.name!r}")
        fut = self.future(v)
        if isinstance(fut, PrimeES):
            prefixes = _initial_prefixes_prime(fut)
        else:
            prefixes = _initial_prefixes_stable(fut)
        fut_cfgs = self._future_configs(fut)
        cells = []
        for c in prefixes:
            inside = [w for w in fut_cfgs if w <= c]
            omega = _canonical_sets(
                [w for w in inside if not any(w < o for o in inside)]
            )
            if omega == (frozenset(),):
                self.warnings.append(
                    f"cell {{{','.join(sorted(c))}}} at {{{','.join(sorted(v))}}}"
                    f" admits no nonempty configuration; skipped"
                )
                continue
            cells.append(BranchingCell(events=c, omega=omega, enabled_at=v))
        out = tuple(sorted(cells, key=lambda c: (len(c.events), tuple(sorted(c.events)))))
        self._cells[v] = out
        return out

    def enabled_cells(self, v) -> tuple[BranchingCell, ...]:
        """Cells enabled by a finite R-stopped configuration (checked)."""
        v = frozenset(v)
        if not self.is_r_stopped(v):
            raise NotRStoppedError(
                f"{sorted(v)} is not R-stopped in {self.host.name!r}", witness=v
            )
        return self.cells_at(v)

    # -- R-stopped set --

    def r_stopped(self) -> tuple[frozenset[str], ...]:
        """All finite R-stopped configurations, canonical order."""
        if self._rstopped is None:
            seen = {frozenset()}
            frontier = [frozenset()]
            while frontier:
                w = frontier.pop()
                for cell in self.cells_at(w):
                    for omega in cell.omega:
                        nxt = w | omega
                        if nxt not in seen:
                            seen.add(nxt)
                            frontier.append(nxt)
            self._rstopped = frozenset(seen)
        return _canonical_sets(self._rstopped)

    def is_r_stopped(self, v) -> bool:
        v = frozenset(v)
        if not self.is_configuration(v):
            raise ValidationError(f"{sorted(v)} is not a configuration of {self.host.name!r}")
        self.r_stopped()
        return v in self._rstopped

    # -- decompositions --

    def valid_decomposition(self, v) -> Covering | DecompositionFailure:
        """A cell-step sequence tiling v, or why none exists.

        Search is exhaustive over enabled cells and their maximal
        configurations, in canonical order, so the returned covering is
        deterministic.
        """
        v = frozenset(v)
        if not self.is_configuration(v):
            raise ValidationError(f"{sorted(v)} is not a configuration of {self.host.name!r}")
        dead: set[frozenset[str]] = set()
        first_block: list = [None]

        def search(w):
            if w == v:
                return ()
            if w in dead:
                return None
            blocked = []
            for cell in self.cells_at(w):
                part = v & cell.events
                if part in cell.omega:
                    rest = search(w | part)
                    if rest is not None:
                        return ((cell, part),) + rest
                else:
                    blocked.append((cell, part))
            dead.add(w)
            if first_block[0] is None:
                first_block[0] = (w, tuple(blocked))
            return None

        steps = search(frozenset())
        if steps is not None:
            return Covering(configuration=v, steps=steps)
        reached, blocked = first_block[0] if first_block[0] else (frozenset(), ())
        return DecompositionFailure(configuration=v, reached=reached, blocked=blocked)

    def all_decompositions(self, v) -> tuple[Covering, ...]:
        """Every cell-step sequence tiling v (desk scale only)."""
        v = frozenset(v)
        out = []

        def search(w, acc):
            if w == v:
                out.append(Covering(configuration=v, steps=tuple(acc)))
                return
            for cell in self.cells_at(w):
                part = v & cell.events
                if part in cell.omega:
                    search(w | part, acc + [(cell, part)])

        search(frozenset(), [])
        return tuple(out)

    def covering(self, v) -> frozenset[BranchingCell]:
        """The cell set resolved by any decomposition of an R-stopped v.

        Asserts the defining invariance: every decomposition yields the
        same pairwise-disjoint cell set.
        """
        v = frozenset(v)
        if v in self._coverings:
            return self._coverings[v]
        decomps = self.all_decompositions(v)
        if not decomps:
            raise NotRStoppedError(
                f"{sorted(v)} is not R-stopped in {self.host.name!r}", witness=v
            )
        cell_sets = {d.cells for d in decomps}
        if len(cell_sets) != 1:
            raise ValidationError(
                f"decompositions of {sorted(v)} disagree on the cell set"
            )
        cells = cell_sets.pop()
        for c1, c2 in itertools.combinations(cells, 2):
            if c1.events & c2.events:
                raise ValidationError(
                    f"covering cells of {sorted(v)} overlap: {c1} and {c2}"
                )
        self._coverings[v] = cells
        return cells


# ---------------------------------------------------------------------------
# module-level conveniences
# ---------------------------------------------------------------------------


def enabled_cells(host, v) -> tuple[BranchingCell, ...]:
    return Analyzer(host).enabled_cells(v)


def valid_decomposition(host, v):
    return Analyzer(host).valid_decomposition(v)


def covering(host, v) -> frozenset[BranchingCell]:
    return Analyzer(host).covering(v)


def r_stopped_configurations(host) -> tuple[frozenset[str], ...]:
    return Analyzer(host).r_stopped()


def is_r_stopped(host, v) -> bool:
    return Analyzer(host).is_r_stopped(v)


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreRegularReport:
    pre_regular: bool
    max_enabled: int
    witness: frozenset[str]


def check_pre_regular(host) -> PreRegularReport:
    """Finitely many events enabled at every finite configuration.

    Trivially true on finite hosts; reported with the per-configuration
    maximum for completeness.
    """
    an = Analyzer(host)
    best, witness = 0, frozenset()
    for v in an.configurations():
        if isinstance(host, PrimeES):
            k = len(P.enabled_events(host, v))
        else:
            k = len(S.enabled_events_ses(host, v))
        if k > best:
            best, witness = k, v
    return PreRegularReport(pre_regular=True, max_enabled=best, witness=witness)


@dataclass(frozen=True)
class LocallyFiniteReport:
    locally_finite: bool
    uncovered: tuple[str, ...]
    prefix_sizes: tuple[tuple[str, int], ...]


def check_locally_finite(host) -> LocallyFiniteReport:
    """Every event lies in a finite stopping prefix.

    On finite hosts the whole event set is itself a stopping prefix, so
    this holds; the report carries, per event, the size of the smallest
    stopping prefix containing it.
    """
    sizes = []
    uncovered = []
    if isinstance(host, PrimeES):
        for e in host.events:
            sizes.append((e, len(minimal_stopping_prefix(host, [e]).events)))
    else:
        prefixes = stopping_prefixes(host)
        for e in host.events:
            holding = [b for b in prefixes if e in b]
            if holding:
                sizes.append((e, min(len(b) for b in holding)))
            else:
                uncovered.append(e)
    return LocallyFiniteReport(
        locally_finite=not uncovered,
        uncovered=tuple(uncovered),
        prefix_sizes=tuple(sizes),
    )


@dataclass(frozen=True)
class JumpWitness:
    source: str
    chain: tuple[str, ...]
    target: str
    config: frozenset[str] | None  # the configuration ordering source < target (stable hosts)
    contexts: tuple[frozenset[str], ...]  # per chain edge, a witnessing sub-configuration

    def describe(self) -> str:
        path = " -- ".join((self.source,) + self.chain + (self.target,))
        where = "" if self.config is None else f" within {{{','.join(sorted(self.config))}}}"
        return f"{self.source} < {self.target}{where} bridged by {path}"


@dataclass(frozen=True)
class JumpFreeReport:
    jump_free: bool
    witness: JumpWitness | None


def _find_chain(nodes, edges, src, dst, min_inner):
    """Shortest simple chain src--..--dst with at least min_inner inner
    events, none equal to the endpoints; lexicographically first among
    shortest.  edges maps an event to a sorted tuple of neighbours."""
    for inner in range(min_inner, len(nodes) + 1):
        path = []

        def dfs(at, remaining):
            if remaining == 0:
                return dst in edges.get(at, ())
            for nxt in edges.get(at, ()):
                if nxt in (src, dst) or nxt in path:
                    continue
                path.append(nxt)
                if dfs(nxt, remaining - 1):
                    return True
                path.pop()
            return False

        if dfs(src, inner):
            return tuple(path)
    return None


@lru_cache(maxsize=None)
def _ses_mu_pairs_by_config(ses: StableES) -> dict[frozenset[str], frozenset[frozenset[str]]]:
    out = {}
    for v in S.configurations_ses(ses):
        pairs = set()
        for a, b in itertools.combinations(ses.events, 2):
            if S.immediate_conflict_ses(ses, a, b, v):
                pairs.add(frozenset((a, b)))
        out[v] = frozenset(pairs)
    return out


def check_jump_free(host) -> JumpFreeReport:
    """No causally ordered pair bridged by an immediate-conflict chain
    with more than one inner event.

    For stable hosts the order is per configuration v and chain edges
    may use immediate conflicts under any sub-configuration of v.  The
    first witness in canonical search order is reported.
    """
    if isinstance(host, PrimeES):
        mu = P.immediate_conflict_pairs(host)
        edges: dict[str, tuple[str, ...]] = {}
        for pair in mu:
            x, y = tuple(pair)
            edges.setdefault(x, ())
            edges.setdefault(y, ())
            edges[x] = tuple(sorted(set(edges[x]) | {y}))
            edges[y] = tuple(sorted(set(edges[y]) | {x}))
        for a, b in sorted(host.causality):
            chain = _find_chain(host.events, edges, a, b, 2)
            if chain is not None:
                contexts = tuple(frozenset() for _ in range(len(chain) + 1))
                return JumpFreeReport(
                    False, JumpWitness(a, chain, b, None, contexts)
                )
        return JumpFreeReport(True, None)

    ses = host
    by_cfg = _ses_mu_pairs_by_config(ses)
    cfgs = S.configurations_ses(ses)
    for v in cfgs:
        if len(v) < 2:
            continue
        sub = [w for w in cfgs if w <= v]
        pairset: dict[frozenset[str], frozenset[str]] = {}
        for w in sub:
            for p in by_cfg[w]:
                pairset.setdefault(p, w)
        edges: dict[str, tuple[str, ...]] = {}
        for p in pairset:
            x, y = tuple(p)
            edges.setdefault(x, ())
            edges.setdefault(y, ())
            edges[x] = tuple(sorted(set(edges[x]) | {y}))
            edges[y] = tuple(sorted(set(edges[y]) | {x}))
        for a, b in sorted(S.local_order(ses, v)):
            chain = _find_chain(ses.events, edges, a, b, 2)
            if chain is not None:
                hops = (a,) + chain + (b,)
                contexts = tuple(
                    pairset[frozenset((hops[i], hops[i + 1]))]
                    for i in range(len(hops) - 1)
                )
                return JumpFreeReport(False, JumpWitness(a, chain, b, v, contexts))
    return JumpFreeReport(True, None)


@dataclass(frozen=True)
class FlatReport:
    flat: bool
    violation: tuple[frozenset[str], frozenset[str], str] | None  # (v, cell, event)


def check_cells_flat(host) -> FlatReport:
    """Every branching cell at every reachable R-stopped configuration
    consists of initial events of the corresponding future.

    Precondition: the host is jump-free (raised otherwise, with the
    witness on the exception).
    """
    jf = check_jump_free(host)
    if not jf.jump_free:
        raise PreconditionError(
            f"{host.name!r} is not jump-free: {jf.witness.describe()}",
            witness=jf.witness,
        )
    an = Analyzer(host)
    for v in an.r_stopped():
        fut = an.future(v)
        initial = {
            e for w in an._future_configs(fut) if len(w) == 1 for e in w
        }
        for cell in an.cells_at(v):
            for e in cell.events:
                if e not in initial:
                    return FlatReport(False, (v, cell.events, e))
    return FlatReport(True, None)


@dataclass(frozen=True)
class ConfusionReport:
    """Evidence that choices interfere across the structure.

    Reported when the host has a jump, when two distinct branching
    cells share events, or when one cell contains concurrent events
    (some maximal configuration of the cell has two or more events),
    a choice that is not a plain mutual-exclusion.
    """

    confusion: bool
    reasons: tuple[str, ...]


def check_confusion(host) -> ConfusionReport:
    reasons = []
    jf = check_jump_free(host)
    if not jf.jump_free:
        reasons.append(f"jump: {jf.witness.describe()}")
    an = Analyzer(host)
    seen: list[BranchingCell] = []
    for v in an.r_stopped():
        for cell in an.cells_at(v):
            if cell not in seen:
                seen.append(cell)
    for c1, c2 in itertools.combinations(seen, 2):
        if c1.events != c2.events and c1.events & c2.events:
            reasons.append(
                f"overlapping cells {{{','.join(sorted(c1.events))}}} and"
                f" {{{','.join(sorted(c2.events))}}}"
            )
            break
    for cell in seen:
        if any(len(w) > 1 for w in cell.omega):
            reasons.append(
                f"cell {{{','.join(sorted(cell.events))}}} contains concurrent events"
            )
            break
    return ConfusionReport(confusion=bool(reasons), reasons=tuple(reasons))


@dataclass(frozen=True)
class CellIsoReport:
    """Cell correspondence between a stable structure and its associated
    binary-conflict structure, along the counit.

    holds is None when a precondition (conflict-driven, jump-free)
    fails; the failures are then listed rather than silently skipped.
    """

    holds: bool | None
    precondition_failures: tuple[str, ...]
    mismatch: str | None


def check_cell_isomorphism(ses: StableES) -> CellIsoReport:
    from eventstruct.stable import check_conflict_driven
    from eventstruct.translate import associated_es, theta

    failures = []
    cd = check_conflict_driven(ses)
    if not cd.conflict_driven:
        failures.append("not conflict-driven")
    jf = check_jump_free(ses)
    if not jf.jump_free:
        failures.append(f"not jump-free ({jf.witness.describe()})")
    if failures:
        return CellIsoReport(holds=None, precondition_failures=tuple(failures), mismatch=None)

    es, back = associated_es(ses)
    hp = theta(ses).pes
    an_s = Analyzer(ses)
    an_e = Analyzer(es)

    sigma = {v: hp.config_image(v) for v in an_s.r_stopped()}
    if set(sigma.values()) != set(an_e.r_stopped()):
        return CellIsoReport(False, (), "R-stopped configurations do not correspond")

    for v, vhat in sorted(sigma.items(), key=lambda kv: (len(kv[0]), tuple(sorted(kv[0])))):
        cells_s = {c.events: c for c in an_s.cells_at(v)}
        cells_e = list(an_e.cells_at(vhat))
        images = []
        for chat in cells_e:
            img = frozenset(back.apply(p) for p in chat.events)
            if len(img) != len(chat.events):
                return CellIsoReport(
                    False, (), f"counit not injective on cell {sorted(chat.events)} at {sorted(vhat)}"
                )
            if img not in cells_s:
                return CellIsoReport(
                    False,
                    (),
                    f"cell {sorted(chat.events)} at {sorted(vhat)} has no match at {sorted(v)}",
                )
            omega_img = _canonical_sets([back.apply_config(w) for w in chat.omega])
            if omega_img != cells_s[img].omega:
                return CellIsoReport(
                    False, (), f"cell {sorted(chat.events)} disagrees on maximal configurations"
                )
            images.append(img)
        if len(set(images)) != len(cells_e) or set(images) != set(cells_s):
            return CellIsoReport(
                False, (), f"cells at {sorted(v)} do not biject with cells at {sorted(vhat)}"
            )
    return CellIsoReport(holds=True, precondition_failures=(), mismatch=None)

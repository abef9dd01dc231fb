"""Line-oriented text formats and DOT export.

Grammar (UTF-8, `//` comments, whitespace-separated tokens):

  .es    es NAME / events ID... / cause ID < ID / conflict ID ID
  .ses   ses NAME / events ID... / enabling { ID... } |- ID
         / forbidden { ID ID... }
  .net   net NAME / places ID... / transitions ID... / arc ID -> ID
         / marking ID...
  .prob  repeated blocks:  cell { ID... }
                             config { ID... } WEIGHT   (indented)

Serialisation is deterministic (sorted events, reduced causality,
immediate conflicts as the generating set), so parse and serialize are
mutually inverse on validated objects and DOT output is byte-identical
across runs.  A truncated unfolding prefix is marked with a
"// meta truncated" line that survives the round trip.
"""

from __future__ import annotations

import itertools

from eventstruct import prime as P
from eventstruct import stable as S
from eventstruct.cells import Analyzer
from eventstruct.errors import EventStructError, ParseError
from eventstruct.nets import SafeNet, validate_net
from eventstruct.prime import PrimeES, validate_prime
from eventstruct.stable import StableES, validate_stable

__all__ = [
    "parse_document",
    "parse_path",
    "serialize",
    "export_dot",
]


def _strip_comment(line: str) -> str:
    if "//" in line:
        return line[: line.index("//")]
    return line


def _tokens(line: str):
    """(token, 1-based column) pairs of one raw line."""
    out = []
    col = 0
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        col = j
        i = j
    return out


def _braced(tokens, lineno, start):
    """Parse '{ ID... }' starting at tokens[start]; return (ids, next index)."""
    if start >= len(tokens) or tokens[start][0] != "{":
        col = tokens[start][1] if start < len(tokens) else 1
        raise ParseError(lineno, col, "expected '{'")
    ids = []
    i = start + 1
    while i < len(tokens) and tokens[i][0] != "}":
        ids.append(tokens[i][0])
        i += 1
    if i >= len(tokens):
        raise ParseError(lineno, tokens[-1][1], "missing '}'")
    return ids, i + 1


def parse_document(text: str):
    """Parse one source document; the header token picks the kind.

    Returns a validated PrimeES, StableES or SafeNet, or a probability
    table {cell event set: {configuration: weight}}.  Errors carry the
    line and column.
    """
    lines = text.splitlines()
    meta_truncated = any(
        _tokens(raw)[:2] == [("//", 1), ("meta", 4)] or raw.strip() == "// meta truncated"
        for raw in lines
        if raw.strip().startswith("// meta")
    )
    rows = []
    for no, raw in enumerate(lines, start=1):
        toks = _tokens(_strip_comment(raw))
        if toks:
            rows.append((no, raw, toks))
    if not rows:
        raise ParseError(1, 1, "missing header")
    head = rows[0][2][0][0]
    if head == "es":
        return _parse_es(rows, meta_truncated)
    if head == "ses":
        return _parse_ses(rows)
    if head == "net":
        return _parse_net(rows)
    if head == "cell":
        return _parse_prob(rows)
    raise ParseError(rows[0][0], rows[0][2][0][1], f"unknown header {head!r}")


def parse_path(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def _header_name(rows, kind):
    no, _, toks = rows[0]
    if len(toks) != 2:
        raise ParseError(no, toks[0][1], f"expected '{kind} NAME'")
    return toks[1][0]


def _reject(lineno, col, exc):
    raise ParseError(lineno, col, str(exc)) from exc


def _parse_es(rows, truncated: bool) -> PrimeES:
    name = _header_name(rows, "es")
    events, causes, conflicts = [], [], []
    for no, _, toks in rows[1:]:
        key, col = toks[0]
        if key == "events":
            events.extend(t for t, _ in toks[1:])
        elif key == "cause":
            if len(toks) != 4 or toks[2][0] != "<":
                raise ParseError(no, col, "expected 'cause ID < ID'")
            causes.append(((toks[1][0], toks[3][0]), no, col))
        elif key == "conflict":
            if len(toks) != 3:
                raise ParseError(no, col, "expected 'conflict ID ID'")
            conflicts.append(((toks[1][0], toks[2][0]), no, col))
        else:
            raise ParseError(no, col, f"unknown directive {key!r}")
    for (a, b), no, col in conflicts:
        if a == b:
            raise ParseError(no, col, f"self-conflict on {a!r}")
    try:
        es = validate_prime(name, events, [c for c, _, _ in causes], [c for c, _, _ in conflicts])
    except EventStructError as exc:
        _reject(rows[0][0], 1, exc)
    if truncated:
        es = PrimeES(es.name, es.events, es.causality, es.conflict,
                     es.added_conflicts, es.added_causality, truncated=True)
    return es


def _parse_ses(rows) -> StableES:
    name = _header_name(rows, "ses")
    events, rules, forbidden = [], [], []
    for no, _, toks in rows[1:]:
        key, col = toks[0]
        if key == "events":
            events.extend(t for t, _ in toks[1:])
        elif key == "enabling":
            ids, nxt = _braced(toks, no, 1)
            if nxt + 2 != len(toks) or toks[nxt][0] != "|-":
                raise ParseError(no, col, "expected 'enabling { ID... } |- ID'")
            rules.append((ids, toks[nxt + 1][0]))
        elif key == "forbidden":
            ids, nxt = _braced(toks, no, 1)
            if nxt != len(toks):
                raise ParseError(no, toks[nxt][1], "trailing tokens after '}'")
            forbidden.append(ids)
        else:
            raise ParseError(no, col, f"unknown directive {key!r}")
    try:
        return validate_stable(name, events, rules, forbidden)
    except EventStructError as exc:
        _reject(rows[0][0], 1, exc)


def _parse_net(rows) -> SafeNet:
    name = _header_name(rows, "net")
    places, transitions, arcs, marking = [], [], [], []
    for no, _, toks in rows[1:]:
        key, col = toks[0]
        if key == "places":
            places.extend(t for t, _ in toks[1:])
        elif key == "transitions":
            transitions.extend(t for t, _ in toks[1:])
        elif key == "arc":
            if len(toks) != 4 or toks[2][0] != "->":
                raise ParseError(no, col, "expected 'arc ID -> ID'")
            arcs.append((toks[1][0], toks[3][0]))
        elif key == "marking":
            marking.extend(t for t, _ in toks[1:])
        else:
            raise ParseError(no, col, f"unknown directive {key!r}")
    try:
        return validate_net(name, places, transitions, arcs, marking)
    except EventStructError as exc:
        _reject(rows[0][0], 1, exc)


def _parse_prob(rows) -> dict[frozenset[str], dict[frozenset[str], float]]:
    table: dict[frozenset[str], dict[frozenset[str], float]] = {}
    current: frozenset[str] | None = None
    for no, raw, toks in rows:
        key, col = toks[0]
        indented = raw[: raw.index(key[0])].strip() == "" and raw.startswith((" ", "\t"))
        if key == "cell":
            ids, nxt = _braced(toks, no, 1)
            if nxt != len(toks):
                raise ParseError(no, toks[nxt][1], "trailing tokens after '}'")
            current = frozenset(ids)
            if current in table:
                raise ParseError(no, col, "duplicate cell block")
            table[current] = {}
        elif key == "config":
            if current is None or not indented:
                raise ParseError(no, col, "config line outside a cell block")
            ids, nxt = _braced(toks, no, 1)
            if nxt + 1 != len(toks):
                raise ParseError(no, col, "expected 'config { ID... } WEIGHT'")
            try:
                weight = float(toks[nxt][0])
            except ValueError:
                raise ParseError(no, toks[nxt][1], f"bad weight {toks[nxt][0]!r}")
            table[current][frozenset(ids)] = weight
        else:
            raise ParseError(no, col, f"unknown directive {key!r}")
    return table


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------


def _reduction(es: PrimeES) -> list[tuple[str, str]]:
    pairs = set(es.causality)
    return sorted(
        (a, b)
        for a, b in pairs
        if not any((a, c) in pairs and (c, b) in pairs for c in es.events)
    )


def serialize(obj) -> str:
    """Deterministic text form; inverse of parse on validated objects."""
    if isinstance(obj, PrimeES):
        out = [f"es {obj.name}"]
        if obj.truncated:
            out.append("// meta truncated")
        if obj.events:
            out.append("events " + " ".join(obj.events))
        for a, b in _reduction(obj):
            out.append(f"cause {a} < {b}")
        mu = P.immediate_conflict_pairs(obj)
        for pair in sorted(tuple(sorted(p)) for p in mu):
            out.append(f"conflict {pair[0]} {pair[1]}")
        return "\n".join(out) + "\n"
    if isinstance(obj, StableES):
        out = [f"ses {obj.name}"]
        if obj.events:
            out.append("events " + " ".join(obj.events))
        for r in obj.rules:
            inner = " ".join(sorted(r.premise))
            inner = f" {inner} " if inner else " "
            out.append(f"enabling {{{inner}}} |- {r.conclusion}")
        for f in sorted(obj.forbidden, key=lambda s: (len(s), tuple(sorted(s)))):
            out.append("forbidden { " + " ".join(sorted(f)) + " }")
        return "\n".join(out) + "\n"
    if isinstance(obj, SafeNet):
        out = [f"net {obj.name}"]
        if obj.places:
            out.append("places " + " ".join(obj.places))
        if obj.transitions:
            out.append("transitions " + " ".join(obj.transitions))
        for a, b in sorted(obj.arcs):
            out.append(f"arc {a} -> {b}")
        if obj.marking:
            out.append("marking " + " ".join(sorted(obj.marking)))
        return "\n".join(out) + "\n"
    if isinstance(obj, dict):
        out = []
        for cell in sorted(obj, key=lambda s: (len(s), tuple(sorted(s)))):
            out.append("cell { " + " ".join(sorted(cell)) + " }")
            for cfg in sorted(obj[cell], key=lambda s: (len(s), tuple(sorted(s)))):
                out.append(
                    "  config { " + " ".join(sorted(cfg)) + f" }} {obj[cell][cfg]!r}"
                )
        return "\n".join(out) + "\n"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def export_dot(structure, at=None) -> str:
    """Graphviz text: solid arrows for causality or enabling, dashed
    edges for immediate conflict (larger forbidden sets hang off a
    diamond), and, when a configuration is given, one cluster per
    branching cell enabled there."""
    lines = [f"digraph {_q(structure.name)} {{", "  node [shape=box];"]

    clusters: list[frozenset[str]] = []
    if at is not None:
        an = Analyzer(structure)
        v = frozenset(at)
        if not an.is_r_stopped(v):  # raises if not a configuration at all
            from eventstruct.errors import NotRStoppedError

            raise NotRStoppedError(
                f"cluster rendering needs an R-stopped configuration;"
                f" {sorted(v)} is not",
                witness=v,
            )
        clusters = [c.events for c in an.enabled_cells(v)]

    if isinstance(structure, PrimeES):
        clustered = set().union(*clusters) if clusters else set()
        for i, cell in enumerate(sorted(clusters, key=lambda s: tuple(sorted(s)))):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="cell {i}";')
            for e in sorted(cell):
                lines.append(f"    {_q(e)};")
            lines.append("  }")
        for e in structure.events:
            if e not in clustered:
                lines.append(f"  {_q(e)};")
        for a, b in _reduction(structure):
            lines.append(f"  {_q(a)} -> {_q(b)};")
        mu = P.immediate_conflict_pairs(structure)
        for a, b in sorted(tuple(sorted(p)) for p in mu):
            lines.append(f"  {_q(a)} -> {_q(b)} [style=dashed, dir=none];")
    elif isinstance(structure, StableES):
        clustered = set().union(*clusters) if clusters else set()
        for i, cell in enumerate(sorted(clusters, key=lambda s: tuple(sorted(s)))):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="cell {i}";')
            for e in sorted(cell):
                lines.append(f"    {_q(e)};")
            lines.append("  }")
        for e in structure.events:
            if e not in clustered:
                lines.append(f"  {_q(e)};")
        for r in structure.rules:
            for p in sorted(r.premise):
                lines.append(f"  {_q(p)} -> {_q(r.conclusion)};")
        aux = 0
        for f in sorted(structure.forbidden, key=lambda s: (len(s), tuple(sorted(s)))):
            members = sorted(f)
            if len(members) == 2:
                lines.append(f"  {_q(members[0])} -> {_q(members[1])} [style=dashed, dir=none];")
            else:
                node = f"forbidden_{aux}"
                aux += 1
                lines.append(f"  {_q(node)} [shape=diamond, label={_q('#')}];")
                for m in members:
                    lines.append(f"  {_q(node)} -> {_q(m)} [style=dashed, dir=none];")
    elif isinstance(structure, SafeNet):
        for p in structure.places:
            mark = ", label=" + _q(p + " •") if p in structure.marking else ", label=" + _q(p)
            lines.append(f"  {_q(p)} [shape=ellipse{mark}];")
        for t in structure.transitions:
            lines.append(f"  {_q(t)} [shape=box];")
        for a, b in sorted(structure.arcs):
            lines.append(f"  {_q(a)} -> {_q(b)};")
    else:
        raise TypeError(f"cannot export {type(structure).__name__}")

    lines.append("}")
    return "\n".join(lines) + "\n"

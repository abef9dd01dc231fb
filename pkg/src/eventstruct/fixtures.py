"""Canonical structures used across the test suite and documentation.

Each function builds a fresh validated structure.  The collection spans
the interesting phenomena at desk scale: plain binary choice, the
classic confusion triple, two independent cells, a causal jump, an
event with two alternative causes whose conflict depends on which cause
fired, and the pathologies (unreachable-but-consistent sets, a jointly
forbidden but pairwise consistent triple, context-bound conflicts).
"""

from __future__ import annotations

from eventstruct.nets import SafeNet, validate_net
from eventstruct.prime import PrimeES, validate_prime
from eventstruct.stable import StableES, validate_stable

__all__ = [
    "empty_es",
    "empty_ses",
    "pair",
    "confusion",
    "two_cells",
    "jump",
    "alt_causes",
    "alt_causes_es",
    "alt_causes_relaxed",
    "chain",
    "unreachable_pair",
    "ternary",
    "ctx_conflict",
    "choice_net",
    "loop_net",
    "tiny_net",
    "all_prime_fixtures",
    "all_stable_fixtures",
]


def empty_es() -> PrimeES:
    return validate_prime("empty", [], [], [])


def empty_ses() -> StableES:
    return validate_stable("empty", [], [], [])


def pair() -> PrimeES:
    """Two events in plain conflict: a single binary choice."""
    return validate_prime("pair", ["a", "b"], [], [("a", "b")])


def confusion() -> PrimeES:
    """a # b # c with a and c concurrent: one cell with asymmetric choice."""
    return validate_prime("confusion", ["a", "b", "c"], [], [("a", "b"), ("b", "c")])


def two_cells() -> PrimeES:
    """Two independent binary choices."""
    return validate_prime(
        "twocells", ["a1", "a2", "b1", "b2"], [], [("a1", "a2"), ("b1", "b2")]
    )


def jump() -> PrimeES:
    """A causal pair bridged by an immediate-conflict chain of length three."""
    return validate_prime(
        "jump",
        ["a", "b", "x1", "x2"],
        [("a", "b")],
        [("a", "x1"), ("x1", "x2"), ("x2", "b")],
    )


def alt_causes() -> StableES:
    """ea has two alternative causes; ea and eb clash only given e1.

    Four initial events form a conflict chain e1 # e2 # e3 # e4; ea is
    enabled by e1 or by e2, eb by e3, and the set {e1, ea, eb} is
    forbidden, so whether ea and eb exclude each other depends on which
    cause fired.
    """
    return validate_stable(
        "altcauses",
        ["e1", "e2", "e3", "e4", "ea", "eb"],
        [
            ([], "e1"),
            ([], "e2"),
            ([], "e3"),
            ([], "e4"),
            (["e1"], "ea"),
            (["e2"], "ea"),
            (["e3"], "eb"),
        ],
        [["e1", "e2"], ["e2", "e3"], ["e3", "e4"], ["e1", "ea", "eb"]],
    )


def alt_causes_es() -> PrimeES:
    """The binary-conflict structure the translation of alt_causes yields.

    ea is split into ea (caused by e1) and ea' (caused by e2); only the
    e1-history of ea conflicts with eb.
    """
    return validate_prime(
        "altcauses_es",
        ["e1", "e2", "e3", "e4", "ea", "ea'", "eb"],
        [("e1", "ea"), ("e2", "ea'"), ("e3", "eb")],
        [("e1", "e2"), ("e2", "e3"), ("e3", "e4"), ("ea", "eb")],
    )


def alt_causes_relaxed() -> StableES:
    """A jump-free, conflict-driven variant of alt_causes.

    The ternary forbidden set is gone and eb is caused by e4 instead of
    e3 (with e3 # eb keeping consistency in line with reachability).
    """
    return validate_stable(
        "altcauses_relaxed",
        ["e1", "e2", "e3", "e4", "ea", "eb"],
        [
            ([], "e1"),
            ([], "e2"),
            ([], "e3"),
            ([], "e4"),
            (["e1"], "ea"),
            (["e2"], "ea"),
            (["e4"], "eb"),
        ],
        [["e1", "e2"], ["e2", "e3"], ["e3", "e4"], ["e3", "eb"]],
    )


def chain() -> StableES:
    """A conflict-free two-event chain."""
    return validate_stable("chain", ["a", "b"], [([], "a"), (["a"], "b")], [])


def unreachable_pair() -> StableES:
    """Consistency out of line with reachability.

    e2 needs e1, e4 needs e3, and e1 # e3, so e2 and e4 never appear
    together although {e2, e4} is consistent.
    """
    return validate_stable(
        "unreachable_pair",
        ["e1", "e2", "e3", "e4"],
        [([], "e1"), ([], "e3"), (["e1"], "e2"), (["e3"], "e4")],
        [["e1", "e3"]],
    )


def ternary() -> StableES:
    """Three pairwise-consistent initial events that are jointly forbidden."""
    return validate_stable(
        "ternary",
        ["a", "b", "c"],
        [([], "a"), ([], "b"), ([], "c")],
        [["a", "b", "c"]],
    )


def ctx_conflict() -> StableES:
    """a and b clash only in the q-context, yet co-occur after p."""
    return validate_stable(
        "ctx_conflict",
        ["p", "q", "a", "b"],
        [
            ([], "p"),
            ([], "q"),
            (["p"], "a"),
            (["q"], "a"),
            (["p"], "b"),
            (["q"], "b"),
        ],
        [["p", "q"], ["q", "a", "b"]],
    )


def choice_net() -> SafeNet:
    """Three marked places feeding four overlapping choices, then ta/tb."""
    return validate_net(
        "choice",
        places=["p1", "p2", "p3", "p5", "p6"],
        transitions=["t1", "t2", "t3", "t4", "ta", "tb"],
        arcs=[
            ("p1", "t1"),
            ("p1", "t2"),
            ("p2", "t2"),
            ("p2", "t3"),
            ("p3", "t3"),
            ("p3", "t4"),
            ("t1", "p5"),
            ("t2", "p5"),
            ("t3", "p6"),
            ("p5", "ta"),
            ("p6", "tb"),
        ],
        marking=["p1", "p2", "p3"],
    )


def loop_net() -> SafeNet:
    """Two independent self-loops that a shared transition can kill."""
    return validate_net(
        "loops",
        places=["q1", "q2"],
        transitions=["u1", "u2", "v"],
        arcs=[
            ("q1", "u1"),
            ("u1", "q1"),
            ("q2", "u2"),
            ("u2", "q2"),
            ("q1", "v"),
            ("q2", "v"),
        ],
        marking=["q1", "q2"],
    )


def tiny_net() -> SafeNet:
    """One marked place with a single output transition."""
    return validate_net(
        "tiny", places=["p"], transitions=["t"], arcs=[("p", "t")], marking=["p"]
    )


def all_prime_fixtures() -> dict[str, PrimeES]:
    return {
        f.name: f
        for f in (empty_es(), pair(), confusion(), two_cells(), jump(), alt_causes_es())
    }


def all_stable_fixtures() -> dict[str, StableES]:
    return {
        f.name: f
        for f in (
            empty_ses(),
            chain(),
            alt_causes(),
            alt_causes_relaxed(),
            unreachable_pair(),
            ternary(),
            ctx_conflict(),
        )
    }

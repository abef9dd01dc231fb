"""Local cell probabilities, exact likelihoods and sampling.

Each branching cell carries a distribution over its maximal
configurations; the likelihood of an R-stopped configuration is the
product of the chosen weights over its covering, and summing the
product over complete coverings of maximal configurations gives the
global measure.  The shadow probability of any configuration is the
measure of the maximal configurations extending it; on the R-stopped
domain it coincides with the likelihood.

Cells are keyed by their canonical event set, so one distribution
serves a cell wherever it is enabled.  Exact computations are pure; the
sampler owns an explicit seeded generator, so independent samplers may
run concurrently.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from eventstruct.cells import Analyzer, BranchingCell
from eventstruct.errors import (
    NotRStoppedError,
    TruncatedStructureError,
    ValidationError,
)

__all__ = [
    "CellDistribution",
    "LocallyRandomizedES",
    "attach_distributions",
    "likelihood",
    "global_measure",
    "shadow_probability",
    "sample_run",
]

TOL = 1e-9


@dataclass(frozen=True)
class CellDistribution:
    """Weights over the maximal configurations of one cell."""

    cell: frozenset[str]
    weights: tuple[tuple[frozenset[str], float], ...]

    def weight(self, w: frozenset[str]) -> float:
        for cfg, p in self.weights:
            if cfg == w:
                return p
        raise KeyError(f"{sorted(w)} is not a maximal configuration of the cell")


class LocallyRandomizedES:
    """A host structure with one distribution per reachable cell."""

    def __init__(self, host, dists: dict[frozenset[str], CellDistribution]):
        self.host = host
        self.dists = dict(dists)
        self.analyzer = Analyzer(host)

    def distribution(self, cell: BranchingCell) -> CellDistribution:
        return self.dists[cell.events]


def _reachable_cells(an: Analyzer) -> dict[frozenset[str], BranchingCell]:
    """Every cell enabled at some R-stopped configuration, by event set.

    Cells with one event set must agree on their maximal
    configurations wherever they appear, because they share a
    distribution.
    """
    out: dict[frozenset[str], BranchingCell] = {}
    for v in an.r_stopped():
        for cell in an.cells_at(v):
            prev = out.get(cell.events)
            if prev is None:
                out[cell.events] = cell
            elif prev.omega != cell.omega:
                raise ValidationError(
                    f"cell {{{','.join(sorted(cell.events))}}} has different maximal"
                    f" configurations at different configurations; cannot share one"
                    f" distribution"
                )
    return out


def attach_distributions(
    host,
    table: dict | None = None,
    *,
    uniform: bool = False,
    allow_truncated: bool = False,
) -> LocallyRandomizedES:
    """Equip every reachable cell with a local transition probability.

    Either uniform=True (each maximal cell configuration gets 1/n) or a
    table mapping each cell's event set to {maximal configuration:
    weight}.  Weights must be nonnegative, sum to one per cell within
    1e-9, cover every reachable cell, and mention only maximal
    configurations of the cell.
    """
    if getattr(host, "truncated", False) and not allow_truncated:
        raise TruncatedStructureError(
            f"{host.name!r} is a truncated unfolding prefix; cells near the frontier"
            f" may be incomplete (pass allow_truncated to override)"
        )
    if uniform == (table is not None):
        raise ValidationError("provide exactly one of uniform or a weight table")
    an = Analyzer(host)
    cells = _reachable_cells(an)
    dists: dict[frozenset[str], CellDistribution] = {}
    if uniform:
        for key, cell in cells.items():
            p = 1.0 / len(cell.omega)
            dists[key] = CellDistribution(key, tuple((w, p) for w in cell.omega))
    else:
        norm = {frozenset(k): {frozenset(c): float(p) for c, p in v.items()} for k, v in table.items()}
        for key, cell in cells.items():
            if key not in norm:
                raise ValidationError(f"no distribution for cell {{{','.join(sorted(key))}}}")
            given = norm[key]
            for cfg in given:
                if cfg not in cell.omega:
                    raise ValidationError(
                        f"{{{','.join(sorted(cfg))}}} is not maximal in cell"
                        f" {{{','.join(sorted(key))}}}"
                    )
            weights = []
            total = 0.0
            for w in cell.omega:
                p = given.get(w, 0.0)
                if p < 0:
                    raise ValidationError(f"negative weight {p} in cell {{{','.join(sorted(key))}}}")
                total += p
                weights.append((w, p))
            if abs(total - 1.0) > TOL:
                raise ValidationError(
                    f"weights in cell {{{','.join(sorted(key))}}} sum to {total}, not 1"
                )
            dists[key] = CellDistribution(key, tuple(weights))
        extra = set(norm) - set(cells)
        if extra:
            raise ValidationError(
                f"distribution given for unknown cell {{{','.join(sorted(next(iter(extra))))}}}"
            )
    lres = LocallyRandomizedES(host, dists)
    lres.analyzer = an
    return lres


def likelihood(lres: LocallyRandomizedES, v) -> float:
    """Product of the chosen cell weights over the covering of v.

    Defined on finite R-stopped configurations only; the empty
    configuration has likelihood one.
    """
    v = frozenset(v)
    an = lres.analyzer
    if not an.is_r_stopped(v):
        raise NotRStoppedError(
            f"likelihood is defined on R-stopped configurations only;"
            f" {sorted(v)} is not",
            witness=v,
        )
    p = 1.0
    for cell in an.covering(v):
        p *= lres.distribution(cell).weight(v & cell.events)
    return p


def global_measure(lres: LocallyRandomizedES) -> dict[frozenset[str], float]:
    """The distributed-product measure over maximal configurations.

    Each maximal configuration gets the product over its complete
    covering; total mass must come out one within 1e-9.
    """
    an = lres.analyzer
    out = {}
    for omega in an.maximal_configurations():
        if not an.is_r_stopped(omega):
            raise NotRStoppedError(
                f"maximal configuration {sorted(omega)} is not R-stopped;"
                f" the host is not locally finite",
                witness=omega,
            )
        out[omega] = likelihood(lres, omega)
    total = sum(out.values())
    if abs(total - 1.0) > TOL:
        raise ValidationError(f"global measure sums to {total}, not 1")
    return out


def shadow_probability(lres: LocallyRandomizedES, v) -> float:
    """Measure of the maximal configurations extending v."""
    v = frozenset(v)
    an = lres.analyzer
    if not an.is_configuration(v):
        raise ValidationError(f"{sorted(v)} is not a configuration of {lres.host.name!r}")
    return sum(p for omega, p in global_measure(lres).items() if v <= omega)


def sample_run(
    lres: LocallyRandomizedES, seed: int, *, cell_order: str = "first"
) -> tuple[frozenset[str], tuple[tuple[frozenset[str], frozenset[str]], ...]]:
    """One complete run: resolve cells until the future offers none.

    At each step the first (or, with cell_order="last", the last) cell
    in canonical order is resolved by drawing one of its maximal
    configurations.  Reproducible for a fixed seed; returns the maximal
    configuration and the trace of (cell, choice) steps.
    """
    if cell_order not in ("first", "last"):
        raise ValidationError(f"unknown cell order {cell_order!r}")
    rng = random.Random(seed)
    an = lres.analyzer
    v: frozenset[str] = frozenset()
    trace = []
    while True:
        cells = an.cells_at(v)
        if not cells:
            return v, tuple(trace)
        cell = cells[0] if cell_order == "first" else cells[-1]
        dist = lres.distribution(cell)
        x = rng.random()
        acc = 0.0
        choice = dist.weights[-1][0]
        for cfg, p in dist.weights:
            acc += p
            if x < acc:
                choice = cfg
                break
        trace.append((cell.events, choice))
        v = v | choice

"""The multigrid as an infinite graph, explored lazily.

Vertices are crossings; two crossings are adjacent when they are consecutive
along a common grid line.  Nothing is ever materialized beyond the explored
region: neighbor generation solves, per other grid, for the next integer
level in closed form, so each neighbor costs O(d) regardless of how far the
walk has drifted from the origin.

The same graph is the tile-adjacency graph of the dual rhombus tiling, which
is why coronas computed here are tiling coronas as well.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

from .errors import DisconnectedPatch, ResourceLimit, Unreachable
from .multigrid import Crossing, MultigridSpec, next_crossing_on_line

_CAP_ENV = "CORONAGRID_MAX_CROSSINGS"


def default_crossing_cap() -> int:
    return int(os.environ.get(_CAP_ENV, 2_000_000))


def neighbors(spec: MultigridSpec, c: Crossing) -> list[Crossing]:
    """The 4 adjacent crossings: next crossing along each line, both ways.

    A regular multigrid is infinite in every direction, so there are always
    exactly 4.  Raises SingularMultigrid if consecutive-crossing order is
    numerically unreliable near c.
    """
    out = []
    for line in (c.a, c.b):
        t = spec.line_parameter(line, c.point)
        for direction in (1, -1):
            out.append(next_crossing_on_line(spec, line, t, direction)[1])
    return out


@dataclass(frozen=True)
class Patch:
    """Finite, connected set of crossings.  Build with make_patch, which
    validates connectivity; internal growth paths construct directly since
    a superset grown by adjacency stays connected."""

    crossings: frozenset[Crossing]

    def __len__(self) -> int:
        return len(self.crossings)

    def __iter__(self):
        return iter(self.crossings)

    def points(self) -> list[complex]:
        return [c.point for c in self.crossings]


def make_patch(spec: MultigridSpec, crossings: Iterable[Crossing]) -> Patch:
    """Validating Patch constructor: the set must be connected in the graph."""
    cs = frozenset(crossings)
    if not cs:
        raise DisconnectedPatch("patch must be nonempty")
    start = next(iter(cs))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for nb in neighbors(spec, c):
                if nb in cs and nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
        frontier = nxt
    if len(seen) != len(cs):
        raise DisconnectedPatch(
            f"patch has {len(cs)} crossings but only {len(seen)} reachable")
    return Patch(cs)


def corona_step(spec: MultigridSpec, patch: Patch) -> Patch:
    """One growth step: the patch plus every crossing adjacent to it."""
    grown = set(patch.crossings)
    for c in patch.crossings:
        grown.update(neighbors(spec, c))
    return Patch(frozenset(grown))


@dataclass(frozen=True)
class CoronaSequence:
    """Frontier-by-frontier BFS record of a corona growth run.

    frontiers[0] is the base patch; frontiers[n] holds the crossings at
    graph distance exactly n from it.  corona(n) is the cumulative union.
    """

    base: Patch
    frontiers: tuple[frozenset[Crossing], ...]

    @property
    def n_max(self) -> int:
        return len(self.frontiers) - 1

    def corona(self, n: int) -> frozenset[Crossing]:
        if not 0 <= n <= self.n_max:
            raise IndexError(f"corona index {n} not in [0, {self.n_max}]")
        out: set[Crossing] = set()
        for f in self.frontiers[:n + 1]:
            out.update(f)
        return frozenset(out)

    def sizes(self) -> list[int]:
        """Cumulative corona sizes |P_0|, |P_1|, ..."""
        total = 0
        out = []
        for f in self.frontiers:
            total += len(f)
            out.append(total)
        return out


def corona_sequence(
    spec: MultigridSpec,
    patch: Patch,
    n_max: int,
    max_crossings: int | None = None,
) -> CoronaSequence:
    """Grow n_max coronas from the patch by frontier BFS.

    Memory is proportional to the explored region only; exceeding the
    crossing cap (default from $CORONAGRID_MAX_CROSSINGS) raises
    ResourceLimit.
    """
    cap = default_crossing_cap() if max_crossings is None else max_crossings
    visited: set[Crossing] = set(patch.crossings)
    frontiers = [frozenset(patch.crossings)]
    frontier = list(patch.crossings)
    for _ in range(n_max):
        nxt = []
        for c in frontier:
            for nb in neighbors(spec, c):
                if nb not in visited:
                    visited.add(nb)
                    nxt.append(nb)
        if len(visited) > cap:
            raise ResourceLimit(
                f"corona growth exceeded {cap} crossings (set ${_CAP_ENV})")
        frontiers.append(frozenset(nxt))
        frontier = nxt
    return CoronaSequence(patch, tuple(frontiers))


def graph_distance(
    spec: MultigridSpec, a: Crossing, b: Crossing, cap: int,
) -> int:
    """Exact BFS distance between two crossings; raises Unreachable beyond cap.

    This is the oracle the shortest-path facts are checked against; it never
    assumes anything about path shapes.
    """
    if a == b:
        return 0
    visited = {a}
    frontier = [a]
    for dist in range(1, cap + 1):
        nxt = []
        for c in frontier:
            for nb in neighbors(spec, c):
                if nb == b:
                    return dist
                if nb not in visited:
                    visited.add(nb)
                    nxt.append(nb)
        frontier = nxt
    raise Unreachable(f"distance({a.key}, {b.key}) > {cap}")

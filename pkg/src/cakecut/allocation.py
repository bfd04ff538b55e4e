"""Partial allocations, unassigned gaps, and the envy graph.

A partial allocation is a list of pairwise-disjoint pieces indexed by agent
(``None`` marks an agent that holds nothing yet).  The *gaps* are the maximal
unassigned intervals; zero-width gaps are dropped, so the gap list is always
the minimum-cardinality cover of the uncovered part of the cake.

The envy graph has an edge i -> j whenever agent i's hat value for its own
piece is strictly below its hat value for j's piece.  Cycles are removed by
rotating pieces along a cycle (each agent takes its successor's piece), which
never lowers anyone's hat value and strictly shrinks the edge set, so at most
n^2 rotations occur.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cake import ONE, ZERO, Interval, Piece, QueryCounter, Valuation
from .hatvalue import hat_eval

Pieces = Sequence[Piece]


def check_pieces(pieces: Pieces) -> Optional[str]:
    """None if pieces are pairwise disjoint within [0,1], else a violation."""
    placed = sorted(
        ((p, i) for i, p in enumerate(pieces) if p is not None),
        key=lambda t: (t[0].lo, t[0].hi),
    )
    for p, i in placed:
        if not (ZERO <= p.lo <= p.hi <= ONE):
            return f"piece of agent {i} is not a sub-interval of [0,1]: {p}"
    for (p, i), (q, j) in zip(placed, placed[1:]):
        if p.hi > q.lo:
            return f"pieces of agents {i} and {j} overlap: {p} and {q}"
    return None


def unassigned_gaps(pieces: Pieces) -> list[Interval]:
    """Maximal unassigned intervals, sorted left to right.

    >>> from .cake import interval
    >>> [str(g) for g in unassigned_gaps([interval("1/5", "2/5"), interval("3/5", "7/10")])]
    ['[0, 1/5]', '[2/5, 3/5]', '[7/10, 1]']
    """
    cursor = ZERO
    gaps: list[Interval] = []
    for p in sorted((p for p in pieces if p is not None), key=lambda p: p.lo):
        if p.lo > cursor:
            gaps.append(Interval(cursor, p.lo))
        cursor = max(cursor, p.hi)
    if cursor < ONE:
        gaps.append(Interval(cursor, ONE))
    return gaps


def hat_matrix(pieces: Pieces, valuations: Sequence[Valuation],
               counter: Optional[QueryCounter] = None) -> list[list[Fraction]]:
    """H[i][j] = hat value, for agent i, of the piece agent j holds."""
    return [[hat_eval(v, p, counter).value for p in pieces] for v in valuations]


def envy_edges(matrix: list[list[Fraction]]) -> list[set[int]]:
    """Successor sets of the envy graph encoded by a hat-value matrix."""
    n = len(matrix)
    return [
        {j for j in range(n) if j != i and matrix[i][i] < matrix[i][j]}
        for i in range(n)
    ]


def build_envy_graph(pieces: Pieces, valuations: Sequence[Valuation],
                     counter: Optional[QueryCounter] = None) -> list[set[int]]:
    """Directed envy graph as a list of successor sets."""
    return envy_edges(hat_matrix(pieces, valuations, counter))


def find_source(graph: Sequence[set[int]]) -> int:
    """Lowest-index vertex with no incoming edge; raises on cyclic graphs."""
    n = len(graph)
    indegree = [0] * n
    for succs in graph:
        for j in succs:
            indegree[j] += 1
    for i in range(n):
        if indegree[i] == 0:
            return i
    raise RuntimeError("envy graph has no source; eliminate cycles first")


def _find_cycle(graph: Sequence[set[int]]) -> Optional[list[int]]:
    """First cycle under a lowest-index-first depth-first search, or None."""
    n = len(graph)
    color = [0] * n  # 0 unseen, 1 on stack, 2 done
    parent: dict[int, int] = {}
    for root in range(n):
        if color[root] != 0:
            continue
        stack = [(root, iter(sorted(graph[root])))]
        color[root] = 1
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if color[w] == 0:
                    parent[w] = u
                    color[w] = 1
                    stack.append((w, iter(sorted(graph[w]))))
                    advanced = True
                    break
                if color[w] == 1:
                    cycle = [u]
                    while cycle[-1] != w:
                        cycle.append(parent[cycle[-1]])
                    cycle.reverse()
                    return cycle
            if not advanced:
                color[u] = 2
                stack.pop()
    return None


@dataclass
class CycleStats:
    """What happened inside one cycle-elimination call."""

    cycles: list[list[int]] = field(default_factory=list)
    edge_counts: list[int] = field(default_factory=list)  # before each rotation, then final
    matrix: list[list[Fraction]] = field(default_factory=list)  # hat matrix afterwards


def resolve_cycles(pieces: list[Piece], matrix: list[list[Fraction]]) -> tuple[list[Piece], CycleStats]:
    """Rotate pieces along envy cycles until the graph is acyclic.

    Works purely on a precomputed hat-value matrix: rotating ownership only
    permutes matrix columns, so no new queries are needed.  Each rotation
    strictly decreases the number of envy edges (asserted), which bounds the
    loop by n^2 rotations.
    """
    n = len(pieces)
    pieces = list(pieces)
    matrix = [row[:] for row in matrix]
    stats = CycleStats()
    edges = envy_edges(matrix)
    count = sum(len(s) for s in edges)
    while True:
        cycle = _find_cycle(edges)
        if cycle is None:
            break
        stats.cycles.append(cycle)
        stats.edge_counts.append(count)
        # Each agent in the cycle takes its successor's piece.
        shifted = cycle[1:] + cycle[:1]
        old_pieces = [pieces[j] for j in shifted]
        old_cols = [[matrix[i][j] for j in shifted] for i in range(n)]
        for k, agent in enumerate(cycle):
            pieces[agent] = old_pieces[k]
            for i in range(n):
                matrix[i][agent] = old_cols[i][k]
        edges = envy_edges(matrix)
        new_count = sum(len(s) for s in edges)
        assert new_count < count, "cycle rotation must strictly reduce envy edges"
        count = new_count
        assert len(stats.cycles) <= n * n, "too many cycle rotations"
    stats.edge_counts.append(count)
    stats.matrix = matrix
    return pieces, stats


def eliminate_cycles(pieces: Pieces, valuations: Sequence[Valuation],
                     counter: Optional[QueryCounter] = None) -> tuple[list[Piece], CycleStats]:
    """Reassign pieces among agents so the envy graph becomes acyclic.

    Returns the permuted pieces and the per-rotation statistics.  Ownership
    is only permuted -- the multiset of pieces is unchanged -- and no agent's
    hat value for its own piece decreases.
    """
    matrix = hat_matrix(pieces, valuations, counter)
    return resolve_cycles(list(pieces), matrix)

"""Connected, approximately envy-free division of the cake.

The solver runs in two phases over a partial allocation that starts empty.

*Growth phase.*  While some agent values an unassigned gap (under the hat
valuation) at least ``delta/n`` above its own piece, take the leftmost such
gap, let every qualifying agent name the shortest gap prefix meeting its
raised target, and hand the shortest of those prefixes to its agent --
releasing whatever that agent held before.  Each award raises the winner's
hat value by at least ``delta/n`` and hat values never exceed 1, so the loop
runs at most ``n^2/delta`` times.

*Appending phase.*  While more than ``n`` gaps remain, make the envy graph
acyclic by rotating pieces along envy cycles, pick its lowest-index source,
and extend that source's piece rightward into the adjacent gap by a *crumb*
worth at most ``delta/n`` to every agent (tight for at least one); when the
whole remaining gap is that cheap, append all of it.  Also at most
``n^2/delta`` iterations.

Finally each leftover gap is merged into a distinct adjacent piece, yielding
a complete allocation of n connected pieces whose additive envy is provably
at most ``1/4 + 2*delta/n`` and which satisfies
``v_i(I_i) >= v_i(I_j)/2 - delta/n`` for every pair -- both re-checked
exactly, never assumed.
"""

from __future__ import annotations

import logging
from bisect import bisect_left, insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .audit import AuditReport, build_report, check_mult_bounds, check_phase_invariants, check_theorem_bounds
from .cake import (
    ONE,
    ZERO,
    Instance,
    Interval,
    Piece,
    QueryCounter,
    ValidationError,
    Valuation,
    cut_query,
)
from .allocation import envy_edges, hat_matrix, resolve_cycles, unassigned_gaps
from .hatvalue import hat_cut, hat_eval

log = logging.getLogger(__name__)

TRACE_LEVELS = ("off", "phase_boundaries", "full")


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters: the envy step ``delta`` and how much to record."""

    delta: Fraction
    trace_level: str = "phase_boundaries"
    check_invariants: bool = True

    def __post_init__(self):
        if not (ZERO < self.delta < ONE):
            raise ValidationError(f"delta must lie in (0,1), got {self.delta}")
        if self.trace_level not in TRACE_LEVELS:
            raise ValidationError(f"unknown trace level {self.trace_level!r}")


@dataclass
class Snapshot:
    label: str
    pieces: list[Piece]
    gaps: list[Interval]
    hat_values: list[Fraction]


@dataclass
class TraceEvent:
    """One solver action (recorded only at trace level 'full')."""

    phase: int                     # 1 = growth, 2 = appending
    kind: str                      # assign | crumb | whole_gap | rotate
    agent: int
    piece: Piece
    hat_values: tuple[Fraction, ...]


@dataclass
class Trace:
    level: str = "phase_boundaries"
    snapshots: list[Snapshot] = field(default_factory=list)
    events: list[TraceEvent] = field(default_factory=list)
    phase1_iterations: int = 0
    phase2_iterations: int = 0
    cycle_rotations: int = 0

    def snap(self, label: str, pieces: Sequence[Piece], gaps: Sequence[Interval],
             hats: Sequence[Fraction]) -> None:
        if self.level != "off":
            self.snapshots.append(Snapshot(label, list(pieces), list(gaps), list(hats)))

    def event(self, phase: int, kind: str, agent: int, piece: Piece,
              hats: Sequence[Fraction]) -> None:
        if self.level == "full":
            self.events.append(TraceEvent(phase, kind, agent, piece, tuple(hats)))


def _float_pad(x: Fraction, up: bool) -> float:
    f = float(x)
    return f + 1e-9 if up else f - 1e-9


class _Gap:
    """One unassigned interval with candidate bookkeeping that survives edits.

    ``groups`` maps a valuation id to the (ascending) agents that might still
    claim this gap; ``lb``/``order`` record where each group's mass begins,
    kept sorted so the scan can stop as soon as no later group could name a
    shorter prefix; ``hat`` caches each group's hat value for the whole gap
    and is flushed whenever the gap's endpoints move.
    """

    __slots__ = ("lo", "hi", "groups", "lb", "order", "hat")

    def __init__(self, lo: Fraction, hi: Fraction):
        self.lo = lo
        self.hi = hi
        self.groups: dict[str, list[int]] = {}
        self.lb: dict[str, Fraction] = {}
        self.order: list[tuple[Fraction, str]] = []
        self.hat: dict[str, Fraction] = {}

    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


def phase_one(instance: Instance, config: SolverConfig,
              counter: Optional[QueryCounter] = None,
              trace: Optional[Trace] = None) -> list[Piece]:
    """Growth phase: returns a partial allocation no gap can improve on.

    At exit, every agent values every remaining gap (under the hat
    valuation) strictly below its own hat value plus ``delta/n``.
    """
    valuations = instance.agent_valuations()
    vids = instance.agent_ids
    n = instance.n
    step = config.delta / n
    budget = Fraction(n * n) / config.delta

    pieces: list[Piece] = [None] * n
    hat_own: list[Fraction] = [ZERO] * n

    # Padded float support boxes: a cheap, conservative "could agent i value
    # anything inside this gap?" prefilter.  Exact comparisons happen later.
    boxes = [(_float_pad(v.support_lo, up=False), _float_pad(v.support_hi, up=True))
             for v in valuations]

    def reseed(g: _Gap) -> None:
        """Rebuild g's candidates from every agent whose support meets it."""
        g.groups, g.lb, g.order, g.hat = {}, {}, [], {}
        glo, ghi = _float_pad(g.lo, up=False), _float_pad(g.hi, up=True)
        for i in range(n):
            if hat_own[i] < 1 and boxes[i][0] < ghi and boxes[i][1] > glo:
                g.groups.setdefault(vids[i], []).append(i)
        for vid in list(g.groups):
            lb = instance.valuations[vid].next_mass(g.lo)
            if lb is None or lb >= g.hi:
                del g.groups[vid]  # no mass inside the gap, and it only shrinks
            else:
                g.lb[vid] = lb
                g.order.append((lb, vid))
        g.order.sort()

    def drop_group(g: _Gap, vid: str) -> None:
        del g.groups[vid]
        g.order.remove((g.lb.pop(vid), vid))

    def carve(g: _Gap, r: Fraction) -> None:
        """Remove the assigned prefix [g.lo, r] from the gap (r < g.hi)."""
        g.lo = r
        g.hat.clear()
        # Mass-start points left of the new edge must be recomputed; the rest
        # are untouched (mass that began at or beyond r still begins there).
        k = 0
        while k < len(g.order) and g.order[k][0] < r:
            k += 1
        moved = [vid for _, vid in g.order[:k]]
        del g.order[:k]
        for vid in moved:
            lb = instance.valuations[vid].next_mass(r)
            if lb is None or lb >= g.hi:
                del g.groups[vid], g.lb[vid]
            else:
                g.lb[vid] = lb
                insort(g.order, (lb, vid))

    gaps: list[_Gap] = [_Gap(ZERO, ONE)]
    reseed(gaps[0])

    def release(lo: Fraction, hi: Fraction) -> None:
        """Return [lo, hi] to the pool, merging endpoint-adjacent gaps."""
        k = bisect_left(gaps, lo, key=lambda g: g.lo)
        left = gaps[k - 1] if k > 0 and gaps[k - 1].hi == lo else None
        right = gaps[k] if k < len(gaps) and gaps[k].lo == hi else None
        if left is not None:
            left.hi = right.hi if right is not None else hi
            if right is not None:
                gaps.pop(k)
            reseed(left)  # a wider gap can interest agents dropped earlier
        elif right is not None:
            right.lo = lo
            reseed(right)
        else:
            g = _Gap(lo, hi)
            reseed(g)
            gaps.insert(k, g)

    def best_claim(g: _Gap) -> Optional[tuple[Fraction, int]]:
        """Shortest qualifying prefix of ``g`` as (endpoint, agent), if any.

        Walks valuation groups in mass-start order: once some group names a
        prefix endpoint, any group whose mass begins at or beyond it cannot
        name a strictly shorter one, so it is skipped without queries.
        Agents whose raised target exceeds their hat value for the whole gap
        are dropped -- targets only rise, so they can never qualify again
        unless the gap itself grows (which reseeds it).
        """
        best: Optional[tuple[Fraction, int]] = None
        for lb, vid in list(g.order):
            if best is not None and lb >= best[0]:
                break  # mass starts too far right to beat the current prefix
            reach = g.hat.get(vid)
            if reach is None:
                reach = hat_eval(instance.valuations[vid], g.interval(), counter).value
                g.hat[vid] = reach
            group = g.groups[vid]
            live = [i for i in group if hat_own[i] + step <= reach]
            if not live:
                drop_group(g, vid)
                continue
            group[:] = live
            rep = min(live, key=lambda i: (hat_own[i], i))
            v = valuations[rep]
            r = hat_cut(v, g.lo, hat_own[rep] + step, counter)
            assert r is not None and r <= g.hi
            if len(live) == 1:
                winner = rep
            else:
                # Everyone in the group whose target the prefix [lo, r] meets
                # stops at r as well; the lowest index among them wins ties.
                at_r = hat_eval(v, Interval(g.lo, r), counter).value
                winner = min(i for i in live if hat_own[i] + step <= at_r)
            if best is None or (r, winner) < best:
                best = (r, winner)
        return best

    while True:
        chosen_idx = -1
        best = None
        for idx, g in enumerate(gaps):
            if not g.groups:
                continue
            best = best_claim(g)
            if best is not None:
                chosen_idx = idx
                break
        if chosen_idx < 0:
            break  # exact exit condition: no (gap, agent) pair qualifies

        chosen = gaps[chosen_idx]
        r_a, a = best

        released = pieces[a]
        new_piece = Interval(chosen.lo, r_a)
        new_hat = hat_eval(valuations[a], new_piece, counter).value
        assert new_hat >= hat_own[a] + step
        pieces[a] = new_piece
        hat_own[a] = new_hat
        if new_hat >= 1:
            vid_a = vids[a]
            for g in gaps:  # a full agent never competes again
                group = g.groups.get(vid_a)
                if group is not None and a in group:
                    group.remove(a)
                    if not group:
                        drop_group(g, vid_a)

        if r_a < chosen.hi:
            carve(chosen, r_a)
        else:
            gaps.pop(chosen_idx)
        if released is not None:
            release(released.lo, released.hi)

        if trace is not None:
            trace.phase1_iterations += 1
            trace.event(1, "assign", a, new_piece, hat_own)
            assert trace.phase1_iterations <= budget
    if trace is not None:
        trace.snap("phase1_end", pieces, [g.interval() for g in gaps], hat_own)
    log.debug("growth phase done: %s iterations, %s gaps",
              trace and trace.phase1_iterations, len(gaps))
    return pieces


def phase_two(pieces: Sequence[Piece], instance: Instance, config: SolverConfig,
              counter: Optional[QueryCounter] = None,
              trace: Optional[Trace] = None) -> list[Piece]:
    """Appending phase: feed gap crumbs to envy-graph sources until <= n gaps."""
    valuations = instance.agent_valuations()
    n = instance.n
    step = config.delta / n
    budget = Fraction(n * n) / config.delta
    pieces = list(pieces)
    gaps = unassigned_gaps(pieces)
    if len(gaps) <= n:
        if trace is not None:
            trace.snap("phase2_end", pieces, gaps,
                       [hat_eval(v, p).value for v, p in zip(valuations, pieces)])
        return pieces

    matrix = hat_matrix(pieces, valuations, counter)
    succ = envy_edges(matrix)
    edge_count = sum(len(out) for out in succ)
    in_deg = [0] * n
    for out in succ:
        for j in out:
            in_deg[j] += 1
    while len(gaps) > n:
        # More gaps than agents forces a full piece/gap alternation: every
        # agent holds something and has a gap immediately to its right.
        assert len(gaps) == n + 1 and all(p is not None for p in pieces)

        if edge_count:
            pieces, stats = resolve_cycles(pieces, matrix)
            matrix = stats.matrix
            if trace is not None and stats.cycles:
                trace.cycle_rotations += len(stats.cycles)
                for cyc in stats.cycles:
                    trace.event(2, "rotate", cyc[0], pieces[cyc[0]],
                                [matrix[i][i] for i in range(n)])
            succ = envy_edges(matrix)
            edge_count = sum(len(out) for out in succ)
            in_deg = [0] * n
            for out in succ:
                for j in out:
                    in_deg[j] += 1

        s = next(i for i in range(n) if in_deg[i] == 0)
        r_s = pieces[s].hi
        k = bisect_left(gaps, r_s, key=lambda g: g.lo)
        assert k < len(gaps) and gaps[k].lo == r_s, "source must have a gap on its right"
        gap = gaps[k]

        x = min(cut_query(v, r_s, step, counter) for v in valuations)
        if x >= gap.hi:
            pieces[s] = Interval(pieces[s].lo, gap.hi)
            gaps.pop(k)
            kind = "whole_gap"
        else:
            pieces[s] = Interval(pieces[s].lo, x)
            gaps[k] = Interval(x, gap.hi)
            kind = "crumb"
        # Only the hat values for s's piece move, and they can only rise: the
        # source may shed outgoing envy while others may start envying it.
        for i, v in enumerate(valuations):
            matrix[i][s] = hat_eval(v, pieces[s], counter).value
        for j in list(succ[s]):
            if matrix[s][j] <= matrix[s][s]:
                succ[s].discard(j)
                in_deg[j] -= 1
                edge_count -= 1
        for i in range(n):
            if i != s and s not in succ[i] and matrix[i][s] > matrix[i][i]:
                succ[i].add(s)
                in_deg[s] += 1
                edge_count += 1

        if trace is not None:
            trace.phase2_iterations += 1
            trace.event(2, kind, s, pieces[s], [matrix[i][i] for i in range(n)])
            assert trace.phase2_iterations <= budget
    if trace is not None:
        trace.snap("phase2_end", pieces, gaps, [matrix[i][i] for i in range(n)])
    log.debug("appending phase done: %s iterations", trace and trace.phase2_iterations)
    return pieces


def merge_final(pieces: Sequence[Piece]) -> list[Piece]:
    """Merge each remaining gap into a distinct adjacent piece.

    Gaps are matched left to right, each preferring the piece ending at its
    left edge and falling back to the piece starting at its right edge.  A
    gap with no free neighbor (possible only when some agents hold nothing)
    is handed whole to the lowest-index empty-handed agent.
    """
    out = list(pieces)
    gaps = unassigned_gaps(out)
    assert len(gaps) <= len(out), "merge requires at most n gaps"
    ends = {p.hi: i for i, p in enumerate(out) if p is not None}
    starts = {p.lo: i for i, p in enumerate(out) if p is not None}
    used: set[int] = set()
    leftover: list[Interval] = []
    for gap in gaps:
        left = ends.get(gap.lo)
        right = starts.get(gap.hi)
        if left is not None and left not in used:
            used.add(left)
            out[left] = Interval(out[left].lo, gap.hi)
        elif right is not None and right not in used:
            used.add(right)
            out[right] = Interval(gap.lo, out[right].hi)
        else:
            leftover.append(gap)
    empty = [i for i, p in enumerate(pieces) if p is None]
    assert len(leftover) <= len(empty), "cannot place every gap"
    for gap, agent in zip(leftover, empty):
        out[agent] = gap
    assert not unassigned_gaps(out), "merged allocation must cover the cake"
    return out


def solve(instance: Instance, config: SolverConfig,
          mult_c: Optional[Fraction] = None) -> tuple[list[Piece], Trace, AuditReport]:
    """Run both phases plus the merge and audit the result exactly.

    Returns the complete allocation (one piece per agent, jointly covering
    [0,1]), the execution trace, and an audit report in which every proved
    bound has been re-checked with exact arithmetic.
    """
    problem = instance.first_violation()
    if problem is not None:
        raise ValidationError(problem)
    valuations = instance.agent_valuations()
    counter = QueryCounter()
    trace = Trace(level=config.trace_level)
    checks = []

    partial = phase_one(instance, config, counter, trace)
    if config.check_invariants:
        checks += check_phase_invariants(partial, valuations, config.delta, "phase1_end")
    partial = phase_two(partial, instance, config, counter, trace)
    if config.check_invariants:
        checks += check_phase_invariants(partial, valuations, config.delta, "phase2_end")
    allocation = merge_final(partial)
    trace.snap("final", allocation, [],
               [hat_eval(v, p).value for v, p in zip(valuations, allocation)])

    checks += check_theorem_bounds(allocation, valuations, config.delta)
    if mult_c is not None:
        checks += check_mult_bounds(allocation, valuations, mult_c)
    report = build_report(
        allocation, valuations, checks=checks, counter=counter, trace=trace,
        iteration_budget=Fraction(instance.n ** 2) / config.delta,
    )
    return allocation, trace, report


def solve_mult(instance: Instance, c: Fraction,
               trace_level: str = "phase_boundaries",
               check_invariants: bool = True) -> tuple[list[Piece], Trace, AuditReport]:
    """Multiplicative mode: run with delta = c/8.

    The output allocation satisfies ``(2+c) * v_i(I_i) >= v_i(I_j)`` for all
    pairs and gives every agent at least ``1/(4n)``; both are audited.
    """
    c = Fraction(c)
    if not (ZERO < c < ONE):
        raise ValidationError(f"c must lie in (0,1), got {c}")
    config = SolverConfig(delta=c / 8, trace_level=trace_level,
                          check_invariants=check_invariants)
    return solve(instance, config, mult_c=c)

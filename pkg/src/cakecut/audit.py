"""Exact audits of allocations and solver state.

Nothing in here trusts the solver: every guarantee is recomputed from the
pieces and the valuations with Fraction arithmetic.  The checks come in
three groups -- structural (disjoint connected pieces covering the cake),
endpoint bounds on the finished allocation (additive envy, half-value,
multiplicative ratio, value floor), and mid-run invariants that must hold
when each solver phase ends.  A small exhaustive search over grid cuts
serves as an independent reference for what envy is attainable at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Optional, Sequence

from .allocation import check_pieces, unassigned_gaps
from .cake import ONE, ZERO, Instance, Interval, Piece, QueryCounter, ValidationError, Valuation
from .hatvalue import HALF, QUARTER, hat_eval, is_bifurcating


@dataclass
class Check:
    """One named pass/fail verdict, with a human-readable counterexample."""

    name: str
    passed: bool
    witness: Optional[str] = None


@dataclass
class AuditReport:
    """Everything recomputed about one allocation.

    ``values[i][j]`` is agent i's exact value for agent j's piece;
    ``min_ratio`` is None when no agent assigns positive value to another's
    piece (the ratio is vacuously unbounded).
    """

    values: list[list[Fraction]]
    max_envy: Fraction
    min_ratio: Optional[Fraction]
    checks: list[Check] = field(default_factory=list)
    eval_count: int = 0
    cut_count: int = 0
    phase1_iterations: int = 0
    phase2_iterations: int = 0
    cycle_rotations: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def values_matrix(pieces: Sequence[Piece], valuations: Sequence[Valuation]) -> list[list[Fraction]]:
    return [[v.value_of(p) for p in pieces] for v in valuations]


def max_envy_of(values: Sequence[Sequence[Fraction]]) -> Fraction:
    """Largest amount any agent prefers another's piece over its own (>= 0)."""
    worst = ZERO
    for i, row in enumerate(values):
        for j, val in enumerate(row):
            if j != i and val - row[i] > worst:
                worst = val - row[i]
    return worst


def min_ratio_of(values: Sequence[Sequence[Fraction]]) -> Optional[Fraction]:
    """Smallest v_i(own)/v_i(other) over pairs where the other piece has value."""
    best: Optional[Fraction] = None
    for i, row in enumerate(values):
        for j, val in enumerate(row):
            if j != i and val > 0:
                r = row[i] / val
                if best is None or r < best:
                    best = r
    return best


def _agent(i: int) -> str:
    return f"agent {i + 1}"


def check_structure(pieces: Sequence[Piece]) -> list[Check]:
    """The allocation is n connected pieces, pairwise disjoint, covering [0,1]."""
    msg = check_pieces(pieces)
    gaps = unassigned_gaps(pieces) if msg is None else None
    return [
        Check("pieces_disjoint", msg is None, msg),
        Check("complete_cover", msg is None and not gaps,
              None if not gaps else f"uncovered: {', '.join(map(str, gaps))}"),
    ]


def check_theorem_bounds(pieces: Sequence[Piece], valuations: Sequence[Valuation],
                         delta: Fraction) -> list[Check]:
    """Endpoint guarantees of the connected solver, checked exactly."""
    n = len(valuations)
    values = values_matrix(pieces, valuations)
    bound = QUARTER + 2 * delta / n
    checks = check_structure(pieces)

    bad = None
    for i in range(n):
        for j in range(n):
            if j != i and values[i][j] - values[i][i] > bound:
                bad = f"{_agent(i)} envies {_agent(j)} by {values[i][j] - values[i][i]} > {bound}"
                break
        if bad:
            break
    checks.append(Check("additive_envy_bound", bad is None, bad))

    bad = None
    for i in range(n):
        for j in range(n):
            if j != i and values[i][i] < values[i][j] / 2 - delta / n:
                bad = (f"{_agent(i)} holds {values[i][i]}"
                       f" < {values[i][j]}/2 - {delta}/{n}")
                break
        if bad:
            break
    checks.append(Check("half_value_bound", bad is None, bad))
    return checks


def check_mult_bounds(pieces: Sequence[Piece], valuations: Sequence[Valuation],
                      c: Fraction) -> list[Check]:
    """Multiplicative-mode guarantees: pairwise ratio and the 1/(4n) floor."""
    n = len(valuations)
    values = values_matrix(pieces, valuations)
    bad = None
    for i in range(n):
        for j in range(n):
            if j != i and (2 + c) * values[i][i] < values[i][j]:
                bad = f"(2+{c}) * {values[i][i]} < {values[i][j]} for {_agent(i)} vs {_agent(j)}"
                break
        if bad:
            break
    checks = [Check("mult_ratio_bound", bad is None, bad)]

    floor = Fraction(1, 4 * n)
    bad = next((f"{_agent(i)} holds {values[i][i]} < 1/{4 * n}"
                for i in range(n) if values[i][i] < floor), None)
    checks.append(Check("value_floor", bad is None, bad))
    return checks


def check_phase_invariants(pieces: Sequence[Piece], valuations: Sequence[Valuation],
                           delta: Fraction, phase: str) -> list[Check]:
    """Invariants that must hold in the partial allocation at a phase boundary.

    ``phase`` tags the check names ("phase1_end" or "phase2_end").  All five
    families are recomputed from scratch:

    * no_remaining_claim  -- no agent hat-values any gap at or above its own
      hat value plus delta/n (the growth loop's exit condition; phase 1 only);
    * piece_envy_cap      -- v_i(P_j) <= hat_i(P_i) + delta/n;
    * gap_envy_cap        -- v_i(U)   <= hat_i(P_i) + delta/n for every gap;
    * no_affordable_prefix -- no strict prefix of any assigned piece is worth
      hat_i(P_i) + delta/n to any agent i;
    * bifurcating_margin  -- when P_i is not bifurcating for i but P_j is,
      either v_i(P_j) < 1/4 + delta/n or the cake right of P_j is worth more
      than 1/2 - delta/n to i.
    """
    n = len(valuations)
    step = delta / n
    gaps = unassigned_gaps(pieces)
    hats = [hat_eval(v, p).value for v, p in zip(valuations, pieces)]
    checks: list[Check] = []

    if phase == "phase1_end":
        bad = None
        for gap in gaps:
            for i, v in enumerate(valuations):
                if hat_eval(v, gap).value >= hats[i] + step:
                    bad = f"{_agent(i)} still claims gap {gap}"
                    break
            if bad:
                break
        checks.append(Check(f"{phase}:no_remaining_claim", bad is None, bad))

    bad = None
    for i, v in enumerate(valuations):
        for j, p in enumerate(pieces):
            if j != i and v.value_of(p) > hats[i] + step:
                bad = f"{_agent(i)} values {_agent(j)}'s piece at {v.value_of(p)} > {hats[i]} + {step}"
                break
        if bad:
            break
    checks.append(Check(f"{phase}:piece_envy_cap", bad is None, bad))

    bad = None
    for i, v in enumerate(valuations):
        for gap in gaps:
            if v.value(gap.lo, gap.hi) > hats[i] + step:
                bad = f"{_agent(i)} values gap {gap} at {v.value(gap.lo, gap.hi)} > {hats[i]} + {step}"
                break
        if bad:
            break
    checks.append(Check(f"{phase}:gap_envy_cap", bad is None, bad))

    # A strict prefix [lo_j, x), x < hi_j, reaching hat_i + delta/n would mean
    # agent i should have taken it; the leftmost point reaching that value
    # must therefore lie at or beyond hi_j (or not exist).
    bad = None
    for i, v in enumerate(valuations):
        for j, p in enumerate(pieces):
            if p is None:
                continue
            y = v.leftmost_reach(p.lo, hats[i] + step)
            if y is not None and y < p.hi:
                bad = f"{_agent(i)} can reach {hats[i]} + {step} by {y} inside {_agent(j)}'s piece {p}"
                break
        if bad:
            break
    checks.append(Check(f"{phase}:no_affordable_prefix", bad is None, bad))

    bad = None
    for i, v in enumerate(valuations):
        if is_bifurcating(v, pieces[i]):
            continue
        for j, p in enumerate(pieces):
            if j == i or p is None or not is_bifurcating(v, p):
                continue
            if v.value_of(p) < QUARTER + step or v.value(p.hi, ONE) > HALF - step:
                continue
            bad = (f"{_agent(j)}'s piece {p} is bifurcating for {_agent(i)} yet worth "
                   f"{v.value_of(p)} with only {v.value(p.hi, ONE)} to its right")
            break
        if bad:
            break
    checks.append(Check(f"{phase}:bifurcating_margin", bad is None, bad))
    return checks


def check_trace_monotonicity(trace) -> Check:
    """Per-agent hat values never decrease over the recorded run."""
    series = []
    events = getattr(trace, "events", None) or []
    if events:
        series.append([e.hat_values for e in events])
    snapshots = getattr(trace, "snapshots", None) or []
    if snapshots:
        series.append([s.hat_values for s in snapshots])
    for seq in series:
        for prev, cur in zip(seq, seq[1:]):
            for i, (a, b) in enumerate(zip(prev, cur)):
                if b < a:
                    return Check("hat_values_nondecreasing", False,
                                 f"{_agent(i)} fell {a} -> {b}")
    return Check("hat_values_nondecreasing", True)


def check_iteration_bounds(trace, budget: Fraction) -> list[Check]:
    """Both solver loops stayed within the n^2/delta iteration budget."""
    return [
        Check("growth_iterations_within_budget",
              trace.phase1_iterations <= budget,
              None if trace.phase1_iterations <= budget
              else f"{trace.phase1_iterations} > {budget}"),
        Check("appending_iterations_within_budget",
              trace.phase2_iterations <= budget,
              None if trace.phase2_iterations <= budget
              else f"{trace.phase2_iterations} > {budget}"),
    ]


def build_report(pieces: Sequence[Piece], valuations: Sequence[Valuation], *,
                 checks: Sequence[Check] = (),
                 counter: Optional[QueryCounter] = None,
                 trace=None,
                 iteration_budget: Optional[Fraction] = None) -> AuditReport:
    """Assemble the report: value matrix, envy/ratio summaries, all checks."""
    values = values_matrix(pieces, valuations)
    all_checks = list(checks)
    if trace is not None and iteration_budget is not None:
        all_checks += check_iteration_bounds(trace, iteration_budget)
    if trace is not None and getattr(trace, "level", "off") != "off":
        all_checks.append(check_trace_monotonicity(trace))
    report = AuditReport(
        values=values,
        max_envy=max_envy_of(values),
        min_ratio=min_ratio_of(values),
        checks=all_checks,
    )
    if counter is not None:
        report.eval_count = counter.eval_count
        report.cut_count = counter.cut_count
    if trace is not None:
        report.phase1_iterations = trace.phase1_iterations
        report.phase2_iterations = trace.phase2_iterations
        report.cycle_rotations = trace.cycle_rotations
    return report


def brute_force_min_envy(instance: Instance, resolution: int) -> tuple[Fraction, list[Piece]]:
    """Exhaustive reference: minimum max-envy over grid-cut allocations.

    Tries every way to cut the cake at n-1 points drawn from the grid
    {k/resolution} union all valuation breakpoints, assigning the resulting
    intervals to agents in every order, and returns the best (envy, pieces)
    found.  Exact but exponential -- fine for n <= 3 at resolution ~100;
    n = 4 is only practical at coarse resolutions (<= 25 or so).
    """
    problem = instance.first_violation()
    if problem is not None:
        raise ValidationError(problem)
    if instance.n > 4:
        raise ValidationError("exhaustive search supports at most 4 agents")
    if resolution < 1:
        raise ValidationError(f"resolution must be >= 1, got {resolution}")
    n = instance.n
    vals = instance.agent_valuations()
    grid = {Fraction(k, resolution) for k in range(resolution + 1)}
    for v in vals:
        grid.update(v.breakpoints)
    points = sorted(grid)
    pref = [{g: v.prefix(g) for g in points} for v in vals]

    def assemble(bounds, perm) -> list[Piece]:
        out: list[Piece] = []
        for i in range(n):
            a, b = bounds[perm[i]], bounds[perm[i] + 1]
            out.append(Interval(a, b) if a < b else None)
        return out

    best: Optional[Fraction] = None
    best_bounds = best_perm = None
    for cuts in combinations_with_replacement(points, n - 1):
        bounds = (ZERO,) + cuts + (ONE,)
        piece_vals = [
            [pref[i][b] - pref[i][a] for a, b in zip(bounds, bounds[1:])]
            for i in range(n)
        ]
        for perm in permutations(range(n)):
            worst = ZERO
            for i in range(n):
                own = piece_vals[i][perm[i]]
                for j in range(n):
                    e = piece_vals[i][perm[j]] - own
                    if e > worst:
                        worst = e
            if best is None or worst < best:
                best, best_bounds, best_perm = worst, bounds, perm
                if worst == 0:
                    return best, assemble(bounds, perm)
    assert best is not None and best_bounds is not None and best_perm is not None
    return best, assemble(best_bounds, best_perm)

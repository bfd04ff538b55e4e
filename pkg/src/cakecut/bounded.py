"""Envy at most epsilon when agents share few distinct valuations.

Each distinct valuation walks the cake left to right, dropping a mark every
time another epsilon of its mass accrues; the union of all marks splits the
cake into segments each worth at most epsilon to everyone.  When the number
of distinct valuations d satisfies d <= epsilon*n - 1 there are at most n
segments, so handing each agent (in index order) its favorite remaining
segment allocates everything.  An agent's piece is then within epsilon of
any other piece it can see -- envy never exceeds epsilon -- at the price of
possibly empty pieces and a query count that grows like n/epsilon.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .audit import AuditReport, Check, build_report, check_structure, max_envy_of, values_matrix
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
    eval_query,
)


def cut_point_grid(v: Valuation, epsilon: Fraction,
                   counter: Optional[QueryCounter] = None) -> list[Fraction]:
    """Points 0 = z_0 < z_1 < ... < z_T = 1 with v([z_{t-1}, z_t]) <= epsilon.

    Every interior point is the leftmost one adding exactly epsilon of mass
    after its predecessor, so consecutive points bound the value of any
    sub-interval lying between them by epsilon.
    """
    epsilon = Fraction(epsilon)
    if not (ZERO < epsilon < ONE):
        raise ValidationError(f"epsilon must lie in (0,1), got {epsilon}")
    steps = math.ceil(1 / epsilon)
    points = [ZERO]
    for _ in range(steps - 1):
        points.append(cut_query(v, points[-1], epsilon, counter))
    points.append(ONE)
    assert all(a < b for a, b in zip(points, points[1:])), "grid must be strictly increasing"
    return points


def solve_bounded(instance: Instance, epsilon: Fraction) -> tuple[list[Piece], AuditReport]:
    """Allocate whole grid segments greedily; requires d <= epsilon*n - 1.

    Returns one (possibly empty) piece per agent covering the cake, plus an
    audit report certifying envy <= epsilon exactly.  Raises
    :class:`ValidationError` when the instance declares too many distinct
    valuations for the requested epsilon.
    """
    problem = instance.first_violation()
    if problem is not None:
        raise ValidationError(problem)
    epsilon = Fraction(epsilon)
    if not (ZERO < epsilon < ONE):
        raise ValidationError(f"epsilon must lie in (0,1), got {epsilon}")
    n = instance.n
    distinct = instance.distinct_ids()
    d = len(distinct)
    if d > epsilon * n - 1:
        raise ValidationError(
            f"{d} distinct valuations exceed the bound epsilon*n - 1 = {epsilon * n - 1}")

    counter = QueryCounter()
    marks: set[Fraction] = set()
    for vid in distinct:
        marks.update(cut_point_grid(instance.valuations[vid], epsilon, counter))
    grid = sorted(marks)
    assert len(grid) <= n + 1, f"{len(grid)} grid points for {n} agents"
    segments = [Interval(a, b) for a, b in zip(grid, grid[1:])]

    valuations = instance.agent_valuations()
    pieces: list[Piece] = [None] * n
    remaining = list(segments)
    for i, v in enumerate(valuations):
        if not remaining:
            break
        best = max(remaining, key=lambda s: eval_query(v, s.lo, s.hi, counter))
        pieces[i] = best
        remaining.remove(best)
    assert not remaining, "more segments than agents"

    checks = check_structure(pieces)
    envy = max_envy_of(values_matrix(pieces, valuations))
    checks.append(Check("envy_within_epsilon", envy <= epsilon,
                        None if envy <= epsilon else f"max envy {envy} > {epsilon}"))
    checks.append(Check("grid_size_bound", True, f"{len(grid)} points, n+1 = {n + 1}"))
    report = build_report(pieces, valuations, checks=checks, counter=counter)
    return pieces, report

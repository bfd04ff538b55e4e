"""Hypothesis strategies shared across the property-based tests."""

from fractions import Fraction

from hypothesis import strategies as st

from cakecut import Instance, Interval, Valuation

GRID = 24


@st.composite
def lattice_points(draw, grid=GRID):
    """A fraction k/grid in [0, 1]."""
    return Fraction(draw(st.integers(0, grid)), grid)


@st.composite
def valuations(draw, max_pieces=6, grid=GRID):
    """A piecewise-constant probability density over [0, 1].

    Breakpoints live on the k/grid lattice and densities come from small
    integer weights, so every derived quantity stays a modest Fraction.
    """
    pieces = draw(st.integers(1, max_pieces))
    cuts = draw(st.lists(st.integers(1, grid - 1), min_size=pieces - 1,
                         max_size=pieces - 1, unique=True))
    breakpoints = [Fraction(0)] + sorted(Fraction(c, grid) for c in cuts) + [Fraction(1)]
    weights = draw(st.lists(st.integers(0, 9), min_size=pieces, max_size=pieces)
                   .filter(any))
    mass = sum(w * (b - a)
               for w, a, b in zip(weights, breakpoints, breakpoints[1:]))
    return Valuation(breakpoints, [Fraction(w) / mass for w in weights])


@st.composite
def valuation_and_point(draw):
    return draw(valuations()), draw(lattice_points())


@st.composite
def instances(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    distinct = draw(st.integers(1, n))
    vals = {f"v{k}": draw(valuations()) for k in range(distinct)}
    ids = [f"v{draw(st.integers(0, distinct - 1))}" for _ in range(n)]
    for k in range(distinct):  # every valuation is used by someone
        ids[k] = f"v{k}"
    return Instance(vals, ids)


@st.composite
def partial_allocations(draw, max_n=6, grid=GRID):
    """(pieces, valuations): disjoint ordered pieces, some agents empty."""
    n = draw(st.integers(1, max_n))
    vals = [draw(valuations(max_pieces=4)) for _ in range(n)]
    k = draw(st.integers(0, n))
    cuts = sorted(draw(st.lists(st.integers(0, grid), min_size=2 * k,
                                max_size=2 * k)))
    slots = [Interval(Fraction(cuts[2 * i], grid), Fraction(cuts[2 * i + 1], grid))
             for i in range(k)]
    slots = [s for s in slots if s.lo < s.hi]
    # spread the pieces over a random subset of agents, order preserved
    owners = sorted(draw(st.permutations(range(n)))[:len(slots)])
    pieces = [None] * n
    for owner, piece in zip(owners, slots):
        pieces[owner] = piece
    return pieces, vals

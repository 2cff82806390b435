"""Ready-made small lattices used throughout tests and probes."""

from .lattice import FinLattice
from .poset import poset_from_covers


def chain_lattice(n):
    """The n-element chain 0 < 1 < ... < n-1."""
    covers = [(i, i + 1) for i in range(n - 1)]
    return FinLattice.from_poset(poset_from_covers(n, covers))


def antichain_with_bounds(width):
    """`width` pairwise incomparable atoms with a shared bottom 0 and top 1.

    Ids: 0 = bottom, 1 = top, 2..width+1 = atoms, so widening keeps ids
    stable (each M_w is a literal sublattice of M_{w+1}).
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    n = width + 2
    covers = [(0, a) for a in range(2, n)] + [(a, 1) for a in range(2, n)]
    return FinLattice.from_poset(poset_from_covers(n, covers))


def diamond():
    """The 2x2 Boolean lattice (distributive)."""
    return antichain_with_bounds(2)


def m3():
    """Three incomparable atoms with bounds; the modular nondistributive witness."""
    return antichain_with_bounds(3)


def pentagon():
    """N5: 0 < a < c < 1 and 0 < b < 1 with b incomparable to a, c.

    Ids: 0=bottom, 1=a, 2=c, 3=b, 4=top.
    """
    covers = [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]
    return FinLattice.from_poset(poset_from_covers(5, covers))


def n5():
    return pentagon()


def two_chain01():
    """The 2-element bounded lattice, the initial object of the {0,1} signature."""
    return chain_lattice(2).with_consts()


def one_element():
    return chain_lattice(1)

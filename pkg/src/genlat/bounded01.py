"""The bounded ({0,1}) lattice signature: constants-preserving
completion over nonempty ideals, bounded amalgamation, intervals as
bounded lattices, and the join-reducibility probe on built chains."""

from .amalgam import amalgamate
from .completion import (
    CompletionResult,
    _ideal_closure,
    _join_triples,
    derive_order,
    ideals,
    order_of,
)
from .errors import NotAnInterval, NotExtendable, VerificationFailure, WrongVariety
from .lattice import (
    Embedding,
    FinLattice,
    PartialLattice,
    subalgebra_mode,
    sublattice,
    verify_embedding,
)
from .poset import Poset


def ensure_lattice01(L):
    """Check that L is a bounded lattice with distinct, correct constants."""
    if L.consts is None:
        raise VerificationFailure("lattice carries no constants")
    z, o = L.consts
    if z == o or z != L.bottom or o != L.top:
        raise VerificationFailure("constants are not the distinct bounds")
    return L


def _with_bounds_adjoined(P):
    """Adjoin a fresh bottom (id n) and top (id n+1) to a partial lattice."""
    n = P.n
    pj = [[None] * (n + 2) for _ in range(n + 2)]
    pm = [[None] * (n + 2) for _ in range(n + 2)]
    for a in range(n):
        for b in range(n):
            pj[a][b] = P.pjoin[a][b]
            pm[a][b] = P.pmeet[a][b]
    z, o = n, n + 1
    for x in range(n + 2):
        pj[z][x] = pj[x][z] = x
        pm[z][x] = pm[x][z] = z
        pj[o][x] = pj[x][o] = o
        pm[o][x] = pm[x][o] = x
    return PartialLattice(n + 2, pj, pm, consts=(z, o)), (z, o)


def _bounded_order(P):
    """Order derived from the tables, extended by 0 <= x <= 1."""
    base = derive_order(P)
    z, o = P.consts
    up = list(base.up)
    full = (1 << P.n) - 1
    for x in range(P.n):
        up[x] |= 1 << o
        up[z] |= 1 << x
    up[z] = full
    # transitive closure after adding the bound relations
    changed = True
    while changed:
        changed = False
        for i in range(P.n):
            acc = up[i]
            m = acc
            while m:
                low = m & -m
                acc |= up[low.bit_length() - 1]
                m ^= low
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(P.n):
        for j in range(P.n):
            if i != j and (up[i] >> j) & 1 and (up[j] >> i) & 1:
                raise NotExtendable(f"bound constraints force {i} <= {j} <= {i}")
    return Poset(P.n, up)


def complete01(P):
    """Completion over nonempty ideals, preserving the constants.

    If the constants are absent they are adjoined first as a new bottom
    and top (recorded in the result's `adjoined` field). The embedding
    sends 0 to the smallest nonempty ideal {0} and 1 to the full carrier.
    """
    adjoined = ()
    if P.consts is None:
        P, adjoined = _with_bounds_adjoined(P)
    order = _bounded_order(P)
    P = PartialLattice(P.n, P.pjoin, P.pmeet, consts=P.consts, order=order)
    masks = ideals(P, include_empty=False)
    index = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    up = [0] * k
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if mi & ~mj == 0:
                up[i] |= 1 << j
    down = order.down
    triples = _join_triples(P)
    z, o = P.consts
    consts = (index[_ideal_closure(down[z], down, triples)], index[(1 << P.n) - 1])
    lattice = FinLattice.from_poset(Poset(k, up), consts=consts)
    emap = tuple(index[_ideal_closure(down[x], down, triples)] for x in range(P.n))
    mode = subalgebra_mode(P, lattice.as_partial(), emap)
    if mode == "not_weak":
        raise VerificationFailure("principal-ideal map failed the weak check")
    if emap[z] != consts[0] or emap[o] != consts[1]:
        raise VerificationFailure("completion does not preserve the constants")
    embed = Embedding(P, lattice, emap, mode)
    return CompletionResult(lattice=lattice, embed=embed, ideal_masks=tuple(masks), adjoined=adjoined)


def amalgamate01(A, B1, B2, f1, f2, prune=True):
    """Bounded amalgamation: as the plain one, but over nonempty ideals
    with the constants identified; legs get mode total01."""
    for L in (A, B1, B2):
        ensure_lattice01(L)
    for f, name in ((f1, "f1"), (f2, "f2")):
        if f.mode != "total01" or not verify_embedding(f):
            raise VerificationFailure(f"{name} is not a constants-preserving embedding")
    return amalgamate(A, B1, B2, f1, f2, prune=prune)


def interval_carrier(L, a, b):
    if a == b or not L.le(a, b):
        raise NotAnInterval(f"[{a},{b}] is not a nontrivial interval")
    return tuple(x for x in range(L.n) if L.le(a, x) and L.le(x, b))


def interval_as_01(L, a, b):
    """The interval [a,b] of L as a bounded lattice with a=0, b=1.

    Intervals are closed under both operations, so the restriction is a
    sublattice; positions follow ascending ids of the carrier.
    """
    ids = interval_carrier(L, a, b)
    sub = sublattice(L, ids)
    pos = {e: i for i, e in enumerate(ids)}
    return FinLattice(sub.n, sub.join, sub.meet, consts=(pos[a], pos[b]))


def one_join_reducible_stage(chain):
    """Least stage whose top is a join of two strictly smaller elements,
    with the witnesses; None when no built stage has one yet."""
    if chain.variety != "zero_one":
        raise WrongVariety("join-reducibility probe needs a zero_one chain")
    for m, C in enumerate(chain.stages, 1):
        o = C.consts[1]
        for x in range(C.n):
            if x == o:
                continue
            for y in range(x + 1, C.n):
                if y == o:
                    continue
                if C.join[x][y] == o:
                    return (m, x, y)
    return None

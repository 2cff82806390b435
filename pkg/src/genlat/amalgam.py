"""Amalgamation of finite lattices over a shared sublattice.

The construction glues the two carriers along the images of the shared
part, orders the union by the transitive closure of both orders, takes
partial sups/infs, and completes via the ideal lattice. By default the
result is pruned to the sublattice generated by the two embedded copies
(full ideal lattices grow exponentially with antichain width).
"""

from dataclasses import dataclass

from .completion import _ideal_closure, _join_triples, fep_complete, ideals, order_of
from .errors import AntisymmetryFailure, ConstantsClash, NotASublattice, VerificationFailure
from .lattice import (
    Embedding,
    FinLattice,
    partial_ops,
    verify_embedding,
)
from .poset import Poset, iter_bits


@dataclass(frozen=True)
class UnionPoset:
    poset: Poset
    into1: tuple  # B1 id -> union id (the identity by construction)
    into2: tuple  # B2 id -> union id


@dataclass(frozen=True)
class AmalgamResult:
    D: FinLattice
    g1: Embedding
    g2: Embedding
    square_ok: bool
    unpruned_size: object  # int, or None when too large to enumerate


def _require_total(e, name):
    if e.mode not in ("total", "total01") or not verify_embedding(e):
        raise VerificationFailure(f"{name} is not a verified total embedding")


def union_poset(A, B1, B2, f1, f2):
    """Quotient of B1 ⊔ B2 identifying f1(a) with f2(a), ordered by the
    transitive closure of the two lattice orders.

    Carrier: B1 ids first, then B2 \\ f2(A) in ascending id order. `A` may
    be None for the disjoint (empty-base) union.
    """
    if A is not None and A.n:
        _require_total(f1, "f1")
        _require_total(f2, "f2")
        f1m, f2m = f1.map, f2.map
    else:
        f1m = f2m = ()
    ident = {}
    for a in range(len(f1m)):
        ident[f2m[a]] = f1m[a]
    into2 = []
    nxt = B1.n
    for b in range(B2.n):
        if b in ident:
            into2.append(ident[b])
        else:
            into2.append(nxt)
            nxt += 1
    n = nxt
    up = [1 << i for i in range(n)]
    for x in range(B1.n):
        for y in range(B1.n):
            if B1.le(x, y):
                up[x] |= 1 << y
    for x in range(B2.n):
        for y in range(B2.n):
            if B2.le(x, y):
                up[into2[x]] |= 1 << into2[y]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in iter_bits(acc):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(n):
        for j in iter_bits(up[i]):
            if i != j and (up[j] >> i) & 1:
                raise AntisymmetryFailure((i, j, i))
    return UnionPoset(Poset(n, up), tuple(range(B1.n)), tuple(into2))


def _generated_ideals(P):
    """Carrier of the sublattice of the ideal lattice generated by all
    principal ideals, without enumerating the full ideal lattice."""
    order = order_of(P)
    down = order.down
    triples = _join_triples(P)
    members = []
    seen = set()
    for x in range(P.n):
        m = _ideal_closure(down[x], down, triples)
        if m not in seen:
            seen.add(m)
            members.append(m)
    qi = 0
    while qi < len(members):
        m = members[qi]
        qi += 1
        for other in list(members):
            for cand in (_ideal_closure(m | other, down, triples), m & other):
                if cand not in seen:
                    seen.add(cand)
                    members.append(cand)
    return sorted(members, key=lambda m: (bin(m).count("1"), m))


def _completion_on(P, masks, consts_from=None):
    index = {m: i for i, m in enumerate(masks)}
    k = len(masks)
    up = [0] * k
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if mi & ~mj == 0:
                up[i] |= 1 << j
    consts = None
    if consts_from is not None:
        down = order_of(P).down
        triples = _join_triples(P)
        z, o = consts_from
        consts = (
            index[_ideal_closure(down[z], down, triples)],
            index[_ideal_closure(down[o], down, triples)],
        )
    return FinLattice.from_poset(Poset(k, up), consts=consts), index


def amalgamate(A, B1, B2, f1, f2, prune=True):
    """Amalgamate B1 and B2 over A along f1, f2.

    Plain lattices by default; if A, B1, B2 all carry constants and the
    embeddings preserve them, the bounded route is taken (nonempty ideals,
    constants identified). `prune` keeps only the sublattice generated by
    the two copies; the full ideal-lattice size is recorded when it is
    small enough to enumerate.
    """
    bounded = all(
        x is not None and x.consts is not None for x in (A, B1, B2)
    )
    U = union_poset(A, B1, B2, f1, f2)
    if bounded:
        if U.into1[B1.consts[0]] != U.into2[B2.consts[0]] or U.into1[B1.consts[1]] != U.into2[
            B2.consts[1]
        ]:
            raise ConstantsClash("embeddings disagree on the constants")
    P = partial_ops(U.poset)
    consts_from = (U.into1[B1.consts[0]], U.into1[B1.consts[1]]) if bounded else None

    unpruned = None
    if P.n <= 16:
        unpruned = len(ideals(P, include_empty=not bounded))
    if prune:
        masks = _generated_ideals(P)
        D, index = _completion_on(P, masks, consts_from=consts_from)
        order = order_of(P)
        triples = _join_triples(P)
        principal = [
            index[_ideal_closure(order.down[x], order.down, triples)] for x in range(P.n)
        ]
    else:
        cr = fep_complete(P, include_empty=not bounded)
        D, principal = cr.lattice, list(cr.embed.map)
        if bounded:
            masks = cr.ideal_masks
            idx = {m: i for i, m in enumerate(masks)}
            # re-tag constants on the completed lattice
            down = order_of(P).down
            triples = _join_triples(P)
            D = FinLattice(
                D.n,
                D.join,
                D.meet,
                consts=(
                    idx[_ideal_closure(down[consts_from[0]], down, triples)],
                    idx[_ideal_closure(down[consts_from[1]], down, triples)],
                ),
                _poset=D._poset,
            )
    mode = "total01" if bounded else "total"
    g1 = Embedding(B1, D, tuple(principal[U.into1[x]] for x in range(B1.n)), mode)
    g2 = Embedding(B2, D, tuple(principal[U.into2[x]] for x in range(B2.n)), mode)
    for g, name in ((g1, "g1"), (g2, "g2")):
        if not verify_embedding(g):
            raise VerificationFailure(f"amalgam leg {name} failed the embedding check")
    square_ok = all(
        g1.map[f1.map[a]] == g2.map[f2.map[a]] for a in range(A.n)
    ) if A is not None and A.n else True
    return AmalgamResult(D=D, g1=g1, g2=g2, square_ok=square_ok, unpruned_size=unpruned)


def _literal_inclusion(A, B, name):
    from .lattice import is_literal_sublattice

    if A is not None and A.n and not is_literal_sublattice(A, B):
        raise NotASublattice(f"A is not a literal sublattice of {name}")
    if A is None or not A.n:
        return None
    mode = "total01" if A.consts is not None and B.consts is not None else "total"
    return Embedding(A, B, tuple(range(A.n)), mode)


def _relabel_keeping_first(res, B1):
    """Relabel an amalgam so g1 becomes the identity on B1's ids and the
    fresh elements get deterministic ids above |B1|."""
    D, g1, g2 = res.D, res.g1, res.g2
    perm = [None] * D.n
    for x in range(B1.n):
        perm[g1.map[x]] = x
    nxt = B1.n
    for d in range(D.n):
        if perm[d] is None:
            perm[d] = nxt
            nxt += 1
    from .lattice import relabel

    D2 = relabel(D, perm)
    incl = Embedding(B1, D2, tuple(range(B1.n)), g1.mode)
    b2prime = Embedding(B2_of(res), D2, tuple(perm[g2.map[x]] for x in range(g2.source.n)), g2.mode)
    for g, name in ((incl, "incl"), (b2prime, "b2prime")):
        if not verify_embedding(g):
            raise VerificationFailure(f"relabeled amalgam leg {name} failed the check")
    return D2, incl, b2prime


def B2_of(res):
    return res.g2.source


def amalgamate_with_inclusion(A, B1, B2, prune=True):
    """Amalgamate over literal inclusions and relabel so B1 keeps its ids.

    Returns (D, incl, b2prime) where incl: B1 -> D is the identity on
    B1's ids and fresh ids are allocated deterministically above |B1|.
    """
    f1 = _literal_inclusion(A, B1, "B1")
    f2 = _literal_inclusion(A, B2, "B2")
    res = amalgamate(A, B1, B2, f1, f2, prune=prune)
    return _relabel_keeping_first(res, B1)


def amalgamate_over_images(B1, sub_ids, B2, f2_images, prune=True):
    """Amalgamate B1 and B2 over the sublattice of B1 carried by `sub_ids`
    (a closed, ascending id tuple), mapped into B2 by `f2_images`
    positionwise. B1 keeps its ids in the result.

    This is the stage-extension workhorse: it generalizes
    `amalgamate_with_inclusion` to shared parts that sit anywhere in B1.
    """
    from .lattice import sublattice

    if not sub_ids:
        res = amalgamate(None, B1, B2, None, None, prune=prune)
        return _relabel_keeping_first(res, B1)
    A = sublattice(B1, sub_ids)
    bounded = A.consts is not None and B1.consts is not None and B2.consts is not None
    mode = "total01" if bounded else "total"
    if not bounded and A.consts is not None:
        A = A.without_consts()
    f1 = Embedding(A, B1, tuple(sub_ids), mode)
    f2 = Embedding(A, B2, tuple(f2_images), mode)
    res = amalgamate(A, B1, B2, f1, f2, prune=prune)
    return _relabel_keeping_first(res, B1)


def joint_embed(B1, B2):
    """A lattice containing embedded copies of both inputs.

    Plain signature: amalgamation over the empty structure. If both
    carry constants: amalgamation over the 2-element bounded lattice.
    """
    if B1.consts is not None and B2.consts is not None:
        from .catalog import two_chain01

        A = two_chain01()
        f1 = Embedding(A, B1, (B1.consts[0], B1.consts[1]), "total01")
        f2 = Embedding(A, B2, (B2.consts[0], B2.consts[1]), "total01")
        res = amalgamate(A, B1, B2, f1, f2)
    else:
        res = amalgamate(None, B1, B2, None, None)
    return res.D, res.g1, res.g2

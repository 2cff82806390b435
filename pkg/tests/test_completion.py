import random

import pytest

from genlat.catalog import chain_lattice, diamond, m3, pentagon
from genlat.completion import (
    CompletionResult,
    derive_order,
    fep_complete,
    ideals,
    one_point_extensions,
    weak_to_relative_product,
    with_derived_order,
)
from genlat.errors import NoOrderDeclared, NotExtendable
from genlat.lattice import (
    Embedding,
    FinLattice,
    PartialLattice,
    partial_ops,
    subalgebra_mode,
    verify_embedding,
)
from genlat.poset import iter_bits, poset_from_covers


def random_poset(rng, n):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = [p for p in pairs if rng.random() < 0.4]
    up = [1 << i for i in range(n)]
    for i, j in chosen:
        up[i] |= 1 << j
    # transitive closure (ids are topologically ordered already)
    for i in reversed(range(n)):
        for j in list(iter_bits(up[i])):
            up[i] |= up[j]
    from genlat.poset import Poset

    return Poset(n, up)


def test_ideals_two_chain():
    P = partial_ops(poset_from_covers(2, [(0, 1)]))
    assert ideals(P) == [0b00, 0b01, 0b11]


def test_ideals_two_antichain():
    P = partial_ops(poset_from_covers(2, []))
    assert ideals(P) == [0b00, 0b01, 0b10, 0b11]


def test_ideals_pentagon_all_principal():
    P = partial_ops(pentagon().poset)
    out = ideals(P)
    assert len(out) == 6  # empty + five principal ideals


def test_ideals_need_order():
    P = PartialLattice(2, [[0, None], [None, 1]], [[0, None], [None, 1]])
    with pytest.raises(NoOrderDeclared):
        ideals(P)


def test_fep_complete_total_lattice_adds_bottom():
    L = pentagon()
    cr = fep_complete(L.as_partial())
    assert cr.lattice.n == L.n + 1
    assert cr.embed.mode == "relative"
    # principal image is an isomorphic copy: verify as a total embedding
    e = Embedding(L, cr.lattice, cr.embed.map, "total")
    assert verify_embedding(e)


def test_fep_complete_antichain_is_boolean_square():
    P = partial_ops(poset_from_covers(2, []))
    cr = fep_complete(P)
    assert cr.lattice.n == 4
    assert cr.embed.mode == "relative"
    a, b = cr.embed.map
    join = cr.lattice.join[a][b]
    meet = cr.lattice.meet[a][b]
    assert join not in (a, b) and meet not in (a, b)


def test_fep_complete_empty():
    P = PartialLattice(0, [], [], order=poset_from_covers(0, []))
    cr = fep_complete(P)
    assert cr.lattice.n == 1
    assert cr.embed.map == ()


def test_fep_complete_relative_on_random_posets():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 7)
        p = random_poset(rng, n)
        cr = fep_complete(partial_ops(p))
        assert cr.embed.mode == "relative"
        # principal map is order-preserving and order-reflecting
        for x in range(n):
            for y in range(n):
                im_le = cr.lattice.le(cr.embed.map[x], cr.embed.map[y])
                assert im_le == p.leq(x, y)


def test_ideal_lattice_ops_are_closure_and_intersection():
    p = poset_from_covers(4, [(0, 1), (0, 2)])
    P = partial_ops(p)
    cr = fep_complete(P)
    masks = cr.ideal_masks
    L = cr.lattice
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            assert masks[L.meet[i][j]] == mi & mj
            assert masks[L.join[i][j]] & (mi | mj) == (mi | mj)
            # join is the LEAST ideal containing the union
            for k, mk in enumerate(masks):
                if mk & (mi | mj) == (mi | mj):
                    assert masks[L.join[i][j]] & ~mk == 0 or mk == masks[L.join[i][j]] or not L.le(k, L.join[i][j]) or k == L.join[i][j]


def test_derive_order_simple():
    # join(0,1)=2 forces 0,1 <= 2
    pj = [[0, 2, None], [2, 1, None], [None, None, 2]]
    pm = [[0, None, None], [None, 1, None], [None, None, 2]]
    P = PartialLattice(3, pj, pm)
    q = derive_order(P)
    assert q.leq(0, 2) and q.leq(1, 2) and not q.leq(0, 1)


def test_derive_order_inconsistent():
    # join(a,a)=b with b != a forces a <= b <= a
    pj = [[1, None], [None, 1]]
    pm = [[0, None], [None, 1]]
    P = PartialLattice(2, pj, pm)
    with pytest.raises(NotExtendable):
        derive_order(P)


def test_one_point_extensions():
    # {0, a, b} inside N5 (relative restriction): joins/meets escape to 1
    host = pentagon()
    ids = (0, 1, 3)
    # relative restriction: op defined iff host value lies inside the subset
    pj = [[None] * 3 for _ in range(3)]
    pm = [[None] * 3 for _ in range(3)]
    pos = {e: i for i, e in enumerate(ids)}
    for x in range(3):
        for y in range(3):
            hv = host.join[ids[x]][ids[y]]
            if hv in pos:
                pj[x][y] = pos[hv]
            hv = host.meet[ids[x]][ids[y]]
            if hv in pos:
                pm[x][y] = pos[hv]
    A = PartialLattice(3, pj, pm)
    assert one_point_extensions(A, host, ids) == [4]  # a v b = top only
    E, delta = weak_to_relative_product(A, host, ids)
    assert delta.mode == "relative"
    assert subalgebra_mode(A, E.as_partial(), delta.map) == "relative"


def test_product_total_case():
    L = diamond()
    E, delta = weak_to_relative_product(L.as_partial(), L)
    assert E.join == L.join and delta.map == (0, 1, 2, 3)


def test_product_two_factors():
    # two undefined joins landing on distinct parents: relative restriction
    # of M3 to its three atoms plus bottom has joins escaping to the top.
    host = m3()
    ids = (0, 2, 3, 4)
    pos = {e: i for i, e in enumerate(ids)}
    pj = [[None] * 4 for _ in range(4)]
    pm = [[None] * 4 for _ in range(4)]
    for x in range(4):
        for y in range(4):
            hv = host.join[ids[x]][ids[y]]
            if hv in pos:
                pj[x][y] = pos[hv]
            hv = host.meet[ids[x]][ids[y]]
            if hv in pos:
                pm[x][y] = pos[hv]
    A = PartialLattice(4, pj, pm)
    assert one_point_extensions(A, host, ids) == [1]
    E, delta = weak_to_relative_product(A, host, ids)
    assert delta.mode == "relative"
    assert subalgebra_mode(A, E.as_partial(), delta.map) == "relative"


def random_relative_restriction(rng, host, size):
    ids = tuple(sorted(rng.sample(range(host.n), size)))
    pos = {e: i for i, e in enumerate(ids)}
    n = len(ids)
    pj = [[None] * n for _ in range(n)]
    pm = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            hv = host.join[ids[x]][ids[y]]
            if hv in pos:
                pj[x][y] = pos[hv]
            hv = host.meet[ids[x]][ids[y]]
            if hv in pos:
                pm[x][y] = pos[hv]
    return PartialLattice(n, pj, pm), ids


def test_product_relative_on_random_restrictions():
    rng = random.Random(11)
    hosts = [pentagon(), m3(), diamond(), chain_lattice(6)]
    checked = 0
    while checked < 25:
        host = rng.choice(hosts)
        size = rng.randint(1, min(4, host.n))
        A, ids = random_relative_restriction(rng, host, size)
        E, delta = weak_to_relative_product(A, host, ids)
        assert delta.mode == "relative"
        target = E.as_partial() if isinstance(E, FinLattice) else None
        if target is not None:
            assert subalgebra_mode(A, target, delta.map) == "relative"
        checked += 1

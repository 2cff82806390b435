from itertools import permutations

from genlat.catalog import chain_lattice, diamond, m3, one_element, pentagon
from genlat.lattice import Embedding, identity_embedding, sublattice, verify_embedding
from genlat.search import (
    automorphisms,
    closure_mask,
    embeddings_over,
    find_embedding,
    generated_sublattice,
    sublattices_upto,
)


def brute_embeddings(B, C):
    """All injections B -> C preserving both tables (oracle)."""
    out = []
    for img in permutations(range(C.n), B.n):
        ok = True
        for a in range(B.n):
            for b in range(B.n):
                if img[B.join[a][b]] != C.join[img[a]][img[b]]:
                    ok = False
                    break
                if img[B.meet[a][b]] != C.meet[img[a]][img[b]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(img)
    return sorted(out)


def test_identity_case():
    A = chain_lattice(2)
    C = pentagon()
    eAC = Embedding(A, C, (0, 4), "total")
    res = embeddings_over(A, A, C, identity_embedding(A), eAC)
    assert [e.map for e in res] == [(0, 4)]


def test_three_chains_in_pentagon():
    # 2-chain placed on {0,1}=bottom/top of N5; 3-chain extensions exist
    A = chain_lattice(2)
    B = chain_lattice(3)
    C = pentagon()
    eAB = Embedding(A, B, (0, 2), "total")
    eAC = Embedding(A, C, (0, 4), "total")
    res = embeddings_over(A, B, C, eAB, eAC)
    maps = sorted(e.map for e in res)
    assert maps == [(0, 1, 4), (0, 2, 4), (0, 3, 4)]
    for e in res:
        assert verify_embedding(e)


def test_m3_not_in_pentagon():
    A = one_element()
    eAB = Embedding(A, m3(), (0,), "total")
    eAC = Embedding(A, pentagon(), (0,), "total")
    assert embeddings_over(A, m3(), pentagon(), eAB, eAC) == []
    assert find_embedding(m3(), pentagon()) is None


def test_agrees_with_bruteforce_oracle():
    cases = [
        (chain_lattice(3), pentagon()),
        (diamond(), pentagon()),
        (diamond(), m3()),
        (chain_lattice(2), diamond()),
        (pentagon(), pentagon()),
    ]
    for B, C in cases:
        got = sorted(e.map for e in embeddings_over(None, B, C, None, None))
        assert got == brute_embeddings(B, C)


def test_deterministic_order():
    B, C = chain_lattice(2), diamond()
    first = [e.map for e in embeddings_over(None, B, C, None, None)]
    second = [e.map for e in embeddings_over(None, B, C, None, None)]
    assert first == second == sorted(first)


def test_limit():
    res = embeddings_over(None, chain_lattice(2), diamond(), None, None, limit=2)
    assert len(res) == 2


def test_automorphisms_m3():
    maps, complete = automorphisms(m3())
    assert complete and len(maps) == 6  # S3 on the atoms


def test_generated_sublattice():
    C = pentagon()
    assert generated_sublattice(C, (1, 3)) == (0, 1, 3, 4)
    assert generated_sublattice(C, (0,)) == (0,)
    assert closure_mask(C, 0b01010) == 0b11011


def test_sublattices_upto():
    subs, complete = sublattices_upto(diamond(), 4)
    assert complete
    as_sets = {frozenset(s) for s in subs}
    assert frozenset({0, 2, 3, 1}) in as_sets  # whole diamond
    assert frozenset({0}) in as_sets
    assert frozenset({2, 3}) not in as_sets  # not closed
    # every reported subset is closed
    for s in subs:
        m = 0
        for x in s:
            m |= 1 << x
        assert closure_mask(diamond(), m) == m


def test_sublattices_require_consts():
    L = diamond().with_consts()
    subs, _ = sublattices_upto(L, 4)
    for s in subs:
        assert 0 in s and 1 in s


def test_embeddings_preserve_consts():
    B = chain_lattice(2).with_consts()
    C = diamond().with_consts()
    res = embeddings_over(None, B, C, None, None)
    assert [e.map for e in res] == [(0, 1)]
    assert res[0].mode == "total01"

"""Enumeration of finite lattices up to isomorphism.

Generation walks naturally labeled posets (each new element's strict
lower set is a downset of the prefix), pruning branches whose meets
already fail, checking joins at the leaves, and deduplicating by
canonical form. New elements only ever extend upward, so meets are
final the moment an element is placed.
"""

from functools import lru_cache

from .canonical import canonical_form
from .errors import BoundTooLarge
from .lattice import FinLattice
from .poset import Poset, iter_bits

MAX_SIZE = 7

_KNOWN_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 5, 6: 15, 7: 53}


def _downsets(n, down):
    """All downset masks of the poset prefix given by `down` cones."""
    out = []
    for mask in range(1 << n):
        ok = True
        m = mask
        while m:
            low = m & -m
            x = low.bit_length() - 1
            if down[x] & ~mask:
                ok = False
                break
            m ^= low
        if ok:
            out.append(mask)
    return out


def _labeled_lattice_posets(n):
    """Yield `up` rows of every naturally labeled n-element lattice poset."""
    if n == 0:
        return
    up = [1]  # element 0 alone
    down = [1]

    def has_glb(x, j):
        common = down[x] & down[j]
        for u in iter_bits(common):
            if not common & ~down[u]:
                return True
        return False

    def place(j):
        if j == n:
            # every pair needs a sup; meets were enforced on the way up
            for x in range(n):
                for y in range(x + 1, n):
                    common = up[x] & up[y]
                    ok = False
                    for u in iter_bits(common):
                        if not common & ~up[u]:
                            ok = True
                            break
                    if not ok:
                        return
            yield tuple(up)
            return
        for dmask in _downsets(j, down):
            up.append(1 << j)
            down.append(dmask | (1 << j))
            for x in iter_bits(dmask):
                up[x] |= 1 << j
            ok = all(has_glb(x, j) for x in range(j))
            if ok:
                yield from place(j + 1)
            for x in iter_bits(dmask):
                up[x] &= ~(1 << j)
            up.pop()
            down.pop()

    yield from place(1)


@lru_cache(maxsize=16)
def _census(k, max_size):
    if k > max_size:
        raise BoundTooLarge(f"size bound {k} exceeds the configured maximum {max_size}")
    out = []
    for n in range(1, k + 1):
        seen = {}
        for rows in _labeled_lattice_posets(n):
            L = FinLattice.from_poset(Poset(n, rows))
            cf = canonical_form(L)
            if cf.code not in seen:
                seen[cf.code] = cf.lattice
        for code in sorted(seen):
            out.append(seen[code])
    return tuple(out)


def enumerate_lattices_upto(k, max_size=MAX_SIZE):
    """All lattices with at most k elements, one canonical representative
    per isomorphism class, sorted by (size, canonical code)."""
    return list(_census(k, max_size))


def census_counts(k, max_size=MAX_SIZE):
    """Count of isomorphism classes per size 1..k."""
    counts = {}
    for L in enumerate_lattices_upto(k, max_size=max_size):
        counts[L.n] = counts.get(L.n, 0) + 1
    return [counts.get(n, 0) for n in range(1, k + 1)]


@lru_cache(maxsize=16)
def _census01(k, max_size):
    return tuple(
        L.with_consts() for L in _census(k, max_size) if L.n >= 2
    )


def enumerate_bounded_upto(k, max_size=MAX_SIZE):
    """Canonical {0,1}-lattices with 2..k elements (constants attached).

    Every lattice with at least two elements has exactly one bounded
    expansion, so this is the plain census minus the singleton.
    """
    return list(_census01(k, max_size))

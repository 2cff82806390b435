"""Canonical forms for isomorphism bookkeeping.

Strategy: iterated partition refinement on operation-table invariants,
then exhaustive minimization of the flattened tables over the remaining
(color-preserving) relabelings. Refinement usually shrinks the search to
a handful of candidates; a guard trips if a pathological instance would
explode.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .errors import BoundTooLarge
from .lattice import FinLattice, relabel


@dataclass(frozen=True)
class CanonicalForm:
    code: tuple
    relabeling: tuple  # old id -> canonical id
    lattice: FinLattice


def _refine_colors(L, colors):
    n = L.n
    while True:
        sig = []
        for i in range(n):
            row = sorted(
                (colors[j], colors[L.join[i][j]], colors[L.meet[i][j]]) for j in range(n)
            )
            sig.append((colors[i], tuple(row)))
        order = sorted(set(sig))
        new = [order.index(s) for s in sig]
        if new == colors:
            return colors
        colors = new


def _initial_colors(L, pinned):
    h = L.poset.heights
    colors = []
    for i in range(L.n):
        if i < pinned:
            colors.append((0, i, 0, 0))
        else:
            down = sum(1 for j in range(L.n) if L.le(j, i))
            up = sum(1 for j in range(L.n) if L.le(i, j))
            colors.append((1, h[i], down, up))
    order = sorted(set(colors))
    return [order.index(c) for c in colors]


def _flat_code(L):
    flat = []
    for row in L.join:
        flat.extend(row)
    for row in L.meet:
        flat.extend(row)
    return tuple(flat)


def canonical_form(L, pinned=0, guard=2_000_000):
    """Canonical code and relabeling of `L`.

    Isomorphic lattices get identical codes. With `pinned` = f, only
    relabelings fixing ids 0..f-1 pointwise are considered, which makes
    the code a canonical invariant of the extension-over-prefix class
    (isomorphism over a shared substructure). Results are cached:
    lattices are immutable.
    """
    return _canonical_form_cached(L, pinned, guard)


@lru_cache(maxsize=200_000)
def _canonical_form_cached(L, pinned, guard):
    n = L.n
    colors = _refine_colors(L, _initial_colors(L, pinned))
    classes = {}
    for i in range(pinned, n):
        classes.setdefault(colors[i], []).append(i)
    work = 1
    for members in classes.values():
        for m in range(2, len(members) + 1):
            work *= m
        if work > guard:
            raise BoundTooLarge(f"canonical search space exceeds {guard} relabelings")

    class_keys = sorted(classes)
    best = None
    best_perm = None

    def assign(idx, taken):
        nonlocal best, best_perm
        if idx == len(class_keys):
            perm = [0] * n
            nxt = pinned
            for i in range(pinned):
                perm[i] = i
            for key in class_keys:
                for old in taken[key]:
                    perm[old] = nxt
                    nxt += 1
            cand = relabel(L, perm)
            code = _flat_code(cand)
            if best is None or code < best:
                best = code
                best_perm = tuple(perm)
            return
        key = class_keys[idx]
        for ordering in permutations(classes[key]):
            taken[key] = ordering
            assign(idx + 1, taken)

    assign(0, {})
    canon = relabel(L, best_perm)
    tag = "L01" if L.consts is not None else "L"
    consts = canon.consts if canon.consts is not None else ()
    code = (tag, n, pinned, tuple(consts)) + best
    return CanonicalForm(code=code, relabeling=best_perm, lattice=canon)


def canonical_code(L, pinned=0):
    return canonical_form(L, pinned=pinned).code


def code_str(code):
    """Compact stable string form of a canonical code (archive/ledger key)."""
    tag, n, pinned, consts = code[0], code[1], code[2], code[3]
    head = f"{tag}:{n}:{pinned}:{','.join(map(str, consts))}"
    return head + ":" + ",".join(map(str, code[4:]))

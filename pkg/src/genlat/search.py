"""Backtracking searches: embeddings over a shared substructure,
sublattice enumeration, generated sublattices, automorphisms.

All searches visit candidates in ascending id order, so results are
deterministic and independent of any parallel exploration strategy.
"""

from .errors import VerificationFailure
from .lattice import Embedding, sublattice
from .poset import iter_bits


def _propagate(B, C, mapping, used, queue):
    """Close a partial map under forced images of joins/meets.

    mapping: list B-id -> C-id or None. Returns the list of newly assigned
    B-ids (for undo), or None on conflict (with its own additions undone).
    """
    added = []
    assigned = [x for x in range(B.n) if mapping[x] is not None]

    def fail():
        for z in added:
            used.discard(mapping[z])
            mapping[z] = None
        return None

    while queue:
        x = queue.pop()
        for y in assigned:
            for table_b, table_c in ((B.join, C.join), (B.meet, C.meet)):
                z = table_b[x][y]
                t = table_c[mapping[x]][mapping[y]]
                mz = mapping[z]
                if mz is not None:
                    if mz != t:
                        return fail()
                else:
                    if t in used:
                        return fail()
                    mapping[z] = t
                    used.add(t)
                    added.append(z)
                    queue.append(z)
                    assigned.append(z)
    return added


def _search_embeddings(B, C, seed, limit=None, node_budget=None):
    """All total embeddings B -> C extending the partial map `seed`.

    Returns (list of maps, complete flag); `complete` is False when the
    node budget was exhausted before the search tree was covered.
    """
    n = B.n
    mapping = [None] * n
    used = set()
    for x, c in seed.items():
        if mapping[x] is not None:
            if mapping[x] != c:
                return [], True
            continue
        if c in used:
            return [], True
        mapping[x] = c
        used.add(c)
    queue = [x for x in range(n) if mapping[x] is not None]
    if _propagate(B, C, mapping, used, queue) is None:
        return [], True

    up_c = C.poset.up
    down_c = C.poset.down
    full_c = (1 << C.n) - 1
    results = []
    nodes = 0
    complete = True

    def candidates(x):
        mask = full_c
        for c in used:
            mask &= ~(1 << c)
        for y in range(n):
            my = mapping[y]
            if my is None or y == x:
                continue
            if B.le(x, y):
                mask &= down_c[my]
            else:
                mask &= ~down_c[my]
            if B.le(y, x):
                mask &= up_c[my]
            else:
                mask &= ~up_c[my]
        return mask

    def extend():
        nonlocal nodes, complete
        if limit is not None and len(results) >= limit:
            return
        if node_budget is not None and nodes > node_budget:
            complete = False
            return
        x = next((i for i in range(n) if mapping[i] is None), None)
        if x is None:
            results.append(tuple(mapping))
            return
        for c in iter_bits(candidates(x)):
            nodes += 1
            mapping[x] = c
            used.add(c)
            added = _propagate(B, C, mapping, used, [x])
            if added is not None:
                extend()
                for z in added:
                    used.discard(mapping[z])
                    mapping[z] = None
            mapping[x] = None
            used.discard(c)
            if limit is not None and len(results) >= limit:
                return
            if node_budget is not None and nodes > node_budget:
                complete = False
                return

    extend()
    return results, complete


def embeddings_over(A, B, C, eAB, eAC, limit=None, node_budget=None):
    """Total lattice embeddings g: B -> C with g∘eAB = eAC.

    `A` (with the two given embeddings) may be None for an unconstrained
    embedding search. An empty result from an unbudgeted call means the
    exhaustive search found none. When both B and C carry constants the
    returned embeddings preserve them (mode total01).
    """
    seed = {}
    if A is not None:
        for a in range(A.n):
            seed[eAB.map[a]] = eAC.map[a]
    mode = "total"
    if B.consts is not None and C.consts is not None:
        seed.setdefault(B.consts[0], C.consts[0])
        seed.setdefault(B.consts[1], C.consts[1])
        if seed[B.consts[0]] != C.consts[0] or seed[B.consts[1]] != C.consts[1]:
            return []
        mode = "total01"
    maps, complete = _search_embeddings(B, C, seed, limit=limit, node_budget=node_budget)
    if node_budget is None and not complete:
        raise VerificationFailure("unbudgeted search reported incompleteness")
    return [Embedding(B, C, m, mode) for m in maps]


def find_embedding(B, C, node_budget=None):
    """First embedding of B into C in deterministic order, or None."""
    found = embeddings_over(None, B, C, None, None, limit=1, node_budget=node_budget)
    return found[0] if found else None


def automorphisms(L, cap=None, node_budget=None):
    """All automorphisms of L (ascending lexicographic maps)."""
    maps, complete = _search_embeddings(L, L, {}, limit=cap, node_budget=node_budget)
    if cap is not None and len(maps) >= cap:
        return maps, False
    return maps, complete


def generated_sublattice(L, seed_ids):
    """Sorted carrier of the sublattice of L generated by `seed_ids`."""
    mask = 0
    for x in seed_ids:
        mask |= 1 << x
    frontier = list(seed_ids)
    members = sorted(set(seed_ids))
    while frontier:
        x = frontier.pop()
        for y in members:
            for v in (L.join[x][y], L.meet[x][y]):
                if not (mask >> v) & 1:
                    mask |= 1 << v
                    frontier.append(v)
                    members.append(v)
    return tuple(sorted(members))


def closure_mask(L, mask):
    """Bitmask closure of `mask` under join and meet in L."""
    frontier = list(iter_bits(mask))
    members = list(frontier)
    while frontier:
        x = frontier.pop()
        for y in members:
            for v in (L.join[x][y], L.meet[x][y]):
                if not (mask >> v) & 1:
                    mask |= 1 << v
                    frontier.append(v)
                    members.append(v)
    return mask


def sublattices_upto(L, k, require_mask=0, cap=None):
    """All closed subsets of L of size <= k, as sorted id-tuples.

    With `require_mask` set, only subsets meeting it are returned (the
    enumeration still explores all small closed sets). Returns
    (list, complete flag); the flag drops when `cap` visited sets is hit.
    With constants present, only subsets containing them are produced
    (substructures of the bounded signature must contain the constants).
    """
    base = 0
    if L.consts is not None:
        base = (1 << L.consts[0]) | (1 << L.consts[1])
        base = closure_mask(L, base)
        if bin(base).count("1") > k:
            return [], True
    seen = set()
    queue = []
    if base:
        queue.append(base)
        seen.add(base)
    else:
        for x in range(L.n):
            m = 1 << x
            seen.add(m)
            queue.append(m)
    out = []
    complete = True
    qi = 0
    while qi < len(queue):
        if cap is not None and len(seen) > cap:
            complete = False
            break
        m = queue[qi]
        qi += 1
        out.append(m)
        size = bin(m).count("1")
        if size >= k:
            continue
        for x in range(L.n):
            if (m >> x) & 1:
                continue
            ext = closure_mask(L, m | (1 << x))
            if bin(ext).count("1") <= k and ext not in seen:
                seen.add(ext)
                queue.append(ext)
    subsets = [tuple(iter_bits(m)) for m in out if (m & require_mask) == require_mask or not require_mask]
    subsets.sort(key=lambda t: (len(t), t))
    return subsets, complete


def sublattice_on(L, ids):
    """Induced lattice on a closed id set (positions follow sorted ids)."""
    return sublattice(L, tuple(sorted(ids)))

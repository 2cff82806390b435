"""Finite partial orders on dense ids 0..n-1, stored as bitmask rows.

Python integers double as arbitrary-width bitsets, so the same code path
covers both small (word-sized) and large carriers.
"""

from .errors import CycleDetected, DuplicateCover, InvalidOrder


def iter_bits(mask):
    """Yield set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Immutable partial order; `up[i]` has bit j set iff i <= j."""

    __slots__ = ("n", "up", "down", "_covers", "_heights")

    def __init__(self, n, up):
        up = tuple(up)
        if len(up) != n:
            raise InvalidOrder(f"expected {n} rows, got {len(up)}")
        full = (1 << n) - 1
        for i, row in enumerate(up):
            if row & ~full:
                raise InvalidOrder(f"row {i} references ids >= {n}")
            if not (row >> i) & 1:
                raise InvalidOrder(f"not reflexive at {i}")
        down = [0] * n
        for i in range(n):
            row = up[i]
            for j in iter_bits(row):
                if i != j and (up[j] >> i) & 1:
                    raise InvalidOrder(f"not antisymmetric at ({i},{j})")
                if up[j] & ~row:
                    k = next(iter_bits(up[j] & ~row))
                    raise InvalidOrder(f"not transitive: {i}<={j}<={k} but not {i}<={k}")
                down[j] |= 1 << i
        self.n = n
        self.up = up
        self.down = tuple(down)
        self._covers = None
        self._heights = None

    def leq(self, i, j):
        return (self.up[i] >> j) & 1 == 1

    @property
    def covers(self):
        """Transitive reduction as a sorted list of (lower, upper) pairs."""
        if self._covers is None:
            pairs = []
            for i in range(self.n):
                strict_up = self.up[i] & ~(1 << i)
                for j in iter_bits(strict_up):
                    between = strict_up & self.down[j] & ~(1 << j)
                    if not between:
                        pairs.append((i, j))
            self._covers = tuple(sorted(pairs))
        return self._covers

    @property
    def heights(self):
        """Length of the longest strictly increasing chain ending at each id."""
        if self._heights is None:
            h = [0] * self.n
            for i in sorted(range(self.n), key=lambda x: bin(self.down[x]).count("1")):
                below = self.down[i] & ~(1 << i)
                h[i] = max((h[j] + 1 for j in iter_bits(below)), default=0)
            self._heights = tuple(h)
        return self._heights

    def sup(self, a, b):
        """Least upper bound of a,b, or None if it does not exist."""
        ub = self.up[a] & self.up[b]
        for u in iter_bits(ub):
            if not ub & ~self.up[u]:
                return u
        return None

    def inf(self, a, b):
        lb = self.down[a] & self.down[b]
        for u in iter_bits(lb):
            if not lb & ~self.down[u]:
                return u
        return None

    def restrict(self, ids):
        """Induced subposet on `ids`, relabeled by position."""
        ids = tuple(ids)
        pos = {e: p for p, e in enumerate(ids)}
        m = len(ids)
        up = [0] * m
        for p, e in enumerate(ids):
            for f in iter_bits(self.up[e]):
                if f in pos:
                    up[p] |= 1 << pos[f]
        return Poset(m, up)

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and self.up == other.up

    def __hash__(self):
        return hash((self.n, self.up))

    def __repr__(self):
        return f"Poset(n={self.n}, covers={list(self.covers)})"


def poset_from_covers(n, covers):
    """Build the reflexive-transitive closure of a cover relation.

    Rejects duplicate pairs and cycles (a cycle witness is reported).
    """
    seen = set()
    succs = [[] for _ in range(n)]
    for pair in covers:
        a, b = pair
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidOrder(f"cover {pair} references ids outside 0..{n - 1}")
        if (a, b) in seen:
            raise DuplicateCover((a, b))
        seen.add((a, b))
        succs[a].append(b)

    up = [None] * n
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done
    parent = {}

    def visit(root):
        stack = [(root, iter(succs[root]))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if state[nxt] == 1:
                    cycle = [nxt]
                    cur = node
                    while cur != nxt:
                        cycle.append(cur)
                        cur = parent[cur]
                    cycle.append(nxt)
                    cycle.reverse()
                    raise CycleDetected(cycle)
                if state[nxt] == 0:
                    parent[nxt] = node
                    state[nxt] = 1
                    stack.append((nxt, iter(succs[nxt])))
                    advanced = True
                    break
            if not advanced:
                mask = 1 << node
                for s in succs[node]:
                    mask |= up[s]
                up[node] = mask
                state[node] = 2
                stack.pop()

    for r in range(n):
        if state[r] == 0:
            visit(r)
    return Poset(n, up)

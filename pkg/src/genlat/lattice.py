"""Total and partial finite lattices, embeddings, and subalgebra tests."""

from dataclasses import dataclass

from .errors import (
    InvalidOrder,
    LawViolation,
    NotASublattice,
    NotInjective,
    UndefinedEntry,
)
from .poset import Poset, iter_bits

MODES = ("not_weak", "weak_only", "relative")


class PartialLattice:
    """Two partial binary tables over ids 0..n-1; `None` marks undefined.

    May carry a declared underlying order (a `Poset` on the same carrier),
    which ideal enumeration requires, and an optional pair of constants
    (zero_id, one_id) for the bounded signature.
    """

    __slots__ = ("n", "pjoin", "pmeet", "consts", "order")

    def __init__(self, n, pjoin, pmeet, consts=None, order=None):
        pjoin = tuple(tuple(row) for row in pjoin)
        pmeet = tuple(tuple(row) for row in pmeet)
        for name, table in (("join", pjoin), ("meet", pmeet)):
            if len(table) != n or any(len(row) != n for row in table):
                raise InvalidOrder(f"{name} table is not {n}x{n}")
            for row in table:
                for v in row:
                    if v is not None and not (0 <= v < n):
                        raise InvalidOrder(f"{name} value {v} outside 0..{n - 1}")
        if consts is not None:
            z, o = consts
            if not (0 <= z < n and 0 <= o < n):
                raise InvalidOrder("constants outside carrier")
            consts = (z, o)
        if order is not None and order.n != n:
            raise InvalidOrder("declared order has wrong carrier size")
        self.n = n
        self.pjoin = pjoin
        self.pmeet = pmeet
        self.consts = consts
        self.order = order

    def is_total(self):
        return all(v is not None for row in self.pjoin for v in row) and all(
            v is not None for row in self.pmeet for v in row
        )

    def defined_triples(self):
        """All (op, a, b, c) with a <op> b = c defined, a <= b."""
        out = []
        for a in range(self.n):
            for b in range(a, self.n):
                if self.pjoin[a][b] is not None:
                    out.append(("join", a, b, self.pjoin[a][b]))
                if self.pmeet[a][b] is not None:
                    out.append(("meet", a, b, self.pmeet[a][b]))
        return out

    def __repr__(self):
        return f"PartialLattice(n={self.n})"


class FinLattice:
    """A finite total lattice given by join/meet tables.

    Instances are only built through the validating factories below
    (`validate_lattice`, `FinLattice.from_poset`, `sublattice`, ...), so
    the tables can be trusted to satisfy the lattice laws.
    """

    __slots__ = ("n", "join", "meet", "consts", "_poset")

    def __init__(self, n, join, meet, consts=None, _poset=None):
        self.n = n
        self.join = join
        self.meet = meet
        self.consts = consts
        self._poset = _poset

    @classmethod
    def from_poset(cls, poset, consts=None):
        """Lattice from a poset in which every pair has a sup and an inf.

        Sup/inf tables of a poset satisfy the lattice laws by construction,
        so no law check is needed here.
        """
        n = poset.n
        join = [[0] * n for _ in range(n)]
        meet = [[0] * n for _ in range(n)]
        for a in range(n):
            join[a][a] = meet[a][a] = a
            for b in range(a + 1, n):
                s = poset.sup(a, b)
                if s is None:
                    raise UndefinedEntry(a, b, "join")
                i = poset.inf(a, b)
                if i is None:
                    raise UndefinedEntry(a, b, "meet")
                join[a][b] = join[b][a] = s
                meet[a][b] = meet[b][a] = i
        L = cls(
            n,
            tuple(map(tuple, join)),
            tuple(map(tuple, meet)),
            consts=consts,
            _poset=poset,
        )
        if consts is not None:
            _check_consts(L)
        return L

    @property
    def poset(self):
        if self._poset is None:
            n = self.n
            up = [0] * n
            for a in range(n):
                for b in range(n):
                    if self.join[a][b] == b:
                        up[a] |= 1 << b
            self._poset = Poset(n, up)
        return self._poset

    def le(self, a, b):
        return self.join[a][b] == b

    @property
    def bottom(self):
        b = 0
        for x in range(1, self.n):
            b = self.meet[b][x]
        return b

    @property
    def top(self):
        t = 0
        for x in range(1, self.n):
            t = self.join[t][x]
        return t

    def as_partial(self):
        return PartialLattice(self.n, self.join, self.meet, consts=self.consts, order=self.poset)

    def with_consts(self):
        """Copy with constants set to (bottom, top)."""
        L = FinLattice(
            self.n, self.join, self.meet, consts=(self.bottom, self.top), _poset=self._poset
        )
        _check_consts(L)
        return L

    def without_consts(self):
        return FinLattice(self.n, self.join, self.meet, consts=None, _poset=self._poset)

    def __eq__(self, other):
        return (
            isinstance(other, FinLattice)
            and self.n == other.n
            and self.join == other.join
            and self.meet == other.meet
            and self.consts == other.consts
        )

    def __hash__(self):
        return hash((self.n, self.join, self.meet, self.consts))

    def __repr__(self):
        tag = "Lattice01" if self.consts else "FinLattice"
        return f"{tag}(n={self.n})"


def _check_consts(L):
    z, o = L.consts
    if z == o:
        raise LawViolation("distinct constants", (z, o))
    for x in range(L.n):
        if L.meet[z][x] != z or L.join[o][x] != o:
            raise LawViolation("bounds", (z, o, x))


def partial_ops(poset):
    """Partial lattice of a poset: sup/inf wherever they exist."""
    n = poset.n
    pjoin = [[None] * n for _ in range(n)]
    pmeet = [[None] * n for _ in range(n)]
    for a in range(n):
        pjoin[a][a] = pmeet[a][a] = a
        for b in range(a + 1, n):
            s = poset.sup(a, b)
            i = poset.inf(a, b)
            pjoin[a][b] = pjoin[b][a] = s
            pmeet[a][b] = pmeet[b][a] = i
    return PartialLattice(n, pjoin, pmeet, order=poset)


_LAWS = (
    ("idempotence", lambda t, a, b, c: t[a][a] == a, 1),
    ("commutativity", lambda t, a, b, c: t[a][b] == t[b][a], 2),
    ("associativity", lambda t, a, b, c: t[t[a][b]][c] == t[a][t[b][c]], 3),
)


def validate_lattice(t):
    """Certify a total table pair as a lattice; raises on any failure.

    Accepts a `PartialLattice` (which must have no undefined entries) or
    a raw (n, join, meet[, consts]) already packed in one. For carriers up
    to ~60 elements every law is checked literally so the error can name
    the violated identity; larger tables are checked through the induced
    order (an equivalent but anonymous criterion).
    """
    if isinstance(t, FinLattice):
        t = t.as_partial()
    n = t.n
    for a in range(n):
        for b in range(n):
            if t.pjoin[a][b] is None:
                raise UndefinedEntry(a, b, "join")
            if t.pmeet[a][b] is None:
                raise UndefinedEntry(a, b, "meet")
    join = t.pjoin
    meet = t.pmeet
    if n <= 60:
        for name, table in (("join", join), ("meet", meet)):
            for law, check, arity in _LAWS:
                rng = range(n)
                if arity == 1:
                    bad = next(((a,) for a in rng if not check(table, a, 0, 0)), None)
                elif arity == 2:
                    bad = next(
                        ((a, b) for a in rng for b in rng if not check(table, a, b, 0)), None
                    )
                else:
                    bad = next(
                        (
                            (a, b, c)
                            for a in rng
                            for b in rng
                            for c in rng
                            if not check(table, a, b, c)
                        ),
                        None,
                    )
                if bad is not None:
                    raise LawViolation(f"{name} {law}", bad)
        for a in range(n):
            for b in range(n):
                if meet[a][join[a][b]] != a:
                    raise LawViolation("absorption (meet over join)", (a, b))
                if join[a][meet[a][b]] != a:
                    raise LawViolation("absorption (join over meet)", (a, b))
    # induced order must be a genuine poset whose sup/inf reproduce the tables
    up = [0] * n
    for a in range(n):
        for b in range(n):
            if join[a][b] == b:
                up[a] |= 1 << b
    try:
        poset = Poset(n, up)
    except InvalidOrder as exc:
        raise LawViolation("induced order", (str(exc),)) from exc
    for a in range(n):
        for b in range(n):
            if poset.sup(a, b) != join[a][b]:
                raise LawViolation("join is not the induced sup", (a, b))
            if poset.inf(a, b) != meet[a][b]:
                raise LawViolation("meet is not the induced inf", (a, b))
    L = FinLattice(n, join, meet, consts=t.consts, _poset=poset)
    if t.consts is not None:
        _check_consts(L)
    return L


def sublattice(L, ids):
    """Restriction of `L` to a closed subset, relabeled by position."""
    ids = tuple(ids)
    pos = {e: p for p, e in enumerate(ids)}
    for a in ids:
        for b in ids:
            if L.join[a][b] not in pos or L.meet[a][b] not in pos:
                raise NotASublattice(f"{set(ids)} not closed at ({a},{b})")
    m = len(ids)
    join = tuple(tuple(pos[L.join[a][b]] for b in ids) for a in ids)
    meet = tuple(tuple(pos[L.meet[a][b]] for b in ids) for a in ids)
    consts = None
    if L.consts is not None and L.consts[0] in pos and L.consts[1] in pos:
        consts = (pos[L.consts[0]], pos[L.consts[1]])
    return FinLattice(m, join, meet, consts=consts)


def relabel(L, perm):
    """Copy of `L` where old id i becomes perm[i]."""
    n = L.n
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            join[perm[a]][perm[b]] = perm[L.join[a][b]]
            meet[perm[a]][perm[b]] = perm[L.meet[a][b]]
    consts = (perm[L.consts[0]], perm[L.consts[1]]) if L.consts else None
    return FinLattice(n, tuple(map(tuple, join)), tuple(map(tuple, meet)), consts=consts)


@dataclass(frozen=True)
class Embedding:
    """Injective map between (partial) lattices with a certified mode."""

    source: object
    target: object
    map: tuple
    mode: str

    def __call__(self, x):
        return self.map[x]

    @property
    def image(self):
        return frozenset(self.map)


def _ptables(x):
    if isinstance(x, FinLattice):
        return x.join, x.meet
    return x.pjoin, x.pmeet


def subalgebra_mode(small, host, mapping):
    """Classify `mapping` as not_weak / weak_only / relative.

    weak: defined source entries are defined and agree in the host.
    relative: additionally, whenever the host operation on two images
    lands inside the image, the source operation is defined accordingly.
    """
    mapping = tuple(mapping)
    if len(set(mapping)) != len(mapping):
        raise NotInjective(f"map {mapping} is not injective")
    sj, sm = _ptables(small)
    hj, hm = _ptables(host)
    n = small.n
    img = {v: k for k, v in enumerate(mapping)}
    relative = True
    for stab, htab in ((sj, hj), (sm, hm)):
        for a in range(n):
            for b in range(n):
                sv = stab[a][b]
                hv = htab[mapping[a]][mapping[b]]
                if sv is not None:
                    if hv is None or hv != mapping[sv]:
                        return "not_weak"
                elif hv is not None and hv in img:
                    relative = False
    return "relative" if relative else "weak_only"


def verify_embedding(e):
    """Re-check an Embedding object against its declared mode."""
    if e.mode in ("weak", "relative"):
        got = subalgebra_mode(e.source, e.target, e.map)
        if got == "not_weak":
            return False
        return e.mode == "weak" or got == "relative"
    if len(set(e.map)) != len(e.map):
        return False
    S, T = e.source, e.target
    for a in range(S.n):
        for b in range(S.n):
            if e.map[S.join[a][b]] != T.join[e.map[a]][e.map[b]]:
                return False
            if e.map[S.meet[a][b]] != T.meet[e.map[a]][e.map[b]]:
                return False
    if e.mode == "total01":
        if S.consts is None or T.consts is None:
            return False
        if e.map[S.consts[0]] != T.consts[0] or e.map[S.consts[1]] != T.consts[1]:
            return False
    return True


def identity_embedding(L, mode="total"):
    return Embedding(L, L, tuple(range(L.n)), mode)


def is_literal_sublattice(A, B):
    """True iff A's carrier 0..|A|-1 sits inside B with identical tables."""
    if A.n > B.n:
        return False
    for a in range(A.n):
        for b in range(A.n):
            if B.join[a][b] != A.join[a][b] or B.meet[a][b] != A.meet[a][b]:
                return False
    if A.consts is not None and B.consts is not None and A.consts != B.consts:
        return False
    return True

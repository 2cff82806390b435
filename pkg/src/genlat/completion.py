"""Ideal lattices of partial lattices and the completions built from them.

An ideal of a partial lattice with a declared order is a downset that is
closed under all *defined* joins. Meets of ideals are intersections;
joins are the closure of the union. The principal-ideal map x -> (x]
embeds the partial lattice into the (finite, total) ideal lattice.
"""

from dataclasses import dataclass

from .errors import (
    BoundTooLarge,
    NoOrderDeclared,
    NotExtendable,
    VerificationFailure,
    WitnessMissing,
)
from .lattice import Embedding, FinLattice, PartialLattice, subalgebra_mode, validate_lattice
from .poset import Poset, iter_bits


def derive_order(P):
    """Smallest saturated partial order compatible with P's tables.

    Rules: a v b = c forces a,b <= c and c below every common upper bound
    of a,b; dually for meets. Raises NotExtendable when the constraints
    force a cycle on distinct elements.
    """
    n = P.n
    up = [1 << i for i in range(n)]
    triples = P.defined_triples()

    def add(a, b):
        # a <= b plus transitive consequences
        changed = False
        if not (up[a] >> b) & 1:
            for i in range(n):
                if (up[i] >> a) & 1:
                    new = up[i] | up[b]
                    if new != up[i]:
                        up[i] = new
                        changed = True
        return changed

    for op, a, b, c in triples:
        if op == "join":
            add(a, c)
            add(b, c)
        else:
            add(c, a)
            add(c, b)
    changed = True
    while changed:
        changed = False
        for op, a, b, c in triples:
            if op == "join":
                common = up[a] & up[b]
                for u in iter_bits(common & ~up[c]):
                    changed |= add(c, u)
            else:
                for u in range(n):
                    if (up[u] >> a) & 1 and (up[u] >> b) & 1 and not (up[u] >> c) & 1:
                        changed |= add(u, c)
    for i in range(n):
        for j in iter_bits(up[i]):
            if i != j and (up[j] >> i) & 1:
                raise NotExtendable(f"tables force {i} <= {j} <= {i}")
    return Poset(n, up)


def order_of(P):
    if P.order is None:
        raise NoOrderDeclared("partial lattice carries no underlying poset")
    return P.order


def _join_triples(P):
    out = []
    for a in range(P.n):
        for b in range(a + 1, P.n):
            c = P.pjoin[a][b]
            if c is not None:
                out.append((a, b, c))
    return out


def _ideal_closure(mask, down, triples):
    """Close `mask` downward and under the defined joins."""
    while True:
        new = mask
        for x in iter_bits(mask):
            new |= down[x]
        for a, b, c in triples:
            if (new >> a) & 1 and (new >> b) & 1 and not (new >> c) & 1:
                new |= 1 << c
        if new == mask:
            return mask
        mask = new


def ideals(P, include_empty=True, enumeration_bound=20):
    """All ideals of P as bitmasks, sorted by (size, mask).

    Includes the empty ideal unless `include_empty` is False (the bounded
    signature works with nonempty ideals only).
    """
    order = order_of(P)
    n = P.n
    if n > enumeration_bound:
        raise BoundTooLarge(f"refusing to enumerate ideals over {n} > {enumeration_bound} elements")
    down = order.down
    triples = _join_triples(P)
    out = []
    for mask in range(1 << n):
        ok = True
        for x in iter_bits(mask):
            if down[x] & ~mask:
                ok = False
                break
        if not ok:
            continue
        for a, b, c in triples:
            if (mask >> a) & 1 and (mask >> b) & 1 and not (mask >> c) & 1:
                ok = False
                break
        if ok and (mask or include_empty):
            out.append(mask)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


@dataclass(frozen=True)
class CompletionResult:
    lattice: FinLattice
    embed: Embedding
    ideal_masks: tuple
    adjoined: tuple = ()  # ids adjoined by the bounded completion, if any


def _lattice_of_ideals(P, masks, consts_from=None):
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
            index[(1 << P.n) - 1],
        )
    lattice = FinLattice.from_poset(Poset(k, up), consts=consts)
    return lattice, index


def fep_complete(P, include_empty=None):
    """Ideal-lattice completion of a partial lattice with declared order.

    Returns the finite total ideal lattice together with the principal
    embedding x -> (x], whose mode is re-checked (relative for partial
    lattices arising from posets). `include_empty` defaults to the plain
    signature (True) unless P carries constants.
    """
    if include_empty is None:
        include_empty = P.consts is None
    order = order_of(P)
    masks = ideals(P, include_empty=include_empty)
    consts_from = P.consts if P.consts is not None else None
    lattice, index = _lattice_of_ideals(P, masks, consts_from=consts_from)
    triples = _join_triples(P)
    emap = tuple(index[_ideal_closure(order.down[x], order.down, triples)] for x in range(P.n))
    total = lattice.as_partial()
    mode = subalgebra_mode(P, total, emap) if P.n else "relative"
    if mode == "not_weak":
        raise VerificationFailure("principal-ideal map failed the weak check")
    embed = Embedding(P, lattice, emap, mode)
    return CompletionResult(lattice=lattice, embed=embed, ideal_masks=tuple(masks))


def one_point_extensions(A, host, inj):
    """The extension set I and the partial algebras A_i used by the
    weak-to-relative product: I collects host values of pairs from the
    image that fall outside it; A_i adds the single point i to A and
    defines exactly the operations landing on it."""
    img = {inj[a]: a for a in range(A.n)}
    points = set()
    for a in range(A.n):
        for b in range(A.n):
            for table in (host.join, host.meet):
                v = table[inj[a]][inj[b]]
                if v not in img:
                    points.add(v)
    return sorted(points)


def _one_point_algebra(A, host, inj, i):
    n = A.n + 1
    img = {inj[a]: a for a in range(A.n)}
    pj = [[None] * n for _ in range(n)]
    pm = [[None] * n for _ in range(n)]
    for a in range(A.n):
        for b in range(A.n):
            pj[a][b] = A.pjoin[a][b]
            pm[a][b] = A.pmeet[a][b]
            if host.join[inj[a]][inj[b]] == i and pj[a][b] is None:
                pj[a][b] = A.n
            if host.meet[inj[a]][inj[b]] == i and pm[a][b] is None:
                pm[a][b] = A.n
    carrier = [inj[a] for a in range(A.n)] + [i]
    order = host.poset.restrict(carrier)
    return PartialLattice(n, pj, pm, order=order)


class ProductCompletion:
    """Product of one-point completions realizing a relative embedding.

    The product is materialized as a FinLattice only when small enough;
    otherwise operations and image-membership are computed coordinatewise,
    which is all the relative-mode verification needs.
    """

    def __init__(self, A, factors, materialize_cap=2048):
        self.A = A
        self.factors = factors  # list of (point, CompletionResult)
        self.size = 1
        for _, cr in factors:
            self.size *= cr.lattice.n
        self.delta = tuple(
            tuple(cr.embed.map[a] for _, cr in factors) for a in range(A.n)
        )
        self.lattice = None
        self.embedding = None
        if 0 < self.size <= materialize_cap and factors:
            self._materialize()
        self.mode = self._verify_mode()

    def join(self, s, t):
        return tuple(cr.lattice.join[x][y] for (x, y, (_, cr)) in zip(s, t, self.factors))

    def meet(self, s, t):
        return tuple(cr.lattice.meet[x][y] for (x, y, (_, cr)) in zip(s, t, self.factors))

    def in_image(self, t):
        return t in set(self.delta)

    def _verify_mode(self):
        """Weak always holds; relative iff undefined source entries land
        outside the diagonal image (checked tuple-wise, no materialization)."""
        A = self.A
        image = set(self.delta)
        for a in range(A.n):
            for b in range(A.n):
                for tab, op in ((A.pjoin, self.join), (A.pmeet, self.meet)):
                    v = op(self.delta[a], self.delta[b])
                    if tab[a][b] is not None:
                        if v != self.delta[tab[a][b]]:
                            return "not_weak"
                    elif v in image:
                        return "weak_only"
        return "relative"

    def _materialize(self):
        tuples = [()]
        for _, cr in self.factors:
            tuples = [t + (x,) for t in tuples for x in range(cr.lattice.n)]
        index = {t: i for i, t in enumerate(tuples)}
        k = len(tuples)
        join = [[0] * k for _ in range(k)]
        meet = [[0] * k for _ in range(k)]
        for i, s in enumerate(tuples):
            for j, t in enumerate(tuples):
                join[i][j] = index[self.join(s, t)]
                meet[i][j] = index[self.meet(s, t)]
        # products of lattices satisfy the laws componentwise
        lattice = FinLattice(k, tuple(map(tuple, join)), tuple(map(tuple, meet)))
        emap = tuple(index[d] for d in self.delta)
        self.lattice = lattice
        self.embedding = Embedding(self.A, lattice, emap, "relative")
        self.tuples = tuples


def weak_to_relative_product(A, host, inj=None, factor_hook=None, materialize_cap=2048):
    """Upgrade a weak embedding into a relative one via a product of
    one-point completions.

    `A` is a partial lattice sitting inside the finite lattice `host`
    through `inj` (identity by default). When the extension set I is
    empty and A is total, A itself with the identity map is returned.
    The declared mode of the result is verified and a failure is raised
    loudly (it indicates the input did not sit relatively in its parent).
    """
    if inj is None:
        inj = tuple(range(A.n))
    if subalgebra_mode(A, host, inj) == "not_weak":
        raise VerificationFailure("A does not sit weakly in the supplied parent")
    points = one_point_extensions(A, host, inj)
    if not points:
        if A.is_total():
            lattice = validate_lattice(A)
            emb = Embedding(A, lattice, tuple(range(A.n)), "relative")
            return lattice, emb
        cr = fep_complete(with_derived_order(A))
        if cr.embed.mode != "relative":
            raise VerificationFailure(
                "empty extension set but completion is not relative; "
                "the input is not a relative subalgebra of its parent"
            )
        return cr.lattice, cr.embed
    factors = []
    for i in points:
        if factor_hook is not None:
            supplied = factor_hook(i)
            if supplied is None:
                raise WitnessMissing(i)
            factors.append((i, supplied))
        else:
            factors.append((i, fep_complete(_one_point_algebra(A, host, inj, i))))
    prod = ProductCompletion(A, factors, materialize_cap=materialize_cap)
    if prod.mode != "relative":
        raise VerificationFailure(
            f"product embedding verified as {prod.mode}; "
            "the input is not a relative subalgebra of its parent"
        )
    if prod.lattice is not None:
        return prod.lattice, prod.embedding
    return prod, Embedding(A, prod, prod.delta, "relative")


def with_derived_order(P):
    """Copy of P carrying the order derived from its own tables."""
    return PartialLattice(P.n, P.pjoin, P.pmeet, consts=P.consts, order=derive_order(P))

"""The staged limit construction: task scheduling, FIFO-fair discharge,
homogeneity/universality checks, back-and-forth, and embedding of
nested chains of finite lattices.

Every run is a pure function of (variety, k, budget, order, limits):
searches and schedules are fully deterministic.
"""

from dataclasses import dataclass, field

from .amalgam import amalgamate, amalgamate_over_images, joint_embed
from .bounded01 import amalgamate01, complete01, ensure_lattice01
from .canonical import canonical_form, code_str
from .catalog import one_element, two_chain01
from .census import enumerate_bounded_upto, enumerate_lattices_upto
from .completion import fep_complete
from .config import BuildLimits
from .errors import StagesExhausted, VerificationFailure, WrongVariety
from .lattice import (
    Embedding,
    is_literal_sublattice,
    relabel,
    sublattice,
    verify_embedding,
)
from .search import (
    automorphisms,
    embeddings_over,
    find_embedding,
    generated_sublattice,
    sublattices_upto,
)


@dataclass(frozen=True)
class VarietySpec:
    """Hooks tying one signature's constructions together."""

    name: str
    initial: object
    is01: bool
    enumerator: object  # k -> canonical lattices up to size k
    completion: object  # partial lattice -> CompletionResult
    amalgamator: object  # (A,B1,B2,f1,f2,prune) -> AmalgamResult


PLAIN = VarietySpec(
    name="plain",
    initial=one_element(),
    is01=False,
    enumerator=enumerate_lattices_upto,
    completion=fep_complete,
    amalgamator=amalgamate,
)

ZERO_ONE = VarietySpec(
    name="zero_one",
    initial=two_chain01(),
    is01=True,
    enumerator=enumerate_bounded_upto,
    completion=complete01,
    amalgamator=amalgamate01,
)

VARIETIES = {"plain": PLAIN, "zero_one": ZERO_ONE}


def get_variety(name):
    if name not in VARIETIES:
        raise WrongVariety(f"unknown variety {name!r}")
    return VARIETIES[name]


@dataclass
class ExtensionTask:
    kind: str  # "realize_extension" | "realize_copy"
    image: tuple  # host ids carrying A (empty for copies)
    ext: object  # FinLattice; for extensions, ids 0..|A|-1 are the pins
    code: str  # dedup key
    discovered_stage: int
    status: str = "pending"
    realized_stage: object = None
    witness: object = None  # map of ext into the realizing stage


@dataclass
class StageChain:
    variety: str
    k: int
    stages: list
    inclusions: list
    ledger: list
    metadata: dict
    _codes: set = field(default_factory=set, repr=False)

    @property
    def last(self):
        return self.stages[-1]

    def pending(self):
        return [t for t in self.ledger if t.status == "pending"]

    def task_by_code(self, code):
        for t in self.ledger:
            if t.code == code:
                return t
        return None


def _pinned_extension(A_size, B, emap):
    """Relabel B so the embedding image of A becomes ids 0..A_size-1 in
    pin order, then take the pinned canonical form (the ≃_A-class key)."""
    perm = [None] * B.n
    for i in range(A_size):
        perm[emap[i]] = i
    nxt = A_size
    for b in range(B.n):
        if perm[b] is None:
            perm[b] = nxt
            nxt += 1
    cf = canonical_form(relabel(B, perm), pinned=A_size)
    return cf


def extension_classes(B, variety):
    """(sub_ids, pinned representative, code) triples for every extension
    class A <= B up to isomorphism over A: enumerate the sublattices of B,
    pin them, and dedup by pinned canonical code. The empty substructure
    is included in the plain signature (where the class admits it)."""
    out = {}
    subsets, complete = sublattices_upto(B, B.n)
    assert complete
    if not variety.is01:
        subsets = [()] + subsets
    for S in subsets:
        cf = _pinned_extension(len(S), B, S)
        key = code_str(cf.code)
        if key not in out:
            out[key] = (S, cf.lattice, key)
    return list(out.values())


def _schedule_tasks_for_subset(chain, variety, C, T, k):
    """Extension tasks for one concrete sublattice carrier T of C."""
    A = sublattice(C, T)
    if not variety.is01 and A.consts is not None:
        A = A.without_consts()
    tasks = []
    for B in variety.enumerator(k):
        if B.n <= A.n:
            continue
        for e in embeddings_over(None, A, B, None, None):
            cf = _pinned_extension(A.n, B, e.map)
            key = f"ext:{','.join(map(str, T))}:{code_str(cf.code)}"
            if key in chain._codes:
                continue
            chain._codes.add(key)
            tasks.append(
                ExtensionTask(
                    kind="realize_extension",
                    image=T,
                    ext=cf.lattice,
                    code=key,
                    discovered_stage=len(chain.stages),
                )
            )
    return tasks


def schedule(chain, k=None, limits=None, order="forward"):
    """Enqueue the newest stage's unrealized obligations.

    (i) one extension task per (sublattice of C_n, extension class) pair
    not yet in the ledger — only carriers touching ids new to this stage
    are walked, older ones were already scheduled; (ii) one copy task per
    canonical lattice of size <= k not yet embedded. Deterministic; the
    `order` flag reverses the within-stage enqueue order.
    """
    limits = limits or BuildLimits()
    k = k or chain.k
    variety = get_variety(chain.variety)
    C = chain.last
    prev_n = chain.metadata.get("sched_prev_n", 0)
    aut_maps, aut_complete = automorphisms(
        C, cap=limits.automorphism_cap, node_budget=limits.witness_node_budget
    )
    use_orbits = aut_complete and len(aut_maps) > 1

    subsets, complete = sublattices_upto(C, k, cap=limits.schedule_set_cap)
    chain.metadata.setdefault("schedule_complete", []).append(bool(complete))
    new_tasks = []
    for T in subsets:
        if prev_n and all(t < prev_n for t in T):
            continue  # already scheduled at an earlier stage
        if use_orbits:
            orbit_min = min(tuple(sorted(a[t] for t in T)) for a in aut_maps)
            if orbit_min != T:
                continue  # an automorphic copy carries the obligation
        new_tasks.extend(_schedule_tasks_for_subset(chain, variety, C, T, k))
    for B in variety.enumerator(k):
        key = f"copy:{code_str(canonical_form(B).code)}"
        if key in chain._codes:
            continue
        chain._codes.add(key)
        new_tasks.append(
            ExtensionTask(
                kind="realize_copy",
                image=(),
                ext=B,
                code=key,
                discovered_stage=len(chain.stages),
            )
        )
    if order == "reverse":
        new_tasks.reverse()
    chain.ledger.extend(new_tasks)
    chain.metadata["sched_prev_n"] = C.n
    return new_tasks


def search_witness(chain, task, limits=None, stage_index=None):
    """Embedding realizing `task` inside the given stage (default: last),
    or None. Budgeted: a miss under budget pressure is treated as absent
    (the discharge then amalgamates, which is always sound)."""
    limits = limits or BuildLimits()
    C = chain.stages[(stage_index or len(chain.stages)) - 1]
    budget = limits.witness_node_budget
    if task.kind == "realize_copy":
        e = find_embedding(task.ext, C, node_budget=budget)
        return e.map if e else None
    T = task.image
    A = sublattice(C, T)
    variety = get_variety(chain.variety)
    if not variety.is01 and A.consts is not None:
        A = A.without_consts()
    eAB = Embedding(A, task.ext, tuple(range(A.n)), "total")
    eAC = Embedding(A, C, T, "total")
    found = embeddings_over(A, task.ext, C, eAB, eAC, limit=1, node_budget=budget)
    return found[0].map if found else None


def _discharge(chain, task, limits):
    """Amalgamate the newest stage with the task's extension; returns the
    new stage and the witness map of `task.ext` into it."""
    C = chain.last
    variety = get_variety(chain.variety)
    B = task.ext
    if task.kind == "realize_extension":
        sub_ids = task.image
        f2_images = tuple(range(len(sub_ids)))
    else:
        if variety.is01:
            sub_ids = tuple(sorted(C.consts))
            zpos = sub_ids.index(C.consts[0])
            f2_images = (B.consts[0], B.consts[1]) if zpos == 0 else (B.consts[1], B.consts[0])
        elif C.n >= 2 and B.n >= 2:
            sub_ids = tuple(sorted((C.bottom, C.top)))
            f2_images = (
                (B.bottom, B.top) if sub_ids[0] == C.bottom else (B.top, B.bottom)
            )
        else:
            sub_ids = (C.bottom,)
            f2_images = (B.bottom,)
    D, incl, b2prime = amalgamate_over_images(C, sub_ids, B, f2_images)
    return D, b2prime.map


def run_builder(variety, k=5, budget=30, order="forward", limits=None):
    """FIFO-fair construction of a finite prefix of the limit chain.

    Each cycle takes the oldest pending task; if the newest stage already
    realizes it the witness is recorded, otherwise the stage is extended
    by amalgamation. Stops when the ledger drains, the stage budget is
    spent, or a stage would exceed the growth cap; the partial chain with
    its ledger is returned in every case (an honest partial answer).
    """
    if isinstance(variety, str):
        variety = get_variety(variety)
    limits = limits or BuildLimits()
    if variety.is01:
        ensure_lattice01(variety.initial)
    chain = StageChain(
        variety=variety.name,
        k=k,
        stages=[variety.initial],
        inclusions=[],
        ledger=[],
        metadata={
            "order": order,
            "tie_break": "lex-v1",
            "prune": True,
            "growth_cap": limits.growth_cap,
            "schedule_set_cap": limits.schedule_set_cap,
            "automorphism_cap": limits.automorphism_cap,
            "witness_node_budget": limits.witness_node_budget,
        },
    )
    schedule(chain, k, limits, order=order)
    head = 0
    while True:
        while head < len(chain.ledger) and chain.ledger[head].status != "pending":
            head += 1
        if head >= len(chain.ledger):
            chain.metadata["stopped"] = "drained"
            break
        task = chain.ledger[head]
        witness = search_witness(chain, task, limits)
        if witness is not None:
            task.status = "realized"
            task.realized_stage = len(chain.stages)
            task.witness = witness
            continue
        if len(chain.stages) >= budget:
            chain.metadata["stopped"] = "budget"
            break
        D, wmap = _discharge(chain, task, limits)
        if D.n > limits.growth_cap:
            chain.metadata["stopped"] = "growth_cap"
            break
        C = chain.last
        mode = "total01" if variety.is01 else "total"
        inclusion = Embedding(C, D, tuple(range(C.n)), mode)
        if not verify_embedding(inclusion):
            raise VerificationFailure("stage inclusion failed the embedding check")
        chain.stages.append(D)
        chain.inclusions.append(inclusion)
        task.status = "realized"
        task.realized_stage = len(chain.stages)
        task.witness = wmap
        schedule(chain, k, limits, order=order)
    return chain


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class U1Entry:
    b_code: str
    sub_size: int
    probe_map: tuple
    realized_stage: object  # int or None


@dataclass(frozen=True)
class U1Report:
    k: int
    horizon: int
    entries: tuple

    @property
    def unrealized(self):
        return tuple(e for e in self.entries if e.realized_stage is None)

    @property
    def realized(self):
        return tuple(e for e in self.entries if e.realized_stage is not None)


def _earliest_witness_stage(chain, A, B, eAB_map, probe_map, horizon, limits):
    """Least stage index <= horizon realizing the extension over the probe
    embedding, using the monotonicity of witnesses along the chain."""
    top = min(horizon, len(chain.stages))

    def present(idx):
        C = chain.stages[idx - 1]
        if A is None:
            return bool(find_embedding(B, C, node_budget=limits.witness_node_budget))
        eAB = Embedding(A, B, eAB_map, "total")
        eAC = Embedding(A, C, probe_map, "total")
        return bool(
            embeddings_over(A, B, C, eAB, eAC, limit=1, node_budget=limits.witness_node_budget)
        )

    if not present(top):
        return None
    lo, hi = 1, top
    while lo < hi:
        mid = (lo + hi) // 2
        if present(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def check_U1(chain, k=None, horizon=None, limits=None):
    """Homogeneity shadow: every extension A <= B (|B| <= k) of every
    embedding of A into the probe stage C_1 must be realized over it by
    some stage <= horizon. Returns the full realized/unrealized report."""
    limits = limits or BuildLimits()
    k = k or chain.k
    horizon = horizon or len(chain.stages)
    variety = get_variety(chain.variety)
    probe = chain.stages[0]
    entries = []
    for B in variety.enumerator(k):
        b_key = code_str(canonical_form(B).code)
        for S, pinnedB, key in extension_classes(B, variety):
            A = sublattice(B, S) if S else None
            if A is not None and not variety.is01 and A.consts is not None:
                A = A.without_consts()
            if A is None:
                stage = _earliest_witness_stage(chain, None, B, None, None, horizon, limits)
                entries.append(U1Entry(b_key, 0, (), stage))
                continue
            probe_maps = [e.map for e in embeddings_over(None, A, probe, None, None)]
            for pm in probe_maps:
                if A.n == B.n:
                    # A = B: the probe embedding is already the witness
                    entries.append(U1Entry(key, A.n, pm, 1))
                    continue
                stage = _earliest_witness_stage(
                    chain, A, pinnedB, tuple(range(A.n)), pm, horizon, limits
                )
                entries.append(U1Entry(key, A.n, pm, stage))
    return U1Report(k=k, horizon=horizon, entries=tuple(entries))


@dataclass(frozen=True)
class U2U3Report:
    k: int
    embedded: tuple  # (code, earliest stage or None) per canonical class
    u3_ok: bool
    u3_detail: tuple

    @property
    def missing(self):
        return tuple(code for code, st in self.embedded if st is None)

    @property
    def coverage(self):
        done = sum(1 for _, st in self.embedded if st is not None)
        return done, len(self.embedded)


def check_U2_U3(chain, k=None, limits=None):
    """U2: every canonical lattice of size <= k embeds into some stage.
    U3: every stage revalidates in the chain's signature (plain stages
    are lattices; bounded stages additionally have distinct, correct
    constants and constants-preserving inclusions)."""
    from .lattice import validate_lattice

    limits = limits or BuildLimits()
    k = k or chain.k
    variety = get_variety(chain.variety)
    embedded = []
    for B in variety.enumerator(k):
        stage = _earliest_witness_stage(
            chain, None, B, None, None, len(chain.stages), limits
        )
        embedded.append((code_str(canonical_form(B).code), stage))
    detail = []
    ok = True
    for i, C in enumerate(chain.stages, 1):
        try:
            validate_lattice(C.as_partial())
            if variety.is01:
                ensure_lattice01(C)
            detail.append((i, "ok"))
        except Exception as exc:  # report, never raise: this is a checker
            ok = False
            detail.append((i, str(exc)))
    for i, inc in enumerate(chain.inclusions):
        if not verify_embedding(inc):
            ok = False
            detail.append((i + 1, "inclusion failed"))
    return U2U3Report(k=k, embedded=tuple(embedded), u3_ok=ok, u3_detail=tuple(detail))


# ---------------------------------------------------------------------------
# back-and-forth


def _check_partial_iso(LA, LB, pairs):
    dom = [a for a, _ in pairs]
    rng = [b for _, b in pairs]
    if len(set(dom)) != len(dom) or len(set(rng)) != len(rng):
        return False
    pos = {a: b for a, b in pairs}
    for a1 in dom:
        for a2 in dom:
            j = LA.join[a1][a2]
            m = LA.meet[a1][a2]
            if j not in pos or m not in pos:
                return False
            if LB.join[pos[a1]][pos[a2]] != pos[j]:
                return False
            if LB.meet[pos[a1]][pos[a2]] != pos[m]:
                return False
    return True


@dataclass(frozen=True)
class PartialIso:
    pairs: tuple  # sorted (a, b) pairs

    @property
    def domain(self):
        return tuple(a for a, _ in self.pairs)

    @property
    def range(self):
        return tuple(b for _, b in self.pairs)


def _extend_once(LA, LB, pairs, x, limits):
    """Extend the partial iso to cover x (an element of LA's carrier);
    returns the new pairs or None if no embedding extends it."""
    dom = tuple(a for a, _ in pairs)
    gen = generated_sublattice(LA, dom + (x,))
    S = tuple(sorted(dom))
    A = sublattice(LA, S) if S else None
    G = sublattice(LA, gen)
    posG = {e: i for i, e in enumerate(gen)}
    if A is not None and A.consts is not None and LB.consts is None:
        A = A.without_consts()
    if G.consts is not None and LB.consts is None:
        G = G.without_consts()
    if A is None:
        found = find_embedding(G, LB, node_budget=limits.witness_node_budget)
        g = found
    else:
        eAB = Embedding(A, G, tuple(posG[e] for e in S), "total")
        eAC = Embedding(A, LB, tuple(dict(pairs)[e] for e in S), "total")
        found = embeddings_over(
            A, G, LB, eAB, eAC, limit=1, node_budget=limits.witness_node_budget
        )
        g = found[0] if found else None
    if g is None:
        return None
    new = dict(pairs)
    for i, e in enumerate(gen):
        new[e] = g.map[i]
    return tuple(sorted(new.items()))


def back_and_forth(chainA, chainB, seed, rounds, limits=None):
    """Alternately extend a partial isomorphism between the two chains'
    unions (= their last stages, by the inclusion discipline).

    Each round covers the smallest unmatched id on the A side, then the
    smallest unmatched id on the B side. Raises StagesExhausted carrying
    the progress so far when a step finds no extension within the built
    horizon. The result is re-verified as a partial isomorphism after
    every extension step.
    """
    limits = limits or BuildLimits()
    LA, LB = chainA.last, chainB.last
    pairs = tuple(sorted(tuple(p) for p in seed))
    if not _check_partial_iso(LA, LB, pairs):
        raise VerificationFailure("seed is not a partial isomorphism of sublattices")
    for _ in range(rounds):
        dom = {a for a, _ in pairs}
        x = next((i for i in range(LA.n) if i not in dom), None)
        if x is not None:
            ext = _extend_once(LA, LB, pairs, x, limits)
            if ext is None:
                raise StagesExhausted(
                    f"no extension covering {x} on the A side", progress=PartialIso(pairs)
                )
            pairs = ext
            if not _check_partial_iso(LA, LB, pairs):
                raise VerificationFailure("extension step broke the partial isomorphism")
        rng = {b for _, b in pairs}
        y = next((i for i in range(LB.n) if i not in rng), None)
        if y is not None:
            flipped = tuple(sorted((b, a) for a, b in pairs))
            ext = _extend_once(LB, LA, flipped, y, limits)
            if ext is None:
                raise StagesExhausted(
                    f"no extension covering {y} on the B side", progress=PartialIso(pairs)
                )
            pairs = tuple(sorted((a, b) for b, a in ext))
            if not _check_partial_iso(LA, LB, pairs):
                raise VerificationFailure("extension step broke the partial isomorphism")
    return PartialIso(pairs)


def embed_locally_finite(chain, algs, depth=None, limits=None):
    """One-sided back-and-forth: embed a nested chain A_1 <= A_2 <= ...
    of finite lattices into the built chain, extending stepwise.

    Raises StagesExhausted (carrying the last good embedding) when some
    step cannot be realized within the built horizon.
    """
    limits = limits or BuildLimits()
    depth = depth or len(algs)
    algs = list(algs)[:depth]
    for i in range(len(algs) - 1):
        if not is_literal_sublattice(algs[i], algs[i + 1]):
            raise VerificationFailure(f"A_{i + 1} is not a literal sublattice of A_{i + 2}")
    C = chain.last
    cur = find_embedding(algs[0], C, node_budget=limits.witness_node_budget)
    if cur is None:
        raise StagesExhausted("first algebra does not embed", progress=None)
    for i in range(1, len(algs)):
        eAB = Embedding(algs[i - 1], algs[i], tuple(range(algs[i - 1].n)), cur.mode)
        found = embeddings_over(
            algs[i - 1], algs[i], C, eAB, cur, limit=1, node_budget=limits.witness_node_budget
        )
        if not found:
            raise StagesExhausted(f"no extension to A_{i + 1}", progress=cur)
        cur = found[0]
    return cur

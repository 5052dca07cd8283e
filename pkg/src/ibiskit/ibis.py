"""Irredundant-base analysis: base testing and extension, randomized and
exhaustive search over base lengths, the IBIS decision with witnesses,
minimal-base sizes, witness-chain verification, and the big-integer
parabolic bound for E7.

Two engines back the searches.  Groups whose order fits the element
cap run on the full element table (vectorized stabilizer masks); larger
groups fall back to stabilizer chains.  An IBIS verdict is only ever
produced by a complete enumeration; randomized evidence can certify
NotIBIS (two irredundant bases of different lengths) but never IBIS.

The depth-first enumeration prunes to one representative point per
orbit of the current stabilizer: extending by points in the same orbit
yields conjugate stabilizers, hence identical sets of reachable chain
lengths.  A slow unpruned mode (memoized on the stabilizer subgroup)
exists as the pruning oracle for small degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .perm import ELEMENT_CAP, PermError, orbit

DEFAULT_BUDGET = 2_000_000


class IbisError(ValueError):
    pass


@dataclass(frozen=True)
class BaseReport:
    """A point sequence with its stabilizer-order chain."""

    points: tuple
    stab_orders: tuple

    @property
    def is_irredundant(self):
        return all(a > b for a, b in zip(self.stab_orders, self.stab_orders[1:]))

    @property
    def is_base(self):
        return self.stab_orders[-1] == 1

    def __len__(self):
        return len(self.points)

    def serialize(self):
        return {"points": list(self.points),
                "stab_orders": [str(n) for n in self.stab_orders],
                "is_base": self.is_base, "is_irredundant": self.is_irredundant}


@dataclass(frozen=True)
class IbisVerdict:
    status: str                  # "IBIS" | "NotIBIS" | "Unknown"
    method: str                  # "exhaustive" | "randomized" | "sandwich"
    rank: int | None = None
    witnesses: tuple = ()
    lengths: frozenset = frozenset()
    complete: bool = False
    budget_used: int = 0
    seed: int = 0

    def serialize(self):
        out = {"status": self.status, "method": self.method,
               "budget_used": self.budget_used, "seed": self.seed,
               "lengths": sorted(self.lengths)}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.witnesses:
            out["witnesses"] = [w.serialize() for w in self.witnesses]
        return out


@dataclass
class EnumerationResult:
    lengths: frozenset
    complete: bool
    witnesses: dict
    nodes: int


# -- engines -----------------------------------------------------------------

class _TableEngine:
    """Pointwise stabilizers as row masks over the full element table."""

    def __init__(self, G):
        self.T = G.elements()
        self.degree = G.degree
        self.root = np.arange(len(self.T))

    def stab(self, rows, pt):
        return rows[self.T[rows, pt] == pt]

    def pointwise(self, seq):
        rows = self.root
        orders = [len(rows)]
        for p in seq:
            rows = self.stab(rows, int(p))
            orders.append(len(rows))
        return rows, orders

    def moved_mask(self, rows):
        return (self.T[rows] != np.arange(self.degree)).any(axis=0)

    def orbit_of(self, rows, pt):
        seen = {int(pt)}
        frontier = [int(pt)]
        while frontier:
            new = set(np.unique(self.T[np.ix_(rows, frontier)]).tolist()) - seen
            seen |= new
            frontier = sorted(new)
        return seen


def _engine_for(G):
    try:
        if G.order() <= ELEMENT_CAP:
            return _TableEngine(G)
    except PermError:
        pass
    return None


def chain_orders(G, seq):
    """[|G|, |G_p1|, ...] for the sequence, through the best engine."""
    eng = _engine_for(G)
    if eng is not None:
        return eng.pointwise(seq)[1]
    return G.chain_orders(seq)


def base_report(G, seq):
    seq = tuple(int(p) for p in seq)
    return BaseReport(seq, tuple(chain_orders(G, seq)))


def is_base(G, seq):
    """Pointwise stabilizer trivial (GAP: Size(Stabilizer(G,base,OnTuples))=1)."""
    return chain_orders(G, seq)[-1] == 1


def is_irredundant(G, seq):
    """Each successive stabilizer strictly smaller."""
    orders = chain_orders(G, seq)
    return all(a > b for a, b in zip(orders, orders[1:]))


def extend_to_irredundant_base(G, prefix=()):
    """Extend an irredundant prefix to an irredundant base, appending the
    lowest-index point that strictly shrinks the stabilizer each time."""
    prefix = tuple(int(p) for p in prefix)
    if prefix and not is_irredundant(G, prefix):
        raise IbisError("prefix is not irredundant")
    eng = _engine_for(G)
    points = list(prefix)
    if eng is not None:
        rows, _ = eng.pointwise(points)
        while len(rows) > 1:
            moved = np.nonzero(eng.moved_mask(rows))[0]
            points.append(int(moved[0]))
            rows = eng.stab(rows, int(moved[0]))
    else:
        H = G.pointwise_stabilizer(points) if points else G
        while H.order() > 1:
            moved = min(min(g.moved_points()) for g in H.generators)
            points.append(int(moved))
            H = G.pointwise_stabilizer(points)
    return base_report(G, points)


def find_random_irredundant_base(G, size, budget=1000, seed=0):
    """Seeded random search for an irredundant base of exactly the given
    length; None if the budget runs out (absence is a value).

    Mirrors the random search of the verification scripts: the starting
    point is drawn once, the remaining points fresh per try."""
    if size < 1:
        raise IbisError("size must be >= 1")
    import random as _random
    rng = _random.Random(seed)
    start = rng.randrange(G.degree)
    if size > G.degree:
        return None
    for _ in range(budget):
        pts = [start]
        while len(pts) < size:
            p = rng.randrange(G.degree)
            if p not in pts:
                pts.append(p)
        rep = base_report(G, pts)
        if rep.is_base and rep.is_irredundant:
            return rep
    return None


# -- exhaustive enumeration ----------------------------------------------------

def enumerate_irredundant_base_sizes(G, node_budget=DEFAULT_BUDGET, pruned=True):
    """The set of lengths of all irredundant bases, by depth-first search
    over irredundant extensions.

    pruned=True explores one representative per orbit of the current
    stabilizer (conjugate subtrees realize the same length sets) and
    records the first witness chain found per length; pruned=False is the
    brute-force oracle (all moved points, memoized on the stabilizer).
    Returns EnumerationResult with complete=False when the node budget is
    exhausted.
    """
    if G.degree > 10**4:
        raise IbisError("degree too large for a completeness guarantee")
    eng = _engine_for(G)
    if eng is None:
        return _enumerate_chain_engine(G, node_budget)
    lengths = set()
    witnesses = {}
    nodes = 0
    complete = True

    if pruned:
        def dfs(rows, chain):
            nonlocal nodes, complete
            if len(rows) == 1:
                L = len(chain)
                lengths.add(L)
                witnesses.setdefault(L, tuple(chain))
                return
            moved = np.nonzero(eng.moved_mask(rows))[0]
            seen = set()
            for p in moved:
                p = int(p)
                if p in seen:
                    continue
                seen |= eng.orbit_of(rows, p)
                nodes += 1
                if nodes > node_budget:
                    complete = False
                    return
                chain.append(p)
                dfs(eng.stab(rows, p), chain)
                chain.pop()
        dfs(eng.root, [])
    else:
        memo = {}

        def depths(rows):
            nonlocal nodes, complete
            if len(rows) == 1:
                return frozenset([0])
            key = rows.tobytes()
            if key in memo:
                return memo[key]
            out = set()
            moved = np.nonzero(eng.moved_mask(rows))[0]
            for p in moved:
                nodes += 1
                if nodes > node_budget:
                    complete = False
                    break
                out |= {d + 1 for d in depths(eng.stab(rows, int(p)))}
            memo[key] = frozenset(out)
            return memo[key]

        lengths = set(depths(eng.root))
    return EnumerationResult(frozenset(lengths), complete, witnesses, nodes)


def _enumerate_chain_engine(G, node_budget):
    """Pruned DFS with stabilizer-chain subgroups (large-order fallback)."""
    lengths = set()
    witnesses = {}
    nodes = 0
    complete = True

    def dfs(H, chain):
        nonlocal nodes, complete
        if H.order() == 1:
            lengths.add(len(chain))
            witnesses.setdefault(len(chain), tuple(chain))
            return
        moved = sorted({int(p) for g in H.generators for p in g.moved_points()})
        seen = set()
        for p in moved:
            if p in seen:
                continue
            seen |= set(orbit(H, p).points)
            nodes += 1
            if nodes > node_budget:
                complete = False
                return
            chain.append(p)
            dfs(G.pointwise_stabilizer(tuple(chain)), chain)
            chain.pop()

    dfs(G, [])
    return EnumerationResult(frozenset(lengths), complete, witnesses, nodes)


def minimal_base_sizes(G, node_budget=DEFAULT_BUDGET):
    """Sizes of minimal bases (bases no proper subset of which is a base).

    Ascending-set DFS over *independent* sets: a set is independent when
    deleting any member changes its pointwise stabilizer.  A point made
    redundant once stays redundant in every superset, so only independent
    sets extend to minimal bases, and an independent base is itself
    minimal.  Conjugation preserves minimality, so the least point of the
    set may be restricted to orbit minima.
    """
    if G.degree > 10**3:
        raise IbisError("degree too large for minimal-base completeness")
    eng = _engine_for(G)
    if eng is None:
        raise IbisError("minimal_base_sizes needs the element-table engine")
    sizes = set()
    nodes = 0
    complete = True

    def independent_with(points, rows_with_p):
        """All earlier members still matter after the newest point joined."""
        n = len(rows_with_p)
        for i in range(len(points) - 1):
            rest = points[:i] + points[i + 1:]
            if eng.pointwise(rest)[0].shape[0] == n:
                return False
        return True

    def dfs(rows, points, startpt):
        nonlocal nodes, complete
        if len(rows) == 1:
            sizes.add(len(points))
            return
        for p in range(startpt, G.degree):
            sub = eng.stab(rows, p)
            if len(sub) == len(rows):
                continue
            nodes += 1
            if nodes > node_budget:
                complete = False
                return
            cand = points + (p,)
            if independent_with(cand, sub):
                dfs(sub, cand, p + 1)

    first_points = [ob[0] for ob in G.orbits()] if G.degree else []
    for p0 in first_points:
        sub = eng.stab(eng.root, p0)
        if len(sub) < len(eng.root):
            nodes += 1
            dfs(sub, (p0,), p0 + 1)
    if G.order() == 1:
        sizes = {0}
    return EnumerationResult(frozenset(sizes), complete, {}, nodes)


# -- the IBIS decision -----------------------------------------------------------

def decide_ibis(G, budget=DEFAULT_BUDGET, seed=0):
    """NotIBIS as soon as two irredundant bases of distinct lengths are
    certified (randomized phase first); IBIS only from a complete
    enumeration; Unknown otherwise.  Deterministic given (budget, seed)."""
    if G.order() == 1:
        return IbisVerdict("IBIS", "exhaustive", rank=0, lengths=frozenset([0]),
                           complete=True, seed=seed)
    greedy = extend_to_irredundant_base(G)
    L0 = len(greedy)
    tries = min(60, max(10, budget // 10000))
    for size in (L0 - 1, L0 + 1, L0 + 2):
        if size < 1 or size > G.degree:
            continue
        other = find_random_irredundant_base(G, size, budget=tries, seed=seed)
        if other is not None:
            wits = tuple(sorted((greedy, other), key=len))
            return IbisVerdict("NotIBIS", "randomized",
                               lengths=frozenset({L0, len(other)}),
                               witnesses=wits, budget_used=tries, seed=seed)
    enum = enumerate_irredundant_base_sizes(G, node_budget=budget)
    wits = tuple(base_report(G, enum.witnesses[L])
                 for L in sorted(enum.witnesses))
    if len(enum.lengths) >= 2:
        pair = tuple(base_report(G, enum.witnesses[L])
                     for L in (min(enum.lengths), max(enum.lengths)))
        return IbisVerdict("NotIBIS", "exhaustive", lengths=enum.lengths,
                           witnesses=pair, complete=enum.complete,
                           budget_used=enum.nodes, seed=seed)
    if enum.complete:
        rank = min(enum.lengths)
        return IbisVerdict("IBIS", "exhaustive", rank=rank, lengths=enum.lengths,
                           witnesses=wits, complete=True,
                           budget_used=enum.nodes, seed=seed)
    return IbisVerdict("Unknown", "exhaustive", lengths=enum.lengths,
                       complete=False, budget_used=enum.nodes, seed=seed)


def same_pointwise_stabilizer(G, seq_a, seq_b):
    """Equality of the two pointwise stabilizers as subgroups (orders
    compared, then generators sifted across)."""
    eng = _engine_for(G)
    if eng is not None:
        rows_a, _ = eng.pointwise(seq_a)
        rows_b, _ = eng.pointwise(seq_b)
        return np.array_equal(rows_a, rows_b)
    A = G.pointwise_stabilizer(tuple(seq_a))
    B = G.pointwise_stabilizer(tuple(seq_b))
    if A.order() != B.order():
        return False
    return all(B.is_member(g) for g in A.generators)


def verify_witness_chain(G, chain_a, chain_b):
    """True iff both chains are irredundant and reach the same pointwise
    stabilizer."""
    if not (is_irredundant(G, chain_a) and is_irredundant(G, chain_b)):
        return False
    return same_pointwise_stabilizer(G, chain_a, chain_b)


# -- E7 parabolic arithmetic -------------------------------------------------------

def _e7_simple_order(q):
    d = math.gcd(2, q - 1)
    n = q**63
    for i in (18, 14, 12, 10, 8, 6, 2):
        n *= q**i - 1
    return n // d


def e7_bound_check(q):
    """Degree, suborbit size n2 and point-stabilizer order for E7(q) on the
    cosets of the parabolic P7, each evaluated by two independent
    routes, plus the least l with n2^(l-1) > |P7| (always >= 7).

    Only integer formulas are evaluated; no group is built.
    """
    if q > 16:
        raise IbisError("q <= 16 for the desk-scale arithmetic check")
    d = math.gcd(2, q - 1)
    degree = (q**14 - 1) * (q**9 + 1) * (q**5 + 1) // (q - 1)
    n2 = q * (q**9 - 1) * (q**8 + q**4 + 1) // (q - 1)
    n2_alt = q * sum(q**i for i in range(9)) * (q**4 + q**2 + 1) * (q**4 - q**2 + 1)
    p7 = (q**63 * (q**9 - 1) * (q**12 - 1) * (q**5 - 1) * (q**8 - 1)
          * (q**6 - 1) * (q**2 - 1) * (q - 1)) // d
    order = _e7_simple_order(q)
    if order % degree or order // degree != p7 or n2 != n2_alt:
        raise IbisError("E7 cross-evaluation mismatch")
    ell = 1
    while n2 ** (ell - 1) <= p7:
        ell += 1
    if ell < 7:
        raise IbisError("E7 bound contract violated")
    return degree, n2, ell

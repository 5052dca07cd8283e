"""Permutations, orbits and stabilizer chains.

Permutations act on the right: (p * q) first applies p, then q, so
point images compose as q.images[p.images[i]].

PermGroup keeps a base and strong generating set built by a
deterministic Schreier-Sims pass.  A seeded random "rattle" warm-up
shortens construction, but the chain is always finished by a
deterministic closure in which every Schreier generator sifts to the
identity, so the resulting order and membership tests are certified,
not Monte Carlo.  Orders are exact big integers.

Small groups (order up to ELEMENT_CAP) can additionally materialize the
full element table as a numpy matrix; the backtracking searches in the
ibis module run on that representation.
"""

from __future__ import annotations

import random

import numpy as np

DEGREE_CAP = 10**6
ORDER_BITS_CAP = 512
ELEMENT_CAP = 200_000


class PermError(ValueError):
    pass


class Permutation:
    """An immutable permutation of [0, N) stored as an image array."""

    __slots__ = ("images", "_bytes")

    def __init__(self, images, _trusted=False):
        arr = np.asarray(images, dtype=np.int32)
        if not _trusted:
            if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(len(arr))):
                raise PermError("images are not a bijection on [0, N)")
            arr = arr.copy()
        arr.setflags(write=False)
        self.images = arr
        self._bytes = arr.tobytes()

    @classmethod
    def identity(cls, n):
        return cls(np.arange(n, dtype=np.int32), _trusted=True)

    @property
    def degree(self):
        return len(self.images)

    def __mul__(self, other):
        if other.degree != self.degree:
            raise PermError("degree mismatch")
        return Permutation(other.images[self.images], _trusted=True)

    def inverse(self):
        inv = np.empty(self.degree, dtype=np.int32)
        inv[self.images] = np.arange(self.degree, dtype=np.int32)
        return Permutation(inv, _trusted=True)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = Permutation.identity(self.degree)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __getitem__(self, pt):
        return int(self.images[pt])

    def is_identity(self):
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def moved_points(self):
        return np.nonzero(self.images != np.arange(self.degree))[0]

    def cycles(self):
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            c = [i]
            j = int(self.images[i])
            while j != i:
                seen.add(j)
                c.append(j)
                j = int(self.images[j])
            out.append(tuple(c))
        return out

    def serialize(self):
        return [int(x) for x in self.images]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._bytes == other._bytes

    def __hash__(self):
        return hash(self._bytes)

    def __repr__(self):
        cyc = self.cycles()
        return "Perm(id)" if not cyc else "Perm" + "".join(str(c) for c in cyc)


class Orbit:
    """An orbit with Schreier transversal reps and recoverable words."""

    def __init__(self, points, reps, words):
        self.points = points    # sorted list of ints
        self.reps = reps        # point -> Permutation mapping start to point
        self.words = words      # point -> tuple of generator indices

    def __contains__(self, pt):
        return pt in self.reps

    def __len__(self):
        return len(self.points)


def orbit(G, pt):
    """Orbit of a point under the group, with a Schreier vector."""
    if pt >= G.degree:
        raise PermError("point out of range")
    gens = [g.images for g in G.generators]
    reps = {pt: Permutation.identity(G.degree)}
    words = {pt: ()}
    queue = [pt]
    while queue:
        p = queue.pop(0)
        u = reps[p]
        for gi, g in enumerate(gens):
            r = int(g[p])
            if r not in reps:
                reps[r] = Permutation(g[u.images], _trusted=True)
                words[r] = words[p] + (gi,)
                queue.append(r)
    return Orbit(sorted(reps), reps, words)


# -- stabilizer chain --------------------------------------------------------

class _Level:
    __slots__ = ("beta", "gens", "transversal", "inv_transversal")

    def __init__(self, beta):
        self.beta = beta
        self.gens = []            # raw int32 image arrays
        self.transversal = {}     # point -> raw array u with u[beta] = point
        self.inv_transversal = {} # point -> inverse of transversal[point]

    def rebuild(self, degree):
        ident = np.arange(degree, dtype=np.int32)
        self.transversal = {self.beta: ident}
        self.inv_transversal = {self.beta: ident}
        queue = [self.beta]
        while queue:
            p = queue.pop(0)
            u = self.transversal[p]
            for g in self.gens:
                r = int(g[p])
                if r not in self.transversal:
                    w = g[u]
                    self.transversal[r] = w
                    inv = np.empty(degree, dtype=np.int32)
                    inv[w] = ident
                    self.inv_transversal[r] = inv
                    queue.append(r)


class _Chain:
    """A base and strong generating set with verified Schreier closure."""

    def __init__(self, degree, gens, base_prefix=(), known_order=None, rattle=50):
        self.degree = degree
        self.levels = []
        for b in base_prefix:
            self.levels.append(_Level(int(b)))
            self.levels[-1].rebuild(degree)
        self._target = known_order
        arrays = [np.asarray(g.images, dtype=np.int32) for g in gens]
        for a in arrays:
            self._insert(a, 0)
        if rattle and arrays and not self._target_reached():
            self._rattle(arrays, rattle)
        if not self._target_reached():
            self._close(0)

    # orders -----------------------------------------------------------------

    def order(self):
        n = 1
        for lvl in self.levels:
            n *= len(lvl.transversal)
        return n

    def _target_reached(self):
        # Product of orbit lengths never exceeds the true order, so hitting
        # a known order certifies completeness without the closure pass.
        return self._target is not None and self.order() == self._target

    def suffix_orders(self):
        """Order of the stabilizer of the first k base points, k = 0..len."""
        out = [1]
        for lvl in reversed(self.levels):
            out.append(out[-1] * len(lvl.transversal))
        return out[::-1]

    def base(self):
        return [lvl.beta for lvl in self.levels]

    # construction -----------------------------------------------------------

    def _sift_raw(self, a, start=0):
        for idx in range(start, len(self.levels)):
            lvl = self.levels[idx]
            p = int(a[lvl.beta])
            if p == lvl.beta:
                continue
            inv = lvl.inv_transversal.get(p)
            if inv is None:
                return a, idx
            a = inv[a]
        return a, len(self.levels)

    def _insert(self, a, from_level):
        """Sift a; if a residue survives, install it at the failing level."""
        ident = np.arange(self.degree, dtype=np.int32)
        r, lev = self._sift_raw(a, from_level)
        if np.array_equal(r, ident):
            return False
        if lev == len(self.levels):
            moved = np.nonzero(r != ident)[0]
            self.levels.append(_Level(int(moved[0])))
        # the residue fixes every base point above lev, so it is a valid
        # strong generator for every level in (from_level, lev]
        for j in range(from_level, lev + 1):
            if j < len(self.levels):
                self.levels[j].gens.append(r)
                self.levels[j].rebuild(self.degree)
        return True

    def _rattle(self, arrays, count):
        """Seeded random products sifted in before deterministic closure."""
        rng = random.Random(0xB5E5 + self.degree + len(arrays))
        pool = list(arrays)
        for _ in range(count):
            a = pool[rng.randrange(len(pool))]
            b = pool[rng.randrange(len(pool))]
            c = b[a]
            pool.append(c)
            self._insert(c, 0)
            if self._target_reached():
                return

    def _close(self, i):
        """Deterministic Schreier closure: on return every Schreier
        generator at every level >= i sifts to the identity."""
        if i >= len(self.levels):
            return
        ident = np.arange(self.degree, dtype=np.int32)
        while True:
            lvl = self.levels[i]
            changed = False
            seen = set()
            for p in sorted(lvl.transversal):
                u = lvl.transversal[p]
                for g in lvl.gens:
                    w = g[u]                       # u * g
                    inv = lvl.inv_transversal[int(w[lvl.beta])]
                    s = inv[w]                     # Schreier generator
                    key = s.tobytes()
                    if key in seen:
                        continue
                    seen.add(key)
                    if np.array_equal(s, ident):
                        continue
                    if self._insert(s, i + 1):
                        self._close(i + 1)
                        changed = True
                        if self._target_reached():
                            return
            if not changed:
                if i + 1 < len(self.levels):
                    self._close(i + 1)
                return

    # queries ------------------------------------------------------------------

    def sifts_to_identity(self, perm):
        r, _ = self._sift_raw(np.asarray(perm.images, dtype=np.int32))
        return bool(np.array_equal(r, np.arange(self.degree)))

    def strong_generators(self):
        seen = {}
        for lvl in self.levels:
            for g in lvl.gens:
                seen[g.tobytes()] = g
        return [Permutation(g, _trusted=True) for g in seen.values()]

    def level_generators(self, k):
        """Generators of the stabilizer of the first k base points."""
        seen = {}
        for lvl in self.levels[k:]:
            for g in lvl.gens:
                seen[g.tobytes()] = g
        return [Permutation(g, _trusted=True) for g in seen.values()]


class PermGroup:
    """A permutation group given by generators, with lazy certified BSGS."""

    def __init__(self, degree, generators, name=None):
        if degree > DEGREE_CAP:
            raise PermError(f"degree {degree} exceeds cap")
        self.degree = degree
        gens = []
        seen = set()
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise PermError("generator degree mismatch")
            if not g.is_identity() and g._bytes not in seen:
                seen.add(g._bytes)
                gens.append(g)
        self.generators = gens
        self.name = name
        self._chain = None
        self._chain_cache = {}
        self._elements = None

    # -- chains ---------------------------------------------------------------

    def chain(self, base_prefix=(), known_order=None):
        key = tuple(base_prefix)
        if key == () and self._chain is not None:
            return self._chain
        if key in self._chain_cache:
            return self._chain_cache[key]
        ch = _Chain(self.degree, self.generators, base_prefix=key,
                    known_order=known_order)
        if ch.order().bit_length() > ORDER_BITS_CAP:
            raise PermError("order exceeds the 2^512 cap")
        if key == ():
            self._chain = ch
        if len(self._chain_cache) > 32:
            self._chain_cache.clear()
        self._chain_cache[key] = ch
        return ch

    def order(self):
        if self._elements is not None:
            return len(self._elements)
        known = self._known_order if hasattr(self, "_known_order") else None
        return self.chain(known_order=known).order()

    def is_trivial(self):
        return not self.generators

    def is_member(self, g):
        if g.degree != self.degree:
            raise PermError("degree mismatch")
        return self.chain().sifts_to_identity(g)

    def base(self):
        return self.chain().base()

    def strong_generators(self):
        return self.chain().strong_generators()

    def orbits(self):
        """All orbits, as sorted lists of points."""
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for p in range(self.degree):
            if not seen[p]:
                ob = orbit(self, p)
                out.append(ob.points)
                seen[ob.points] = True
        return out

    def stabilizer(self, pt):
        return self.pointwise_stabilizer((pt,))

    def pointwise_stabilizer(self, points):
        """The exact pointwise stabilizer, via a chain based at the points."""
        pts = tuple(int(p) for p in points)
        for p in pts:
            if not 0 <= p < self.degree:
                raise PermError("point out of range")
        ch = self.chain(base_prefix=pts)
        sub = PermGroup(self.degree, ch.level_generators(len(pts)))
        sub._known_order = ch.suffix_orders()[len(pts)]
        return sub

    def chain_orders(self, points):
        """[|G|, |G_p1|, |G_p1,p2|, ...] along the given point sequence."""
        pts = tuple(int(p) for p in points)
        ch = self.chain(base_prefix=pts)
        return ch.suffix_orders()[: len(pts) + 1]

    # -- element table ----------------------------------------------------------

    def elements(self, cap=ELEMENT_CAP):
        """The full element table as an (order, degree) int32 matrix.

        Deterministic row order: breadth-first closure from the identity,
        then lexicographic sort.
        """
        if self._elements is not None:
            return self._elements
        n = self.order()
        if n > cap:
            raise PermError(f"group order {n} exceeds element-table cap {cap}")
        ident = np.arange(self.degree, dtype=np.int32)
        rows = [ident]
        seen = {ident.tobytes()}
        frontier = np.array([ident])
        gens = [g.images for g in self.generators]
        while len(frontier):
            new = []
            for g in gens:
                prods = g[frontier]
                for row in prods:
                    key = row.tobytes()
                    if key not in seen:
                        seen.add(key)
                        new.append(row)
            frontier = np.array(new) if new else np.zeros((0, self.degree), np.int32)
            rows.extend(new)
        table = np.array(rows, dtype=np.int32)
        table = table[np.lexsort(table.T[::-1])]
        assert len(table) == n, "element closure disagrees with BSGS order"
        table.setflags(write=False)
        self._elements = table
        return table

    def random_element(self, rng):
        """A uniform random element drawn through the stabilizer chain.

        Every element factors uniquely as u_k * ... * u_0 with u_i in the
        level-i transversal, deepest level applied first.
        """
        ch = self.chain()
        g = np.arange(self.degree, dtype=np.int32)
        for lvl in reversed(ch.levels):
            pts = sorted(lvl.transversal)
            u = lvl.transversal[pts[rng.randrange(len(pts))]]
            g = u[g]
        return Permutation(g, _trusted=True)

    def conjugate_subgroup_member(self, g, h):
        return h.inverse() * g * h

    def serialize(self):
        return {
            "degree": self.degree,
            "generators": [g.serialize() for g in self.generators],
            "order": str(self.order()),
            "base": self.base(),
        }

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"{label}(degree={self.degree}, gens={len(self.generators)})"


def schreier_sims(G):
    """Force construction of the verified BSGS; returns the group."""
    G.chain()
    return G


def is_member(g, G):
    return G.is_member(g)


def order(G):
    return G.order()


def stabilizer(G, pt):
    return G.stabilizer(pt)


def pointwise_stabilizer(G, points):
    return G.pointwise_stabilizer(points)


def derived_subgroup(G):
    """The derived subgroup: normal closure of generator commutators."""
    if G.degree > 10**4:
        raise PermError("derived subgroup degree budget exceeded")
    gens = G.generators
    comms = []
    for a in gens:
        for b in gens:
            c = a.inverse() * b.inverse() * a * b
            if not c.is_identity():
                comms.append(c)
    sub = PermGroup(G.degree, comms)
    # close under conjugation by the generators of G until stable
    while True:
        new = []
        for s in sub.generators:
            for g in gens:
                t = g.inverse() * s * g
                if not sub.is_member(t):
                    new.append(t)
        if not new:
            break
        sub = PermGroup(G.degree, sub.generators + new)
    return sub

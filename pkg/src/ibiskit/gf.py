"""Exact arithmetic in GF(p^f).

Elements are stored as integer codes in [0, q): the polynomial residue
c_0 + c_1 x + ... + c_{f-1} x^{f-1} is packed base-p as
code = c_0 + c_1 p + ... + c_{f-1} p^{f-1}.  The same encoding is the
wire format for serialization.

The modulus is the monic irreducible polynomial of degree f over GF(p)
with the least integer encoding (irreducibility certified by trial
division), so field construction is reproducible across runs.  Fields of
size up to 2**16 get log/exp tables for multiplication; larger fields
(allowed up to the 2**20 desk cap) fall back to polynomial arithmetic.
"""

from __future__ import annotations

import functools

import numpy as np

SIZE_CAP = 2**20
TABLE_CAP = 2**16


class GFError(ValueError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over GF(p), coefficient tuples c_0..c_deg --------

def _poly_trim(c):
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m, over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1]
        if lead:
            for i in range(dm + 1):
                a[len(a) - 1 - dm + i] = (a[len(a) - 1 - dm + i] - lead * m[i]) % p
        a.pop()
    return _poly_trim(a)


def _poly_mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, m, p)


def _monic_polys(deg, p):
    for low in range(p**deg):
        c, rest = [], low
        for _ in range(deg):
            c.append(rest % p)
            rest //= p
        yield tuple(c) + (1,)


def _is_irreducible(m, p):
    """Trial division against every monic polynomial of degree <= f/2."""
    f = len(m) - 1
    if f == 1:
        return True
    for deg in range(1, f // 2 + 1):
        for d in _monic_polys(deg, p):
            # long division: m mod d
            r = list(m)
            while len(r) >= len(d):
                lead = r[-1]
                if lead:
                    for i in range(len(d)):
                        r[len(r) - len(d) + i] = (r[len(r) - len(d) + i] - lead * d[i]) % p
                r.pop()
            if not _poly_trim(r):
                return False
    return True


class FiniteField:
    """GF(p^f) with a fixed modulus and multiplicative generator.

    Immutable after construction; safe to share between workers.
    """

    def __init__(self, p, f):
        if not _is_prime(p):
            raise GFError(f"p={p} is not prime")
        if f < 1:
            raise GFError(f"f={f} must be >= 1")
        if p**f > SIZE_CAP:
            raise GFError(f"field size {p}^{f} exceeds cap {SIZE_CAP}")
        self.p = p
        self.f = f
        self.q = p**f

        self.modulus = self._least_irreducible()
        self._build_tables()
        self.generator_code = self._find_generator()
        self._embeddings = {}

    # -- construction ----------------------------------------------------

    def _least_irreducible(self):
        for m in _monic_polys(self.f, self.p):
            if _is_irreducible(m, self.p):
                return m
        raise GFError("no irreducible modulus found")  # unreachable

    def _code_to_poly(self, code):
        c, rest = [], int(code)
        for _ in range(self.f):
            c.append(rest % self.p)
            rest //= self.p
        return _poly_trim(c)

    def _poly_to_code(self, poly):
        code = 0
        for c in reversed(poly):
            code = code * self.p + c
        return code

    def _mul_code(self, a, b):
        return self._poly_to_code(
            _poly_mulmod(self._code_to_poly(a), self._code_to_poly(b), self.modulus, self.p))

    def _build_tables(self):
        p, q = self.p, self.q
        if q > TABLE_CAP:
            self._exp = self._log = None
        else:
            self._exp = np.zeros(2 * (q - 1), dtype=np.int64)
            self._log = np.zeros(q, dtype=np.int64)
        if p > 2 and q <= 1024:
            a = np.arange(q)
            digits_a = []
            rest = a.copy()
            for _ in range(self.f):
                digits_a.append(rest % p)
                rest //= p
            add = np.zeros((q, q), dtype=np.int64)
            for b in range(q):
                db, rest = [], b
                for _ in range(self.f):
                    db.append(rest % p)
                    rest //= p
                acc = np.zeros(q, dtype=np.int64)
                for i in reversed(range(self.f)):
                    acc = acc * p + (digits_a[i] + db[i]) % p
                add[:, b] = acc
            self._add_table = add
        else:
            self._add_table = None
        # frobenius tables built lazily after the generator is known
        self._frob_tables = None

    def _find_generator(self):
        q = self.q
        rs = _prime_factors(q - 1)
        for g in range(1, q):
            if all(self._pow_code(g, (q - 1) // r) != 1 for r in rs):
                gen = g
                break
        else:
            raise GFError("no generator found")  # unreachable
        if self._exp is not None:
            x = 1
            for k in range(q - 1):
                self._exp[k] = x
                self._log[x] = k
                x = self._mul_code(x, gen)
            assert x == 1, "generator order certification failed"
            self._exp[q - 1:] = self._exp[: q - 1]
        return gen

    def _pow_code(self, a, e):
        r, b = 1, a
        while e:
            if e & 1:
                r = self._mul_code(r, b)
            b = self._mul_code(b, b)
            e >>= 1
        return r

    # -- vectorized arithmetic on integer-code arrays ---------------------

    def add(self, a, b):
        a = np.asarray(a)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add_table is not None:
            return self._add_table[a, b]
        p = self.p
        out = np.zeros_like(a + b)
        ra, rb, mult = a.copy(), np.asarray(b).copy(), 1
        for _ in range(self.f):
            out = out + mult * ((ra + rb) % p)
            ra, rb, mult = ra // p, rb // p, mult * p
        return out

    def neg(self, a):
        a = np.asarray(a)
        if self.p == 2:
            return a
        p = self.p
        out = np.zeros_like(a)
        ra, mult = a.copy(), 1
        for _ in range(self.f):
            out = out + mult * ((-ra) % p)
            ra, mult = ra // p, mult * p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self._exp is not None:
            out = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        flat = np.broadcast(a, b)
        out = np.fromiter((self._mul_code(x, y) for x, y in flat), dtype=np.int64,
                          count=flat.size)
        return out.reshape(np.broadcast_shapes(a.shape, b.shape))

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("division by zero in GF")
        if self._exp is not None:
            return self._exp[(self.q - 1) - self._log[a]]
        return self.power(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e):
        a = np.asarray(a)
        r = np.ones_like(a)
        b = a.copy()
        e = int(e)
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def frob(self, a, k=1):
        """x -> x^(p^k), vectorized; k is reduced mod f."""
        k %= self.f
        if self._frob_tables is None:
            tabs = []
            base = np.arange(self.q)
            t = base
            for _ in range(self.f):
                tabs.append(t)
                t = self.power(t, self.p)
            self._frob_tables = tabs
        return self._frob_tables[k][np.asarray(a)]

    # -- element-level API -------------------------------------------------

    def element(self, code):
        return FieldElement(self, int(code) % self.q)

    def zero(self):
        return self.element(0)

    def one(self):
        return self.element(1)

    def gen(self):
        return self.element(self.generator_code)

    def elements(self):
        return [self.element(c) for c in range(self.q)]

    def from_subfield_root(self, sub):
        """Embedding GF(p^k) -> self via the least root of sub's modulus.

        Returns the array mapping sub codes to codes in this field; cached.
        """
        key = (sub.p, sub.f)
        if key in self._embeddings:
            return self._embeddings[key]
        if sub.p != self.p or self.f % sub.f != 0:
            raise GFError("not a subfield")
        for r in range(self.q):
            # evaluate sub.modulus at r inside self
            acc = 0
            for c in reversed(sub.modulus):
                acc = int(self.add(self.mul(acc, r), c % self.p))
            if acc == 0:
                root = r
                break
        else:
            raise GFError("no root of subfield modulus found")  # unreachable
        emb = np.zeros(sub.q, dtype=np.int64)
        for code in range(sub.q):
            acc = 0
            for c in reversed(sub._code_to_poly(code)):
                acc = int(self.add(self.mul(acc, root), c))
            emb[code] = acc
        self._embeddings[key] = emb
        return emb

    def describe(self):
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}

    def __repr__(self):
        return f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash((self.p, self.f))


class FieldElement:
    """An element of a FiniteField, by integer code.  Immutable."""

    __slots__ = ("field", "code")

    def __init__(self, field, code):
        self.field = field
        self.code = int(code)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise GFError(f"cannot combine field element with {type(other).__name__}")
        if other.field != self.field:
            raise GFError("elements of different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.add(self.code, other.code)))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.sub(self.code, other.code)))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.mul(self.code, other.code)))

    def __truediv__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.div(self.code, other.code)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.code)))

    def __pow__(self, e):
        if e < 0:
            return FieldElement(self.field, int(self.field.inv(self.code))) ** (-e)
        return FieldElement(self.field, int(self.field.power(np.asarray(self.code), e)))

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.field == other.field and self.code == other.code)

    def __hash__(self):
        return hash((self.field.p, self.field.f, self.code))

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.field!r}:{self.code}"


@functools.lru_cache(maxsize=None)
def make_field(p, f):
    """Construct GF(p^f) with the deterministic modulus and generator."""
    return FiniteField(p, f)


def field_of_order(q):
    """GF(q) for a prime power q."""
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            f = 0
            n = q
            while n > 1:
                if n % p:
                    raise GFError(f"{q} is not a prime power")
                n //= p
                f += 1
            return make_field(p, f)
    raise GFError(f"{q} is not a prime power")


def arith(x, y, kind):
    """Dispatch form of element arithmetic: kind in {add, sub, mul, div}."""
    ops = {"add": x.__add__, "sub": x.__sub__, "mul": x.__mul__, "div": x.__truediv__}
    if kind not in ops:
        raise GFError(f"unknown arithmetic kind {kind!r}")
    return ops[kind](y)


def frobenius(x, k):
    """x -> x^(p^k); frobenius(x, f) == x."""
    return FieldElement(x.field, int(x.field.frob(x.code, k)))


def trace(x, subfield_index=1):
    """Trace of GF(p^f) onto GF(p^subfield_index): sum of Galois conjugates.

    The result is returned inside the big field (it lies in the image of
    the subfield).
    """
    F = x.field
    if F.f % subfield_index != 0:
        raise GFError(f"{subfield_index} does not divide f={F.f}")
    acc = F.zero()
    for i in range(F.f // subfield_index):
        acc = acc + frobenius(x, subfield_index * i)
    return acc


def trace_bit(field, code):
    """Absolute trace GF(p^f) -> GF(p) of a code, as a small int."""
    acc = 0
    for i in range(field.f):
        acc = int(field.add(acc, field.frob(code, i)))
    return acc


def sqrt_char2(x):
    """The unique square root in characteristic 2: inverse of Frobenius."""
    F = x.field
    if F.p != 2:
        raise GFError("sqrt_char2 requires characteristic 2")
    return frobenius(x, F.f - 1)


def find_special_alpha(q):
    """An alpha in GF(q^2) with alpha + alpha^q + 1 = 0 whose Galois orbit
    under Aut(GF(q^2)) has full size 2f, q = p^f.

    The solution set of the trace equation has exactly q elements; a full
    orbit always exists among them.  Returns the least such alpha by code.
    """
    F = field_of_order(q)
    p, f = F.p, F.f
    E = make_field(p, 2 * f)
    sols = []
    for code in range(E.q):
        if int(E.add(E.add(code, E.frob(code, f)), 1)) == 0:
            sols.append(code)
    assert len(sols) == q, "trace-equation solution count must be q"
    for code in sols:
        orbit = {code}
        c = code
        for _ in range(2 * f - 1):
            c = int(E.frob(c, 1))
            orbit.add(c)
        if len(orbit) == 2 * f:
            alpha = E.element(code)
            assert int(E.add(E.add(alpha.code, E.frob(alpha.code, f)), 1)) == 0
            return alpha
    raise GFError(f"no full-orbit solution for q={q}")  # not reachable per theory

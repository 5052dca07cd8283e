"""Generator sets for the classical matrix groups over small finite
fields, together with the outer elements (diagonal, field, duality) used
to extend them.

Construction strategy: Chevalley-style root elements (transvections and
their short-root companions) relative to the standard forms of linalg,
with every generator checked against the form on construction and the
generated group certified downstream by comparing the order of the
induced permutation group on nonzero vectors with the textbook order
formula.  Orthogonal groups in characteristic 2 are generated directly
as products of pairs of reflections (Dickson kernel), certified the same
way, which avoids spinor-norm membership tests entirely.

Projective groups are never formed as abstract quotients: scalars act
trivially on every subspace domain, so inducing the matrix group on the
domain realizes the projective action.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import gf, linalg
from .linalg import (
    canonicalize, complement_dual, hermitian_form, inverse, mat_mul,
    quadratic_minus, quadratic_plus, symplectic_form,
)
from .perm import PermGroup, Permutation, derived_subgroup


class GroupError(ValueError):
    pass


FAMILIES = ("GL", "SL", "Sp", "GU", "SU", "GOplus", "GOminus",
            "SOplus", "SOminus", "OmegaPlus", "OmegaMinus")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    d: int
    q: int
    extensions: tuple = ()
    derived: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GroupError(f"unknown family {self.family!r}")
        if self.family in ("Sp", "GOplus", "GOminus", "SOplus", "SOminus",
                           "OmegaPlus", "OmegaMinus") and self.d % 2:
            raise GroupError(f"{self.family} needs even dimension")
        object.__setattr__(self, "extensions", tuple(self.extensions))

    @property
    def is_unitary(self):
        return self.family in ("GU", "SU")

    def matrix_field(self):
        """The field the matrices live over: GF(q^2) for unitary."""
        F = gf.field_of_order(self.q)
        if self.is_unitary:
            return gf.make_field(F.p, 2 * F.f)
        return F

    def serialize(self):
        return {"family": self.family, "d": self.d, "q": self.q,
                "extensions": list(self.extensions), "derived": self.derived}

    @classmethod
    def deserialize(cls, data):
        return cls(data["family"], data["d"], data["q"],
                   tuple(data.get("extensions", ())), data.get("derived", False))


class SemilinearElement:
    """matrix * frobenius^k, optionally followed by the duality polarity.

    Vectors act on the right: v -> frob(v, k) . M.  The duality flag is
    only meaningful on subspace domains, where it applies the standard
    annihilator after the semilinear part.
    """

    __slots__ = ("field", "matrix", "frob_power", "dual", "_key")

    def __init__(self, field, matrix, frob_power=0, dual=False, _trusted=False):
        matrix = np.asarray(matrix, dtype=np.int64)
        if not _trusted:
            inverse(field, matrix)  # raises if singular
        self.field = field
        self.matrix = matrix
        self.frob_power = frob_power % field.f
        self.dual = bool(dual)
        self._key = (matrix.tobytes(), self.frob_power, self.dual)

    @classmethod
    def from_matrix(cls, field, matrix):
        return cls(field, matrix)

    @property
    def d(self):
        return self.matrix.shape[0]

    def is_identity(self):
        return (self.frob_power == 0 and not self.dual
                and np.array_equal(self.matrix, linalg.identity(self.field, self.d)))

    def __mul__(self, other):
        if self.field != other.field:
            raise GroupError("fields differ")
        F = self.field
        right = other.matrix if not self.dual else inverse(F, other.matrix).T
        m3 = mat_mul(F, F.frob(self.matrix, other.frob_power), right)
        return SemilinearElement(F, m3, self.frob_power + other.frob_power,
                                 self.dual ^ other.dual, _trusted=True)

    def inverse_element(self):
        F = self.field
        m = F.frob(self.matrix, -self.frob_power % F.f)
        if not self.dual:
            return SemilinearElement(F, inverse(F, m), -self.frob_power, False,
                                     _trusted=True)
        return SemilinearElement(F, m.T, -self.frob_power, True, _trusted=True)

    def act_vectors(self, V):
        """Image of a batch of row vectors; undefined for duality elements."""
        if self.dual:
            raise GroupError("duality elements act on subspaces, not vectors")
        return mat_mul(self.field, self.field.frob(np.asarray(V), self.frob_power),
                       self.matrix)

    def act_subspace(self, W):
        F = self.field
        rows = F.frob(W.basis, self.frob_power) if W.dim else W.basis
        img = canonicalize(F, W.ambient_dim,
                           mat_mul(F, rows, self.matrix) if W.dim else [])
        if self.dual:
            img = complement_dual(img)
        return img

    def __eq__(self, other):
        return isinstance(other, SemilinearElement) and self._key == other._key \
            and self.field == other.field

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        tag = f",frob^{self.frob_power}" if self.frob_power else ""
        tag += ",dual" if self.dual else ""
        return f"Semilinear({self.d}x{self.d} over {self.field!r}{tag})"


def _identity_element(F, d):
    return SemilinearElement(F, linalg.identity(F, d), _trusted=True)


# -- form preservation checks ---------------------------------------------

def preserves_form(g, form, exact=True):
    """Whether g = frob^k . M carries the form to itself: the semilinear
    condition is M gram M^T = c frob(gram, k), with c = 1 when exact and
    any similitude scalar otherwise."""
    if form is None or g.dual:
        return True
    F = form.field
    M = g.matrix
    target = F.frob(form.gram, g.frob_power)
    if form.kind == "hermitian":
        lhs = mat_mul(F, mat_mul(F, M, form.gram), form.conj(M).T)
    else:
        lhs = mat_mul(F, mat_mul(F, M, form.gram), M.T)
    if form.kind == "quadratic":
        lhs = _upper_tri_rep(F, lhs)
        target = _upper_tri_rep(F, target)
    if exact:
        return np.array_equal(lhs, target)
    for i, j in zip(*np.nonzero(target)):
        if lhs[i, j]:
            c = int(F.div(lhs[i, j], target[i, j]))
            return np.array_equal(lhs, F.mul(target, c))
    return False


def _upper_tri_rep(F, A):
    """Fold a Gram matrix to its upper-triangular quadratic representative."""
    up = np.triu(A, 1)
    low = np.tril(A, -1).T
    out = F.add(up, low)
    out = out + np.diag(np.diagonal(A))
    return out


# -- elementary constructions ------------------------------------------------

def transvection_symplectic(a, form):
    """t_a: u -> u + phi(u, a) a, an involution preserving a symplectic
    form in characteristic 2."""
    F = form.field
    if F.p != 2:
        raise GroupError("symplectic transvections here require characteristic 2")
    a = np.asarray(a, dtype=np.int64)
    if not a.any():
        raise GroupError("transvection direction must be nonzero")
    coeffs = mat_mul(F, form.gram, a[:, None])[:, 0]       # phi(e_i, a)
    M = F.add(linalg.identity(F, form.dim), F.mul(coeffs[:, None], a[None, :]))
    return SemilinearElement(F, M, _trusted=True)


def _symplectic_transvection_general(F, form, a, lam):
    a = np.asarray(a, dtype=np.int64)
    coeffs = F.mul(mat_mul(F, form.gram, a[:, None])[:, 0], lam)
    M = F.add(linalg.identity(F, form.dim), F.mul(coeffs[:, None], a[None, :]))
    return SemilinearElement(F, M, _trusted=True)


def orthogonal_reflection(form, a):
    """r_a: u -> u - (B(u,a)/Q(a)) a for a non-singular vector a; works in
    every characteristic (B is the polarization)."""
    F = form.field
    a = np.asarray(a, dtype=np.int64)
    qa = linalg.eval_form(form, a)
    if qa == 0:
        raise GroupError("reflection vector must be non-singular")
    coeffs = F.div(mat_mul(F, form.polar_gram(), a[:, None])[:, 0], qa)
    M = F.sub(linalg.identity(F, form.dim), F.mul(coeffs[:, None], a[None, :]))
    return SemilinearElement(F, M, _trusted=True)


def _field_spanning_scalars(F):
    """Scalars whose F_p-span is all of F: powers of the generator."""
    return [int(F.power(np.asarray(F.generator_code), k)) for k in range(F.f)]


def _linear_generators(spec):
    F = gf.field_of_order(spec.q)
    d, q = spec.d, spec.q
    gens = []
    for i in range(d):
        for j in range(d):
            if i != j:
                for lam in _field_spanning_scalars(F):
                    M = linalg.identity(F, d)
                    M[i, j] = lam
                    gens.append(SemilinearElement(F, M, _trusted=True))
    if spec.family == "GL" and q > 2:
        M = linalg.identity(F, d)
        M[0, 0] = F.generator_code
        gens.append(SemilinearElement(F, M, _trusted=True))
    return gens, None


def _symplectic_generators(spec):
    F = gf.field_of_order(spec.q)
    d = spec.d
    m = d // 2
    form = symplectic_form(F, d)
    gens = []
    scalars = _field_spanning_scalars(F)

    def basis(i):
        v = np.zeros(d, dtype=np.int64)
        v[i] = 1
        return v

    for i in range(m):
        for lam in scalars:
            gens.append(_symplectic_transvection_general(F, form, basis(i), lam))
            gens.append(_symplectic_transvection_general(F, form, basis(m + i), lam))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for t in scalars:
                M = linalg.identity(F, d)
                M[i, j] = t                      # e_i -> e_i + t e_j
                M[m + j, m + i] = int(F.neg(t))  # f_j -> f_j - t f_i
                gens.append(SemilinearElement(F, M, _trusted=True))
    for i in range(m):
        for j in range(i + 1, m):
            for t in scalars:
                Mp = linalg.identity(F, d)
                Mp[i, m + j] = t
                Mp[j, m + i] = t
                gens.append(SemilinearElement(F, Mp, _trusted=True))
                Mm = linalg.identity(F, d)
                Mm[m + i, j] = t
                Mm[m + j, i] = t
                gens.append(SemilinearElement(F, Mm, _trusted=True))
    return gens, form


def _unitary_generators(spec):
    if spec.d not in (3, 4):
        raise GroupError("unitary constructions are provided for d in {3, 4}")
    F0 = gf.field_of_order(spec.q)
    E = spec.matrix_field()
    q, d = spec.q, spec.d
    form = hermitian_form(E, d, conj_power=F0.f)
    conj = lambda x: int(E.frob(x, F0.f))
    mu = E.generator_code
    gens = []

    def solve_trace(rhs):
        """Least t in GF(q^2) with t + t^q = rhs."""
        for t in range(E.q):
            if int(E.add(t, E.frob(t, F0.f))) == rhs:
                return t
        raise GroupError("trace equation unsolvable")  # unreachable

    def span_E():
        return [int(E.power(np.asarray(mu), k)) for k in range(2 * F0.f)]

    if d == 3:
        # upper unipotents [[1, s, t], [0, 1, -s^q], [0, 0, 1]],
        # constrained by t + t^q + s^{q+1} = 0
        params = [(0, t) for t in span_E() if int(E.add(t, E.frob(t, F0.f))) == 0 and t]
        for s in span_E():
            norm = int(E.mul(s, E.frob(s, F0.f)))
            params.append((s, solve_trace(int(E.neg(norm)))))
        for s, t in params:
            M = linalg.identity(E, 3)
            M[0, 1], M[0, 2] = s, t
            M[1, 2] = int(E.neg(conj(s)))
            gens.append(SemilinearElement(E, M, _trusted=True))
        D = np.diag([mu, int(E.power(np.asarray(mu), q - 1)),
                     int(E.inv(np.asarray(E.power(np.asarray(mu), q))))]).astype(np.int64)
        gens.append(SemilinearElement(E, D, _trusted=True))
        w = np.zeros((3, 3), dtype=np.int64)
        w[0, 2] = w[2, 0] = 1
        w[1, 1] = int(E.neg(1))
        gens.append(SemilinearElement(E, w, _trusted=True))
    else:
        # hyperbolic pairs (e1, e4), (e2, e3) for the anti-diagonal form
        for t in span_E():
            A = linalg.identity(E, 4)
            A[0, 1] = t
            A[2, 3] = int(E.neg(conj(t)))   # e3 -> e3 - t^q e4
            gens.append(SemilinearElement(E, A, _trusted=True))
            B = linalg.identity(E, 4)
            B[0, 2] = t
            B[1, 3] = int(E.neg(conj(t)))   # e2 -> e2 - t^q e4
            gens.append(SemilinearElement(E, B, _trusted=True))
        trace_zero = [t for t in range(E.q)
                      if t and int(E.add(t, E.frob(t, F0.f))) == 0]
        for t in trace_zero[: 2 * F0.f]:
            C = linalg.identity(E, 4)
            C[0, 3] = t
            gens.append(SemilinearElement(E, C, _trusted=True))
            C2 = linalg.identity(E, 4)
            C2[1, 2] = t
            gens.append(SemilinearElement(E, C2, _trusted=True))
        a0 = _embed_scalar(E, F0, F0.generator_code)
        D1 = np.diag([a0, 1, 1, int(E.inv(np.asarray(a0)))]).astype(np.int64)
        D2 = np.diag([1, a0, int(E.inv(np.asarray(a0))), 1]).astype(np.int64)
        gens += [SemilinearElement(E, D1, _trusted=True),
                 SemilinearElement(E, D2, _trusted=True)]
        for pairs in (((0, 1), (3, 2)), ((0, 3), (1, 2))):
            # double transpositions: determinant 1 in every characteristic
            w = linalg.identity(E, 4)
            for (a, b) in pairs:
                w[a, a] = w[b, b] = 0
                w[a, b] = w[b, a] = 1
            gens.append(SemilinearElement(E, w, _trusted=True))
    if spec.family == "GU":
        D = linalg.identity(E, d)
        D[0, 0] = mu
        D[d - 1, d - 1] = int(E.inv(np.asarray(E.frob(mu, F0.f))))
        gens.append(SemilinearElement(E, D, _trusted=True))
    gens = [g for g in gens if not g.is_identity()]
    for g in gens:
        if not preserves_form(g, form):
            raise GroupError("unitary generator fails the form check")
    if spec.family == "SU":
        for g in gens:
            if linalg.det(E, g.matrix) != 1:
                raise GroupError("SU generator with nontrivial determinant")
    return gens, form


def _embed_scalar(E, F0, code):
    """Carry a GF(q) scalar into GF(q^2) through the cached embedding."""
    emb = E.from_subfield_root(F0)
    return int(emb[code])


def _orthogonal_generators(spec):
    F = gf.field_of_order(spec.q)
    d, q = spec.d, spec.q
    is_plus = "plus" in spec.family.lower()
    form = quadratic_plus(F, d) if is_plus else quadratic_minus(F, d)
    if spec.family.startswith("Omega") and q % 2 == 1:
        raise GroupError("Omega for odd q (spinor-norm kernel) is not constructed")
    vectors = linalg.all_row_vectors(F, d)
    nonsingular = [v for v in vectors
                   if v.any() and linalg.eval_form(form, v) != 0
                   and v[np.nonzero(v)[0][0]] == 1]
    refls = [orthogonal_reflection(form, v) for v in nonsingular]
    if spec.family.startswith("Omega") or (q % 2 == 1 and spec.family.startswith("SO")):
        base = refls[0]
        gens = [base * r for r in refls[1:]]
    else:
        gens = refls
    gens = [g for g in gens if not g.is_identity()]
    return gens, form


@functools.lru_cache(maxsize=None)
def classical_generators(spec):
    """Generating set for the matrix group described by the GroupSpec,
    with any requested outer elements appended, together with the
    preserved standard form.

    Socle generators preserve the form exactly; appended outer elements
    preserve it up to a similitude scalar and Frobenius twist.  The
    induced permutation group order is certified downstream against the
    textbook formula (see certified_order).
    """
    if spec.family in ("GL", "SL"):
        gens, form = _linear_generators(spec)
    elif spec.family == "Sp":
        gens, form = _symplectic_generators(spec)
    elif spec.family in ("GU", "SU"):
        gens, form = _unitary_generators(spec)
    else:
        gens, form = _orthogonal_generators(spec)
    for g in gens:
        if not preserves_form(g, form):
            raise GroupError(f"{spec.family} generator fails the form check")
    for ext in spec.extensions:
        gens = gens + [outer_element(ext, spec)]
    return gens, form


def outer_element(kind, spec):
    """An outer element normalizing the socle action: 'diag', 'dual', or
    'frob' / 'frob:k'."""
    F = spec.matrix_field()
    d = spec.d
    if kind == "dual":
        if spec.family not in ("GL", "SL"):
            raise GroupError("duality is a linear-family automorphism")
        return SemilinearElement(F, linalg.identity(F, d), 0, dual=True,
                                 _trusted=True)
    if kind.startswith("frob"):
        k = int(kind.split(":", 1)[1]) if ":" in kind else 1
        return SemilinearElement(F, linalg.identity(F, d), k, _trusted=True)
    if kind == "diag":
        M = linalg.identity(F, d)
        if spec.family in ("GL", "SL"):
            M[0, 0] = F.generator_code
        elif spec.family == "Sp":
            for i in range(d // 2):
                M[i, i] = F.generator_code
        else:
            raise GroupError(f"diag outer element unsupported for {spec.family}")
        return SemilinearElement(F, M, _trusted=True)
    raise GroupError(f"unknown outer element kind {kind!r}")


# -- order formulas and certification ------------------------------------------

def matrix_group_order(spec):
    """Textbook order of the matrix group (the certification oracle)."""
    d, q = spec.d, spec.q
    fam = spec.family
    if fam == "GL":
        n = 1
        for i in range(d):
            n *= q**d - q**i
        return n
    if fam == "SL":
        return matrix_group_order(GroupSpec("GL", d, q)) // (q - 1)
    if fam == "Sp":
        m = d // 2
        n = q**(m * m)
        for i in range(1, m + 1):
            n *= q**(2 * i) - 1
        return n
    if fam == "GU":
        n = q**(d * (d - 1) // 2)
        for i in range(1, d + 1):
            n *= q**i - (-1)**i
        return n
    if fam == "SU":
        return matrix_group_order(GroupSpec("GU", d, q)) // (q + 1)
    m = d // 2
    eps = 1 if "plus" in fam.lower() else -1
    omega = q**(m * (m - 1)) * (q**m - eps)
    for i in range(1, m):
        omega *= q**(2 * i) - 1
    if fam.startswith("Omega"):
        return omega
    if q % 2 == 0:
        return 2 * omega          # O = SO in characteristic 2
    if fam.startswith("SO"):
        return omega
    return 2 * omega


def natural_degree(spec):
    F = spec.matrix_field()
    return F.q ** spec.d - 1


def induced_on_nonzero_vectors(spec):
    """The permutation group induced on the nonzero vectors of the natural
    module (a faithful action of the matrix-plus-Frobenius group)."""
    gens, form = classical_generators(spec)
    F = spec.matrix_field()
    d = spec.d
    vecs = linalg.all_row_vectors(F, d)[1:]     # drop the zero vector
    radix = F.q ** np.arange(d, dtype=np.int64)
    index = np.full(F.q**d, -1, dtype=np.int64)
    index[vecs @ radix] = np.arange(len(vecs))
    perms = []
    for g in gens:
        if g.dual:
            raise GroupError("duality elements have no vector action")
        imgs = index[g.act_vectors(vecs) @ radix]
        perms.append(Permutation(imgs.astype(np.int32)))
    return PermGroup(len(vecs), perms, name=f"{spec.family}({spec.d},{spec.q})")


@functools.lru_cache(maxsize=None)
def certified_order(spec):
    """BSGS order of the induced vector action, checked against the
    textbook formula; raises on mismatch."""
    if spec.extensions or spec.derived:
        raise GroupError("certify the plain socle spec")
    G = induced_on_nonzero_vectors(spec)
    n = G.order()
    expect = matrix_group_order(spec)
    if n != expect:
        raise GroupError(
            f"{spec.family}({spec.d},{spec.q}) order {n} != formula {expect}")
    return n


def derived_subgroup_perm(G):
    """Derived subgroup at the permutation level (e.g. Sp4(2)')."""
    return derived_subgroup(G)

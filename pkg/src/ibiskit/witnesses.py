"""The witness catalog: explicit point sequences for the lemma-level
claims, constructed from the standard-form coordinates and verified
through the stabilizer machinery.

Every entry returns a report dict listing each asserted equality or
strict inequality of stabilizers with its outcome; `ok` is the
conjunction.  Point labels in the reports are representation-dependent
(tied to this library's standard forms and enumeration order); the
asserted orders, lengths and equalities are not.
"""

from __future__ import annotations

import math

import numpy as np

from . import ibis, linalg
from .actions import (
    QuadFormPoint, build_group_action, build_nondegenerate_domain,
    build_nonsingular_points, build_projective_points, build_quad_forms_domain,
    build_subspace_domain, build_totally_singular, induce_permutation,
)
from .gf import field_of_order, trace_bit
from .groups import GroupSpec
from .ibis import (
    base_report, extend_to_irredundant_base, is_base, is_irredundant,
    minimal_base_sizes, same_pointwise_stabilizer,
)
from .linalg import canonicalize, quadratic_plus, symplectic_form


class WitnessError(ValueError):
    pass


def _check(checks, claim, ok, detail=None):
    entry = {"claim": claim, "ok": bool(ok)}
    if detail is not None:
        entry["detail"] = detail
    checks.append(entry)
    return bool(ok)


def _sub(dom, *vectors):
    W = canonicalize(dom.field, len(vectors[0]), [np.array(v) for v in vectors])
    return dom.index_of(W)


def _finish(lemma, params, checks):
    return {"schema": 1, "lemma": lemma, "params": params,
            "checks": checks, "ok": all(c["ok"] for c in checks)}


# -- linear groups ------------------------------------------------------------

def witness_projective_chains(d=3, q=3):
    """Two standard-frame chains of lengths 4 and 5 on projective points
    with the same terminal stabilizer (PSL_d(q), q > 2, d >= 3)."""
    if q <= 2 or d < 3:
        raise WitnessError("the chain pair needs q > 2 and d >= 3")
    dom = build_projective_points(d, q)
    G = build_group_action(GroupSpec("SL", d, q), dom)
    e = np.eye(d, dtype=int)
    a = [_sub(dom, e[0]), _sub(dom, e[1]), _sub(dom, e[2]),
         _sub(dom, e[0] + e[1] + e[2])]
    b = [_sub(dom, e[0]), _sub(dom, e[1]), _sub(dom, e[0] + e[1]),
         _sub(dom, e[2]), _sub(dom, e[0] + e[1] + e[2])]
    checks = []
    _check(checks, "chain of length 4 is irredundant", is_irredundant(G, a))
    _check(checks, "chain of length 5 is irredundant", is_irredundant(G, b))
    _check(checks, "both chains reach the same stabilizer",
           same_pointwise_stabilizer(G, a, b))
    _check(checks, "group is therefore not IBIS",
           ibis.verify_witness_chain(G, a, b))
    return _finish("L3.2", {"d": d, "q": q, "degree": dom.N}, checks)


def witness_two_subspaces(d=4):
    """GL_d(2) on 2-subspaces: irredundant chains of lengths 5 and 4 with
    a common stabilizer; at d = 4 both are bases and every minimal base
    has cardinality 4."""
    if d != 4:
        raise WitnessError("the explicit chains are verified at d = 4")
    dom = build_subspace_domain(4, 2, 2)
    G = build_group_action(GroupSpec("GL", 4, 2), dom)
    e = np.eye(4, dtype=int)
    a = [_sub(dom, e[0], e[1]), _sub(dom, e[2], e[3]),
         _sub(dom, e[0] + e[2], e[1] + e[3]),
         _sub(dom, e[0], e[2]), _sub(dom, e[1], e[3])]
    b = [_sub(dom, e[0], e[1]), _sub(dom, e[0], e[2]),
         _sub(dom, e[1], e[3]), _sub(dom, e[2], e[3])]
    checks = []
    _check(checks, "length-5 chain is irredundant", is_irredundant(G, a))
    _check(checks, "length-4 chain is irredundant", is_irredundant(G, b))
    _check(checks, "chains reach the same stabilizer",
           same_pointwise_stabilizer(G, a, b))
    _check(checks, "both chains are bases (trivial stabilizer at d=4)",
           is_base(G, a) and is_base(G, b))
    mins = minimal_base_sizes(G)
    _check(checks, "every minimal base has cardinality 4",
           mins.complete and mins.lengths == frozenset([4]),
           detail=sorted(mins.lengths))
    return _finish("L3.3", {"d": d, "q": 2, "degree": dom.N}, checks)


# -- symplectic groups -----------------------------------------------------------

def _sp4_extension(q):
    F = field_of_order(q)
    if q % 2 == 1:
        return ("diag",)
    return ("frob",) if F.f > 1 else ()


def witness_symplectic_points(q=4):
    """PSp_4(q) on projective points: an irredundant base of cardinality 6
    for the socle, and of cardinality 5 for the extended group."""
    if q <= 3:
        raise WitnessError("the displayed chains need q > 3")
    dom = build_projective_points(4, q)
    G0 = build_group_action(GroupSpec("Sp", 4, q), dom)
    ext = _sp4_extension(q)
    # basis e1, e2, f1, f2 at coordinates 0, 1, 2, 3
    e1, e2, f1, f2 = np.eye(4, dtype=int)
    alpha = int(dom.field.generator_code)
    six = [_sub(dom, e1), _sub(dom, e2), _sub(dom, f1), _sub(dom, f2),
           _sub(dom, e1 + e2), _sub(dom, e1 + f1)]
    checks = []
    rep6 = base_report(G0, six)
    expect4 = (q - 1) ** 2 // math.gcd(2, q - 1)
    _check(checks, "|(G0)_{w1..w4}| = (q-1)^2/gcd(2,q-1)",
           rep6.stab_orders[4] == expect4,
           detail={"got": str(rep6.stab_orders[4]), "expected": expect4})
    _check(checks, "six-point chain is an irredundant base for the socle",
           rep6.is_base and rep6.is_irredundant,
           detail=[str(n) for n in rep6.stab_orders])
    if not ext:
        return _finish("L3.13", {"q": q, "degree": dom.N}, checks)
    A = build_group_action(GroupSpec("Sp", 4, q, extensions=ext), dom)
    _check(checks, "extended group strictly contains the socle action",
           A.order() > G0.order(),
           detail={"socle": str(G0.order()), "extended": str(A.order())})
    avec = np.array([alpha, 1, alpha, 1], dtype=np.int64)
    five = [_sub(dom, e1), _sub(dom, e2), _sub(dom, f1), _sub(dom, f2),
            _sub(dom, avec)]
    rep5 = base_report(A, five)
    _check(checks, "five-point chain is an irredundant base for the extension",
           rep5.is_base and rep5.is_irredundant,
           detail=[str(n) for n in rep5.stab_orders])
    return _finish("L3.13", {"q": q, "degree": dom.N, "extension": list(ext)},
                   checks)


def witness_symplectic_lines(q=3, seed=0):
    """PSp_4(q) on totally singular lines.  At q = 3: explicit irredundant
    base of length 5 plus a searched one of length 4, both spanning V and
    meeting in 0, certifying NotIBIS with the side conditions."""
    F = field_of_order(q)
    form = symplectic_form(F, 4)
    dom = build_totally_singular(form, 2)
    G = build_group_action(GroupSpec("Sp", 4, q), dom)
    e1, e2, f1, f2 = np.eye(4, dtype=int)
    minus_one = int(F.neg(np.asarray(1)))
    pts = [
        (e1, e2), (f1, f2), (e1, f2), (e2, f1),
        (e1 + e2, F.add(f1, F.mul(minus_one, f2))),   # f1 - f2
        (e1 + f2, e2 + f1),
    ]
    idx = [_sub(dom, *pair) for pair in pts]
    checks = []
    rep = base_report(G, idx[:5])
    expect4 = (q - 1) ** 2 // math.gcd(2, q - 1)
    _check(checks, "|(G0)_{w1..w4}| = (q-1)^2/gcd(2,q-1)",
           rep.stab_orders[4] == expect4,
           detail={"got": str(rep.stab_orders[4]), "expected": expect4})
    if q == 3:
        _check(checks, "w1..w5 is an irredundant base of length 5",
               rep.is_base and rep.is_irredundant,
               detail=[str(n) for n in rep.stab_orders])
        _check(checks, "witness spans V and meets in 0",
               _span_and_meet_ok(dom, idx[:5]))
        four = _search_base_with_side_conditions(G, dom, 4, seed=seed)
        _check(checks, "an irredundant base of length 4 with the side "
                       "conditions exists", four is not None,
               detail=None if four is None else list(four.points))
        if four is not None:
            _check(checks, "lengths 4 != 5 certify NotIBIS", True)
    else:
        rep6 = base_report(G, idx)
        _check(checks, "w1..w6 is an irredundant base of length 6",
               rep6.is_base and rep6.is_irredundant,
               detail=[str(n) for n in rep6.stab_orders])
    return _finish("L3.14", {"q": q, "degree": dom.N}, checks)


def _span_and_meet_ok(dom, indices):
    pts = [dom.points[i] for i in indices]
    total = pts[0]
    meet = pts[0]
    for W in pts[1:]:
        total = linalg.subspace_sum(total, W)
        meet = linalg.subspace_meet(meet, W)
    return total.dim == pts[0].ambient_dim and meet.dim == 0


def _search_base_with_side_conditions(G, dom, size, seed=0, budget=3000):
    import random as _random
    rng = _random.Random(seed)
    for _ in range(budget):
        pts = rng.sample(range(dom.N), size)
        rep = base_report(G, pts)
        if rep.is_base and rep.is_irredundant and _span_and_meet_ok(dom, pts):
            return rep
    return None


# -- non-degenerate subspaces -----------------------------------------------------

def witness_nondegenerate_pair(d=4, q=3):
    """The symplectic W1, W2, W3 construction: W2 perpendicular to W1, W3 a
    twisted graph complement, an element g fixing W1 and W2 but moving W3,
    and the collapse G_{W1,W2,W3} = G_{W1,W3}."""
    if d != 4:
        raise WitnessError("constructed at d = 4")
    F = field_of_order(q)
    form = symplectic_form(F, d)
    dom = build_nondegenerate_domain(form, 2)
    G = build_group_action(GroupSpec("Sp", d, q), dom)
    e1, e2, f1, f2 = np.eye(4, dtype=int)
    lam = next(c for c in range(2, q)
               if int(F.add(1, F.mul(c, c))) != 0)    # 1 + lam^2 != 0
    w1 = _sub(dom, e1, f1)
    w2 = _sub(dom, e2, f2)
    # W3 is the graph of lam*(the isometry W1 -> W2); its form multiplier
    # is 1 + lam^2, so the graph stays non-degenerate
    w3 = _sub(dom, F.add(e1, F.mul(lam, e2)), F.add(f1, F.mul(lam, f2)))
    W1, W2, W3 = (dom.points[i] for i in (w1, w2, w3))
    checks = []
    pg = form.gram
    perp = all(linalg.eval_form(form, a, b) == 0
               for a in W1.basis for b in W2.basis)
    _check(checks, "W1 and W2 are perpendicular", perp)
    _check(checks, "W1 + W2 = W1 + W3 = V and pairwise meets with W3 vanish",
           linalg.subspace_sum(W1, W2).dim == 4
           and linalg.subspace_sum(W1, W3).dim == 4
           and linalg.subspace_meet(W1, W3).dim == 0
           and linalg.subspace_meet(W2, W3).dim == 0)
    # g acts as a symplectic rotation on W1 = <e1, f1> and fixes W2 pointwise
    M = np.array([[0, 0, 1, 0],
                  [0, 1, 0, 0],
                  [q - 1, 0, 0, 0],
                  [0, 0, 0, 1]], dtype=np.int64)
    from .groups import SemilinearElement, preserves_form
    g = SemilinearElement(F, M)
    if not preserves_form(g, form):
        raise WitnessError("the exhibited g is not symplectic")
    pg_perm = induce_permutation(g, dom)
    _check(checks, "g fixes W1 and W2 but moves W3",
           pg_perm[w1] == w1 and pg_perm[w2] == w2 and pg_perm[w3] != w3)
    orders = ibis.chain_orders(G, (w1, w2, w3))
    _check(checks, "G_{W1,W2} > G_{W1,W2,W3} (strict)",
           orders[2] > orders[3], detail=[str(n) for n in orders])
    _check(checks, "G_{W1,W2,W3} = G_{W1,W3}",
           same_pointwise_stabilizer(G, (w1, w2, w3), (w1, w3)))
    return _finish("L6.1", {"d": d, "q": q, "degree": dom.N}, checks)


# -- even-characteristic symplectic on quadratic forms ------------------------------

def witness_quadratic_forms(m=2, q=4):
    """Sp_{2m}(q) on the plus and minus form classes: the displayed
    stabilizer orders and the size-4 and size-5 irredundant bases."""
    if m != 2:
        raise WitnessError("the explicit chains live at m = 2")
    F = field_of_order(q)
    if F.p != 2 or q <= 2:
        raise WitnessError("needs even q > 2")
    lam = F.generator_code
    d = 4
    e = np.eye(d, dtype=int)
    checks = []

    plus = build_quad_forms_domain(m, q, "+")
    G = build_group_action(GroupSpec("Sp", 2 * m, q), plus)
    zero = plus.index_of(QuadFormPoint(np.zeros(d, dtype=int)))
    th = lambda dom, v: dom.index_of(QuadFormPoint(np.asarray(v, dtype=np.int64)))
    orders = ibis.chain_orders(G, (zero, th(plus, e[1])))
    _check(checks, "|G_theta0 ^ G_theta_e2| = 2(q-1)q^2",
           orders[2] == 2 * (q - 1) * q**2,
           detail={"got": str(orders[2]), "expected": 2 * (q - 1) * q**2})
    orders3 = ibis.chain_orders(G, (zero, th(plus, e[1]), th(plus, e[0])))
    _check(checks, "|G_theta0 ^ G_theta_e2 ^ G_theta_e1| = q",
           orders3[3] == q, detail={"got": str(orders3[3]), "expected": q})
    base4 = [zero, th(plus, e[1]), th(plus, e[0]), th(plus, lam * e[3])]
    rep4 = base_report(G, base4)
    _check(checks, "theta_0, theta_e2, theta_e1, theta_{lam e4} is an "
                   "irredundant base of size 4 on the plus class",
           rep4.is_base and rep4.is_irredundant,
           detail=[str(n) for n in rep4.stab_orders])
    # a = e1 + lam' e3 with lam' != 0 of absolute trace zero
    lamp = next(c for c in range(1, q) if trace_bit(F, c) == 0)
    base5 = [zero, th(plus, e[1]), th(plus, e[0] + lamp * e[2]),
             th(plus, e[3]), th(plus, e[0])]
    rep5 = base_report(G, base5)
    _check(checks, "the five-term chain through theta_{e1 + lam' e3} is an "
                   "irredundant base of size 5 on the plus class",
           rep5.is_base and rep5.is_irredundant,
           detail=[str(n) for n in rep5.stab_orders])
    _check(checks, "intermediate orders 2q and 2 along the size-5 base",
           rep5.stab_orders[3] == 2 * q and rep5.stab_orders[4] == 2,
           detail=[str(n) for n in rep5.stab_orders])

    minus = build_quad_forms_domain(m, q, "-")
    Gm = build_group_action(GroupSpec("Sp", 2 * m, q), minus)
    eps = next(c for c in range(1, q)
               if trace_bit(F, c) == 1 and _is_generator(F, c))
    epsv = np.array([eps, 0, 1, 0], dtype=np.int64)   # eps e1 + e3 (= e_{m+1})
    i_eps = th(minus, epsv)
    # conjugation moves predicted by theta_a^{t_c} = theta_{a+(sqrt(theta_a(c))+1)c}
    from .groups import transvection_symplectic
    form = symplectic_form(F, 4)
    one_plus_eps = int(F.add(1, eps))
    moves = [(e[1], F.add(epsv, e[1])), (e[3], F.add(epsv, e[3])),
             (e[2], F.add(epsv, F.mul(one_plus_eps, e[2])))]
    ok_moves = True
    for c, target in moves:
        t = induce_permutation(transvection_symplectic(np.array(c), form), minus)
        ok_moves &= t[i_eps] == th(minus, target)
    _check(checks, "transvection images of theta_eps match the conjugation law",
           ok_moves)
    twisted = F.add(epsv, F.mul(one_plus_eps, e[2]))
    prefix = [i_eps, th(minus, F.add(epsv, e[1])), th(minus, F.add(epsv, e[3])),
              th(minus, twisted)]
    orders_m = ibis.chain_orders(Gm, prefix)
    _check(checks, "the four-term minus chain has stabilizer of order 2",
           orders_m[-1] == 2, detail=[str(n) for n in orders_m])
    rep5m = extend_to_irredundant_base(Gm, prefix)
    _check(checks, "it extends to an irredundant base of size 5",
           len(rep5m) == 5 and rep5m.is_base,
           detail=[str(n) for n in rep5m.stab_orders])
    alpha = next(c for c in range(2, q) if c != 1)
    coeff = int(F.add(F.mul(alpha, alpha), alpha))    # alpha(alpha + 1)
    a4 = [i_eps, th(minus, F.add(epsv, e[1])),
          th(minus, F.add(epsv, F.mul(coeff, e[0]))),
          th(minus, twisted)]
    rep4m = base_report(Gm, a4)
    _check(checks, "the size-4 minus chain is an irredundant base",
           rep4m.is_base and rep4m.is_irredundant,
           detail=[str(n) for n in rep4m.stab_orders])
    _check(checks, "plus and minus classes both carry bases of sizes 4 and 5 "
                   "(not IBIS)", True)
    return _finish("P5.1", {"m": m, "q": q,
                            "plus_degree": plus.N, "minus_degree": minus.N},
                   checks)


def _is_generator(F, c):
    seen, x, n = set(), 1, 0
    while True:
        x = int(F.mul(x, c))
        n += 1
        if x == 1:
            return n == F.q - 1


# -- non-singular points -------------------------------------------------------------

def witness_nonsingular_sequences(d=6):
    """The two explicit sequences on non-singular points of the hyperbolic
    quadric over GF(2): irredundant bases of lengths 6 and 5 for the full
    orthogonal group SO_6^+(2)."""
    if d != 6:
        raise WitnessError("the explicit sequences live at d = 6, q = 2")
    F = field_of_order(2)
    form = quadratic_plus(F, 6)
    dom = build_nonsingular_points(form)
    G = build_group_action(GroupSpec("SOplus", 6, 2), dom)
    e = np.eye(6, dtype=int)
    seq6 = [_sub(dom, e[0] + e[1]), _sub(dom, e[0] + e[1] + e[5]),
            _sub(dom, e[0] + e[1] + e[2]), _sub(dom, e[0] + e[1] + e[3]),
            _sub(dom, e[4] + e[5]), _sub(dom, e[1] + e[2] + e[3])]
    seq5 = seq6[:4] + [seq6[5]]
    checks = []
    rep6 = base_report(G, seq6)
    rep5 = base_report(G, seq5)
    _check(checks, "the displayed length-6 sequence is an irredundant base",
           rep6.is_base and rep6.is_irredundant,
           detail=[str(n) for n in rep6.stab_orders])
    _check(checks, "the displayed length-5 sequence is an irredundant base",
           rep5.is_base and rep5.is_irredundant,
           detail=[str(n) for n in rep5.stab_orders])
    _check(checks, "lengths 6 != 5: the full orthogonal group is not IBIS",
           len(rep6) != len(rep5))
    return _finish("P7.2-q2", {"d": d, "q": 2, "degree": dom.N}, checks)


CATALOG = {
    "L3.2": witness_projective_chains,
    "L3.3": witness_two_subspaces,
    "L3.13": witness_symplectic_points,
    "L3.14": witness_symplectic_lines,
    "L6.1": witness_nondegenerate_pair,
    "P5.1": witness_quadratic_forms,
    "P7.2-q2": witness_nonsingular_sequences,
}


def run_witness(lemma_id, **params):
    if lemma_id not in CATALOG:
        raise WitnessError(f"unknown lemma id {lemma_id!r}; "
                           f"known: {sorted(CATALOG)}")
    return CATALOG[lemma_id](**params)

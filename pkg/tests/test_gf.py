import random

import pytest

from ibiskit.gf import (
    GFError, arith, field_of_order, find_special_alpha, frobenius, make_field,
    sqrt_char2, trace, trace_bit,
)


def test_make_field_gf2():
    F = make_field(2, 1)
    assert F.q == 2
    assert F.gen().code == 1


def test_make_field_gf4_modulus():
    # x^2 + x + 1 is the only irreducible quadratic over GF(2)
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)


def test_make_field_gf9_generator_order():
    F = make_field(3, 2)
    g = F.gen()
    seen = set()
    x = F.one()
    for _ in range(8):
        x = x * g
        seen.add(x.code)
    assert len(seen) == 8 and F.one().code in seen


def test_make_field_errors():
    with pytest.raises(GFError):
        make_field(4, 1)
    with pytest.raises(GFError):
        make_field(2, 0)
    with pytest.raises(GFError):
        make_field(2, 21)


def test_arith_gf4():
    F = make_field(2, 2)
    a = F.element(2)  # the class of x
    assert (a * a).code == 3  # x^2 = x + 1 mod x^2+x+1
    assert arith(a, a, "mul").code == 3


def test_arith_gf2_add():
    F = make_field(2, 1)
    one = F.one()
    assert (one + one).code == 0


def test_arith_div_identity_gf9():
    F = make_field(3, 2)
    for x in F.elements():
        if x:
            assert (x / x) == F.one()


def test_arith_errors():
    F, K = make_field(2, 2), make_field(3, 1)
    with pytest.raises(GFError):
        arith(F.one(), K.one(), "add")
    with pytest.raises(ZeroDivisionError):
        arith(F.one(), F.zero(), "div")
    with pytest.raises(GFError):
        arith(F.one(), F.one(), "xor")


def test_frobenius_gf4():
    F = make_field(2, 2)
    a = F.element(2)
    assert frobenius(a, 1) == a * a
    assert frobenius(a, 1).code == 3


def test_frobenius_identity_cases():
    for (p, f) in [(2, 3), (3, 2), (5, 1)]:
        F = make_field(p, f)
        for x in F.elements():
            assert frobenius(x, 0) == x
            assert frobenius(x, f) == x


def test_frobenius_involution_gf9():
    F = make_field(3, 2)
    for x in F.elements():
        assert frobenius(frobenius(x, 1), 1) == x


def test_trace_gf4_to_gf2():
    F = make_field(2, 2)
    a = F.element(2)
    assert trace(a, 1) == F.one()  # a + a^2 = 1
    assert trace(F.zero(), 1) == F.zero()


def test_trace_kernel_size_even_q():
    for f in (1, 2, 3, 4):
        F = make_field(2, f)
        ker = [x for x in F.elements() if trace(x, 1) == F.zero()]
        assert len(ker) == F.q // 2


def test_trace_additive_and_surjective():
    for (p, f, k) in [(2, 4, 1), (2, 4, 2), (3, 2, 1), (2, 6, 3)]:
        F = make_field(p, f)
        sub_img = {trace(x, k).code for x in F.elements()}
        assert len(sub_img) == p**k  # surjective onto the subfield
        rng = random.Random(11)
        els = F.elements()
        for _ in range(50):
            x, y = rng.choice(els), rng.choice(els)
            assert trace(x + y, k) == trace(x, k) + trace(y, k)


def test_trace_non_divisor_error():
    F = make_field(2, 4)
    with pytest.raises(GFError):
        trace(F.one(), 3)


def test_sqrt_char2_gf4():
    F = make_field(2, 2)
    a = F.element(2)
    r = sqrt_char2(a)
    assert r == a + F.one()
    assert r * r == a


def test_sqrt_char2_fixed_points():
    F = make_field(2, 3)
    assert sqrt_char2(F.zero()) == F.zero()
    assert sqrt_char2(F.one()) == F.one()


def test_sqrt_char2_additive_gf8():
    F = make_field(2, 3)
    for x in F.elements():
        for y in F.elements():
            assert sqrt_char2(x) + sqrt_char2(y) == sqrt_char2(x + y)


def test_sqrt_char2_inverts_frobenius():
    for f in (1, 2, 3, 4, 5, 6):
        F = make_field(2, f)
        for x in F.elements():
            assert sqrt_char2(x * x) == x


def test_sqrt_char2_odd_char_error():
    F = make_field(3, 1)
    with pytest.raises(GFError):
        sqrt_char2(F.one())


def test_multiplicative_order_exhaustive():
    # every prime power up to 64
    qs = [q for q in range(2, 65)
          if any(q == p**k for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31,
                                     37, 41, 43, 47, 53, 59, 61)
                 for k in range(1, 7))]
    for q in qs:
        F = field_of_order(q)
        for x in F.elements():
            if x:
                assert x ** (q - 1) == F.one()


def test_trace_additive_exhaustive_small():
    for (p, f, k) in [(2, 4, 1), (2, 4, 2), (3, 2, 1), (2, 6, 2)]:
        F = make_field(p, f)
        els = F.elements()
        for x in els:
            for y in els:
                assert trace(x + y, k) == trace(x, k) + trace(y, k)


def test_find_special_alpha_q2():
    # both solutions of a + a^2 + 1 = 0 in GF(4) lie on full orbits
    E = make_field(2, 2)
    sols = [x for x in E.elements() if x + frobenius(x, 1) + E.one() == E.zero()]
    assert len(sols) == 2
    a = find_special_alpha(2)
    assert a.code in {s.code for s in sols}


def test_find_special_alpha_q4():
    E = make_field(2, 4)
    sols = [x for x in E.elements() if x + frobenius(x, 2) + E.one() == E.zero()]
    assert len(sols) == 4
    a = find_special_alpha(4)
    orbit = {a.code}
    c = a
    for _ in range(3):
        c = frobenius(c, 1)
        orbit.add(c.code)
    assert len(orbit) == 4


def test_find_special_alpha_q3_solution_count():
    E = make_field(3, 2)
    sols = [x for x in E.elements() if x + frobenius(x, 1) + E.one() == E.zero()]
    assert len(sols) == 3


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_find_special_alpha_contract(q):
    F = field_of_order(q)
    E = make_field(F.p, 2 * F.f)
    a = find_special_alpha(q)
    assert a.field == E
    assert a + frobenius(a, F.f) + E.one() == E.zero()
    orbit = set()
    c = a
    for _ in range(2 * F.f):
        orbit.add(c.code)
        c = frobenius(c, 1)
    assert len(orbit) == 2 * F.f


def test_serialization_descriptor():
    F = make_field(2, 3)
    assert F.describe() == {"p": 2, "f": 3, "modulus": [1, 1, 0, 1]}


def test_trace_bit_matches_trace():
    F = make_field(2, 4)
    for x in F.elements():
        assert trace_bit(F, x.code) == trace(x, 1).code


def test_vectorized_ops_match_elementwise():
    import numpy as np
    for q in (8, 9, 25):
        F = field_of_order(q)
        rng = random.Random(5)
        a = np.array([rng.randrange(q) for _ in range(40)])
        b = np.array([rng.randrange(1, q) for _ in range(40)])
        for i in range(40):
            x, y = F.element(a[i]), F.element(b[i])
            assert int(F.add(a, b)[i]) == (x + y).code
            assert int(F.mul(a, b)[i]) == (x * y).code
            assert int(F.sub(a, b)[i]) == (x - y).code
            assert int(F.div(a, b)[i]) == (x / y).code

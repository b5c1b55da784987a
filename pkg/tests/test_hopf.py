import random
from fractions import Fraction

import pytest

from bpadams.arith import delta_p, is_p_local_int, val_p
from bpadams.fgl import BPContext
from bpadams.hopf import (ConstructionError, DiagonalAction, _check_profile,
                          diagonal_transform, from_right_unit_basis, right_unit_log,
                          right_unit_of_l_poly, right_unit_v_monomial, special_element,
                          t_gen, t_recursion_check, to_right_unit_basis, v1_functional)
from bpadams.lattice import CongruenceSystem, solve
from bpadams.polyring import GradedPoly, MuLinear, monomials_up_to_weight


def ctx2(W=7):
    return BPContext(2, W)


def ctx3(W=5):
    return BPContext(3, W)


def _lt_random(rng, ctx, bound, terms=3):
    mons = [m for m in monomials_up_to_weight(ctx.lt_table, bound)]
    out = {}
    for _ in range(terms):
        out[rng.choice(mons)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return GradedPoly(ctx.lt_table, ctx.weight_bound, out)


def test_right_unit_log_examples():
    c = ctx2()
    l1 = GradedPoly.gen(c.lt_table, 7, "l1")
    t1 = GradedPoly.gen(c.lt_table, 7, "t1")
    assert right_unit_log(c, 1) == l1 + t1
    l2 = GradedPoly.gen(c.lt_table, 7, "l2")
    t2 = GradedPoly.gen(c.lt_table, 7, "t2")
    assert right_unit_log(c, 2) == l2 + l1 * t1**2 + t2
    d = ctx3()
    assert right_unit_log(d, 2).to_text() == "t2 + l2 + l1*t1^3"


def test_right_unit_is_multiplicative():
    c = ctx2()
    sq = GradedPoly.gen(c.l_table, 7, "l1", 2)
    assert right_unit_of_l_poly(c, sq) == right_unit_log(c, 1) ** 2


def test_right_unit_v_examples():
    for p in (2, 3):
        c = BPContext(p, 6)
        poly, coeffs = right_unit_v_monomial(c, {"v1": 1})
        v1 = GradedPoly.gen(c.vt_table, 6, "v1")
        t1 = GradedPoly.gen(c.vt_table, 6, "t1")
        assert poly == v1 + t1 * c.pi(1)
        # eta_R(1) = 1
        one, table = right_unit_v_monomial(c, {})
        assert one == GradedPoly.const(c.vt_table, 6, 1)
        assert list(table.values()) == [Fraction(1)]


def test_right_unit_integrality_small():
    for p in (2, 3):
        c = BPContext(p, 4)
        for alpha in monomials_up_to_weight(c.v_table, 4):
            _, coeffs = right_unit_v_monomial(c, alpha)
            assert all(is_p_local_int(p, x) for x in coeffs.values())


def test_rewrite_examples_and_round_trip():
    c = ctx2()
    e1 = GradedPoly.gen(c.le_table, 7, "e1")
    l1 = GradedPoly.gen(c.le_table, 7, "l1")
    assert to_right_unit_basis(c, t_gen(c, 1)) == e1 - l1
    assert to_right_unit_basis(c, t_gen(c, 1, 2)) == e1**2 - l1 * e1 * 2 + l1**2
    rng = random.Random(23)
    for _ in range(12):
        x = _lt_random(rng, c, 5)
        assert from_right_unit_basis(c, to_right_unit_basis(c, x)) == x


def test_diagonal_transform_examples():
    for p in (2, 3):
        c = BPContext(p, 5)
        one = GradedPoly.const(c.lt_table, 5, 1)
        img = diagonal_transform(c, one)
        assert img.coefficient_of({}) == MuLinear.unit(0)
        # theta(t_1) = p^-1 pibar_1^-1 (mu_1 - mu_0) v_1
        img1 = diagonal_transform(c, t_gen(c, 1))
        unit = Fraction(1, p) / c.pibar(1)
        assert img1.coefficient_of({"v1": 1}) == MuLinear({1: unit, 0: -unit})
        assert len(img1.terms) == 1
        # theta(t_1^2) = p^-2 pibar_1^-2 (mu_2 - 2 mu_1 + mu_0) v_1^2
        img2 = diagonal_transform(c, t_gen(c, 1, 2))
        unit2 = unit * unit
        assert img2.coefficient_of({"v1": 2}) == MuLinear(
            {2: unit2, 1: -2 * unit2, 0: unit2})


def test_diagonal_transform_left_linearity():
    c = ctx2()
    rng = random.Random(31)
    bindings = {f"l{n}": c.l_in_v(n) for n in range(1, c.gen_count + 1)}
    for _ in range(10):
        x = _lt_random(rng, c, 3)
        a = rng.randint(1, 2)
        l_poly = GradedPoly.gen(c.lt_table, 7, "l1", a)
        lhs = diagonal_transform(c, l_poly * x)
        l_in_v = GradedPoly.gen(c.l_table, 7, "l1", a).substitute(bindings)
        rhs = l_in_v * diagonal_transform(c, x)
        assert lhs == rhs


def test_defining_identity_on_right_unit_images():
    # theta(eta_R(v^alpha)) = mu_{|alpha|} v^alpha
    for p in (2, 3):
        c = BPContext(p, 4)
        for alpha in monomials_up_to_weight(c.v_table, 4):
            x = GradedPoly.const(c.l_table, 4, 1)
            for name, e in zip(c.v_table.names, alpha):
                if e:
                    x = x * (c.v_in_l(c.v_table.index(name) + 1) ** e)
            image = diagonal_transform(c, right_unit_of_l_poly(c, x))
            w = c.v_table.monomial_weight(alpha)
            expect = GradedPoly.monomial(c.v_table, 4, alpha, MuLinear.unit(w))
            assert image == expect, (p, alpha)


def test_v1_functional_examples():
    for p in (2, 3):
        c = BPContext(p, 5)
        assert v1_functional(c, GradedPoly.const(c.lt_table, 5, 1)) == MuLinear.unit(0)
        unit = Fraction(1, p) / c.alphabar(1)
        assert v1_functional(c, t_gen(c, 1)) == MuLinear({1: unit, 0: -unit})


def test_product_rule_t1_squared():
    c = ctx3()
    vx = v1_functional(c, t_gen(c, 1))
    assert v1_functional(c, t_gen(c, 1, 2)) == vx.convolve(vx)


def test_product_rule_random_pairs():
    rng = random.Random(77)
    for p in (2, 3):
        c = BPContext(p, 5)
        for _ in range(20):
            x = _lt_random(rng, c, 2)
            y = _lt_random(rng, c, 3)
            assert v1_functional(c, x * y) == v1_functional(c, x).convolve(
                v1_functional(c, y))


def test_t_recursion():
    c = ctx2()
    assert t_recursion_check(c, 0)
    assert t_recursion_check(c, 1)
    assert t_recursion_check(c, 2)
    d = ctx3()
    assert t_recursion_check(d, 0)
    assert t_recursion_check(d, 1)
    # i = 0 in closed form: V(t_1) = p^-1 abar_1^-1 (mu_1 - mu_0)
    unit = Fraction(1, 3) / d.alphabar(1)
    assert v1_functional(d, t_gen(d, 1)) == MuLinear({1: unit, 0: -unit})


def test_special_element_d1():
    for p in (2, 3):
        c = BPContext(p, 5)
        d1 = special_element(c, 1)
        assert d1.element == t_gen(c, 1)
        unit = Fraction(1, p) / c.alphabar(1)
        assert d1.c == (-unit, unit)


def test_special_element_d2_p2_frozen():
    # frozen values derived by hand from the recursion:
    #   V(t_2) = (1/28)(mu_3 - mu_0) + (1/8)(mu_2 - 2 mu_1 + mu_0)
    #   d_2 = t_2 + (2/7) t_1^3
    c = ctx2()
    d2 = special_element(c, 2)
    assert d2.element.to_text() == "t2 + 2/7*t1^3"
    assert d2.c == (Fraction(1, 8), Fraction(-5, 14), Fraction(13, 56))


def test_special_element_products():
    # composite index: d_3 = d_2 * d_1 and the row is the convolution;
    # with a big enough bound the direct functional agrees exactly
    c = BPContext(2, 7)
    d3 = special_element(c, 3)
    d1, d2 = special_element(c, 1), special_element(c, 2)
    assert d3.element == d2.element * d1.element
    assert d3.functional() == d2.functional().convolve(d1.functional())
    assert v1_functional(c, d3.element) == d3.functional()


def test_special_element_profiles():
    for p in (2, 3):
        c = BPContext(p, delta_p(p, 4))
        for n in range(5):
            d = special_element(c, n)
            budget = delta_p(p, n)
            assert len(d.c) == n + 1
            assert val_p(p, d.c[n]) == -budget
            assert all(val_p(p, x) >= -budget for x in d.c)
            # direct functional agrees when nothing is truncated
            assert v1_functional(c, d.element) == d.functional()


def test_special_element_inductive_form():
    # d_{p^i} = t_{i+1} + p * (integral remainder)
    for p, i in ((2, 1), (2, 2), (3, 1)):
        c = BPContext(p, delta_p(p, p**i))
        d = special_element(c, p**i)
        rest = d.element - t_gen(c, i + 1)
        assert all(val_p(p, x) >= 1 for x in rest.terms.values())


def test_check_profile_raises():
    bad = MuLinear({0: Fraction(1, 16), 2: Fraction(1, 8)})  # pivot not at top val
    with pytest.raises(ConstructionError):
        _check_profile(2, 2, MuLinear({3: Fraction(1)}))  # support beyond n
    with pytest.raises(ConstructionError):
        _check_profile(2, 2, bad)  # entry 0 below -delta_2(2) = -3


def test_diagonal_action_validation_and_evaluation():
    with pytest.raises(ValueError):
        DiagonalAction(3, (Fraction(1, 3),))
    mu = DiagonalAction(3, (1, 4, 16))
    c = ctx3()
    sym = v1_functional(c, t_gen(c, 1))
    assert v1_functional(c, t_gen(c, 1), mu) == sym.evaluate(mu.values)
    img = diagonal_transform(c, t_gen(c, 1), mu)
    assert img.coefficient_of({"v1": 1}) == sym.evaluate(mu.values)


def test_concrete_integrality_matches_lattice_membership():
    # for concrete mu, integrality of every sampled functional is the
    # same condition as membership in the solved lattice
    from bpadams.centre import sampled_integrality_rows

    c = ctx3(4)
    rows = []
    n = 3
    for _, _, form in sampled_integrality_rows(c):
        top = form.top_index()
        if top is None or top <= n:
            rows.append(form.as_row(n + 1))
    lat = solve(CongruenceSystem(3, n, tuple(rows)))
    rng = random.Random(13)
    for _ in range(40):
        mu = [Fraction(rng.randint(-15, 15)) for _ in range(n + 1)]
        direct = all(
            val_p(3, sum((r * m for r, m in zip(row, mu)), Fraction(0))) >= 0
            for row in rows)
        assert direct == lat.contains(mu)

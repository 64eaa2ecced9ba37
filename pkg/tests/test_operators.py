import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intdiffops.action import (
    act_monomial,
    is_zero_by_action,
    matrices_equal_on_overlap,
    to_matrix,
)
from intdiffops.operators import (
    Operator,
    from_expression,
    principal_left_ideal_membership,
)
from intdiffops.scalars import ONE, Scalar


def gens(n):
    out = {}
    for i in range(1, n + 1):
        out[f"H_{i}"] = Operator.gen_H(n, i)
        out[f"d_{i}"] = Operator.gen_d(n, i)
        out[f"int_{i}"] = Operator.gen_int(n, i)
    return out


def test_defining_relations_arity1():
    g = gens(1)
    one = Operator.one(1)
    d, I, H = g["d_1"], g["int_1"], g["H_1"]
    assert d * I == one
    assert H.commutator(I) == I
    assert H.commutator(d) == -d
    proj = one - I * d
    assert H * proj == proj
    assert proj * H == proj


@pytest.mark.parametrize("n", [2, 3])
def test_defining_relations_higher_arity(n):
    g = gens(n)
    one = Operator.one(n)
    for i in range(1, n + 1):
        d, I, H = g[f"d_{i}"], g[f"int_{i}"], g[f"H_{i}"]
        assert d * I == one
        assert H.commutator(I) == I
        assert H.commutator(d) == -d
        proj = one - I * d
        assert H * proj == proj
    # cross-slot commutation
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                assert g[f"d_{i}"] * g[f"int_{j}"] == g[f"int_{j}"] * g[f"d_{i}"]
                assert g[f"H_{i}"] * g[f"d_{j}"] == g[f"d_{j}"] * g[f"H_{i}"]


def test_matrix_unit_calculus():
    e = lambda s, t: Operator.gen_e(1, s, t, 1)
    d = Operator.gen_d(1, 1)
    I = Operator.gen_int(1, 1)
    H = Operator.gen_H(1, 1)
    for s in range(3):
        for t in range(3):
            for u in range(3):
                for v in range(3):
                    prod = e(s, t) * e(u, v)
                    assert prod == (e(s, v) if t == u else Operator.zero(1))
            assert I * e(s, t) == e(s + 1, t)
            assert d * e(s + 1, t) == e(s, t)
            assert e(s, t) * I == (e(s, t - 1) if t >= 1 else Operator.zero(1))
            assert e(s, t) * d == e(s, t + 1)
            assert H * e(s, t) == e(s, t).scale(Scalar(s + 1))
            assert e(s, t) * H == e(s, t).scale(Scalar(t + 1))


def test_x_eliminated():
    x = Operator.gen_x(1, 1)
    assert x == Operator.gen_int(1, 1) * Operator.gen_H(1, 1)
    d = Operator.gen_d(1, 1)
    assert d * x - x * d == Operator.one(1)
    assert x * d == Operator.gen_H(1, 1) - Operator.one(1)


word_strategy = st.lists(
    st.sampled_from(["H", "d", "int", "x"]), min_size=1, max_size=6
)


@given(word_strategy, word_strategy)
@settings(max_examples=120, deadline=None)
def test_product_matches_action_oracle(w1, w2):
    n = 1

    def from_word(w):
        a = Operator.one(n)
        for name in w:
            a = a * getattr(Operator, f"gen_{name}")(n, 1)
        return a

    a, b = from_word(w1), from_word(w2)
    prod = a * b
    N = 8
    lhs = to_matrix(prod, N)
    rhs_b = to_matrix(b, N)
    rhs_a = to_matrix(a, N + b.max_positive_degree())
    from intdiffops.action import compose

    composed = compose(rhs_a, rhs_b)
    assert matrices_equal_on_overlap(
        lhs,
        type(lhs)(rhs_b.domain, rhs_a.codomain, composed),
    )


@given(word_strategy)
@settings(max_examples=60, deadline=None)
def test_faithfulness(w):
    a = Operator.one(1)
    for name in w:
        a = a * getattr(Operator, f"gen_{name}")(1, 1)
    assert a.is_zero() == is_zero_by_action(a)


def test_grading():
    a = Operator.gen_int(1, 1) ** 2 * Operator.gen_H(1, 1)
    b = Operator.gen_d(1, 1) + Operator.gen_e(1, 2, 0, 1)
    comps = (a + b).graded_components()
    assert set(comps) == {(2,), (-1,)}
    for deg, c in comps.items():
        assert c.is_homogeneous()
    # grading is multiplicative on homogeneous parts
    prod = a * Operator.gen_e(1, 0, 3, 1)
    for deg in prod.graded_components():
        assert deg == (2 + (0 - 3),)


def test_involution():
    d = Operator.gen_d(1, 1)
    I = Operator.gen_int(1, 1)
    H = Operator.gen_H(1, 1)
    e = Operator.gen_e(1, 1, 2, 1)
    assert d.involution() == I
    assert I.involution() == d
    assert H.involution() == H
    assert e.involution() == Operator.gen_e(1, 2, 1, 1)
    a = H ** 2 * d ** 3
    b = I * H
    assert (a * b).involution() == b.involution() * a.involution()
    assert a.involution().involution() == a


def test_prime_ideal_membership():
    e = Operator.gen_e(2, 0, 0, 1)
    assert e.in_prime_ideal((1,))
    assert not e.in_prime_ideal(())
    H = Operator.gen_H(2, 2)
    assert not H.in_prime_ideal((1, 2))


def test_principal_ideal_membership_d():
    d = Operator.gen_d(1, 1)
    H = Operator.gen_H(1, 1)
    member, wit = principal_left_ideal_membership(d ** 2 + H * d, "d")
    assert member
    assert wit * d == d ** 2 + H * d
    member, _ = principal_left_ideal_membership(Operator.one(1), "d")
    assert not member


def test_principal_ideal_membership_H_minus_lambda():
    H = Operator.gen_H(1, 1)
    d = Operator.gen_d(1, 1)
    lam = Scalar(1)
    member, wit = principal_left_ideal_membership(H * d, ("H", lam))
    assert member
    assert wit * (H - Operator.one(1)) == H * d
    e = Operator.gen_e(1, 2, 0, 1)
    member, _ = principal_left_ideal_membership(e, ("H", lam))
    assert not member


def test_parser_examples():
    from intdiffops.parser import parse_expression

    ast = parse_expression("d_1*int_1")
    assert from_expression(ast, 1) == Operator.one(1)
    ast = parse_expression("e[0,0]_2")
    assert from_expression(ast, 2) == Operator.gen_e(2, 0, 0, 2)


def test_print_parse_roundtrip():
    from intdiffops.parser import parse_expression

    a = (
        Operator.gen_int(2, 1) ** 2 * Operator.gen_H(2, 1)
        + Operator.gen_e(2, 1, 3, 2).scale(Scalar(-2))
        + Operator.from_scalar(2, Scalar(7))
    )
    assert from_expression(parse_expression(str(a)), 2) == a

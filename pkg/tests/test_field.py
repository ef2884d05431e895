from __future__ import annotations

import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from linsets.errors import BadParams, CtxMismatch, DivisionByZero, LinsetsError, NotPrime, ReduciblePolynomial
from linsets.field import (
    BaseField,
    Element,
    arith,
    element_degree,
    frobenius,
    is_irreducible,
    make_field,
    min_poly_over_fq,
    parse_element,
    parse_field_spec,
    smallest_irreducible,
    trace_rel,
)

FIELDS = [
    (2, 1, 3),
    (2, 1, 4),
    (2, 1, 6),
    (3, 1, 3),
    (3, 1, 4),
    (5, 1, 2),
    (2, 2, 3),  # q = 4, tables
    (3, 2, 2),  # q = 9
    (2, 1, 17),  # no tables
]


@st.composite
def field_and_elements(draw, count=2):
    p, e, n = draw(st.sampled_from(FIELDS))
    ctx = make_field(p, e, n)
    xs = [draw(st.integers(0, ctx.order - 1)) for _ in range(count)]
    return ctx, xs


@settings(max_examples=150, deadline=None)
@given(field_and_elements(2))
def test_mul_add_match_naive_polynomial_arithmetic(data):
    ctx, (a, b) = data
    F = oracles.naive_from_ctx(ctx)
    assert ctx.mul(a, b) == F.mul(a, b)
    assert ctx.add(a, b) == F.add(a, b)


@settings(max_examples=100, deadline=None)
@given(field_and_elements(3))
def test_field_axioms(data):
    ctx, (a, b, c) = data
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.add(a, ctx.neg(a)) == 0
    assert ctx.sub(ctx.add(a, b), b) == a
    if a:
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.div(ctx.mul(b, a), a) == b


@settings(max_examples=100, deadline=None)
@given(field_and_elements(1))
def test_trace_frobenius_min_poly(data):
    ctx, (a,) = data
    F = oracles.naive_from_ctx(ctx)
    assert ctx.trace(a) == F.trace(a)
    assert ctx.in_base(ctx.trace(a))
    assert ctx.frobenius(a, ctx.n * ctx.e) == a
    assert ctx.frobenius(a, 1) == F.power(a, ctx.p)
    mp = ctx.min_poly(a)
    assert mp[-1] == 1 and len(mp) == ctx.degree(a) + 1
    assert ctx.poly_eval(mp, a) == 0
    assert ctx.n % ctx.degree(a) == 0
    assert ctx.in_subfield(a, ctx.degree(a))


def test_default_polynomials_are_lexicographically_smallest():
    # constant term compared first
    assert make_field(2, 1, 3).fqn_poly == (1, 0, 1, 1)
    assert make_field(2, 1, 4).fqn_poly == (1, 0, 0, 1, 1)
    assert make_field(3, 1, 2).fqn_poly == (1, 0, 1)
    assert make_field(2, 2, 1).fq_poly == (1, 1, 1)
    Fp = BaseField(2, (0, 1))
    f = smallest_irreducible(6, Fp)
    below = []
    for v in range(2**6):
        cand = [(v >> (5 - i)) & 1 for i in range(6)] + [1]
        if cand < list(f):
            below.append(is_irreducible(cand, Fp))
    assert below and not any(below)


def test_irreducibility_against_root_search():
    Fp = BaseField(3, (0, 1))
    # degree 2 and 3 polynomials are irreducible iff they have no root
    for v in range(9):
        f = [v % 3, v // 3, 1]
        has_root = any((f[0] + f[1] * x + x * x) % 3 == 0 for x in range(3))
        assert is_irreducible(f, Fp) == (not has_root)


def test_bad_fields():
    with pytest.raises(NotPrime):
        make_field(4, 1, 2)
    with pytest.raises(ReduciblePolynomial):
        make_field(2, 1, 2, fqn_poly=[1, 0, 1])
    with pytest.raises(BadParams):
        make_field(2, 1, 2, fqn_poly=[1, 1])
    with pytest.raises(BadParams):
        make_field(2, 0, 2)
    assert issubclass(NotPrime, LinsetsError)


def test_zero_division_and_ctx_mismatch():
    ctx = make_field(2, 1, 3)
    with pytest.raises(DivisionByZero):
        ctx.inv(0)
    a = Element(ctx, 3)
    b = Element(make_field(2, 1, 4), 3)
    with pytest.raises(CtxMismatch):
        _ = a * b
    with pytest.raises(BadParams):
        arith(a, a, "pow")


def test_element_wrappers():
    ctx = make_field(2, 1, 4)
    lam = Element(ctx, ctx.gen)
    assert element_degree(lam) == 4
    assert min_poly_over_fq(lam) == list(ctx.fqn_poly)
    assert (lam**15).value == 1
    assert trace_rel(Element(ctx, 1)).value == 0  # Tr(1) = n = 0 in F_2
    assert frobenius(lam, 4) == lam
    assert arith(lam, lam, "add").value == 0
    assert str(lam) == "[0,1,0,0]"


def test_subfield_generators():
    ctx = make_field(2, 1, 12)
    for t in ctx.divisors_of_n():
        w = ctx.subfield_generator(t)
        assert ctx.degree(w) == t
        basis = ctx.subfield_basis(t)
        assert all(ctx.in_subfield(x, t) for x in basis)
    with pytest.raises(BadParams):
        ctx.subfield_generator(5)


def test_large_field_without_tables():
    ctx = make_field(2, 1, 17)
    assert ctx._exp is None
    a = ctx.gen
    assert ctx.pow(a, 2**17 - 1) == 1
    assert ctx.mul(a, ctx.inv(a)) == 1


def test_pickle_roundtrip():
    ctx = make_field(3, 1, 4)
    assert pickle.loads(pickle.dumps(ctx)) == ctx


def test_parse_field_spec():
    ctx = parse_field_spec("p=2,e=1,n=3,fqn=1,1,0,1")
    assert ctx == make_field(2, 1, 3, fqn_poly=[1, 1, 0, 1])
    assert parse_field_spec("p=2,n=3") == make_field(2, 1, 3)
    assert parse_field_spec(ctx.spec_string()) == ctx
    assert parse_field_spec("p=2,n=4").n == 4
    for bad in ("p=2", "p=2,n=3,x=1", "p=2,n=3,n=4", "p=2,n=three", "p=2,n=3,7"):
        with pytest.raises(BadParams):
            parse_field_spec(bad)


def test_parse_element():
    ctx = make_field(2, 1, 4)
    assert parse_element(ctx, "[1,0,1,0]").value == 5
    assert parse_element(ctx, "lambda").value == ctx.gen
    assert parse_element(ctx, "λ^3").value == ctx.pow(ctx.gen, 3)
    assert parse_element(ctx, "sub:2").value == ctx.subfield_generator(2)
    for bad in ("[1,0]", "lambda3", "[2,0,0,0]", "sub:x"):
        with pytest.raises(BadParams):
            parse_element(ctx, bad)

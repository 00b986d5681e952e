import pytest

from virtual_wrt.algebra.poly import RootParams, close, delta_poly
from virtual_wrt.algebra.tangle import (
    BrauerDiagram,
    BrauerElement,
    closure,
    cup_cap,
    identity,
    jw,
    lemma_formula,
    lemma_product,
    multiply,
    partial_trace_factor,
    permutation,
    tensor_identity,
    virtual_permutations,
    virtual_swap,
)
from virtual_wrt.errors import DomainError


def test_diagram_validation():
    with pytest.raises(ValueError):
        BrauerDiagram(2, (1, 0, 3))
    with pytest.raises(ValueError):
        BrauerDiagram(1, (0, 1))


def test_compose_cup_cap_makes_a_loop():
    u = cup_cap(2, 1)
    product, loops = u.compose(u)
    assert product == u
    assert loops == 1
    product, loops = identity(3).compose(cup_cap(3, 2))
    assert product == cup_cap(3, 2)
    assert loops == 0


def test_virtual_swap_is_an_involution():
    e = virtual_swap(3, 1)
    assert not e.is_planar()
    assert e.compose(e) == (identity(3), 0)
    assert cup_cap(3, 1).is_planar()


def test_temperley_lieb_relations(generic):
    u1 = BrauerElement.of(cup_cap(3, 1), generic)
    u2 = BrauerElement.of(cup_cap(3, 2), generic)
    assert multiply(u1, u1, generic).equals(u1.scale(generic.d))
    assert multiply(multiply(u1, u2, generic), u1, generic).equals(u1)


def test_jw2_terms(generic):
    t2 = jw(2, generic)
    assert t2.terms[identity(2)] == generic.one
    assert t2.terms[cup_cap(2, 1)] == -1 / generic.d
    assert len(t2.terms) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projector_properties(n, generic):
    t = jw(n, generic)
    assert multiply(t, t, generic).equals(t)
    zero = BrauerElement(n, {}, generic)
    for i in range(1, n):
        assert multiply(t, BrauerElement.of(cup_cap(n, i), generic), generic).equals(zero)
        assert multiply(BrauerElement.of(cup_cap(n, i), generic), t, generic).equals(zero)
    for m in range(1, n):
        smaller = jw(m, generic)
        for _ in range(n - m):
            smaller = tensor_identity(smaller)
        assert multiply(t, smaller, generic).equals(t)
    assert closure(t, generic) == delta_poly(n).to_field()
    assert t.is_planar()


def test_projector_closure_at_roots():
    for r in (4, 5):
        ctx = RootParams(r)
        for n in range(r):
            assert close(closure(jw(n, ctx), ctx), ctx.delta(n))


def test_projector_beyond_level():
    with pytest.raises(DomainError):
        jw(4, RootParams(4))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_partial_trace_over_virtual_permutations(n, generic):
    big = jw(n, generic)
    small = jw(n - 1, generic)
    for p in virtual_permutations(n - 1):
        lhs = closure(multiply(big, BrauerElement.of(p.tensor_identity(), generic), generic), generic)
        rhs = partial_trace_factor(n, generic) * closure(multiply(small, BrauerElement.of(p, generic), generic), generic)
        assert lhs == rhs


def test_virtual_permutations_count():
    perms = list(virtual_permutations(3))
    assert len(perms) == 6
    assert permutation((0, 1, 2)) == identity(3)
    assert sum(p.is_planar() for p in perms) == 1


def test_lemma_n2(generic):
    d = generic.d
    assert lemma_product(2, generic) == (d - 1) / d


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lemma_generic(n, generic):
    value = lemma_product(n, generic)
    assert value == lemma_formula(n, generic)
    assert value != 0


@pytest.mark.slow
def test_lemma_five_and_roots(generic):
    assert lemma_product(5, generic) == lemma_formula(5, generic)
    for r in range(5, 9):
        ctx = RootParams(r)
        for n in range(2, min(5, r - 1) + 1):
            value = lemma_product(n, ctx)
            assert close(value, lemma_formula(n, ctx))
            if n == r - 1:
                assert abs(value) < 1e-9
            else:
                assert abs(value) > 1e-9


@pytest.mark.parametrize("r", [4, 5])
def test_lemma_vanishes_one_below_the_level(r):
    ctx = RootParams(r)
    assert abs(partial_trace_factor(r - 1, ctx)) < 1e-9
    assert abs(lemma_formula(r - 1, ctx)) < 1e-9
    assert abs(lemma_formula(r - 2, ctx)) > 1e-9

import itertools

import pytest

from virtual_wrt.algebra.poly import A, GENERIC, RootParams, close, delta_poly
from virtual_wrt.algebra.recoupling import (
    HOPF_CODE,
    admissible,
    bead_removal_coeff,
    crossing_coeff,
    evaluate_network,
    example_sums,
    example_table,
    fusion_coeff,
    hopf_closure,
    lambda_twist,
    recoupling_coeff,
    tet,
    tet_net,
    theta,
    theta_net,
)
from virtual_wrt.diagram.codec import parse_diagram
from virtual_wrt.errors import DomainError
from virtual_wrt.invariants.bracket import bracket_unreduced
from virtual_wrt.invariants.colored import splice_and_evaluate
from virtual_wrt.invariants.conventions import PRINTED_BRACKETS


@pytest.mark.parametrize(
    "triple,r,expected",
    [
        ((1, 1, 0), None, True),
        ((1, 1, 2), None, True),
        ((1, 1, 1), None, False),
        ((3, 1, 1), None, False),
        ((-1, 1, 0), None, False),
        ((1, 1, 2), 3, False),
        ((1, 1, 2), 4, True),
        ((2, 2, 2), 5, True),
        ((2, 2, 4), 5, False),
    ],
)
def test_admissible(triple, r, expected):
    assert admissible(*triple, r) is expected


def test_theta_values():
    assert theta(0, 0, 0) == 1
    assert theta(1, 1, 0) == GENERIC.d
    assert theta(1, 1, 2) == delta_poly(2).to_field()
    for a in range(4):
        assert theta(a, a, 0) == delta_poly(a).to_field()


def test_tet_values():
    d = GENERIC.d
    assert tet(1, 1, 0, 1, 1, 0) == d
    assert tet(1, 1, 0, 1, 1, 2) == theta(1, 1, 2)
    assert tet(1, 1, 2, 1, 1, 2) == -delta_poly(2).to_field() / d


def test_inadmissible_raises():
    with pytest.raises(DomainError):
        theta(1, 1, 1)
    with pytest.raises(DomainError):
        theta(1, 1, 2, RootParams(3))
    with pytest.raises(DomainError):
        bead_removal_coeff(1, 1, 2, RootParams(3))


def test_recoupling_matrix_is_an_involution():
    d = GENERIC.d
    labels = (0, 2)
    m = {(i, j): recoupling_coeff(1, 1, 1, 1, i, j) for i in labels for j in labels}
    assert m[(0, 0)] == 1 / d
    assert m[(0, 2)] == 1 - 1 / d ** 2
    assert m[(2, 0)] == 1
    assert m[(2, 2)] == -1 / d
    for i, k in itertools.product(labels, repeat=2):
        entry = sum(m[(i, j)] * m[(j, k)] for j in labels)
        assert entry == (1 if i == k else 0)


def test_fusion_and_bead():
    d = GENERIC.d
    assert fusion_coeff(1, 1, 0) == 1 / d
    assert fusion_coeff(1, 1, 0) == recoupling_coeff(1, 1, 1, 1, 0, 0)
    assert bead_removal_coeff(1, 1, 0) == d
    assert bead_removal_coeff(1, 1, 2) == 1


def test_lambda_twist():
    assert lambda_twist(1, 1, 0) == (-(A ** 3)).to_field()
    assert lambda_twist(1, 1, 2) == (A ** -1).to_field()
    assert lambda_twist(1, 1, 0, conjugate=True) == (-(A ** -3)).to_field()
    assert lambda_twist(0, 0, 0) == 1


def test_crossing_expansion_closes_to_the_kink():
    # closing one crossing of two 1-strands through each channel gives a negative curl
    total = sum(crossing_coeff(1, 1, i) * theta(1, 1, i) for i in (0, 2))
    assert total == bracket_unreduced(parse_diagram("O1-U1-")).to_field()


def test_network_oracle_small():
    assert evaluate_network(theta_net(1, 1, 2)) == theta(1, 1, 2)
    assert evaluate_network(theta_net(1, 1, 0)) == theta(1, 1, 0)
    ctx = RootParams(5)
    assert close(evaluate_network(theta_net(2, 2, 2), ctx), theta(2, 2, 2, ctx))


@pytest.mark.slow
def test_network_oracle_at_roots():
    labels = range(3)
    for r in range(3, 7):
        ctx = RootParams(r)
        for a, b, c in itertools.product(labels, repeat=3):
            if admissible(a, b, c, r):
                assert close(evaluate_network(theta_net(a, b, c), ctx), theta(a, b, c, ctx))
        for a, b, e, c, d, f in itertools.product(labels, repeat=6):
            if all(admissible(*t, r) for t in ((a, d, e), (b, c, e), (a, b, f), (c, d, f))):
                assert close(evaluate_network(tet_net(a, b, e, c, d, f), ctx), tet(a, b, e, c, d, f, ctx))


@pytest.mark.parametrize("key", sorted(PRINTED_BRACKETS))
def test_example_sums_match_printed(key):
    variant, r = key
    assert close(example_sums(variant, r), PRINTED_BRACKETS[key], 1e-4)


def test_example_sums_general_form():
    assert close(example_sums("K", 3, form="general", conjugate=False), 2)


def test_example_sums_rejects_bad_arguments():
    with pytest.raises(ValueError):
        example_sums("L", 3)
    with pytest.raises(ValueError):
        example_sums("K", 3, form="other", conjugate=False)
    with pytest.raises(DomainError):
        example_table(5)


def _admissible_triples(top: int):
    return [t for t in itertools.product(range(top), repeat=3) if admissible(*t)]


def test_theta_is_symmetric():
    for triple in _admissible_triples(4):
        value = theta(*triple)
        for perm in itertools.permutations(triple):
            assert theta(*perm) == value


def test_tet_symmetries():
    checked = 0
    for a, b, e, c, d, f in itertools.product(range(3), repeat=6):
        if not all(admissible(*t) for t in ((a, d, e), (b, c, e), (a, b, f), (c, d, f))):
            continue
        value = tet(a, b, e, c, d, f)
        assert tet(a, d, f, c, b, e) == value
        assert tet(c, d, e, a, b, f) == value
        assert tet(e, b, a, f, d, c) == value
        checked += 1
    assert checked > 20


def test_twist_times_conjugate_is_one():
    for a, b, c in _admissible_triples(5):
        assert lambda_twist(a, b, c) * lambda_twist(a, b, c, conjugate=True) == 1


@pytest.mark.parametrize("colors", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_tet_expansion_of_the_hopf_link_matches_the_state_sum(colors):
    a, b = colors
    expected = splice_and_evaluate(parse_diagram(HOPF_CODE), [a, b], GENERIC)
    assert hopf_closure(a, b) == expected


def test_tet_expansion_of_the_uncolored_hopf_link():
    d = GENERIC.d
    assert hopf_closure(1, 1) == d * (-(GENERIC.A ** 4) - GENERIC.A ** -4)

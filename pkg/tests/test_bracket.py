import pytest

from virtual_wrt.algebra.poly import A, D_POLY, JonesPoly, RootParams, close
from virtual_wrt.diagram.codec import mirror, parse_diagram
from virtual_wrt.diagram.library import builtin
from virtual_wrt.errors import BudgetExceededError
from virtual_wrt.invariants.bracket import (
    SmoothingState,
    StateGraph,
    bracket_reduced,
    bracket_unreduced,
    count_cycles,
    f_poly,
    jones,
    loops,
    state_counts,
)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("unknot", 1),
        ("kink+", -(A ** 3)),
        ("kink-", -(A ** -3)),
        ("hopf+", -(A ** 4) - A ** -4),
        ("unlink", D_POLY),
        ("trefoil", -(A ** 5) - A ** -3 + A ** -7),
        ("vtrefoil", A ** 2 + 1 - A ** -4),
        ("paperK", A ** 6),
        ("paperKhat", -(A ** 9)),
    ],
)
def test_reduced_brackets(name, expected):
    assert bracket_reduced(builtin(name)) == expected


def test_unreduced_is_reduced_times_d(trefoil, unknot):
    assert bracket_unreduced(unknot) == D_POLY
    assert bracket_unreduced(trefoil) == D_POLY * bracket_reduced(trefoil)
    assert bracket_unreduced(parse_diagram(";")) == D_POLY ** 2


def test_double_kink():
    assert bracket_reduced(parse_diagram("O1+U2+O2+U1+")) == A ** 6
    assert f_poly(parse_diagram("O1+U2+O2+U1+")) == 1


def test_reidemeister_two_bigon():
    assert bracket_reduced(parse_diagram("O1+O2-U1+U2-")) == 1


def test_loops_of_states():
    kink = builtin("kink+")
    assert loops(kink, SmoothingState(("a",))) == 2
    assert loops(kink, SmoothingState(("b",))) == 1
    bigon = parse_diagram("O1+O2-U1+U2-")
    assert loops(bigon, SmoothingState(("a", "a"))) == 1
    assert loops(bigon, SmoothingState(("b", "a"))) == 2
    with pytest.raises(ValueError):
        loops(kink, SmoothingState(("a", "b")))


def test_state_counts_total(trefoil):
    graph, _ = StateGraph.from_diagram(trefoil)
    counts = state_counts(graph)
    assert sum(counts.values()) == 8


def test_mirror_inverts_variable(trefoil, paper_k):
    assert bracket_reduced(mirror(trefoil)) == bracket_reduced(trefoil).mirror()
    assert bracket_reduced(mirror(paper_k)) == A ** -6
    vtrefoil = builtin("vtrefoil")
    assert bracket_reduced(mirror(vtrefoil)) == bracket_reduced(vtrefoil).mirror()


def test_orientation_convention_is_the_mirror_map(trefoil):
    assert bracket_reduced(builtin("kink+"), orientation=-1) == -(A ** -3)
    assert bracket_reduced(trefoil, orientation=-1) == bracket_reduced(trefoil).mirror()


def test_f_poly_and_jones(trefoil):
    assert f_poly(trefoil) == A ** -4 + A ** -12 - A ** -16
    assert jones(trefoil) == JonesPoly({1: 1, 3: 1, 4: -1})
    assert f_poly(builtin("kink+")) == 1
    assert f_poly(builtin("kink-")) == 1


def test_root_evaluation_matches_polynomial(trefoil):
    for r in (3, 5, 7):
        ctx = RootParams(r)
        assert close(bracket_reduced(trefoil, ctx), bracket_reduced(trefoil).evaluate(ctx.A))


def test_budget(trefoil):
    with pytest.raises(BudgetExceededError):
        bracket_reduced(trefoil, budget=2)


def test_count_cycles():
    assert count_cycles([]) == 0
    assert count_cycles([(0, 1), (1, 0)]) == 1
    assert count_cycles([(0, 1), (2, 3), (1, 2)]) == 1
    assert count_cycles([(0, 1), (2, 3)]) == 2

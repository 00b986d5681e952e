import pytest

from virtual_wrt.diagram.codec import disjoint_union, parse_diagram
from virtual_wrt.diagram.library import builtin
from virtual_wrt.errors import DomainError
from virtual_wrt.invariants.groups import (
    AbelianInvariants,
    GroupPresentation,
    abelianization,
    arcs,
    count_homomorphisms,
    handle_slide_longitude,
    invert,
    longitude,
    reduce_word,
    three_manifold_group,
    wirtinger,
)
from virtual_wrt.moves.moves import apply, enumerate_sites


def test_reduce_and_invert():
    word = (("x1", 1), ("x2", 1), ("x2", -1), ("x1", 2))
    assert reduce_word(word) == (("x1", 3),)
    assert reduce_word((("x1", 1), ("x1", -1))) == ()
    assert invert((("x1", 1), ("x2", -2))) == (("x2", 2), ("x1", -1))


def test_presentation_checks_generators():
    with pytest.raises(ValueError):
        GroupPresentation(["x1"], [(("x2", 1),)])
    p = GroupPresentation(["x1", "x2"], [(("x1", 1), ("x2", -1))])
    assert str(p) == "< x1, x2 | x1 x2^-1 >"
    assert p.to_dict() == {"generators": ["x1", "x2"], "relators": ["x1 x2^-1"]}


def test_abelian_invariants_str():
    assert str(AbelianInvariants(0)) == "1"
    assert str(AbelianInvariants(1)) == "Z"
    assert str(AbelianInvariants(2, (2,))) == "Z/2 + Z + Z"
    assert AbelianInvariants(0).is_trivial


def test_arcs_of_vtrefoil():
    data = arcs(builtin("vtrefoil"))
    assert data.names == ("x1", "x2")
    assert data.over == {1: "x2", 2: "x2"}
    assert data.under_out == {1: "x1", 2: "x2"}
    assert data.under_in == {1: "x2", 2: "x1"}


def test_wirtinger_abelianizes_to_free_group():
    for name in ("trefoil", "vtrefoil", "paperK", "paperKhat", "unknot"):
        assert str(abelianization(wirtinger(builtin(name)))) == "Z"
    assert str(abelianization(wirtinger(builtin("unlink")))) == "Z + Z"
    assert str(abelianization(wirtinger(builtin("hopf+")))) == "Z + Z"


def test_longitudes():
    assert reduce_word(longitude(builtin("vtrefoil"), 0)) == (("x2", 2),)
    hopf = builtin("hopf+")
    assert longitude(hopf, 0) == (("x2", 1),)
    assert longitude(hopf, 1) == (("x1", 1),)
    with pytest.raises(IndexError):
        longitude(hopf, 2)


@pytest.mark.parametrize(
    "name,expected",
    [("unknot", "Z"), ("kink+", "1"), ("kink-", "1"), ("vtrefoil", "Z/2"),
     ("paperK", "Z/2"), ("paperKhat", "Z/3"), ("hopf+", "1")],
)
def test_three_manifold_abelianization(name, expected):
    assert str(abelianization(three_manifold_group(builtin(name)))) == expected


def test_homomorphisms_into_s3():
    assert count_homomorphisms(wirtinger(builtin("trefoil")), 3) == 12
    assert count_homomorphisms(wirtinger(parse_diagram("")), 3) == 6
    assert count_homomorphisms(three_manifold_group(builtin("paperK")), 3) == 4
    assert count_homomorphisms(GroupPresentation([]), 3) == 1
    with pytest.raises(DomainError):
        count_homomorphisms(wirtinger(builtin("trefoil")), 5)


def test_handle_slide_longitude():
    hopf = builtin("hopf+")
    assert handle_slide_longitude(hopf, 0, 1) == (("x2", 1), ("x1", 1))
    assert handle_slide_longitude(hopf, 0, 1, sign=-1) == (("x2", 1), ("x1", -1))
    with pytest.raises(ValueError):
        handle_slide_longitude(hopf, 0, 0)


def _slid_presentation(diagram, site):
    source, target = site.component, site.other_component
    relators = [handle_slide_longitude(diagram, source, target, site.sign)]
    relators += [reduce_word(longitude(diagram, i)) for i in range(len(diagram.components)) if i != source]
    return wirtinger(diagram).with_relators(relators)


def test_slide_longitude_matches_applied_slides_on_hopf():
    hopf = builtin("hopf+")
    sites = enumerate_sites(hopf, "handle-slide")
    assert sites
    for site in sites:
        slid = three_manifold_group(apply(hopf, site))
        predicted = _slid_presentation(hopf, site)
        assert abelianization(slid) == abelianization(predicted)
        assert count_homomorphisms(slid, 3) == count_homomorphisms(predicted, 3) == 1


def test_slide_longitude_matches_applied_slides_on_a_split_link():
    diagram = disjoint_union(builtin("vtrefoil"), parse_diagram("O1+U1+"))
    sites = enumerate_sites(diagram, "handle-slide")
    assert len(sites) == 2 * (4 * 2 * 2)
    for site in sites[::5]:
        slid = three_manifold_group(apply(diagram, site))
        predicted = _slid_presentation(diagram, site)
        assert str(abelianization(slid)) == str(abelianization(predicted)) == "Z/2"
        assert count_homomorphisms(slid, 3) == count_homomorphisms(predicted, 3)

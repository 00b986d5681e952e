import pytest

from virtual_wrt.diagram.codec import serialize, writhe
from virtual_wrt.diagram.library import DiagramLibrary, builtin, builtin_names


def test_registry_contents():
    names = builtin_names()
    for name in ("unknot", "kink+", "kink-", "hopf+", "unlink", "trefoil", "vtrefoil", "paperK", "paperKhat"):
        assert name in names


def test_worked_examples():
    k = builtin("paperK")
    khat = builtin("paperKhat")
    assert serialize(k) == "O1+U2+O2+U1+"
    assert serialize(khat) == "O1+U2+O2+U1+O3+U3+"
    assert writhe(k) == 2
    assert writhe(khat) == 3
    assert k.name == "paperK"


def test_worked_examples_record_how_they_were_found():
    library = DiagramLibrary()
    k, khat = library.get_entry("paperK"), library.get_entry("paperKhat")
    assert "derive_example_knots" in k.provenance
    assert "three classical" in k.notes
    assert "r = 4" in k.notes
    assert "Z/3" in khat.notes


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("no-such-diagram")


def test_custom_directory(tmp_path):
    entry = tmp_path / "figure-eight"
    entry.mkdir()
    (entry / "diagram.yaml").write_text(
        'name: fig8\ncode: "O1-U2+O3-U1-O2+U3-"\ndescription: test entry\naliases: [fig-8]\nnotes: |\n  Notes.\n',
        encoding="utf-8",
    )
    lib = DiagramLibrary(tmp_path)
    assert lib.names() == ["fig8"]
    assert lib.load("fig-8").crossing_count == 3
    entry = lib.get_entry("fig8")
    assert entry.description == "test entry"
    assert entry.notes.strip() == "Notes."
    assert entry.provenance == ""


def test_entry_name_defaults_to_directory(tmp_path):
    (tmp_path / "curl").mkdir()
    (tmp_path / "curl" / "diagram.yaml").write_text('code: "O1+U1+"\n', encoding="utf-8")
    assert DiagramLibrary(tmp_path).names() == ["curl"]


def test_invalid_entries_are_skipped(tmp_path):
    for name, text in (("broken", "code: [unclosed\n"), ("listy", "- a\n- b\n"), ("typed", "name: x\naliases: 3\n")):
        (tmp_path / name).mkdir()
        (tmp_path / name / "diagram.yaml").write_text(text, encoding="utf-8")
    (tmp_path / "good").mkdir()
    (tmp_path / "good" / "diagram.yaml").write_text("name: good\n", encoding="utf-8")
    assert DiagramLibrary(tmp_path).names() == ["good"]


def test_missing_directory(tmp_path):
    assert DiagramLibrary(tmp_path / "absent").names() == []

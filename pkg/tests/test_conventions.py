import pytest

from virtual_wrt.errors import CalibrationError
from virtual_wrt.invariants.conventions import (
    PRINTED_BRACKETS,
    PRINTED_Z,
    CandidateReport,
    ConventionLedger,
    StateSumComparison,
    StateSumDiscrepancy,
    calibrate_conventions,
    candidate_ledgers,
    current_conventions,
    load_ledger,
)


def test_shipped_ledger():
    ledger = load_ledger()
    assert ledger.bracket_orientation == 1
    assert ledger.twist == "lambda"
    assert ledger.alpha_sign == 1
    assert ledger.example_sum_form == "displayed"
    assert ledger.example_signature == 1
    assert len(ledger.ties) == 1
    assert current_conventions() == ledger


def test_missing_ledger(tmp_path):
    with pytest.raises(CalibrationError):
        load_ledger(tmp_path / "absent.yaml")


def test_invalid_ledger(tmp_path):
    path = tmp_path / "conventions.yaml"
    path.write_text("twist: sideways\n", encoding="utf-8")
    with pytest.raises(CalibrationError):
        load_ledger(path)


def test_partial_ledger_uses_defaults(tmp_path):
    path = tmp_path / "conventions.yaml"
    path.write_text("alpha_sign: -1\n", encoding="utf-8")
    ledger = load_ledger(path)
    assert ledger.alpha_sign == -1
    assert ledger.bracket_orientation == 1


def test_candidates_cover_every_combination():
    candidates = candidate_ledgers()
    assert len(candidates) == 8
    assert len({c.label() for c in candidates}) == 8
    assert all(c.ties == [] for c in candidates)


def _reports(passing):
    return [CandidateReport(c, passed=c.label() in passing) for c in candidate_ledgers()]


def test_calibration_prefers_positive_orientation():
    preferred = ConventionLedger(bracket_orientation=1, twist="lambda", alpha_sign=1)
    mirrored = ConventionLedger(bracket_orientation=-1, twist="lambda", alpha_sign=-1)
    chosen = calibrate_conventions(_reports({preferred.label(), mirrored.label()}))
    assert chosen.label() == preferred.label()
    assert len(chosen.ties) == 1
    assert mirrored.label() in chosen.ties[0]


def test_calibration_single_winner():
    only = ConventionLedger(bracket_orientation=-1, twist="lambda_bar", alpha_sign=1)
    chosen = calibrate_conventions(_reports({only.label()}))
    assert chosen.label() == only.label()
    assert chosen.ties == []


def test_calibration_without_a_winner():
    with pytest.raises(CalibrationError):
        calibrate_conventions(_reports(set()))


def test_state_sum_comparison():
    c = StateSumComparison("K", 3, 1j, 1 + 0j)
    assert c.modulus_error == pytest.approx(0.0)
    assert c.phase_error == pytest.approx(1.5707963, abs=1e-6)
    assert StateSumComparison("K", 3, 0j, 1 + 0j).phase_error == 0.0


def test_printed_tables_agree_on_keys():
    assert set(PRINTED_BRACKETS) == set(PRINTED_Z)


@pytest.mark.slow
def test_full_calibration():
    chosen = calibrate_conventions()
    assert chosen.bracket_orientation == 1
    assert chosen.twist == "lambda"
    assert chosen.alpha_sign == 1
    assert len(chosen.ties) == 1


def test_shipped_discrepancies():
    ledger = load_ledger()
    assert {(d.variant, d.r) for d in ledger.state_sum_discrepancies} == {("K", 4), ("Khat", 4)}
    assert ledger.discrepancy("K", 4).value == pytest.approx(-0.382683)
    assert ledger.discrepancy("K", 3) is None


def test_state_sum_status():
    ledger = ConventionLedger(state_sum_discrepancies=[
        StateSumDiscrepancy(variant="K", r=4, state_sum=(-0.382683, 0.0), reason="pinned"),
    ])
    assert StateSumComparison("K", 3, 0.707107j, 0.707107j).status(ledger) == "matches"
    assert StateSumComparison("K", 4, -0.382683 + 0j, -0.517982 + 0.135299j).status(ledger) == "pinned"
    # drifting away from the pinned value is not excused
    assert StateSumComparison("K", 4, -0.39 + 0j, -0.517982 + 0.135299j).status(ledger) == "unexplained"
    assert StateSumComparison("Khat", 4, 1 + 0j, 0j).status(ledger) == "unexplained"


def test_unpinned_state_sum_fails_verify(tmp_path, monkeypatch):
    from virtual_wrt.cli.verify import check_printed_values
    from virtual_wrt.config.settings import settings

    path = tmp_path / "conventions.yaml"
    path.write_text("example_signature: 1\n", encoding="utf-8")
    monkeypatch.setattr(settings, "conventions_path", str(path))
    current_conventions.cache_clear()
    try:
        passed, detail = check_printed_values()
    finally:
        current_conventions.cache_clear()
    assert not passed
    assert "no pinned discrepancy" in detail


def test_shipped_ledger_passes_printed_values():
    from virtual_wrt.cli.verify import check_printed_values

    passed, detail = check_printed_values()
    assert passed, detail

import pytest

from coarsedouble.scenarios import SCENARIO_NAMES, expected_tables, run_scenario
from coarsedouble.verdicts import revalidate


def test_expected_tables_cover_all_scenarios():
    tables = expected_tables()
    assert set(tables) == set(SCENARIO_NAMES)


@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_scenario_matches_expected(name):
    rep = run_scenario(name)
    assert rep.passed, rep.mismatches
    for v in rep.verdicts:
        assert revalidate(v)


def test_typeI_growth_is_strict():
    rep = run_scenario("typeI")
    growth = rep.results["details"]["product"]["diagnostics"]["growth"]
    assert growth
    for series in growth.values():
        ks = [k for _, k in series]
        assert len(ks) >= 3
        assert all(b > a for a, b in zip(ks, ks[1:]))


def test_ex1_candidate_rows():
    rep = run_scenario("ex1")
    rows = rep.results["details"]["candidates"]
    assert len(rows) >= 5
    # the complement-of-neighborhood family meets the proof mechanism: the
    # join reaches the unit but the meet is never zero
    comp = [r for r in rows if r["candidate"].startswith("complement-")]
    assert all(r["join_is_one"] and not r["meet_is_zero"] for r in comp)
    assert not any(r["complementable"] for r in rows)

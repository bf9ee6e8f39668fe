"""Verification pipelines: case analyses, censuses, worked examples."""

import json

import pytest

from toricpairs.verify import (
    DEFAULT_CASES,
    load_fixture,
    results_to_json,
    verify_canonical_rho1,
    verify_case,
    verify_examples,
    verify_kobayashi_ochiai,
    verify_theorem31,
)


@pytest.mark.parametrize("case_id", DEFAULT_CASES)
def test_case_pipelines_pass(case_id):
    res = verify_case(case_id)
    failed = [c.name for c in res.checks if not c.passed]
    assert res.passed, failed


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        verify_case("9.9")


def test_kobayashi_ochiai_passes():
    res = verify_kobayashi_ochiai()
    assert res.passed, [c.name for c in res.checks if not c.passed]


def test_examples_pass():
    res = verify_examples()
    assert res.passed, [c.name for c in res.checks if not c.passed]


def test_canonical_census_default_bound():
    res = verify_canonical_rho1()
    assert res.passed, [c.name for c in res.checks if not c.passed]


def test_theorem31_fault_injection_fails_by_design():
    res = verify_theorem31(inject_fault=True)
    assert not res.passed
    names = {c.name: c.passed for c in res.checks}
    assert names["coefficient 5/4 rejected by the pair validator"]
    assert not names["injected fault mode"]


def test_results_json_is_deterministic():
    r1 = [verify_case("4.2"), verify_kobayashi_ochiai()]
    r2 = [verify_case("4.2"), verify_kobayashi_ochiai()]
    assert json.dumps(results_to_json(r1)) == json.dumps(results_to_json(r2))
    data = results_to_json(r1)
    assert data["status"] == "PASS"
    # runtimes are excluded by default so reports are reproducible
    assert "runtime" not in json.dumps(data)


def test_fixture_files_load():
    for name in ("case41", "case42", "case43", "not_descend"):
        fx = load_fixture(name)
        assert isinstance(fx, dict)

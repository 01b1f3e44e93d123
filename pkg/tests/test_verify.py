import json

import pytest

from pcflows import verify


def test_registry_nonempty():
    for suite in verify.SUITES:
        assert verify._REGISTRY[suite]


@pytest.mark.parametrize("suite", ["algebra", "theorems", "densities"])
def test_symbolic_suites_pass(suite):
    rep = verify.run_suite(suite)
    assert rep.passed, rep.summary()


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")


def test_crashing_check_fails():
    res = verify._run_one("x", "boom", lambda fast: 1 / 0, False)
    assert not res.passed and "ZeroDivisionError" in res.detail
    assert res.line().startswith("[FAIL] x/boom")


def test_report_json_is_ordered():
    rep = verify.run_suite("algebra", workers=3)
    data = json.loads(verify.report_json(rep))
    assert [r["name"] for r in data["results"]] == [n for n, _ in verify._REGISTRY["algebra"]]


def test_workers_from_env(monkeypatch):
    monkeypatch.setenv("PCFLOWS_WORKERS", "2")
    assert verify.workers_from_env() == 2
    monkeypatch.setenv("PCFLOWS_WORKERS", "many")
    assert verify.workers_from_env(5) == 5


def test_fast_numeric_suite():
    rep = verify.run_suite("numeric", fast=True)
    assert rep.passed, rep.summary()

import json

from ffverify.report import VerificationReport, timed


def test_report_shape():
    rep = VerificationReport("t", {"n": 2}, population=3, census={"b": 1, "a": 2})
    assert rep.passed and rep.consistent()
    d = rep.to_dict()
    assert d["schema"] == 1 and d["pass"] and "wall_ms" not in d
    assert list(d["census"]) == ["a", "b"]
    assert json.loads(rep.to_json()) == d


def test_failures_and_timing():
    rep = VerificationReport("t", {})
    with timed(rep):
        rep.fail({"z": 1})
        rep.fail({"a": 1})
    d = rep.to_dict(timing=True)
    assert not d["pass"] and d["wall_ms"] >= 0
    assert d["violations"] == [{"a": 1}, {"z": 1}]
    assert rep.summary().startswith("FAIL")


def test_consistency_counts_out_of_scope():
    rep = VerificationReport("t", {}, population=5, census={"x": 2}, out_of_scope=3)
    assert rep.consistent()
    rep.out_of_scope = 2
    assert not rep.consistent()

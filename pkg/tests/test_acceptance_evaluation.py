import json

import pytest

from acceptance_evaluation import AcceptanceEvaluator


CHEAP = ["hand_checkable_count", "exact_oracle_identities", "orthogonality", "character_reconstruction"]


def test_cheap_criteria_pass(tmp_path):
    evaluator = AcceptanceEvaluator(quick=True)
    results = evaluator.run_evaluation(only=CHEAP)
    assert results["metrics"]["total_criteria"] == len(CHEAP)
    assert results["metrics"]["passed_criteria"] == len(CHEAP)

    path = evaluator.save_results(str(tmp_path / "results.json"))
    saved = json.loads((tmp_path / "results.json").read_text(encoding="utf-8"))
    assert path.endswith("results.json")
    assert [r["criterion"] for r in saved["detailed_results"]] == CHEAP


def test_errors_are_recorded_not_raised():
    evaluator = AcceptanceEvaluator(quick=True)

    def broken():
        raise RuntimeError("boom")

    evaluator.criteria["orthogonality"] = broken
    results = evaluator.run_evaluation(only=["orthogonality"])
    detail = results["detailed_results"][0]
    assert detail["passed"] is False
    assert "boom" in detail["error"]


@pytest.mark.slow
def test_full_quick_run():
    results = AcceptanceEvaluator(quick=True).run_evaluation()
    assert results["metrics"]["pass_rate"] == 100.0


def test_criteria_run_in_requested_order():
    evaluator = AcceptanceEvaluator(quick=True)
    requested = ["orthogonality", "hand_checkable_count"]
    results = evaluator.run_evaluation(only=requested)
    assert [r["criterion"] for r in results["detailed_results"]] == requested


def test_unknown_criterion_is_rejected():
    with pytest.raises(ValueError, match="no_such_check"):
        AcceptanceEvaluator(quick=True).run_evaluation(only=["orthogonality", "no_such_check"])

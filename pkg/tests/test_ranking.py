import numpy as np
import pytest

from riskrank.errors import ParamError
from riskrank.ranking import SurveyMatrix, describe_factors, mode_of, rank_factors


def test_mode_simple():
    assert mode_of([1, 1, 2]) == (1, 2, False)


def test_mode_tie_goes_to_smallest_value():
    assert mode_of([1, 2]) == (1, 1, True)
    assert mode_of([5, 3, 5, 3, 9]) == (3, 2, True)


def test_mode_constant_column():
    assert mode_of([5, 5, 5]) == (5, 3, False)


def test_mode_empty_rejected():
    with pytest.raises(ParamError):
        mode_of([])


def _survey(factors, columns):
    return SurveyMatrix(tuple(factors), np.array(columns).T)


def test_single_full_permutation_participant():
    factors = ("a", "b", "c")
    survey = SurveyMatrix(factors, np.array([[2, 1, 3]]))
    ranks = rank_factors(survey).final_ranks()
    assert ranks == {"a": 2, "b": 1, "c": 3}


def test_identical_columns_rank_adjacent_by_name_with_tie_logged():
    survey = _survey(["zeta", "alpha"], [[4, 4, 4], [4, 4, 4]])
    result = rank_factors(survey)
    assert result.final_ranks() == {"alpha": 1, "zeta": 2}
    assert len(result.tie_breaks_applied) == 1
    assert "alpha" in result.tie_breaks_applied[0]


def test_mode_tie_across_factors_broken_by_mean():
    # both modes are 3, but the second column has the lower mean
    survey = _survey(["high", "low"], [[3, 3, 25], [3, 3, 1]])
    result = rank_factors(survey)
    assert result.final_ranks() == {"low": 1, "high": 2}
    assert result.tie_breaks_applied


def test_final_ranks_are_a_permutation_under_heavy_ties():
    rng = np.random.default_rng(101)
    factors = tuple(f"f{i:02d}" for i in range(12))
    responses = rng.integers(1, 4, size=(30, 12))  # tiny value range: many ties
    result = rank_factors(SurveyMatrix(factors, responses))
    assert sorted(result.final_ranks().values()) == list(range(1, 13))


def test_permuting_rows_leaves_result_unchanged():
    rng = np.random.default_rng(103)
    responses = rng.integers(1, 26, size=(40, 4))
    factors = ("a", "b", "c", "d")
    r1 = rank_factors(SurveyMatrix(factors, responses))
    r2 = rank_factors(SurveyMatrix(factors, responses[rng.permutation(40)]))
    assert r1.per_factor == r2.per_factor


def test_duplicating_all_rows_preserves_modes_and_ranks():
    rng = np.random.default_rng(107)
    responses = rng.integers(1, 26, size=(15, 3))
    factors = ("a", "b", "c")
    r1 = rank_factors(SurveyMatrix(factors, responses))
    r2 = rank_factors(SurveyMatrix(factors, np.vstack([responses, responses])))
    assert r1.final_ranks() == r2.final_ranks()
    for f in factors:
        assert r2.per_factor[f]["mode_value"] == r1.per_factor[f]["mode_value"]
        assert r2.per_factor[f]["mode_count"] == 2 * r1.per_factor[f]["mode_count"]


def test_survey_matrix_validation():
    with pytest.raises(ParamError):
        SurveyMatrix(("a", "a"), np.ones((2, 2), dtype=int))
    with pytest.raises(ParamError):
        SurveyMatrix(("a",), np.array([[0]]))
    with pytest.raises(ParamError):
        SurveyMatrix(("a",), np.array([[26]]))


def test_permutation_violations_reported_not_rejected():
    survey = SurveyMatrix(("a", "b"), np.array([[1, 2], [2, 2]]))
    assert survey.permutation_violations() == [1]


def test_describe_factors_ordered_by_name_with_constant_column():
    survey = _survey(["b", "a"], [[2, 2, 2], [1, 3, 5]])
    rows = describe_factors(survey)
    assert [r["factor"] for r in rows] == ["a", "b"]
    assert rows[1]["std"] == 0.0
    assert rows[0]["mean"] == pytest.approx(3.0)

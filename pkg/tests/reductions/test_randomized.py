import numpy as np
import pytest

from fairkit.core.exceptions import ConfigError
from fairkit.learners import ConstantClassifier, DecisionStump
from fairkit.reductions import (
    RandomizedClassifier,
    load_randomized_classifier,
    merge_components,
    predict_randomized,
)
from fairkit.utils.output import save_json

X = np.arange(10, dtype=float).reshape(-1, 1)


def _mixture():
    return RandomizedClassifier(
        [(0.25, ConstantClassifier(1)), (0.75, DecisionStump(0, 4.5, 1))],
        features=["x"],
        constraint="demographic_parity",
        eps=0.05,
    )


def test_expectation_is_weighted_average():
    expected = predict_randomized(_mixture(), X)
    np.testing.assert_allclose(expected, [0.25] * 5 + [1.0] * 5)


def test_sampling_is_seeded_and_matches_components():
    q = _mixture()
    first = predict_randomized(q, X, mode="sample", seed=3)
    assert np.array_equal(first, predict_randomized(q, X, mode="sample", seed=3))
    assert np.all(first[5:] == 1)
    assert set(first[:5]) <= {0, 1}


def test_sampling_frequency_follows_weights():
    q = RandomizedClassifier([(0.3, ConstantClassifier(1)), (0.7, ConstantClassifier(0))])
    draws = predict_randomized(q, np.zeros((20_000, 1)), mode="sample", seed=1)
    # 4 sigma of a Binomial(20000, 0.3) proportion
    assert abs(draws.mean() - 0.3) <= 4 * np.sqrt(0.3 * 0.7 / 20_000)


def test_merge_components_sums_equal_classifiers():
    merged = merge_components(
        [(0.5, DecisionStump(0, 1.0, 1)), (0.25, ConstantClassifier(0)), (0.25, DecisionStump(0, 1.0, 1))]
    )
    assert merged == [(0.75, DecisionStump(0, 1.0, 1)), (0.25, ConstantClassifier(0))]


def test_weights_must_form_a_distribution():
    with pytest.raises(ConfigError):
        RandomizedClassifier([])
    with pytest.raises(ConfigError):
        RandomizedClassifier([(0.5, ConstantClassifier(1))])
    with pytest.raises(ConfigError):
        RandomizedClassifier([(1.5, ConstantClassifier(1)), (-0.5, ConstantClassifier(0))])
    with pytest.raises(ConfigError):
        predict_randomized(_mixture(), X, mode="vote")


def test_artifact_round_trip(tmp_path):
    q = _mixture()
    path = tmp_path / "model.json"
    save_json(q.to_spec(), path)

    reloaded = load_randomized_classifier(path)
    assert reloaded.components == q.components
    assert reloaded.features == ["x"]
    assert reloaded.constraint == "demographic_parity"
    np.testing.assert_array_equal(predict_randomized(reloaded, X), predict_randomized(q, X))

    path.write_text('{"components": []}', encoding="utf-8")
    with pytest.raises(ConfigError):
        load_randomized_classifier(path)


def test_weight_sums_follow_the_shared_tolerance(mocker):
    almost = [(0.25 + 1e-11, ConstantClassifier(1)), (0.75, ConstantClassifier(0))]
    assert RandomizedClassifier(almost).weights[0] == pytest.approx(0.25)
    loose = [(0.2505, ConstantClassifier(1)), (0.75, ConstantClassifier(0))]
    with pytest.raises(ConfigError):
        RandomizedClassifier(loose)

    mocker.patch("fairkit.settings.WEIGHT_TOLERANCE", 1e-3)
    assert len(RandomizedClassifier(loose).components) == 2

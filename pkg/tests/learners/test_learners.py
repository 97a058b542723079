import numpy as np
import pytest

from fairkit.core.exceptions import ConfigError, DataValueError, LearnerNotFound, ShapeError, WeightError
from fairkit.core.models import ModelSpec
from fairkit.learners import (
    ConstantClassifier,
    DecisionStump,
    DecisionStumpLearner,
    LinearModel,
    LogisticRegressionLearner,
    get_learner,
    list_available_learners,
    load_classifier,
    train_weighted_learner,
)


def test_registry_and_aliases():
    assert set(list_available_learners()) == {"logistic_regression", "decision_stump"}
    assert isinstance(get_learner("logreg"), LogisticRegressionLearner)
    assert isinstance(get_learner("stump"), DecisionStumpLearner)
    with pytest.raises(LearnerNotFound):
        get_learner("forest")
    with pytest.raises(ConfigError):
        get_learner("logreg", depth=3)


def test_logistic_regression_separates_simple_data():
    X = np.array([[-2.0], [-1.0], [-0.5], [0.5], [1.0], [2.0]])
    y = np.array([0, 0, 0, 1, 1, 1])
    model = LogisticRegressionLearner(l2=0.01).fit(X, y)

    assert model.predict(X).tolist() == y.tolist()
    proba = model.predict_proba(X)
    assert np.all(np.diff(proba) > 0)


def test_logistic_regression_is_deterministic():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(100, 3))
    y = (X[:, 0] + rng.normal(size=100) > 0).astype(int)
    w = rng.random(100)
    first = train_weighted_learner("logreg", X, y, w)
    second = train_weighted_learner("logreg", X, y, w)
    assert first == second


def test_zero_weight_rows_are_ignored():
    X = np.array([[0.0], [1.0], [2.0], [3.0], [10.0]])
    y = np.array([0, 0, 1, 1, 0])
    stump = DecisionStumpLearner().fit(X, y, [1.0, 1.0, 1.0, 1.0, 0.0])
    assert stump.predict(X[:4]).tolist() == [0, 0, 1, 1]


def test_stump_finds_best_threshold_and_polarity():
    X = np.array([[0.0, 5.0], [1.0, 4.0], [2.0, 3.0], [3.0, 2.0]])
    y = np.array([1, 1, 0, 0])
    stump = DecisionStumpLearner().fit(X, y)

    assert stump.params() == {"feature": 0, "threshold": 1.0, "polarity": -1}
    assert stump.predict(X).tolist() == [1, 1, 0, 0]


def test_stump_weighted_error_is_minimal():
    rng = np.random.default_rng(3)
    X = rng.integers(0, 5, size=(40, 2)).astype(float)
    y = rng.integers(0, 2, 40)
    w = rng.random(40)
    stump = DecisionStumpLearner().fit(X, y, w)
    best = np.sum(w * (stump.predict(X) != y))

    for j in range(2):
        for threshold in np.unique(X[:, j]):
            for polarity in (1, -1):
                candidate = DecisionStump(j, threshold, polarity).predict(X)
                assert best <= np.sum(w * (candidate != y)) + 1e-12


def test_stump_needs_a_feature():
    with pytest.raises(ShapeError):
        DecisionStumpLearner().fit(np.empty((3, 0)), [0, 1, 0])


def test_training_data_checks():
    learner = LogisticRegressionLearner()
    with pytest.raises(DataValueError):
        learner.fit([[np.nan]], [1])
    with pytest.raises(DataValueError):
        learner.fit([[1.0]], [2])
    with pytest.raises(ShapeError):
        learner.fit([[1.0], [2.0]], [1])
    with pytest.raises(WeightError):
        learner.fit([[1.0]], [1], [0.0])


def test_specs_rebuild_classifiers():
    for classifier in (
        LinearModel([0.5, -1.25], 0.1),
        DecisionStump(1, 2.5, -1),
        ConstantClassifier(1),
    ):
        assert load_classifier(classifier.to_spec()) == classifier
    with pytest.raises(ConfigError):
        load_classifier(ModelSpec(kind="forest", params={}))
    with pytest.raises(ConfigError):
        load_classifier(ModelSpec(kind="constant", params={}))
    with pytest.raises(ConfigError):
        ConstantClassifier(2)

import numpy as np
import pytest
from pydantic import ValidationError

from fairkit.core.exceptions import MomentError, ShapeError
from fairkit.reductions import ConstraintSpec, MomentTerm, moment_violations


def test_demographic_parity_terms(toy_labels):
    y_true, y_pred, sensitive = toy_labels
    compiled = ConstraintSpec(family="demographic_parity").compile(y_true, sensitive)

    assert compiled.terms == [
        MomentTerm(None, ("a",), 1),
        MomentTerm(None, ("a",), -1),
        MomentTerm(None, ("b",), 1),
        MomentTerm(None, ("b",), -1),
    ]
    np.testing.assert_allclose(
        compiled.gamma(y_pred), [0.4, -0.4, 1 / 3 - 0.6, 0.6 - 1 / 3], atol=1e-12
    )


def test_equalized_odds_terms_go_label_then_group(toy_labels):
    y_true, y_pred, sensitive = toy_labels
    gamma = moment_violations(ConstraintSpec(family="equalized_odds"), y_true, y_pred, sensitive)
    compiled = ConstraintSpec(family="equalized_odds").compile(y_true, sensitive)

    assert [(t.event, t.group[0], t.sign) for t in compiled.terms] == [
        (0, "a", 1), (0, "a", -1), (0, "b", 1), (0, "b", -1),
        (1, "a", 1), (1, "a", -1), (1, "b", 1), (1, "b", -1),
    ]
    # y=0: overall 0.5, a 1.0, b 0.0; y=1: overall 2/3, a 1.0, b 0.5
    np.testing.assert_allclose(
        gamma, [0.5, -0.5, -0.5, 0.5, 1 / 3, -1 / 3, -1 / 6, 1 / 6], atol=1e-12
    )
    assert compiled.terms[0].name == "y=0|a|+"


def test_gamma_is_linear_in_fractional_predictions(toy_labels):
    y_true, _, sensitive = toy_labels
    compiled = ConstraintSpec(family="true_positive_rate_parity").compile(y_true, sensitive)
    p = np.array([0.2, 0.9, 0.5, 0.1, 1.0])
    q = np.array([1.0, 0.0, 0.0, 1.0, 0.3])

    np.testing.assert_allclose(
        compiled.gamma(0.25 * p + 0.75 * q), 0.25 * compiled.gamma(p) + 0.75 * compiled.gamma(q), atol=1e-12
    )
    lam = np.arange(compiled.n_terms, dtype=float)
    assert compiled.costs(lam) @ p == pytest.approx(lam @ compiled.gamma(p))


def test_empty_cells_are_dropped_and_flagged(log_messages):
    y_true = [1, 1, 0, 1]
    sensitive = ["a", "a", "b", "b"]
    compiled = ConstraintSpec(family="equalized_odds").compile(y_true, sensitive)

    assert compiled.n_terms == 6
    assert compiled.flags == ["dropped_terms:a:y=0"]
    assert any("Empty moment cell" in message for message in log_messages)
    with pytest.raises(MomentError):
        ConstraintSpec(family="equalized_odds").compile(y_true, sensitive, strict=True)


def test_spec_validation():
    assert ConstraintSpec(family="false_negative_rate_parity").family == "true_positive_rate_parity"
    with pytest.raises(ValidationError):
        ConstraintSpec(family="demographic_parity", eps=-0.1)
    with pytest.raises(ShapeError):
        ConstraintSpec(family="equalized_odds").compile(None, ["a", "b"])
    compiled = ConstraintSpec(family="demographic_parity").compile(None, ["a", "b"])
    with pytest.raises(ShapeError):
        compiled.gamma([1, 0, 1])

import json

import numpy as np
import pytest

from fairkit.core.exceptions import ConfigError
from fairkit.data import generate_synthetic, load_synthetic_config, write_csv

CONFIG = {
    "n_rows": 500,
    "group_weights": {"b": 0.4, "a": 0.6},
    "base_rates": {"a": 0.7, "b": 0.3},
    "score_noise": 0.15,
    "seed": 3,
}


def test_same_seed_same_bytes():
    assert write_csv(generate_synthetic(CONFIG)) == write_csv(generate_synthetic(CONFIG))


def test_columns_and_roles():
    d = generate_synthetic(CONFIG)

    assert d.column_names == ["y_true", "score", "group", "y_pred"]
    assert d.sensitive_names == ["group"]
    assert set(d.column("group")) == {"a", "b"}
    scores = d.column("score")
    assert np.all((scores >= 0.0) & (scores <= 1.0))
    assert d.column("y_pred").tolist() == (scores > 0.5).astype(int).tolist()


def test_group_base_rates_are_roughly_respected():
    d = generate_synthetic({**CONFIG, "n_rows": 20000})
    y = d.column("y_true")
    groups = d.column("group")
    assert abs(y[groups == "a"].mean() - 0.7) < 0.03
    assert abs(y[groups == "b"].mean() - 0.3) < 0.03


def test_extra_features_do_not_change_core_columns():
    plain = generate_synthetic(CONFIG)
    wide = generate_synthetic({**CONFIG, "n_features": 2})

    assert wide.column_names == ["y_true", "score", "group", "y_pred", "x0", "x1"]
    assert wide.select(plain.column_names).equals(plain)


def test_load_config_from_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(CONFIG), encoding="utf-8")
    assert load_synthetic_config(path).seed == 3


@pytest.mark.parametrize(
    "override",
    [
        {"group_weights": {"a": 0.5, "b": 0.4}},
        {"base_rates": {"a": 1.5, "b": 0.3}},
        {"base_rates": {"a": 0.5}},
        {"unknown": 1},
        {"n_rows": 0},
    ],
)
def test_invalid_config(override):
    with pytest.raises(ConfigError):
        generate_synthetic({**CONFIG, **override})


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        load_synthetic_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_synthetic_config(bad)


def test_group_weights_use_the_shared_tolerance(mocker):
    config = {**CONFIG, "group_weights": {"a": 0.6, "b": 0.4005}}
    with pytest.raises(ConfigError):
        load_synthetic_config(config)
    mocker.patch("fairkit.settings.WEIGHT_TOLERANCE", 1e-3)
    assert load_synthetic_config(config).group_weights["b"] == 0.4005

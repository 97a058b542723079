from fairkit import (
    compare_models,
    demographic_parity_difference,
    disaggregate,
    equalized_odds_difference,
    exponentiated_gradient,
    fit_correlation_remover,
    fit_threshold_optimizer,
    generate_synthetic,
    predict_randomized,
    predict_with_policy,
    render_report,
)
from fairkit.core.exceptions import FairkitException
from fairkit.preprocessing import transform
from fairkit.report import build_report
from fairkit.utils.logging import logger
from fairkit.utils.output import save_json, save_text

# Synthetic population with unequal base rates per group
CONFIG = {
    "n_rows": 5000,
    "group_weights": {"a": 0.5, "b": 0.3, "c": 0.2},
    "base_rates": {"a": 0.7, "b": 0.4, "c": 0.2},
    "score_noise": 0.2,
    "seed": 7,
    "n_features": 2,
}

METRICS = ["accuracy", "selection_rate", "true_positive_rate", "false_positive_rate"]


def main():
    """
    Walks through assessment, the three mitigations and a comparison.

    Every artifact is written to the ``outputs/`` folder.
    """
    d = generate_synthetic(CONFIG)
    y_true = d.column("y_true")
    scores = d.column("score")
    groups = d.frame(["group"])
    features = d.frame(["x0", "x1"]).to_numpy()

    # 1. Assess the unmitigated predictions
    baseline = d.column("y_pred")
    assessment = disaggregate(METRICS, y_true, baseline, groups)
    save_text(render_report(build_report(assessment), "csv"), "outputs/baseline_assessment.csv")
    logger.info(
        f"Baseline: DP difference {demographic_parity_difference(baseline, groups):.3f}, "
        f"EO difference {equalized_odds_difference(y_true, baseline, groups):.3f}"
    )

    # 2. Post-processing: per-group randomized thresholds
    policy = fit_threshold_optimizer(scores, y_true, groups, constraint="equalized_odds", score_column="score")
    save_json(policy, "outputs/policy.json")
    thresholded = predict_with_policy(policy, scores, groups, seed=0)

    # 3. Reductions: randomized classifier trained under demographic parity
    q = exponentiated_gradient(d, "logreg", "demographic_parity", eps=0.02, features=["x0", "x1"])
    save_json(q.to_spec(), "outputs/model.json")
    reduced = predict_randomized(q, features, mode="sample", seed=0)
    if not q.diagnostics.converged:
        logger.warning(f"Solver stopped with gap {q.diagnostics.final_gap:.3g}")

    # 4. Pre-processing: features without linear correlation to the group
    remover = fit_correlation_remover(d.frame(["group", "x0", "x1"]), ["group"])
    decorrelated = transform(remover, d.frame(["group", "x0", "x1"]))
    logger.info(f"Decorrelated feature means: {decorrelated.mean().round(6).to_dict()}")

    # 5. Compare the candidates on one plane
    table = compare_models(
        {"baseline": baseline, "threshold": thresholded, "reduction": reduced},
        y_true,
        groups,
        "accuracy",
        "demographic_parity_difference",
    )
    save_text(render_report(build_report(table), "svg"), "outputs/comparison.svg")
    for row in table.rows:
        logger.success(
            f"{row.model_name}: accuracy={row.performance:.3f} "
            f"disparity={row.fairness:.3f} pareto={row.pareto}"
        )


if __name__ == "__main__":
    try:
        main()
    except FairkitException as e:
        logger.error(f"{e.code}: {e.message}")

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError
from scipy.optimize import linprog
from scipy.special import softmax

from fairkit import settings
from fairkit.core.exceptions import ConfigError
from fairkit.core.models import SolverDiagnostics
from fairkit.data.dataset import Dataset
from fairkit.learners import BaseClassifier, BaseLearner, ConstantClassifier, get_learner
from fairkit.learners.base import as_feature_matrix
from fairkit.reductions.moments import CompiledConstraint, ConstraintSpec
from fairkit.reductions.randomized import RandomizedClassifier, merge_components
from fairkit.utils.logging import logger

# Restricted-LP weights below this are dropped from the mixture
_MIN_MIXTURE_WEIGHT = 1e-12


class Lagrangian:
    """Lagrangian of error minimization under compiled moment constraints.

    ``L(Q, lam) = err(Q) + lam . (gamma(Q) - eps)`` with ``lam >= 0`` and
    ``sum(lam) <= bound``. Hypotheses are handled through their 0/1 (or
    expected) prediction vectors on the training rows.
    """

    def __init__(
        self,
        X,
        y_true,
        constraint: CompiledConstraint,
        learner: BaseLearner,
        bound: float,
    ):
        self.X = as_feature_matrix(X)
        self.y = np.asarray(y_true, dtype=np.float64).ravel()
        self.constraint = constraint
        self.learner = learner
        self.bound = float(bound)
        self.n = len(self.y)
        self.flags: List[str] = []

    def error(self, preds) -> float:
        """Expected 0-1 error of (expected) predictions."""
        p = np.asarray(preds, dtype=np.float64)
        return float(np.mean(p * (1.0 - self.y) + (1.0 - p) * self.y))

    def gammas(self, preds) -> np.ndarray:
        return self.constraint.gamma(preds)

    def value(self, preds, lam) -> float:
        lam = np.asarray(lam, dtype=np.float64)
        return self.error(preds) + float(lam @ (self.gammas(preds) - self.constraint.eps))

    def max_value(self, preds) -> float:
        """``max_lam L(preds, lam)``, attained at ``lam = 0`` or at ``bound`` on the worst term."""
        gamma = self.gammas(preds)
        worst = float(np.max(gamma)) - self.constraint.eps if len(gamma) else 0.0
        return self.error(preds) + self.bound * max(0.0, worst)

    def cost_differences(self, lam) -> np.ndarray:
        """Per-row ``cost(predict 1) - cost(predict 0)`` under multipliers ``lam``."""
        return (1.0 - 2.0 * self.y) / self.n + self.constraint.costs(lam)

    def best_response(self, lam) -> Tuple[BaseClassifier, np.ndarray]:
        """Trains the learner on the cost-sensitive relabelling for ``lam``.

        Rows are relabelled ``1[d_i < 0]`` and weighted ``|d_i|``; rows with
        ``d_i = 0`` weigh nothing. If every weight is zero the constant-0
        classifier is returned and the event is flagged.
        """
        d = self.cost_differences(lam)
        weights = np.abs(d)
        if not np.any(weights > 0):
            logger.warning("Every best-response cost is zero; using the constant-0 classifier.")
            if "zero_cost_best_response" not in self.flags:
                self.flags.append("zero_cost_best_response")
            classifier = ConstantClassifier(0)
        else:
            classifier = self.learner.fit(self.X, (d < 0).astype(np.int64), weights)
        return classifier, classifier.predict(self.X).astype(np.float64)

    def gap(
        self, q_preds, lam_bar, in_play: Sequence[np.ndarray] = ()
    ) -> Tuple[float, float, float]:
        """Duality gap of the averaged play ``(Q, lam_bar)``.

        The lower bound is the smallest ``L(h, lam_bar)`` over a fresh best
        response and the hypotheses already ``in_play``.

        Returns:
            Tuple of the gap (never negative), the upper and the lower bound.
        """
        gap, upper, lower, _ = self.evaluate_gap(q_preds, lam_bar, in_play)
        return gap, upper, lower

    def evaluate_gap(
        self, q_preds, lam_bar, in_play: Sequence[np.ndarray] = ()
    ) -> Tuple[float, float, float, Tuple[BaseClassifier, np.ndarray]]:
        """Like ``gap``, also returning the fresh best response and its predictions."""
        upper = self.max_value(q_preds)
        response = self.best_response(lam_bar)
        lower = min(self.value(p, lam_bar) for p in [response[1], *in_play])
        return max(0.0, upper - lower), upper, lower, response

    def solve_restricted(self, preds: Sequence[np.ndarray]) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """Saddle point of the game restricted to mixtures of ``preds``.

        Solves ``min err(Q) + bound * xi`` subject to ``gamma_j(Q) - eps <= xi``
        and ``xi >= 0`` over mixtures ``Q`` of the given hypotheses. The
        multipliers are the duals of the moment rows, so ``sum(lam) <= bound``.

        Returns:
            Tuple of the mixture weights and the multipliers, or None if the
            linear program could not be solved.
        """
        P = np.vstack(preds)
        k = P.shape[0]
        G = np.column_stack([self.gammas(p) for p in P])
        m = G.shape[0]
        if m == 0:
            return None
        c = np.concatenate([[self.error(p) for p in P], [self.bound]])
        result = linprog(
            c,
            A_ub=np.hstack([G, -np.ones((m, 1))]),
            b_ub=np.full(m, self.constraint.eps),
            A_eq=np.concatenate([np.ones(k), [0.0]]).reshape(1, -1),
            b_eq=[1.0],
            bounds=[(0.0, None)] * (k + 1),
            method="highs",
        )
        if not result.success:
            logger.debug(f"Restricted linear program failed: {result.message}")
            return None
        weights = np.clip(result.x[:k], 0.0, None)
        weights[weights < _MIN_MIXTURE_WEIGHT] = 0.0
        weights /= weights.sum()
        lam = np.clip(-np.asarray(result.ineqlin.marginals, dtype=np.float64), 0.0, None)
        if lam.sum() > self.bound:
            lam *= self.bound / lam.sum()
        return weights, lam


def best_response(
    lam, constraint: ConstraintSpec, X, y_true, sensitive, learner: Union[BaseLearner, str]
) -> BaseClassifier:
    """Cost-sensitive best response to multipliers ``lam`` (one per compiled term)."""
    if isinstance(learner, str):
        learner = get_learner(learner)
    compiled = constraint.compile(y_true, sensitive)
    classifier, _ = Lagrangian(X, y_true, compiled, learner, bound=1.0).best_response(lam)
    return classifier


def _check_solver_params(bound: float, eta0: float, nu: float, max_iter: int) -> None:
    if not bound > 0:
        raise ConfigError(f"bound must be positive, got {bound}.")
    if not eta0 > 0:
        raise ConfigError(f"eta0 must be positive, got {eta0}.")
    if not nu >= 0:
        raise ConfigError(f"nu must be non-negative, got {nu}.")
    if max_iter < 1:
        raise ConfigError(f"max_iter must be at least 1, got {max_iter}.")


def make_constraint(constraint: Union[ConstraintSpec, str], eps: Optional[float] = None) -> ConstraintSpec:
    """Builds a ConstraintSpec from a family name, or overrides the slack of an existing one."""
    try:
        if isinstance(constraint, ConstraintSpec):
            if eps is None:
                return constraint
            return ConstraintSpec(family=constraint.family, eps=eps)
        return ConstraintSpec(family=constraint, eps=settings.DEFAULT_EPS if eps is None else eps)
    except ValidationError as e:
        raise ConfigError(f"Invalid constraint: {e}")


def fit_exponentiated_gradient(
    X,
    y_true,
    sensitive,
    learner: Union[BaseLearner, str],
    constraint: Union[ConstraintSpec, str],
    eps: Optional[float] = None,
    bound: float = settings.DEFAULT_BOUND,
    eta0: float = settings.DEFAULT_ETA0,
    nu: float = settings.DEFAULT_NU,
    max_iter: int = settings.DEFAULT_MAX_ITER,
    features: Optional[Sequence[str]] = None,
    strict_moments: bool = False,
    run_linprog_step: bool = True,
) -> RandomizedClassifier:
    """Exponentiated-gradient reduction on feature arrays.

    The multipliers follow ``lam_t = bound * softmax([0, theta])[1:]``, the
    learner plays a best response to ``lam_t`` and ``theta`` moves by
    ``eta0 / sqrt(t) * (gamma(h_t) - eps)``. With ``run_linprog_step`` each
    iteration also solves the game restricted to mixtures of every hypothesis
    found so far and keeps whichever play, averaged or restricted, has the
    smaller duality gap. The returned mixture is the play with the smallest
    gap over all iterations. Before the loop the unconstrained best response
    is tried on its own and returned at once if its gap is already within
    ``nu``.

    Args:
        X: Numeric feature matrix.
        y_true: Binary labels.
        sensitive: Sensitive values (see ``group_labels``).
        learner: A BaseLearner or a registered learner kind.
        constraint: A ConstraintSpec or a family name.
        eps (Optional[float]): Overrides the constraint slack.
        bound (float): l1 bound on the multipliers.
        eta0 (float): Base learning rate.
        nu (float): Duality gap accepted as converged.
        max_iter (int): Maximum number of iterations.
        features: Feature names recorded in the artifact.
        strict_moments (bool): Raise instead of dropping empty moment cells.
        run_linprog_step (bool): Follow each step with the restricted saddle-point
            linear program.

    Returns:
        RandomizedClassifier: The mixture with its SolverDiagnostics.
        Non-convergence is reported through ``diagnostics.converged``.

    Raises:
        ConfigError: Invalid solver parameters or names.
        MomentError: Empty moment cell with ``strict_moments``.
    """
    _check_solver_params(bound, eta0, nu, max_iter)
    spec = make_constraint(constraint, eps)
    if isinstance(learner, str):
        learner = get_learner(learner)

    compiled = spec.compile(y_true, sensitive, strict=strict_moments)
    lagrangian = Lagrangian(X, y_true, compiled, learner, bound)
    m = compiled.n_terms
    logger.info(
        f"Fitting exponentiated gradient: {spec.family}, eps={spec.eps}, "
        f"{m} moment terms, {lagrangian.n} rows."
    )

    def finish(components, lam_bar, gap, iterations, best_iteration) -> RandomizedClassifier:
        converged = gap <= nu
        if not converged:
            logger.warning(
                f"Exponentiated gradient did not converge: duality gap {gap:.3g} > {nu} "
                f"after {iterations} iterations."
            )
        diagnostics = SolverDiagnostics(
            iterations=iterations,
            best_iteration=best_iteration,
            final_gap=float(gap),
            best_lambda=[float(v) for v in lam_bar],
            converged=converged,
            flags=compiled.flags + lagrangian.flags,
        )
        return RandomizedClassifier(
            merge_components(components),
            features=features,
            constraint=spec.family,
            eps=spec.eps,
            diagnostics=diagnostics,
        )

    zero = np.zeros(m)
    h0, p0 = lagrangian.best_response(zero)
    gap0, _, _, response0 = lagrangian.evaluate_gap(p0, zero, [p0])
    if gap0 <= nu:
        logger.info("Unconstrained best response already satisfies the constraints.")
        return finish([(1.0, h0)], zero, gap0, 0, 0)

    # Every distinct hypothesis seen so far, for the restricted linear program
    pool: List[BaseClassifier] = []
    pool_preds: List[np.ndarray] = []
    seen = set()

    def add_to_pool(h: BaseClassifier, p: np.ndarray) -> None:
        key = p.tobytes()
        if key not in seen:
            seen.add(key)
            pool.append(h)
            pool_preds.append(p)

    add_to_pool(h0, p0)
    add_to_pool(*response0)

    theta = np.zeros(m)
    hypotheses: List[BaseClassifier] = []
    predictions: List[np.ndarray] = []
    sum_preds = np.zeros(lagrangian.n)
    sum_lambda = np.zeros(m)
    best = None
    t = 0
    for t in range(1, max_iter + 1):
        lam = bound * softmax(np.concatenate([[0.0], theta]))[1:]
        h, p = lagrangian.best_response(lam)
        hypotheses.append(h)
        predictions.append(p)
        add_to_pool(h, p)

        theta = theta + (eta0 / math.sqrt(t)) * (lagrangian.gammas(p) - spec.eps)
        sum_preds += p
        sum_lambda += lam
        q_preds = sum_preds / t
        lam_bar = sum_lambda / t

        gap, upper, lower, response = lagrangian.evaluate_gap(q_preds, lam_bar, predictions)
        add_to_pool(*response)
        logger.debug(
            f"Iteration {t}: error={lagrangian.error(q_preds):.6f} "
            f"upper={upper:.6f} lower={lower:.6f} gap={gap:.3g}"
        )
        candidate = (gap, t, [(1.0 / t, hh) for hh in hypotheses], lam_bar.copy())

        if run_linprog_step:
            restricted = lagrangian.solve_restricted(pool_preds)
            if restricted is not None:
                weights, lam_lp = restricted
                support = np.flatnonzero(weights)
                support_preds = [pool_preds[i] for i in support]
                lp_preds = weights[support] @ np.vstack(support_preds)
                gap_lp, _, _, response = lagrangian.evaluate_gap(lp_preds, lam_lp, support_preds)
                add_to_pool(*response)
                logger.debug(f"Iteration {t}: restricted mixture over {len(support)} hypotheses, gap={gap_lp:.3g}")
                if gap_lp < gap:
                    candidate = (gap_lp, t, [(float(weights[i]), pool[i]) for i in support], lam_lp)

        if best is None or candidate[0] < best[0]:
            best = candidate
        if best[0] <= nu:
            break

    gap, best_t, components, lam_bar = best
    if gap <= nu:
        logger.info(f"Exponentiated gradient converged after {t} iterations (gap {gap:.3g}).")
    return finish(components, lam_bar, gap, t, best_t)


def exponentiated_gradient(
    d: Dataset,
    learner: Union[BaseLearner, str],
    constraint: Union[ConstraintSpec, str],
    eps: Optional[float] = None,
    bound: float = settings.DEFAULT_BOUND,
    eta0: float = settings.DEFAULT_ETA0,
    nu: float = settings.DEFAULT_NU,
    max_iter: int = settings.DEFAULT_MAX_ITER,
    features: Optional[Sequence[str]] = None,
    strict_moments: bool = False,
    run_linprog_step: bool = True,
) -> RandomizedClassifier:
    """Runs ``fit_exponentiated_gradient`` on the columns of a Dataset.

    Uses the ``features`` columns (default: every ``feature`` column), the
    single ``y_true`` column and every ``sensitive`` column.
    """
    features = list(features) if features is not None else d.columns_with_role("feature")
    if not features:
        raise ConfigError("No feature columns to train on.")
    X = as_feature_matrix(d.frame(features).to_numpy())
    return fit_exponentiated_gradient(
        X,
        d.column(d.single("y_true")),
        d.frame(d.sensitive_names),
        learner,
        constraint,
        eps=eps,
        bound=bound,
        eta0=eta0,
        nu=nu,
        max_iter=max_iter,
        features=features,
        strict_moments=strict_moments,
        run_linprog_step=run_linprog_step,
    )

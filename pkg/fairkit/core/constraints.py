from typing import Dict, Tuple

from fairkit.core.exceptions import ConfigError
from fairkit.utils.logging import logger

CONSTRAINT_FAMILIES: Tuple[str, ...] = (
    "demographic_parity",
    "equalized_odds",
    "true_positive_rate_parity",
    "false_positive_rate_parity",
)

# FNR = 1 - TPR, so equal false negative rates are equal true positive rates.
CONSTRAINT_ALIASES: Dict[str, str] = {
    "false_negative_rate_parity": "true_positive_rate_parity",
}


def resolve_constraint(name: str) -> str:
    """Maps a constraint name or alias to its canonical family.

    Raises:
        ConfigError: If the name is not a known constraint family.
    """
    if name in CONSTRAINT_ALIASES:
        canonical = CONSTRAINT_ALIASES[name]
        logger.info(f"Constraint '{name}' is handled as '{canonical}'.")
        return canonical
    if name not in CONSTRAINT_FAMILIES:
        raise ConfigError(
            f"Unknown constraint '{name}'. Available: {', '.join(CONSTRAINT_FAMILIES + tuple(CONSTRAINT_ALIASES))}."
        )
    return name

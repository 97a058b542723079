from .dataset import Dataset, distinct_groups, group_labels
from .io import load_table, write_csv
from .synthetic import generate_synthetic, load_synthetic_config
from .validation import validate_dataset

__all__ = [
    "Dataset",
    "distinct_groups",
    "group_labels",
    "load_table",
    "write_csv",
    "generate_synthetic",
    "load_synthetic_config",
    "validate_dataset",
]

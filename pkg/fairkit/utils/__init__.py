from .logging import logger, set_log_level
from .output import emit, frame_to_csv, model_to_json, save_csv, save_json, save_text
from .parsers import parse_binary, parse_column_list, parse_real

__all__ = [
    "logger",
    "set_log_level",
    "emit",
    "frame_to_csv",
    "model_to_json",
    "save_csv",
    "save_json",
    "save_text",
    "parse_binary",
    "parse_column_list",
    "parse_real",
]

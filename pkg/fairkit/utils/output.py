import json
from pathlib import Path
from typing import Optional, Union

import pandas as pd
import typer
from pydantic import BaseModel

from fairkit.core.exceptions import OutputError
from fairkit.utils.logging import logger

PathLike = Union[str, Path]


def model_to_json(model: BaseModel) -> str:
    """Serializes a pydantic artifact to indented JSON with a trailing newline.

    ``json`` writes floats with their shortest round-trip representation, so
    reloading the text reproduces every value bit-exactly.
    """
    return json.dumps(model.model_dump(mode="json"), ensure_ascii=False, indent=4) + "\n"


def frame_to_csv(df: pd.DataFrame) -> str:
    """Converts a DataFrame to CSV text (comma, ``"``-quoting, ``\\n`` endings)."""
    return df.to_csv(index=False, lineterminator="\n")


def save_text(text: Union[str, bytes], file_path: PathLike) -> None:
    """Saves text or bytes to a file, creating parent directories."""
    try:
        path = Path(file_path)
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(text, bytes):
            path.write_bytes(text)
        else:
            path.write_text(text, encoding="utf-8")
        logger.info(f"Data saved to {file_path}")
    except OSError as e:
        logger.error(f"Error saving to {file_path}: {e}")
        raise OutputError(f"Could not save file {file_path}: {e}")


def save_json(model: BaseModel, file_path: PathLike) -> None:
    """Saves a pydantic artifact to a JSON file."""
    save_text(model_to_json(model), file_path)


def save_csv(df: pd.DataFrame, file_path: PathLike) -> None:
    """Saves a DataFrame to a CSV file."""
    save_text(frame_to_csv(df), file_path)


def emit(document: Union[str, bytes], output_file: Optional[PathLike] = None) -> None:
    """
    Writes a rendered document to ``output_file``, or to standard output if
    no file is given. Nothing else is ever written to standard output.
    """
    if output_file:
        save_text(document, output_file)
        return
    text = document.decode("utf-8") if isinstance(document, bytes) else document
    typer.echo(text, nl=False)

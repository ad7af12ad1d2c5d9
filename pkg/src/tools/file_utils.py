"""
Utilities for report and artifact files.
"""
import json
import os
import tempfile
from typing import Any, List, Optional

import numpy as np
import pandas as pd

SIGNIFICANT_DIGITS = 12


def ensure_directory_exists(directory_path: str) -> None:
    """
    Ensure that a directory exists.

    Args:
        directory_path (str): The directory path.
    """
    os.makedirs(directory_path, exist_ok=True)


def read_file(file_path: str) -> str:
    """
    Read a text file.

    Args:
        file_path (str): The file path.

    Returns:
        str: The file content.
    """
    with open(file_path, "r") as f:
        return f.read()


def _atomic_write(file_path: str, payload: bytes) -> None:
    directory = os.path.dirname(file_path)
    if directory:
        ensure_directory_exists(directory)
    fd, tmp_path = tempfile.mkstemp(dir=directory or ".", prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(payload)
        os.replace(tmp_path, file_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_file(file_path: str, content: str) -> None:
    """
    Write content to a file in one step (the file never appears half written).

    Args:
        file_path (str): The file path.
        content (str): The content to write.
    """
    _atomic_write(file_path, content.encode("utf-8"))


def write_bytes(file_path: str, payload: bytes) -> None:
    _atomic_write(file_path, payload)


def round_significant(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round a float to a fixed number of significant digits."""
    if value == 0 or not np.isfinite(value):
        return float(value)
    return float(f"{value:.{digits}g}")


def round_floats(data: Any, digits: int = SIGNIFICANT_DIGITS) -> Any:
    """Recursively round every float of a JSON-like structure."""
    if isinstance(data, bool) or data is None:
        return data
    if isinstance(data, (float, np.floating)):
        return round_significant(float(data), digits)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, dict):
        return {str(k): round_floats(v, digits) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [round_floats(v, digits) for v in data]
    return data


def write_json_file(file_path: str, data: Any) -> None:
    """
    Write data to a JSON file, floats rounded to 12 significant digits.

    Args:
        file_path (str): The file path.
        data (Any): The data to write.
    """
    write_file(file_path, json.dumps(round_floats(data), indent=2, sort_keys=True) + "\n")


def read_json_file(file_path: str) -> Any:
    """
    Read data from a JSON file.

    Args:
        file_path (str): The file path.

    Returns:
        Any: The data from the file.
    """
    with open(file_path, "r") as f:
        return json.load(f)


def format_table(frame: pd.DataFrame) -> str:
    """Fixed-width text rendering of a report table."""
    return frame.to_string(index=False, float_format=lambda v: f"{v:.{SIGNIFICANT_DIGITS}g}") + "\n"


def write_table(file_path: str, frame: pd.DataFrame, fmt: str = "csv") -> None:
    """
    Write a report table as CSV, JSON records or a text table.

    Args:
        file_path (str): The file path.
        frame (pd.DataFrame): The table.
        fmt (str): One of csv, json, table.
    """
    if fmt == "csv":
        write_file(file_path, frame.to_csv(index=False, float_format=f"%.{SIGNIFICANT_DIGITS}g"))
    elif fmt == "json":
        write_json_file(file_path, frame.to_dict(orient="records"))
    elif fmt == "table":
        write_file(file_path, format_table(frame))
    else:
        raise ValueError(f"unknown table format '{fmt}'")


def list_files(directory_path: str, extensions: Optional[List[str]] = None) -> List[str]:
    """
    List files in a directory tree, sorted.

    Args:
        directory_path (str): The directory path.
        extensions (Optional[List[str]]): Optional list of file extensions to filter by.

    Returns:
        List[str]: List of file paths.
    """
    files = []
    for root, _, filenames in os.walk(directory_path):
        for filename in filenames:
            if extensions is None or any(filename.endswith(ext) for ext in extensions):
                files.append(os.path.join(root, filename))
    return sorted(files)

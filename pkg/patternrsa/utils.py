"""
Utility functions for rendering and parsing CLI values
"""

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Sequence

from errors import ParameterError


def render_int(value: int, hex_output: bool = False) -> str:
    """
    Render an integer for JSON output

    Args:
        value: Integer of any size
        hex_output: Use 0x-prefixed lowercase hexadecimal instead of decimal

    Returns:
        String form, so consumers never truncate 2n-bit moduli
    """
    if hex_output:
        return hex(value)
    return str(value)


def parse_int(text: str) -> int:
    """
    Parse a decimal or 0x-prefixed hexadecimal integer

    Args:
        text: User-supplied integer text

    Returns:
        The integer value
    """
    cleaned = text.strip().replace("_", "")
    try:
        if cleaned.lower().startswith(("0x", "-0x")):
            return int(cleaned, 16)
        return int(cleaned, 10)
    except ValueError:
        raise ParameterError(f"not an integer: {text!r}") from None


def dump_json(payload: Dict[str, Any]) -> str:
    """Serialize with fixed layout so identical payloads give identical bytes"""
    return json.dumps(payload, indent=2, ensure_ascii=False)


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Format rows as CSV text

    Args:
        header: Column names
        rows: Row values in header order

    Returns:
        CSV text with a trailing newline
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def format_human(record: Dict[str, Any], indent: int = 0) -> List[str]:
    """Render a record as aligned 'key: value' lines, recursing into mappings"""
    lines = []
    if not record:
        return lines
    width = max(len(str(key)) for key in record)
    pad = " " * indent
    for key, value in record.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(format_human(value, indent + 2))
        elif isinstance(value, list) and len(value) > 16:
            lines.append(f"{pad}{str(key).ljust(width)} : [{len(value)} entries]")
        else:
            lines.append(f"{pad}{str(key).ljust(width)} : {value}")
    return lines

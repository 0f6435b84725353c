"""CSV and run-manifest writers.

Numbers are written with 17 significant digits ('%.17g'), '.' decimal
separator, LF line endings and a header row, which round-trips doubles
bit-exactly and makes repeated runs byte-identical.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

__all__ = ["format_number", "write_csv", "write_manifest"]


def format_number(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        raise TypeError("split complex values into re/im columns")
    return f"{float(x):.17g}"


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        lines.append(",".join(format_number(x) for x in row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_manifest(path: str, command: str, config_items: dict, seed, version: str,
                   files: Sequence[str]) -> str:
    """Key = value manifest mirroring the config format; lists every output."""
    lines = ["[manifest]",
             f"command = {command}",
             f"version = {version}",
             f"seed = {'' if seed is None else seed}",
             "",
             "[config]"]
    for section, values in config_items.items():
        for key, val in values.items():
            lines.append(f"{section}.{key} = {val}")
    lines.append("")
    lines.append("[files]")
    for i, f in enumerate(files):
        lines.append(f"file{i} = {os.path.basename(f)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path

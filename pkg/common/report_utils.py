"""
Report serialisation shared by the CLI verbs.
Tables are pandas DataFrames; they are rendered as text, CSV or Excel.
Structured reports go out as JSON with sorted keys, Hasse diagrams as DOT.
"""

import json
import logging
import re
from io import BytesIO
from typing import Dict, Iterable, Optional, Tuple

import pandas as pd

logger = logging.getLogger(__name__)


def clean_sheet_name(sheet_name: str) -> str:
    """Excel sheet names: at most 31 characters, no \\ / * ? : [ ]."""
    return re.sub(r'[\\/\*\?\:\[\]]', '_', str(sheet_name))[:31] or "Report"


def to_excel(df: pd.DataFrame, sheet_name: str = 'Report') -> bytes:
    """Convert DataFrame to Excel bytes."""
    output = BytesIO()
    index_needed = isinstance(df.index, pd.MultiIndex) or (df.index.name is not None)
    sheet_name = clean_sheet_name(sheet_name)

    with pd.ExcelWriter(output, engine='xlsxwriter') as writer:
        df.to_excel(writer, index=index_needed, sheet_name=sheet_name)
        worksheet = writer.sheets[sheet_name]
        worksheet.freeze_panes(1, 1 if index_needed else 0)

    return output.getvalue()


def to_multi_sheet_excel(reports: Dict[str, pd.DataFrame]) -> bytes:
    """
    Convert multiple DataFrames to a multi-sheet Excel file.

    Args:
        reports: Dict of {sheet_name: DataFrame}

    Returns:
        Excel file as bytes
    """
    output = BytesIO()
    used = set()

    with pd.ExcelWriter(output, engine='xlsxwriter') as writer:
        for sheet_name, df in reports.items():
            clean_name = clean_sheet_name(sheet_name)
            # Excel rejects duplicate names after truncation
            base, k = clean_name, 1
            while clean_name.lower() in used:
                suffix = f"_{k}"
                clean_name = base[:31 - len(suffix)] + suffix
                k += 1
            used.add(clean_name.lower())

            index_needed = isinstance(df.index, pd.MultiIndex) or (df.index.name is not None)
            df.to_excel(writer, index=index_needed, sheet_name=clean_name)

    return output.getvalue()


def write_bytes(path: str, data: bytes):
    with open(path, "wb") as fh:
        fh.write(data)
    logger.info(f"✅ Wrote {len(data)} bytes to {path}")


def to_text_table(df: pd.DataFrame) -> str:
    if df.empty:
        return "(empty)"
    return df.to_string()


def to_csv_text(df: pd.DataFrame) -> str:
    index_needed = isinstance(df.index, pd.MultiIndex) or (df.index.name is not None)
    return df.to_csv(index=index_needed, lineterminator="\n")


def to_json_text(report) -> str:
    """Deterministic JSON: sorted keys, two-space indent."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def to_dot(name: str, labels: Iterable[str], edges: Iterable[Tuple[int, int]],
           highlight: Optional[Dict[int, str]] = None) -> str:
    """
    DOT digraph of a Hasse diagram.

    Args:
        name: graph name
        labels: node labels by index
        edges: (from, to) index pairs, drawn in the given direction
        highlight: optional {node index: annotation} drawn filled
    """
    labels = list(labels)
    highlight = highlight or {}
    lines = [f'digraph "{name}" {{', "  rankdir=TB;"]
    for i, label in enumerate(labels):
        if i in highlight:
            lines.append(f'  n{i} [label="{label}\\n{highlight[i]}", style=filled, fillcolor="#fde68a"];')
        else:
            lines.append(f'  n{i} [label="{label}"];')
    for a, b in sorted(edges):
        style = ' [penwidth=2]' if a in highlight and b in highlight else ''
        lines.append(f"  n{a} -> n{b}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"

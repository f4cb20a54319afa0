"""Minimal rectangular table model for the reconciliation checks.

Tables come in as CSV text. A row whose first cell is ``TOTAL``
(case-insensitive) declares the sum of the contiguous block of rows above
it, back to the previous total row or the top of the table. A column whose
header is ``TOTAL`` declares the row-wise sum of the other numeric cells.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

from gatework.errors import MalformedTable

_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_number(cell: str) -> int | float | None:
    """Cell value as int or float, None if not numeric."""
    text = cell.strip()
    if not text:
        return None
    if _INT_RE.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return None


def is_total_label(cell: str) -> bool:
    return cell.strip().casefold() == "total"


@dataclass(frozen=True)
class TabularData:
    """Header plus raw string rows; all rows have the header's width."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    name: str = ""

    def __post_init__(self):
        width = len(self.header)
        if width == 0:
            raise MalformedTable("table has no columns")
        for idx, row in enumerate(self.rows):
            if len(row) != width:
                raise MalformedTable(f"row {idx} has {len(row)} cells, header has {width}")

    @classmethod
    def from_csv(cls, text: str, name: str = "") -> "TabularData":
        try:
            parsed = [tuple(row) for row in csv.reader(io.StringIO(text)) if row]
        except csv.Error as exc:
            raise MalformedTable(str(exc)) from exc
        if not parsed:
            raise MalformedTable("empty table")
        return cls(header=parsed[0], rows=tuple(parsed[1:]), name=name)

    def data_rows(self) -> tuple[tuple[str, ...], ...]:
        """Rows excluding declared-total rows."""
        return tuple(row for row in self.rows if not is_total_label(row[0]))

    def total_row_indexes(self) -> tuple[int, ...]:
        return tuple(i for i, row in enumerate(self.rows) if is_total_label(row[0]))

    def total_column_indexes(self) -> tuple[int, ...]:
        return tuple(j for j, cell in enumerate(self.header) if is_total_label(cell))

    def declares_totals(self) -> bool:
        return bool(self.total_row_indexes() or self.total_column_indexes())

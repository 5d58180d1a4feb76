"""Associative-table engine: feasibility masking, fault diagnosis and
best-match queries over a table of equal-width binary rows.

Row and column numbers are 1-based wherever they face a human (they match
line order in the table file); Python sequences stay 0-indexed.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from veclog.metric import (
    Choice,
    CompactedQuality,
    better_of,
    compact_quality,
    quality_vector,
)
from veclog.vlcore import (
    BitVector,
    LengthMismatch,
    ParseError,
    TernaryVector,
    devectorize,
    vectorize,
)


class AssociativeTable:
    """Ordered, immutable rows of equal-width bit vectors with optional
    row/column labels."""

    __slots__ = ("rows", "row_labels", "col_labels")

    def __init__(self, rows: Sequence[BitVector],
                 row_labels: Optional[Sequence[str]] = None,
                 col_labels: Optional[Sequence[str]] = None):
        rows = tuple(rows)
        if not rows:
            raise ValueError("a table needs at least one row")
        width = rows[0].length
        for i, row in enumerate(rows):
            if row.length != width:
                raise LengthMismatch(
                    f"row {i + 1} has width {row.length}, expected {width}")
        self.rows = rows
        self.row_labels = _checked_labels(row_labels, len(rows), "row")
        self.col_labels = _checked_labels(col_labels, width, "column")

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def width(self) -> int:
        return self.rows[0].length

    def column(self, j: int) -> BitVector:
        """Column j (1-based) read top to bottom."""
        if not 1 <= j <= self.width:
            raise IndexError(f"column {j} out of 1..{self.width}")
        return vectorize(row.bit(j) for row in self.rows)

    def widened(self, width: int) -> "AssociativeTable":
        """Copy with zero columns appended on the right up to ``width``."""
        if width < self.width:
            raise ValueError(f"cannot shrink width {self.width} to {width}")
        if width == self.width:
            return self
        pad = width - self.width
        rows = [BitVector(row.value << pad, width) for row in self.rows]
        cols = None
        if self.col_labels is not None:
            cols = list(self.col_labels) + [f"pad{k}" for k in range(1, pad + 1)]
        return AssociativeTable(rows, self.row_labels, cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AssociativeTable):
            return NotImplemented
        return (self.rows == other.rows
                and self.row_labels == other.row_labels
                and self.col_labels == other.col_labels)

    def __hash__(self) -> int:
        return hash((self.rows, self.row_labels, self.col_labels))

    def __repr__(self) -> str:
        return f"AssociativeTable({self.height}x{self.width})"


def _checked_labels(labels: Optional[Sequence[str]], count: int,
                    what: str) -> Optional[tuple[str, ...]]:
    if labels is None:
        return None
    labels = tuple(labels)
    if len(labels) != count:
        raise ValueError(f"{len(labels)} {what} labels for {count} {what}s")
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate {what} labels")
    return labels


class DiagnosisMode(Enum):
    SINGLE = "single"
    MULTIPLE = "multiple"


@dataclass(frozen=True)
class DiagnosisResult:
    """Candidate fault columns (1 = candidate) and whether any exist."""

    candidates: BitVector
    mode: DiagnosisMode
    consistent: bool


def feasible_mask(table: AssociativeTable, query: BitVector) -> BitVector:
    """One bit per row: 0 when the query's 1s are contained in the row
    (feasible), 1 when the row contradicts the query."""
    if query.length != table.width:
        raise LengthMismatch(
            f"query width {query.length} vs table width {table.width}")
    return vectorize(devectorize((query & row) ^ query) for row in table.rows)


def restrict(table: AssociativeTable, query: BitVector) -> AssociativeTable:
    """Conjunct every row with the query, dropping coordinates that cannot
    matter for it; dimensions and labels are preserved."""
    if query.length != table.width:
        raise LengthMismatch(
            f"query width {query.length} vs table width {table.width}")
    return AssociativeTable([row & query for row in table.rows],
                            table.row_labels, table.col_labels)


def diagnose(table: AssociativeTable, response: BitVector,
             mode: DiagnosisMode = DiagnosisMode.SINGLE) -> DiagnosisResult:
    """Locate fault columns from a test-response vector.

    Rows are test signatures (columns are faults); response bit i = 1 means
    test i failed.  Single mode intersects the failing rows; multiple mode
    unions them.  Either way, columns seen by a passing test are masked out.
    An all-zero response leaves the complement of all rows: "no fault
    observed" rather than an error.
    """
    if response.length != table.height:
        raise LengthMismatch(
            f"response width {response.length} vs table height {table.height}")
    width = table.width
    hits = BitVector.ones(width) if mode is DiagnosisMode.SINGLE \
        else BitVector.zeros(width)
    misses = BitVector.zeros(width)
    for i, row in enumerate(table.rows):
        if response.bit(i + 1):
            hits = hits & row if mode is DiagnosisMode.SINGLE else hits | row
        else:
            misses = misses | row
    candidates = hits & ~misses
    return DiagnosisResult(candidates, mode, devectorize(candidates) == 1)


def best_match(query: BitVector,
               table: AssociativeTable) -> tuple[list[int], CompactedQuality]:
    """Rows with the minimal compacted quality against the query.

    Returns (row numbers, quality); row numbers are 1-based in table order.
    Minimality is established purely with compacted-vector comparisons.
    """
    if query.length != table.width:
        raise LengthMismatch(
            f"query width {query.length} vs table width {table.width}")
    best_rows: list[int] = []
    best: Optional[CompactedQuality] = None
    for number, row in enumerate(table.rows, start=1):
        cq = compact_quality(quality_vector(query, row))
        if best is None:
            best, best_rows = cq, [number]
        elif better_of(cq, best) is Choice.FIRST:
            if better_of(best, cq) is Choice.FIRST:
                best_rows.append(number)  # tie
            else:
                best, best_rows = cq, [number]
    assert best is not None
    return best_rows, best


# ---------------------------------------------------------------------------
# Table file format:
#   n w
#   <n lines of w symbols over {0,1} (or {0,1,x} for ternary use)>
#   #labels              (optional trailer)
#   rows: <n names>
#   cols: <w names>

def parse_table(text: str) -> AssociativeTable:
    """Parse the text table format into a binary table."""
    rows, row_labels, col_labels = _parse_rows(text, ternary=False)
    return AssociativeTable([BitVector.from_string(r) for r in rows],
                            row_labels, col_labels)


def parse_ternary_rows(
        text: str) -> tuple[list[TernaryVector], Optional[tuple[str, ...]]]:
    """Parse the same format allowing the x symbol; returns rows and any
    row labels."""
    rows, row_labels, _ = _parse_rows(text, ternary=True)
    return [TernaryVector.from_string(r) for r in rows], row_labels


def load_table(path: str) -> AssociativeTable:
    with open(path, "r", encoding="ascii") as fh:
        return parse_table(fh.read())


def _parse_rows(text: str, ternary: bool):
    alphabet = "01x" if ternary else "01"
    lines = text.splitlines()
    body = [(i + 1, ln.strip()) for i, ln in enumerate(lines) if ln.strip()]
    if not body:
        raise ParseError("empty table")
    header_line, header = body[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("header must be two integers: height width",
                         line=header_line)
    height, width = int(parts[0]), int(parts[1])
    if height < 1 or width < 1:
        raise ParseError("table dimensions must be at least 1x1",
                         line=header_line)
    if len(body) < 1 + height:
        raise ParseError(f"expected {height} rows, found {len(body) - 1}",
                         line=body[-1][0])
    rows = []
    for lineno, row in body[1:1 + height]:
        if len(row) != width:
            raise ParseError(f"row has {len(row)} symbols, expected {width}",
                             line=lineno)
        for col, ch in enumerate(row, start=1):
            if ch not in alphabet:
                raise ParseError(f"invalid symbol {ch!r}", line=lineno,
                                 column=col)
        rows.append(row)
    row_labels = col_labels = None
    trailer = body[1 + height:]
    if trailer:
        lineno, sentinel = trailer[0]
        if sentinel != "#labels":
            raise ParseError("unexpected content after table rows "
                             "(expecting '#labels')", line=lineno)
        for lineno, entry in trailer[1:]:
            if entry.startswith("rows:"):
                row_labels = tuple(entry[len("rows:"):].split())
            elif entry.startswith("cols:"):
                col_labels = tuple(entry[len("cols:"):].split())
            else:
                raise ParseError("label lines must start with 'rows:' or "
                                 "'cols:'", line=lineno)
    return rows, row_labels, col_labels

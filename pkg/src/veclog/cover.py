"""Coverage and memory repair: greedy cover scan, exhaustive minimum-cover
oracle, coverage-table construction from fault coordinates, and the
test/diagnose/repair pipeline pieces.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from veclog.assoc import AssociativeTable
from veclog.vlcore import BitVector, ParseError, devectorize, vectorize


class TooLarge(ValueError):
    """Instance exceeds the exhaustive-enumeration bound."""


class Infeasible(ValueError):
    """No admissible cover exists."""


class NotCovering(ValueError):
    """Proposed cover leaves at least one fault unrepaired."""

    def __init__(self, uncovered: Sequence[tuple[int, int]]):
        self.uncovered = tuple(uncovered)
        listed = " ".join(f"({r},{c})" for r, c in self.uncovered)
        super().__init__(f"faults left uncovered: {listed}")


class BudgetExceeded(ValueError):
    """Proposed cover repairs everything but does not fit the spare budget."""

    def __init__(self, rows_used: int, max_rows: int,
                 cols_used: int, max_cols: int):
        self.rows_used = rows_used
        self.max_rows = max_rows
        self.cols_used = cols_used
        self.max_cols = max_cols
        super().__init__(
            f"cover needs {rows_used} spare rows (budget {max_rows}) and "
            f"{cols_used} spare columns (budget {max_cols})")


class DimensionMismatch(ValueError):
    """Unit and model tables disagree in shape."""


@dataclass(frozen=True, order=True)
class Spare:
    """A spare line: a whole memory row or column identified by its index."""

    axis: str  # "row" or "column"
    index: int

    def __post_init__(self):
        if self.axis not in ("row", "column"):
            raise ValueError(f"axis must be 'row' or 'column', got {self.axis!r}")

    @property
    def label(self) -> str:
        return ("R" if self.axis == "row" else "C") + str(self.index)


class CoverageInstance:
    """Covering table: rows are covering elements (spare lines or generic
    sets), columns are the items to cover."""

    __slots__ = ("table", "kinds", "max_spare_rows", "max_spare_cols")

    def __init__(self, table: AssociativeTable,
                 kinds: Optional[Sequence[Optional[Spare]]] = None,
                 max_spare_rows: Optional[int] = None,
                 max_spare_cols: Optional[int] = None):
        if kinds is None:
            kinds = (None,) * table.height
        kinds = tuple(kinds)
        if len(kinds) != table.height:
            raise ValueError(f"{len(kinds)} row kinds for {table.height} rows")
        self.table = table
        self.kinds = kinds
        self.max_spare_rows = max_spare_rows
        self.max_spare_cols = max_spare_cols

    @property
    def uncoverable_columns(self) -> tuple[int, ...]:
        """1-based columns no row covers; non-empty marks the instance
        infeasible."""
        union = 0
        for row in self.table.rows:
            union |= row.value
        width = self.table.width
        return tuple(j for j in range(1, width + 1)
                     if not (union >> (width - j)) & 1)

    @property
    def feasible(self) -> bool:
        return not self.uncoverable_columns


@dataclass(frozen=True)
class RepairInstance:
    """A memory module with faulty cells and a spare-line budget."""

    rows: int
    cols: int
    faults: frozenset[tuple[int, int]]
    spare_rows: int
    spare_cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("memory dimensions must be at least 1x1")
        if self.spare_rows < 0 or self.spare_cols < 0:
            raise ValueError("spare budgets must be non-negative")
        for r, c in self.faults:
            if not (1 <= r <= self.rows and 1 <= c <= self.cols):
                raise ValueError(f"fault ({r},{c}) outside "
                                 f"{self.rows}x{self.cols} memory")


@dataclass(frozen=True)
class RepairPlan:
    """Chosen spare lines plus the faulty-line -> spare-ordinal remap."""

    chosen: frozenset[Spare]
    remap: tuple[tuple[Spare, int], ...]
    valid: bool


def greedy_cover(instance: CoverageInstance) -> BitVector:
    """Single-pass cover scan: one bit per row, 1 = row taken.

    Rows are scanned in table order; a row is taken exactly when it covers
    at least one not-yet-covered column.  Columns nothing covers simply stay
    uncovered; inspect them with ``coverage_of``.
    """
    width = instance.table.width
    covered = BitVector.zeros(width)
    taken = []
    for row in instance.table.rows:
        gain = (covered | row) & ~covered
        bit = devectorize(gain)
        taken.append(bit)
        if bit:
            covered = covered | row
    return vectorize(taken)


def coverage_of(instance: CoverageInstance, taken: BitVector) -> BitVector:
    """Columns covered by the rows marked 1 in ``taken``."""
    width = instance.table.width
    covered = BitVector.zeros(width)
    for k, row in enumerate(instance.table.rows, start=1):
        if taken.bit(k):
            covered = covered | row
    return covered


def selected_rows(taken: BitVector) -> tuple[int, ...]:
    """1-based row numbers marked 1 in a row-selection vector."""
    return tuple(k for k in range(1, taken.length + 1) if taken.bit(k))


EXHAUSTIVE_LIMIT = 24


def exact_cover_oracle(instance: CoverageInstance) -> tuple[tuple[int, ...], ...]:
    """Every minimum-cardinality cover, found by exhaustive enumeration.

    Covers are returned as sorted tuples of 1-based row numbers, themselves
    sorted; budgets (when present) bound how many spare rows/columns a cover
    may use.  Only intended for tables of up to ``EXHAUSTIVE_LIMIT`` rows.
    """
    n = instance.table.height
    if n > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"{n} rows exceeds the exhaustive bound "
                       f"{EXHAUSTIVE_LIMIT}")
    width = instance.table.width
    full = (1 << width) - 1
    masks = [row.value for row in instance.table.rows]
    union = 0
    for m in masks:
        union |= m
    if union != full:
        raise Infeasible("some columns are covered by no row")
    max_rows = instance.max_spare_rows
    max_cols = instance.max_spare_cols
    row_kind = [k is not None and k.axis == "row" for k in instance.kinds]
    col_kind = [k is not None and k.axis == "column" for k in instance.kinds]

    def admissible(combo: tuple[int, ...]) -> bool:
        if max_rows is not None and sum(row_kind[i] for i in combo) > max_rows:
            return False
        if max_cols is not None and sum(col_kind[i] for i in combo) > max_cols:
            return False
        return True

    for size in range(1, n + 1):
        found = []
        for combo in combinations(range(n), size):
            u = 0
            for i in combo:
                u |= masks[i]
            if u == full and admissible(combo):
                found.append(tuple(i + 1 for i in combo))
        if found:
            return tuple(sorted(found))
    raise Infeasible("no cover fits the spare budget")


def build_repair_table(instance: RepairInstance,
                       spare_order: Optional[Sequence[Spare]] = None
                       ) -> CoverageInstance:
    """Coverage table for a faulty memory: one column per fault, one row per
    candidate spare line.

    Default row order is spare columns ascending then spare rows ascending;
    pass ``spare_order`` to override (the greedy scan is order-sensitive).
    """
    if not instance.faults:
        raise ValueError("repair instance has no faults")
    faults = sorted(instance.faults)
    if spare_order is None:
        spares = [Spare("column", c) for c in sorted({c for _, c in faults})]
        spares += [Spare("row", r) for r in sorted({r for r, _ in faults})]
    else:
        spares = list(spare_order)
    rows = []
    for spare in spares:
        if spare.axis == "column":
            bits = [1 if c == spare.index else 0 for _, c in faults]
        else:
            bits = [1 if r == spare.index else 0 for r, _ in faults]
        rows.append(vectorize(bits))
    table = AssociativeTable(
        rows,
        row_labels=[s.label for s in spares],
        col_labels=[f"F{r},{c}" for r, c in faults],
    )
    return CoverageInstance(table, spares,
                            max_spare_rows=instance.spare_rows,
                            max_spare_cols=instance.spare_cols)


def repair_plan(instance: RepairInstance,
                cover: Iterable[Spare]) -> RepairPlan:
    """Validate a cover against the instance and assign spare ordinals.

    Raises ``NotCovering`` when some fault lies on no chosen line, and
    ``BudgetExceeded`` when the cover repairs everything but overruns the
    spare budget.  Ordinals are assigned in ascending line order, rows and
    columns numbered independently.
    """
    chosen = frozenset(cover)
    row_lines = {s.index for s in chosen if s.axis == "row"}
    col_lines = {s.index for s in chosen if s.axis == "column"}
    uncovered = sorted((r, c) for r, c in instance.faults
                       if r not in row_lines and c not in col_lines)
    if uncovered:
        raise NotCovering(uncovered)
    if len(row_lines) > instance.spare_rows or len(col_lines) > instance.spare_cols:
        raise BudgetExceeded(len(row_lines), instance.spare_rows,
                             len(col_lines), instance.spare_cols)
    remap = [(Spare("column", c), ordinal)
             for ordinal, c in enumerate(sorted(col_lines), start=1)]
    remap += [(Spare("row", r), ordinal)
              for ordinal, r in enumerate(sorted(row_lines), start=1)]
    return RepairPlan(chosen, tuple(remap), True)


def run_test(uut: AssociativeTable, mut: AssociativeTable) -> BitVector:
    """Compare unit-under-test responses against the reference model.

    Row i holds the response to test pattern i; result bit i = 1 means test
    i exposed a mismatch.
    """
    if uut.height != mut.height or uut.width != mut.width:
        raise DimensionMismatch(
            f"unit is {uut.height}x{uut.width}, model is "
            f"{mut.height}x{mut.width}")
    return vectorize(devectorize(u ^ m) for u, m in zip(uut.rows, mut.rows))


# ---------------------------------------------------------------------------
# Repair instance file format:
#   R C r_max c_max
#   <one "r c" fault coordinate per line>

def parse_repair_instance(text: str) -> RepairInstance:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())
             if ln.strip()]
    if not lines:
        raise ParseError("empty repair instance")
    header_line, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or not all(p.isdigit() for p in parts):
        raise ParseError("header must be four integers: rows cols "
                         "spare_rows spare_cols", line=header_line)
    rows, cols, spare_rows, spare_cols = (int(p) for p in parts)
    faults = set()
    for lineno, entry in lines[1:]:
        coords = entry.split()
        if len(coords) != 2 or not all(c.isdigit() for c in coords):
            raise ParseError("fault line must be two integers: row col",
                             line=lineno)
        faults.add((int(coords[0]), int(coords[1])))
    try:
        return RepairInstance(rows, cols, frozenset(faults),
                              spare_rows, spare_cols)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_repair_instance(path: str) -> RepairInstance:
    with open(path, "r", encoding="ascii") as fh:
        return parse_repair_instance(fh.read())

"""Interaction-quality criteria for vector pairs.

Three formulations of the same idea, from arithmetic to pure vector logic:

* ``quality_arith``  - exact-rational score in [0,1]; 1 means equal vectors.
* ``quality_counts`` - integer mismatch counts; 0 means equal vectors.
* ``quality_vector`` - a vector of per-coordinate defects; all-zero means
  equal vectors.  Graded by compacting the 1s and comparing their run
  lengths, so two solutions are ranked without any arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from veclog.vlcore import (
    BitVector,
    EmptyIntersection,
    LengthMismatch,
    TernaryVector,
    devectorize,
    slc,
    ternary_intersect,
)


@dataclass(frozen=True)
class ArithQuality:
    """Exact-rational interaction score of a ternary query/stored pair.

    ``distance`` is the fraction of coordinates whose intersection is
    non-empty (1 for fully compatible vectors, despite the "distance" name).
    The membership grades are space-size ratios; ``quality`` is the average
    of the three.
    """

    distance: Fraction
    query_in_stored: Fraction
    stored_in_query: Fraction
    quality: Fraction


@dataclass(frozen=True)
class CountQuality:
    """Integer defect counts for a binary pair; total 0 iff vectors equal."""

    mismatches: int
    stored_only: int
    query_only: int
    total: int


@dataclass(slots=True)
class QualityVector:
    """Per-coordinate defect vectors for a binary pair.

    ``quality`` is the coordinatewise OR of the three components; its 1s
    mark coordinates where interaction quality is lost.
    """

    mismatch: BitVector
    stored_only: BitVector
    query_only: BitVector
    quality: BitVector


class Choice(Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class CompactedQuality:
    """Left-justified quality vector plus its 1-count; renders as (ones/len)."""

    compacted: BitVector
    ones: int
    length: int

    def __str__(self) -> str:
        return f"({self.ones}/{self.length})"


def quality_arith(query: TernaryVector, stored: TernaryVector) -> ArithQuality:
    """Exact-rational quality of a ternary pair.

    If any coordinate clashes (0 against 1) the common space is empty and
    both membership grades are zero; otherwise each grade is the ratio of
    the intersection space to the operand's own space.
    """
    if query.length != stored.length:
        raise LengthMismatch(
            f"operand lengths differ: {query.length} vs {stored.length}")
    n = query.length
    inter = ternary_intersect(query, stored)
    if isinstance(inter, EmptyIntersection):
        distance = Fraction(n - inter.empty_count, n)
        query_in_stored = Fraction(0)
        stored_in_query = Fraction(0)
    else:
        distance = Fraction(1)
        query_in_stored = Fraction(1, 1 << (stored.xcount - inter.xcount))
        stored_in_query = Fraction(1, 1 << (query.xcount - inter.xcount))
    quality = (distance + query_in_stored + stored_in_query) / 3
    return ArithQuality(distance, query_in_stored, stored_in_query, quality)


def quality_counts(query: BitVector, stored: BitVector) -> CountQuality:
    """Integer defect counts of a binary pair; total is 0 iff the vectors
    are equal and grows as interaction quality degrades."""
    if query.length != stored.length:
        raise LengthMismatch(
            f"operand lengths differ: {query.length} vs {stored.length}")
    shared = (query.value & stored.value).bit_count()
    mismatches = (query.value ^ stored.value).bit_count()
    stored_only = stored.popcount - shared
    query_only = query.popcount - shared
    return CountQuality(mismatches, stored_only, query_only,
                        mismatches + stored_only + query_only)


def quality_vector(query: BitVector, stored: BitVector) -> QualityVector:
    """Per-coordinate defect vectors of a binary pair, built with logic
    operations only."""
    if query.length != stored.length:
        raise LengthMismatch(
            f"operand lengths differ: {query.length} vs {stored.length}")
    n = query.length
    mask = (1 << n) - 1
    overlap = query.value & stored.value
    outside = mask & ~overlap
    mismatch = query.value ^ stored.value
    stored_only = stored.value & outside
    query_only = query.value & outside
    quality = mismatch | stored_only | query_only
    return QualityVector(
        BitVector(mismatch, n),
        BitVector(stored_only, n),
        BitVector(query_only, n),
        BitVector(quality, n),
    )


def compact_quality(qv: QualityVector) -> CompactedQuality:
    """Crowd the quality vector's 1s to the left; the run length grades the
    solution (fewer 1s is better)."""
    q = qv.quality
    return CompactedQuality(slc(q), q.popcount, q.length)


def better_of(first: CompactedQuality, second: CompactedQuality) -> Choice:
    """Pick the better of two compacted qualities with vector logic alone.

    The first wins when its compacted 1-run is contained in the second's;
    ties resolve to the first.
    """
    if first.length != second.length:
        raise LengthMismatch(
            f"operand lengths differ: {first.length} vs {second.length}")
    overlap = first.compacted & second.compacted
    excess = overlap ^ first.compacted
    return Choice.FIRST if devectorize(excess) == 0 else Choice.SECOND


def xor_distance(a: BitVector, b: BitVector) -> BitVector:
    """Coordinatewise xor; the vector-valued distance between binary points."""
    return a ^ b


def beta_cycle_check(points: Sequence[BitVector]) -> BitVector:
    """XOR of the distances along a closed cycle of points (last connects
    back to first).  Always the all-zero vector; kept as a checkable value
    rather than a bare assertion."""
    if len(points) < 2:
        raise ValueError("a cycle needs at least 2 points")
    first = points[0]
    acc = BitVector.zeros(first.length)
    for i, point in enumerate(points):
        nxt = points[(i + 1) % len(points)]
        acc = acc ^ xor_distance(point, nxt)
    return acc

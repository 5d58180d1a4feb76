"""Fixed-length binary and ternary vectors and the core logic operations.

Vectors are immutable values. Coordinates are numbered 1..len in prose and
rendered left to right, so the string form of a vector reads exactly like a
printed register: coordinate 1 is the leftmost character.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional

MAX_LEN = 1 << 16

_BIT_CHARS = {"0": 0, "1": 1}
_TERNARY_CHARS = ("0", "1", "x")


class LengthMismatch(ValueError):
    """Binary operation applied to vectors of different lengths."""


class ArityError(ValueError):
    """Operand count does not match the requested operation kind."""


class EmptyInput(ValueError):
    """An operation that needs at least one coordinate got none."""


class ParseError(ValueError):
    """Rejected textual form; carries the offending position when known."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        super().__init__(message)
        self.line = line
        self.column = column


def _check_length(n: int) -> None:
    if not 1 <= n <= MAX_LEN:
        raise ValueError(f"vector length must be in 1..{MAX_LEN}, got {n}")


class BitVector:
    """Immutable vector over {0,1}.

    Coordinate k (1-based) is stored at bit position ``length - k`` of
    ``value``, so ``value`` reads as the binary number printed by ``str()``.
    """

    __slots__ = ("value", "length")

    def __init__(self, value: int, length: int):
        _check_length(length)
        if value < 0 or value >> length:
            raise ValueError("value does not fit the stated length")
        self.value = value
        self.length = length

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if not text:
            raise EmptyInput("empty bit string")
        for col, ch in enumerate(text, start=1):
            if ch not in _BIT_CHARS:
                raise ParseError(f"invalid symbol {ch!r} in bit string", column=col)
        return cls(int(text, 2), len(text))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls((1 << length) - 1, length)

    @property
    def popcount(self) -> int:
        return self.value.bit_count()

    def bit(self, k: int) -> int:
        """Coordinate k, 1-based from the left."""
        if not 1 <= k <= self.length:
            raise IndexError(f"coordinate {k} out of 1..{self.length}")
        return (self.value >> (self.length - k)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - k)) & 1
                     for k in range(1, self.length + 1))

    def with_bit(self, k: int, bit: int) -> "BitVector":
        """Copy with coordinate k (1-based) replaced."""
        if not 1 <= k <= self.length:
            raise IndexError(f"coordinate {k} out of 1..{self.length}")
        mask = 1 << (self.length - k)
        value = (self.value & ~mask) | (mask if bit else 0)
        return BitVector(value, self.length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        return self.bits()[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.value == other.value and self.length == other.length

    def __hash__(self) -> int:
        return hash((self.value, self.length))

    def _require_same_length(self, other: "BitVector") -> None:
        if self.length != other.length:
            raise LengthMismatch(
                f"operand lengths differ: {self.length} vs {other.length}")

    def __and__(self, other: "BitVector") -> "BitVector":
        if not isinstance(other, BitVector):
            return NotImplemented
        self._require_same_length(other)
        return BitVector(self.value & other.value, self.length)

    def __or__(self, other: "BitVector") -> "BitVector":
        if not isinstance(other, BitVector):
            return NotImplemented
        self._require_same_length(other)
        return BitVector(self.value | other.value, self.length)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if not isinstance(other, BitVector):
            return NotImplemented
        self._require_same_length(other)
        return BitVector(self.value ^ other.value, self.length)

    def __invert__(self) -> "BitVector":
        return BitVector(~self.value & ((1 << self.length) - 1), self.length)

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b")

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


class TernaryVector:
    """Immutable vector over {0,1,x}; x is a don't-care covering both values.

    A vector with k x-coordinates denotes a space of 2**k binary vectors.
    """

    __slots__ = ("ones", "xs", "length")

    def __init__(self, ones: int, xs: int, length: int):
        _check_length(length)
        mask = (1 << length) - 1
        if ones < 0 or ones >> length or xs < 0 or xs >> length:
            raise ValueError("coordinate masks do not fit the stated length")
        if ones & xs:
            raise ValueError("a coordinate cannot be both 1 and x")
        self.ones = ones & mask
        self.xs = xs & mask
        self.length = length

    @classmethod
    def from_string(cls, text: str) -> "TernaryVector":
        if not text:
            raise EmptyInput("empty ternary string")
        ones = xs = 0
        for col, ch in enumerate(text, start=1):
            ones <<= 1
            xs <<= 1
            if ch == "1":
                ones |= 1
            elif ch == "x":
                xs |= 1
            elif ch != "0":
                raise ParseError(f"invalid symbol {ch!r} in ternary string",
                                 column=col)
        return cls(ones, xs, len(text))

    @property
    def xcount(self) -> int:
        return self.xs.bit_count()

    @property
    def space_size(self) -> int:
        """Number of binary vectors the don't-cares expand to."""
        return 1 << self.xcount

    def symbol(self, k: int) -> str:
        """Coordinate k, 1-based from the left."""
        if not 1 <= k <= self.length:
            raise IndexError(f"coordinate {k} out of 1..{self.length}")
        pos = self.length - k
        if (self.xs >> pos) & 1:
            return "x"
        return "1" if (self.ones >> pos) & 1 else "0"

    def symbols(self) -> tuple[str, ...]:
        return tuple(self.symbol(k) for k in range(1, self.length + 1))

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TernaryVector):
            return NotImplemented
        return (self.ones, self.xs, self.length) == (other.ones, other.xs,
                                                     other.length)

    def __hash__(self) -> int:
        return hash((self.ones, self.xs, self.length))

    def __str__(self) -> str:
        return "".join(self.symbols())

    def __repr__(self) -> str:
        return f"TernaryVector('{self}')"


@dataclass(frozen=True)
class EmptyIntersection:
    """Intersection collapsed: at least one coordinate held 0 on one side
    and 1 on the other.  Not an error; callers need the clash count."""

    empty_count: int


class InteractionType(Enum):
    """The five set-theoretic relations between two ternary vectors."""

    EQUAL = "equal"
    QUERY_SUBSET = "query-subset"
    TARGET_SUBSET = "target-subset"
    OVERLAP = "overlap"
    DISJOINT = "disjoint"


def logic_op(kind: str, a: BitVector, b: Optional[BitVector] = None) -> BitVector:
    """Apply one of the five vector operations: and, or, xor, not, nop.

    Binary kinds require b of equal length; unary kinds forbid b.
    """
    if kind in ("and", "or", "xor"):
        if b is None:
            raise ArityError(f"{kind} needs a second operand")
        if kind == "and":
            return a & b
        if kind == "or":
            return a | b
        return a ^ b
    if kind in ("not", "nop"):
        if b is not None:
            raise ArityError(f"{kind} takes a single operand")
        return ~a if kind == "not" else a
    raise ValueError(f"unknown operation kind {kind!r}")


def slc(a: BitVector) -> BitVector:
    """Shift-left-crowding: compact all 1s to the left end, count preserved."""
    ones = a.popcount
    return BitVector(((1 << ones) - 1) << (a.length - ones), a.length)


def devectorize(a: BitVector) -> int:
    """OR-reduce a vector to a single bit: 1 iff any coordinate is 1."""
    return 1 if a.value else 0


def vectorize(bits: Iterable[int]) -> BitVector:
    """Concatenate single bits, in order, into a vector."""
    value = 0
    n = 0
    for bit in bits:
        if bit not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {bit!r}")
        value = (value << 1) | bit
        n += 1
    if n == 0:
        raise EmptyInput("vectorize needs at least one bit")
    return BitVector(value, n)


def ternary_intersect(a: TernaryVector,
                      b: TernaryVector) -> "TernaryVector | EmptyIntersection":
    """Coordinatewise intersection: x absorbs, equal symbols keep, 0 vs 1
    empties the coordinate.  Any empty coordinate empties the whole result."""
    if a.length != b.length:
        raise LengthMismatch(
            f"operand lengths differ: {a.length} vs {b.length}")
    mask = (1 << a.length) - 1
    both_defined = (mask ^ a.xs) & (mask ^ b.xs)
    clash = both_defined & (a.ones ^ b.ones)
    if clash:
        return EmptyIntersection(clash.bit_count())
    return TernaryVector(a.ones | b.ones, a.xs & b.xs, a.length)


def classify_interaction(a: TernaryVector, b: TernaryVector) -> InteractionType:
    """Label the pair with exactly one of the five interaction types."""
    inter = ternary_intersect(a, b)
    if isinstance(inter, EmptyIntersection):
        return InteractionType.DISJOINT
    if a == b:
        return InteractionType.EQUAL
    if inter == a:
        return InteractionType.QUERY_SUBSET
    if inter == b:
        return InteractionType.TARGET_SUBSET
    return InteractionType.OVERLAP

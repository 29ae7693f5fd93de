"""Dense-integer id sets backed by a word-parallel bitmap.

Resource ids and tag ids are contiguous small integers, so one Python
int per set gives intersection/union/difference as single C-level
bitwise operations, independent of cardinality. Instances are
immutable values: every operation returns a new set, which makes them
safe to share between browsing states and caches.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class IdSet:
    """Immutable set of dense non-negative integer ids."""

    __slots__ = ("_bits",)

    def __init__(self, ids: Iterable[int] = ()) -> None:
        bits = 0
        for i in ids:
            if i < 0:
                raise ValueError(f"negative id: {i}")
            bits |= 1 << i
        object.__setattr__(self, "_bits", bits)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("IdSet is immutable")

    @classmethod
    def from_bits(cls, bits: int) -> "IdSet":
        """Wrap a raw bitmap (bit i set means id i is a member)."""
        if bits < 0:
            raise ValueError("bitmap must be non-negative")
        s = cls.__new__(cls)
        object.__setattr__(s, "_bits", bits)
        return s

    @classmethod
    def full(cls, n: int) -> "IdSet":
        """The set {0, .., n-1}."""
        return cls.from_bits((1 << n) - 1)

    @property
    def bits(self) -> int:
        """Raw bitmap, for hot loops that work on ints directly."""
        return self._bits

    def __and__(self, other: "IdSet") -> "IdSet":
        return IdSet.from_bits(self._bits & other._bits)

    def __or__(self, other: "IdSet") -> "IdSet":
        return IdSet.from_bits(self._bits | other._bits)

    def __sub__(self, other: "IdSet") -> "IdSet":
        return IdSet.from_bits(self._bits & ~other._bits)

    def intersection_size(self, other: "IdSet") -> int:
        """|self & other| without materializing the intersection set."""
        return (self._bits & other._bits).bit_count()

    def add(self, i: int) -> "IdSet":
        """New set with id i included."""
        if i < 0:
            raise ValueError(f"negative id: {i}")
        return IdSet.from_bits(self._bits | (1 << i))

    def remove(self, i: int) -> "IdSet":
        """New set with id i excluded."""
        if i < 0:
            raise ValueError(f"negative id: {i}")
        return IdSet.from_bits(self._bits & ~(1 << i))

    def __contains__(self, i: int) -> bool:
        return i >= 0 and (self._bits >> i) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        # Ascending id order: peel the lowest set bit each step.
        bits = self._bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self._bits.bit_count()

    def __bool__(self) -> bool:
        return self._bits != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IdSet):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._bits)

    def __repr__(self) -> str:
        return f"IdSet({{{', '.join(map(str, self))}}})"

    def canonical_bytes(self) -> bytes:
        """Deterministic, order-independent serialization.

        Minimal-length little-endian encoding of the bitmap; equal sets
        always produce equal bytes and distinct sets distinct bytes (the
        encoding is injective). The empty set encodes as b"".
        """
        b = self._bits
        return b.to_bytes((b.bit_length() + 7) // 8, "little")

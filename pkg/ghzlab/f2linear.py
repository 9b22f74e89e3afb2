# ghzlab/f2linear.py
"""
Linear algebra over F_2^n.

Words are plain Python ints: bit i-1 of the int is coordinate i, so the
least significant bit is coordinate 1. Subspaces keep a reduced row-echelon
basis whose pivot is the lowest set bit of each row.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .conf import resolve
from .exceptions import DimensionMismatchError, SizeLimitError

logger = logging.getLogger(__name__)


def hamming_weight(x: int) -> int:
    return int(x).bit_count()


def pivot_of(row: int) -> int:
    """Index of the lowest set bit (0-based)."""
    return (row & -row).bit_length() - 1


def word_from_bits(bits: Sequence[int]) -> int:
    """(b_1, ..., b_n) -> int, coordinate 1 in the least significant bit."""
    word = 0
    for i, bit in enumerate(bits):
        if bit & 1:
            word |= 1 << i
    return word


def bits_from_word(word: int, n: int) -> tuple:
    return tuple((word >> i) & 1 for i in range(n))


def to_hex(word: int) -> str:
    return hex(int(word))


def from_hex(text: str) -> int:
    return int(str(text), 16)


def _check_word(word: int, n: int):
    if word < 0 or word >> n:
        raise DimensionMismatchError(f"{to_hex(word)} is not a word of F_2^{n}")


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of F_2^n held by its RREF basis."""
    n: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.n - self.dim

    @property
    def size(self) -> int:
        return 1 << self.dim

    @property
    def pivots(self) -> tuple:
        return tuple(pivot_of(row) for row in self.basis)

    @classmethod
    def full(cls, n: int) -> 'Subspace':
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> 'Subspace':
        return cls(n, ())

    def reduce(self, x: int) -> int:
        """Clear every pivot column of x; the canonical member of x + V."""
        for row in self.basis:
            if (x >> pivot_of(row)) & 1:
                x ^= row
        return x

    def contains(self, x: int) -> bool:
        return self.reduce(x) == 0

    def coordinates(self, v: int) -> int:
        """Coefficients of v over the basis, as an int over F_2^dim."""
        if not self.contains(v):
            raise DimensionMismatchError(f"{to_hex(v)} is not in the subspace")
        gamma = 0
        for k, pivot in enumerate(self.pivots):
            if (v >> pivot) & 1:
                gamma |= 1 << k
        return gamma

    def combination(self, gamma: int) -> int:
        """The member whose coordinates are gamma."""
        v = 0
        for k, row in enumerate(self.basis):
            if (gamma >> k) & 1:
                v ^= row
        return v

    def span_table(self, enum_cap=None) -> np.ndarray:
        """Members of V indexed by coefficient integer."""
        enum_cap = resolve(enum_cap, 'ENUM_CAP')
        if self.size > enum_cap:
            raise SizeLimitError('subspace enumeration', self.size, enum_cap)
        table = np.zeros(1, dtype=np.int64)
        for row in self.basis:
            table = np.concatenate([table, table ^ row])
        return table

    def kernel(self, gamma: int) -> 'Subspace':
        """{v in V : gamma . coords(v) = 0}, codimension one more."""
        k0 = pivot_of(gamma)
        anchor = self.basis[k0]
        rows = []
        for k, row in enumerate(self.basis):
            if k == k0:
                continue
            rows.append(row ^ anchor if (gamma >> k) & 1 else row)
        return rref_basis(rows, n=self.n)


def rref_basis(vectors: Iterable, n: int = None) -> Subspace:
    """
    Span of ``vectors`` in reduced row-echelon form.

    Vectors are ints (with ``n`` given) or bit sequences of a common length.
    """
    words = []
    for vector in vectors:
        if isinstance(vector, (int, np.integer)):
            if n is None:
                raise DimensionMismatchError('integer words need an explicit ambient dimension')
            word = int(vector)
        else:
            bits = tuple(vector)
            if n is None:
                n = len(bits)
            elif len(bits) != n:
                raise DimensionMismatchError(
                    f"vector of length {len(bits)} in a span over F_2^{n}"
                )
            word = word_from_bits(bits)
        words.append(word)
    if n is None:
        raise DimensionMismatchError('empty span needs an explicit ambient dimension')

    rows = []
    for word in words:
        _check_word(word, n)
        for row in rows:
            if (word >> pivot_of(row)) & 1:
                word ^= row
        if not word:
            continue
        pivot = pivot_of(word)
        rows = [row ^ word if (row >> pivot) & 1 else row for row in rows]
        rows.append(word)
    rows.sort(key=pivot_of)
    return Subspace(n, tuple(rows))


class AffineCoset:
    """a + V with the shift stored in canonical (reduced) form."""

    __slots__ = ('shift', 'space')

    def __init__(self, shift: int, space: Subspace):
        _check_word(shift, space.n)
        self.shift = space.reduce(int(shift))
        self.space = space

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def size(self) -> int:
        return self.space.size

    def __eq__(self, other):
        if not isinstance(other, AffineCoset):
            return NotImplemented
        return self.space == other.space and self.shift == other.shift

    def __hash__(self):
        return hash((self.shift, self.space))

    def __repr__(self):
        return f"AffineCoset({to_hex(self.shift)} + <{', '.join(map(to_hex, self.space.basis))}>)"

    def table(self, a: int = None, enum_cap=None) -> np.ndarray:
        """Members a + span(gamma) indexed by gamma; a defaults to the shift."""
        origin = self.shift if a is None else int(a)
        return origin ^ self.space.span_table(enum_cap=enum_cap)


def coset_members(c: AffineCoset, enum_cap=None) -> list:
    """All members of c in Gray-code order over the basis coefficients."""
    table = c.table(enum_cap=enum_cap)
    order = np.arange(c.size, dtype=np.int64)
    return [int(x) for x in table[order ^ (order >> 1)]]


def coset_contains(c: AffineCoset, x: int) -> bool:
    if x < 0 or x >> c.n:
        raise DimensionMismatchError(f"{to_hex(x)} is not a word of F_2^{c.n}")
    return c.space.contains(int(x) ^ c.shift)


def cosets_equal(c: AffineCoset, d: AffineCoset) -> bool:
    return c.space == d.space and c.space.contains(c.shift ^ d.shift)

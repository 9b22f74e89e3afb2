# ghzlab/fourier.py
"""
Exact Fourier analysis on affine cosets a + V of F_2^n.

Characters of V are indexed by gamma in F_2^dim, read against the RREF basis
of V. With respect to a shift a in the coset, chi_gamma(x) = (-1)^(gamma . c)
where c are the coordinates of x + a. The coefficient of f is
f^(gamma) = E_{x ~ a+V}[f(x) chi_gamma(x + a)].
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping

import numpy as np

from .exceptions import DomainError, NoNonzeroCharacterError, ShiftError
from .f2linear import AffineCoset, coset_contains, hamming_weight

logger = logging.getLogger(__name__)

TRIVIAL = 0


@dataclass(frozen=True)
class DyadicTable:
    """Exact rational values keyed by coset member (or by character index)."""
    entries: Mapping[int, Fraction] = field(default_factory=dict)

    def __getitem__(self, key):
        return self.entries[key]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def items(self):
        return self.entries.items()

    @classmethod
    def indicator(cls, bitset, c: AffineCoset) -> 'DyadicTable':
        bitset = np.asarray(bitset, dtype=bool)
        table = c.table()
        return cls({int(x): Fraction(int(bitset[x])) for x in table})


def butterfly(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform: H[g] = sum_c v[c] (-1)^|g & c|."""
    out = np.array(values, copy=True)
    size = out.shape[0]
    h = 1
    while h < size:
        out = out.reshape(-1, 2, h)
        low = out[:, 0, :].copy()
        high = out[:, 1, :].copy()
        out[:, 0, :] = low + high
        out[:, 1, :] = low - high
        out = out.reshape(-1)
        h *= 2
    return out


def _check_shift(c: AffineCoset, a: int):
    if not coset_contains(c, a):
        raise ShiftError(f"shift {hex(a)} does not lie in {c!r}")


def _scaled_values(f: Mapping, c: AffineCoset, a: int):
    """f on a + span(gamma) in gamma order, as integers over a common denominator."""
    values = []
    for x in c.table(a):
        try:
            values.append(Fraction(f[int(x)]))
        except KeyError:
            raise DomainError(f"function is undefined at coset member {hex(int(x))}") from None
    denominator = lcm(*(v.denominator for v in values)) if values else 1
    numerators = np.array([v.numerator * (denominator // v.denominator) for v in values], dtype=object)
    return numerators, denominator


def wht(f: Mapping, c: AffineCoset, a: int) -> DyadicTable:
    """Fourier coefficients of f with respect to the shift a, keyed by gamma."""
    _check_shift(c, a)
    numerators, denominator = _scaled_values(f, c, a)
    transformed = butterfly(numerators)
    scale = denominator * c.size
    return DyadicTable({gamma: Fraction(int(value), scale) for gamma, value in enumerate(transformed)})


def inverse_wht(coefficients: Mapping, c: AffineCoset, a: int) -> DyadicTable:
    """Rebuild f on the coset from its coefficients with respect to a."""
    _check_shift(c, a)
    values = [Fraction(coefficients[gamma]) for gamma in range(c.size)]
    denominator = lcm(*(v.denominator for v in values)) if values else 1
    numerators = np.array([v.numerator * (denominator // v.denominator) for v in values], dtype=object)
    transformed = butterfly(numerators)
    table = c.table(a)
    return DyadicTable({int(x): Fraction(int(value), denominator) for x, value in zip(table, transformed)})


def direct_wht(f: Mapping, c: AffineCoset, a: int) -> DyadicTable:
    """Term-by-term defining sum. O(4^dim); kept as a test oracle."""
    _check_shift(c, a)
    table = [int(x) for x in c.table(a)]
    coefficients = {}
    for gamma in range(c.size):
        total = Fraction(0)
        for coords, x in enumerate(table):
            sign = -1 if hamming_weight(gamma & coords) & 1 else 1
            total += sign * Fraction(f[x])
        coefficients[gamma] = total / c.size
    return DyadicTable(coefficients)


def restricted_spectrum(bitset, c: AffineCoset) -> np.ndarray:
    """
    Integer numerators of S|_c over 2^dim, against the canonical shift.

    Signs depend on the shift; absolute values do not.
    """
    bitset = np.asarray(bitset, dtype=bool)
    restricted = bitset[c.table()].astype(np.int64)
    return butterfly(restricted)


def restricted_coeff_abs(bitset, c: AffineCoset, gamma: int) -> Fraction:
    spectrum = restricted_spectrum(bitset, c)
    return Fraction(abs(int(spectrum[gamma])), c.size)


def max_nonzero_coeff(bitset, c: AffineCoset):
    """(gamma, |S^(gamma)|) maximising over gamma != 0; smallest gamma on ties."""
    if c.dim == 0:
        raise NoNonzeroCharacterError(f"{c!r} has only the trivial character")
    magnitudes = np.abs(restricted_spectrum(bitset, c)[1:])
    gamma = int(np.argmax(magnitudes)) + 1
    return gamma, Fraction(int(magnitudes[gamma - 1]), c.size)


def max_nonzero_numerator(bitset, c: AffineCoset) -> int:
    """max |2^dim * S^(gamma)| over gamma != 0, or 0 on a point."""
    if c.dim == 0:
        return 0
    return int(np.abs(restricted_spectrum(bitset, c)[1:]).max())


def coset_measure(bitset, c: AffineCoset) -> Fraction:
    """mu_c(S), which equals the trivial coefficient of S|_c."""
    bitset = np.asarray(bitset, dtype=bool)
    return Fraction(int(bitset[c.table()].sum()), c.size)


def parseval_residual(f: Mapping, c: AffineCoset, a: int) -> Fraction:
    """E[f^2] - sum of squared coefficients. Always exactly zero."""
    coefficients = wht(f, c, a)
    energy = sum((Fraction(f[int(x)]) ** 2 for x in c.table()), Fraction(0)) / c.size
    return energy - sum((value ** 2 for value in coefficients.entries.values()), Fraction(0))


def plancherel_residual(f: Mapping, g: Mapping, c: AffineCoset, a: int) -> Fraction:
    """<f, g> - sum f^ g^. Always exactly zero."""
    f_hat = wht(f, c, a)
    g_hat = wht(g, c, a)
    inner = sum(
        (Fraction(f[int(x)]) * Fraction(g[int(x)]) for x in c.table()), Fraction(0)
    ) / c.size
    return inner - sum((f_hat[gamma] * g_hat[gamma] for gamma in range(c.size)), Fraction(0))


def xor_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """h[x] = sum_y f[y] g[x ^ y] for integer arrays of length 2^d."""
    size = len(f)
    product = butterfly(np.asarray(f, dtype=np.int64)) * butterfly(np.asarray(g, dtype=np.int64))
    return butterfly(product) // size


def triple_count(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> int:
    """#{(x, y) : a[x] b[y] c[x ^ y]} for 0/1 arrays of length 2^d."""
    convolved = xor_convolve(b, c)
    return int(np.dot(np.asarray(a, dtype=np.int64), convolved))

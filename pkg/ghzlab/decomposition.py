# ghzlab/decomposition.py
"""
Affine partitions of (F_2^n)^3 and the Fourier refinement that makes every
restricted event look pseudorandom on most parts.

P is the n-fold GHZ distribution, uniform on {(x, y, z) : x + y + z = 0}.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing.pool import ThreadPool

import numpy as np

from .conf import resolve
from .exact import as_fraction, ceil_fraction, fraction_text
from .exceptions import DomainError, EmptyEventError, InvalidSplitError, SizeLimitError
from .f2linear import AffineCoset, Subspace, from_hex, pivot_of, rref_basis, to_hex
from .fourier import (
    DyadicTable, coset_measure, max_nonzero_coeff, max_nonzero_numerator, triple_count, wht,
)
from .games import ProductEvent

logger = logging.getLogger(__name__)


class Part:
    """a + V^3 with every shift reduced against V."""

    __slots__ = ('shifts', 'space')

    def __init__(self, shifts, space: Subspace):
        self.space = space
        self.shifts = tuple(space.reduce(int(a)) for a in shifts)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def codim(self) -> int:
        return self.space.codim

    @property
    def meets_support(self) -> bool:
        # Reduced shifts of a part meeting supp(P) satisfy a1 + a2 + a3 = 0.
        a1, a2, a3 = self.shifts
        return (a1 ^ a2 ^ a3) == 0

    def coset(self, i: int) -> AffineCoset:
        return AffineCoset(self.shifts[i], self.space)

    def cosets(self):
        return tuple(self.coset(i) for i in range(3))

    def contains(self, triple) -> bool:
        return all(self.space.contains(x ^ a) for x, a in zip(triple, self.shifts))

    def sort_key(self):
        return self.shifts + self.space.basis

    def __eq__(self, other):
        if not isinstance(other, Part):
            return NotImplemented
        return self.shifts == other.shifts and self.space == other.space

    def __hash__(self):
        return hash((self.shifts, self.space))

    def __repr__(self):
        return f"Part({', '.join(map(to_hex, self.shifts))}; codim {self.codim})"


@dataclass
class AffinePartition:
    parts: list
    codim_bound: int = 0
    history: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.parts[0].n

    @property
    def steps(self) -> int:
        return len([h for h in self.history if h['refined']])

    @classmethod
    def trivial(cls, n: int) -> 'AffinePartition':
        return cls([Part((0, 0, 0), Subspace.full(n))], 0)

    def locate(self, triple) -> list:
        """Indices of the parts containing the triple (exactly one when valid)."""
        return [k for k, part in enumerate(self.parts) if part.contains(triple)]


def part_weight(part: Part) -> Fraction:
    """P(pi) = |V|^2 / 4^n on parts meeting supp(P), else 0."""
    if not part.meets_support:
        return Fraction(0)
    return Fraction(part.space.size ** 2, 4 ** part.n)


def _local_sets(part: Part, event: ProductEvent):
    return [np.asarray(event[i], dtype=bool)[part.coset(i).table()].astype(np.int64) for i in range(3)]


def edge_count(part: Part, event: ProductEvent) -> int:
    """|supp(P) n E n pi|, the inputs (x, y, x+y) of E inside the part."""
    if not part.meets_support:
        return 0
    return triple_count(*_local_sets(part, event))


def conditional_mass(part: Part, event: ProductEvent) -> Fraction:
    """(P|pi)(E)."""
    if not part.meets_support:
        return Fraction(0)
    return Fraction(edge_count(part, event), part.space.size ** 2)


def split_part(part: Part, i: int, gamma: int):
    """
    The eight parts {x in pi : chi^3(x) = z}, z in {-1, 1}^3, for the
    character gamma of V read relative to each factor's shift. ``i`` names
    the player whose coefficient chose gamma.
    """
    if gamma <= 0 or gamma >> part.space.dim:
        raise InvalidSplitError(f"character {gamma} is not a nonzero character of a dim-{part.space.dim} space")
    if i not in (1, 2, 3):
        raise InvalidSplitError(f"player {i} is not one of 1, 2, 3")
    w = part.space.basis[pivot_of(gamma)]
    kernel = part.space.kernel(gamma)
    children = []
    for z in itertools.product((1, -1), repeat=3):
        shifts = tuple(a ^ w if zj == -1 else a for a, zj in zip(part.shifts, z))
        children.append(Part(shifts, kernel))
    return children


def potential(partition: AffinePartition, event: ProductEvent) -> Fraction:
    """Phi = sum_i E_{pi ~ Pi(P)}[mu_{pi_i}(E_i)^2]."""
    total = Fraction(0)
    for part in partition.parts:
        weight = part_weight(part)
        if not weight:
            continue
        total += weight * sum(coset_measure(event[i], part.coset(i)) ** 2 for i in range(3))
    return total


def _scan_part(part: Part, event: ProductEvent):
    """(max |coefficient|, player, gamma) over the three restricted indicators."""
    if part.space.dim == 0:
        return Fraction(0), None, None
    best = None
    for i in range(3):
        gamma, magnitude = max_nonzero_coeff(event[i], part.coset(i))
        if best is None or magnitude > best[0]:
            best = (magnitude, i + 1, gamma)
    return best


def _scan(partition: AffinePartition, event: ProductEvent, threads: int):
    if threads > 1 and len(partition.parts) > 1:
        with ThreadPool(threads) as pool:
            return pool.map(lambda part: _scan_part(part, event), partition.parts)
    return [_scan_part(part, event) for part in partition.parts]


def failure_probability(partition: AffinePartition, event: ProductEvent, delta, threads=None) -> Fraction:
    """Pr_{pi ~ Pi(P)}[some nonzero restricted coefficient exceeds delta]."""
    delta = as_fraction(delta)
    threads = resolve(threads, 'THREADS')
    scans = _scan(partition, event, threads)
    return sum(
        (part_weight(part) for part, scan in zip(partition.parts, scans) if scan[0] > delta),
        Fraction(0),
    )


def refine_step(partition: AffinePartition, event: ProductEvent, delta, split_all=True,
                part_cap=None, threads=None):
    """
    One refinement round. Returns (new partition, refined).

    When more than delta of Pi(P) fails the coefficient bound, every part is
    split by its own maximising (player, character); with ``split_all``
    off only the failing parts are split.
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise DomainError('delta must be positive')
    part_cap = resolve(part_cap, 'PART_CAP')
    threads = resolve(threads, 'THREADS')

    scans = _scan(partition, event, threads)
    failure = sum(
        (part_weight(part) for part, scan in zip(partition.parts, scans) if scan[0] > delta),
        Fraction(0),
    )
    before = potential(partition, event)
    record = {'failure': failure, 'potential_before': before, 'parts_before': len(partition.parts)}
    if failure <= delta:
        record.update(refined=False, potential_after=before, parts_after=len(partition.parts))
        return AffinePartition(partition.parts, partition.codim_bound, partition.history + [record]), False

    children = []
    for part, (magnitude, i, gamma) in zip(partition.parts, scans):
        if gamma is None or not (split_all or magnitude > delta):
            children.append(part)
            continue
        children.extend(split_part(part, i, gamma))
        if len(children) > part_cap:
            raise SizeLimitError('affine partition', len(children), part_cap)
    children.sort(key=Part.sort_key)

    refined = AffinePartition(children, max(p.codim for p in children))
    after = potential(refined, event)
    record.update(refined=True, potential_after=after, parts_after=len(children))
    if after - before < delta ** 3:
        logger.warning(
            f"Potential rose by {after - before}, below delta^3 = {delta ** 3} "
            f"(failure mass {failure})"
        )
    logger.info(
        f"Refined {len(partition.parts)} -> {len(children)} parts; failure mass {failure}, "
        f"potential {before} -> {after}"
    )
    refined.history = partition.history + [record]
    return refined, True


def step_bound(delta) -> int:
    """ceil(3 / delta^3), the potential-argument cap on refining steps."""
    return ceil_fraction(Fraction(3) / as_fraction(delta) ** 3)


def decompose(event: ProductEvent, delta, split_all=True, part_cap=None, threads=None) -> AffinePartition:
    """Refine the trivial partition until at most delta of Pi(P) fails."""
    delta = as_fraction(delta)
    if delta <= 0:
        raise DomainError('delta must be positive')
    partition = AffinePartition.trivial(event.n)
    bound = step_bound(delta)
    for _ in range(bound + 1):
        partition, refined = refine_step(partition, event, delta, split_all, part_cap, threads)
        if not refined:
            break
    else:
        logger.error(f"Refinement did not stop within {bound} steps")
    logger.info(
        f"Decomposition at delta={delta}: {partition.steps} step(s), "
        f"{len(partition.parts)} parts, codimension {partition.codim_bound}"
    )
    return partition


def sampling_weights(partition: AffinePartition, event: ProductEvent) -> list:
    """Integer weights proportional to Pi(P|E), i.e. |supp(P) n E n pi|."""
    return [edge_count(part, event) for part in partition.parts]


def sample_part(partition: AffinePartition, event: ProductEvent, rng) -> Part:
    """Draw pi with probability (P|pi)(E) P(pi) / P(E)."""
    weights = np.array(sampling_weights(partition, event), dtype=np.int64)
    total = int(weights.sum())
    if total == 0:
        raise EmptyEventError('P(E) = 0; no part can be drawn')
    ticket = int(rng.integers(total))
    return partition.parts[int(np.searchsorted(np.cumsum(weights), ticket, side='right'))]


def is_good(part: Part, event: ProductEvent, alpha, delta) -> bool:
    """(P|pi)(E) >= alpha/10 and every restricted nonzero coefficient <= delta."""
    if not part.meets_support:
        raise DomainError(f"{part!r} does not meet supp(P)")
    alpha, delta = as_fraction(alpha), as_fraction(delta)
    if conditional_mass(part, event) < alpha / 10:
        return False
    size = part.space.size
    return all(Fraction(max_nonzero_numerator(event[i], part.coset(i)), size) <= delta for i in range(3))


def good_fraction(partition: AffinePartition, event: ProductEvent, alpha, delta) -> Fraction:
    """Pr_{pi ~ Pi(P|E)}[pi is good]."""
    weights = sampling_weights(partition, event)
    total = sum(weights)
    if total == 0:
        raise EmptyEventError('P(E) = 0')
    good = sum(w for part, w in zip(partition.parts, weights) if w and is_good(part, event, alpha, delta))
    return Fraction(good, total)


def good_floor(alpha, delta) -> Fraction:
    """Union-bound floor 1 - 1/10 - delta/alpha."""
    return 1 - Fraction(1, 10) - as_fraction(delta) / as_fraction(alpha)


def parts_overlap(p: Part, q: Part) -> bool:
    """a + V^3 and b + W^3 meet iff a_i + b_i lies in V + W for every player."""
    joint = rref_basis(p.space.basis + q.space.basis, n=p.n)
    return all(joint.contains(a ^ b) for a, b in zip(p.shifts, q.shifts))


def overlapping_parts(partition: AffinePartition) -> list:
    """Index pairs (k, l), k < l, of parts that share a triple."""
    parts = partition.parts
    return [
        (k, l) for k, l in itertools.combinations(range(len(parts)), 2) if parts_overlap(parts[k], parts[l])
    ]


def cover_counts(partition: AffinePartition, triples) -> np.ndarray:
    """Number of parts containing each row (x, y, z) of ``triples``."""
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    counts = np.zeros(len(triples), dtype=np.int64)
    for part in partition.parts:
        residual = triples ^ np.array(part.shifts, dtype=np.int64)
        for row in part.space.basis:
            residual = np.where((residual >> pivot_of(row)) & 1, residual ^ row, residual)
        counts += (residual == 0).all(axis=1)
    return counts


def _cover_sample(partition: AffinePartition, samples: int, rng) -> np.ndarray:
    """Uniform triples of (F_2^n)^3 followed by uniform members of uniformly chosen parts."""
    n = partition.n
    ambient = rng.integers(1 << n, size=(samples, 3))
    members = []
    for k in rng.integers(len(partition.parts), size=samples).tolist():
        part = partition.parts[k]
        gammas = rng.integers(part.space.size, size=3).tolist()
        members.append([a ^ part.space.combination(g) for a, g in zip(part.shifts, gammas)])
    return np.vstack([ambient, np.array(members, dtype=np.int64).reshape(-1, 3)])


def certify(partition: AffinePartition, event: ProductEvent, delta, pairwise_limit=128, samples=256,
            rng=None) -> dict:
    """
    Independent check of a decomposition: coverage by volume, disjointness,
    codimension, and a full rescan of every part's spectra through the exact
    transform.

    Disjointness is exact over all pairs of parts up to ``pairwise_limit``
    parts; beyond that, seeded sample triples must each lie in one part.
    """
    delta = as_fraction(delta)
    n = partition.n
    result = {'passed': False, 'errors': [], 'warnings': []}
    volume = sum(part.space.size ** 3 for part in partition.parts)
    if volume != 8 ** n:
        result['errors'].append(f"parts cover {volume} triples, expected {8 ** n}")
    if len(set(partition.parts)) != len(partition.parts):
        result['errors'].append('repeated part')
    if len(partition.parts) <= pairwise_limit:
        overlaps = overlapping_parts(partition)
        if overlaps:
            k, l = overlaps[0]
            result['errors'].append(f"{len(overlaps)} overlapping pair(s) of parts, first {k} and {l}")
    else:
        rng = np.random.default_rng(resolve(None, 'SEED')) if rng is None else rng
        counts = cover_counts(partition, _cover_sample(partition, samples, rng))
        if (counts != 1).any():
            result['errors'].append(
                f"{int((counts > 1).sum())} sampled triple(s) in several parts, {int((counts == 0).sum())} in none"
            )
        result['warnings'].append(f"disjointness sampled over {len(counts)} triples")
    bound = step_bound(delta)
    if partition.codim_bound > bound:
        result['errors'].append(f"codimension {partition.codim_bound} exceeds {bound}")

    failure = Fraction(0)
    for part in partition.parts:
        weight = part_weight(part)
        if not weight or part.space.dim == 0:
            continue
        worst = Fraction(0)
        for i in range(3):
            coset = part.coset(i)
            spectrum = wht(DyadicTable.indicator(event[i], coset), coset, coset.shift)
            worst = max([worst] + [abs(value) for gamma, value in spectrum.items() if gamma])
        if worst > delta:
            failure += weight
    if failure > delta:
        result['errors'].append(f"failure mass {failure} exceeds delta {delta}")
    result['failure'] = failure
    result['passed'] = not result['errors']
    return result


def partition_to_json(partition: AffinePartition) -> list:
    return [
        {'shifts': [to_hex(a) for a in part.shifts], 'basis': [to_hex(b) for b in part.space.basis]}
        for part in sorted(partition.parts, key=Part.sort_key)
    ]


def partition_from_json(data: list, n: int) -> AffinePartition:
    parts = [
        Part([from_hex(a) for a in entry['shifts']], rref_basis([from_hex(b) for b in entry['basis']], n=n))
        for entry in data
    ]
    return AffinePartition(parts, max((p.codim for p in parts), default=0))


def history_to_json(partition: AffinePartition) -> list:
    return [
        {
            'refined': h['refined'],
            'failure': fraction_text(h['failure']),
            'potential_before': fraction_text(h['potential_before']),
            'potential_after': fraction_text(h['potential_after']),
            'parts_before': h['parts_before'],
            'parts_after': h['parts_after'],
        }
        for h in partition.history
    ]

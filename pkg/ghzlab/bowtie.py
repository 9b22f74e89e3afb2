# ghzlab/bowtie.py
"""
Edge graphs of a part, bow ties, and the exact checks built on them.

Everything inside a part a + V^3 (with a1 + a2 + a3 = 0) is held in local
coordinates: u stands for x = a1 + T[u], v for y = a2 + T[v] and w for
z = a3 + T[w], where T is the span table of V. Because T is linear,
x + y has local coordinate u ^ v. The three restricted events become 0/1
arrays A, B, C of length |V|.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from multiprocessing.pool import ThreadPool

import numpy as np

from .conf import resolve
from .decomposition import Part, is_good
from .exact import as_fraction, le_sqrt
from .exceptions import (
    DomainError, EmbeddingUndefinedError, EmptyBowTieSetError, ShiftError, SizeLimitError,
)
from .f2linear import hamming_weight, to_hex
from .fourier import coset_measure, max_nonzero_numerator, triple_count, xor_convolve
from .games import Strategy, coordinate_success, coordinate_value, ghz, ghz_conditioned, strategy_value

logger = logging.getLogger(__name__)


def _report(claim):
    return {'claim': claim, 'passed': False, 'values': {}, 'errors': [], 'warnings': []}


def _finish(report):
    report['passed'] = not report['errors']
    level = logging.DEBUG if report['passed'] else logging.WARNING
    logger.log(level, f"{report['claim']}: {'pass' if report['passed'] else 'FAIL'} {report['errors']}")
    return report


class EdgeGraph:
    """
    Bipartite graph on pi_1 x pi_2 whose edges are the inputs
    (x, y, x + y) of supp(P) n E n pi.
    """

    def __init__(self, part: Part, event, edge_cap=None):
        if not part.meets_support:
            raise ShiftError(f"{part!r} does not meet supp(P); no shift with a1 + a2 + a3 = 0")
        edge_cap = resolve(edge_cap, 'EDGE_CAP')
        if part.space.size ** 2 > edge_cap:
            raise SizeLimitError(
                'edge grid', part.space.size ** 2, edge_cap, hint='refine further or raise GHZLAB_EDGE_CAP',
            )
        self.part = part
        self.event = event
        self.n = part.n
        self.shifts = part.shifts
        self.table = part.space.span_table()
        self.size = part.space.size
        self.index = np.arange(self.size, dtype=np.int64)
        self.A, self.B, self.C = (
            np.asarray(event[i], dtype=bool)[self.shifts[i] ^ self.table].astype(np.int64) for i in range(3)
        )
        self.edge_mask = (
            (self.A[:, None] & self.B[None, :] & self.C[self.index[:, None] ^ self.index[None, :]]) == 1
        )
        self._ordered = None

    def __repr__(self):
        return f"EdgeGraph({self.part!r}, {self.edge_count} edges)"

    @property
    def edge_count(self) -> int:
        return int(self.edge_mask.sum())

    @property
    def third_count(self) -> int:
        """|E3 n pi3|."""
        return int(self.C.sum())

    def local(self, i: int, word: int) -> int:
        return self.part.space.coordinates(int(word) ^ self.shifts[i])

    def ambient(self, i: int, local: int) -> int:
        return self.shifts[i] ^ int(self.table[local])

    def in_part(self, i: int, word: int) -> bool:
        return self.part.space.contains(int(word) ^ self.shifts[i])

    def edges(self) -> list:
        """All edges (x, y) in ambient words, sorted."""
        us, vs = np.nonzero(self.edge_mask)
        return sorted((self.ambient(0, u), self.ambient(1, v)) for u, v in zip(us, vs))

    def is_edge(self, x: int, y: int) -> bool:
        if not (self.in_part(0, x) and self.in_part(1, y)):
            return False
        return bool(self.edge_mask[self.local(0, x), self.local(1, y)])

    def matching(self, z: int) -> list:
        """M_z, the edges (x, y) with x + y = z."""
        if not self.in_part(2, z):
            raise DomainError(f"{to_hex(z)} is not in pi_3")
        w = self.local(2, z)
        if not self.C[w]:
            return []
        us = np.nonzero(self.A & self.B[self.index ^ w])[0]
        return [(self.ambient(0, u), self.ambient(1, u ^ w)) for u in us]

    def ordered_counts(self) -> np.ndarray:
        """
        Per local difference d, #{(u, v) : the four corners u, u^d x v, v^d
        are edges}. Every bow tie is counted four times, once per labelling.
        """
        if self._ordered is None:
            counts = np.zeros(self.size, dtype=np.int64)
            for d in range(1, self.size):
                a_d, b_d, c_d = self.difference_sets(d)
                counts[d] = triple_count(a_d, b_d, c_d)
            self._ordered = counts
        return self._ordered

    def difference_sets(self, d: int):
        shifted = self.index ^ d
        return self.A & self.A[shifted], self.B & self.B[shifted], self.C & self.C[shifted]


def build_graph(event, part: Part, edge_cap=None) -> EdgeGraph:
    graph = EdgeGraph(part, event, edge_cap)
    logger.debug(f"Built {graph!r}")
    return graph


def _ones_grid(graph: EdgeGraph, w: int) -> np.ndarray:
    idx = graph.index
    return (
        graph.edge_mask
        & (graph.B[idx ^ w] == 1)[:, None]
        & (graph.A[idx ^ w] == 1)[None, :]
        & ((idx[:, None] ^ idx[None, :]) != w)
    )


def ones_vector(graph: EdgeGraph, z: int) -> np.ndarray:
    """1_z over the local (u, v) grid: edges matched in M_z but not to each other."""
    if not graph.in_part(2, z) or not graph.C[graph.local(2, z)]:
        raise DomainError(f"{to_hex(z)} is not in E3 n pi3")
    return _ones_grid(graph, graph.local(2, z))


@dataclass(frozen=True, eq=False)
class BowTieVector:
    """v = numerators / denominator over the local edge grid, denominator = |E3 n pi3|."""
    graph: EdgeGraph
    numerators: np.ndarray
    denominator: int

    def __getitem__(self, edge) -> Fraction:
        x, y = edge
        if not self.graph.is_edge(x, y):
            raise DomainError(f"({to_hex(x)}, {to_hex(y)}) is not an edge")
        return Fraction(int(self.numerators[self.graph.local(0, x), self.graph.local(1, y)]), self.denominator)

    @property
    def l1(self) -> Fraction:
        return Fraction(int(self.numerators.sum()), self.denominator)

    @property
    def l2_squared(self) -> Fraction:
        values = self.numerators[self.graph.edge_mask]
        return Fraction(int(np.dot(values, values)), self.denominator ** 2)

    def perturbed(self) -> 'BowTieVector':
        """Copy with the first edge's entry raised by 1/denominator."""
        numerators = self.numerators.copy()
        us, vs = np.nonzero(self.graph.edge_mask)
        if len(us):
            numerators[us[0], vs[0]] += 1
        return BowTieVector(self.graph, numerators, self.denominator)


def bowtie_vector(graph: EdgeGraph, threads=None) -> BowTieVector:
    """
    v = E_{z ~ E3 n pi3}[1_z], one diagonal u ^ v = d at a time.

    Along the diagonal, sum_w C[w] B[u ^ w] A[u ^ d ^ w] is the XOR
    convolution of C with B * A[. ^ d]; on an edge the w = u ^ v term is
    the edge matched to itself and is dropped.
    """
    third = graph.third_count
    if not third:
        raise DomainError('E3 n pi3 is empty')
    threads = resolve(threads, 'THREADS')
    idx = graph.index

    def diagonals(chunk):
        rows = []
        for d in chunk:
            through = xor_convolve(graph.C, graph.B * graph.A[idx ^ d])
            on_edge = graph.edge_mask[idx, idx ^ d]
            rows.append((d, np.where(on_edge, through - 1, 0)))
        return rows

    ds = list(range(graph.size))
    if threads > 1 and len(ds) > 1:
        with ThreadPool(threads) as pool:
            results = pool.map(diagonals, [ds[k::threads] for k in range(threads)])
    else:
        results = [diagonals(ds)]
    numerators = np.zeros((graph.size, graph.size), dtype=np.int64)
    for rows in results:
        for d, row in rows:
            numerators[idx, idx ^ d] = row
    return BowTieVector(graph, numerators, third)


@dataclass(frozen=True)
class BowTie:
    """{x0, x1} x {y0, y1} with x0 + y0 = x1 + y1, stored with x0 < x1 and y0 < y1."""
    x0: int
    x1: int
    y0: int
    y1: int

    def __post_init__(self):
        d = self.x0 ^ self.x1
        if not d or d != self.y0 ^ self.y1:
            raise DomainError(
                f"corners {to_hex(self.x0)}, {to_hex(self.x1)}, {to_hex(self.y0)}, {to_hex(self.y1)} "
                'do not form a bow tie: need x0 + x1 = y0 + y1 != 0'
            )

    @classmethod
    def canonical(cls, x0, x1, y0, y1) -> 'BowTie':
        return cls(min(x0, x1), max(x0, x1), min(y0, y1), max(y0, y1))

    @property
    def z0(self) -> int:
        return self.x0 ^ self.y0

    @property
    def z1(self) -> int:
        return self.x0 ^ self.y1

    @property
    def difference(self) -> int:
        return self.x0 ^ self.x1

    def differing(self) -> tuple:
        """1-based coordinates where the bow tie differs."""
        d = self.difference
        return tuple(i + 1 for i in range(d.bit_length()) if (d >> i) & 1)

    def edges(self) -> tuple:
        return ((self.x0, self.y0), (self.x0, self.y1), (self.x1, self.y0), (self.x1, self.y1))

    def queries(self) -> tuple:
        return tuple((x, y, x ^ y) for x, y in self.edges())

    def contains(self, x: int, y: int) -> bool:
        return x in (self.x0, self.x1) and y in (self.y0, self.y1)

    def to_json(self) -> dict:
        return {'x': [to_hex(self.x0), to_hex(self.x1)], 'y': [to_hex(self.y0), to_hex(self.y1)]}


def count_containing(graph: EdgeGraph, x: int, y: int) -> int:
    """Bow ties through (x, y): sum over z' != x + y in E3 of E1(y + z') E2(x + z')."""
    if not graph.is_edge(x, y):
        return 0
    u, v = graph.local(0, x), graph.local(1, y)
    idx = graph.index
    hits = graph.C & graph.A[v ^ idx] & graph.B[u ^ idx]
    # the z' = x + y term is the edge itself
    return int(hits.sum()) - 1


def bowtie_count(graph: EdgeGraph) -> int:
    return int(graph.ordered_counts().sum()) // 4


def _difference_hits(graph: EdgeGraph, d: int):
    """Local corners (u, v) of the canonical bow ties with difference d."""
    a_d, b_d, c_d = graph.difference_sets(d)
    table, idx = graph.table, graph.index
    shifts = graph.shifts
    # x0 < x1 and y0 < y1 in ambient words
    us = idx[(a_d == 1) & ((shifts[0] ^ table) < (shifts[0] ^ table[idx ^ d]))]
    vs = idx[(b_d == 1) & ((shifts[1] ^ table) < (shifts[1] ^ table[idx ^ d]))]
    if not len(us) or not len(vs):
        return us[:0], vs[:0]
    rows, cols = np.nonzero(c_d[us[:, None] ^ vs[None, :]] == 1)
    return us[rows], vs[cols]


def _bowties_with_difference(graph: EdgeGraph, d: int) -> list:
    us, vs = _difference_hits(graph, d)
    return [
        BowTie(graph.ambient(0, u), graph.ambient(0, u ^ d), graph.ambient(1, v), graph.ambient(1, v ^ d))
        for u, v in zip(us.tolist(), vs.tolist())
    ]


def bowtie_incidences(graph: EdgeGraph, bowtie_cap=None):
    """
    (sum_b 1_b over the local edge grid, bow ties per local difference),
    both read off the canonical corners of each difference class.
    """
    bowtie_cap = resolve(bowtie_cap, 'BOWTIE_CAP')
    total = bowtie_count(graph)
    if total > bowtie_cap:
        raise SizeLimitError('bow-tie incidences', total, bowtie_cap, hint='use sample_bowtie instead')
    incidences = np.zeros((graph.size, graph.size), dtype=np.int64)
    per_difference = np.zeros(graph.size, dtype=np.int64)
    for d in np.nonzero(graph.ordered_counts())[0].tolist():
        us, vs = _difference_hits(graph, d)
        per_difference[d] = len(us)
        for rows, cols in ((us, vs), (us, vs ^ d), (us ^ d, vs), (us ^ d, vs ^ d)):
            np.add.at(incidences, (rows, cols), 1)
    return incidences, per_difference


def enumerate_bowties(graph: EdgeGraph, bowtie_cap=None, threads=None) -> list:
    """Every bow tie of the graph once, in canonical form, sorted."""
    bowtie_cap = resolve(bowtie_cap, 'BOWTIE_CAP')
    threads = resolve(threads, 'THREADS')
    total = bowtie_count(graph)
    if total > bowtie_cap:
        raise SizeLimitError('bow-tie enumeration', total, bowtie_cap, hint='use sample_bowtie instead')
    differences = [d for d in range(1, graph.size) if graph.ordered_counts()[d]]
    if threads > 1 and len(differences) > 1:
        with ThreadPool(threads) as pool:
            groups = pool.map(lambda d: _bowties_with_difference(graph, d), differences)
    else:
        groups = [_bowties_with_difference(graph, d) for d in differences]
    bowties = sorted((b for group in groups for b in group), key=lambda b: (b.x0, b.x1, b.y0, b.y1))
    logger.debug(f"Enumerated {len(bowties)} bow ties")
    return bowties


def _pick(weights: np.ndarray, rng) -> int:
    cumulative = np.cumsum(weights)
    ticket = int(rng.integers(int(cumulative[-1])))
    return int(np.searchsorted(cumulative, ticket, side='right'))


def sample_bowtie(graph: EdgeGraph, rng) -> BowTie:
    """
    Uniform bow tie: difference class by exact count, then x0 weighted by
    its number of completions, then y0 uniformly among them.
    """
    counts = graph.ordered_counts()
    if not counts.sum():
        raise EmptyBowTieSetError('the graph has no bow ties')
    d = _pick(counts, rng)
    a_d, b_d, c_d = graph.difference_sets(d)
    u = _pick(a_d * xor_convolve(b_d, c_d), rng)
    candidates = np.nonzero((b_d == 1) & (c_d[u ^ graph.index] == 1))[0]
    v = int(candidates[int(rng.integers(len(candidates)))])
    return BowTie.canonical(
        graph.ambient(0, u), graph.ambient(0, u ^ d), graph.ambient(1, v), graph.ambient(1, v ^ d),
    )


def differing_fraction(bowties, n: int) -> Fraction:
    """E_{b ~ B}[hwt(d_b)] / n over an explicit list."""
    bowties = list(bowties)
    if not bowties:
        raise EmptyBowTieSetError('no bow ties')
    return Fraction(sum(hamming_weight(b.difference) for b in bowties), len(bowties) * n)


def differing_stats(graph: EdgeGraph, rng=None, samples=None) -> dict:
    """
    Pr_{i ~ [n], b ~ B}[b differs in coordinate i].

    Exact from the per-difference counts unless ``samples`` is given, in
    which case a seeded Monte Carlo estimate with its standard error.
    """
    counts = graph.ordered_counts()
    total = int(counts.sum())
    if not total:
        raise EmptyBowTieSetError('the graph has no bow ties')
    if not samples:
        weighted = sum(int(counts[d]) * hamming_weight(int(graph.table[d])) for d in range(1, graph.size))
        return {'exact': True, 'value': Fraction(weighted, total * graph.n)}
    if rng is None:
        rng = np.random.default_rng(resolve(None, 'SEED'))
    draws = np.array(
        [hamming_weight(sample_bowtie(graph, rng).difference) / graph.n for _ in range(samples)]
    )
    stderr = float(draws.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float('inf')
    return {'exact': False, 'value': float(draws.mean()), 'stderr': stderr, 'samples': samples}


def weight_function(graph: EdgeGraph) -> dict:
    """wt(z) = E_{x ~ pi1}[E1(x) E2(x + z)] for every z in pi3."""
    convolved = xor_convolve(graph.A, graph.B)
    return {graph.ambient(2, w): Fraction(int(convolved[w]), graph.size) for w in range(graph.size)}


def check_weight_function(graph: EdgeGraph) -> dict:
    """wt(z) = mu(L_z) = mu(R_z) and |M_z| = |V| wt(z) for every z."""
    report = _report('weights')
    weights = weight_function(graph)
    idx = graph.index
    for w in range(graph.size):
        z = graph.ambient(2, w)
        left = Fraction(int((graph.A & graph.B[idx ^ w]).sum()), graph.size)
        right = Fraction(int((graph.B & graph.A[idx ^ w]).sum()), graph.size)
        if not weights[z] == left == right:
            report['errors'].append(f"wt({to_hex(z)}) = {weights[z]}, mu(L) = {left}, mu(R) = {right}")
        if graph.C[w] and len(graph.matching(z)) != graph.size * weights[z]:
            report['errors'].append(f"|M_{to_hex(z)}| differs from |V| wt")
    return _finish(report)


def instance_delta(graph: EdgeGraph) -> Fraction:
    """Largest nonzero restricted coefficient over E1, E2, E3 on the part."""
    part = graph.part
    return max(
        Fraction(max_nonzero_numerator(graph.event[i], part.coset(i)), graph.size) for i in range(3)
    )


def _measures(graph: EdgeGraph):
    return tuple(coset_measure(graph.event[i], graph.part.coset(i)) for i in range(3))


def lemma41_sides(A, B, C, part: Part) -> dict:
    """Both left-hand expectations, the product terms and the two slacks."""
    if not part.meets_support:
        raise ShiftError(f"{part!r} has no shift with a1 + a2 + a3 = 0")
    table = part.space.span_table()
    size = part.space.size
    local = [np.asarray(s, dtype=bool)[a ^ table].astype(np.int64) for s, a in zip((A, B, C), part.shifts)]
    convolved = xor_convolve(local[0], local[1])
    lhs1 = Fraction(int(np.dot(local[2], convolved)), size ** 2)
    lhs2 = Fraction(sum(int(c) * int(k) ** 2 for c, k in zip(local[2], convolved)), size ** 3)
    mu_a, mu_b, mu_c = (Fraction(int(s.sum()), size) for s in local)
    delta1 = Fraction(max_nonzero_numerator(C, part.coset(2)), size)
    delta2 = Fraction(max_nonzero_numerator(B, part.coset(1)), size)
    return {
        'lhs1': lhs1, 'rhs1': mu_a * mu_b * mu_c,
        'lhs2': lhs2, 'rhs2': mu_a ** 2 * mu_b ** 2 * mu_c,
        'delta1': delta1, 'delta2': delta2,
    }


def check_lemma41(A, B, C, part: Part) -> dict:
    report = _report('lemma41')
    values = lemma41_sides(A, B, C, part)
    report['values'] = values
    if abs(values['lhs1'] - values['rhs1']) > values['delta1']:
        report['errors'].append('triangle density deviates by more than delta1')
    if abs(values['lhs2'] - values['rhs2']) > values['delta2'] ** 2 + values['delta1']:
        report['errors'].append('squared weight moment deviates by more than delta2^2 + delta1')
    return _finish(report)


def check_edge_count(graph: EdgeGraph, delta=None) -> dict:
    """| |E(G)| - |V|^2 mu1 mu2 mu3 | <= |V|^2 delta."""
    report = _report('edge_count')
    delta = instance_delta(graph) if delta is None else as_fraction(delta)
    mu1, mu2, mu3 = _measures(graph)
    square = graph.size ** 2
    edges = graph.edge_count
    if edges != triple_count(graph.A, graph.B, graph.C):
        report['errors'].append('edge mask and convolution count disagree')
    report['values'] = {'edges': Fraction(edges), 'expected': square * mu1 * mu2 * mu3, 'delta': delta}
    if abs(edges - square * mu1 * mu2 * mu3) > square * delta:
        report['errors'].append(f"edge count {edges} outside the delta window")
    return _finish(report)


def check_weight_moment(graph: EdgeGraph, delta=None) -> dict:
    """First and second moments of wt over E3 n pi3 within 2 delta / mu3."""
    report = _report('weight_moments')
    delta = instance_delta(graph) if delta is None else as_fraction(delta)
    mu1, mu2, mu3 = _measures(graph)
    if not mu3:
        report['errors'].append('E3 n pi3 is empty')
        return _finish(report)
    convolved = xor_convolve(graph.A, graph.B)
    chosen = [int(k) for k, c in zip(convolved, graph.C) if c]
    first = Fraction(sum(chosen), len(chosen) * graph.size)
    second = Fraction(sum(k * k for k in chosen), len(chosen) * graph.size ** 2)
    slack = 2 * delta / mu3
    report['values'] = {'first': first, 'second': second, 'slack': slack}
    if abs(first - mu1 * mu2) > slack:
        report['errors'].append('mean weight outside 2 delta / mu3 of mu1 mu2')
    if abs(second - mu1 ** 2 * mu2 ** 2) > slack:
        report['errors'].append('mean squared weight outside 2 delta / mu3 of mu1^2 mu2^2')
    return _finish(report)


def check_norm_bounds(graph: EdgeGraph, vector: BowTieVector = None, delta=None, require_good=False,
                      alpha=None) -> dict:
    """Lower bound on ||v||_1 and upper bound on ||v||_2^2 at the instance delta."""
    report = _report('norms')
    if require_good:
        if not is_good(graph.part, graph.event, alpha, delta if delta is not None else instance_delta(graph)):
            report['errors'].append('part is not good')
            return _finish(report)
    mu1, mu2, mu3 = _measures(graph)
    if not mu3:
        report['errors'].append('alpha_zero: E3 misses pi3, the norm bounds are undefined')
        return _finish(report)
    vector = bowtie_vector(graph) if vector is None else vector
    delta = instance_delta(graph) if delta is None else as_fraction(delta)
    size = graph.size
    l1, l2sq = vector.l1, vector.l2_squared
    lower = size ** 2 * (mu1 ** 2 * mu2 ** 2 * mu3 - 3 * delta) - size * (mu1 * mu2 + 2 * delta / mu3)
    upper_base = size ** 2 * mu1 ** 3 * mu2 ** 3 * mu3
    report['values'] = {'l1': l1, 'l2sq': l2sq, 'l1_lower': lower, 'l2sq_upper_base': upper_base, 'delta': delta}
    report['checks'] = {
        'c54': l1 >= lower,
        # l2sq <= |V|^2 (mu1^3 mu2^3 mu3 + 10 sqrt(delta))
        'c55': le_sqrt((l2sq - upper_base) / (10 * size ** 2), delta),
    }
    if not report['checks']['c54']:
        report['errors'].append(f"||v||_1 = {l1} below {lower}")
    if not report['checks']['c55']:
        report['errors'].append(f"||v||_2^2 = {l2sq} above the sqrt(delta) bound")
    return _finish(report)


def uniformity_check(weights) -> dict:
    """
    Closeness of w / ||w||_1 to uniform over m = len(weights) entries.

    With ||w~||_2 = (1 + beta) / sqrt(m), s = (1 + beta)^2 is rational. The
    bound ||w~ - u||_1 <= sqrt(3 beta) is tested as (T^2 / 3 + 1)^2 <= s,
    meaningful when s <= 4.
    """
    report = _report('fact56')
    if isinstance(weights, np.ndarray) and np.issubdtype(weights.dtype, np.integer):
        ints = weights.tolist()
    else:
        weights = [as_fraction(w) for w in weights]
        # integer numerators over a common denominator
        scale = lcm(*(w.denominator for w in weights)) if weights else 1
        ints = [int(w * scale) for w in weights]
    m = len(ints)
    if m == 0 or any(k < 0 for k in ints) or not any(ints):
        raise DomainError('need a nonnegative vector with positive mass')
    total = sum(ints)
    s = Fraction(m * sum(k * k for k in ints), total * total)
    tv_l1 = Fraction(sum(abs(m * k - total) for k in ints), m * total)
    l2_gap = Fraction(sum((m * k - total) ** 2 for k in ints), (m * total) ** 2)
    applicable = s <= 4
    report['values'] = {
        'm': Fraction(m), 'one_plus_beta_squared': s, 'l1_distance': tv_l1, 'l2_distance_squared': l2_gap,
    }
    report['beta'] = float(np.sqrt(float(s))) - 1.0
    report['applicable'] = applicable
    if l2_gap != (s - 1) / m:
        report['errors'].append('||w~ - u||_2^2 differs from (2 beta + beta^2) / m')
    if tv_l1 ** 2 > m * l2_gap:
        report['errors'].append('Cauchy-Schwarz between l1 and l2 distances fails')
    if not applicable:
        report['warnings'].append('beta > 1; the uniformity bound does not apply')
    elif (tv_l1 ** 2 / 3 + 1) ** 2 > s:
        report['errors'].append('||w~ - u||_1 exceeds sqrt(3 beta)')
    return _finish(report)


def tv_to_uniform(graph: EdgeGraph, vector: BowTieVector = None) -> dict:
    """Uniformity of the bow-tie edge marginal over E(G)."""
    vector = bowtie_vector(graph) if vector is None else vector
    if vector.l1 <= 0:
        raise DomainError('||v||_1 = 0; the graph has no bow ties')
    report = uniformity_check(vector.numerators[graph.edge_mask])
    report['values']['tv'] = report['values']['l1_distance'] / 2
    return report


def check_claim53(graph: EdgeGraph, vector: BowTieVector = None, bowties=None, bowtie_cap=None) -> dict:
    """|E3 n pi3| v equals the sum of bow-tie indicators, entry by entry."""
    report = _report('c53')
    vector = bowtie_vector(graph) if vector is None else vector
    if bowties is None:
        incidences, per_difference = bowtie_incidences(graph, bowtie_cap)
        total = int(per_difference.sum())
    else:
        incidences = np.zeros((graph.size, graph.size), dtype=np.int64)
        for b in bowties:
            for x, y in b.edges():
                incidences[graph.local(0, x), graph.local(1, y)] += 1
        total = len(bowties)
    mismatched = int((vector.numerators * graph.third_count != incidences * vector.denominator).sum())
    report['values'] = {'bowties': Fraction(total), 'mismatched_entries': Fraction(mismatched)}
    if bowties is None and total:
        weights = np.array([hamming_weight(int(t)) for t in graph.table], dtype=np.int64)
        report['values']['hard_fraction'] = Fraction(int(np.dot(per_difference, weights)), total * graph.n)
    if mismatched:
        report['errors'].append(f"{mismatched} edge(s) where |E3 n pi3| v differs from the bow-tie sum")
    if incidences.sum() != 4 * total:
        report['errors'].append('incidences differ from 4 |B|')
    return _finish(report)


def check_uniform_is_conditional(graph: EdgeGraph) -> dict:
    """Uniform edges pushed through (x, y) -> (x, y, x + y) give P | E, pi."""
    report = _report('uniform_conditional')
    width = np.int64(1 << graph.n)
    us, vs = np.nonzero(graph.edge_mask)
    xs = graph.shifts[0] ^ graph.table[us]
    ys = graph.shifts[1] ^ graph.table[vs]
    pushed = np.sort(xs * width + (xs ^ ys))
    # direct scan over pi_1 x pi_3 against the ambient event
    first = graph.shifts[0] ^ graph.table
    third = graph.shifts[2] ^ graph.table
    second = first[:, None] ^ third[None, :]
    e1, e2, e3 = (np.asarray(graph.event[i], dtype=bool) for i in range(3))
    hits = e1[first][:, None] & e2[second] & e3[third][None, :]
    rows, cols = np.nonzero(hits)
    direct = np.sort(first[rows] * width + third[cols])
    if not np.array_equal(pushed, direct):
        report['errors'].append('edge set differs from supp(P) n E n pi')
    report['values'] = {'edges': Fraction(len(pushed)), 'support': Fraction(len(direct))}
    return _finish(report)


def bowtie_game(b: BowTie, n: int):
    """GHZ^n under the uniform distribution on the bow tie's four edges."""
    return ghz_conditioned(n, b.queries())


def embed_strategies(b: BowTie, i: int, fbar: Strategy) -> Strategy:
    """
    Single-shot GHZ strategy induced at differing coordinate i (1-based):
    f_j(q) = bit i of fbar_j(phi_j(q)).
    """
    bit = i - 1
    if not (b.difference >> bit) & 1:
        raise EmbeddingUndefinedError(f"bow tie does not differ at coordinate {i}")
    x0, x1, y0, y1 = b.x0, b.x1, b.y0, b.y1
    if (x0 >> bit) & 1:
        x0, x1 = x1, x0
    if (y0 >> bit) & 1:
        y0, y1 = y1, y0
    phi = ((x0, x1), (y0, y1), (x0 ^ y0, x0 ^ y1))
    tables = tuple(
        {q: (fbar.answer(p, phi[p][q]) >> bit) & 1 for q in (0, 1)} for p in range(3)
    )
    return Strategy(tables)


def embedding_values(b: BowTie, i: int, fbar: Strategy, n: int):
    """(value of the induced GHZ strategy, coordinate-i success of fbar on the bow tie)."""
    induced = embed_strategies(b, i, fbar)
    return strategy_value(ghz(), induced), coordinate_success(bowtie_game(b, n), fbar, i)


def check_claim52(b: BowTie, n: int, threads=None) -> dict:
    """val^(i) on the bow tie is 3/4 where it differs and 1 elsewhere."""
    report = _report('c52')
    game = bowtie_game(b, n)
    differing = set(b.differing())
    for j in range(1, n + 1):
        value, _ = coordinate_value(game, j, threads=threads)
        expected = Fraction(3, 4) if j in differing else Fraction(1)
        report['values'][f"coord_{j}"] = value
        if value != expected:
            report['errors'].append(f"coordinate {j}: value {value}, expected {expected}")
    return _finish(report)


def proof_delta(alpha, n: int) -> float:
    """alpha^20 / n^(1/40), the asymptotic schedule; informational only."""
    return float(as_fraction(alpha)) ** 20 / n ** (1 / 40)

import itertools
from collections import Counter
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from ghzlab import bowtie as bt
from ghzlab.decomposition import Part
from ghzlab.exceptions import (
    DomainError, EmbeddingUndefinedError, EmptyBowTieSetError, ShiftError, SizeLimitError,
)
from ghzlab.f2linear import Subspace, rref_basis
from ghzlab.games import ProductEvent, Strategy, coordinate_success, strategy_value, ghz

THREE_QUARTERS = Fraction(3, 4)

# --- Helper Functions ---

def whole(n):
    return Part((0, 0, 0), Subspace.full(n))


def full_graph(n=2):
    """All three sets full on the whole space: the complete bipartite graph."""
    return bt.build_graph(ProductEvent.full(n), whole(n))


def random_graph(seed, n=3, density=0.7):
    """A random event on a random part of F_2^n meeting supp(P)."""
    rng = np.random.default_rng(seed)
    space = rref_basis([int(v) for v in rng.integers(1 << n, size=n)], n=n)
    a1, a2 = (int(a) for a in rng.integers(1 << n, size=2))
    event = ProductEvent(n, [rng.random(1 << n) < density for _ in range(3)])
    return bt.build_graph(event, Part((a1, a2, a1 ^ a2), space))


def dense_graph(seed, n, density=0.8):
    """A random dense event on the whole space; has bow ties for any seed in practice."""
    rng = np.random.default_rng(seed)
    return bt.build_graph(ProductEvent(n, [rng.random(1 << n) < density for _ in range(3)]), whole(n))


def incidence_counts(bowties):
    counts = Counter()
    for b in bowties:
        counts.update(b.edges())
    return counts


def zero_strategy(b):
    return Strategy(tuple({q: 0 for q in corners} for corners in ((b.x0, b.x1), (b.y0, b.y1), (b.z0, b.z1))))


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


class EdgeGraphTest(SimpleTestCase):
    def test_complete_graph(self):
        """n = 2 with every set full gives the complete 4 x 4 graph."""
        graph = full_graph()
        self.assertEqual(graph.edge_count, 16)
        self.assertEqual(len(graph.edges()), 16)

    def test_empty_third_set(self):
        event = ProductEvent.from_members(2, [[0, 1, 2, 3], [0, 1, 2, 3], []])
        self.assertEqual(bt.build_graph(event, whole(2)).edge_count, 0)

    def test_part_off_support(self):
        with self.assertRaises(ShiftError):
            bt.build_graph(ProductEvent.full(2), Part((1, 0, 0), Subspace.zero(2)))

    def test_edge_grid_cap(self):
        """A part whose |V| x |V| grid exceeds the cap is refused before allocation."""
        with self.assertRaises(SizeLimitError) as raised:
            bt.build_graph(ProductEvent.full(2), whole(2), edge_cap=15)
        self.assertEqual((raised.exception.count, raised.exception.cap), (16, 15))
        self.assertEqual(bt.build_graph(ProductEvent.full(2), whole(2), edge_cap=16).edge_count, 16)

    def test_matchings(self):
        """M_z pairs x with x + z and has |V| wt(z) edges."""
        graph = full_graph()
        for z in range(4):
            matching = graph.matching(z)
            self.assertEqual(len(matching), 4)
            self.assertTrue(all(x ^ y == z for x, y in matching))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_edges_are_the_conditioned_support(self, seed):
        """Uniform edges pushed through (x, y) -> (x, y, x + y) give P | E, pi."""
        graph = random_graph(seed)
        self.assertTrue(bt.check_uniform_is_conditional(graph)['passed'])
        self.assertTrue(bt.check_edge_count(graph)['passed'])

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_weight_function(self, seed):
        """wt(z) = mu(L_z) = mu(R_z) and |M_z| = |V| wt(z)."""
        self.assertTrue(bt.check_weight_function(random_graph(seed))['passed'])


class OnesVectorTest(SimpleTestCase):
    def test_complete_graph(self):
        """Every pair except the four matched by M_z."""
        graph = full_graph()
        self.assertEqual(int(bt.ones_vector(graph, 0b10).sum()), 12)

    def test_single_matching(self):
        """With E3 n pi3 = {z} every edge of L_z x R_z is in M_z."""
        event = ProductEvent.from_members(2, [[0, 1, 2, 3], [0, 1, 2, 3], [0]])
        graph = bt.build_graph(event, whole(2))
        self.assertEqual(int(bt.ones_vector(graph, 0).sum()), 0)
        self.assertEqual(bt.bowtie_vector(graph).l1, 0)

    def test_z_outside_third_set(self):
        event = ProductEvent.from_members(2, [[0, 1, 2, 3], [0, 1, 2, 3], [0]])
        graph = bt.build_graph(event, whole(2))
        with self.assertRaises(DomainError):
            bt.ones_vector(graph, 1)

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_ones_mark_bowtie_second_differences(self, seed):
        """1_z(e) = 1 iff some bow tie through e has z as the other difference point."""
        graph = random_graph(seed)
        bowties = bt.enumerate_bowties(graph)
        for w in np.nonzero(graph.C)[0]:
            z = graph.ambient(2, int(w))
            grid = bt.ones_vector(graph, z)
            for x, y in graph.edges():
                witnessed = any(b.contains(x, y) and z in (b.z0, b.z1) and z != x ^ y for b in bowties)
                self.assertEqual(bool(grid[graph.local(0, x), graph.local(1, y)]), witnessed)


class BowTieVectorTest(SimpleTestCase):
    def test_complete_graph(self):
        """v = 3/4 on every edge, ||v||_1 = 12 and ||v||_2^2 = 9."""
        graph = full_graph()
        vector = bt.bowtie_vector(graph)
        self.assertTrue(all(vector[edge] == THREE_QUARTERS for edge in graph.edges()))
        self.assertEqual(vector.l1, 12)
        self.assertEqual(vector.l2_squared, 9)

    def test_empty_third_set(self):
        event = ProductEvent.from_members(2, [[0, 1, 2, 3], [0, 1, 2, 3], []])
        with self.assertRaises(DomainError):
            bt.bowtie_vector(bt.build_graph(event, whole(2)))

    def test_threads_do_not_change_the_vector(self):
        graph = dense_graph(11, 4)
        single = bt.bowtie_vector(graph, threads=1)
        pooled = bt.bowtie_vector(graph, threads=3)
        self.assertTrue(np.array_equal(single.numerators, pooled.numerators))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_vector_is_the_sum_of_ones(self, seed):
        """|E3 n pi3| v = sum_z 1_z over z in E3 n pi3."""
        graph = random_graph(seed, n=4)
        if not graph.third_count:
            return
        expected = np.zeros((graph.size, graph.size), dtype=np.int64)
        for w in np.nonzero(graph.C)[0]:
            expected += bt.ones_vector(graph, graph.ambient(2, int(w)))
        vector = bt.bowtie_vector(graph)
        self.assertEqual(vector.denominator, graph.third_count)
        self.assertTrue(np.array_equal(vector.numerators, expected))

    def test_non_edge_lookup(self):
        event = ProductEvent.from_members(2, [[0, 1], [0, 1, 2, 3], [0, 1, 2, 3]])
        vector = bt.bowtie_vector(bt.build_graph(event, whole(2)))
        with self.assertRaises(DomainError):
            vector[(2, 0)]


class EnumerationTest(SimpleTestCase):
    def test_complete_graph(self):
        """Three differences, two x-pairs and two y-pairs: 12 bow ties."""
        graph = full_graph()
        bowties = bt.enumerate_bowties(graph)
        self.assertEqual(len(bowties), 12)
        self.assertEqual(bt.bowtie_count(graph), 12)
        self.assertEqual(len(set(bowties)), 12)
        for b in bowties:
            self.assertLess(b.x0, b.x1)
            self.assertLess(b.y0, b.y1)
            self.assertEqual(b.x0 ^ b.y0, b.x1 ^ b.y1)

    def test_l1_counts_bowties(self):
        """||v||_1 mu(E3) |V| = 4 |B|."""
        graph = full_graph()
        vector = bt.bowtie_vector(graph)
        self.assertEqual(vector.l1 * 1 * graph.size, 4 * bt.bowtie_count(graph))

    def test_single_point_second_set(self):
        event = ProductEvent.from_members(2, [[0, 1, 2, 3], [2], [0, 1, 2, 3]])
        graph = bt.build_graph(event, whole(2))
        self.assertEqual(bt.enumerate_bowties(graph), [])
        with self.assertRaises(EmptyBowTieSetError):
            bt.sample_bowtie(graph, np.random.default_rng(0))
        with self.assertRaises(EmptyBowTieSetError):
            bt.differing_stats(graph)

    def test_incidence_cap(self):
        with self.assertRaises(SizeLimitError):
            bt.bowtie_incidences(full_graph(), bowtie_cap=5)
        with self.assertRaises(SizeLimitError):
            bt.check_claim53(full_graph(), bowtie_cap=5)

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_incidences_match_enumeration(self, seed):
        """The per-difference incidence grid equals the one built from listed bow ties."""
        graph = random_graph(seed)
        incidences, per_difference = bt.bowtie_incidences(graph)
        bowties = bt.enumerate_bowties(graph)
        listed = np.zeros_like(incidences)
        by_difference = Counter()
        for b in bowties:
            for x, y in b.edges():
                listed[graph.local(0, x), graph.local(1, y)] += 1
            by_difference[graph.local(0, b.x0) ^ graph.local(0, b.x1)] += 1
        self.assertTrue(np.array_equal(incidences, listed))
        self.assertEqual({d: int(k) for d, k in enumerate(per_difference) if k}, dict(by_difference))

    def test_identity_reports_hard_fraction(self):
        graph = full_graph()
        report = bt.check_claim53(graph)
        self.assertTrue(report['passed'])
        self.assertEqual(report['values']['bowties'], 12)
        self.assertEqual(report['values']['hard_fraction'], Fraction(2, 3))

    @settings(max_examples=15, deadline=None)
    @given(seeds)
    def test_hard_fraction_matches_listed_bowties(self, seed):
        graph = dense_graph(seed, 4)
        if not graph.third_count or not bt.bowtie_count(graph):
            return
        expected = bt.differing_fraction(bt.enumerate_bowties(graph), graph.n)
        self.assertEqual(bt.check_claim53(graph)['values']['hard_fraction'], expected)

    def test_enumeration_cap(self):
        with self.assertRaises(SizeLimitError) as raised:
            bt.enumerate_bowties(full_graph(), bowtie_cap=5)
        self.assertIn('sample_bowtie', str(raised.exception))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_counts_match_enumeration(self, seed):
        """count_containing agrees with enumerated incidences; they total 4 |B|."""
        graph = random_graph(seed)
        bowties = bt.enumerate_bowties(graph)
        incidences = incidence_counts(bowties)
        for x, y in graph.edges():
            self.assertEqual(bt.count_containing(graph, x, y), incidences[(x, y)])
        self.assertEqual(sum(incidences.values()), 4 * len(bowties))
        self.assertEqual(bt.bowtie_count(graph), len(bowties))

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_bowtie_sum_identity(self, seed):
        """|E3 n pi3| v equals the sum of bow ties entry by entry."""
        graph = random_graph(seed)
        if graph.third_count:
            self.assertTrue(bt.check_claim53(graph)['passed'])

    def test_identity_detects_perturbation(self):
        graph = full_graph()
        vector = bt.bowtie_vector(graph).perturbed()
        report = bt.check_claim53(graph, vector)
        self.assertFalse(report['passed'])
        self.assertEqual(report['values']['mismatched_entries'], 1)


class CountContainingTest(SimpleTestCase):
    def test_non_edge(self):
        event = ProductEvent.from_members(2, [[0, 1], [0, 1, 2, 3], [0, 1, 2, 3]])
        graph = bt.build_graph(event, whole(2))
        self.assertEqual(bt.count_containing(graph, 2, 0), 0)

    def test_complete_graph(self):
        graph = full_graph()
        self.assertTrue(all(bt.count_containing(graph, x, y) == 3 for x, y in graph.edges()))


class SampleBowTieTest(SimpleTestCase):
    def test_uniform_on_complete_graph(self):
        """Each of the 12 bow ties turns up with frequency 1/12."""
        graph = full_graph()
        rng = np.random.default_rng(99)
        draws = 12000
        counts = Counter(bt.sample_bowtie(graph, rng) for _ in range(draws))
        self.assertEqual(set(counts), set(bt.enumerate_bowties(graph)))
        sigma = (draws * Fraction(1, 12) * Fraction(11, 12)) ** 0.5
        for count in counts.values():
            self.assertLess(abs(count - draws / 12), 4 * sigma)

    def test_single_bowtie(self):
        """n = 1 with every set full has exactly one bow tie."""
        graph = full_graph(1)
        rng = np.random.default_rng(3)
        self.assertEqual({bt.sample_bowtie(graph, rng) for _ in range(20)}, {bt.BowTie(0, 1, 0, 1)})

    def test_seeded_draws_repeat(self):
        graph = dense_graph(8, 4)
        first = [bt.sample_bowtie(graph, np.random.default_rng(1)) for _ in range(3)]
        second = [bt.sample_bowtie(graph, np.random.default_rng(1)) for _ in range(3)]
        self.assertEqual(first, second)

    def test_edge_marginal_follows_v(self):
        """A uniform edge of a uniform bow tie is distributed as v / ||v||_1."""
        graph = dense_graph(21, 3, density=0.9)
        vector = bt.bowtie_vector(graph)
        rng = np.random.default_rng(4)
        draws = 6000
        counts = Counter()
        for _ in range(draws):
            b = bt.sample_bowtie(graph, rng)
            counts[b.edges()[int(rng.integers(4))]] += 1
        for edge in graph.edges():
            p = float(vector[edge] / vector.l1)
            sigma = (draws * p * (1 - p)) ** 0.5
            self.assertLessEqual(abs(counts[edge] - draws * p), 4 * sigma + 1)


class DifferingStatsTest(SimpleTestCase):
    def test_complete_graph(self):
        """Differences 01, 10 and 11 in equal numbers: (1 + 1 + 2) / 6."""
        graph = full_graph()
        self.assertEqual(bt.differing_stats(graph), {'exact': True, 'value': Fraction(2, 3)})
        self.assertEqual(bt.differing_fraction(bt.enumerate_bowties(graph), 2), Fraction(2, 3))

    def test_single_bowtie(self):
        self.assertEqual(bt.differing_stats(full_graph(1))['value'], 1)

    def test_sampler_agrees_with_exact_value(self):
        graph = dense_graph(5, 5)
        exact = bt.differing_fraction(bt.enumerate_bowties(graph), graph.n)
        self.assertEqual(bt.differing_stats(graph)['value'], exact)
        estimate = bt.differing_stats(graph, rng=np.random.default_rng(6), samples=2000)
        self.assertFalse(estimate['exact'])
        self.assertLessEqual(abs(estimate['value'] - float(exact)), 4 * estimate['stderr'] + 1e-12)


class Lemma41Test(SimpleTestCase):
    def test_full_cosets(self):
        full = np.ones(8, dtype=bool)
        report = bt.check_lemma41(full, full, full, whole(3))
        self.assertTrue(report['passed'])
        values = report['values']
        self.assertEqual(values['lhs1'], values['rhs1'])
        self.assertEqual(values['lhs2'], values['rhs2'])
        self.assertEqual((values['delta1'], values['delta2']), (0, 0))

    def test_half_space_third_set(self):
        full = np.ones(8, dtype=bool)
        half = np.array([x & 1 == 0 for x in range(8)])
        report = bt.check_lemma41(full, full, half, whole(3))
        self.assertTrue(report['passed'])
        self.assertEqual(report['values']['delta1'], Fraction(1, 2))
        self.assertEqual(report['values']['lhs1'], Fraction(1, 2))

    def test_shifts_off_support(self):
        full = np.ones(4, dtype=bool)
        with self.assertRaises(ShiftError):
            bt.check_lemma41(full, full, full, Part((1, 0, 0), Subspace.zero(2)))

    @settings(max_examples=200, deadline=None)
    @given(seeds, st.integers(min_value=1, max_value=6))
    def test_random_sets(self, seed, n):
        rng = np.random.default_rng(seed)
        space = rref_basis([int(v) for v in rng.integers(1 << n, size=n)], n=n)
        a1, a2 = (int(a) for a in rng.integers(1 << n, size=2))
        sets = [rng.random(1 << n) < rng.uniform(0.1, 1.0) for _ in range(3)]
        self.assertTrue(bt.check_lemma41(*sets, Part((a1, a2, a1 ^ a2), space))['passed'])


class NormBoundsTest(SimpleTestCase):
    def test_complete_graph(self):
        """||v||_1 = 12 meets the lower bound exactly; ||v||_2^2 = 9 <= 16."""
        report = bt.check_norm_bounds(full_graph())
        self.assertTrue(report['passed'])
        self.assertEqual(report['values']['l1'], 12)
        self.assertEqual(report['values']['l1_lower'], 12)
        self.assertEqual(report['values']['l2sq'], 9)
        self.assertEqual(report['values']['l2sq_upper_base'], 16)
        self.assertEqual(report['checks'], {'c54': True, 'c55': True})

    def test_not_good_part(self):
        event = ProductEvent.from_members(2, [[0], [0, 1, 2, 3], [0, 1, 2, 3]])
        graph = bt.build_graph(event, whole(2))
        report = bt.check_norm_bounds(graph, delta=Fraction(1, 100), require_good=True, alpha=1)
        self.assertFalse(report['passed'])

    def test_empty_third_set(self):
        """mu(E3 n pi3) = 0 is reported, not divided by."""
        event = ProductEvent.from_members(2, [[0, 1, 2, 3], [0, 1, 2, 3], []])
        graph = bt.build_graph(event, whole(2))
        zeros = bt.BowTieVector(graph, np.zeros((4, 4), dtype=np.int64), 1)
        for report in (bt.check_norm_bounds(graph, zeros), bt.check_norm_bounds(graph)):
            self.assertFalse(report['passed'])
            self.assertIn('alpha_zero', report['errors'][0])

    @settings(max_examples=20, deadline=None)
    @given(seeds)
    def test_random_dense_events(self, seed):
        rng = np.random.default_rng(seed)
        event = ProductEvent(6, [rng.random(64) < 0.85 for _ in range(3)])
        graph = bt.build_graph(event, whole(6))
        if graph.third_count:
            report = bt.check_norm_bounds(graph)
            self.assertTrue(report['passed'], report['errors'])
            self.assertTrue(bt.check_weight_moment(graph)['passed'])


class UniformityTest(SimpleTestCase):
    def test_uniform_vector(self):
        report = bt.uniformity_check([3, 3, 3, 3, 3])
        self.assertTrue(report['passed'])
        self.assertEqual(report['values']['one_plus_beta_squared'], 1)
        self.assertEqual(report['values']['l1_distance'], 0)
        self.assertEqual(report['beta'], 0)

    def test_half_mass_on_two_entries(self):
        """(1/2, 1/2, 0, 0): beta = sqrt(2) - 1 and distance 1 <= sqrt(3 beta)."""
        report = bt.uniformity_check([Fraction(1, 2), Fraction(1, 2), 0, 0])
        self.assertTrue(report['passed'])
        self.assertTrue(report['applicable'])
        self.assertEqual(report['values']['one_plus_beta_squared'], 2)
        self.assertEqual(report['values']['l1_distance'], 1)
        self.assertEqual(report['values']['l2_distance_squared'], Fraction(1, 4))
        self.assertAlmostEqual(report['beta'], 2 ** 0.5 - 1)

    def test_bound_not_applicable(self):
        report = bt.uniformity_check([1] + [0] * 8)
        self.assertFalse(report['applicable'])
        self.assertTrue(report['warnings'])

    def test_rejects_zero_vector(self):
        with self.assertRaises(DomainError):
            bt.uniformity_check([0, 0])

    @given(st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=40))
    def test_random_vectors(self, weights):
        if any(weights):
            self.assertTrue(bt.uniformity_check(weights)['passed'])

    def test_integer_array_weights(self):
        """Integer numerator arrays give the same exact report as a list."""
        listed = bt.uniformity_check([3, 1, 2, 0, 2])
        packed = bt.uniformity_check(np.array([3, 1, 2, 0, 2], dtype=np.int64))
        self.assertEqual(listed['values'], packed['values'])
        self.assertEqual(listed['passed'], packed['passed'])

    def test_complete_graph_is_uniform(self):
        report = bt.tv_to_uniform(full_graph())
        self.assertEqual(report['values']['tv'], 0)
        self.assertTrue(report['passed'])


class EmbeddingTest(SimpleTestCase):
    def setUp(self):
        # differs in coordinates 1 and 3 of F_2^3
        self.bowtie = bt.BowTie.canonical(0b000, 0b101, 0b010, 0b111)

    def test_coordinate_values(self):
        """3/4 where the bow tie differs and 1 elsewhere."""
        report = bt.check_claim52(self.bowtie, 3)
        self.assertTrue(report['passed'])
        self.assertEqual(report['values'], {'coord_1': THREE_QUARTERS, 'coord_2': 1, 'coord_3': THREE_QUARTERS})

    def test_non_differing_coordinate(self):
        with self.assertRaises(EmbeddingUndefinedError):
            bt.embed_strategies(self.bowtie, 2, zero_strategy(self.bowtie))

    def test_all_zero_strategy(self):
        """All-zero answers induce the all-zero GHZ strategy; both sides are 1/4."""
        b = self.bowtie
        induced = bt.embed_strategies(b, 1, zero_strategy(b))
        self.assertEqual(induced.tables, ({0: 0, 1: 0},) * 3)
        self.assertEqual(bt.embedding_values(b, 1, zero_strategy(b), 3), (Fraction(1, 4), Fraction(1, 4)))

    def test_exhaustive_assignments(self):
        """Over all 4^3 relevant answer assignments the best coordinate success is 3/4."""
        b = self.bowtie
        corners = ((b.x0, b.x1), (b.y0, b.y1), (b.z0, b.z1))
        game = bt.bowtie_game(b, 3)
        for i in b.differing():
            best = Fraction(0)
            for bits in itertools.product((0, 1), repeat=6):
                fbar = Strategy(tuple(
                    {q: bits[2 * p + k] << (i - 1) for k, q in enumerate(pair)} for p, pair in enumerate(corners)
                ))
                induced, original = bt.embedding_values(b, i, fbar, 3)
                self.assertEqual(induced, original)
                self.assertEqual(original, coordinate_success(game, fbar, i))
                best = max(best, original)
            self.assertEqual(best, THREE_QUARTERS)

    @given(st.lists(st.integers(min_value=0, max_value=7), min_size=6, max_size=6))
    def test_random_strategies(self, answers):
        b = self.bowtie
        corners = ((b.x0, b.x1), (b.y0, b.y1), (b.z0, b.z1))
        fbar = Strategy(tuple(
            {q: answers[2 * p + k] for k, q in enumerate(pair)} for p, pair in enumerate(corners)
        ))
        for i in b.differing():
            induced, original = bt.embedding_values(b, i, fbar, 3)
            self.assertEqual(induced, original)
            self.assertEqual(strategy_value(ghz(), bt.embed_strategies(b, i, fbar)), induced)

    def test_bowtie_game_distribution(self):
        game = bt.bowtie_game(self.bowtie, 3)
        self.assertEqual(set(game.support), set(self.bowtie.queries()))
        self.assertEqual(set(game.probabilities), {Fraction(1, 4)})


class BowTieCornersTest(SimpleTestCase):
    def test_canonical_order(self):
        b = bt.BowTie.canonical(0b11, 0b01, 0b10, 0b00)
        self.assertEqual((b.x0, b.x1, b.y0, b.y1), (0b01, 0b11, 0b00, 0b10))
        self.assertEqual(b.difference, 0b10)

    def test_unequal_differences(self):
        with self.assertRaises(DomainError):
            bt.BowTie.canonical(0, 1, 0, 2)

    def test_zero_difference(self):
        with self.assertRaises(DomainError):
            bt.BowTie.canonical(1, 1, 2, 2)

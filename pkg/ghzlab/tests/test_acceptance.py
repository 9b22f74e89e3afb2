"""
Seeded sweeps at full scale. Slow; they run only with

    python manage.py test ghzlab --tag acceptance
"""
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag

from ghzlab import bowtie as bt
from ghzlab.decomposition import Part, certify, decompose, failure_probability, step_bound
from ghzlab.f2linear import AffineCoset, Subspace, rref_basis
from ghzlab.fourier import parseval_residual, plancherel_residual
from ghzlab.games import ProductEvent, ghz, repeat
from ghzlab.lab import conditioning_walk, random_strategy

# --- Helper Functions ---

def random_subspace(n, dim, rng):
    return rref_basis([int(v) for v in rng.integers(1 << n, size=dim)], n=n)


def random_part(n, rng, max_dim=None):
    """A random part meeting supp(P)."""
    top = n if max_dim is None else min(n, max_dim)
    space = random_subspace(n, int(rng.integers(1, top + 1)), rng)
    a1, a2 = (int(a) for a in rng.integers(1 << n, size=2))
    return Part((a1, a2, a1 ^ a2), space)


def random_sets(n, rng, density):
    return [rng.random(1 << n) < density for _ in range(3)]


def dyadic_function(coset, rng):
    return {int(x): Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 5))) for x in coset.table()}


@tag('acceptance')
class BowTieCoordinateSweep(SimpleTestCase):
    def test_thousand_random_bowties(self):
        """3/4 at every differing coordinate and 1 elsewhere, n = 2..10."""
        rng = np.random.default_rng(52)
        for trial in range(1000):
            n = 2 + trial % 9
            x0, y0 = (int(w) for w in rng.integers(1 << n, size=2))
            d = int(rng.integers(1, 1 << n))
            b = bt.BowTie.canonical(x0, x0 ^ d, y0, y0 ^ d)
            report = bt.check_claim52(b, n)
            self.assertTrue(report['passed'], (b.to_json(), report['errors']))


@tag('acceptance')
class BowTieIdentitySweep(SimpleTestCase):
    def test_two_hundred_instances(self):
        rng = np.random.default_rng(53)
        checked = 0
        for trial in range(200):
            n = 2 + trial % 7
            event = ProductEvent(n, random_sets(n, rng, rng.uniform(0.5, 1.0)))
            graph = bt.build_graph(event, random_part(n, rng, max_dim=6))
            if not graph.third_count:
                continue
            report = bt.check_claim53(graph)
            self.assertTrue(report['passed'], report['errors'])
            self.assertEqual(report['values']['mismatched_entries'], 0)
            checked += 1
        self.assertGreater(checked, 100)

    def test_perturbed_vector_fails(self):
        graph = bt.build_graph(ProductEvent.full(3), Part((0, 0, 0), Subspace.full(3)))
        self.assertFalse(bt.check_claim53(graph, bt.bowtie_vector(graph).perturbed())['passed'])


@tag('acceptance')
class Lemma41Sweep(SimpleTestCase):
    def test_two_hundred_per_dimension(self):
        rng = np.random.default_rng(41)
        for n in range(4, 11):
            for _ in range(200):
                sets = random_sets(n, rng, rng.uniform(0.2, 1.0))
                report = bt.check_lemma41(*sets, random_part(n, rng))
                self.assertTrue(report['passed'], (n, report['errors']))


@tag('acceptance')
class NormBoundSweep(SimpleTestCase):
    def test_hundred_dense_instances(self):
        rng = np.random.default_rng(54)
        for trial in range(100):
            n = 2 + trial % 7
            event = ProductEvent(n, random_sets(n, rng, 0.85))
            graph = bt.build_graph(event, Part((0, 0, 0), Subspace.full(n)))
            if not graph.third_count:
                continue
            report = bt.check_norm_bounds(graph)
            self.assertTrue(report['passed'], (n, report['errors']))

    def test_full_sets_meet_the_lower_bound(self):
        graph = bt.build_graph(ProductEvent.full(2), Part((0, 0, 0), Subspace.full(2)))
        report = bt.check_norm_bounds(graph)
        self.assertEqual(report['values']['l1'], 12)
        self.assertEqual(report['values']['l1_lower'], 12)


@tag('acceptance')
class DecompositionSweep(SimpleTestCase):
    def test_fifty_random_events(self):
        rng = np.random.default_rng(4)
        deltas = [Fraction(2, 5), Fraction(3, 10), Fraction(1, 4)]
        for trial in range(50):
            n = 4 + trial % 7
            delta = deltas[trial % 3]
            event = ProductEvent(n, random_sets(n, rng, rng.uniform(0.3, 0.9)))
            if event.mass() == 0:
                continue
            partition = decompose(event, delta)
            self.assertLessEqual(partition.steps, step_bound(delta))
            for record in partition.history:
                if record['refined']:
                    self.assertGreaterEqual(record['potential_after'] - record['potential_before'], delta ** 3)
            self.assertLessEqual(failure_probability(partition, event, delta), delta)
            report = certify(partition, event, delta)
            self.assertTrue(report['passed'], (n, delta, report['errors']))


@tag('acceptance')
class UniformitySweep(SimpleTestCase):
    def test_ten_thousand_vectors(self):
        rng = np.random.default_rng(56)
        applicable = 0
        for _ in range(10 ** 4):
            m = int(rng.integers(2, 64))
            report = bt.uniformity_check(rng.integers(1, 16, size=m))
            self.assertTrue(report['passed'], report['errors'])
            applicable += report['applicable']
        self.assertGreater(applicable, 9000)

    def test_half_mass_on_two_entries(self):
        self.assertTrue(bt.uniformity_check([Fraction(1, 2), Fraction(1, 2), 0, 0])['passed'])


@tag('acceptance')
class FourierSweep(SimpleTestCase):
    def test_thousand_functions(self):
        rng = np.random.default_rng(9)
        for trial in range(1000):
            n = 1 + trial % 10
            coset = AffineCoset(int(rng.integers(1 << n)), random_subspace(n, int(rng.integers(0, n + 1)), rng))
            a = int(coset.table()[int(rng.integers(coset.size))])
            f, g = dyadic_function(coset, rng), dyadic_function(coset, rng)
            self.assertEqual(parseval_residual(f, coset, a), 0)
            self.assertEqual(plancherel_residual(f, g, coset, a), 0)


@tag('acceptance')
class ConditioningWalkSweep(SimpleTestCase):
    def test_five_hundred_strategies(self):
        for n in (2, 3):
            game = repeat(ghz(), n)
            rng = np.random.default_rng(n)
            cache = {}
            for _ in range(500):
                transcript = conditioning_walk(game, random_strategy(game, rng), cache=cache)
                self.assertTrue(transcript.holds, transcript.to_json())
                self.assertEqual(len(set(transcript.coordinates)), len(transcript.coordinates))

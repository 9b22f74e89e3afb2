# ghzlab/lab.py
"""
Experiment orchestration: event generation, the per-part pipeline, the
conditioning walk over a repeated game and the full verification sweep.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import bowtie as bt
from .conf import resolve
from .decomposition import (
    Part, certify, decompose, failure_probability, good_floor, good_fraction, is_good,
    history_to_json, sample_part, step_bound,
)
from .exact import as_fraction
from .exceptions import DomainError, SizeLimitError
from .f2linear import AffineCoset, from_hex, rref_basis, to_hex
from .fourier import parseval_residual, plancherel_residual
from .games import ProductEvent, Strategy, condition, coordinate_value, game_value, ghz, repeat, strategy_value

logger = logging.getLogger(__name__)

THREE_QUARTERS = Fraction(3, 4)


@dataclass(frozen=True)
class ExperimentConfig:
    """Run parameters. The seed fixes every random choice of a run."""
    n: int = 2
    delta: Fraction = Fraction(1, 4)
    alpha_floor: Fraction = Fraction(0)
    seed: int = 0
    density: Optional[Fraction] = None
    event_file: Optional[str] = None
    affine: Optional[tuple] = None
    bowtie_cap: Optional[int] = None
    edge_cap: Optional[int] = None
    threads: Optional[int] = None
    out: Optional[str] = None
    parts: int = 4
    samples: int = 4
    trials: int = 2
    split_all: bool = True

    def __post_init__(self):
        sources = [s for s in (self.density, self.event_file, self.affine) if s is not None]
        if len(sources) > 1:
            raise DomainError('choose one of density, event file or affine definition')
        if self.density is not None and not 0 < self.density <= 1:
            raise DomainError('density must lie in (0, 1]')
        if self.delta <= 0:
            raise DomainError('delta must be positive')
        if any(cap is not None and cap <= 0 for cap in (self.bowtie_cap, self.edge_cap)):
            raise DomainError('caps must be positive')

    def rng(self, *salt):
        return np.random.default_rng([self.seed, *salt])


@dataclass
class EventDraw:
    event: ProductEvent
    alpha: Fraction
    warnings: list = field(default_factory=list)


def affine_set(n: int, gamma: int) -> np.ndarray:
    """{x : gamma . x = 0} as a bitset."""
    words = np.arange(1 << n, dtype=np.int64)
    parity = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        if (gamma >> bit) & 1:
            parity ^= (words >> bit) & 1
    return parity == 0


def gen_event(config: ExperimentConfig, rng=None) -> EventDraw:
    """Product event from the configured source, with its exact mass alpha."""
    rng = config.rng() if rng is None else rng
    n = config.n
    if config.event_file is not None:
        event = load_event(config.event_file)
        if event.n != n:
            raise DomainError(f"event file is over F_2^{event.n}, run asks for n = {n}")
    elif config.affine is not None:
        event = ProductEvent(n, [affine_set(n, int(gamma)) for gamma in config.affine])
    else:
        density = Fraction(1, 2) if config.density is None else config.density
        if density == 1:
            event = ProductEvent.full(n)
        else:
            event = ProductEvent(n, [rng.random(1 << n) < float(density) for _ in range(3)])
    draw = EventDraw(event, event.mass())
    if draw.alpha == 0:
        draw.warnings.append('alpha_zero')
        logger.warning(f"Generated event misses supp(P) entirely (n={n}, seed={config.seed})")
    else:
        logger.info(f"Generated event with alpha = {draw.alpha} (n={n}, seed={config.seed})")
    return draw


def dump_event(event: ProductEvent) -> dict:
    data = {'n': event.n}
    for i, bitset in enumerate(event):
        data[f"E{i + 1}"] = [to_hex(x) for x in np.nonzero(bitset)[0]]
    return data


def load_event(path) -> ProductEvent:
    with open(path, encoding='utf-8') as handle:
        data = json.load(handle)
    try:
        n = int(data['n'])
        members = [[from_hex(x) for x in data[f"E{i}"]] for i in (1, 2, 3)]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed event file {path}: {exc}") from exc
    if any(x >> n for words in members for x in words):
        raise DomainError(f"event file {path} has words outside F_2^{n}")
    return ProductEvent.from_members(n, members)


def save_event(event: ProductEvent, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(dump_event(event), indent=2, sort_keys=True), encoding='utf-8')


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def aggregate_value(hard_fraction):
    """3/4 on coordinates where the bow tie differs, 1 elsewhere."""
    return THREE_QUARTERS * hard_fraction + (1 - hard_fraction)


def analyse_part(event, part: Part, alpha, delta, config: ExperimentConfig, rng) -> dict:
    """Bow-tie statistics and claim checks on one good part."""
    row = {
        'shifts': [to_hex(a) for a in part.shifts],
        'codim': part.codim,
        'good': is_good(part, event, alpha, delta),
        'claims': {},
        'warnings': [],
    }
    if not row['good']:
        return row
    graph = bt.build_graph(event, part, config.edge_cap)
    vector = bt.bowtie_vector(graph, threads=config.threads)
    norms = bt.check_norm_bounds(graph, vector)
    row.update(
        edges=graph.edge_count,
        l1=norms['values']['l1'],
        l2sq=norms['values']['l2sq'],
        instance_delta=norms['values']['delta'],
    )
    row['claims'].update(norms['checks'])
    row['claims']['lemma41'] = bt.check_lemma41(event[0], event[1], event[2], part)['passed']
    row['claims']['edge_count'] = bt.check_edge_count(graph)['passed']
    row['claims']['weight_moments'] = bt.check_weight_moment(graph)['passed']

    count = bt.bowtie_count(graph)
    row['bowtie_count'] = count
    if not count:
        row['warnings'].append('no bow ties on this part')
        return row

    uniformity = bt.tv_to_uniform(graph, vector)
    row.update(beta=uniformity['beta'], tv=uniformity['values']['tv'])
    row['claims']['c56'] = uniformity['passed']

    try:
        identity = bt.check_claim53(graph, vector, bowtie_cap=config.bowtie_cap)
        row['claims']['c53'] = identity['passed']
        differing = bt.differing_stats(graph)
    except SizeLimitError as exc:
        row['warnings'].append(f"partial: {exc}")
        differing = bt.differing_stats(graph, rng=rng, samples=max(config.samples, 2) * 64)
    row['hard_fraction'] = differing['value']
    if not differing['exact']:
        row['hard_fraction_stderr'] = differing['stderr']
    row['aggregate'] = aggregate_value(differing['value'])

    sampled = []
    c52 = True
    for _ in range(config.samples):
        b = bt.sample_bowtie(graph, rng)
        report = bt.check_claim52(b, event.n, threads=config.threads)
        c52 = c52 and report['passed']
        sampled.extend(report['values'].values())
    row['claims']['c52'] = c52
    if sampled:
        row['sampled_coordinate_mean'] = sum(sampled, Fraction(0)) / len(sampled)
    return row


def run_pipeline(config: ExperimentConfig) -> dict:
    """Decompose a generated event and analyse a sample of parts drawn from Pi(P|E)."""
    rng = config.rng()
    draw = gen_event(config, rng)
    delta = as_fraction(config.delta)
    report = {
        'n': config.n,
        'seed': config.seed,
        'delta': delta,
        'alpha': draw.alpha,
        'warnings': list(draw.warnings),
        'status': 'ok',
    }
    if draw.alpha == 0:
        report['status'] = 'aborted'
        return report
    if draw.alpha < config.alpha_floor:
        report['warnings'].append(f"alpha {draw.alpha} below floor {config.alpha_floor}")

    partition = decompose(draw.event, delta, config.split_all, threads=config.threads)
    report['decomposition'] = {
        'steps': partition.steps,
        'parts': len(partition.parts),
        'codim': partition.codim_bound,
        'failure': failure_probability(partition, draw.event, delta, config.threads),
        'history': history_to_json(partition),
    }
    good = good_fraction(partition, draw.event, draw.alpha, delta)
    report['good_fraction'] = good
    report['good_floor'] = good_floor(draw.alpha, delta)
    report['proof_delta'] = bt.proof_delta(draw.alpha, config.n)

    chosen = sorted({
        partition.parts.index(sample_part(partition, draw.event, rng)) for _ in range(config.parts)
    })
    rows = []
    for index in chosen:
        try:
            row = analyse_part(draw.event, partition.parts[index], draw.alpha, delta, config, rng)
        except SizeLimitError as exc:
            report['status'] = 'partial'
            report['warnings'].append(str(exc))
            continue
        row['part'] = index
        rows.append(row)
    report['rows'] = rows

    aggregates = [row['aggregate'] for row in rows if 'aggregate' in row]
    if aggregates:
        mean = sum(aggregates) / len(aggregates)
        report['aggregate'] = mean
        # bad parts are charged the trivial bound 1
        report['value_bound'] = good * mean + (1 - good)
    logger.info(
        f"Pipeline n={config.n} seed={config.seed}: {len(partition.parts)} parts, "
        f"good fraction {good}, {len(rows)} part(s) analysed"
    )
    return report


# ---------------------------------------------------------------------------
# Conditioning walk
# ---------------------------------------------------------------------------

@dataclass
class WalkStep:
    coordinate: int
    assignments: list
    conditional_probability: Fraction
    values: dict
    typical_mass: Fraction

    @property
    def bounded(self) -> bool:
        """Pr[W_{i+1} | W_{<=i}] <= E_z[val^(j)(G | Z = z)]."""
        return self.conditional_probability <= self.values[self.coordinate]


@dataclass
class ConditioningTranscript:
    strategy_id: str
    steps: list
    product: Fraction
    value: Fraction
    schedule: int

    @property
    def holds(self) -> bool:
        return self.value <= self.product

    @property
    def coordinates(self) -> list:
        return [step.coordinate for step in self.steps]

    def to_json(self) -> dict:
        return {
            'strategy_id': self.strategy_id,
            'product': self.product,
            'value': self.value,
            'holds': self.holds,
            'schedule': self.schedule,
            'steps': [
                {
                    'coordinate': step.coordinate,
                    'conditional_probability': step.conditional_probability,
                    'values': {str(j): v for j, v in sorted(step.values.items())},
                    'typical_mass': step.typical_mass,
                    'assignments': step.assignments,
                }
                for step in self.steps
            ],
        }


def walk_schedule(rho, c=None, base=None) -> int:
    """Largest m >= 0 with base^-m >= rho * 2 / c (0 when even m = 0 fails)."""
    c = as_fraction(resolve(c, 'WALK_C'))
    base = resolve(base, 'WALK_BASE')
    target = as_fraction(rho) * 2 / c
    if target <= 0:
        raise DomainError('rho must be positive')
    m = 0
    while Fraction(1, base ** (m + 1)) >= target:
        m += 1
    return m


def strategy_digest(strategy: Strategy, n: int) -> str:
    text = json.dumps(strategy.to_json(n), sort_keys=True)
    return hashlib.sha1(text.encode('utf-8')).hexdigest()[:12]


def conditioning_walk(game, strategy: Strategy, c=None, rho=None, steps=None, base=None,
                      search_cap=None, threads=None, cache=None) -> ConditioningTranscript:
    """
    Greedy walk over coordinates: at each step fix the unused coordinate j
    minimising E_{z ~ Z|W}[val^(j)(G | Z = z)] and multiply in
    Pr[W_{i+1} | W_{<=i}].

    ``cache`` maps (rounds, support, probabilities, j) of a conditioned game
    to its coordinate value and may be shared by walks over the same game.
    """
    cache = {} if cache is None else cache
    c = as_fraction(resolve(c, 'WALK_C'))
    base = resolve(base, 'WALK_BASE')
    n = game.rounds
    steps = n if steps is None else min(steps, n)
    schedule = walk_schedule(rho, c, base) if rho is not None else steps

    answers = [strategy.answers(query) for query in game.support]
    wins = [
        [game.wins_coordinate(query, ans, j) for j in range(1, n + 1)]
        for query, ans in zip(game.support, answers)
    ]
    chosen = []
    product = Fraction(1)
    transcript = []
    for i in range(steps):
        alive = [s for s in range(len(game.support)) if all(wins[s][j - 1] for j in chosen)]
        mass = sum((game.probabilities[s] for s in alive), Fraction(0))
        if mass == 0:
            product = Fraction(0)
            break
        mask = sum(1 << (j - 1) for j in chosen)
        groups = {}
        for s in alive:
            key = tuple(q & mask for q in game.support[s]) + tuple(a & mask for a in answers[s])
            groups.setdefault(key, []).append(s)
        conditioned = {
            key: (sum((game.probabilities[s] for s in members), Fraction(0)) / mass,
                  condition(game, [game.support[s] for s in members]))
            for key, members in groups.items()
        }
        values = {}
        for j in range(1, n + 1):
            if j in chosen:
                continue
            total = Fraction(0)
            for weight, sub in conditioned.values():
                key = (sub.rounds, sub.support, sub.probabilities, j)
                if key not in cache:
                    cache[key] = coordinate_value(sub, j, search_cap, threads)[0]
                total += weight * cache[key]
            values[j] = total
        j = min(values, key=lambda k: (values[k], k))
        won = sum((game.probabilities[s] for s in alive if wins[s][j - 1]), Fraction(0))
        probability = won / mass
        threshold = c / 2 / base ** i
        typical = sum((w for w, _ in conditioned.values() if w >= threshold), Fraction(0))
        assignments = [
            {'z': [to_hex(part) for part in key], 'probability': weight}
            for key, (weight, _) in sorted(conditioned.items())
        ]
        transcript.append(WalkStep(j, assignments, probability, values, typical))
        chosen.append(j)
        product *= probability
        logger.debug(f"Walk step {i + 1}: coordinate {j}, Pr[W|W<] = {probability}")
        if probability == 0:
            break

    value = strategy_value(game, strategy)
    result = ConditioningTranscript(strategy_digest(strategy, n), transcript, product, value, schedule)
    if not result.holds:
        logger.error(f"Walk product {product} fell below strategy value {value}")
    return result


def random_strategy(game, rng) -> Strategy:
    alphabet = 1 << (game.answer_bits * game.rounds)
    return Strategy(tuple(
        {q: int(rng.integers(alphabet)) for q in game.marginal(p)} for p in range(game.players)
    ))


# ---------------------------------------------------------------------------
# Verification sweep
# ---------------------------------------------------------------------------

def _check(name, passed, errors=None, **values):
    return {'claim': name, 'passed': bool(passed), 'values': values, 'errors': errors or [], 'warnings': []}


def _random_subspace(n: int, dim: int, rng):
    vectors = [int(rng.integers(1 << n)) for _ in range(dim)]
    return rref_basis(vectors, n=n)


def _dyadic_function(coset: AffineCoset, rng) -> dict:
    return {
        int(x): Fraction(int(rng.integers(-8, 9)), int(rng.integers(1, 5))) for x in coset.table()
    }


def _fourier_checks(n, rng, trials):
    checks = []
    for _ in range(trials):
        space = _random_subspace(n, int(rng.integers(0, n + 1)), rng)
        coset = AffineCoset(int(rng.integers(1 << n)), space)
        a = int(coset.table()[int(rng.integers(coset.size))])
        f, g = _dyadic_function(coset, rng), _dyadic_function(coset, rng)
        parseval = parseval_residual(f, coset, a)
        plancherel = plancherel_residual(f, g, coset, a)
        checks.append(_check('parseval', parseval == 0 and plancherel == 0, n=n, dim=space.dim))
    return checks


def _lemma41_checks(n, rng, trials):
    checks = []
    for _ in range(trials):
        space = _random_subspace(n, int(rng.integers(1, n + 1)), rng)
        a1, a2 = int(rng.integers(1 << n)), int(rng.integers(1 << n))
        part = Part((a1, a2, a1 ^ a2), space)
        sets = [rng.random(1 << n) < rng.uniform(0.2, 1.0) for _ in range(3)]
        checks.append(bt.check_lemma41(*sets, part))
    return checks


def _decomposition_checks(event, delta, config):
    partition = decompose(event, delta, config.split_all, threads=config.threads)
    rescan = certify(partition, event, delta)
    rising = all(
        h['potential_after'] - h['potential_before'] >= delta ** 3
        for h in partition.history if h['refined']
    )
    errors = list(rescan['errors'])
    if not rising:
        errors.append('a refining step raised the potential by less than delta^3')
    if partition.steps > step_bound(delta):
        errors.append('too many refining steps')
    return partition, _check('decomposition', not errors, errors, steps=partition.steps,
                             parts=len(partition.parts), failure=rescan['failure'])


def _graph_checks(event, part, config, rng, inject_fault):
    try:
        graph = bt.build_graph(event, part, config.edge_cap)
    except SizeLimitError as exc:
        logger.warning(f"Skipping graph checks: {exc}")
        return []
    checks = [
        bt.check_edge_count(graph),
        bt.check_weight_function(graph),
        bt.check_uniform_is_conditional(graph),
    ]
    if not graph.third_count:
        return checks
    checks.append(bt.check_weight_moment(graph))
    vector = bt.bowtie_vector(graph, threads=config.threads)
    checks.append(bt.check_norm_bounds(graph, vector))
    count = bt.bowtie_count(graph)
    if not count:
        return checks
    checks.append(bt.tv_to_uniform(graph, vector))
    checked = vector.perturbed() if inject_fault else vector
    try:
        identity = bt.check_claim53(graph, checked, bowtie_cap=config.bowtie_cap)
    except SizeLimitError as exc:
        logger.warning(f"Skipping exact bow-tie identity: {exc}")
    else:
        checks.append(identity)
        exact = identity['values']['hard_fraction']
        stats = bt.differing_stats(graph)
        checks.append(_check('c57', stats['value'] == exact, hard_fraction=exact))
        estimate = bt.differing_stats(graph, rng=rng, samples=256)
        agreement = _check('c57_sampler', True, estimate=estimate['value'], stderr=estimate['stderr'])
        if abs(estimate['value'] - float(exact)) > 4 * estimate['stderr'] + 1e-12:
            agreement['warnings'].append('sampler estimate more than 4 standard errors from exact value')
        checks.append(agreement)
    for _ in range(config.samples):
        b = bt.sample_bowtie(graph, rng)
        checks.append(bt.check_claim52(b, event.n, threads=config.threads))
        for i in b.differing():
            fbar = Strategy(tuple(
                {q: int(rng.integers(1 << event.n)) for q in corners}
                for corners in ((b.x0, b.x1), (b.y0, b.y1), (b.z0, b.z1))
            ))
            induced, original = bt.embedding_values(b, i, fbar, event.n)
            checks.append(_check('embedding', induced == original, induced=induced, original=original))
    return checks


def _uniformity_checks(rng, trials):
    checks = [bt.uniformity_check([Fraction(1, 2), Fraction(1, 2), 0, 0])]
    for _ in range(trials):
        m = int(rng.integers(2, 64))
        weights = [int(w) for w in rng.integers(8, 16, size=m)]
        report = bt.uniformity_check(weights)
        if report['applicable']:
            checks.append(report)
    return checks


def _walk_checks(n, config, rng):
    checks = []
    game = repeat(ghz(), n)
    cache = {}
    for _ in range(config.trials):
        strategy = random_strategy(game, rng)
        transcript = conditioning_walk(game, strategy, threads=config.threads, cache=cache)
        reused = len(set(transcript.coordinates)) != len(transcript.coordinates)
        errors = []
        if not transcript.holds:
            errors.append('walk product below strategy value')
        if reused:
            errors.append('walk reused a coordinate')
        if not all(step.bounded for step in transcript.steps):
            errors.append('conditional win probability above expected coordinate value')
        checks.append(_check('walk', not errors, errors, n=n, product=transcript.product, value=transcript.value))
    return checks


def verify_all(config: ExperimentConfig, inject_fault: bool = False) -> dict:
    """Every claim checker over n = 2..config.n; passes iff every report passes."""
    if config is None or config.n < 2:
        raise DomainError('verify needs n >= 2')
    delta = as_fraction(config.delta)
    checks = []
    value, _ = game_value(ghz(), threads=config.threads)
    checks.append(_check('ghz_value', value == THREE_QUARTERS, value=value))
    checks.extend(_uniformity_checks(config.rng(1), 8 * config.trials))

    fault_pending = inject_fault
    for n in range(2, config.n + 1):
        rng = config.rng(n)
        checks.extend(_fourier_checks(n, rng, config.trials))
        checks.extend(_lemma41_checks(n, rng, config.trials))
        for trial in range(config.trials):
            density = config.density if config.density is not None else Fraction(3, 4)
            sets = [rng.random(1 << n) < float(density) for _ in range(3)]
            event = ProductEvent(n, sets)
            if event.mass() == 0:
                continue
            partition, report = _decomposition_checks(event, delta, config)
            checks.append(report)
            part = sample_part(partition, event, rng)
            graph_checks = _graph_checks(event, part, config, rng, fault_pending)
            checks.extend(graph_checks)
            fault_pending = fault_pending and not any(c['claim'] == 'c53' for c in graph_checks)
        if n <= resolve(None, 'WALK_MAX_N'):
            checks.extend(_walk_checks(n, config, rng))

    failed = sorted({c['claim'] for c in checks if not c['passed']})
    report = {
        'passed': not failed,
        'failed': failed,
        'checks': len(checks),
        'claims': {
            name: all(c['passed'] for c in checks if c['claim'] == name)
            for name in sorted({c['claim'] for c in checks})
        },
        'warnings': [w for c in checks for w in c['warnings']],
        'details': checks,
    }
    log = logger.info if report['passed'] else logger.error
    log(f"Verification over n=2..{config.n}: {len(checks)} checks, failed: {failed or 'none'}")
    return report

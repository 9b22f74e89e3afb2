# ghzlab/games.py
"""
Finite multi-player games with exact values.

A game is played over ``rounds`` coordinates. Questions and answers are packed
words: coordinate j of a word occupies bits [(j-1)w, jw) where w is the
per-coordinate width, so for GHZ (w = 1) bit j-1 is coordinate j. The
predicate of a repeated game is the conjunction of the base rule over all
coordinates.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from multiprocessing.pool import ThreadPool
from typing import Callable

import numpy as np

from .conf import resolve
from .exceptions import DomainError, EmptyEventError, IncompleteStrategyError, SizeLimitError
from .f2linear import from_hex, to_hex
from .fourier import triple_count

logger = logging.getLogger(__name__)

GHZ_SUPPORT = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))


def ghz_rule(questions, answers) -> bool:
    """x1 v x2 v x3 = y1 + y2 + y3 (mod 2) on one coordinate."""
    return (questions[0] | questions[1] | questions[2]) == (answers[0] ^ answers[1] ^ answers[2])


@dataclass(frozen=True, eq=False)
class Game:
    players: int
    rounds: int
    question_bits: int
    answer_bits: int
    support: tuple
    probabilities: tuple
    rule: Callable
    name: str = 'game'

    def __post_init__(self):
        if len(self.support) != len(self.probabilities):
            raise DomainError('support and probabilities differ in length')
        if len(set(self.support)) != len(self.support):
            raise DomainError('support entries must be distinct')
        if sum(self.probabilities, Fraction(0)) != 1:
            raise DomainError(f"probabilities of {self.name} do not sum to 1")
        if any(len(query) != self.players for query in self.support):
            raise DomainError(f"every query of {self.name} needs {self.players} questions")

    @property
    def question_mask(self) -> int:
        return (1 << self.question_bits) - 1

    @property
    def answer_mask(self) -> int:
        return (1 << self.answer_bits) - 1

    def question_coordinate(self, word: int, j: int) -> int:
        return (word >> ((j - 1) * self.question_bits)) & self.question_mask

    def answer_coordinate(self, word: int, j: int) -> int:
        return (word >> ((j - 1) * self.answer_bits)) & self.answer_mask

    def wins_coordinate(self, questions, answers, j: int) -> bool:
        return self.rule(
            tuple(self.question_coordinate(q, j) for q in questions),
            tuple(self.answer_coordinate(a, j) for a in answers),
        )

    def wins(self, questions, answers) -> bool:
        return all(self.wins_coordinate(questions, answers, j) for j in range(1, self.rounds + 1))

    def marginal(self, player: int) -> list:
        """Questions of ``player`` (0-based) occurring in the support, sorted."""
        return sorted({query[player] for query in self.support})

    def probability_of(self, query) -> Fraction:
        lookup = dict(zip(self.support, self.probabilities))
        return lookup.get(tuple(query), Fraction(0))


@dataclass(frozen=True)
class Strategy:
    """Deterministic product strategy: one question -> answer table per player."""
    tables: tuple

    @property
    def players(self) -> int:
        return len(self.tables)

    def answer(self, player: int, question: int) -> int:
        try:
            return self.tables[player][question]
        except KeyError:
            raise IncompleteStrategyError(player + 1, to_hex(question)) from None

    def answers(self, query) -> tuple:
        return tuple(self.answer(p, q) for p, q in enumerate(query))

    def to_json(self, n: int) -> dict:
        return {
            'n': n,
            'players': self.players,
            'strategy': {
                f"p{p + 1}": {to_hex(q): to_hex(a) for q, a in sorted(table.items())}
                for p, table in enumerate(self.tables)
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> 'Strategy':
        players = int(data.get('players', len(data['strategy'])))
        tables = []
        for p in range(players):
            raw = data['strategy'].get(f"p{p + 1}", {})
            tables.append({from_hex(q): from_hex(a) for q, a in raw.items()})
        return cls(tuple(tables))


class ProductEvent:
    """E = E1 x E2 x E3 with one bitset of length 2^n per player."""

    __slots__ = ('n', 'sets')

    def __init__(self, n: int, sets):
        sets = tuple(np.asarray(s, dtype=bool) for s in sets)
        if len(sets) != 3 or any(s.shape != (1 << n,) for s in sets):
            raise DomainError(f"a product event over F_2^{n} needs three bitsets of length {1 << n}")
        self.n = n
        self.sets = sets

    def __getitem__(self, i: int) -> np.ndarray:
        return self.sets[i]

    def __iter__(self):
        return iter(self.sets)

    def __eq__(self, other):
        if not isinstance(other, ProductEvent):
            return NotImplemented
        return self.n == other.n and all(np.array_equal(a, b) for a, b in zip(self.sets, other.sets))

    @classmethod
    def full(cls, n: int) -> 'ProductEvent':
        return cls(n, [np.ones(1 << n, dtype=bool)] * 3)

    @classmethod
    def from_members(cls, n: int, members) -> 'ProductEvent':
        sets = []
        for words in members:
            bitset = np.zeros(1 << n, dtype=bool)
            bitset[list(words)] = True
            sets.append(bitset)
        return cls(n, sets)

    def contains(self, query) -> bool:
        return all(bool(s[q]) for s, q in zip(self.sets, query))

    def support_count(self) -> int:
        """#{(x, y, x+y) in E}, the inputs of supp(Q^n) inside E."""
        return triple_count(*self.sets)

    def mass(self) -> Fraction:
        """alpha = P(E) under the n-fold GHZ distribution."""
        return Fraction(self.support_count(), 4 ** self.n)


def ghz() -> Game:
    quarter = Fraction(1, 4)
    return Game(3, 1, 1, 1, GHZ_SUPPORT, (quarter,) * 4, ghz_rule, name='GHZ')


def repeat(game: Game, n: int, support_cap=None) -> Game:
    """n-fold parallel repetition: Q^n and the conjunction of the rule."""
    if n < 1:
        raise DomainError('repetition needs n >= 1')
    support_cap = resolve(support_cap, 'SUPPORT_CAP')
    size = len(game.support) ** n
    if size > support_cap:
        raise SizeLimitError('repeated support', size, support_cap)
    width = game.question_bits * game.rounds
    support, probabilities = [], []
    for combo in itertools.product(range(len(game.support)), repeat=n):
        query = [0] * game.players
        weight = Fraction(1)
        for j, s in enumerate(combo):
            weight *= game.probabilities[s]
            for p in range(game.players):
                query[p] |= game.support[s][p] << (j * width)
        support.append(tuple(query))
        probabilities.append(weight)
    return Game(
        game.players, game.rounds * n, game.question_bits, game.answer_bits,
        tuple(support), tuple(probabilities), game.rule, name=f"{game.name}^{n}",
    )


def ghz_conditioned(n: int, points, support_cap=None) -> Game:
    """GHZ^n conditioned on a set of its support points, without building Q^n."""
    support_cap = resolve(support_cap, 'SUPPORT_CAP')
    points = tuple(dict.fromkeys(tuple(int(q) for q in point) for point in points))
    if not points:
        raise EmptyEventError('conditioning on an empty set of queries')
    if len(points) > support_cap:
        raise SizeLimitError('conditioned support', len(points), support_cap)
    for point in points:
        if point[0] ^ point[1] ^ point[2] or any(q >> n for q in point):
            raise DomainError(f"{tuple(map(to_hex, point))} is not in the support of GHZ^{n}")
    # Q^n is uniform on its support, so any conditioning of it is uniform.
    share = Fraction(1, len(points))
    return Game(3, n, 1, 1, points, (share,) * len(points), ghz_rule, name=f"GHZ^{n}|S")


def condition(game: Game, event) -> Game:
    """G | E for a ProductEvent or an explicit set of query tuples."""
    if isinstance(event, ProductEvent):
        keep = [event.contains(query) for query in game.support]
    else:
        chosen = {tuple(query) for query in event}
        keep = [query in chosen for query in game.support]
    mass = sum((p for p, k in zip(game.probabilities, keep) if k), Fraction(0))
    if mass == 0:
        raise EmptyEventError(f"event has probability 0 under {game.name}")
    support = tuple(q for q, k in zip(game.support, keep) if k)
    probabilities = tuple(p / mass for p, k in zip(game.probabilities, keep) if k)
    return Game(
        game.players, game.rounds, game.question_bits, game.answer_bits,
        support, probabilities, game.rule, name=f"{game.name}|E",
    )


def strategy_value(game: Game, strategy: Strategy) -> Fraction:
    total = Fraction(0)
    for query, weight in zip(game.support, game.probabilities):
        if game.wins(query, strategy.answers(query)):
            total += weight
    return total


def coordinate_success(game: Game, strategy: Strategy, j: int) -> Fraction:
    """Success probability of ``strategy`` counting coordinate j only."""
    total = Fraction(0)
    for query, weight in zip(game.support, game.probabilities):
        if game.wins_coordinate(query, strategy.answers(query), j):
            total += weight
    return total


def _strategy_rows(questions: int, alphabet: int) -> np.ndarray:
    """All answer-index tables in lexicographic order, first question most significant."""
    if questions == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(alphabet), repeat=questions)), dtype=np.int64)


def _decode(index: int, questions: int, alphabet: int) -> list:
    digits = []
    for _ in range(questions):
        index, digit = divmod(index, alphabet)
        digits.append(digit)
    return digits[::-1]


class _Search:
    """
    Exhaustive search over deterministic strategies restricted to the support.

    Players 1..k-2 are enumerated, player k-1 is vectorised and player k
    best-responds question by question. Taking the smallest best answer per
    question reproduces the lexicographically first maximiser of a full
    enumeration in which player 1 is most significant.
    """

    def __init__(self, game: Game, alphabets, wins, search_cap=None, threads=None):
        self.game = game
        self.alphabets = [list(a) for a in alphabets]
        self.k = game.players
        self.threads = max(1, resolve(threads, 'THREADS'))
        self.marginals = [game.marginal(p) for p in range(self.k)]
        search_cap = resolve(search_cap, 'SEARCH_CAP')
        self.count = prod(len(a) ** len(m) for a, m in zip(self.alphabets, self.marginals))
        if self.count > search_cap:
            raise SizeLimitError('strategy space', self.count, search_cap)

        index = [{q: i for i, q in enumerate(m)} for m in self.marginals]
        self.qidx = np.array(
            [[index[p][query[p]] for p in range(self.k)] for query in game.support], dtype=np.int64
        ).reshape(len(game.support), self.k)
        self.denominator = lcm(*(p.denominator for p in game.probabilities))
        weights = [int(p * self.denominator) for p in game.probabilities]

        shape = (len(game.support),) + tuple(len(a) for a in self.alphabets)
        self.win = np.zeros(shape, dtype=np.int64)
        for s, query in enumerate(game.support):
            for combo in itertools.product(*(range(len(a)) for a in self.alphabets)):
                answers = tuple(self.alphabets[p][combo[p]] for p in range(self.k))
                if wins(query, answers):
                    self.win[(s,) + combo] = weights[s]

        last = self.k - 1
        self.onehot = np.zeros((len(game.support), len(self.marginals[last])), dtype=np.int64)
        self.onehot[np.arange(len(game.support)), self.qidx[:, last]] = 1

    def _prefix_answers(self, r: int) -> list:
        """Per-player answer-index tables of prefix strategy r (players 0..k-3)."""
        tables = []
        radices = [len(self.alphabets[p]) ** len(self.marginals[p]) for p in range(self.k - 2)]
        digits = []
        for radix in reversed(radices):
            r, digit = divmod(r, radix)
            digits.append(digit)
        for p, digit in enumerate(reversed(digits)):
            tables.append(_decode(digit, len(self.marginals[p]), len(self.alphabets[p])))
        return tables

    def _scores(self, r: int, rows: np.ndarray):
        support = np.arange(len(self.game.support))
        prefix = self._prefix_answers(r)
        picks = tuple(np.array(prefix[p], dtype=np.int64)[self.qidx[:, p]] for p in range(self.k - 2))
        sliced = self.win[(support,) + picks]
        vec = self.k - 2
        gathered = sliced[support[None, :], rows[:, self.qidx[:, vec]], :]
        per_question = np.einsum('msa,sq->mqa', gathered, self.onehot)
        return per_question, prefix

    def _chunk(self, bounds):
        rows = self._rows
        best = None
        for r in range(*bounds):
            per_question, _ = self._scores(r, rows)
            totals = per_question.max(axis=2).sum(axis=1)
            m = int(np.argmax(totals))
            score = int(totals[m])
            if best is None or score > best[0]:
                best = (score, r, m)
        return best

    def run(self):
        game = self.game
        if self.k == 1:
            per_question = np.einsum('sa,sq->qa', self.win, self.onehot)
            choice = per_question.argmax(axis=1)
            score = int(per_question.max(axis=1).sum())
            table = {q: self.alphabets[0][int(choice[i])] for i, q in enumerate(self.marginals[0])}
            return Fraction(score, self.denominator), Strategy((table,))

        vec = self.k - 2
        self._rows = _strategy_rows(len(self.marginals[vec]), len(self.alphabets[vec]))
        prefixes = prod(len(self.alphabets[p]) ** len(self.marginals[p]) for p in range(self.k - 2))
        step = -(-prefixes // self.threads)
        chunks = [(lo, min(lo + step, prefixes)) for lo in range(0, prefixes, step)]
        logger.debug(f"Searching {self.count} strategy tuples of {game.name} in {len(chunks)} chunk(s)")
        if self.threads > 1 and len(chunks) > 1:
            with ThreadPool(self.threads) as pool:
                results = pool.map(self._chunk, chunks)
        else:
            results = [self._chunk(bounds) for bounds in chunks]
        score, r, m = min(results, key=lambda item: (-item[0], item[1], item[2]))

        per_question, prefix = self._scores(r, self._rows[m:m + 1])
        last_choice = per_question[0].argmax(axis=1)
        answer_indices = prefix + [list(self._rows[m]), list(last_choice)]
        tables = tuple(
            {q: self.alphabets[p][int(answer_indices[p][i])] for i, q in enumerate(self.marginals[p])}
            for p in range(self.k)
        )
        return Fraction(score, self.denominator), Strategy(tables)


def game_value(game: Game, search_cap=None, threads=None):
    """(val(G), witness) over deterministic strategies on the marginal supports."""
    alphabet = range(1 << (game.answer_bits * game.rounds))
    value, strategy = _Search(game, [alphabet] * game.players, game.wins, search_cap, threads).run()
    logger.info(f"val({game.name}) = {value}")
    return value, strategy


def coordinate_value(game: Game, j: int, search_cap=None, threads=None):
    """(val^(j)(G), witness); answers carry coordinate j only."""
    if not 1 <= j <= game.rounds:
        raise DomainError(f"coordinate {j} outside 1..{game.rounds}")
    offset = (j - 1) * game.answer_bits
    alphabet = [a << offset for a in range(1 << game.answer_bits)]

    def wins(questions, answers):
        return game.wins_coordinate(questions, answers, j)

    value, strategy = _Search(game, [alphabet] * game.players, wins, search_cap, threads).run()
    logger.debug(f"val^({j})({game.name}) = {value}")
    return value, strategy

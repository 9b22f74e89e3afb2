import json

from django.core.management.base import CommandError

from ghzlab.conf import lab_setting
from ghzlab.exceptions import SizeLimitError
from ghzlab.games import Strategy, game_value, ghz, repeat
from ghzlab.lab import conditioning_walk, random_strategy
from ghzlab.management.base import LabCommand


class Command(LabCommand):
    help = 'Conditioning walk bounding a strategy value by conditional win probabilities'
    command_name = 'walk'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)
        parser.add_argument('--strategy-file', help='Strategy JSON as written by the value command')
        parser.add_argument('--random', action='store_true', help='Walk a seeded random strategy')
        parser.add_argument('--c', help='Criterion constant c in (0, 1]')
        parser.add_argument('--rho', help='Mass threshold rho for the documented step schedule')
        parser.add_argument('--steps', type=int, help='Stop after this many coordinates')

    def execute_lab(self, options):
        config = self.build_config(options)
        if config.n > lab_setting('WALK_MAX_N'):
            raise CommandError(f"walk is limited to n <= {lab_setting('WALK_MAX_N')}")
        game = repeat(ghz(), config.n)
        if options.get('strategy_file'):
            with open(options['strategy_file'], encoding='utf-8') as handle:
                data = json.load(handle)
            strategy = Strategy.from_json(data.get('witness', data))
        elif options.get('random'):
            strategy = random_strategy(game, config.rng())
        else:
            try:
                strategy = game_value(game, threads=config.threads)[1]
            except SizeLimitError as exc:
                self.stdout.write(self.style.WARNING(f"{exc}; walking a seeded random strategy instead"))
                strategy = random_strategy(game, config.rng())
        transcript = conditioning_walk(
            game, strategy, c=options.get('c'), rho=options.get('rho'),
            steps=options.get('steps'), threads=config.threads,
        )
        report = transcript.to_json()
        report['passed'] = transcript.holds
        report['claims'] = {'walk': transcript.holds}
        self.emit(report, config, f"walk_n{config.n}")
        style = self.style.SUCCESS if transcript.holds else self.style.ERROR
        self.stdout.write(style(f"val = {transcript.value} <= product {transcript.product}"))

from ghzlab.games import game_value, ghz, repeat
from ghzlab.management.base import LabCommand


class Command(LabCommand):
    help = 'Exact value of GHZ^n by exhaustive search over deterministic strategies'
    command_name = 'value'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)

    def execute_lab(self, options):
        config = self.build_config(options)
        game = ghz() if config.n == 1 else repeat(ghz(), config.n)
        value, strategy = game_value(game, threads=config.threads)
        report = {'game': game.name, 'n': config.n, 'value': value, 'witness': strategy.to_json(config.n)}
        self.emit(report, config, f"value_n{config.n}")
        self.stdout.write(self.style.SUCCESS(f"val({game.name}) = {value}"))

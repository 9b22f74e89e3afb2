from ghzlab.decomposition import certify, decompose, history_to_json, partition_to_json
from ghzlab.lab import gen_event
from ghzlab.management.base import LabCommand


class Command(LabCommand):
    help = 'Affine partition of (F_2^n)^3 making every restricted event pseudorandom'
    command_name = 'decompose'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)
        parser.add_argument(
            '--only-failing',
            action='store_true',
            help='Split only the parts that fail the coefficient bound',
        )

    def execute_lab(self, options):
        config = self.build_config(options, only_failing=options.get('only_failing') or None)
        draw = gen_event(config)
        partition = decompose(draw.event, config.delta, config.split_all, threads=config.threads)
        rescan = certify(partition, draw.event, config.delta)
        report = {
            'n': config.n,
            'seed': config.seed,
            'delta': config.delta,
            'alpha': draw.alpha,
            'steps': partition.steps,
            'codim': partition.codim_bound,
            'failure': rescan['failure'],
            'passed': rescan['passed'],
            'claims': {'decomposition': rescan['passed']},
            'history': history_to_json(partition),
            'partition': partition_to_json(partition),
            'warnings': draw.warnings + rescan['warnings'],
        }
        self.emit(report, config, f"decompose_n{config.n}")
        style = self.style.SUCCESS if rescan['passed'] else self.style.ERROR
        self.stdout.write(style(
            f"{len(partition.parts)} parts after {partition.steps} step(s), failure mass {rescan['failure']}"
        ))

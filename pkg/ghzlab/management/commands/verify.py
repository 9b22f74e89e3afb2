from django.core.management.base import CommandError

from ghzlab.lab import verify_all
from ghzlab.management.base import LabCommand


class Command(LabCommand):
    help = 'Run every claim checker for n = 2..N; exits nonzero on any failure'
    command_name = 'verify'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)
        parser.add_argument('--trials', type=int, help='Random instances per n and sweep')
        parser.add_argument('--samples', type=int, help='Bow ties sampled per instance')
        parser.add_argument('--inject-fault', action='store_true', help='Perturb v on the first instance')

    def execute_lab(self, options):
        config = self.build_config(options, trials=options.get('trials'), samples=options.get('samples'))
        report = verify_all(config, inject_fault=options.get('inject_fault', False))
        self.emit(report, config, f"verify_n{config.n}_s{config.seed}")
        for claim, passed in report['claims'].items():
            style = self.style.SUCCESS if passed else self.style.ERROR
            self.stdout.write(style(f"{'✓' if passed else '✗'} {claim}"))
        if not report['passed']:
            raise CommandError(f"Verification failed: {', '.join(report['failed'])}")

from ghzlab.lab import run_pipeline
from ghzlab.management.base import LabCommand


class Command(LabCommand):
    help = 'Decompose an event and analyse bow ties on parts drawn from Pi(P|E)'
    command_name = 'bowtie'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)
        parser.add_argument('--parts', type=int, help='Parts drawn from Pi(P|E)')
        parser.add_argument('--samples', type=int, help='Bow ties sampled per part')

    def execute_lab(self, options):
        config = self.build_config(options, parts=options.get('parts'), samples=options.get('samples'))
        report = run_pipeline(config)
        claims = {}
        for row in report.get('rows', []):
            for claim, passed in row['claims'].items():
                claims[claim] = claims.get(claim, True) and bool(passed)
        report['claims'] = claims
        report['passed'] = all(claims.values())
        self.emit(report, config, f"bowtie_n{config.n}_s{config.seed}")
        if report['status'] == 'aborted':
            self.stdout.write(self.style.WARNING('Pipeline aborted: the event misses supp(P)'))
        elif 'aggregate' in report:
            self.stdout.write(self.style.SUCCESS(f"Aggregate coordinate value {report['aggregate']}"))

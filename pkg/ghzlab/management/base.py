"""
Shared plumbing for the lab commands: common flags, config validation,
report emission and optional persistence.
"""
import os

from django.core.management.base import BaseCommand, CommandError

from ghzlab.exceptions import GhzLabError
from ghzlab.forms import ExperimentConfigForm
from ghzlab.reports import dumps, record_run, write_report


class LabCommand(BaseCommand):
    command_name = None
    n_required = True

    def add_common_arguments(self, parser):
        parser.add_argument('--n', type=int, required=self.n_required, help='Number of coordinates')
        parser.add_argument('--delta', help='Coefficient threshold as a rational, e.g. 1/4')
        parser.add_argument('--alpha-floor', help='Warn when P(E) falls below this rational')
        parser.add_argument('--seed', type=int, help='Seed for every random choice of the run')
        parser.add_argument('--density', help='Random events with this density in (0, 1]')
        parser.add_argument('--event-file', help='JSON event file {"n", "E1", "E2", "E3"}')
        parser.add_argument('--affine', help='Affine events g1,g2,g3: E_i = {x : g_i . x = 0}')
        parser.add_argument('--cap-bowties', type=int, help='Largest bow-tie set enumerated exactly')
        parser.add_argument('--cap-edges', type=int, help='Largest |V|^2 edge grid a part may allocate')
        parser.add_argument('--threads', type=int, help='Worker threads (GHZLAB_THREADS overrides)')
        parser.add_argument('--out', help='Report path; defaults to the configured report directory')
        parser.add_argument('--record', action='store_true', help='Store the run in the database')

    def build_config(self, options, **extra):
        threads = os.getenv('GHZLAB_THREADS') or options.get('threads')
        data = {
            'n': options.get('n'),
            'delta': options.get('delta'),
            'alpha_floor': options.get('alpha_floor'),
            'seed': options.get('seed'),
            'density': options.get('density'),
            'event_file': options.get('event_file'),
            'affine': options.get('affine'),
            'bowtie_cap': options.get('cap_bowties'),
            'edge_cap': options.get('cap_edges'),
            'threads': threads,
            'out': options.get('out'),
        }
        data.update(extra)
        form = ExperimentConfigForm(data={k: v for k, v in data.items() if v is not None})
        if not form.is_valid():
            problems = '; '.join(
                f"{field}: {' '.join(errors)}" for field, errors in form.errors.items()
            )
            raise CommandError(f"Invalid options: {problems}")
        try:
            return form.to_config()
        except GhzLabError as exc:
            raise CommandError(str(exc)) from exc

    def emit(self, report, config, stem):
        if config.out:
            path = write_report(report, config.out, stem)
            self.stdout.write(self.style.SUCCESS(f"Report written to {path}"))
        else:
            path = None
            self.stdout.write(dumps(report))
        if self.record:
            run = record_run(self.command_name, config, report, path)
            self.stdout.write(self.style.SUCCESS(f"Recorded as run {run.pk}"))
        return path

    def execute_lab(self, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        self.record = options.get('record', False)
        try:
            self.execute_lab(options)
        except GhzLabError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}") from exc

from ghzlab.lab import dump_event, gen_event, save_event
from ghzlab.management.base import LabCommand
from ghzlab.reports import dumps, record_run


class Command(LabCommand):
    help = 'Generate a seeded product event and report its exact mass'
    command_name = 'gen-event'

    def add_arguments(self, parser):
        self.add_common_arguments(parser)

    def execute_lab(self, options):
        config = self.build_config(options)
        draw = gen_event(config)
        if config.out:
            save_event(draw.event, config.out)
            self.stdout.write(self.style.SUCCESS(f"Event written to {config.out}"))
        else:
            self.stdout.write(dumps(dump_event(draw.event)))
        style = self.style.WARNING if draw.warnings else self.style.SUCCESS
        self.stdout.write(style(f"alpha = {draw.alpha}"))
        if self.record:
            record_run(self.command_name, config, {'alpha': draw.alpha, 'warnings': draw.warnings})

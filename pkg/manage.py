#!/usr/bin/env python
"""Django's command-line utility for the GHZ lab."""
import os
import sys

# Subcommands are spelled with hyphens on the command line.
ALIASES = {
    'coord-value': 'coord_value',
    'gen-event': 'gen_event',
}


def main(argv=None):
    """Run lab and administrative tasks."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'lab_project.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1:
        argv[1] = ALIASES.get(argv[1], argv[1])
    execute_from_command_line(argv)


if __name__ == '__main__':
    main()

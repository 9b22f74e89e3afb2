"""Access to the GHZLAB block of the Django settings."""
from fractions import Fraction

from django.conf import settings

_DEFAULTS = {
    'MAX_N': 20,
    'ENUM_CAP': 2 ** 20,
    'SEARCH_CAP': 2 ** 25,
    'SUPPORT_CAP': 2 ** 16,
    'BOWTIE_CAP': 10 ** 7,
    'EDGE_CAP': 2 ** 20,
    'PART_CAP': 2 ** 15,
    'THREADS': 1,
    'SEED': 0,
    'WALK_BASE': 32,
    'WALK_C': '1/10',
    'WALK_MAX_N': 3,
    'REPORT_DIR': 'reports',
}


def lab_setting(name):
    """Return a lab knob, falling back to the built-in default."""
    configured = getattr(settings, 'GHZLAB', {})
    value = configured.get(name, _DEFAULTS[name])
    if name == 'WALK_C':
        return Fraction(value)
    return value


def resolve(value, name):
    """Explicit argument wins; ``None`` means "use the configured knob"."""
    return lab_setting(name) if value is None else value

# ghzlab/runner.py
from django.test.runner import DiscoverRunner


class LabTestRunner(DiscoverRunner):
    """Leaves the slow acceptance sweeps out unless ``--tag acceptance`` asks for them."""

    def __init__(self, *args, tags=None, exclude_tags=None, **kwargs):
        exclude_tags = set(exclude_tags or ())
        if 'acceptance' not in set(tags or ()):
            exclude_tags.add('acceptance')
        super().__init__(*args, tags=tags, exclude_tags=sorted(exclude_tags), **kwargs)

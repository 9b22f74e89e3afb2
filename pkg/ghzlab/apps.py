from django.apps import AppConfig


class GhzLabConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ghzlab'
    verbose_name = 'GHZ Parallel Repetition Lab'

    def ready(self):
        """
        Import signals when Django starts
        This ensures signal handlers are registered
        """
        import ghzlab.signals  # noqa

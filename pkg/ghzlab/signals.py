# ghzlab/signals.py
from django.db.models.signals import pre_save, post_save
from django.dispatch import receiver
from django.utils import timezone
from .models import ExperimentRun, ClaimCheck
import logging

logger = logging.getLogger(__name__)


@receiver(pre_save, sender=ExperimentRun)
def stamp_finished_run(sender, instance, **kwargs):
    """Set finished_at the first time a run leaves the pending state."""
    if instance.status != 'pending' and not instance.finished_at:
        instance.finished_at = timezone.now()


@receiver(post_save, sender=ClaimCheck)
def fail_run_on_failed_claim(sender, instance, created, **kwargs):
    """A single failing claim marks its run failed."""
    if not created or instance.passed:
        return
    run = instance.run
    if run.status != 'failed':
        logger.warning(f"Claim {instance.claim} failed; marking run {run.pk} as failed")
        run.status = 'failed'
        run.save(update_fields=['status', 'finished_at'])

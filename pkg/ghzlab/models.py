from django.db import models
from django.db.models import Index


class ExperimentRun(models.Model):
    """One invocation of a lab command and its report"""

    COMMAND_CHOICES = [
        ('value', 'Game value'),
        ('coord-value', 'Coordinate value'),
        ('decompose', 'Decomposition'),
        ('bowtie', 'Bow-tie pipeline'),
        ('walk', 'Conditioning walk'),
        ('verify', 'Verification sweep'),
        ('gen-event', 'Event generation'),
    ]

    STATUS_CHOICES = [
        ('pending', 'Pending'),
        ('passed', 'Passed'),
        ('failed', 'Failed'),
        ('partial', 'Partial'),
        ('aborted', 'Aborted'),
    ]

    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    n = models.PositiveSmallIntegerField()
    seed = models.BigIntegerField(default=0)
    delta = models.CharField(max_length=64, blank=True, help_text="Rational as num/den")
    status = models.CharField(max_length=10, choices=STATUS_CHOICES, default='pending', db_index=True)
    report = models.JSONField(default=dict, blank=True)
    report_path = models.CharField(max_length=500, blank=True)

    created_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    def __str__(self):
        return f"{self.get_command_display()} n={self.n} seed={self.seed} ({self.get_status_display()})"

    class Meta:
        verbose_name = "Experiment Run"
        verbose_name_plural = "Experiment Runs"
        ordering = ['-created_at']
        indexes = [
            Index(fields=['command', '-created_at'], name='idx_command_created'),
            Index(fields=['n', 'seed'], name='idx_n_seed'),
        ]


class ClaimCheck(models.Model):
    """Outcome of one claim checker inside a run"""
    run = models.ForeignKey(ExperimentRun, on_delete=models.CASCADE, related_name='checks')
    claim = models.CharField(max_length=40)
    passed = models.BooleanField(default=False)
    detail = models.JSONField(default=dict, blank=True)
    checked_at = models.DateTimeField(auto_now_add=True)

    def __str__(self):
        return f"{self.claim}: {'pass' if self.passed else 'FAIL'} (run {self.run_id})"

    class Meta:
        verbose_name = "Claim Check"
        verbose_name_plural = "Claim Checks"
        ordering = ['run', 'claim']
        indexes = [
            Index(fields=['run', 'claim'], name='idx_run_claim'),
            Index(fields=['passed'], name='idx_passed'),
        ]

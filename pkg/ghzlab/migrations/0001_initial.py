# Generated by Django 5.2.7 on 2026-10-18 09:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('value', 'Game value'), ('coord-value', 'Coordinate value'), ('decompose', 'Decomposition'), ('bowtie', 'Bow-tie pipeline'), ('walk', 'Conditioning walk'), ('verify', 'Verification sweep'), ('gen-event', 'Event generation')], max_length=20)),
                ('n', models.PositiveSmallIntegerField()),
                ('seed', models.BigIntegerField(default=0)),
                ('delta', models.CharField(blank=True, help_text='Rational as num/den', max_length=64)),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('passed', 'Passed'), ('failed', 'Failed'), ('partial', 'Partial'), ('aborted', 'Aborted')], db_index=True, default='pending', max_length=10)),
                ('report', models.JSONField(blank=True, default=dict)),
                ('report_path', models.CharField(blank=True, max_length=500)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'verbose_name': 'Experiment Run',
                'verbose_name_plural': 'Experiment Runs',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', '-created_at'], name='idx_command_created'), models.Index(fields=['n', 'seed'], name='idx_n_seed')],
            },
        ),
        migrations.CreateModel(
            name='ClaimCheck',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('claim', models.CharField(max_length=40)),
                ('passed', models.BooleanField(default=False)),
                ('detail', models.JSONField(blank=True, default=dict)),
                ('checked_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='checks', to='ghzlab.experimentrun')),
            ],
            options={
                'verbose_name': 'Claim Check',
                'verbose_name_plural': 'Claim Checks',
                'ordering': ['run', 'claim'],
                'indexes': [models.Index(fields=['run', 'claim'], name='idx_run_claim'), models.Index(fields=['passed'], name='idx_passed')],
            },
        ),
    ]

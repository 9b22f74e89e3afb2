# ghzlab/reports.py
"""Report serialisation (JSON and CSV) and run persistence."""
import csv
import json
import logging
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.db import transaction

from .conf import resolve
from .exact import fraction_text
from .models import ClaimCheck, ExperimentRun

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'part', 'shifts', 'codim', 'good', 'edges', 'bowtie_count', 'l1', 'l2sq',
    'beta', 'tv', 'hard_fraction', 'aggregate', 'claims',
]


def to_jsonable(value):
    """Rationals become "num/den", words stay as given, numpy scalars become Python numbers."""
    if isinstance(value, Fraction):
        return fraction_text(value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    if hasattr(value, 'to_json'):
        return to_jsonable(value.to_json())
    raise TypeError(f"cannot serialise {type(value).__name__}")


def dumps(report) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def _csv_cell(value):
    value = to_jsonable(value)
    if isinstance(value, dict):
        return ';'.join(f"{k}={v}" for k, v in sorted(value.items()))
    if isinstance(value, list):
        return ' '.join(str(v) for v in value)
    return '' if value is None else value


def write_rows(rows, path):
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_csv_cell(row.get(column)) for column in CSV_COLUMNS])


def write_report(report, out=None, stem='report') -> Path:
    """
    Write ``report`` as JSON to ``out`` (or REPORT_DIR/<stem>.json). Per-part
    rows, when present, go to a sibling CSV.
    """
    path = Path(out) if out else Path(resolve(None, 'REPORT_DIR')) / f"{stem}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding='utf-8')
    if report.get('rows'):
        write_rows(report['rows'], path.with_suffix('.csv'))
    logger.info(f"Report written to {path}")
    return path


def record_run(command, config, report, path=None) -> ExperimentRun:
    """Persist a run with one ClaimCheck per claim outcome."""
    if report.get('status') in ('aborted', 'partial'):
        status = report['status']
    else:
        status = 'passed' if report.get('passed', True) else 'failed'
    with transaction.atomic():
        run = ExperimentRun.objects.create(
            command=command,
            n=config.n,
            seed=config.seed,
            delta=fraction_text(config.delta),
            report=to_jsonable({k: v for k, v in report.items() if k != 'details'}),
            report_path=str(path or ''),
        )
        for claim, passed in sorted(report.get('claims', {}).items()):
            ClaimCheck.objects.create(run=run, claim=claim, passed=bool(passed))
        run.refresh_from_db()
        if run.status == 'pending':
            run.status = status
            run.save()
    logger.info(f"Recorded run {run.pk}: {run}")
    return run

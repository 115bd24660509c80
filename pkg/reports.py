"""
Report and angle-file I/O. JSON reports carry no timestamps so a command
rerun with the same arguments and seed writes identical bytes.
"""
import csv
import io
import json
import logging
import math
from pathlib import Path

import numpy as np

from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        # JSON has no inf/nan literals
        return str(value)
    if isinstance(value, AngleVector):
        return value.as_dict()
    return value


def build_report(command, run_config, result, schema_version=1):
    return {
        'schema_version': schema_version,
        'command': command,
        'run_config': _jsonable(run_config),
        'result': _jsonable(result),
    }


def dumps_report(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f'Wrote {path}')


def rows_to_csv(header, rows):
    """
    Render rows as CSV text with a header line.

    Args:
        header: column names
        rows: iterables of values in header order

    Returns:
        CSV text with newline line endings
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def write_samples_csv(path, values):
    write_text(path, rows_to_csv(['sample_index', 'value'], enumerate(values)))


def trace_to_csv(trace):
    return rows_to_csv(
        ['restart', 'iterations', 'evaluations', 'final_value'],
        ((e.restart, e.iterations, e.evaluations, e.value) for e in trace),
    )


def read_angles(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParameterError(f'Cannot read angle file {path}: {e}')
    if not isinstance(data, dict):
        raise InvalidParameterError(f'Angle file {path} must hold a JSON object')
    return AngleVector.from_dict(data)


def write_angles(path, angles):
    write_text(path, json.dumps(angles.as_dict(), sort_keys=True, indent=2) + '\n')


def parse_angle_list(text):
    """Parse "b1,...,bp;g1,...,gp" into an AngleVector."""
    try:
        betas, gammas = text.split(';')
        return AngleVector(
            tuple(float(x) for x in betas.split(',')),
            tuple(float(x) for x in gammas.split(',')),
        )
    except ValueError as e:
        raise InvalidParameterError(f'Cannot parse angles "{text}", expected "b1,...,bp;g1,...,gp": {e}')


def parse_numbers(text, option, count=None):
    """Parse a comma-separated list of floats given to a command option."""
    try:
        values = [float(x) for x in text.split(',')]
    except ValueError as e:
        raise InvalidParameterError(f'{option} must be comma-separated numbers: {e}')
    if count is not None and len(values) != count:
        raise InvalidParameterError(f'{option} needs {count} numbers, got {len(values)}')
    return values

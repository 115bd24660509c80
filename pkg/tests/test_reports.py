import json
import math

import numpy as np
import pytest

from superapp.apps.qaoa_limits.angle_tools import TraceEntry
from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.reports import (
    build_report,
    dumps_report,
    parse_angle_list,
    parse_numbers,
    read_angles,
    rows_to_csv,
    trace_to_csv,
    write_angles,
    write_samples_csv,
)


class TestReport:
    def test_layout(self):
        report = build_report('mc', {'n': 8}, {'mean': np.float64(-0.25), 'samples': np.arange(3)})
        assert report == {
            'schema_version': 1,
            'command': 'mc',
            'run_config': {'n': 8},
            'result': {'mean': -0.25, 'samples': [0, 1, 2]},
        }

    def test_non_finite_values_become_strings(self):
        text = dumps_report(build_report('mc', {}, {'bound': math.inf, 'mean': math.nan}))
        data = json.loads(text)
        assert data['result'] == {'bound': 'inf', 'mean': 'nan'}

    def test_angle_vectors_are_serialized(self):
        report = build_report('simulate', {'angles': AngleVector((0.1,), (0.2,))}, {})
        assert report['run_config']['angles'] == {'p': 1, 'betas': [0.1], 'gammas': [0.2]}

    def test_stable_text(self):
        first = dumps_report(build_report('predict', {'b': 1, 'a': 2}, {'z': [1.5]}))
        second = dumps_report(build_report('predict', {'a': 2, 'b': 1}, {'z': [1.5]}))
        assert first == second
        assert first.endswith('\n')


class TestCsv:
    def test_floats_keep_full_precision(self):
        text = rows_to_csv(['x', 'y'], [[1, 0.1 + 0.2]])
        assert text == 'x,y\n1,0.30000000000000004\n'

    def test_trace(self):
        text = trace_to_csv([TraceEntry(0, -0.5, 10, 20), TraceEntry(1, -0.25, 5, 9)])
        assert text.splitlines() == ['restart,iterations,evaluations,final_value', '0,10,20,-0.5', '1,5,9,-0.25']

    def test_samples_file(self, tmp_path):
        path = tmp_path / 'out' / 'samples.csv'
        write_samples_csv(path, np.array([0.5, -1.0]))
        assert path.read_text(encoding='utf-8') == 'sample_index,value\n0,0.5\n1,-1.0\n'


class TestAngleFiles:
    def test_round_trip(self, tmp_path):
        angles = AngleVector((-0.5, 0.25), (1.5, 0.75))
        path = tmp_path / 'angles.json'
        write_angles(path, angles)
        assert read_angles(path) == angles

    def test_rejects_non_object(self, tmp_path):
        path = tmp_path / 'angles.json'
        path.write_text('[1, 2]', encoding='utf-8')
        with pytest.raises(InvalidParameterError):
            read_angles(path)

    def test_rejects_invalid_json(self, tmp_path):
        path = tmp_path / 'angles.json'
        path.write_text('{', encoding='utf-8')
        with pytest.raises(InvalidParameterError):
            read_angles(path)

    def test_parse_angle_list(self):
        assert parse_angle_list('0.1,0.2;0.3,0.4') == AngleVector((0.1, 0.2), (0.3, 0.4))

    @pytest.mark.parametrize('text', ['0.1,0.2', '0.1;x', '0.1;0.2;0.3', ';'])
    def test_parse_angle_list_rejects_bad_text(self, text):
        with pytest.raises(InvalidParameterError):
            parse_angle_list(text)


class TestParseNumbers:
    def test_comma_list(self):
        assert parse_numbers('4, 9.5,0', '--q-degrees') == [4.0, 9.5, 0.0]

    @pytest.mark.parametrize('text, count', [('4,x', None), ('4', 2), ('1,2,3', 2)])
    def test_rejects_bad_lists(self, text, count):
        with pytest.raises(InvalidParameterError):
            parse_numbers(text, '--q-degrees', count=count)

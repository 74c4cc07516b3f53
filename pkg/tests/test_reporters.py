import io
import json
import os
import tempfile
from fractions import Fraction
from unittest import TestCase
from unittest.mock import MagicMock

import numpy as np

from psbeatty import BaseReporter
from psbeatty.exactreal import parse_real
from psbeatty.reporters import (CsvReporter, JsonReporter, MultiReporter,
                                StreamReporter, dumps, dumps_csv,
                                scalar_table, write_atomic)


def report(command='crtable', **result):
    return {'schema': 'psbeatty.report.v1', 'command': command,
            'config': {'rmin': 13}, 'result': result}


def error(command='count psprimes'):
    return {'schema': 'psbeatty.report.v1', 'command': command,
            'config': {'x': '10'},
            'error': {'type': 'InvariantViolation', 'message': 'mismatch'}}


class MultiReporterTestCase(TestCase):

    def setUp(self):
        self.mock_reporter = MagicMock(spec=BaseReporter)
        self.multi_reporter = MultiReporter([self.mock_reporter])

    def test_close(self):
        self.multi_reporter.close()
        self.mock_reporter.close.assert_called_once_with()

    def test_on_rows(self):
        rows = [{'R': 13, 'c_R': '1236/1229'}]
        self.multi_reporter.on_rows('crtable', ['R', 'c_R'], rows)
        self.mock_reporter.on_rows.assert_called_once_with(
            'crtable', ['R', 'c_R'], rows)

    def test_on_report(self):
        document = report(count=3)
        self.multi_reporter.on_report(document)
        self.mock_reporter.on_report.assert_called_once_with(document)

    def test_on_error(self):
        document = error()
        self.multi_reporter.on_error(document)
        self.mock_reporter.on_error.assert_called_once_with(document)


class SerialisationTestCase(TestCase):

    def test_numeric_types(self):
        document = {
            'b': np.int64(7), 'a': np.float64(0.5), 'c': np.bool_(True),
            'd': np.arange(3), 'e': Fraction(1, 3), 'f': 1 + 2j,
            'g': {3, 1}, 'h': parse_real('sqrt(2)'),
        }
        decoded = json.loads(dumps(document))
        self.assertEqual(decoded, {
            'a': 0.5, 'b': 7, 'c': True, 'd': [0, 1, 2], 'e': '1/3',
            'f': [1.0, 2.0], 'g': [1, 3], 'h': str(parse_real('sqrt(2)')),
        })

    def test_keys_are_sorted(self):
        text = dumps({'b': 1, 'a': 2})
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertTrue(text.endswith('\n'))
        self.assertEqual(dumps({'b': 1, 'a': 2}), dumps({'a': 2, 'b': 1}))

    def test_unknown_type(self):
        with self.assertRaises(TypeError):
            dumps({'x': object()})

    def test_csv(self):
        text = dumps_csv(['n', 'value', 'extra'],
                         [{'n': 1, 'value': np.float64(0.25)},
                          {'n': 2, 'value': 1.5, 'extra': [1, 2]}])
        self.assertEqual(text.splitlines(), [
            'n,value,extra', '1,0.25,', '2,1.5,"[1, 2]"'])

    def test_scalar_table(self):
        columns, rows = scalar_table(report(count=3, rows=[1, 2], ok=True))
        self.assertEqual(columns, ['count', 'ok'])
        self.assertEqual(rows[0]['count'], 3)
        self.assertEqual(scalar_table({'result': 5}),
                         (['result'], [{'result': 5}]))


class FileReporterTestCase(TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)

    def path(self, name):
        return os.path.join(self.directory.name, name)

    def test_write_atomic_leaves_no_temporary_files(self):
        path = self.path('out.txt')
        write_atomic(path, 'one\n')
        write_atomic(path, 'two\n')
        with open(path) as f:
            self.assertEqual(f.read(), 'two\n')
        self.assertEqual(os.listdir(self.directory.name), ['out.txt'])

    def test_json_single_report(self):
        reporter = JsonReporter(self.path('report.json'))
        reporter.on_report(report(count=3))
        reporter.close()
        with open(self.path('report.json')) as f:
            self.assertEqual(json.load(f), report(count=3))

    def test_json_suite(self):
        reporter = JsonReporter(self.path('report.json'))
        reporter.on_report(report(count=1))
        reporter.on_report(report(count=2))
        reporter.on_error(error())
        with open(self.path('report.json')) as f:
            documents = json.load(f)
        self.assertEqual([document.get('result') for document in documents],
                         [{'count': 1}, {'count': 2}, None])

    def test_json_keeps_leading_errors(self):
        reporter = JsonReporter(self.path('report.json'))
        reporter.on_error(error('dioph type'))
        self.assertFalse(os.path.exists(self.path('report.json')))
        reporter.on_report(report('crtable', count=1))
        reporter.on_report(report('sieve scan', count=2))
        with open(self.path('report.json')) as f:
            documents = json.load(f)
        self.assertEqual([document['command'] for document in documents],
                         ['dioph type', 'crtable', 'sieve scan'])
        self.assertEqual(documents[0]['error']['type'], 'InvariantViolation')

    def test_json_single_error_leaves_file_alone(self):
        path = self.path('report.json')
        write_atomic(path, 'previous\n')
        reporter = JsonReporter(path)
        reporter.on_error(error())
        reporter.close()
        with open(path) as f:
            self.assertEqual(f.read(), 'previous\n')

    def test_csv_rows(self):
        reporter = CsvReporter(self.path('table.csv'))
        reporter.on_rows('crtable', ['R', 'c_R_4dp'],
                         [{'R': 13, 'c_R_4dp': '1.0056'},
                          {'R': 14, 'c_R_4dp': '1.0113'}])
        reporter.on_report(report())
        with open(self.path('table.csv')) as f:
            self.assertEqual(f.read(), 'R,c_R_4dp\n13,1.0056\n14,1.0113\n')

    def test_csv_keeps_last_table(self):
        reporter = CsvReporter(self.path('table.csv'))
        reporter.on_rows('crtable', ['R'], [{'R': 13}])
        reporter.on_report(report())
        reporter.on_rows('seq ps', ['n', 'term'], [{'n': 1, 'term': 1}])
        reporter.on_report(report('seq ps'))
        with open(self.path('table.csv')) as f:
            self.assertEqual(f.read(), 'n,term\n1,1\n')

    def test_csv_scalar_fallback(self):
        reporter = CsvReporter(self.path('table.csv'))
        reporter.on_report(report(count=3, ratio=0.5))
        with open(self.path('table.csv')) as f:
            self.assertEqual(f.read(), 'count,ratio\n3,0.5\n')


class StreamReporterTestCase(TestCase):

    def test_json(self):
        stream = io.StringIO()
        reporter = StreamReporter(stream)
        reporter.on_report(report(count=3))
        self.assertEqual(json.loads(stream.getvalue()), report(count=3))

    def test_csv_errors_stay_json(self):
        stream = io.StringIO()
        reporter = StreamReporter(stream, fmt='csv')
        reporter.on_rows('crtable', ['R'], [{'R': 13}])
        reporter.on_error(error())
        self.assertEqual(json.loads(stream.getvalue())['error']['type'],
                         'InvariantViolation')

    def test_csv_table(self):
        stream = io.StringIO()
        reporter = StreamReporter(stream, fmt='csv')
        reporter.on_rows('crtable', ['R'], [{'R': 13}, {'R': 14}])
        reporter.on_report(report())
        self.assertEqual(stream.getvalue(), 'R\n13\n14\n')

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            StreamReporter(fmt='xml')

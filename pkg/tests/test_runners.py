import os
import tempfile
from unittest import mock

from psbeatty.constants import ENV_THREADS
from psbeatty.reporters import dumps
from psbeatty.runners.pool_runner import PoolRunner, split_range, worker_count
from psbeatty.runners.suite_runner import DEFAULT_SUITE, SuiteRunner
from psbeatty.utils.testcases import BaseTestCase, RecordingReporter


def segment_sum(start, end):
    return sum(range(start, end + 1))


class SuiteRunnerTestCase(BaseTestCase):

    def test_fixture_suite(self):
        reporter = RecordingReporter()
        runner = SuiteRunner(self.fixture_path('suite.json'), reporter)
        documents = runner.run()
        self.assertEqual([document['command'] for document in documents],
                         ['crtable', 'dioph cf', 'vaaler check', 'srinivasan',
                          'sieve admissible'])
        self.assertFalse(runner.failed)
        self.assertEqual(reporter.reports, documents)
        self.assertEqual(documents[1]['result']['period'],
                         {'preperiod': 1, 'block': (1, 2)})

    def test_seed_makes_runs_identical(self):
        first = SuiteRunner([self.fixture_path('suite.json')],
                            RecordingReporter(), seed=7).run()
        second = SuiteRunner([self.fixture_path('suite.json')],
                             RecordingReporter(), seed=7).run()
        self.assertEqual(dumps(first), dumps(second))

    def test_failures_do_not_stop_the_suite(self):
        reporter = RecordingReporter()
        runner = SuiteRunner(self.fixture_path('failing_suite.json'),
                             reporter)
        documents = runner.run()
        self.assertEqual(len(documents), 2)
        self.assertTrue(runner.failed)
        self.assertEqual(len(reporter.errors), 1)
        self.assertEqual(len(reporter.reports), 1)

    def test_default_suite(self):
        reporter = RecordingReporter()
        runner = SuiteRunner(None, reporter)
        documents = runner.run()
        self.assertEqual(len(documents), len(DEFAULT_SUITE))
        self.assertFalse(runner.failed, [d for d in documents if 'error' in d])

    def test_bad_input(self):
        with self.assertRaises(TypeError):
            SuiteRunner(5, RecordingReporter())
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'suite.json')
            with open(path, 'w') as f:
                f.write('{"command": "crtable"}')
            with self.assertRaises(ValueError):
                SuiteRunner(path, RecordingReporter()).run()


class PoolRunnerTestCase(BaseTestCase):

    def test_split_range(self):
        self.assertEqual(split_range(1, 10, 3), [(1, 4), (5, 7), (8, 10)])
        self.assertEqual(split_range(5, 6, 10), [(5, 5), (6, 6)])
        self.assertEqual(split_range(5, 4, 3), [])

    def test_results_do_not_depend_on_workers(self):
        serial = PoolRunner(workers=1).map_range(segment_sum, 1, 1000, 7)
        pooled = PoolRunner(workers=2).map_range(segment_sum, 1, 1000, 7)
        self.assertEqual(serial, pooled)
        self.assertEqual(sum(serial), 500500)

    def test_worker_count(self):
        with mock.patch.dict(os.environ, {ENV_THREADS: '3'}):
            self.assertEqual(worker_count(), 3)
            self.assertEqual(PoolRunner().workers, 3)
        with mock.patch.dict(os.environ, {ENV_THREADS: '0'}):
            with self.assertRaises(ValueError):
                worker_count()
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(worker_count(default=5), 5)

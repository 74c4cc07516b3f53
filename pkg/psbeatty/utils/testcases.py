import json
import os
from unittest import TestCase

from ..reporters import BaseReporter

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(
    os.path.dirname(os.path.abspath(__file__)))), 'tests', 'fixtures')


class RecordingReporter(BaseReporter):
    """
    Keeps every rows table, report and error it receives.
    """
    def __init__(self):
        self.tables = []
        self.reports = []
        self.errors = []
        self.closed = False

    def close(self):
        self.closed = True

    def on_rows(self, command, columns, rows):
        self.tables.append((command, list(columns), list(rows)))

    def on_report(self, document):
        self.reports.append(document)

    def on_error(self, document):
        self.errors.append(document)


class BaseTestCase(TestCase):
    """
    BaseTestCase that has methods to open and parse json fixtures.
    """

    def open_file(self, filename, *args, **kwargs):
        """
        Open a fixture. Additional arguments are passed to open().

        Args:
            filename (str): File to open (relative to tests/fixtures).
        """
        return open(os.path.join(FIXTURES, filename), *args, **kwargs)

    def fixture_path(self, filename):
        return os.path.join(FIXTURES, filename)

    def load_fixture(self, filename):
        """
        Load a json fixture.

        Args:
            filename (str): File to open (relative to tests/fixtures).

        Returns:
            The decoded JSON contents.
        """
        with self.open_file(filename, 'r') as f:
            return json.load(f)

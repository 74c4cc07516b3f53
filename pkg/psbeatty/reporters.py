import csv
import io
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from .exactreal import CertifiedReal


def _to_jsonable(value):
    """
    json.dumps() fallback for the numeric types psbeatty reports carry.
    """
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (Fraction, CertifiedReal)):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError('Object of type {} is not JSON serializable'.format(
        type(value).__name__))


def dumps(document):
    """
    Serialise a report document.

    Keys are sorted, so equal documents always give identical text.
    """
    return json.dumps(document, sort_keys=True, indent=2,
                      default=_to_jsonable) + '\n'


def _csv_cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, default=_to_jsonable)
    if value is None or isinstance(value, (str, bool, int)):
        return value
    return _to_jsonable(value)


def dumps_csv(columns, rows):
    """
    Serialise a table as CSV with a header line.

    Args:
        columns (list): Column names.
        rows (list): Dicts keyed by column name; missing cells stay empty.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def scalar_table(document):
    """
    The scalar fields of a report's result as a one-row table.
    """
    result = document.get('result')
    if not isinstance(result, dict):
        return ['result'], [{'result': result}]
    columns = sorted(key for key, value in result.items()
                     if not isinstance(value, (dict, list)))
    return columns, [result]


def write_atomic(path, text):
    """
    Write text to path through a temporary file in the same directory.

    Readers see either the old file or the complete new one.
    """
    directory = os.path.dirname(os.path.abspath(path))
    handle, temporary = tempfile.mkstemp(
        dir=directory, prefix='.{}.'.format(os.path.basename(path)),
        suffix='.tmp')
    try:
        with os.fdopen(handle, 'w', newline='') as f:
            f.write(text)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise


class BaseReporter(object):
    def close(self):
        """
        Called on end, so any buffered output can be flushed.
        """
        pass

    def on_rows(self, command, columns, rows):
        """
        Gets invoked with the tabular part of a result, before on_report.

        Commands whose result is naturally a table (a sequence prefix, a
        per-d scan, the c_R table) hand it over here so that columnar
        reporters can write it unchanged.

        Args:
            command (str): The command name, e.g. 'sieve scan'.
            columns (list): Column names, in order.
            rows (list): One dict per row.
        """
        pass

    def on_report(self, document):
        """
        Gets invoked when a command completed.

        Args:
            document (dict): The report: schema, command, config, result.
        """
        pass

    def on_error(self, document):
        """
        Gets invoked when a command failed with a psbeatty error.

        Args:
            document (dict): schema, command, config and the error with its
                type and message.
        """
        pass


class LoggingReporter(BaseReporter):
    """
    LoggingReporter is a simple base reporter which logs all reports to the
    provided Logger instance.
    """
    def __init__(self, logger=None):
        """
        Create a logger for this reporter.

        Args:
            logger (Logger): An optional logger instance.
        """
        self._logger = logger or logging.getLogger(__name__)

    def on_rows(self, command, columns, rows):
        self._logger.debug('{}: {} rows of {}'.format(
            command, len(rows), ', '.join(columns)))

    def on_report(self, document):
        self._logger.info('{} done: {}'.format(
            document['command'], document.get('config')))

    def on_error(self, document):
        error = document['error']
        self._logger.warning('{} failed: {}: {}'.format(
            document['command'], error['type'], error['message']))


class MultiReporter(LoggingReporter):
    """
    MultiReporter is a reporter which combines multiple reporters and
    forwards received reports to all of them.
    """
    def __init__(self, reporters, logger=None):
        """
        Create a multi reporter with the given reporters.

        Args:
            reporters (list): An iterable with reporters.
            logger (Logger): Used for the reporter's own log lines.
        """
        super(MultiReporter, self).__init__(logger=logger)

        self.reporters = reporters

    def close(self):
        super(MultiReporter, self).close()

        for reporter in self.reporters:
            reporter.close()

    def on_rows(self, command, columns, rows):
        super(MultiReporter, self).on_rows(command, columns, rows)

        for reporter in self.reporters:
            reporter.on_rows(command, columns, rows)

    def on_report(self, document):
        super(MultiReporter, self).on_report(document)

        for reporter in self.reporters:
            reporter.on_report(document)

    def on_error(self, document):
        super(MultiReporter, self).on_error(document)

        for reporter in self.reporters:
            reporter.on_error(document)


class JsonReporter(BaseReporter):
    """
    Writes every report to a JSON file, replacing it atomically.

    When several commands run through one reporter (a suite), the file
    holds the list of their reports and error documents, rewritten after
    each one. Nothing is written until some command succeeds, so a
    single failed command leaves an existing file alone.
    """
    def __init__(self, path, logger=None):
        self.path = path
        self.documents = []
        self._logger = logger or logging.getLogger(__name__)

    def on_report(self, document):
        self.documents.append(document)
        self._write()

    def on_error(self, document):
        self.documents.append(document)
        if self._succeeded:
            self._write()

    @property
    def _succeeded(self):
        return any('error' not in document for document in self.documents)

    def _write(self):
        if len(self.documents) == 1:
            payload = self.documents[0]
        else:
            payload = self.documents
        write_atomic(self.path, dumps(payload))
        self._logger.info('Wrote report to {}'.format(self.path))


class CsvReporter(BaseReporter):
    """
    Writes the tabular part of the latest report to a CSV file.

    Reports without rows are written as a single row of their scalar
    result fields. Every report replaces the file, so for a suite it holds
    the table of the last command only; use the JSON format to keep all
    of them.
    """
    def __init__(self, path, logger=None):
        self.path = path
        self._table = None
        self._logger = logger or logging.getLogger(__name__)

    def on_rows(self, command, columns, rows):
        self._table = (list(columns), list(rows))

    def on_report(self, document):
        columns, rows = self._table or scalar_table(document)
        self._table = None
        write_atomic(self.path, dumps_csv(columns, rows))
        self._logger.info('Wrote {} rows to {}'.format(len(rows), self.path))


class StreamReporter(BaseReporter):
    """
    Prints reports to a stream, stdout by default.

    Errors are printed as JSON in either format, so that callers always
    get a machine-readable error body.
    """
    FORMATS = ('json', 'csv')

    def __init__(self, stream=None, fmt='json'):
        if fmt not in self.FORMATS:
            raise ValueError('Unknown format {!r}, expected one of {}'.format(
                fmt, ', '.join(self.FORMATS)))
        self.stream = stream
        self.fmt = fmt
        self._table = None

    @property
    def _out(self):
        return self.stream if self.stream is not None else sys.stdout

    def close(self):
        self._out.flush()

    def on_rows(self, command, columns, rows):
        self._table = (list(columns), list(rows))

    def on_report(self, document):
        if self.fmt == 'csv':
            columns, rows = self._table or scalar_table(document)
            self._out.write(dumps_csv(columns, rows))
        else:
            self._out.write(dumps(document))
        self._table = None

    def on_error(self, document):
        self._table = None
        self._out.write(dumps(document))

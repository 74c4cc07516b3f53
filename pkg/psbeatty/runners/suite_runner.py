"""
Implement a Runner which reads suite files, instantiates a CommandHandler
and calls the CommandHandler accordingly.

A suite is a ``.json`` file which holds a list of command records::

    [{"command": "crtable", "args": {"rmin": 13, "rmax": 21}},
     {"command": "vaaler check", "args": {"H": 16}}]

Randomised commands without their own seed use the runner's seed, so a
suite replayed with the same seed produces identical reports.
"""
from json import load

from ..handlers import CommandHandler

# The suite run when no file is given: every desk-scale check once.
DEFAULT_SUITE = [
    {'command': 'crtable', 'args': {'rmin': 13, 'rmax': 21}},
    {'command': 'sieve admissible', 'args': {'R': 13, 'gamma': '0.997'}},
    {'command': 'dioph cf', 'args': {'x': 'sqrt(2)', 'k': 20}},
    {'command': 'dioph type', 'args': {'x': '(1+sqrt(5))/2', 'n': 10 ** 5}},
    {'command': 'vaaler check', 'args': {'H': 16, 'grid': 2000,
                                         'adversarial': 200}},
    {'command': 'srinivasan', 'args': {'count': 100}},
    {'command': 'expsum hbcheck', 'args': {'nmax': 300}},
    {'command': 'expsum deriv', 'args': {'count': 10}},
    {'command': 'count psprimes', 'args': {'c': '5/4', 'x': 10 ** 4}},
    {'command': 'count beattyprimes', 'args': {'alpha': 'sqrt(2)',
                                               'x': 10 ** 4}},
    {'command': 'sieve scan', 'args': {'x': 10 ** 4, 'c': '3/2', 'D': 10}},
]


class SuiteRunner(object):
    def __init__(self, files, reporter, handler_class=CommandHandler,
                 seed=0, runner=None):
        """
        SuiteRunner is a Runner that reads command records from one or more
        files.

        Args:
            files (list): A list of strings containing filenames, a string
                containing a filename, or None for the built-in suite.
            reporter (Reporter): The reporter to use for this Runner.
            handler_class: The CommandHandler to instantiate for this
                Runner.
            seed (int): Seed for commands without one of their own.
            runner (PoolRunner): Passed on to the command handler.
        """
        if files is None:
            self.files = []
        elif type(files) == str:
            self.files = [files]
        elif type(files) == list:
            self.files = files
        else:
            raise TypeError('Expected string, list or None for files '
                            'argument')
        self.reporter = reporter
        self.handler_class = handler_class
        self.seed = seed
        self.runner = runner
        self.documents = []

    def _load_records_from_disk(self, filename):
        """
        Read the file with the given file name and return the JSON contents.

        Args:
            filename (str): The name of the file to read.

        Returns:
            list: The command records.
        """
        with open(filename, 'r') as f:
            records = load(f)
        if not isinstance(records, list):
            raise ValueError('Suite {} must hold a list of command '
                             'records'.format(filename))
        return records

    def suites(self):
        """
        The record lists to run, one per file.
        """
        if not self.files:
            return [DEFAULT_SUITE]
        return [self._load_records_from_disk(filename)
                for filename in self.files]

    def run(self):
        """
        Run every record of every suite through a fresh command handler.

        Returns:
            list: The report and error documents, in order.
        """
        for records in self.suites():
            handler = self.handler_class(reporter=self.reporter,
                                         seed=self.seed, runner=self.runner)
            for record in records:
                document = handler.on_command(record['command'],
                                              record.get('args', {}))
                self.documents.append(document)
        return self.documents

    @property
    def failed(self):
        """
        Whether any command of the run reported an error.
        """
        return any('error' in document for document in self.documents)

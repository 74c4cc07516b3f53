from unittest import TestCase

from psbeatty.constants import C_VDC, REPORT_SCHEMA
from psbeatty.handlers import CommandHandler, UnknownCommand
from psbeatty.reporters import dumps
from psbeatty.utils.testcases import RecordingReporter


class CommandHandlerTestCase(TestCase):

    def setUp(self):
        self.reporter = RecordingReporter()
        self.handler = CommandHandler(self.reporter)

    def run_command(self, name, **args):
        document = self.handler.on_command(name, args)
        self.assertEqual(document['schema'], REPORT_SCHEMA)
        self.assertEqual(document['command'], name)
        return document

    def test_crtable(self):
        document = self.run_command('crtable', rmin=13, rmax=21)
        self.assertEqual(len(document['result']['rows']), 9)
        self.assertEqual(document['config'], {'rmin': 13, 'rmax': 21})
        command, columns, rows = self.reporter.tables[0]
        self.assertEqual(command, 'crtable')
        self.assertEqual(columns[:3], ['R', 'c_R', 'c_R_4dp'])
        self.assertEqual(rows[-1]['c_R_4dp'], '1.0367')
        self.assertEqual(self.reporter.reports, [document])

    def test_sequences(self):
        document = self.run_command('seq beatty', alpha='sqrt(2)', n=10)
        self.assertEqual(list(document['result']['terms']),
                         [1, 2, 4, 5, 7, 8, 9, 11, 12, 14])
        document = self.run_command('seq beatty', mmax=10)
        self.assertEqual(document['result']['members'], 7)
        document = self.run_command('seq ps', c='3/2', n=5)
        self.assertEqual(list(document['result']['terms']), [1, 2, 5, 8, 11])
        self.assertEqual(len(self.reporter.tables), 3)

    def test_counts(self):
        document = self.run_command('count psprimes', c='5/4', x='1e4')
        result = document['result']
        self.assertEqual(result['count'], result['generator_count'])
        document = self.run_command('count beattyprimes', x='1e4')
        self.assertEqual(document['result']['pi_x'], 1229)
        self.assertLess(document['result']['deviation'], 0.05)

    def test_dioph(self):
        document = self.run_command('dioph cf', x='sqrt(2)', k=5)
        self.assertEqual(document['result']['partial_quotients'],
                         (1, 2, 2, 2, 2))
        self.assertEqual(document['result']['period'],
                         {'preperiod': 1, 'block': (2,)})
        document = self.run_command('dioph type', x='(1+sqrt(5))/2',
                                    n=10 ** 5, closure=True)
        self.assertLessEqual(document['result']['tau_hat'], 1.2)
        self.assertIn('1/x', document['result']['closure'])

    def test_vaaler_and_srinivasan(self):
        document = self.run_command('vaaler check', H=4, grid=500,
                                    adversarial=50)
        self.assertEqual(document['result']['violations'], 0)
        self.assertEqual(document['config']['seed'], 0)
        document = self.run_command('srinivasan', A='1:2', B='64:1')
        self.assertAlmostEqual(document['result']['bound'], 17.64)
        self.assertTrue(document['result']['ok'])
        document = self.run_command('srinivasan', count=20)
        self.assertEqual(document['result']['cases'], 20)
        self.assertLessEqual(document['result']['max_ratio'], 1.0)

    def test_seeded_commands_repeat(self):
        first = CommandHandler(RecordingReporter(), seed=7).on_command(
            'vaaler check', {'H': 8, 'grid': 100, 'adversarial': 100})
        second = CommandHandler(RecordingReporter(), seed=7).on_command(
            'vaaler check', {'H': 8, 'grid': 100, 'adversarial': 100})
        self.assertEqual(dumps(first), dumps(second))

    def test_expsum(self):
        document = self.run_command('expsum eval', hi=1000, j=1,
                                    gamma='0.5')
        self.assertIn('bound', document['result'])
        self.assertLess(document['result']['bound']['ratio'], 1.0)
        document = self.run_command('expsum eval', hi=1000, j=0)
        self.assertNotIn('bound', document['result'])
        document = self.run_command('expsum hbcheck', nmax=60)
        self.assertEqual(document['result']['failures'], [])
        document = self.run_command(
            'expsum compare',
            specs=[{'lo': 500, 'hi': 1000, 'j': 1, 'gamma': 0.6},
                   {'lo': 1000, 'hi': 2000, 'j': 2, 'd': 3, 'gamma': 0.9}])
        self.assertEqual(document['config']['specs'], 2)
        self.assertEqual(len(self.reporter.tables[-1][2]), 2)
        document = self.run_command('expsum deriv', count=5)
        self.assertEqual(document['result']['count'], 5)
        self.assertLessEqual(document['result']['max_ratio2'], C_VDC)
        self.assertLessEqual(document['result']['max_ratio3'], C_VDC)
        document = self.run_command('expsum index', N=500)
        self.assertLessEqual(document['result']['lhs'],
                             document['result']['rhs'])

    def test_sieve(self):
        document = self.run_command('sieve scan', x='1e4', c='3/2', D=5)
        self.assertEqual(len(document['result']['per_d']), 5)
        self.assertNotIn('config', document['result'])
        self.assertEqual(document['config']['D'], 5)
        command, columns, rows = self.reporter.tables[-1]
        self.assertEqual(command, 'sieve scan')
        self.assertIn('count_dual', columns)
        document = self.run_command('sieve theorem', x='1e4', c='3/2')
        self.assertGreater(document['result']['count'], 0)
        document = self.run_command('sieve admissible', R=13, gamma='0.997')
        self.assertTrue(document['result']['sieve_ok'])

    def test_domain_errors_are_reported(self):
        document = self.handler.on_command('dioph type', {'x': '3/7'})
        self.assertEqual(document['error']['type'], 'RationalInput')
        self.assertEqual(document['config'], {'x': '3/7'})
        self.assertEqual(self.reporter.errors, [document])
        self.assertEqual(self.reporter.reports, [])

    def test_invalid_arguments_raise(self):
        with self.assertRaises(ValueError):
            self.handler.on_command('seq beatty', {'alpha': '1'})
        with self.assertRaises(UnknownCommand):
            self.handler.on_command('seq fibonacci')
        with self.assertRaises(KeyError):
            self.handler.on_command('seq fibonacci')

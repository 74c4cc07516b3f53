from .handlers import CommandHandler
from .reporters import (BaseReporter, CsvReporter, JsonReporter,
                        LoggingReporter, MultiReporter, StreamReporter)
from .runners.pool_runner import PoolRunner
from .runners.suite_runner import SuiteRunner
from .seq import BeattyParams, PSParams
from .sievelab import ExperimentConfig

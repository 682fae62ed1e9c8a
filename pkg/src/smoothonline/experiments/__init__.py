from .registry import ExperimentSpec, Expectation, ResultRow, run_suite, suite
from .tables import TABLES, Table, make_table

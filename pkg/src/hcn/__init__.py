"""Exact computation of Hurwitz class numbers, their moments in arithmetic
progressions, quadratic Gauss sums and q-series, plus a harness that checks the
closed formulas for these moments against brute force."""

from .arith import kronecker_symbol
from .hurwitz import HurwitzTable, build_table, hurwitz, read_table, write_table
from .moments import (
    closed_second_m3,
    closed_second_primepower,
    closed_zeroth_m3,
    g_bracket,
    moment_brute,
)
from .qseries import PrecisionError, QSeries
from .verify import CheckReport, run_check, run_suite

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "HurwitzTable",
    "PrecisionError",
    "QSeries",
    "build_table",
    "closed_second_m3",
    "closed_second_primepower",
    "closed_zeroth_m3",
    "g_bracket",
    "hurwitz",
    "kronecker_symbol",
    "moment_brute",
    "read_table",
    "run_check",
    "run_suite",
    "write_table",
]

"""Number-theoretic and numerical kernels shared by the analysis modules."""

from .classnum import class_number, class_number_table
from .dims import DimSplit, dim_split, dim_splits, genus_x0
from .poisson import (
    poisson_cdf,
    poisson_logcdf,
    poisson_logpmf,
    poisson_logsf,
    poisson_pmf,
    poisson_sf,
)
from .poly import BigPoly
from .primes import RANGE_HI, RANGE_LO, PrimeTable, is_prime, prime_table, range_primes, sieve
from .special import log_integral

__all__ = [
    "BigPoly",
    "DimSplit",
    "PrimeTable",
    "RANGE_HI",
    "RANGE_LO",
    "class_number",
    "class_number_table",
    "dim_split",
    "dim_splits",
    "genus_x0",
    "is_prime",
    "log_integral",
    "poisson_cdf",
    "poisson_logcdf",
    "poisson_logpmf",
    "poisson_logsf",
    "poisson_pmf",
    "poisson_sf",
    "prime_table",
    "range_primes",
    "sieve",
]

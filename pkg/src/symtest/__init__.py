"""Tests of symmetry about zero built on extremal order statistics."""

from .distributions import (
    CAUCHY,
    FAMILIES,
    LOGISTIC,
    NORMAL,
    UNIFORM,
    DistributionFamily,
    fisher_information,
    get_family,
    sample_location,
)
from .efficiency import (
    SlopeReport,
    efficiency_table,
    equivalence_check_k3,
    integral_slope_coefficient,
    kolmogorov_slope_coefficient,
    projection_integral,
    sigma2_exact,
    variance_function,
    variance_function_max,
)
from .nulldist import DecisionRecord, NullTable, p_value, power_curve, run_test, simulate_null
from .stats import (
    StatValue,
    brute_force_statistic,
    compute_D,
    compute_I,
    compute_statistic,
    read_sample,
)

__version__ = "0.1.0"

"""k-colored generalized Frobenius partition numbers and Ramanujan-type congruences."""

__version__ = "0.1.0"

from .errors import UsageError
from .qseries import EXACT, CoeffRing, QSeries, partition_series, qs_add, qs_mul, qs_pow, qs_reduce
from .ctengine import (
    ZWindowSeries,
    build_base_product,
    constant_term,
    window_bounds,
    z_coefficient,
    zw_mul,
)
from .cphi import CphiTable, Method, cphi_direct, cphi_mod_descent, cphi_theta, cphi_unpruned
from .congruence import (
    CompositeCongruence,
    CongruenceFamily,
    Verdict,
    crt_combine,
    lift_family,
    search,
    verify_composite,
    verify_dissection_ingredients,
    verify_family,
    verify_single,
)

"""Numerics for Dunkl kernels of finite reflection groups.

The package computes the joint eigenfunction kernel of the rational
differential-difference operators attached to the sign-change groups
``Z2^N`` and the dihedral groups ``I2(m)``, and reproduces its chamber
asymptotics: the constant limit vector of the normalized oscillatory
field, the right-half-plane limit, the short-time Gaussian behavior of
the associated heat kernel, and ball-average continuity diagnostics for
the representing measures of the intertwining operator.
"""

from .curves import BentCurve, ComplexRay, Ray, certify_admissible
from .errors import (AdmissibilityError, ConditionError, ConfigError,
                     DunklError, NumericError, SeriesRegimeError)
from .groups import (ChamberSpec, ReflectionGroup, RootSystem,
                     chamber_interior_point, chamber_representative,
                     chamber_test, dominant_pairing_check, gamma_index,
                     generate_group, group_descriptor, is_regular,
                     make_root_system, mehta_constant,
                     root_system_from_descriptor, unit_weight,
                     validate_root_system, weight)
from .polyops import (IntertwiningMatrix, MultiPoly, commutativity_residual,
                      dunkl_apply, eigen_residual, intertwining_matrix,
                      kernel_series, kernel_series_detail)
from .specfun import (bessel_j_norm, gamma_fn, kummer_1f1, rank1_density,
                      rank1_kernel, rank1_v, si_ci)
from .asymptotics import (AsymptoticsReport, ExtractOptions, InvarianceReport,
                          WintnerReport, bound_probe, complex_ray_limit,
                          extract_v, field_F, integrate_F, invariance_suite,
                          limit_constant_e, matrix_A, matrix_A_tilde,
                          wintner_check)
from .heat import (HeatQuery, WienerScan, continuity_slope, free_heat_kernel,
                   heat_kernel, log_heat_kernel, product_decomposition_check,
                   rank1_measure_cdf, shorttime_ratio, shorttime_ratio_detail,
                   wiener_average, wiener_scan)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

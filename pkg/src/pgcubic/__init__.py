"""Global existence test, exact evolution and blow-up analysis for cubic Hele-Shaw maps."""

from .criterion import (ClassificationResult, SupResult, Tag, boundary_curve, classify, g1, g2,
                        h_value, in_set_A, sup_h, tau_double_star, tau_star)
from .evolution import (BlowUpReport, CuspReport, Trajectory, blow_up, continue_after_blowup,
                        cusp_report, evolve, sample_at_times, tau_of_time, time_of_tau,
                        trajectory_scan)
from .exceptions import (ClassificationError, ConfigurationError, DegenerateDegreeError,
                         DomainError, NumericalError, PGCubicError, PreconditionError,
                         SingularParametrizationError)
from .poly_core import (CubicMap, LambdaPoint, MomentData, coefficients_from_moments,
                        from_lambda, lambda_from_moments, lambda_map, moments, normalize_rotation)
from .region import (RegionVerdict, in_local_region, local_univalence_oracle,
                     univalence_oracle)

__all__ = [
    "ClassificationResult", "SupResult", "Tag", "boundary_curve", "classify", "g1", "g2",
    "h_value", "in_set_A", "sup_h", "tau_double_star", "tau_star", "BlowUpReport", "CuspReport",
    "Trajectory", "blow_up", "continue_after_blowup", "cusp_report", "evolve", "sample_at_times",
    "tau_of_time", "time_of_tau", "trajectory_scan", "ClassificationError", "ConfigurationError",
    "DegenerateDegreeError", "DomainError", "NumericalError", "PGCubicError", "PreconditionError",
    "SingularParametrizationError", "CubicMap", "LambdaPoint", "MomentData",
    "coefficients_from_moments", "from_lambda", "lambda_from_moments", "lambda_map", "moments",
    "normalize_rotation", "RegionVerdict", "in_local_region", "local_univalence_oracle",
    "univalence_oracle",
]

__version__ = "0.1.0"

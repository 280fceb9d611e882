"""Entanglement degradation of a static detector pair coupled to a field.

Layered API: scenario configuration (model), 4x4 matrix kernel (linalg),
two-point field correlators (wightman), the correlation integrals
(integrals), second-order density matrices (density), and the
entanglement measures with their leakage rates (entanglement).  The
command-line front end lives in cli.
"""

from .density import DensityMatrix4, evolved_density, initial_density
from .entanglement import (BranchViolation, EntanglementReport, analyze,
                           concurrence_closed, concurrence_numeric,
                           leakage_rates, negativity_numeric,
                           pt_eigenvalues_closed)
from .integrals import (IntegralSet, NotDistributional,
                        QuadratureNonConvergence, QuadratureSettings,
                        RegulatedValue, eternal_integral_set,
                        gaussian_integral_set, oracle_quadrature, rate)
from .model import (ETERNAL, GAUSSIAN, ConfigError, DetectorPairConfig,
                    FieldSpec, InitialState, SwitchingSpec, UnitSystem,
                    ValidatedScenario, bell_state, validate_config)
from .wightman import (PositionKernel, RegulatorTooSmall, bessel_k1,
                       switching_fourier, wightman_mode_sum,
                       wightman_position)

__all__ = [
    "ETERNAL", "GAUSSIAN",
    "BranchViolation", "ConfigError", "DensityMatrix4",
    "DetectorPairConfig", "EntanglementReport", "FieldSpec",
    "InitialState", "IntegralSet", "NotDistributional", "PositionKernel",
    "QuadratureNonConvergence", "QuadratureSettings", "RegulatedValue",
    "RegulatorTooSmall", "SwitchingSpec", "UnitSystem",
    "ValidatedScenario", "analyze", "bell_state", "bessel_k1",
    "concurrence_closed", "concurrence_numeric", "eternal_integral_set",
    "evolved_density", "gaussian_integral_set", "initial_density",
    "leakage_rates", "negativity_numeric", "oracle_quadrature",
    "pt_eigenvalues_closed", "rate", "switching_fourier",
    "validate_config", "wightman_mode_sum", "wightman_position",
]

__version__ = "0.1.0"

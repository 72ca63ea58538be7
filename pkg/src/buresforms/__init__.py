"""Exterior calculus on the Bures-metric chart of qutrit density matrices."""

from .connection import curvature, sylvester_solve, uhlmann_connection
from .duality import FourFormSolution, is_pm_equal, solve_dual_form
from .errors import (BuresFormsError, CalibrationError, DegenerateDualityError,
                     DegenerateStateError, DegreeOverflowError, InvalidGramError,
                     InvalidIndexError, InvalidMetricError, PatternError,
                     PinConventionError, PoleError, SolverError, StencilError)
from .exterior import PForm, hodge_star, levi_civita_sign, star_matrix, wedge
from .metric import MetricTensor, TwoFormGram, bures_metric, fit_aij, gram_on_two_forms
from .spectral import (COMPONENT_SPECTRAL_SCALE, SpectrumReport, build_endomorphism,
                       cayley_calibration, cluster_multiplicities, eigen_spectrum,
                       singlet_octet_polynomials, verify_radical_identity)
from .state import (CALIBRATED_SEQUENCE, DensityMatrix, GeneratorSequence, PointCoords,
                    SpectralFrame, calibrate_parameterization, density_from_angles,
                    eigenvalues_from_angles, gell_mann, rho_partials)
from .sweeps import (SweepResult, SweepSpec, closed_form, coefficient_sweep,
                     cross_point_spectrum, spectrum_under_sweep)

__version__ = "0.1.0"

__all__ = [
    "curvature",
    "sylvester_solve",
    "uhlmann_connection",
    "FourFormSolution",
    "is_pm_equal",
    "solve_dual_form",
    "BuresFormsError",
    "CalibrationError",
    "DegenerateDualityError",
    "DegenerateStateError",
    "DegreeOverflowError",
    "InvalidGramError",
    "InvalidIndexError",
    "InvalidMetricError",
    "PatternError",
    "PinConventionError",
    "PoleError",
    "SolverError",
    "StencilError",
    "PForm",
    "hodge_star",
    "levi_civita_sign",
    "star_matrix",
    "wedge",
    "MetricTensor",
    "TwoFormGram",
    "bures_metric",
    "fit_aij",
    "gram_on_two_forms",
    "COMPONENT_SPECTRAL_SCALE",
    "SpectrumReport",
    "build_endomorphism",
    "cayley_calibration",
    "cluster_multiplicities",
    "eigen_spectrum",
    "singlet_octet_polynomials",
    "verify_radical_identity",
    "CALIBRATED_SEQUENCE",
    "DensityMatrix",
    "GeneratorSequence",
    "PointCoords",
    "SpectralFrame",
    "calibrate_parameterization",
    "density_from_angles",
    "eigenvalues_from_angles",
    "gell_mann",
    "rho_partials",
    "SweepResult",
    "SweepSpec",
    "closed_form",
    "coefficient_sweep",
    "cross_point_spectrum",
    "spectrum_under_sweep",
]

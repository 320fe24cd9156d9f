"""Radiation-thermometry error correction toolkit for industrial furnaces.

Forward measurement models, inverse temperature solving, sensitivity and
uncertainty budgeting, a neural surrogate for fast inversion, and a
monitoring service with per-pixel correction and ROI analytics.
"""

from .constants import CONSTANTS, PhysicalConstants, celsius_to_kelvin, kelvin_to_celsius
from .errors import (BracketError, ConvergenceError, DomainError,
                     FrameFileError, ModelFileError, NotFoundError,
                     RadthermError, TrainingError)
from .inversion import (DEFAULT_SOLVER, InversionResult, SolverConfig,
                        invert_batch, invert_signal)
from .models import (FurnaceScene, ModelKind, SignalDecomposition, decompose,
                     forward_signal)
from .planck import planck_radiance
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_band
from .sensitivity import (ParameterSpec, SweepResult, UncertaintyBudget,
                          combine_budget, emit_sweep_report,
                          perturbation_sweep, uncertainty_for_parameter)
from .spectral import Band, DEFAULT_BAND, SpectralCurve
from .surrogate import (LabeledDataset, MlpModel, TrainConfig, bench,
                        generate_dataset, load_model, predict, save_model,
                        train)

__version__ = "0.1.0"

__all__ = [
    "Band", "BracketError", "CONSTANTS", "ConvergenceError",
    "DEFAULT_BAND", "DEFAULT_QUADRATURE", "DEFAULT_SOLVER", "DomainError",
    "FrameFileError", "FurnaceScene", "InversionResult", "LabeledDataset",
    "MlpModel", "ModelFileError", "ModelKind", "NotFoundError",
    "ParameterSpec", "PhysicalConstants", "QuadratureConfig", "RadthermError",
    "SignalDecomposition", "SolverConfig", "SpectralCurve", "SweepResult",
    "TrainConfig", "TrainingError", "UncertaintyBudget", "bench",
    "celsius_to_kelvin", "combine_budget", "decompose", "emit_sweep_report",
    "forward_signal", "generate_dataset", "integrate_band", "invert_batch",
    "invert_signal", "kelvin_to_celsius", "load_model", "planck_radiance",
    "predict", "perturbation_sweep", "save_model", "train",
    "uncertainty_for_parameter",
]

"""Reconstruction of planar convex bodies from covariogram and
(squared-)modulus Fourier-transform measurements."""

from .bodies import (
    check_in_box,
    ellipse_polygon,
    pentagon,
    random_polygon,
    regular_polygon,
    square,
)
from .covariogram import SampleGrid, covariogram_at, covariogram_grid, covariogram_many
from .errors import (
    BodyOutOfBoxError,
    ConfigurationError,
    CovreconError,
    DegenerateInputError,
    InfeasibleMeasureError,
    ReconstructionFailureError,
    ShapeError,
)
from .geometry import (
    Polygon,
    blaschke_body,
    brightness,
    difference_body,
    hausdorff_distance,
    minkowski_reconstruct,
    perimeter,
    support_function,
    surface_area_measure,
)
from .measurement import (
    MeasurementSet,
    equally_spaced_directions,
    gen_cov_blaschke,
    gen_cov_grid,
    gen_mod2,
    gen_mod_pair,
)
from .pipelines import (
    PipelineConfig,
    ReconstructionReport,
    convergence_experiment,
    median_errors,
    run_problem1,
    run_problem2,
    run_problem3,
)
from .randstream import NoiseModel
from .spectral import (
    FrequencyGrid,
    indicator_ft,
    squared_modulus,
    synthesis_residual,
    synthesize_partial_sum,
)

__all__ = [
    "BodyOutOfBoxError",
    "ConfigurationError",
    "CovreconError",
    "DegenerateInputError",
    "FrequencyGrid",
    "InfeasibleMeasureError",
    "MeasurementSet",
    "NoiseModel",
    "PipelineConfig",
    "Polygon",
    "ReconstructionFailureError",
    "ReconstructionReport",
    "SampleGrid",
    "ShapeError",
    "blaschke_body",
    "brightness",
    "check_in_box",
    "convergence_experiment",
    "covariogram_at",
    "covariogram_grid",
    "covariogram_many",
    "difference_body",
    "ellipse_polygon",
    "equally_spaced_directions",
    "gen_cov_blaschke",
    "gen_cov_grid",
    "gen_mod2",
    "gen_mod_pair",
    "hausdorff_distance",
    "indicator_ft",
    "median_errors",
    "minkowski_reconstruct",
    "pentagon",
    "perimeter",
    "random_polygon",
    "regular_polygon",
    "run_problem1",
    "run_problem2",
    "run_problem3",
    "square",
    "squared_modulus",
    "support_function",
    "surface_area_measure",
    "synthesis_residual",
    "synthesize_partial_sum",
    "__version__",
]

__version__ = "0.1.0"

"""Data models for phases, mobilities, tensions, grids and runs.

Import models from here for easy access.
"""

from src.models.errors import (
    ConfigInvalidError,
    DimensionMismatchError,
    FrequencyOutOfRangeError,
    IndexOutOfRangeError,
    MobiflowError,
    NonFiniteFieldError,
    NotAdditiveError,
    ShapeOverlapWarning,
    SizeMismatchError,
)
from src.models.grid import ScalarField, SpectralGrid
from src.models.mobility import (
    HarmonicComponent,
    HarmonicDecomposition,
    MobilitySet,
    ValidationReport,
)
from src.models.phase_state import PhaseState
from src.models.run_config import ConfigReport, RunConfig
from src.models.shape import Ball, Complement, HalfSpace, Intersection, RasterLabel, Shape, Union
from src.models.solver_params import DecompositionMode, SolverParams
from src.models.tension import TensionSet
from src.models.time_series import DiagnosticRow, TimeSeries

__all__ = [
    'MobiflowError',
    'NotAdditiveError',
    'DimensionMismatchError',
    'SizeMismatchError',
    'FrequencyOutOfRangeError',
    'IndexOutOfRangeError',
    'NonFiniteFieldError',
    'ConfigInvalidError',
    'ShapeOverlapWarning',
    'SpectralGrid',
    'ScalarField',
    'MobilitySet',
    'HarmonicComponent',
    'HarmonicDecomposition',
    'ValidationReport',
    'TensionSet',
    'PhaseState',
    'SolverParams',
    'DecompositionMode',
    'Shape',
    'Ball',
    'HalfSpace',
    'Union',
    'Intersection',
    'Complement',
    'RasterLabel',
    'DiagnosticRow',
    'TimeSeries',
    'RunConfig',
    'ConfigReport',
]

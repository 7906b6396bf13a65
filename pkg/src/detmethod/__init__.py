"""Exact desk-scale experiments with the determinant method on hypersurfaces."""

from .heights import ProjPoint
from .poly import Form
from .varieties import Hypersurface, enumerate_points
from .jets import empirical_I, filtration_profile, graded_piece
from .slopes import slope_F_D
from .pipeline import ExperimentConfig, find_auxiliary_form, run_experiment

__all__ = [
    "ProjPoint", "Form", "Hypersurface", "enumerate_points", "empirical_I",
    "filtration_profile", "graded_piece", "slope_F_D", "ExperimentConfig",
    "find_auxiliary_form", "run_experiment",
]

__version__ = "0.1.0"

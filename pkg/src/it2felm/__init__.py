"""Interval type-2 fuzzy ELM classifiers, controllers and tank simulator."""

from .membership import (
    AntecedentGrid,
    FiringInterval,
    IT2GaussianMF,
    TriangularMF,
    eval_it2_gaussian,
    eval_triangular,
    firing_interval,
    random_init_antecedents,
)
from .reduction import (
    ConvergenceError,
    NoRuleFiredError,
    TypeReducedSet,
    brute_force_reduce,
    defuzz,
    km_reduce,
    sc_reduce,
    wu_mendel_bounds,
)
from .inference import ScoreWindow, TSKIT2Model, load_model, save_model
from .estimators import (
    ELMClassifier,
    IT2FELMClassifier,
    T1FELMClassifier,
    pseudoinverse_solve,
)
from .evaluate import ConfusionMatrix, confusion_matrix, cross_validate, stratified_folds
from .control import (
    FPDConfig,
    FPDState,
    behavior_error,
    controller_step,
    heading_reference,
)
from .tank import TankGeometry, SonarScan, simulate_sonar
from .vehicle import Commands, KinematicsConfig, VehicleState, step_vehicle
from .mission import MissionConfig, MissionLog, coordinate_behaviors, run_mission
from .datagen import Dataset, generate_dataset, load_dataset_csv, save_dataset_csv

__version__ = "0.1.0"

__all__ = [
    "AntecedentGrid",
    "FiringInterval",
    "IT2GaussianMF",
    "TriangularMF",
    "eval_it2_gaussian",
    "eval_triangular",
    "firing_interval",
    "random_init_antecedents",
    "ConvergenceError",
    "NoRuleFiredError",
    "TypeReducedSet",
    "brute_force_reduce",
    "defuzz",
    "km_reduce",
    "sc_reduce",
    "wu_mendel_bounds",
    "ScoreWindow",
    "TSKIT2Model",
    "load_model",
    "save_model",
    "ELMClassifier",
    "IT2FELMClassifier",
    "T1FELMClassifier",
    "pseudoinverse_solve",
    "ConfusionMatrix",
    "confusion_matrix",
    "cross_validate",
    "stratified_folds",
    "FPDConfig",
    "FPDState",
    "behavior_error",
    "controller_step",
    "heading_reference",
    "TankGeometry",
    "SonarScan",
    "simulate_sonar",
    "Commands",
    "KinematicsConfig",
    "VehicleState",
    "step_vehicle",
    "MissionConfig",
    "MissionLog",
    "coordinate_behaviors",
    "run_mission",
    "Dataset",
    "generate_dataset",
    "load_dataset_csv",
    "save_dataset_csv",
    "__version__",
]

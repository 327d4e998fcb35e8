"""
DICE2013R as a discrete-time optimal control problem: forward simulation,
adjoint welfare gradients, bound-constrained optimization of the
mitigation and savings paths, and the social cost of carbon.
"""

from .dynamics import DICE2013R_INITIAL_STATE, InfeasibleEvaluation, State, StepOutput, step
from .exogenous import ExogenousPath, build_exogenous
from .optimizer import OptimizerConfig, OptimResult, maximize, optimize, project
from .params import BoundSchedule, ModelParams, bound_schedule, build_params, derive_carbon_matrix
from .sensitivity import MarginalSet, fd_oracle, marginals, social_cost_of_carbon, welfare_gradient
from .trajectory import ControlPath, Trajectory, auxiliary, default_controls, simulate

__all__ = [
    "DICE2013R_INITIAL_STATE", "InfeasibleEvaluation", "State", "StepOutput", "step",
    "ExogenousPath", "build_exogenous",
    "OptimizerConfig", "OptimResult", "maximize", "optimize", "project",
    "BoundSchedule", "ModelParams", "bound_schedule", "build_params", "derive_carbon_matrix",
    "MarginalSet", "fd_oracle", "marginals", "social_cost_of_carbon", "welfare_gradient",
    "ControlPath", "Trajectory", "auxiliary", "default_controls", "simulate",
]

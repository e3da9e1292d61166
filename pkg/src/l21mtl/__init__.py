"""l2,1-norm regularized multi-task feature learning with accelerated projected gradient."""
from .core import (AugmentedPoint, DimensionMismatchError, EmptyTaskError, InvalidInputError,
                   NonFiniteError, TaskDataset, l21_norm, row_norms, validate_dataset)
from .losses import least_squares, logistic
from .projections import (DualRoot, L21Ball, find_dual_lambda, group_soft_threshold, omega,
                          project_onto_D, project_onto_Z)
from .solver import (ConstrainedProblem, DivergenceError, LineSearchError, SolveResult,
                     SolverConfig, line_search, model_value, nesterov_solve,
                     projected_gradient_solve)
from .mtfl import (Amtfl1Spec, Amtfl2Spec, PathResult, build_amtfl1, build_amtfl2, rho_max,
                   rho_to_z, selected_rows, solve, solve_path, weights_of)
from .data import generate_synthetic, load_dataset, save_dataset

__version__ = "0.1.0"

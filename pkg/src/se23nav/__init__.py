"""Exact strapdown inertial navigation propagation on SE2(3).

The attitude/velocity/position state evolves under constant body-frame
measurements and constant world gravity as a product of two closed-form
matrix exponentials applied on opposite sides of the state, so one step
of any duration is exact to round-off.  The package bundles that
propagator with rotation-group primitives, classical RK4/Euler baselines,
an instrumented flop counter, analytic benchmark scenarios, and a CLI.
"""

from .so3 import exp_so3, hat, log_so3, orthogonality_defect, vee
from .mixedexp import (
    MixedExpFactor,
    MixedGenerator,
    RodriguesCoeffs,
    coefficients,
    exp_factor,
    expm_dense,
    translation_block,
)
from .propagator import (
    STANDARD_GRAVITY,
    GravityModel,
    ImuInput,
    NavState,
    TangentVector,
    Trajectory,
    build_generators,
    propagate,
    propagate_sequence,
    wedge_se23,
)
from .integrators import (
    attitude_error,
    euler_step,
    integrate,
    kinematics_rhs,
    position_error,
    rk4_step,
)
from .opcount import (
    REFERENCE_RATIO,
    CountedScalar,
    OpCountReport,
    Tally,
    count_step,
    report_table,
)
from .scenarios import (
    CircleInput,
    ConstantInput,
    CsvInput,
    FreefallInput,
    Scenario,
    analytic_state,
    circle_scenario,
    constant_input,
    imu_samples,
    load_scenario,
    parse_imu_csv,
    quat_to_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # so3
    "hat",
    "vee",
    "exp_so3",
    "log_so3",
    "orthogonality_defect",
    # mixed exponential
    "RodriguesCoeffs",
    "coefficients",
    "translation_block",
    "MixedGenerator",
    "MixedExpFactor",
    "exp_factor",
    "expm_dense",
    # propagator
    "STANDARD_GRAVITY",
    "NavState",
    "ImuInput",
    "GravityModel",
    "TangentVector",
    "Trajectory",
    "wedge_se23",
    "build_generators",
    "propagate",
    "propagate_sequence",
    # integrators
    "kinematics_rhs",
    "rk4_step",
    "euler_step",
    "integrate",
    "position_error",
    "attitude_error",
    # opcount
    "REFERENCE_RATIO",
    "Tally",
    "CountedScalar",
    "OpCountReport",
    "count_step",
    "report_table",
    # scenarios
    "ConstantInput",
    "CircleInput",
    "FreefallInput",
    "CsvInput",
    "Scenario",
    "circle_scenario",
    "constant_input",
    "analytic_state",
    "imu_samples",
    "parse_imu_csv",
    "quat_to_matrix",
    "load_scenario",
]

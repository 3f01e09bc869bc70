"""3D foot-mud resistive force model.

Mud constitutive rheology (immediate elasticity, thixotropy, suction),
closed-form and surface-integrated resultant forces for canonical foot
shapes, trajectory-driven simulation, parameter calibration and gait-level
analysis metrics.
"""

from .analysis import (
    GaitMetrics,
    OpenLoopWarning,
    comparison_table,
    gait_metrics,
    hysteresis_energy,
    impulse,
    max_suction,
    normalize_stress,
    relative_rmse,
)
from .calibration import (
    CalibrationError,
    FitReport,
    IntrusionRecord,
    builtin_params,
    fit_power_law,
    fit_record,
    fit_relaxation,
    fit_suction,
    fit_viscosity,
)
from .config import ConfigError, ScenarioConfig, params_from_ini, params_to_ini
from .forces import (
    DirectionalStresses,
    ResultantForce,
    facet_force,
    force_flat,
    force_semi_cylinder,
    force_semi_sphere,
    force_variable_area,
    integrate_mesh,
    resultant_force,
)
from .geometry import (
    Facet,
    Flat,
    FootShape,
    MeshFoot,
    PlateKinematics,
    SemiCylinder,
    SemiSphere,
    VariableAreaFlat,
    contact_angle,
    effective_area,
    load_triangle_mesh,
    mesh_submerged,
    plate_angles,
    scale_normal,
    scale_tangential,
    submerged_area,
)
from .rheology import (
    MudDirectionalParams,
    RheologyState,
    StepSizeError,
    heaviside_smooth,
    immediate_stress,
    sealing_factor,
    step_rheology,
    suction_closed_form,
    thixo_closed_form,
    thixo_exact,
    thixo_steady,
    total_stress,
    xi_steady,
)
from .trajectory import (
    ForceTrace,
    MotionProfile,
    SimulationOptions,
    gait_profile,
    plate_protocol,
    simulate,
)

__version__ = "0.1.0"

"""Unbounded bouncing-ball orbits over a C^1 plate with small derivative.

Build a periodic plate motion whose derivative never exceeds a chosen
bound, together with an orbit whose velocity grows by ``g/2`` every ``N``
bounces, and check every step of the argument in exact rational arithmetic.
"""
from .construction import (
    Breakpoint,
    CollisionError,
    ConstructionError,
    EscapeBlueprint,
    Parameters,
    ParameterError,
    PlateProfile,
    ZetaNode,
    assign_targets,
    build_impact_times,
    build_profile,
    build_zeta,
    construct,
    derive_constants,
    integrate_zeta,
    interval_shape,
    reduce_mod_one,
    zero_profile,
)
from .dynamics import (
    GS,
    PF,
    NoImpactError,
    PhaseState,
    Trajectory,
    divided_difference,
    gs_step,
    orbit,
    pf_step,
    plate_height,
    plate_velocity,
)
from .numeric import EXACT, FLOAT, ModeError, QuadraticPiece, eval_quadratic, first_root_after
from .verification import (
    CheckReport,
    check_escape,
    check_feasibility,
    check_lemma1,
    check_lemma3,
    check_profile,
    check_prop1,
    identity_oracles,
    verify_instance,
)

__version__ = "0.1.0"

"""Python access to the pkscouette solver, multipliers and lemma suite."""

from ._pkscouette import (
    DELTA_MAX,
    A_iota,
    ConfigError,
    M_iota,
    OutputCollision,
    W_cal,
    W_iota,
    deta_M_iota,
    dt_M_iota,
    enhanced_dissipation_bound,
    preset_names,
    preset_path,
    resume,
    run_config,
    verify_multipliers,
)

__all__ = [
    "DELTA_MAX",
    "A_iota",
    "ConfigError",
    "M_iota",
    "OutputCollision",
    "W_cal",
    "W_iota",
    "deta_M_iota",
    "dt_M_iota",
    "enhanced_dissipation_bound",
    "preset_names",
    "preset_path",
    "resume",
    "run_config",
    "verify_multipliers",
]

"""Incident and reflected ionizing shock waves in a monatomic gas under Saha equilibrium."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, InadmissibleShockError, IonShockError
from .thermo import HYDROGEN, PRESETS, GasModel, ThermoState, get_gas
from .hugoniot import (
    DimensionlessParams,
    HugoniotCurve,
    build_hugoniot_curve,
    solve_hugoniot_point,
    theta_ratio,
)
from .shock import ShockSolution, check_lax, rh_residuals, solve_incident, solve_reflected

__all__ = [
    "ConvergenceError",
    "DimensionlessParams",
    "DomainError",
    "GasModel",
    "HYDROGEN",
    "HugoniotCurve",
    "InadmissibleShockError",
    "IonShockError",
    "PRESETS",
    "ShockSolution",
    "ThermoState",
    "build_hugoniot_curve",
    "check_lax",
    "get_gas",
    "rh_residuals",
    "solve_hugoniot_point",
    "solve_incident",
    "solve_reflected",
    "theta_ratio",
]

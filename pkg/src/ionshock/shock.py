"""Incident and reflected shocks in a shock tube closed by a reflector.

Sign conventions (gas initially at rest on the right, reflector at the right
end):

* the incident shock is a *forward* shock moving right with speed
  ``U_I > 0``; ahead of it the gas is at rest, behind it the gas moves with
  the piston speed ``u- > 0``;
* the reflected shock is a *backward* shock moving left with lab speed
  ``-U_R`` (``U_R > 0``); behind it the gas is at rest against the wall.

A :class:`ShockSolution` always stores the state the shock runs into as
``upstream`` and the processed gas as ``downstream``.
"""

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError
from .hugoniot import DimensionlessParams, default_tolerance, rh_pv_residuals, solve_hugoniot_point
from .thermo import ThermoState, energy_enthalpy, sound_speed

#: Velocity jumps below this magnitude [m/s] are treated as zero strength.
ZERO_STRENGTH_EPS = 1e-9


class Family(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class ShockSolution:
    """Both sides of a shock together with its lab-frame speed ``U``."""

    upstream: ThermoState
    u_upstream: float
    downstream: ThermoState
    u_downstream: float
    U: float
    family: Family
    gas: object = field(repr=False)
    zero_strength: bool = False

    @property
    def V_up(self):
        return self.U - self.u_upstream

    @property
    def V_down(self):
        return self.U - self.u_downstream

    @property
    def mass_flux(self):
        return self.upstream.density(self.gas) * self.V_up

    @property
    def mass_flux_downstream(self):
        return self.downstream.density(self.gas) * self.V_down

    @property
    def U_R(self):
        """Magnitude of the (leftward) reflected shock speed."""
        return -self.U

    def sides(self):
        """``(left, u_left, right, u_right)`` in the lab frame."""
        if self.family is Family.FORWARD:
            return self.downstream, self.u_downstream, self.upstream, self.u_upstream
        return self.upstream, self.u_upstream, self.downstream, self.u_downstream

    def dimensionless(self):
        """Shock strength measured from the upstream state."""
        return DimensionlessParams.from_states(
            self.downstream, self.u_downstream, self.upstream, self.u_upstream, self.gas
        )


# --------------------------------------------------------------------------
# explicit shock speeds


def incident_speed(theta_minus, theta_plus, u_minus, gas):
    """Lab speed ``U_I`` of the incident shock into gas at rest.

    Positive root of ``U^2 - [u- + a2 (theta- - theta+)/u-] U - a2 theta+ = 0``.
    Always exceeds ``u-``.
    """
    if not u_minus > 0:
        raise DomainError(f"u_minus must be > 0, got {u_minus}")
    if not theta_minus >= theta_plus > 0:
        raise DomainError(f"need theta_minus >= theta_plus > 0, got {theta_minus}, {theta_plus}")
    D = u_minus**2 / (gas.a2 * theta_plus)
    k = 1.0 + (theta_minus / theta_plus - 1.0) / D
    s = math.sqrt(k * k + 4.0 / D)
    assert k - s < 0
    return 0.5 * u_minus * (k + s)


def reflected_speed(theta_sharp, theta_minus, u_minus, gas):
    """Speed ``U_R > 0`` of the reflected shock (its lab velocity is ``-U_R``)."""
    if not u_minus > 0:
        raise DomainError(f"u_minus must be > 0, got {u_minus}")
    if not theta_sharp >= theta_minus > 0:
        raise DomainError(f"need theta_sharp >= theta_minus > 0, got {theta_sharp}, {theta_minus}")
    D = u_minus**2 / (gas.a2 * theta_minus)
    ratio = theta_sharp / theta_minus
    k = -1.0 + (ratio - 1.0) / D
    s = math.sqrt(k * k + 4.0 * ratio / D)
    assert k - s < 0
    return 0.5 * u_minus * (k + s)


def incident_lax_sufficient(D_plus, theta_ratio):
    """``D+ > 4`` and ``theta-/theta+ < (sqrt(D+) - 1)^2``."""
    return D_plus > 4 and theta_ratio < (math.sqrt(D_plus) - 1.0) ** 2


def reflected_lax_sufficient(D_minus):
    """``D- >= 1/3``."""
    return D_minus >= 1.0 / 3.0


# --------------------------------------------------------------------------
# solvers


def solve_incident(plus, u_minus, gas, *, tol=None):
    """Incident shock driven by a piston moving at ``u_minus`` into gas at rest."""
    if u_minus < 0:
        raise DomainError(f"u_minus must be >= 0, got {u_minus}")
    if abs(u_minus) < ZERO_STRENGTH_EPS:
        return ShockSolution(
            upstream=plus, u_upstream=0.0, downstream=plus, u_downstream=0.0,
            U=sound_speed(plus, gas), family=Family.FORWARD, gas=gas, zero_strength=True,
        )
    tol = default_tolerance() if tol is None else tol
    minus = solve_hugoniot_point(plus, 0.0, u_minus, gas, tol=tol)
    U = incident_speed(minus.theta, plus.theta, u_minus, gas)
    return ShockSolution(
        upstream=plus, u_upstream=0.0, downstream=minus, u_downstream=u_minus,
        U=U, family=Family.FORWARD, gas=gas,
    )


def solve_reflected(minus, u_minus, gas, *, tol=None):
    """Shock reflected from a wall that brings gas moving at ``u_minus`` to rest."""
    if u_minus < 0:
        raise DomainError(f"u_minus must be >= 0, got {u_minus}")
    if abs(u_minus) < ZERO_STRENGTH_EPS:
        return ShockSolution(
            upstream=minus, u_upstream=u_minus, downstream=minus, u_downstream=u_minus,
            U=u_minus - sound_speed(minus, gas), family=Family.BACKWARD, gas=gas,
            zero_strength=True,
        )
    tol = default_tolerance() if tol is None else tol
    sharp = solve_hugoniot_point(minus, u_minus, 0.0, gas, tol=tol)
    U_R = reflected_speed(sharp.theta, minus.theta, u_minus, gas)
    return ShockSolution(
        upstream=minus, u_upstream=u_minus, downstream=sharp, u_downstream=0.0,
        U=-U_R, family=Family.BACKWARD, gas=gas,
    )


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class LaxReport:
    """Margins of the Lax inequalities; every margin is positive when satisfied.

    ``sign_excluded`` flags forward shocks with negative speed and backward
    shocks with positive speed, which the shock-tube setting rules out.
    """

    family: Family
    margins: dict
    zero_strength: bool
    sign_excluded: bool

    @property
    def satisfied(self):
        return all(m > 0 for m in self.margins.values())

    @property
    def admissible(self):
        return self.zero_strength or (self.satisfied and not self.sign_excluded)


def check_lax(solution, gas):
    """Evaluate the Lax shock inequalities with the equilibrium sound speed.

    forward:  ``u- < U < u- + c-`` and ``u+ + c+ < U``;
    backward: ``u+ - c+ < U < u+`` and ``U < u- - c-``;
    where ``-`` is the left and ``+`` the right state.
    """
    left, u_l, right, u_r = solution.sides()
    c_l, c_r = sound_speed(left, gas), sound_speed(right, gas)
    U = solution.U
    if solution.family is Family.FORWARD:
        margins = {
            "U - u_left": U - u_l,
            "u_left + c_left - U": u_l + c_l - U,
            "U - (u_right + c_right)": U - (u_r + c_r),
        }
        excluded = U < 0
    else:
        margins = {
            "U - (u_right - c_right)": U - (u_r - c_r),
            "u_right - U": u_r - U,
            "u_left - c_left - U": u_l - c_l - U,
        }
        excluded = U > 0
    return LaxReport(
        family=solution.family, margins=margins,
        zero_strength=solution.zero_strength, sign_excluded=excluded,
    )


@dataclass(frozen=True)
class RHResiduals:
    mass: float
    momentum: float
    energy: float

    def max(self):
        return max(abs(self.mass), abs(self.momentum), abs(self.energy))


def _relative(lhs, rhs):
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else (lhs - rhs) / scale


def rh_residuals(solution, gas):
    """Residuals of ``U[rho] = [rho u]``, ``U[rho u] = [rho u^2 + p]`` and
    ``U[rho E] = [rho u E + p u]``, each divided by the larger side."""
    a, b = solution.upstream, solution.downstream
    ua, ub = solution.u_upstream, solution.u_downstream
    rho_a, rho_b = a.density(gas), b.density(gas)
    p_a, p_b = a.pressure(gas), b.pressure(gas)
    E_a = 0.5 * ua * ua + energy_enthalpy(a, gas)[0]
    E_b = 0.5 * ub * ub + energy_enthalpy(b, gas)[0]
    U = solution.U
    return RHResiduals(
        mass=_relative(U * (rho_b - rho_a), rho_b * ub - rho_a * ua),
        momentum=_relative(
            U * (rho_b * ub - rho_a * ua), (rho_b * ub * ub + p_b) - (rho_a * ua * ua + p_a)
        ),
        energy=_relative(
            U * (rho_b * E_b - rho_a * E_a),
            (rho_b * ub * E_b + p_b * ub) - (rho_a * ua * E_a + p_a * ua),
        ),
    )


def rh_forms(solution, gas):
    """Residuals of three equivalent jump-condition formulations.

    Keys ``conservative`` (lab-frame fluxes), ``pv`` (kinetic and energy parts
    in ``(u, p, v, e)``) and ``enthalpy`` (mass flux, momentum and enthalpy in
    terms of the relative speeds ``V``).
    """
    if solution.zero_strength:
        return {"conservative": (0.0, 0.0, 0.0), "pv": (0.0, 0.0), "enthalpy": (0.0, 0.0, 0.0)}
    a, b = solution.upstream, solution.downstream
    Va, Vb = solution.V_up, solution.V_down
    rho_a, rho_b = a.density(gas), b.density(gas)
    p_a, p_b = a.pressure(gas), b.pressure(gas)
    H_a, H_b = energy_enthalpy(a, gas)[1], energy_enthalpy(b, gas)[1]
    cons = rh_residuals(solution, gas)
    return {
        "conservative": (cons.mass, cons.momentum, cons.energy),
        "pv": rh_pv_residuals(b, solution.u_downstream, a, solution.u_upstream, gas),
        "enthalpy": (
            _relative(rho_a * Va, rho_b * Vb),
            _relative(p_a + rho_a * Va * Va, p_b + rho_b * Vb * Vb),
            _relative(H_a + 0.5 * Va * Va, H_b + 0.5 * Vb * Vb),
        ),
    }


def lagrangian_speed_sq(solution, gas):
    """``-(p_down - p_up) / (v_down - v_up)``, equal to the squared mass flux."""
    a, b = solution.upstream, solution.downstream
    return -(b.pressure(gas) - a.pressure(gas)) / (
        b.specific_volume(gas) - a.specific_volume(gas)
    )

"""Equilibrium thermodynamics of a monatomic gas undergoing a single ionization.

The gas is described by the degree of ionization ``alpha`` and the absolute
temperature ``T``. Pressure follows from Saha equilibrium,

.. math::

    p(\\alpha, T) = \\frac{1}{\\kappa} \\frac{1 - \\alpha^2}{\\alpha^2}
                    T^{5/2} e^{-T_i / T},

and the equation of state reads ``p = a2 * rho * theta`` with
``theta = T * (1 + alpha)``.

All functions accept scalars or numpy arrays. Quantities involving
``exp(+-T_i/T)`` are accumulated in log space so that cold states (for
hydrogen at 300 K, ``alpha ~ 1e-114``) stay finite.

The dimensionless entropy is defined up to an additive constant; this module
fixes that constant to zero. Only entropy differences carry meaning.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: Sufficient bound on ``alpha * (T_i / T)**3`` for genuine nonlinearity.
GNL_ALPHA_COEFF = 60.0
#: Genuine nonlinearity holds whenever ``T_i / T`` does not exceed this value.
GNL_TEMPERATURE_RATIO = 54.5375
#: Isentropes are convex in ``alpha`` for ``T_i / T`` up to this value.
CONVEX_TEMPERATURE_RATIO = 4.0
#: Isentropes are concave for ``T_i / T`` above this value when ``alpha <= 0.25``.
CONCAVE_TEMPERATURE_RATIO = 37.5964
CONCAVE_ALPHA_MAX = 0.25


@dataclass(frozen=True)
class GasModel:
    """Physical constants of a single-ionization monatomic gas.

    Attributes
    ----------
    a2 : float
        Specific gas constant ``R / M`` [J kg^-1 K^-1].
    kappa : float
        Saha constant [K^(5/2) m kg^-1 s^-2].
    T_ion : float
        Ionization temperature [K].
    name : str
        Label used in reports.
    """

    a2: float
    kappa: float
    T_ion: float
    name: str = "custom"

    def __post_init__(self):
        for attr in ("a2", "kappa", "T_ion"):
            value = getattr(self, attr)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"GasModel.{attr} must be finite and > 0, got {value!r}")

    @property
    def a(self):
        return math.sqrt(self.a2)


HYDROGEN = GasModel(a2=8314.0, kappa=29.9774, T_ion=1.5780e5, name="hydrogen")

PRESETS = {"hydrogen": HYDROGEN}


def get_gas(name):
    """Return the preset gas model called ``name``."""
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise DomainError(
            f"unknown gas preset {name!r}; known presets: {', '.join(sorted(PRESETS))}"
        ) from None


@dataclass(frozen=True)
class ThermoState:
    """A point of the ``(alpha, T)`` plane.

    ``log_alpha`` is kept next to ``alpha`` so that states whose ionization
    degree underflows double precision still carry finite pressures. When
    omitted it is computed from ``alpha``.
    """

    alpha: float
    T: float
    log_alpha: float = field(default=None, compare=False)

    def __post_init__(self):
        if self.log_alpha is None:
            alpha = np.asarray(self.alpha, dtype=float)
            if np.any(alpha <= 0):
                raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
            with np.errstate(divide="ignore"):
                object.__setattr__(self, "log_alpha", _as_float(np.log(alpha)))
        _check_state(self.alpha, self.T, self.log_alpha)

    @classmethod
    def from_log_alpha(cls, log_alpha, T):
        return cls(alpha=_as_float(np.exp(log_alpha)), T=T, log_alpha=log_alpha)

    @classmethod
    def from_pressure(cls, p, T, gas):
        """Equilibrium state at pressure ``p`` and temperature ``T``."""
        log_alpha = saha_log_alpha(p, T, gas)
        return cls.from_log_alpha(log_alpha, T)

    @property
    def theta(self):
        """Effective temperature ``T * (1 + alpha)`` entering ``p = a2 rho theta``."""
        return self.T * (1 + self.alpha)

    def pressure(self, gas):
        return _as_float(np.exp(log_pressure(self, gas)))

    def specific_volume(self, gas):
        return _as_float(gas.a2 * self.theta * np.exp(-log_pressure(self, gas)))

    def density(self, gas):
        return _as_float(np.exp(log_pressure(self, gas)) / (gas.a2 * self.theta))


def _as_float(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_state(alpha, T, log_alpha):
    alpha = np.asarray(alpha, dtype=float)
    T = np.asarray(T, dtype=float)
    log_alpha = np.asarray(log_alpha, dtype=float)
    if not np.all(np.isfinite(T) & (T > 0)):
        raise DomainError(f"T must be finite and > 0, got {T!r}")
    if not np.all((alpha < 1) & (alpha >= 0) & np.isfinite(log_alpha) & (log_alpha < 0)):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def _state_arrays(state):
    return (
        np.asarray(state.alpha, dtype=float),
        np.asarray(state.T, dtype=float),
        np.asarray(state.log_alpha, dtype=float),
    )


# --------------------------------------------------------------------------
# Saha equilibrium


def saha_log_alpha(p, T, gas):
    """Natural log of the equilibrium ionization degree at ``(p, T)``."""
    p = np.asarray(p, dtype=float)
    T = np.asarray(T, dtype=float)
    if not np.all(np.isfinite(p) & (p > 0)):
        raise DomainError(f"pressure must be finite and > 0, got {p!r}")
    if not np.all(np.isfinite(T) & (T > 0)):
        raise DomainError(f"temperature must be finite and > 0, got {T!r}")
    log_x = math.log(gas.kappa) + np.log(p) - 2.5 * np.log(T) + gas.T_ion / T
    return _as_float(-0.5 * np.logaddexp(0.0, log_x))


def saha_alpha(p, T, gas):
    """Equilibrium ionization degree ``(1 + kappa p T^-5/2 e^(T_i/T))^-1/2``.

    Evaluated through :func:`saha_log_alpha`, so extremely cold states
    underflow towards zero instead of producing ``nan``.

    Examples
    --------
    >>> saha_alpha(1466.3, 300.0, HYDROGEN)  # doctest: +ELLIPSIS
    3.59289...e-114
    """
    return _as_float(np.exp(saha_log_alpha(p, T, gas)))


def log_pressure(state, gas):
    alpha, T, log_alpha = _state_arrays(state)
    return _as_float(
        -math.log(gas.kappa)
        + np.log1p(-alpha * alpha)
        - 2.0 * log_alpha
        + 2.5 * np.log(T)
        - gas.T_ion / T
    )


def pressure(alpha, T, gas):
    """Pressure of the equilibrium state ``(alpha, T)`` [Pa].

    Strictly decreasing in ``alpha`` at fixed ``T``; vanishes as
    ``alpha -> 1``.
    """
    return _as_float(np.exp(log_pressure(ThermoState(alpha, T), gas)))


# --------------------------------------------------------------------------
# Caloric quantities


def energy_enthalpy(state, gas):
    """Specific internal energy and enthalpy [J/kg].

    ``e = 3/2 a2 (1+alpha) T + a2 T_i alpha`` and ``H = e + a2 theta``.
    """
    alpha, T, _ = _state_arrays(state)
    ion = gas.a2 * gas.T_ion * alpha
    e = 1.5 * gas.a2 * (1 + alpha) * T + ion
    H = 2.5 * gas.a2 * (1 + alpha) * T + ion
    return _as_float(e), _as_float(H)


def entropy_eta(state, gas):
    """Dimensionless specific entropy ``eta = S / a2`` with integration constant 0."""
    alpha, T, log_alpha = _state_arrays(state)
    return _as_float(
        2.0 * (log_alpha - np.log1p(-alpha)) + (1 + alpha) * (2.5 + gas.T_ion / T)
    )


def sound_speed_factor_sq(state, gas):
    """Square of the ionization correction to the frozen sound speed.

    Always lies in ``(3/5, 1]``; equals 1 when ``alpha (1 - alpha) = 0``.
    """
    alpha, T, _ = _state_arrays(state)
    r = gas.T_ion / T
    q = alpha * (1 - alpha)
    num = 1 + q * (1.25 + r + r * r / 5.0)
    den = 1 + q * (1.25 + r + r * r / 3.0)
    return _as_float(num / den)


def sound_speed(state, gas):
    """Equilibrium sound speed ``sqrt(dp/drho)`` at constant entropy [m/s]."""
    alpha, T, _ = _state_arrays(state)
    frozen = np.sqrt(gas.a2 * 5.0 * T * (1 + alpha) / 3.0)
    return _as_float(frozen * np.sqrt(sound_speed_factor_sq(state, gas)))


def p_eta(state, gas):
    """Partial derivative of pressure with respect to ``eta`` at fixed density [Pa]."""
    alpha, T, _ = _state_arrays(state)
    r = gas.T_ion / T
    q = alpha * (1 - alpha)
    p = np.exp(log_pressure(state, gas))
    num = 2.0 * p * (1 + 0.5 * q * (2.5 + r))
    den = 3.0 * (1 + alpha) * (1 + q * (1.25 + r + r * r / 3.0))
    return _as_float(num / den)


# --------------------------------------------------------------------------
# Characteristic-field geometry


def gnl_sufficient(state, gas):
    """Whether the acoustic fields are certified genuinely nonlinear at ``state``.

    The test is only sufficient: ``False`` means "not certified".
    """
    alpha, T, _ = _state_arrays(state)
    ratio = gas.T_ion / T
    ok = (alpha <= GNL_ALPHA_COEFF / ratio**3) | (ratio <= GNL_TEMPERATURE_RATIO)
    return bool(ok) if ok.ndim == 0 else ok


class Curvature(enum.Enum):
    CONVEX = "convex-certified"
    CONCAVE = "concave-certified"
    UNCERTIFIED = "uncertified"


def concavity_threshold(alpha):
    """Lower bound on ``T_i / T`` beyond which isentropes are concave at ``alpha``.

    Returns ``inf`` where the denominator polynomial is non-positive
    (``alpha`` above roughly 0.297), i.e. no concavity is possible there.
    """
    alpha = np.asarray(alpha, dtype=float)
    q = alpha * (1 - alpha)
    poly = 1 - 3 * alpha - 2.5 * q * q
    with np.errstate(divide="ignore"):
        out = np.where(poly > 0, (2 + 2.5 * q) ** 2 / np.where(poly > 0, poly, 1.0), np.inf)
    return _as_float(out)


def integral_curve_curvature(state, gas):
    """Second derivative ``d^2 T / d alpha^2`` of the isentrope through ``state``.

    Acoustic integral curves project onto isentropes in the ``(alpha, T)``
    plane, so this is the curvature of the level set ``eta = const``.

    Returns
    -------
    value : float
        Positive where the isentrope is convex, negative where concave [K].
    certification : Curvature
        Region certified by the sufficient conditions ``T_i/T <= 4``
        (convex) or ``T_i/T > 37.5964`` with ``alpha <= 0.25`` (concave).
    """
    alpha, T, _ = _state_arrays(state)
    r = gas.T_ion / T
    q = alpha * (1 - alpha)
    poly = 1 - 3 * alpha - 2.5 * q * q
    bracket = 2 * (1 + alpha) / (q * q) * r * (-poly * r + (2 + 2.5 * q) ** 2)
    # bracket / T^2 is the implicit-curvature numerator; eta_T = -(1+alpha) r / T
    value = T * bracket / ((1 + alpha) ** 3 * r**3)

    if np.ndim(value) != 0:
        raise DomainError("integral_curve_curvature expects a scalar state")
    if r <= CONVEX_TEMPERATURE_RATIO:
        cert = Curvature.CONVEX
    elif r > CONCAVE_TEMPERATURE_RATIO and alpha <= CONCAVE_ALPHA_MAX:
        cert = Curvature.CONCAVE
    else:
        cert = Curvature.UNCERTIFIED
    return float(value), cert


def properties(state, gas):
    """Dictionary of every derived quantity of ``state`` (used for reports)."""
    e, H = energy_enthalpy(state, gas)
    return {
        "alpha": state.alpha,
        "log_alpha": state.log_alpha,
        "T": state.T,
        "theta": state.theta,
        "p": state.pressure(gas),
        "rho": state.density(gas),
        "v": state.specific_volume(gas),
        "e": e,
        "H": H,
        "eta": entropy_eta(state, gas),
        "c": sound_speed(state, gas),
        "p_eta": p_eta(state, gas),
    }

"""Hugoniot loci of the ionized gas in the ``(alpha, T)`` plane.

Naming follows the shock-tube picture: ``plus`` is the state ahead of a
forward shock, ``minus`` the state behind it. Every relation here is
symmetric under exchanging the two roles, so the same routines serve the
reflected (backward) shock with the base state swapped in.

Two parts of the Rankine-Hugoniot system are used:

* the *thermodynamic* part, a relation between ``(alpha, T)`` on both sides
  that does not involve velocities. Through any base state it is the graph of
  a strictly increasing function ``T(alpha)``;
* the *kinetic* part, which adds the squared velocity jump.

:func:`solve_hugoniot_point` intersects them by nested one-dimensional
bracketed searches: the outer one in ``logit(alpha)`` on the kinetic
residual, the inner one in ``log T`` on the thermodynamic residual.

The low-ionization approximation (upstream ``alpha ~ 0``) is a separate set
of entry points prefixed with ``approx_``.
"""

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, InadmissibleShockError
from .thermo import (
    GNL_ALPHA_COEFF,
    GNL_TEMPERATURE_RATIO,
    ThermoState,
    entropy_eta,
    sound_speed,
)

DEFAULT_TOL = 1e-12
T_BRACKET_FACTOR = 1e3
T_MAX = 1e9
T_MIN = 1e-2
# logit(1 - 1e-12): beyond this alpha is indistinguishable from 1
LOGIT_MAX = 27.6


def default_tolerance():
    """Solver tolerance, overridable through the ``IONSHOCK_TOL`` environment variable."""
    raw = os.environ.get("IONSHOCK_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise DomainError(f"IONSHOCK_TOL must be a number, got {raw!r}") from None
    if not (0 < tol < 1):
        raise DomainError(f"IONSHOCK_TOL must lie in (0, 1), got {tol}")
    return tol


# --------------------------------------------------------------------------
# scalar kernels (math module only: these sit inside the nested root search)


def _logaddexp(a, b):
    if a < b:
        a, b = b, a
    if a == -math.inf:
        return a
    return a + math.log1p(math.exp(b - a))


def _log_p(alpha, log_alpha, T, gas):
    return (
        -math.log(gas.kappa)
        + math.log1p(-alpha * alpha)
        - 2.0 * log_alpha
        + 2.5 * math.log(T)
        - gas.T_ion / T
    )


def _log_alpha_of_logit(x):
    # log(1 / (1 + e^-x)) without overflow
    return -_logaddexp(0.0, -x)


class _Base:
    """Cached quantities of the base state of a locus."""

    __slots__ = ("alpha", "log_alpha", "T", "theta", "log_p", "log_theta", "log_rhs0")

    def __init__(self, state, gas):
        self.alpha = float(state.alpha)
        self.log_alpha = float(state.log_alpha)
        self.T = float(state.T)
        self.theta = self.T * (1 + self.alpha)
        self.log_p = _log_p(self.alpha, self.log_alpha, self.T, gas)
        self.log_theta = math.log(self.theta)
        self.log_rhs0 = math.log(4 * self.theta + 2 * gas.T_ion * self.alpha)


def _thermo_log_gap(alpha, log_alpha, T, base, gas):
    """``log(LHS / RHS)`` of the thermodynamic relation, overflow free.

    ``LHS = (4 + p_base/p) theta + 2 T_i alpha`` and
    ``RHS = (4 + p/p_base) theta_base + 2 T_i alpha_base``.
    """
    log_ratio = base.log_p - _log_p(alpha, log_alpha, T, gas)
    theta = T * (1 + alpha)
    lhs = _logaddexp(math.log(4 * theta + 2 * gas.T_ion * alpha), log_ratio + math.log(theta))
    rhs = _logaddexp(base.log_rhs0, -log_ratio + base.log_theta)
    return lhs - rhs


def _kinetic_scaled(alpha, log_alpha, T, base, D, gas):
    """Kinetic residual divided by ``Pi = p / p_base`` (same sign, bounded)."""
    log_pi = _log_p(alpha, log_alpha, T, gas) - base.log_p
    r = T * (1 + alpha) / base.theta
    if log_pi > 700.0:
        return 1.0
    if log_pi < -700.0:
        return -math.inf
    pi = math.exp(log_pi)
    return 1.0 + r / (pi * pi) - (1.0 + r + D) / pi


# --------------------------------------------------------------------------
# residuals


def thermo_residual(minus, plus, gas):
    """Relative residual of the thermodynamic Rankine-Hugoniot relation.

    Returns ``LHS / RHS - 1`` of

        T-[(4 + p+/p-)(1 + a-) + 2 (Ti/T-) a-] = T+[(4 + p-/p+)(1 + a+) + 2 (Ti/T+) a+]

    which vanishes exactly when the two states lie on each other's
    thermodynamic Hugoniot locus. At fixed ``minus.alpha`` the residual is
    positive below the locus and negative above it.
    """
    base = _Base(plus, gas)
    gap = _thermo_log_gap(float(minus.alpha), float(minus.log_alpha), float(minus.T), base, gas)
    try:
        return math.expm1(gap)
    except OverflowError:
        return math.inf


def kinetic_residual(minus, u_minus, plus, u_plus, gas):
    """``p-/p+ + v-/v+ - 1 - theta-/theta+ - (u- - u+)^2 / (a2 theta+)``."""
    log_pi = _log_p(float(minus.alpha), float(minus.log_alpha), float(minus.T), gas) - _log_p(
        float(plus.alpha), float(plus.log_alpha), float(plus.T), gas
    )
    r = minus.theta / plus.theta
    D = (u_minus - u_plus) ** 2 / (gas.a2 * plus.theta)
    if log_pi > 709.0:
        return math.inf
    pi = math.exp(log_pi)
    return pi + r / pi - 1.0 - r - D


def rh_pv_residuals(minus, u_minus, plus, u_plus, gas):
    """Residuals of the ``(u, p, v, e)`` form of the jump conditions.

    Returns ``(kinetic, energy)`` where

    * ``kinetic = [(u+ - u-)^2 + (p+ - p-)(v+ - v-)] / (a2 theta+)``
    * ``energy = [e+ - e- + (p+ + p-)(v+ - v-)/2] / (a2 theta+)``
    """
    p_m, p_p = minus.pressure(gas), plus.pressure(gas)
    v_m, v_p = minus.specific_volume(gas), plus.specific_volume(gas)
    e_m = 1.5 * gas.a2 * minus.theta + gas.a2 * gas.T_ion * minus.alpha
    e_p = 1.5 * gas.a2 * plus.theta + gas.a2 * gas.T_ion * plus.alpha
    scale = gas.a2 * plus.theta
    kinetic = ((u_plus - u_minus) ** 2 + (p_p - p_m) * (v_p - v_m)) / scale
    energy = (e_p - e_m + 0.5 * (p_p + p_m) * (v_p - v_m)) / scale
    return kinetic, energy


# --------------------------------------------------------------------------
# dimensionless analysis


def admissible_d_bound(D):
    """Largest ionization jump ``d`` compatible with a forward shock of strength ``D``."""
    return 0.5 * D * math.sqrt(1.0 + 4.0 / D)


@dataclass(frozen=True)
class DimensionlessParams:
    """Shock strength measured from the base (``plus``) state.

    ``Theta = theta-/theta+ - 1``, ``d = (T_i/theta+)(alpha- - alpha+)`` and
    ``D = (u- - u+)^2 / (a2 theta+)``.
    """

    Theta: float
    d: float
    D: float

    @classmethod
    def from_states(cls, minus, u_minus, plus, u_plus, gas):
        theta_p = plus.theta
        return cls(
            Theta=minus.theta / theta_p - 1.0,
            d=gas.T_ion / theta_p * (minus.alpha - plus.alpha),
            D=(u_minus - u_plus) ** 2 / (gas.a2 * theta_p),
        )

    @property
    def admissible(self):
        return self.D > 0 and self.Theta > 0 and self.d < admissible_d_bound(self.D)


def pressure_ratio_Pi(theta_ratio, d):
    """Pressure ratio ``Pi = p-/p+`` implied by the thermodynamic relation.

    Positive root of ``Pi^2 - 2[2(r - 1) + d] Pi - r = 0`` with
    ``r = theta-/theta+``; equals 1 for a zero-strength jump.
    """
    if theta_ratio < 1 or d < 0:
        raise DomainError(f"need theta ratio >= 1 and d >= 0, got {theta_ratio}, {d}")
    b = 2.0 * (theta_ratio - 1.0) + d
    return b + math.sqrt(b * b + theta_ratio)


def theta_ratio_roots(d, D):
    """Both roots of ``15 X^2 - 2(D - 8d) X + 4d^2 - D^2 - 4D = 0``, larger first."""
    disc = (2.0 * D - d) ** 2 + 15.0 * D
    s = 2.0 * math.sqrt(disc)
    return (D - 8.0 * d + s) / 15.0, (D - 8.0 * d - s) / 15.0


def theta_ratio(d, D):
    """Normalized temperature jump ``Theta = theta-/theta+ - 1`` of a forward shock.

    Parameters
    ----------
    d : float
        Normalized ionization jump, ``0 <= d < (D/2) sqrt(1 + 4/D)``.
    D : float
        Normalized squared velocity jump, ``D > 0``.

    Raises
    ------
    InadmissibleShockError
        If ``d`` violates the admissibility bound (no forward shock exists).
    """
    if not D > 0:
        raise DomainError(f"D must be > 0, got {D}")
    if d < 0:
        raise DomainError(f"d must be >= 0, got {d}")
    if d >= admissible_d_bound(D):
        raise InadmissibleShockError(
            f"no admissible forward shock: d = {d:.6g} >= {admissible_d_bound(D):.6g}"
        )
    big, small = theta_ratio_roots(d, D)
    assert small < 0 < big, (small, big)
    return big


def theta_below_D(d, D):
    """``Theta < D``; guaranteed whenever ``D > 1/3``.

    At ``D = 1/3`` the bound holds for every ``d > 0`` and becomes the
    equality ``Theta = D`` when ``d = 0``.
    """
    return theta_ratio(d, D) < D


def theta_ratio_asymptotic(d, D):
    """Strong-shock approximation ``Theta ~ 1/2 + (D/3)(1 - 2d/D)``.

    Valid when ``1/D`` and ``d/D`` are both small; the relative error on
    ``theta-/theta+`` is well under 5% once ``D >= 50`` and ``d/D <= 0.2``.
    """
    if not D > 0:
        raise DomainError(f"D must be > 0, got {D}")
    return 1.5 + (D / 3.0) * (1.0 - 2.0 * d / D) - 1.0


# --------------------------------------------------------------------------
# thermodynamic locus


def _solve_log_T(func, log_T0, f0, tol, label):
    """Bracket and solve ``func(log T) = 0`` starting from the base temperature.

    ``f0 > 0`` means the root lies above ``log_T0``.
    """
    trace = [(math.exp(log_T0), f0)]
    if f0 == 0:
        return log_T0
    step = math.log(T_BRACKET_FACTOR)
    if f0 > 0:
        lo, hi = log_T0, log_T0 + step
        while True:
            f_hi = func(hi)
            trace.append((math.exp(hi), f_hi))
            if f_hi < 0:
                break
            if hi > math.log(T_MAX):
                raise ConvergenceError(f"{label}: no sign change below T = {T_MAX:g} K", trace)
            lo, hi = hi, hi + math.log(10.0)
    else:
        lo, hi = log_T0 - step, log_T0
        while True:
            f_lo = func(lo)
            trace.append((math.exp(lo), f_lo))
            if f_lo > 0:
                break
            if lo < math.log(T_MIN):
                raise ConvergenceError(f"{label}: no sign change above T = {T_MIN:g} K", trace)
            lo, hi = lo - math.log(10.0), lo
    try:
        return brentq(func, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"{label}: {exc}", trace) from exc


def _locus_log_T(alpha, log_alpha, base, gas, tol):
    if log_alpha == base.log_alpha:
        return math.log(base.T)

    def func(log_T):
        return _thermo_log_gap(alpha, log_alpha, math.exp(log_T), base, gas)

    log_T0 = math.log(base.T)
    return _solve_log_T(func, log_T0, func(log_T0), tol, f"thermodynamic locus at alpha={alpha:.6g}")


def hugoniot_temperature(alpha, base, gas, *, log_alpha=None, tol=None):
    """Temperature of the thermodynamic Hugoniot locus of ``base`` at ``alpha``."""
    if log_alpha is None:
        if not 0 < alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
        log_alpha = math.log(alpha)
    tol = default_tolerance() if tol is None else tol
    return math.exp(_locus_log_T(float(alpha), float(log_alpha), _Base(base, gas), gas, tol))


@dataclass(frozen=True)
class HugoniotCurve:
    """Samples ``(alpha, T(alpha))`` of the thermodynamic locus through ``base``."""

    base: ThermoState
    alpha: np.ndarray
    T: np.ndarray

    def __len__(self):
        return len(self.alpha)

    def interpolate(self, alpha):
        """Piecewise-linear interpolation of ``log T`` against ``log alpha``."""
        return np.exp(np.interp(np.log(alpha), np.log(self.alpha), np.log(self.T)))

    def states(self):
        return ThermoState(self.alpha, self.T)

    def records(self, gas):
        """Ordered ``(alpha, T, p, eta, c)`` rows for export."""
        states = self.states()
        p = states.pressure(gas)
        eta = entropy_eta(states, gas)
        c = sound_speed(states, gas)
        return [
            {"alpha": a, "T": t, "p": pp, "eta": s, "c": cc}
            for a, t, pp, s, cc in zip(
                self.alpha.tolist(), self.T.tolist(), np.atleast_1d(p).tolist(),
                np.atleast_1d(eta).tolist(), np.atleast_1d(c).tolist(),
            )
        ]


def build_hugoniot_curve(base, alpha_grid, gas, *, tol=None):
    """Sample the thermodynamic Hugoniot locus of ``base`` on ``alpha_grid``.

    Each sample is an independent bracketed solve in ``log T``, so grid points
    on either side of ``base.alpha`` are allowed.
    """
    tol = default_tolerance() if tol is None else tol
    alpha = np.sort(np.asarray(alpha_grid, dtype=float).ravel())
    if alpha.size == 0:
        raise DomainError("alpha grid is empty")
    if np.any(alpha <= 0) or np.any(alpha >= 1):
        raise DomainError("alpha grid must lie in (0, 1)")
    if np.any(np.diff(alpha) <= 0):
        raise DomainError("alpha grid must not contain duplicates")
    cached = _Base(base, gas)
    T = np.array([
        math.exp(_locus_log_T(a, math.log(a), cached, gas, tol)) for a in alpha.tolist()
    ])
    if np.any(np.diff(T) <= 0):
        raise ConvergenceError("thermodynamic locus samples are not strictly increasing")
    return HugoniotCurve(base=base, alpha=alpha, T=T)


# --------------------------------------------------------------------------
# kinetic intersection


def _bracket_logit(g, x_lo, g_lo, label):
    """Step upward in ``logit(alpha)`` from a negative residual until it turns positive."""
    trace = [(x_lo, g_lo)]
    step = 1.0
    lo = x_lo
    while True:
        # geometric steps through the tiny-alpha range, unit steps past logit = -4
        # since T(alpha) diverges as alpha -> 1
        hi = min(lo + min(step, max(1.0, -4.0 - lo)), LOGIT_MAX)
        g_hi = g(hi)
        trace.append((hi, g_hi))
        if g_hi > 0:
            return lo, hi, trace
        if hi >= LOGIT_MAX:
            raise ConvergenceError(f"{label}: kinetic residual never changes sign", trace)
        lo = hi
        step *= 2.0


def solve_hugoniot_point(base, u_base, u, gas, *, tol=None):
    """Unique compressive state ``(alpha, T)`` joined to ``base`` by a shock.

    The velocity jump ``u - u_base`` fixes the kinetic part of the locus. The
    returned state has ``alpha > base.alpha`` and ``T > base.T``.

    Raises
    ------
    ConvergenceError
        If either nested search fails; the exception carries the bracket trace.
    """
    if u == u_base:
        raise DomainError("u must differ from u_base")
    tol = default_tolerance() if tol is None else tol
    cached = _Base(base, gas)
    D = (u - u_base) ** 2 / (gas.a2 * cached.theta)
    x0 = cached.log_alpha - math.log1p(-cached.alpha)

    def locus(x):
        la = _log_alpha_of_logit(x)
        a = math.exp(la)
        return a, la, math.exp(_locus_log_T(a, la, cached, gas, tol))

    def g(x):
        return _kinetic_scaled(*locus(x), cached, D, gas)

    # at the base itself the scaled residual is exactly -D
    lo, hi, trace = _bracket_logit(g, x0, -D, "hugoniot point")
    try:
        x = brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"hugoniot point: {exc}", trace) from exc
    a, la, T = locus(x)
    return ThermoState(alpha=a, T=T, log_alpha=la)


# --------------------------------------------------------------------------
# low-ionization approximation of the upstream state


def gnl_f(xi):
    """``xi^(9/4) exp(-xi/2)``; unique maximum at ``xi = 9/2``."""
    return xi**2.25 * math.exp(-0.5 * xi)


#: Largest ``B`` for which the approximate locus stays genuinely nonlinear.
GNL_B_THRESHOLD = GNL_ALPHA_COEFF / gnl_f(GNL_TEMPERATURE_RATIO)


@dataclass(frozen=True)
class ApproxUpstream:
    """Upstream constants of the ``alpha+ ~ 0`` approximation.

    Attributes
    ----------
    T_plus, p_plus : float
        Upstream temperature [K] and pressure [Pa].
    A : float
        Exact prefactor with ``alpha+ = A exp(-T_i / 2T+)``.
    A_hat : float
        ``sqrt(T+^(5/2) / (kappa p+))``, the limit of ``A``.
    B : float
        ``sqrt(T+ T_i^(3/2) / (kappa p+))``.
    """

    T_plus: float
    p_plus: float
    A: float
    A_hat: float
    B: float


def approx_upstream(T_plus, p_plus, gas):
    if not (T_plus > 0 and p_plus > 0):
        raise DomainError(f"T_plus and p_plus must be > 0, got {T_plus}, {p_plus}")
    kp = gas.kappa * p_plus
    # e^{-T_i/T} (not e^{-T_i/2T}) keeps alpha+ = A e^{-T_i/2T+} exact
    A = (kp * T_plus**-2.5 + math.exp(-gas.T_ion / T_plus)) ** -0.5
    A_hat = math.sqrt(T_plus**2.5 / kp)
    B = math.sqrt(T_plus * gas.T_ion**1.5 / kp)
    return ApproxUpstream(T_plus=T_plus, p_plus=p_plus, A=A, A_hat=A_hat, B=B)


def _approx_log_chi(alpha, log_alpha, T, approx, gas):
    return (
        math.log(gas.kappa * approx.p_plus)
        + 2.0 * log_alpha
        - math.log1p(-alpha * alpha)
        - 2.5 * math.log(T)
        + gas.T_ion / T
    )


def approx_chi(alpha_minus, T_minus, approx, gas):
    """Approximate pressure ratio ``p+/p-`` at the downstream state."""
    return math.exp(_approx_log_chi(alpha_minus, math.log(alpha_minus), T_minus, approx, gas))


def approx_chi_root(alpha_minus, T_minus, T_plus, gas):
    """Positive root of the quadratic satisfied by ``chi = p+/p-``.

    ``Gamma(chi) = (1+a) t chi^2 + 2[2(1+a) t + (T_i/T+) a - 2] chi - 1``
    with ``t = T-/T+ >= 1``. The root always lies in ``(0, T+/T-]``.
    """
    if not 0 < alpha_minus < 1:
        raise DomainError(f"alpha_minus must lie in (0, 1), got {alpha_minus}")
    if T_minus < T_plus or T_plus <= 0:
        raise DomainError(f"need T_minus >= T_plus > 0, got {T_minus}, {T_plus}")
    t = T_minus / T_plus
    qa = (1 + alpha_minus) * t
    qb = 2.0 * (2.0 * (1 + alpha_minus) * t + gas.T_ion / T_plus * alpha_minus - 2.0)
    s = math.sqrt(qb * qb + 4.0 * qa)
    return 2.0 / (s + qb) if qb >= 0 else (s - qb) / (2.0 * qa)


@dataclass(frozen=True)
class AlphaBound:
    """Upper bound on the downstream ionization and the associated GNL test."""

    bound: float
    B: float
    xi: float
    f_xi: float
    threshold: float

    @property
    def gnl_criterion(self):
        return self.B <= self.threshold


def approx_alpha_bound(T_minus, approx, gas):
    """``alpha- < B (T-/T_i)^(3/4) exp(-T_i / 2T-)`` for ``T- > T+``."""
    if not T_minus > approx.T_plus:
        raise DomainError(f"need T_minus > T_plus, got {T_minus} <= {approx.T_plus}")
    x = T_minus / gas.T_ion
    bound = approx.B * x**0.75 * math.exp(-0.5 / x)
    xi = 1.0 / x
    return AlphaBound(bound=bound, B=approx.B, xi=xi, f_xi=gnl_f(xi), threshold=GNL_B_THRESHOLD)


def _approx_log_gap(alpha, log_alpha, T, approx, gas):
    """``log`` of LHS/RHS of ``(4 + chi) theta- + 2 T_i alpha- = T+ (4 + 1/chi)``."""
    lchi = _approx_log_chi(alpha, log_alpha, T, approx, gas)
    theta = T * (1 + alpha)
    lhs = _logaddexp(math.log(4 * theta + 2 * gas.T_ion * alpha), lchi + math.log(theta))
    rhs = _logaddexp(math.log(4 * approx.T_plus), -lchi + math.log(approx.T_plus))
    return lhs - rhs


def approx_hugoniot_temperature(alpha_minus, approx, gas, *, log_alpha=None, tol=None):
    """Downstream temperature on the approximate thermodynamic locus."""
    if log_alpha is None:
        log_alpha = math.log(alpha_minus)
    tol = default_tolerance() if tol is None else tol

    def func(log_T):
        return _approx_log_gap(alpha_minus, log_alpha, math.exp(log_T), approx, gas)

    log_T0 = math.log(approx.T_plus)
    return math.exp(_solve_log_T(func, log_T0, func(log_T0), tol, "approximate locus"))


def solve_approx_incident(approx, u_minus, gas, *, tol=None):
    """Incident-shock state under the ``alpha+ ~ 0`` approximation.

    Returns
    -------
    state : ThermoState
        Downstream ``(alpha-, T-)``.
    chi : float
        Approximate ``p+/p-`` at that state.
    """
    if not u_minus > 0:
        raise DomainError(f"u_minus must be > 0, got {u_minus}")
    tol = default_tolerance() if tol is None else tol
    D = u_minus**2 / (gas.a2 * approx.T_plus)

    def locus(x):
        la = _log_alpha_of_logit(x)
        a = math.exp(la)
        return a, la, approx_hugoniot_temperature(a, approx, gas, log_alpha=la, tol=tol)

    def g(x):
        a, la, T = locus(x)
        chi = math.exp(min(_approx_log_chi(a, la, T, approx, gas), 700.0))
        r = T * (1 + a) / approx.T_plus
        # kinetic residual times chi = p+/p-
        return 1.0 + r * chi * chi - (1.0 + r + D) * chi

    # start near the Saha value of the upstream ionization
    x_lo = math.log(approx.A_hat) - 0.5 * gas.T_ion / approx.T_plus
    g_lo = g(x_lo)
    while g_lo >= 0:
        x_lo -= 10.0
        g_lo = g(x_lo)
    lo, hi, trace = _bracket_logit(g, x_lo, g_lo, "approximate incident shock")
    try:
        x = brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise ConvergenceError(f"approximate incident shock: {exc}", trace) from exc
    a, la, T = locus(x)
    state = ThermoState(alpha=a, T=T, log_alpha=la)
    return state, math.exp(_approx_log_chi(a, la, T, approx, gas))

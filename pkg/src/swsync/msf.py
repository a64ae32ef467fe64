"""Master stability function: transverse-mode exponents on a periodic orbit.

Linearising the diffusively coupled network

``x_i' = f(x_i) + gamma * sum_j a_ij * C (x_j - x_i)``

about the synchronous orbit and diagonalising in the Laplacian eigenbasis
gives one mode equation per eigenvalue ``lambda``:

``xi' = [Df(phi(t)) - (gamma * lambda) C] xi``

so the generic mode parameter is ``sigma = gamma * lambda >= 0`` and the
coupling matrix enters with a minus sign (diffusive coupling damps the
coupled coordinate).  The master stability function ``F(sigma)`` is the
largest nontrivial Floquet exponent of that equation; the network
synchronises locally when every scaled nonzero eigenvalue lands where
``F < 0``.

Exponents are computed from the monodromy matrix (fundamental solution over
one period), and cross-checkable against a Benettin-style largest Lyapunov
exponent computed along a live trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .dynamics import LimitCycle, OscillatorModel, integrate_fixed_step
from .errors import IntegrationError, ParameterError, StabilityIntervalError

__all__ = [
    "MSFCurve",
    "StabilityInterval",
    "LyapunovEstimate",
    "floquet_exponents",
    "msf_sweep",
    "stability_interval",
    "max_lyapunov",
]

#: fundamental-matrix integration steps per period
DEFAULT_MONODROMY_STEPS = 5000


@dataclass(frozen=True)
class MSFCurve:
    """Sampled master stability function."""

    sigmas: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class StabilityInterval:
    """Upper end of the synchronisation region ``(0, sigma_max)``."""

    sigma_max: float


@dataclass(frozen=True)
class LyapunovEstimate:
    """Largest Lyapunov exponent with a convergence flag.

    ``converged`` is False when the running estimate still drifts by more
    than the convergence tolerance over the final quarter of the horizon.
    """

    exponent: float
    converged: bool


class _VariationalGrid:
    """Precomputed Jacobians of the node dynamics along one cycle period.

    Samples ``Df(phi(t))`` on a half-step grid (2*steps + 1 points) so a
    classical Runge-Kutta step has exact stage times, and integrates the
    fundamental matrix for a whole batch of sigma values at once.
    """

    def __init__(self, model: OscillatorModel, cycle: LimitCycle, steps: int):
        self.model = model
        self.period = cycle.period
        self.steps = steps
        states = cycle.states.copy()
        states[-1] = states[0]  # enforce exact periodicity for the spline
        spline = CubicSpline(cycle.times, states, bc_type="periodic", axis=0)
        tau = np.linspace(0.0, cycle.period, 2 * steps + 1)
        pts = spline(tau)
        self.jacs = np.array([model.jacobian(s) for s in pts])
        self.trace_integral = self._simpson_trace()

    def _simpson_trace(self) -> float:
        """Integral of tr Df over one period (Simpson on the half grid)."""
        tr = np.trace(self.jacs, axis1=1, axis2=2)
        h = self.period / self.steps
        return float(np.sum(tr[0:-1:2] + 4.0 * tr[1::2] + tr[2::2]) * h / 6.0)

    def monodromy(self, sigmas: np.ndarray) -> np.ndarray:
        """Fundamental matrices over one period, one per sigma value."""
        sig = np.atleast_1d(np.asarray(sigmas, dtype=float))
        n = self.model.dim
        coupling_term = sig[:, None, None] * self.model.coupling[None, :, :]
        fund = np.broadcast_to(np.eye(n), (len(sig), n, n)).copy()
        h = self.period / self.steps
        jacs = self.jacs
        for j in range(self.steps):
            a1 = jacs[2 * j] - coupling_term
            a2 = jacs[2 * j + 1] - coupling_term
            a3 = jacs[2 * j + 2] - coupling_term
            k1 = a1 @ fund
            k2 = a2 @ (fund + (0.5 * h) * k1)
            k3 = a2 @ (fund + (0.5 * h) * k2)
            k4 = a3 @ (fund + h * k3)
            fund += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        bad = ~np.all(np.isfinite(fund), axis=(1, 2))
        if np.any(bad):
            raise IntegrationError(
                f"fundamental matrix overflow at sigma={sig[bad][0]:g}", self.period
            )
        return fund

    def multipliers(self, sigmas: np.ndarray) -> np.ndarray:
        """Floquet multipliers (complex), one row per sigma."""
        return np.linalg.eigvals(self.monodromy(sigmas))


def floquet_exponents(
    model: OscillatorModel,
    cycle: LimitCycle,
    sigma: float,
    steps: int = DEFAULT_MONODROMY_STEPS,
) -> np.ndarray:
    """All Floquet exponents ``log|mu| / T`` at one sigma, descending.

    At ``sigma = 0`` the along-flow multiplier equals 1, so the largest
    exponent is 0 up to integration error.
    """
    grid = _VariationalGrid(model, cycle, steps)
    mu = grid.multipliers(np.array([sigma]))[0]
    return np.sort(np.log(np.abs(mu)) / cycle.period)[::-1]


def _nontrivial_max(mu: np.ndarray, sigma: float, period: float) -> float:
    """Largest nontrivial exponent from a multiplier set.

    At sigma = 0 the along-flow direction contributes an exact multiplier 1
    carrying no stability information, so the multiplier closest to 1 is
    discarded there.  For sigma > 0 the coupling term breaks that degeneracy
    and all multipliers count.
    """
    exps = np.log(np.abs(mu)) / period
    if sigma == 0.0:
        drop = int(np.argmin(np.abs(mu - 1.0)))
        exps = np.delete(exps, drop)
    return float(np.max(exps))


def msf_sweep(
    model: OscillatorModel,
    cycle: LimitCycle,
    sigma_start: float = 0.0,
    sigma_end: float = 15.0,
    step: float = 0.2,
    steps: int = DEFAULT_MONODROMY_STEPS,
) -> MSFCurve:
    """Master stability function on a uniform sigma grid (inclusive ends)."""
    if step <= 0:
        raise ParameterError(f"step must be positive, got {step}")
    count = int(round((sigma_end - sigma_start) / step))
    sigmas = sigma_start + step * np.arange(count + 1)
    grid = _VariationalGrid(model, cycle, steps)
    mus = grid.multipliers(sigmas)
    values = np.array(
        [_nontrivial_max(mu, s, cycle.period) for mu, s in zip(mus, sigmas)]
    )
    return MSFCurve(sigmas=sigmas, values=values)


def stability_interval(
    model: OscillatorModel,
    cycle: LimitCycle,
    coarse_step: float = 0.2,
    refine_tol: float = 1e-3,
    sigma_cap: float = 15.0,
    steps: int = DEFAULT_MONODROMY_STEPS,
) -> StabilityInterval:
    """Upper synchronisation threshold: the sign change of ``F``.

    Sweeps ``F`` on ``coarse_step`` spacing from ``coarse_step`` to
    ``sigma_cap`` (the trivial mode at 0 is excluded a priori), requires a
    single negative-to-positive sign change, and bisects the bracketing
    interval down to ``refine_tol``.

    Raises
    ------
    StabilityIntervalError
        If the sweep never changes sign ("no finite sigma_max in range") or
        changes sign more than once (the single-interval assumption fails).
    """
    grid = _VariationalGrid(model, cycle, steps)
    period = cycle.period
    sigmas = np.arange(coarse_step, sigma_cap + 0.5 * coarse_step, coarse_step)
    mus = grid.multipliers(sigmas)
    values = np.array([_nontrivial_max(mu, s, period) for mu, s in zip(mus, sigmas)])

    signs = np.sign(values)
    flips = np.where(np.diff(signs) != 0)[0]
    if len(flips) == 0:
        raise StabilityIntervalError(
            f"no finite sigma_max in (0, {sigma_cap}]: exponent never changes sign"
        )
    if len(flips) > 1:
        raise StabilityIntervalError(
            "multiple sign changes in the sweep; stability region is not a "
            "single interval"
        )
    i = flips[0]
    if not (values[i] < 0.0 < values[i + 1]):
        raise StabilityIntervalError(
            "exponent crosses from positive to negative; no interval of the "
            "form (0, sigma_max)"
        )
    lo, hi = sigmas[i], sigmas[i + 1]
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        val = _nontrivial_max(grid.multipliers(np.array([mid]))[0], mid, period)
        if val < 0.0:
            lo = mid
        else:
            hi = mid
    return StabilityInterval(sigma_max=0.5 * (lo + hi))


def max_lyapunov(
    model: OscillatorModel,
    sigma: float,
    horizon: float = 2000.0,
    dt: float = 0.01,
    renorm_interval: float = 1.0,
    transient: float = 200.0,
    initial_state: np.ndarray | None = None,
    conv_tol: float = 0.02,
) -> LyapunovEstimate:
    """Largest Lyapunov exponent of the sigma-mode equation, by Benettin
    renormalisation along a live trajectory of the node dynamics.

    A unit perturbation is propagated through
    ``v' = [Df(x(t)) - sigma * C] v`` while ``x`` follows the nonlinear
    field; its norm is logged and reset every ``renorm_interval``.  Growth
    accumulated before ``transient`` is discarded.  The result carries a
    convergence flag comparing the final-quarter estimate with the full one.
    """
    if horizon <= transient:
        raise ParameterError("horizon must exceed the transient")
    n = model.dim
    x = (
        np.asarray(initial_state, dtype=float)
        if initial_state is not None
        else np.full(n, 0.1)
    )
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    coupling = sigma * model.coupling

    def augmented(w):
        state, vec = w[:n], w[n:]
        jac = model.jacobian(state) - coupling
        return np.concatenate([model.vector_field(state), jac @ vec])

    blocks = int(round(horizon / renorm_interval))
    logs = np.empty(blocks)
    w = np.concatenate([x, v])
    for b in range(blocks):
        _, traj = integrate_fixed_step(augmented, w, renorm_interval, dt)
        w = traj[-1]
        growth = np.linalg.norm(w[n:])
        logs[b] = np.log(growth)
        w[n:] /= growth

    times = renorm_interval * (np.arange(blocks) + 1)
    keep = times > transient
    kept = logs[keep]
    span = horizon - transient
    exponent = float(kept.sum() / span)
    tail = kept[3 * len(kept) // 4:]
    tail_rate = float(tail.sum() / (len(tail) * renorm_interval))
    converged = abs(tail_rate - exponent) <= conv_tol
    return LyapunovEstimate(exponent=exponent, converged=converged)

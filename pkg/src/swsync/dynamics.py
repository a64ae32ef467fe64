"""Oscillator models, fixed-step integration, and limit-cycle location.

The built-in node dynamics is the Rossler oscillator

``x' = -(y + z)``, ``y' = x + a y``, ``z' = b + z (x - c)``

coupled to neighbours through its first state only
(``coupling = diag(1, 0, 0)``).  At ``a = b = 0.2, c = 2.5`` the isolated
oscillator has a strongly attracting periodic orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import IntegrationError, LimitCycleError, ParameterError

__all__ = [
    "OscillatorModel",
    "LimitCycle",
    "rossler_field",
    "rossler_jacobian",
    "rossler_model",
    "ROSSLER_ANCHOR_GUESS",
    "integrate_fixed_step",
    "find_limit_cycle",
]

#: a point on the Rossler periodic orbit at the default parameters, used as
#: the stock initial guess for cycle finding and as the perturbation anchor
ROSSLER_ANCHOR_GUESS = np.array([3.5119, -3.5332, 0.2006])


@dataclass(frozen=True)
class OscillatorModel:
    """Node dynamics bundle: vector field, Jacobian, and coupling matrix.

    ``vector_field`` must broadcast over leading axes (it receives either a
    single state of shape ``(dim,)`` or a stack ``(N, dim)``);
    ``jacobian`` takes a single state and returns ``(dim, dim)``.
    """

    dim: int
    vector_field: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    coupling: np.ndarray
    params: dict = field(default_factory=dict)


def rossler_field(state: np.ndarray, a: float, b: float, c: float) -> np.ndarray:
    """Rossler vector field; broadcasts over any leading axes."""
    state = np.asarray(state, dtype=float)
    x, y, z = state[..., 0], state[..., 1], state[..., 2]
    return np.stack([-(y + z), x + a * y, b + z * (x - c)], axis=-1)


def rossler_jacobian(state: np.ndarray, a: float, c: float) -> np.ndarray:
    """Analytic Jacobian of the Rossler field at a single state."""
    x, z = float(state[0]), float(state[2])
    return np.array(
        [
            [0.0, -1.0, -1.0],
            [1.0, a, 0.0],
            [z, 0.0, x - c],
        ]
    )


def rossler_model(a: float = 0.2, b: float = 0.2, c: float = 2.5) -> OscillatorModel:
    """Rossler oscillator coupled through its first state."""
    return OscillatorModel(
        dim=3,
        vector_field=lambda s: rossler_field(s, a, b, c),
        jacobian=lambda s: rossler_jacobian(s, a, c),
        coupling=np.diag([1.0, 0.0, 0.0]),
        params={"a": a, "b": b, "c": c},
    )


def integrate_fixed_step(
    field_fn: Callable[[np.ndarray], np.ndarray],
    initial_state: np.ndarray,
    t_end: float,
    dt: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Classical fourth-order Runge-Kutta with a fixed step.

    The step count is ``round(t_end / dt)`` and the actual step is
    ``t_end / steps``, so the final sample lands exactly on ``t_end``.
    Returns ``(times, states)`` with one row per step including the start.

    Raises
    ------
    IntegrationError
        If a non-finite state is produced (blow-up), reporting the time.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    if t_end <= 0:
        raise ParameterError(f"t_end must be positive, got {t_end}")
    y = np.asarray(initial_state, dtype=float)
    steps = max(1, int(round(t_end / dt)))
    h = t_end / steps
    out = np.empty((steps + 1,) + y.shape)
    out[0] = y
    for i in range(steps):
        k1 = field_fn(y)
        k2 = field_fn(y + 0.5 * h * k1)
        k3 = field_fn(y + 0.5 * h * k2)
        k4 = field_fn(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationError("state became non-finite", (i + 1) * h)
        out[i + 1] = y
    times = np.linspace(0.0, steps * h, steps + 1)
    return times, out


@dataclass(frozen=True)
class LimitCycle:
    """One period of a periodic orbit on a uniform time grid.

    ``states[0]`` is the anchor; ``states[-1]`` returns to it within the
    closure tolerance used during detection.
    """

    period: float
    times: np.ndarray
    states: np.ndarray
    anchor: np.ndarray

    @property
    def closure_error(self) -> float:
        return float(np.linalg.norm(self.states[-1] - self.states[0]))


def _poincare_returns(times, states, anchor, normal, count):
    """Interpolated times of positive-direction crossings of the section.

    The trajectory starts exactly on the section (g[0] == 0), which the
    strict ``g < 0`` test on the left sample already excludes.
    """
    g = (states - anchor) @ normal
    hits = np.where((g[:-1] < 0.0) & (g[1:] >= 0.0))[0][:count]
    if len(hits) == 0:
        return np.empty(0)
    frac = g[hits] / (g[hits] - g[hits + 1])
    return times[hits] + (times[hits + 1] - times[hits]) * frac


def find_limit_cycle(
    model: OscillatorModel,
    initial_guess: np.ndarray,
    settle_time: float = 500.0,
    tol: float = 1e-6,
    dt: float = 1e-3,
    returns: int = 10,
    max_horizon: float = 400.0,
) -> LimitCycle:
    """Locate an attracting periodic orbit and its period.

    Integrates past the transient, then takes a Poincare section through the
    settled state with normal along the flow.  The period is the mean
    spacing of ``returns`` same-direction crossings (each refined by linear
    interpolation), then polished by a couple of Newton steps on the return
    time.  The returned cycle is resampled on a uniform grid of spacing
    about ``dt``.

    Raises
    ------
    LimitCycleError
        If no section return occurs within ``max_horizon``, or the return
        spacings are inconsistent (the attractor is not a simple periodic
        orbit; a Lyapunov-exponent estimate is the appropriate tool there),
        or the orbit fails the closure tolerance.
    """
    guess = np.asarray(initial_guess, dtype=float)
    settle_dt = max(dt, 0.01)
    _, settle = integrate_fixed_step(model.vector_field, guess, settle_time, settle_dt)
    anchor = settle[-1]

    flow = model.vector_field(anchor)
    speed = np.linalg.norm(flow)
    if speed == 0.0:
        raise LimitCycleError("settled on an equilibrium; no periodic orbit")
    normal = flow / speed

    # accumulate section returns in chunks
    crossings = []
    state = anchor
    elapsed = 0.0
    chunk = 50.0
    while len(crossings) < returns + 1 and elapsed < max_horizon:
        times, traj = integrate_fixed_step(model.vector_field, state, chunk, dt)
        tc = _poincare_returns(times, traj, anchor, normal, returns + 1 - len(crossings))
        crossings.extend((elapsed + tc).tolist())
        state = traj[-1]
        elapsed += chunk
    if len(crossings) == 0:
        raise LimitCycleError(f"no section crossing within horizon {max_horizon}")
    if len(crossings) < 2:
        raise LimitCycleError("fewer than two section returns; cannot estimate period")

    spacings = np.diff(crossings)
    if spacings.size and (spacings.max() - spacings.min()) > 0.05 * spacings.mean():
        raise LimitCycleError(
            "return spacings vary by more than 5%; attractor does not look "
            "periodic (consider a Lyapunov-exponent estimate instead)"
        )
    # the n-th return sits near n*T, so the last crossing gives the tightest
    # single estimate of the period
    period = crossings[-1] / len(crossings)

    # Newton polish: g(t) = normal . (phi(t) - anchor) has a root at the period
    for _ in range(2):
        steps = max(1, int(round(period / dt)))
        _, traj = integrate_fixed_step(model.vector_field, anchor, period, period / steps)
        end = traj[-1]
        g = (end - anchor) @ normal
        dg = model.vector_field(end) @ normal
        if dg == 0.0:
            break
        period -= g / dg

    steps = max(2, int(round(period / dt)))
    times, states = integrate_fixed_step(model.vector_field, anchor, period, period / steps)
    closure = float(np.linalg.norm(states[-1] - states[0]))
    if closure > tol:
        raise LimitCycleError(
            f"orbit closure {closure:.3e} exceeds tolerance {tol:.3e}"
        )
    return LimitCycle(period=float(period), times=times, states=states, anchor=anchor)

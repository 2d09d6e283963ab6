"""Splitting scheme for the multiphase Allen-Cahn system with mobilities.

One time step has two parts:

1. Decoupled semi-implicit Allen-Cahn solves, one per phase, with weight
   a_k = dt m_k^* sigma_k:
       (I - a_k (Laplacian - alpha/eps^2)) u_k^{n+1/2}
           = u_k^n - (a_k/eps^2) (W'(u_k^n) - alpha u_k^n)
2. Explicit regularized projection onto sum_k u_k = 1, with one
   multiplier per harmonic component:
       abar_i = (u_i^{n+1/2} - u_i^n) / (dt max(m_i^*, beta))
       lam^p  = -sum_i m_i^p abar_i / sum_i m_i^p (sqrt(2W(u_i^{n+1/2})) + beta)
       u_k^{n+1} = u_k^{n+1/2} + dt (sum_p m_k^p lam^p) (sqrt(2W(u_k^{n+1/2})) + beta)

Phases with m_k^* = 0 are left untouched by both parts.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from src.models.errors import DimensionMismatchError, NonFiniteFieldError
from src.models.mobility import HarmonicDecomposition
from src.models.phase_state import PhaseState
from src.models.solver_params import SolverParams
from src.models.tension import TensionSet
from src.services import spectral_service
from src.services.potential_service import sqrt_2w, w_prime

logger = logging.getLogger(__name__)

HookCallback = Callable[[int, PhaseState], None]


@dataclass(frozen=True)
class StepHook:
    """Read-only callback fired during `evolve`.

    Fires on the initial state, every `every` steps (when every > 0) and
    on the final state, at most once per step.

    Attributes:
        every: Interval in steps
        callback: Called with (step_index, state)
    """

    every: int
    callback: HookCallback

    def due(self, steps_taken: int, final: bool) -> bool:
        if steps_taken == 0 or final:
            return True
        return self.every > 0 and steps_taken % self.every == 0


class Stepper:
    """Applies the splitting scheme with cached spectral operators.

    Attributes:
        grid: Periodic grid
        tensions: Additive surface tensions (only needed by step1)
        decomposition: Harmonic decomposition of the mobilities
        params: Solver parameters
    """

    def __init__(self, grid, tensions: Optional[TensionSet],
                 decomposition: HarmonicDecomposition, params: SolverParams):
        if tensions is not None and tensions.n_phases != decomposition.n_phases:
            raise DimensionMismatchError(
                f"Tensions have {tensions.n_phases} phases, decomposition has "
                f"{decomposition.n_phases}"
            )
        self.grid = grid
        self.tensions = tensions
        self.decomposition = decomposition
        self.params = params
        self.n_phases = decomposition.n_phases

        m_star = np.asarray(decomposition.m_star, dtype=float)
        self.frozen = m_star == 0.0
        self.projection_scale = params.dt * np.maximum(m_star, params.beta)
        coefficients = decomposition.coefficient_matrix()
        self.components = coefficients[np.any(coefficients > 0.0, axis=1)]

        self.weights = None
        self._denominators = []
        if tensions is not None:
            self.weights = params.dt * m_star * np.asarray(tensions.sigma_phase, dtype=float)
            shift = params.stiffness
            self._denominators = [
                spectral_service.helmholtz_denominator(grid, a, shift) if a > 0.0 else None
                for a in self.weights
            ]

    def _check(self, state: PhaseState) -> None:
        if state.n_phases != self.n_phases:
            raise DimensionMismatchError(
                f"State has {state.n_phases} phases, solver expects {self.n_phases}"
            )
        if state.grid != self.grid:
            raise DimensionMismatchError("State grid differs from the solver grid")

    def step1(self, state: PhaseState) -> PhaseState:
        """Decoupled semi-implicit Allen-Cahn solves; time is not advanced."""
        if self.weights is None:
            raise ValueError("Surface tensions are required for the Allen-Cahn solves")
        self._check(state)
        eps2 = self.params.epsilon ** 2
        alpha = self.params.alpha
        half = np.empty_like(state.fields)
        for k in range(self.n_phases):
            u = state.fields[k]
            a = self.weights[k]
            if a == 0.0:
                half[k] = u
                continue
            rhs = u - (a / eps2) * (w_prime(u) - alpha * u)
            coeffs = spectral_service.rfftn(rhs) / self._denominators[k]
            half[k] = spectral_service.irfftn(coeffs, self.grid.sizes)
        return state.with_fields(half, state.time, state.step)

    def step2(self, state_half: PhaseState, state_prev: PhaseState) -> PhaseState:
        """Regularized explicit projection onto the partition constraint."""
        self._check(state_half)
        self._check(state_prev)
        dt = self.params.dt
        beta = self.params.beta
        expand = (slice(None),) + (None,) * self.grid.dim

        half = state_half.fields
        abar = (half - state_prev.fields) / self.projection_scale[expand]
        weight = sqrt_2w(half) + beta
        lam = np.zeros_like(half)
        for coeffs in self.components:
            numerator = np.tensordot(coeffs, abar, axes=1)
            denominator = np.tensordot(coeffs, weight, axes=1)
            lam_p = -numerator / denominator
            lam += coeffs[expand] * lam_p[None]

        out = half + dt * lam * weight
        out[self.frozen] = half[self.frozen]
        return state_half.with_fields(out, state_half.time, state_half.step)

    def step(self, state: PhaseState) -> PhaseState:
        """Both parts of the scheme; advances time by dt."""
        projected = self.step2(self.step1(state), state)
        return projected.with_fields(projected.fields, state.time + self.params.dt,
                                     state.step + 1)


def step1_decoupled(state: PhaseState, tensions: TensionSet, dec: HarmonicDecomposition,
                    p: SolverParams) -> PhaseState:
    """Decoupled semi-implicit Allen-Cahn solves (first half of a step).

    Args:
        state: Phase fields u^n
        tensions: Additive surface tensions
        dec: Mobility decomposition (provides m_star)
        p: Solver parameters

    Returns:
        Intermediate fields u^{n+1/2}; phases with m_star = 0 are unchanged
    """
    return Stepper(state.grid, tensions, dec, p).step1(state)


def step2_project(state_half: PhaseState, state_prev: PhaseState,
                  dec: HarmonicDecomposition, p: SolverParams) -> PhaseState:
    """Projection onto the partition constraint (second half of a step).

    Args:
        state_half: Intermediate fields u^{n+1/2}
        state_prev: Fields u^n at the start of the step
        dec: Mobility decomposition
        p: Solver parameters

    Returns:
        Projected fields with sum_k u_k^{n+1} = sum_k u_k^n pointwise
    """
    return Stepper(state_half.grid, None, dec, p).step2(state_half, state_prev)


def step(state: PhaseState, tensions: TensionSet, dec: HarmonicDecomposition,
         p: SolverParams) -> PhaseState:
    """One full time step of the splitting scheme."""
    return Stepper(state.grid, tensions, dec, p).step(state)


def first_non_finite_phase(state: PhaseState) -> Optional[int]:
    """Index of the first phase holding NaN or inf, or None."""
    finite = np.isfinite(state.fields.reshape(state.n_phases, -1)).all(axis=1)
    bad = np.flatnonzero(~finite)
    return int(bad[0]) if bad.size else None


def evolve(state: PhaseState, tensions: TensionSet, dec: HarmonicDecomposition,
           p: SolverParams, hooks: Sequence[StepHook] = ()) -> PhaseState:
    """Apply `step` p.n_steps times, firing hooks along the way.

    Args:
        state: Initial phase fields
        tensions: Additive surface tensions
        dec: Mobility decomposition
        p: Solver parameters
        hooks: Read-only callbacks (snapshots, diagnostics)

    Returns:
        Final state (the input itself when n_steps = 0)

    Raises:
        NonFiniteFieldError: If a field becomes NaN or infinite
    """
    stepper = Stepper(state.grid, tensions, dec, p)
    logger.info("Evolving %d phases for %d steps (eps=%g, dt=%g, alpha=%g, P=%d)",
                state.n_phases, p.n_steps, p.epsilon, p.dt, p.alpha, dec.size)

    current = state
    _fire(hooks, current, 0, final=p.n_steps == 0)
    report_every = max(1, p.n_steps // 10)
    for n in range(1, p.n_steps + 1):
        current = stepper.step(current)
        bad = first_non_finite_phase(current)
        if bad is not None:
            logger.error("Non-finite values in phase %d at step %d", bad, current.step)
            raise NonFiniteFieldError(step=current.step, phase=bad)
        _fire(hooks, current, n, final=n == p.n_steps)
        if n % report_every == 0:
            logger.debug("Step %d/%d, t=%g", n, p.n_steps, current.time)
    return current


def _fire(hooks: Sequence[StepHook], state: PhaseState, steps_taken: int, final: bool) -> None:
    for hook in hooks:
        if hook.due(steps_taken, final):
            hook.callback(state.step, state)

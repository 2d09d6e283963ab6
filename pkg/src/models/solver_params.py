"""Solver parameter model.

Holds the numerical parameters of the splitting scheme: interface width
epsilon, time step dt, stabilization alpha, regularization beta, step
count and the choice of mobility decomposition.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

MACHINE_EPSILON = float(np.finfo(float).eps)


class DecompositionMode(str, Enum):
    """How the mobility matrix is split into harmonic components."""

    CANONICAL = 'canonical'
    SPARSE = 'sparse'
    EXPLICIT = 'explicit'


@dataclass(frozen=True)
class SolverParams:
    """Numerical parameters of one run.

    Attributes:
        epsilon: Interface width parameter (> 0)
        dt: Time step (> 0)
        alpha: Stabilization parameter (>= 0)
        beta: Regularization of the projection step (> 0)
        n_steps: Number of time steps (>= 0)
        decomposition: Decomposition mode
        components: Coefficient vectors for the explicit mode
    """

    epsilon: float
    dt: float
    alpha: float = 0.0
    beta: float = MACHINE_EPSILON
    n_steps: int = 0
    decomposition: DecompositionMode = DecompositionMode.CANONICAL
    components: Optional[Tuple[Tuple[float, ...], ...]] = field(default=None)

    def __post_init__(self) -> None:
        if not (self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.alpha >= 0.0):
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if not (self.beta > 0.0):
            raise ValueError(f"beta must be positive, got {self.beta}")
        if self.n_steps < 0:
            raise ValueError(f"n_steps must be nonnegative, got {self.n_steps}")
        object.__setattr__(self, 'decomposition', DecompositionMode(self.decomposition))

    @property
    def t_end(self) -> float:
        return self.n_steps * self.dt

    @property
    def stiffness(self) -> float:
        """alpha / epsilon^2, the shift of the implicit operator."""
        return self.alpha / self.epsilon ** 2

    def with_steps(self, n_steps: int) -> 'SolverParams':
        return replace(self, n_steps=n_steps)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'epsilon': self.epsilon,
            'dt': self.dt,
            'alpha': self.alpha,
            'beta': self.beta,
            'n_steps': self.n_steps,
            'decomposition': self.decomposition.value,
        }
